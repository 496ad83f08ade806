#pragma once

#include "cukit/cu_core.hpp"
#include "cukit/ext_nat.hpp"

#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cukit {

/// An element of Cu(M_{n_1} ⊕ ... ⊕ M_{n_k}): one ExtNat rank per block.
class ExtNatVector {
 public:
  ExtNatVector() = default;
  explicit ExtNatVector(std::size_t k) : coords_(k) {}
  ExtNatVector(std::initializer_list<ExtNat> coords) : coords_(coords) {}
  explicit ExtNatVector(std::vector<ExtNat> coords) : coords_(std::move(coords)) {}

  std::size_t size() const { return coords_.size(); }
  const ExtNat& operator[](std::size_t i) const { return coords_[i]; }
  ExtNat& operator[](std::size_t i) { return coords_[i]; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool is_finite() const;
  bool is_zero() const;

  friend bool operator==(const ExtNatVector&, const ExtNatVector&) = default;

 private:
  std::vector<ExtNat> coords_;
};

ExtNatVector operator+(const ExtNatVector& a, const ExtNatVector& b);
bool leq(const ExtNatVector& a, const ExtNatVector& b);
bool way_below(const ExtNatVector& a, const ExtNatVector& b);

/// "1,inf,0"
std::string to_string(const ExtNatVector& v);
ExtNatVector parse_ext_nat_vector(std::string_view text);

/// Coordinatewise rapid basis: finite coordinates held constant, infinite
/// coordinates enumerated 1, 2, 3, ...
ExtNatVector basis_term(const ExtNatVector& v, const Natural& n);

/// Nonnegative integer matrix of shape k_out × k_in acting by saturating
/// multiplication with 0·∞ = 0.
class MatrixCuMap {
 public:
  MatrixCuMap() = default;
  explicit MatrixCuMap(std::vector<std::vector<Natural>> rows);
  MatrixCuMap(std::initializer_list<std::initializer_list<long long>> rows);

  static MatrixCuMap identity(std::size_t k);
  static MatrixCuMap zero(std::size_t k_out, std::size_t k_in);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const Natural& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  const std::vector<std::vector<Natural>>& entries() const { return rows_; }
  bool is_square() const { return rows() == cols(); }

  friend bool operator==(const MatrixCuMap&, const MatrixCuMap&) = default;

 private:
  std::vector<std::vector<Natural>> rows_;
  std::size_t cols_ = 0;
};

ExtNatVector apply_map(const MatrixCuMap& m, const ExtNatVector& v);
/// outer ∘ inner, i.e. the matrix product outer · inner.
MatrixCuMap compose(const MatrixCuMap& outer, const MatrixCuMap& inner);
std::string to_string(const MatrixCuMap& m);

CuInstance<ExtNat> extnat_instance();
CuInstance<ExtNatVector> product_instance(std::size_t k);
CuInstance<ExtRational> rational_instance();

struct SamplerOptions {
  long long max_value = 40;
  double inf_probability = 0.15;
};

Sampler<ExtNat> extnat_sampler(SamplerOptions opts = {});
Sampler<ExtNatVector> vector_sampler(std::size_t k, SamplerOptions opts = {});
/// Finite values p/q with q <= 8 and p/q <= max_value, plus ∞.
Sampler<ExtRational> rational_sampler(SamplerOptions opts = {});

using VectorMap = std::function<ExtNatVector(const ExtNatVector&)>;

/// Morphism laws for the map realized by `m`: zero, additivity,
/// monotonicity, way-below and sup preservation.
LawReport check_morphism(const MatrixCuMap& m, const Sampler<ExtNatVector>& sampler,
                         const LawConfig& config = {});
/// Same laws for an arbitrary function claiming to realize `shape`; the
/// image certificates of sampled sequences are derived from the
/// sparsity pattern of `shape`.
LawReport check_morphism(const MatrixCuMap& shape, const VectorMap& f,
                         const Sampler<ExtNatVector>& sampler, const LawConfig& config = {});

}  // namespace cukit
