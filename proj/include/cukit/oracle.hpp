#pragma once

#include "cukit/cu_core.hpp"
#include "cukit/instances.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <string>
#include <vector>

namespace cukit::oracle {

inline constexpr double kRankTol = 1e-8;
inline constexpr double kResidualTol = 1e-6;
inline constexpr double kPsdTol = -1e-10;
inline constexpr double kHermitianTol = 1e-12;

using Matrix = Eigen::MatrixXcd;

struct FiniteDimAlgebra {
  std::vector<int> block_sizes;

  explicit FiniteDimAlgebra(std::vector<int> sizes);
  friend bool operator==(const FiniteDimAlgebra&, const FiniteDimAlgebra&) = default;
};

/// A positive element of ⊕_j M_{n_j}. Blocks are symmetrized on
/// construction and must be PSD within kPsdTol.
class PositiveElement {
 public:
  PositiveElement(const FiniteDimAlgebra& algebra, std::vector<Matrix> blocks);
  static PositiveElement zero(const FiniteDimAlgebra& algebra);

  const FiniteDimAlgebra& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t j) const { return blocks_[j]; }
  std::size_t block_count() const { return blocks_.size(); }

 private:
  FiniteDimAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

/// Ascending eigenvalues of every block.
std::vector<Eigen::VectorXd> spectrum(const PositiveElement& a);

/// (a - eps)_+ by functional calculus, blockwise.
PositiveElement eps_cut(const PositiveElement& a, double eps);

struct RankResult {
  std::vector<int> ranks;
  /// Some eigenvalue lies in (tol/10, tol*10).
  bool unstable = false;
};

RankResult rank_vector(const PositiveElement& a, double tol = kRankTol);
ExtNatVector to_ext_nat_vector(const std::vector<int>& ranks);

struct SubeqResult {
  bool holds = false;
  bool unstable = false;
};

/// Rank domination, blockwise.
SubeqResult cuntz_subeq(const PositiveElement& a, const PositiveElement& b, double tol = kRankTol);

struct Witness {
  std::vector<Matrix> c;
  /// max_j || c_j b_j c_j* - (a - eps)_+ ||, operator norm.
  double residual = 0;
};

/// c with c b c* = (a - eps)_+. Throws, naming the block, when
/// rank((a - eps)_+) exceeds rank(b) somewhere.
Witness witness_construct(const PositiveElement& a, const PositiveElement& b, double eps,
                          double tol = kRankTol);

/// Operator norm of a Hermitian matrix.
double hermitian_norm(const Matrix& m);

/// a ⊕ b realized in the algebra with every block size doubled.
PositiveElement direct_sum(const PositiveElement& a, const PositiveElement& b);

/// Complex Gaussian g, returns g g*; rank is min(size, requested rank).
Matrix random_psd_block(int size, int rank, Rng& rng);
PositiveElement random_positive(const FiniteDimAlgebra& algebra, Rng& rng, double truncate_probability = 0.5);
FiniteDimAlgebra random_algebra(Rng& rng, int max_blocks = 2, int max_size = 4);

nlohmann::ordered_json to_json(const PositiveElement& a);
/// {"block_sizes": [..], "blocks": [[[re, im], ...row-major], ...]}
PositiveElement positive_from_json(const nlohmann::json& j);

struct ProbeResult {
  int candidates = 0;
  /// Smallest residual seen among the candidates.
  double best_residual = 0;
};

/// Random search for c with c b c* close to (a - eps)_+, restricted to a
/// block where the residual is bounded below by the rank deficit.
ProbeResult falsification_probe(const PositiveElement& a, const PositiveElement& b, double eps,
                                int candidates, Rng& rng);

struct SelftestConfig {
  int cases = 500;
  std::uint64_t seed = 0;
  int probe_candidates = 10000;
};

/// Oracle invariants on random pairs: agreement with the abstract order,
/// witness soundness, the falsification probe, class addition, eps_cut
/// identities and monotonicity. Instability is counted as `unknown`.
LawReport oracle_selftest(const SelftestConfig& config);
/// Same checks on explicit pairs.
LawReport oracle_selftest(const std::vector<std::pair<PositiveElement, PositiveElement>>& pairs,
                          const SelftestConfig& config);

LawResult class_addition_check(int samples, std::uint64_t seed, double tol = kRankTol);

}  // namespace cukit::oracle
