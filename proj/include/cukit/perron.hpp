#pragma once

#include "cukit/ext_nat.hpp"
#include "cukit/instances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cukit {

bool is_primitive(const MatrixCuMap& m);

/// Left Perron eigenvector λ (λ M = ρ λ, normalized so λ_0 = 1) of a
/// primitive matrix. When ρ is an integer the vector is computed exactly;
/// otherwise it is a floating estimate carrying a relative error margin.
struct PerronFunctional {
  bool exact = false;
  Natural root;                      // valid when exact
  std::vector<Rational> weights;     // valid when exact
  long double approx_root = 0;
  std::vector<long double> approx_weights;
  long double relative_margin = 1e-9L;
};

/// nullopt unless `m` is square and primitive.
std::optional<PerronFunctional> perron_functional(const MatrixCuMap& m);

/// A trace value λ(v) / ρ^stage: exact rational, an enclosing interval, or ∞.
struct TraceValue {
  enum class Kind { exact, interval, infinite };
  Kind kind = Kind::exact;
  Rational value = 0;
  long double lo = 0;
  long double hi = 0;

  static TraceValue infinite() { return {Kind::infinite}; }
  bool is_infinite() const { return kind == Kind::infinite; }
};

TraceValue evaluate_trace(const PerronFunctional& f, const ExtNatVector& v, std::size_t stage);

/// True only when a > b holds for every value consistent with the
/// enclosures; never true when both are infinite.
bool certainly_greater(const TraceValue& a, const TraceValue& b);
/// True only when a <= b for every value consistent with the enclosures.
bool certainly_leq(const TraceValue& a, const TraceValue& b);

std::string to_string(const TraceValue& t);

}  // namespace cukit
