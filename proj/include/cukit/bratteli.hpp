#pragma once

#include "cukit/limit.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cukit {

/// Stage-wise block sizes and multiplicity matrices of an AF algebra.
/// mults[i] has shape len(dims[i+1]) x len(dims[i]); a stationary diagram
/// repeats its last (square) matrix forever.
struct BratteliDiagram {
  std::vector<std::vector<long long>> dims;
  std::vector<MatrixCuMap> mults;
  bool stationary = false;
  bool unital = false;
};

/// Accepts {"dims": [[int,...],...], "mults": [[[int,...],...],...],
/// "stationary": bool, "unital": bool}; the last two are optional.
BratteliDiagram parse_bratteli(const nlohmann::json& doc);
BratteliDiagram parse_bratteli(const std::string& text);
BratteliDiagram load_bratteli(const std::string& path);

DiagramPtr to_cu_diagram(const BratteliDiagram& b);

Tri af_compare(const Thread& a, const Thread& b, std::size_t horizon = kDefaultHorizon);

struct CompactApproximation {
  /// Increasing compact classes below the input.
  std::vector<Thread> classes;
  /// Equivalence of their supremum with the input, at the horizon.
  Tri certified;
};

/// `count` compact classes embed(k, r_k) along the rapid representative;
/// their full sequence is certified to have the input as supremum.
/// Throws when a certificate refutes the construction.
CompactApproximation compacts_below(const Thread& a, std::size_t count,
                                    std::size_t horizon = kDefaultHorizon);

using ThreadPair = std::pair<Thread, Thread>;

/// x << y iff some compact z has x <= z <= y, with z searched among
/// finite-vector classes up to the horizon. Unknown verdicts on either
/// side are counted in the result's `unknown` field.
LawResult compact_interpolation_check(const std::vector<ThreadPair>& pairs,
                                      std::size_t horizon = kDefaultHorizon);

/// On compact classes: af_compare = LE iff some stage j >= prefix_end(a) has
/// a_j <= b_j coordinatewise, for j up to the horizon.
LawResult order_equals_inclusion_check(const std::vector<ThreadPair>& pairs,
                                       std::size_t horizon = kDefaultHorizon);

/// Trace under the normalized left Perron eigenvector. Throws for
/// non-stationary or non-primitive diagrams.
TraceValue perron_trace(const Thread& a);

}  // namespace cukit
