#pragma once

#include "cukit/ext_nat.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cukit {

using Rng = std::mt19937_64;

/// An increasing sequence n ↦ term(n), n = 1, 2, ..., together with the
/// finite certificate its constructor vouches for. Supremum computation
/// is only defined when at least one certificate is present:
///   - stabilizes_at = m: term(n) == term(m) for n >= m (on every
///     coordinate not listed in `unbounded`);
///   - unbounded: coordinates (index 0 for scalar instances) along which
///     the sequence grows without bound;
///   - limit: a closed-form supremum.
template <class E>
struct IncreasingSequence {
  std::function<E(std::size_t)> term;
  std::optional<std::size_t> stabilizes_at;
  std::vector<std::size_t> unbounded;
  std::optional<E> limit;

  E operator()(std::size_t n) const { return term(n); }

  bool has_certificate() const {
    return stabilizes_at.has_value() || !unbounded.empty() || limit.has_value();
  }
};

/// Value-level description of an object of the category Cu.
template <class E>
struct CuInstance {
  std::string name;
  E zero;
  std::function<E(const E&, const E&)> add;
  std::function<bool(const E&, const E&)> leq;
  std::function<bool(const E&, const E&)> way_below;
  std::function<E(const IncreasingSequence<E>&)> sup;
  /// A rapidly increasing sequence with supremum x.
  std::function<IncreasingSequence<E>(const E&)> basis;
  std::function<std::string(const E&)> encode;
};

template <class E>
using Sampler = std::function<E(Rng&)>;

/// Outcome of one law: pass/fail counts and the first counterexample.
struct LawResult {
  LawResult() = default;
  explicit LawResult(std::string name) : law(std::move(name)) {}

  std::string law;
  int cases = 0;
  int failures = 0;
  std::optional<std::string> first_counterexample;
  /// Only set by checks whose verdicts can be inconclusive.
  std::optional<int> unknown;

  void pass() { ++cases; }
  void fail(std::string counterexample);
  void inconclusive();
  void record(bool ok, const std::function<std::string()>& describe) {
    if (ok) {
      pass();
    } else {
      fail(describe());
    }
  }
  bool passed() const { return failures == 0; }
};

using LawReport = std::vector<LawResult>;

nlohmann::ordered_json to_json(const LawResult& r);
nlohmann::ordered_json to_json(const LawReport& report);
bool all_passed(const LawReport& report);
/// Throws if absent.
const LawResult& find_law(const LawReport& report, const std::string& law);

struct LawConfig {
  int cases = 1000;
  std::uint64_t seed = 0;
  /// Terms inspected on sequences without a stabilization index.
  std::size_t probe = 64;
};

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);
bool coin(Rng& rng, double p);

template <class E>
bool is_compact(const CuInstance<E>& inst, const E& x) {
  return inst.way_below(x, x);
}

// ---------------------------------------------------------------------------
// Sequence builders shared by the harnesses.

/// x, x + d1, x + d1 + d2, ... stabilizing after the last increment.
template <class E>
IncreasingSequence<E> partial_sums(const CuInstance<E>& inst, const E& x,
                                   const std::vector<E>& increments) {
  std::vector<E> partial{x};
  for (const auto& d : increments) partial.push_back(inst.add(partial.back(), d));
  IncreasingSequence<E> s;
  s.stabilizes_at = partial.size();
  s.term = [partial](std::size_t n) {
    return partial[std::min(n, partial.size()) - 1];
  };
  return s;
}

/// Termwise sum. The certificate is combined structurally; when either side
/// only declares a closed-form limit, the declared limit of the sum is the
/// sum of the suprema.
template <class E>
IncreasingSequence<E> add_sequences(const CuInstance<E>& inst, const IncreasingSequence<E>& s,
                                    const IncreasingSequence<E>& t) {
  IncreasingSequence<E> u;
  auto add = inst.add;
  u.term = [add, s, t](std::size_t n) { return add(s(n), t(n)); };
  if (s.limit || t.limit) {
    u.limit = inst.add(inst.sup(s), inst.sup(t));
    return u;
  }
  if (s.stabilizes_at && t.stabilizes_at) {
    u.stabilizes_at = std::max(*s.stabilizes_at, *t.stabilizes_at);
  } else if (s.stabilizes_at || t.stabilizes_at) {
    u.stabilizes_at = s.stabilizes_at ? s.stabilizes_at : t.stabilizes_at;
  }
  u.unbounded = s.unbounded;
  for (auto c : t.unbounded) {
    if (std::find(u.unbounded.begin(), u.unbounded.end(), c) == u.unbounded.end()) {
      u.unbounded.push_back(c);
    }
  }
  std::sort(u.unbounded.begin(), u.unbounded.end());
  return u;
}

/// Number of terms worth inspecting before the tail is known to repeat.
template <class E>
std::size_t probe_length(const IncreasingSequence<E>& s, std::size_t probe) {
  if (s.stabilizes_at && s.unbounded.empty() && !s.limit) return *s.stabilizes_at;
  return probe;
}

template <class E>
IncreasingSequence<E> random_sequence(const CuInstance<E>& inst, const Sampler<E>& sampler,
                                      Rng& rng, int depth = 0) {
  const std::size_t kind = uniform_index(rng, 0, depth == 0 ? 2 : 1);
  if (kind == 0) {
    const E x = sampler(rng);
    std::vector<E> incs;
    const std::size_t m = uniform_index(rng, 0, 3);
    for (std::size_t i = 0; i < m; ++i) incs.push_back(sampler(rng));
    return partial_sums(inst, x, incs);
  }
  if (kind == 1) return inst.basis(sampler(rng));
  auto s = random_sequence(inst, sampler, rng, depth + 1);
  auto t = random_sequence(inst, sampler, rng, depth + 1);
  return add_sequences(inst, s, t);
}

template <class E>
std::string describe_sequence(const CuInstance<E>& inst, const IncreasingSequence<E>& s,
                              std::size_t shown = 4) {
  std::string out = "(";
  for (std::size_t n = 1; n <= shown; ++n) {
    out += inst.encode(s(n));
    out += n < shown ? "; " : "; ...)";
  }
  return out;
}

// ---------------------------------------------------------------------------
// The law suite.

namespace detail {

template <class E>
void check_upper_and_least(const CuInstance<E>& inst, const IncreasingSequence<E>& s,
                           const E& claimed_sup, const E& competitor, std::size_t probe,
                           std::string& problem) {
  const std::size_t len = probe_length(s, probe);
  for (std::size_t n = 1; n <= len; ++n) {
    if (!inst.leq(s(n), claimed_sup)) {
      problem = "term " + std::to_string(n) + " = " + inst.encode(s(n)) + " exceeds sup " +
                inst.encode(claimed_sup);
      return;
    }
  }
  if (inst.leq(claimed_sup, competitor)) return;
  for (std::size_t n = 1; n <= len; ++n) {
    if (!inst.leq(s(n), competitor)) return;
  }
  problem = "competitor " + inst.encode(competitor) + " bounds all probed terms but not sup " +
            inst.encode(claimed_sup);
}

}  // namespace detail

/// Runs L1-L6 against `inst` on elements drawn from `sampler`.
///   L1 ordered abelian semigroup, zero least
///   L2 suprema of increasing sequences are least upper bounds
///   L3 basis(x) rapidly increasing with sup x; way_below sound
///   L4 sup(s + t) = sup s + sup t
///   L5 x1 << y1, x2 << y2 => x1 + x2 << y1 + y2
///   L6 x <= y << z => x << z and x << y <= z => x <= z
template <class E>
LawReport check_laws(const CuInstance<E>& inst, const Sampler<E>& sampler,
                     const LawConfig& config = {}) {
  Rng rng(config.seed);
  const auto enc = inst.encode;
  LawResult l1{"L1:ordered-semigroup"}, l2{"L2:sup"}, l3{"L3:basis"}, l4{"L4:sup-additivity"},
      l5{"L5:way-below-additivity"}, l6{"L6:interplay"};

  for (int c = 0; c < config.cases; ++c) {
    // L1
    {
      const E x = sampler(rng), y = sampler(rng), z = sampler(rng);
      const E y2 = inst.add(x, y);        // x <= x + y
      const E z2 = inst.add(y2, z);       // x + y <= x + y + z
      std::string problem;
      if (!(inst.add(inst.add(x, y), z) == inst.add(x, inst.add(y, z)))) problem = "associativity";
      else if (!(inst.add(x, y) == inst.add(y, x))) problem = "commutativity";
      else if (!(inst.add(inst.zero, x) == x)) problem = "zero identity";
      else if (!inst.leq(inst.zero, x)) problem = "zero least";
      else if (!inst.leq(x, x)) problem = "reflexivity";
      else if (inst.leq(x, y) && inst.leq(y, x) && !(x == y)) problem = "antisymmetry";
      else if (!inst.leq(x, y2) || !inst.leq(y2, z2) || !inst.leq(x, z2)) problem = "transitivity";
      else if (inst.leq(x, y) && !inst.leq(inst.add(x, z), inst.add(y, z))) problem = "order compatible with addition";
      else if (inst.leq(y, x) && !inst.leq(inst.add(y, z), inst.add(x, z))) problem = "order compatible with addition";
      l1.record(problem.empty(), [&] {
        return problem + " at x=" + enc(x) + ", y=" + enc(y) + ", z=" + enc(z);
      });
    }
    // L2
    {
      const auto s = random_sequence(inst, sampler, rng);
      const E sup = inst.sup(s);
      const std::size_t pick = uniform_index(rng, 0, 2);
      E competitor = pick == 0 ? sampler(rng)
                   : pick == 1 ? s(uniform_index(rng, 1, 6))
                               : sup;
      std::string problem;
      detail::check_upper_and_least(inst, s, sup, competitor, config.probe, problem);
      l2.record(problem.empty(), [&] { return describe_sequence(inst, s) + ": " + problem; });
    }
    // L3
    {
      const E x = sampler(rng);
      const auto b = inst.basis(x);
      std::string problem;
      if (!(inst.sup(b) == x)) problem = "sup of basis is " + enc(inst.sup(b));
      const std::size_t len = std::max<std::size_t>(probe_length(b, config.probe), 2);
      for (std::size_t n = 1; problem.empty() && n < len; ++n) {
        if (!inst.way_below(b(n), b(n + 1))) {
          problem = "basis term " + std::to_string(n) + " not way below its successor";
        }
      }
      if (problem.empty()) {
        // Soundness of way_below: x' << sup(s) forces some term of s above x'.
        const auto s = random_sequence(inst, sampler, rng);
        const E y = inst.sup(s);
        const std::size_t pick = uniform_index(rng, 0, 2);
        const E xp = pick == 0 ? y : pick == 1 ? sampler(rng) : inst.basis(y)(uniform_index(rng, 1, 8));
        if (inst.way_below(xp, y)) {
          bool reached = false;
          const std::size_t slen = probe_length(s, config.probe);
          for (std::size_t n = 1; n <= slen && !reached; ++n) reached = inst.leq(xp, s(n));
          if (!reached) {
            problem = enc(xp) + " << " + enc(y) + " claimed, refuted by " + describe_sequence(inst, s);
          }
        }
      }
      l3.record(problem.empty(), [&] { return "x=" + enc(x) + ": " + problem; });
    }
    // L4
    {
      const auto s = random_sequence(inst, sampler, rng, 1);
      const auto t = random_sequence(inst, sampler, rng, 1);
      const auto u = add_sequences(inst, s, t);
      const E expect = inst.add(inst.sup(s), inst.sup(t));
      const E got = inst.sup(u);
      std::string problem;
      if (!(got == expect)) {
        problem = "sup(s+t)=" + enc(got) + " but sup s + sup t=" + enc(expect);
      } else {
        detail::check_upper_and_least(inst, u, got, sampler(rng), config.probe, problem);
      }
      l4.record(problem.empty(), [&] {
        return describe_sequence(inst, s) + " + " + describe_sequence(inst, t) + ": " + problem;
      });
    }
    // L5
    {
      auto below = [&](E& x, E& y) {
        if (coin(rng, 0.5)) {
          y = sampler(rng);
          x = inst.basis(y)(uniform_index(rng, 1, 8));
        } else {
          x = sampler(rng);
          y = inst.add(x, sampler(rng));
        }
      };
      E x1, y1, x2, y2;
      below(x1, y1);
      below(x2, y2);
      const bool ok = !(inst.way_below(x1, y1) && inst.way_below(x2, y2)) ||
                      inst.way_below(inst.add(x1, x2), inst.add(y1, y2));
      l5.record(ok, [&] {
        return enc(x1) + " << " + enc(y1) + ", " + enc(x2) + " << " + enc(y2) + " but sums not";
      });
    }
    // L6
    {
      const E z = sampler(rng);
      const E y = inst.basis(z)(uniform_index(rng, 1, 8));
      const E x = coin(rng, 0.5) ? inst.basis(y)(uniform_index(rng, 1, 8)) : sampler(rng);
      std::string problem;
      if (inst.leq(x, y) && inst.way_below(y, z) && !inst.way_below(x, z)) {
        problem = enc(x) + " <= " + enc(y) + " << " + enc(z) + " but not " + enc(x) + " << " + enc(z);
      }
      const E q = sampler(rng);
      const E p = inst.basis(q)(uniform_index(rng, 1, 8));
      const E r = inst.add(q, sampler(rng));
      if (problem.empty() && inst.way_below(p, q) && inst.leq(q, r) && !inst.leq(p, r)) {
        problem = enc(p) + " << " + enc(q) + " <= " + enc(r) + " but not " + enc(p) + " <= " + enc(r);
      }
      l6.record(problem.empty(), [&] { return problem; });
    }
  }
  return {l1, l2, l3, l4, l5, l6};
}

}  // namespace cukit
