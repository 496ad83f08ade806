#pragma once

#include "cukit/cu_core.hpp"
#include "cukit/instances.hpp"
#include "cukit/perron.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cukit {

inline constexpr std::size_t kDefaultHorizon = 40;

/// A sequence S_1 -> S_2 -> ... of finite products of ExtNat joined by
/// multiplicity maps. Stages are numbered from 1. A stationary diagram
/// repeats its last stage and `tail` map forever; otherwise the diagram
/// ends at its last listed stage.
class CuDiagram {
 public:
  /// `maps` holds the connecting maps of the listed stages, stage j -> j+1.
  /// A stationary diagram lists one more map than it has prefix links: the
  /// square tail map applied from the last listed stage onward.
  CuDiagram(std::vector<std::size_t> dims, std::vector<MatrixCuMap> maps, bool stationary);

  bool stationary() const { return stationary_; }
  std::size_t listed_stages() const { return dims_.size(); }
  bool contains(std::size_t stage) const;
  /// Finite diagrams only; nullopt for stationary ones.
  std::optional<std::size_t> last_stage() const;
  /// First stage from which the tail map applies (stationary only).
  std::size_t tail_start() const { return dims_.size(); }

  std::size_t dim(std::size_t stage) const;
  /// The map stage -> stage + 1.
  const MatrixCuMap& map(std::size_t stage) const;
  const MatrixCuMap& tail_map() const;
  const std::optional<PerronFunctional>& perron() const { return perron_; }
  CuInstance<ExtNatVector> stage_instance(std::size_t stage) const;

  /// Clamps a probe horizon to the last stage of a finite diagram.
  std::size_t effective_horizon(std::size_t horizon) const;

  friend bool operator==(const CuDiagram& a, const CuDiagram& b) {
    return a.dims_ == b.dims_ && a.maps_ == b.maps_ && a.stationary_ == b.stationary_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<MatrixCuMap> maps_;
  bool stationary_ = false;
  std::optional<PerronFunctional> perron_;
};

using DiagramPtr = std::shared_ptr<const CuDiagram>;

/// An increasing sequence (s_1, s_2, ...) with s_j in S_j: zero before
/// `start`, the listed prefix from `start` on, and images of the last
/// listed entry afterwards. A single-entry prefix is an image thread.
class Thread {
 public:
  static Thread image(DiagramPtr d, std::size_t start, ExtNatVector seed);
  /// Validates dimensions and φ_j(s_j) <= s_{j+1}.
  static Thread explicit_prefix(DiagramPtr d, std::size_t start, std::vector<ExtNatVector> entries);
  static Thread zero(DiagramPtr d);

  const DiagramPtr& diagram() const { return diagram_; }
  std::size_t start() const { return start_; }
  const std::vector<ExtNatVector>& prefix() const { return prefix_; }
  std::size_t prefix_end() const { return start_ + prefix_.size() - 1; }
  bool is_image() const { return prefix_.size() == 1; }
  /// Every listed entry has finite coordinates (such a thread is compact).
  bool finite_entries() const;

  ExtNatVector entry(std::size_t stage) const;
  /// Entries at stages 1..horizon; element j-1 is stage j.
  std::vector<ExtNatVector> expand(std::size_t horizon) const;

  /// Threads built by an infinite construction cut off at a horizon agree
  /// with that construction only up to the horizon. When the construction
  /// is known to be equivalent to a finitely described thread, exact()
  /// points to it; certificates that look past the horizon use it.
  bool truncated() const { return truncated_; }
  const std::shared_ptr<const Thread>& exact() const { return exact_; }
  Thread as_truncated(std::shared_ptr<const Thread> exact) const;
  /// exact() if present, otherwise this thread.
  const Thread& exact_or_self() const { return exact_ ? *exact_ : *this; }
  /// False for truncated threads without an exact form.
  bool has_exact_tail() const { return !truncated_ || exact_ != nullptr; }

 private:
  Thread() = default;
  DiagramPtr diagram_;
  std::size_t start_ = 1;
  std::vector<ExtNatVector> prefix_;
  bool truncated_ = false;
  std::shared_ptr<const Thread> exact_;
};

/// λ(s_p) / ρ^p at a stage p past both the prefix and the start of the
/// tail; nullopt without a Perron functional or an exact tail.
std::optional<TraceValue> thread_trace(const Thread& t);

/// "@i:v" (image thread) or "@i:v1,v2,...|tail" (explicit prefix; the
/// comma-separated coordinates are split by the stage dimensions).
std::string encode_thread(const Thread& t);
Thread parse_thread(const DiagramPtr& d, std::string_view text);

enum class Verdict { le, not_le, unknown };

enum class Certificate {
  none,
  search,               // every probed test element found a majorant
  perron,               // Perron functional strictly separates the classes
  deficit,              // a test element's deficit provably persists
  order,                // way-below refuted because the order already fails
  no_compact_majorant,  // an ∞ coordinate survives in a closed block
};

/// Three-valued answer. For equivalence and way-below queries `le` reads
/// as "holds".
struct Tri {
  Verdict verdict = Verdict::unknown;
  std::size_t horizon = 0;
  Certificate certificate = Certificate::none;

  bool is_le() const { return verdict == Verdict::le; }
  bool is_not_le() const { return verdict == Verdict::not_le; }
  bool is_unknown() const { return verdict == Verdict::unknown; }
};

std::string to_string(Verdict v);
std::string to_string(Certificate c);

Thread embed(const DiagramPtr& d, std::size_t stage, const ExtNatVector& s);
Thread thread_add(const Thread& a, const Thread& b);

Tri thread_leq(const Thread& a, const Thread& b, std::size_t horizon = kDefaultHorizon);
Tri thread_equiv(const Thread& a, const Thread& b, std::size_t horizon = kDefaultHorizon);
/// Compact containment in the limit, decided through the rapid sequence
/// embed(i, r_i) of b and the refutation certificates.
Tri thread_way_below(const Thread& a, const Thread& b, std::size_t horizon = kDefaultHorizon);

/// A rapidly increasing thread equivalent to `a` up to the horizon,
/// obtained by the diagonal over subsequences of per-stage bases.
Thread rapid_representative(const Thread& a, std::size_t horizon = kDefaultHorizon);

/// Increasing sequence of threads with a finite certificate.
struct ThreadSequence {
  std::function<Thread(std::size_t)> term;
  std::optional<std::size_t> stabilizes_at;
  /// Closed-form supremum, when known to the constructor.
  std::optional<Thread> limit;
};

struct LimitSup {
  Thread sup;
  /// Every probed term <= sup (and sup ≡ limit when one is declared).
  Tri verified;
};

/// Throws if a probed consecutive pair is not certified increasing.
LimitSup limit_sup(const ThreadSequence& seq, std::size_t horizon = kDefaultHorizon);

struct ThreadSamplerOptions {
  std::size_t max_start = 3;
  long long max_value = 3;
  double inf_probability = 0.1;
  std::size_t max_prefix = 3;
};

Thread random_thread(const DiagramPtr& d, Rng& rng, const ThreadSamplerOptions& opts = {});
/// Image thread of a finite vector.
Thread random_compact_thread(const DiagramPtr& d, Rng& rng, const ThreadSamplerOptions& opts = {});

// ---------------------------------------------------------------------------
// The universal property.

template <class T>
using StageMorphisms = std::function<T(std::size_t stage, const ExtNatVector&)>;

template <class T>
struct MediatedValue {
  T value;
  /// Images of the rapid representative's entries, stages 1..horizon.
  std::vector<T> approximants;
};

/// Image of a thread under the map induced by compatible ψ_i: the supremum
/// of ψ_i applied to the entries of its rapid representative. The supremum
/// is certified by the image tail of the finitely described thread.
template <class T>
MediatedValue<T> mediate(const CuInstance<T>& target, const StageMorphisms<T>& psis,
                         const Thread& a, std::size_t horizon = kDefaultHorizon) {
  const auto& d = *a.diagram();
  const std::size_t h = d.effective_horizon(horizon);
  const auto entries = a.expand(h);
  for (std::size_t j = a.start(); j < h; ++j) {
    const auto pushed = apply_map(d.map(j), entries[j - 1]);
    if (!(psis(j + 1, pushed) == psis(j, entries[j - 1]))) {
      throw Error("mediating map: stage morphisms not compatible at stage " + std::to_string(j));
    }
  }
  const auto rep = rapid_representative(a, horizon).expand(h);
  MediatedValue<T> out;
  for (std::size_t j = 1; j <= h; ++j) out.approximants.push_back(psis(j, rep[j - 1]));

  const Thread& exact = a.exact_or_self();
  const std::size_t p = exact.prefix_end();
  IncreasingSequence<T> seq;
  auto approx = out.approximants;
  seq.term = [approx](std::size_t n) { return approx[std::min(n, approx.size()) - 1]; };
  seq.limit = psis(p, exact.entry(p));
  out.value = target.sup(seq);
  for (std::size_t j = 1; j <= h; ++j) {
    if (!target.leq(out.approximants[j - 1], out.value)) {
      throw Error("mediating map: representative image at stage " + std::to_string(j) +
                  " exceeds the certified supremum");
    }
  }
  return out;
}

template <class T>
T mediating_map(const CuInstance<T>& target, const StageMorphisms<T>& psis, const Thread& a,
                std::size_t horizon = kDefaultHorizon) {
  return mediate(target, psis, a, horizon).value;
}

/// Sequences of threads with known suprema, for sup-preservation checks:
/// stabilizing partial sums, or embeddings of a basis with declared limit.
ThreadSequence random_thread_sequence(const DiagramPtr& d, Rng& rng,
                                      const ThreadSamplerOptions& opts = {});

template <class T>
LawReport universal_property_check(const DiagramPtr& d, const CuInstance<T>& target,
                                   const StageMorphisms<T>& psis, int samples,
                                   std::uint64_t seed, std::size_t horizon = kDefaultHorizon,
                                   const ThreadSamplerOptions& opts = {}) {
  Rng rng(seed);
  const std::size_t h = d->effective_horizon(horizon);
  LawResult compat{"compatibility"};
  for (int c = 0; c < samples; ++c) {
    const std::size_t i = uniform_index(rng, 1, std::max<std::size_t>(std::min<std::size_t>(h, 12), 2) - 1);
    const auto s = vector_sampler(d->dim(i), {opts.max_value, opts.inf_probability})(rng);
    const auto lhs = psis(i + 1, apply_map(d->map(i), s));
    const auto rhs = psis(i, s);
    compat.record(lhs == rhs, [&] {
      return "stage " + std::to_string(i) + ", s=" + to_string(s) + ": " + target.encode(lhs) +
             " vs " + target.encode(rhs);
    });
  }
  if (!compat.passed()) return {compat};

  LawResult commute{"commutativity"}, monotone{"monotonicity"}, additive{"additivity"},
      sup{"sup"}, wb{"way-below"};
  for (int c = 0; c < samples; ++c) {
    {
      const std::size_t i = uniform_index(rng, 1, std::min<std::size_t>(h, 12));
      const auto s = vector_sampler(d->dim(i), {opts.max_value, opts.inf_probability})(rng);
      const auto m = mediate(target, psis, embed(d, i, s), horizon);
      const auto expect = psis(i, s);
      bool ok = m.value == expect;
      if (ok && target.way_below(m.value, m.value)) {
        ok = std::any_of(m.approximants.begin(), m.approximants.end(),
                         [&](const T& t) { return target.leq(m.value, t); });
      }
      commute.record(ok, [&] {
        return "embed(" + std::to_string(i) + ", " + to_string(s) + ") -> " +
               target.encode(m.value) + ", psi gives " + target.encode(expect);
      });
    }
    const auto a = random_thread(d, rng, opts);
    const auto b = coin(rng, 0.7) ? thread_add(a, random_thread(d, rng, opts)) : random_thread(d, rng, opts);
    const auto ma = mediating_map(target, psis, a, horizon);
    const auto mb = mediating_map(target, psis, b, horizon);
    if (thread_leq(a, b, horizon).is_le()) {
      monotone.record(target.leq(ma, mb), [&] {
        return encode_thread(a) + " <= " + encode_thread(b) + " but images " + target.encode(ma) +
               ", " + target.encode(mb);
      });
    }
    {
      const auto mab = mediating_map(target, psis, thread_add(a, b), horizon);
      additive.record(mab == target.add(ma, mb), [&] {
        return encode_thread(a) + " + " + encode_thread(b) + " -> " + target.encode(mab);
      });
    }
    {
      const auto seq = random_thread_sequence(d, rng, opts);
      const auto ls = limit_sup(seq, horizon);
      const auto lhs = mediating_map(target, psis, ls.sup, horizon);
      IncreasingSequence<T> images;
      images.term = [&](std::size_t n) { return mediating_map(target, psis, seq.term(n), horizon); };
      if (seq.limit) {
        images.limit = mediating_map(target, psis, *seq.limit, horizon);
      } else {
        images.stabilizes_at = seq.stabilizes_at;
      }
      const auto rhs = target.sup(images);
      bool ok = lhs == rhs && !ls.verified.is_not_le();
      for (std::size_t n = 1; ok && n <= 4; ++n) ok = target.leq(images(n), rhs);
      sup.record(ok, [&] {
        return "sup of sequence starting " + encode_thread(seq.term(1)) + ": " + target.encode(lhs) +
               " vs " + target.encode(rhs);
      });
    }
    {
      const auto y = random_thread(d, rng, opts);
      Thread x = y;
      switch (uniform_index(rng, 0, 3)) {
        case 0: break;
        case 1: x = Thread::zero(d); break;
        case 2: {
          const auto rep = rapid_representative(y, horizon);
          const std::size_t i = uniform_index(rng, y.start(), std::min<std::size_t>(h, y.start() + 4));
          x = embed(d, i, rep.entry(i));
          break;
        }
        default: x = random_thread(d, rng, opts);
      }
      if (thread_way_below(x, y, horizon).is_le()) {
        const auto mx = mediating_map(target, psis, x, horizon);
        const auto my = mediating_map(target, psis, y, horizon);
        wb.record(target.way_below(mx, my), [&] {
          return encode_thread(x) + " << " + encode_thread(y) + " but images " + target.encode(mx) +
                 ", " + target.encode(my);
        });
      }
    }
  }
  return {compat, commute, monotone, additive, sup, wb};
}

}  // namespace cukit
