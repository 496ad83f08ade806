#include "cukit/limit.hpp"

#include <algorithm>
#include <set>

namespace cukit {

// ---------------------------------------------------------------------------
// CuDiagram

CuDiagram::CuDiagram(std::vector<std::size_t> dims, std::vector<MatrixCuMap> maps, bool stationary)
    : dims_(std::move(dims)), maps_(std::move(maps)), stationary_(stationary) {
  if (dims_.empty()) throw Error("diagram needs at least one stage");
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (dims_[j] == 0) throw Error("stage " + std::to_string(j + 1) + " has dimension 0");
  }
  const std::size_t expected = stationary_ ? dims_.size() : dims_.size() - 1;
  if (maps_.size() != expected) {
    throw Error("diagram with " + std::to_string(dims_.size()) + " stages needs " +
                std::to_string(expected) + " maps, got " + std::to_string(maps_.size()));
  }
  for (std::size_t j = 1; j <= maps_.size(); ++j) {
    const auto& m = maps_[j - 1];
    const std::size_t in = dims_[j - 1];
    const std::size_t out = j < dims_.size() ? dims_[j] : dims_.back();
    if (m.cols() != in || m.rows() != out) {
      throw Error("map at stage " + std::to_string(j) + " has shape " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()) + ", expected " + std::to_string(out) + "x" + std::to_string(in));
    }
  }
  if (stationary_) perron_ = perron_functional(maps_.back());
}

bool CuDiagram::contains(std::size_t stage) const {
  return stage >= 1 && (stationary_ || stage <= dims_.size());
}

std::optional<std::size_t> CuDiagram::last_stage() const {
  if (stationary_) return std::nullopt;
  return dims_.size();
}

std::size_t CuDiagram::dim(std::size_t stage) const {
  if (!contains(stage)) throw Error("stage " + std::to_string(stage) + " outside the diagram");
  return stage <= dims_.size() ? dims_[stage - 1] : dims_.back();
}

const MatrixCuMap& CuDiagram::map(std::size_t stage) const {
  if (stage == 0 || !contains(stage + 1)) throw Error("no map out of stage " + std::to_string(stage));
  return stage <= maps_.size() ? maps_[stage - 1] : maps_.back();
}

const MatrixCuMap& CuDiagram::tail_map() const {
  if (!stationary_) throw Error("diagram has no stationary tail");
  return maps_.back();
}

CuInstance<ExtNatVector> CuDiagram::stage_instance(std::size_t stage) const {
  return product_instance(dim(stage));
}

std::size_t CuDiagram::effective_horizon(std::size_t horizon) const {
  horizon = std::max<std::size_t>(horizon, 1);
  return stationary_ ? horizon : std::min(horizon, dims_.size());
}

// ---------------------------------------------------------------------------
// Thread

namespace {

void require_dim(const CuDiagram& d, std::size_t stage, const ExtNatVector& v) {
  if (!d.contains(stage)) throw Error("stage " + std::to_string(stage) + " outside the diagram");
  if (v.size() != d.dim(stage)) {
    throw Error("element " + to_string(v) + " does not fit stage " + std::to_string(stage) +
                " of dimension " + std::to_string(d.dim(stage)));
  }
}

void require_same_diagram(const Thread& a, const Thread& b) {
  if (a.diagram() != b.diagram() && !(*a.diagram() == *b.diagram())) {
    throw Error("threads belong to different diagrams");
  }
}

}  // namespace

Thread Thread::image(DiagramPtr d, std::size_t start, ExtNatVector seed) {
  return explicit_prefix(std::move(d), start, {std::move(seed)});
}

Thread Thread::explicit_prefix(DiagramPtr d, std::size_t start, std::vector<ExtNatVector> entries) {
  if (!d) throw Error("thread without diagram");
  if (entries.empty()) throw Error("thread needs at least one entry");
  for (std::size_t k = 0; k < entries.size(); ++k) require_dim(*d, start + k, entries[k]);
  for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
    if (!leq(apply_map(d->map(start + k), entries[k]), entries[k + 1])) {
      throw Error("thread not increasing at stage " + std::to_string(start + k) + ": image of " +
                  to_string(entries[k]) + " exceeds " + to_string(entries[k + 1]));
    }
  }
  Thread t;
  t.diagram_ = std::move(d);
  t.start_ = start;
  t.prefix_ = std::move(entries);
  return t;
}

Thread Thread::zero(DiagramPtr d) {
  const std::size_t k = d->dim(1);
  return image(std::move(d), 1, ExtNatVector(k));
}

bool Thread::finite_entries() const {
  return std::all_of(prefix_.begin(), prefix_.end(), [](const ExtNatVector& v) { return v.is_finite(); });
}

ExtNatVector Thread::entry(std::size_t stage) const {
  if (!diagram_->contains(stage)) throw Error("stage " + std::to_string(stage) + " outside the diagram");
  if (stage < start_) return ExtNatVector(diagram_->dim(stage));
  if (stage <= prefix_end()) return prefix_[stage - start_];
  ExtNatVector v = prefix_.back();
  for (std::size_t j = prefix_end(); j < stage; ++j) v = apply_map(diagram_->map(j), v);
  return v;
}

std::vector<ExtNatVector> Thread::expand(std::size_t horizon) const {
  std::vector<ExtNatVector> out;
  out.reserve(horizon);
  for (std::size_t j = 1; j <= horizon; ++j) {
    if (j < start_) {
      out.emplace_back(diagram_->dim(j));
    } else if (j <= prefix_end()) {
      out.push_back(prefix_[j - start_]);
    } else {
      out.push_back(apply_map(diagram_->map(j - 1), out.back()));
    }
  }
  return out;
}

Thread Thread::as_truncated(std::shared_ptr<const Thread> exact) const {
  Thread t = *this;
  t.truncated_ = true;
  t.exact_ = std::move(exact);
  return t;
}

std::optional<TraceValue> thread_trace(const Thread& t) {
  const auto& d = *t.diagram();
  if (!d.perron() || !t.has_exact_tail()) return std::nullopt;
  const Thread& e = t.exact_or_self();
  const std::size_t p = std::max(e.prefix_end(), d.tail_start());
  return evaluate_trace(*d.perron(), e.entry(p), p);
}

// ---------------------------------------------------------------------------
// Encoding

std::string encode_thread(const Thread& t) {
  std::string out = "@" + std::to_string(t.start()) + ":";
  for (std::size_t k = 0; k < t.prefix().size(); ++k) {
    if (k) out += ',';
    out += to_string(t.prefix()[k]);
  }
  if (!t.is_image()) out += "|tail";
  return out;
}

Thread parse_thread(const DiagramPtr& d, std::string_view text) {
  auto fail = [&](const std::string& why) { return Error("bad thread '" + std::string(text) + "': " + why); };
  if (text.empty() || text.front() != '@') throw fail("expected '@stage:'");
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw fail("missing ':'");
  std::size_t start = 0;
  const auto stage_text = text.substr(1, colon - 1);
  if (stage_text.empty()) throw fail("missing stage");
  for (char ch : stage_text) {
    if (ch < '0' || ch > '9') throw fail("stage is not a number");
    start = start * 10 + static_cast<std::size_t>(ch - '0');
    if (start > 1000000) throw fail("stage too large");
  }
  if (start == 0) throw fail("stages are numbered from 1");
  if (!d->contains(start)) throw fail("stage " + std::to_string(start) + " outside the diagram");

  auto body = text.substr(colon + 1);
  bool explicit_tail = false;
  if (const auto bar = body.find('|'); bar != std::string_view::npos) {
    if (body.substr(bar + 1) != "tail") throw fail("expected '|tail'");
    explicit_tail = true;
    body = body.substr(0, bar);
  }
  const ExtNatVector flat = parse_ext_nat_vector(body);
  std::vector<ExtNatVector> entries;
  std::size_t pos = 0;
  for (std::size_t stage = start; pos < flat.size(); ++stage) {
    if (!d->contains(stage)) throw fail("prefix runs past the last stage");
    const std::size_t k = d->dim(stage);
    if (pos + k > flat.size()) throw fail("coordinates do not split into stage dimensions");
    entries.emplace_back(std::vector<ExtNat>(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                                             flat.begin() + static_cast<std::ptrdiff_t>(pos + k)));
    pos += k;
  }
  if (entries.size() > 1 && !explicit_tail) throw fail("a prefix of several entries needs '|tail'");
  return Thread::explicit_prefix(d, start, std::move(entries));
}

// ---------------------------------------------------------------------------
// Tri

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::le: return "LE";
    case Verdict::not_le: return "NotLE";
    case Verdict::unknown: return "Unknown";
  }
  return {};
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::none: return "none";
    case Certificate::search: return "search";
    case Certificate::perron: return "perron";
    case Certificate::deficit: return "deficit";
    case Certificate::order: return "order";
    case Certificate::no_compact_majorant: return "no-compact-majorant";
  }
  return {};
}

namespace {

Tri le(std::size_t h, Certificate c = Certificate::search) { return {Verdict::le, h, c}; }
Tri not_le(std::size_t h, Certificate c) { return {Verdict::not_le, h, c}; }
Tri unknown(std::size_t h) { return {Verdict::unknown, h, Certificate::none}; }

/// Horizon used for a query: clamped for finite diagrams, and never
/// shorter than the listed prefixes for stationary ones.
std::size_t query_horizon(const Thread& a, const Thread& b, std::size_t horizon) {
  const auto& d = *a.diagram();
  if (!d.stationary()) return d.effective_horizon(horizon);
  return std::max({horizon, a.prefix_end(), b.prefix_end(), std::size_t{1}});
}

/// Φ[i] = maps composed from stage i to stage h (Φ[h] = identity).
std::vector<MatrixCuMap> composed_maps(const CuDiagram& d, std::size_t from, std::size_t h) {
  std::vector<MatrixCuMap> phi(h + 1);
  phi[h] = MatrixCuMap::identity(d.dim(h));
  for (std::size_t i = h; i-- > std::max<std::size_t>(from, 1);) phi[i] = compose(phi[i + 1], d.map(i));
  return phi;
}

/// Map governing all stages from `stage` on, when the diagram is linear
/// there: the tail map of a stationary diagram, the identity at the last
/// stage of a finite one.
std::optional<MatrixCuMap> linear_regime(const CuDiagram& d, std::size_t stage) {
  if (d.stationary()) {
    if (stage >= d.tail_start()) return d.tail_map();
    return std::nullopt;
  }
  if (stage == *d.last_stage()) return MatrixCuMap::identity(d.dim(stage));
  return std::nullopt;
}

using CoordSet = std::vector<bool>;

/// Deficit certificate: s is a compact element below a at stage J, b is
/// given exactly and M governs every later stage. Succeeds when some
/// coordinate of M^k s provably exceeds the finite coordinate of M^k b_J
/// for every k.
bool deficit_persists(const MatrixCuMap& m, const ExtNatVector& s, const ExtNatVector& b) {
  const std::size_t n = s.size();
  CoordSet q(n, false);
  std::vector<Natural> delta_pos(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (b[c].is_inf()) continue;
    if (s[c].value() >= b[c].value()) {
      q[c] = true;
      delta_pos[c] = s[c].value() - b[c].value();
    }
  }
  // Largest subset of q whose rows draw only from q.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (!q[r]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (m.at(r, c) != 0 && !q[c]) {
          q[r] = false;
          changed = true;
          break;
        }
      }
    }
  }
  CoordSet support(n, false);
  for (std::size_t c = 0; c < n; ++c) support[c] = q[c] && delta_pos[c] > 0;
  std::set<CoordSet> seen;
  while (seen.insert(support).second) {
    if (std::none_of(support.begin(), support.end(), [](bool x) { return x; })) return false;
    CoordSet next(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      if (!q[r]) continue;
      for (std::size_t c = 0; c < n && !next[r]; ++c) next[r] = support[c] && m.at(r, c) != 0;
    }
    support = std::move(next);
  }
  return std::any_of(support.begin(), support.end(), [](bool x) { return x; });
}

/// A closed coordinate block on which M acts as a permutation and where
/// v is ∞: the class of v then dominates n·e_c for every n while every
/// compact class stays bounded on the block.
bool infinite_on_permutation_block(const MatrixCuMap& m, const ExtNatVector& v) {
  const std::size_t n = v.size();
  if (n > 16) return false;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    auto in = [mask](std::size_t c) { return (mask >> c) & 1U; };
    bool ok = false;
    for (std::size_t c = 0; c < n; ++c) ok = ok || (in(c) && v[c].is_inf());
    if (!ok) continue;
    std::vector<int> column_hits(n, 0);
    for (std::size_t r = 0; r < n && ok; ++r) {
      if (!in(r)) continue;
      int ones = 0;
      for (std::size_t c = 0; c < n && ok; ++c) {
        if (m.at(r, c) == 0) continue;
        if (!in(c) || m.at(r, c) != 1) ok = false;
        ++ones;
        ++column_hits[c];
      }
      ok = ok && ones == 1;
    }
    for (std::size_t c = 0; c < n && ok; ++c) ok = !in(c) || column_hits[c] == 1;
    if (ok) return true;
  }
  return false;
}

ExtNatVector test_element(const ExtNatVector& entry, const Natural& depth) {
  return entry.is_finite() ? entry : basis_term(entry, depth);
}

}  // namespace

// ---------------------------------------------------------------------------
// Pre-order

Thread embed(const DiagramPtr& d, std::size_t stage, const ExtNatVector& s) {
  if (!d->contains(stage)) {
    throw Error("embed: stage " + std::to_string(stage) + " beyond the last stage of a diagram without tail");
  }
  return Thread::image(d, stage, s);
}

Thread thread_add(const Thread& a, const Thread& b) {
  require_same_diagram(a, b);
  const std::size_t start = std::min(a.start(), b.start());
  const std::size_t end = std::max(a.prefix_end(), b.prefix_end());
  std::vector<ExtNatVector> entries;
  for (std::size_t j = start; j <= end; ++j) entries.push_back(a.entry(j) + b.entry(j));
  Thread sum = Thread::explicit_prefix(a.diagram(), start, std::move(entries));
  if (a.truncated() || b.truncated()) {
    std::shared_ptr<const Thread> exact;
    if (a.has_exact_tail() && b.has_exact_tail()) {
      exact = std::make_shared<const Thread>(thread_add(a.exact_or_self(), b.exact_or_self()));
    }
    sum = sum.as_truncated(std::move(exact));
  }
  return sum;
}

Tri thread_leq(const Thread& a, const Thread& b, std::size_t horizon) {
  require_same_diagram(a, b);
  const auto& d = *a.diagram();
  const std::size_t h = query_horizon(a, b, horizon);

  if (!d.stationary() && a.has_exact_tail() && b.has_exact_tail()) {
    // The limit of a finite diagram is its last stage.
    const std::size_t last = *d.last_stage();
    if (leq(a.exact_or_self().entry(last), b.exact_or_self().entry(last))) return le(h);
    return not_le(h, Certificate::deficit);
  }

  if (auto ta = thread_trace(a)) {
    if (auto tb = thread_trace(b); tb && certainly_greater(*ta, *tb)) return not_le(h, Certificate::perron);
  }

  const auto ea = a.expand(h);
  const auto eb = b.expand(h);
  const auto phi = composed_maps(d, a.start(), h);
  const Natural depth(h);
  // Entries of a horizon-cut construction near the horizon have no room
  // left to be dominated; such threads are probed up to h / 2.
  const std::size_t last_probe = a.truncated() ? std::max({a.start(), h / 2, std::size_t{1}}) : h;
  std::optional<ExtNatVector> failing;
  for (std::size_t i = a.start(); i <= last_probe && !failing; ++i) {
    const auto t = test_element(ea[i - 1], depth);
    if (t.is_zero()) continue;
    auto pushed = apply_map(phi[i], t);
    if (!way_below(pushed, eb[h - 1])) failing = std::move(pushed);
  }
  if (!failing) return le(h);

  if (b.has_exact_tail()) {
    const Thread& be = b.exact_or_self();
    if (h >= be.prefix_end()) {
      if (auto m = linear_regime(d, h); m && deficit_persists(*m, *failing, be.entry(h))) {
        return not_le(h, Certificate::deficit);
      }
    }
  }
  return unknown(h);
}

Tri thread_equiv(const Thread& a, const Thread& b, std::size_t horizon) {
  const Tri ab = thread_leq(a, b, horizon);
  if (ab.is_not_le()) return ab;
  const Tri ba = thread_leq(b, a, horizon);
  if (ba.is_not_le()) return ba;
  if (ab.is_le() && ba.is_le()) return le(std::max(ab.horizon, ba.horizon));
  return unknown(std::max(ab.horizon, ba.horizon));
}

namespace {

/// a <= c for the compact class c = embed(stage, v), with test depths
/// chosen above c's coordinates so that ∞ coordinates of a are probed
/// beyond anything c holds at the same stage. Returns true when every
/// test reaches c by the horizon.
bool below_compact(const Thread& a, std::size_t stage, const ExtNatVector& v, std::size_t h) {
  const auto& d = *a.diagram();
  const Thread c = Thread::image(a.diagram(), stage, v);
  const auto ea = a.expand(h);
  const auto ec = c.expand(h);
  const auto phi = composed_maps(d, a.start(), h);
  const std::size_t last_test = std::max(a.start(), h / 2);
  for (std::size_t k = a.start(); k <= last_test; ++k) {
    Natural depth = 1;
    for (const auto& x : ec[k - 1]) depth = std::max<Natural>(depth, x.value() + 1);
    const auto t = test_element(ea[k - 1], depth);
    if (t.is_zero()) continue;
    if (!leq(apply_map(phi[k], t), ec[h - 1])) return false;
  }
  return true;
}

}  // namespace

Tri thread_way_below(const Thread& a, const Thread& b, std::size_t horizon) {
  const Tri order = thread_leq(a, b, horizon);
  const std::size_t h = order.horizon;
  if (order.is_not_le()) return not_le(h, Certificate::order);

  const bool a_compact = a.has_exact_tail() && a.exact_or_self().finite_entries();
  const bool b_compact = b.has_exact_tail() && b.exact_or_self().finite_entries();
  // A compact class is way below exactly the classes above it.
  if (a_compact || b_compact) return order;

  // a << b forces a below some compact class.
  const auto& d = *a.diagram();
  if (auto ta = thread_trace(a); ta && ta->is_infinite()) return not_le(h, Certificate::no_compact_majorant);
  if (a.has_exact_tail()) {
    const Thread& ae = a.exact_or_self();
    const std::size_t j = d.stationary() ? std::max(ae.prefix_end(), d.tail_start()) : *d.last_stage();
    if (auto m = linear_regime(d, j); m && infinite_on_permutation_block(*m, ae.entry(j))) {
      return not_le(h, Certificate::no_compact_majorant);
    }
  }

  // Compact classes embed(i, r_i) below b, along its rapid representative.
  const Thread r = rapid_representative(b, horizon);
  const std::size_t hr = d.effective_horizon(h);
  for (std::size_t i = b.start(); i <= hr; ++i) {
    const auto ri = r.entry(i);
    if (ri.is_zero()) continue;
    if (below_compact(a, i, ri, h)) return le(h);
  }
  return unknown(h);
}

// ---------------------------------------------------------------------------
// Diagonal constructions

Thread rapid_representative(const Thread& a, std::size_t horizon) {
  if (a.finite_entries() && !a.truncated()) return a;
  const auto& d = *a.diagram();
  const std::size_t h = std::max(d.effective_horizon(horizon), a.prefix_end());
  const auto ea = a.expand(h);
  const std::size_t start = a.start();

  // R_i(n): basis term of a_i, raised on ∞ coordinates so that it
  // dominates the image of R_{i-1}(n). A coordinate fed by an upstream ∞
  // takes max(n, image); one that becomes ∞ only here takes image + n.
  // The diagonal is D_i = R_i(i).
  std::vector<ExtNatVector> diag;
  for (std::size_t i = start; i <= h; ++i) {
    const Natural n(i);
    ExtNatVector r = basis_term(ea[start - 1], n);
    for (std::size_t j = start + 1; j <= i; ++j) {
      const auto pushed = apply_map(d.map(j - 1), r);
      const auto fed = apply_map(d.map(j - 1), ea[j - 2]);
      std::vector<ExtNat> next(pushed.size());
      for (std::size_t c = 0; c < pushed.size(); ++c) {
        if (!ea[j - 1][c].is_inf()) {
          next[c] = ea[j - 1][c];
        } else if (fed[c].is_inf()) {
          next[c] = ExtNat::fin(std::max<Natural>(n, pushed[c].value()));
        } else {
          next[c] = ExtNat::fin(pushed[c].value() + n);
        }
      }
      r = ExtNatVector(std::move(next));
    }
    diag.push_back(std::move(r));
  }
  std::shared_ptr<const Thread> exact;
  if (a.has_exact_tail()) exact = std::make_shared<const Thread>(a.exact_or_self());
  return Thread::explicit_prefix(a.diagram(), start, std::move(diag)).as_truncated(std::move(exact));
}

LimitSup limit_sup(const ThreadSequence& seq, std::size_t horizon) {
  const Thread first = seq.term(1);
  const auto d = first.diagram();
  const std::size_t h = d->effective_horizon(horizon);
  const std::size_t count = seq.stabilizes_at ? std::min(*seq.stabilizes_at, h) : h;

  std::vector<Thread> terms{first};
  for (std::size_t n = 2; n <= count; ++n) {
    terms.push_back(seq.term(n));
    require_same_diagram(terms.front(), terms.back());
    const Tri step = thread_leq(terms[n - 2], terms[n - 1], horizon);
    if (!step.is_le()) {
      throw Error("limit_sup: terms " + std::to_string(n - 1) + " and " + std::to_string(n) +
                  " not certified increasing (" + to_string(step.verdict) + ")");
    }
  }
  std::vector<std::vector<ExtNatVector>> reps;
  for (const auto& t : terms) reps.push_back(rapid_representative(t, horizon).expand(h));

  // D_k = E_{n_k}[k] with n_k the largest admissible index not below
  // n_{k-1}: the images of D_{k-1} must stay below the chosen entry.
  std::vector<ExtNatVector> diag;
  std::size_t n_prev = 1;
  for (std::size_t k = 1; k <= h; ++k) {
    std::size_t chosen = n_prev;
    const std::size_t top = std::min(k, count);
    for (std::size_t n = top; n > n_prev; --n) {
      if (leq(apply_map(d->map(k - 1), diag.back()), reps[n - 1][k - 1])) {
        chosen = n;
        break;
      }
    }
    diag.push_back(reps[chosen - 1][k - 1]);
    n_prev = chosen;
  }
  std::size_t start = 1;
  while (start < h && diag[start - 1].is_zero()) ++start;
  diag.erase(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(start - 1));

  std::shared_ptr<const Thread> exact;
  if (seq.limit) {
    exact = std::make_shared<const Thread>(seq.limit->exact_or_self());
  } else if (seq.stabilizes_at && *seq.stabilizes_at <= count && terms.back().has_exact_tail()) {
    exact = std::make_shared<const Thread>(terms.back().exact_or_self());
  }
  LimitSup out{Thread::explicit_prefix(d, start, std::move(diag)).as_truncated(exact), le(h)};

  for (std::size_t n = 1; n <= count; ++n) {
    const Tri bound = thread_leq(terms[n - 1], out.sup, horizon);
    if (bound.is_not_le()) throw Error("limit_sup: term " + std::to_string(n) + " not below the diagonal");
    if (bound.is_unknown()) out.verified = bound;
  }
  if (seq.limit) {
    const Tri eq = thread_equiv(out.sup, *seq.limit, horizon);
    if (eq.is_not_le()) throw Error("limit_sup: diagonal not equivalent to the declared limit");
    if (eq.is_unknown()) out.verified = eq;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

std::size_t sample_start(const CuDiagram& d, Rng& rng, const ThreadSamplerOptions& opts) {
  std::size_t hi = std::max<std::size_t>(opts.max_start, 1);
  if (!d.stationary()) hi = std::min(hi, *d.last_stage());
  return uniform_index(rng, 1, hi);
}

}  // namespace

Thread random_thread(const DiagramPtr& d, Rng& rng, const ThreadSamplerOptions& opts) {
  const SamplerOptions vopts{opts.max_value, opts.inf_probability};
  const std::size_t start = sample_start(*d, rng, opts);
  std::vector<ExtNatVector> entries{vector_sampler(d->dim(start), vopts)(rng)};
  if (opts.max_prefix > 1 && coin(rng, 0.3)) {
    const std::size_t len = uniform_index(rng, 2, opts.max_prefix);
    for (std::size_t k = 1; k < len && d->contains(start + k); ++k) {
      const std::size_t stage = start + k;
      auto next = apply_map(d->map(stage - 1), entries.back());
      next = next + vector_sampler(d->dim(stage), {opts.max_value, 0.0})(rng);
      entries.push_back(std::move(next));
    }
  }
  return Thread::explicit_prefix(d, start, std::move(entries));
}

Thread random_compact_thread(const DiagramPtr& d, Rng& rng, const ThreadSamplerOptions& opts) {
  const std::size_t start = sample_start(*d, rng, opts);
  return Thread::image(d, start, vector_sampler(d->dim(start), {opts.max_value, 0.0})(rng));
}

ThreadSequence random_thread_sequence(const DiagramPtr& d, Rng& rng, const ThreadSamplerOptions& opts) {
  ThreadSequence seq;
  if (coin(rng, 0.5)) {
    std::vector<Thread> partial{random_thread(d, rng, opts)};
    const std::size_t m = uniform_index(rng, 0, 2);
    for (std::size_t k = 0; k < m; ++k) partial.push_back(thread_add(partial.back(), random_thread(d, rng, opts)));
    seq.term = [partial](std::size_t n) { return partial[std::min(n, partial.size()) - 1]; };
    seq.stabilizes_at = partial.size();
    return seq;
  }
  const std::size_t stage = sample_start(*d, rng, opts);
  auto s = vector_sampler(d->dim(stage), {opts.max_value, opts.inf_probability})(rng);
  s[uniform_index(rng, 0, s.size() - 1)] = ExtNat::inf();
  seq.term = [d, stage, s](std::size_t n) { return Thread::image(d, stage, basis_term(s, Natural(n))); };
  seq.limit = Thread::image(d, stage, s);
  return seq;
}

}  // namespace cukit
