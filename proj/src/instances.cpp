#include "cukit/instances.hpp"

#include <algorithm>
#include <set>

namespace cukit {

bool ExtNatVector::is_finite() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const ExtNat& x) { return x.is_fin(); });
}

bool ExtNatVector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const ExtNat& x) { return x.is_zero(); });
}

namespace {

void require_same_size(const ExtNatVector& a, const ExtNatVector& b) {
  if (a.size() != b.size()) {
    throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

}  // namespace

ExtNatVector operator+(const ExtNatVector& a, const ExtNatVector& b) {
  require_same_size(a, b);
  ExtNatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool leq(const ExtNatVector& a, const ExtNatVector& b) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!leq(a[i], b[i])) return false;
  }
  return true;
}

bool way_below(const ExtNatVector& a, const ExtNatVector& b) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!way_below(a[i], b[i])) return false;
  }
  return true;
}

std::string to_string(const ExtNatVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += to_string(v[i]);
  }
  return out;
}

ExtNatVector parse_ext_nat_vector(std::string_view text) {
  std::vector<ExtNat> coords;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    coords.push_back(parse_ext_nat(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return ExtNatVector(std::move(coords));
}

ExtNatVector basis_term(const ExtNatVector& v, const Natural& n) {
  ExtNatVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].is_inf() ? ExtNat::fin(n) : v[i];
  return out;
}

MatrixCuMap::MatrixCuMap(std::vector<std::vector<Natural>> rows) : rows_(std::move(rows)) {
  cols_ = rows_.empty() ? 0 : rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != cols_) throw Error("ragged multiplicity matrix");
    for (const auto& x : r) {
      if (x < 0) throw Error("negative multiplicity");
    }
  }
}

MatrixCuMap::MatrixCuMap(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<std::vector<Natural>> data;
  for (const auto& r : rows) data.emplace_back(r.begin(), r.end());
  *this = MatrixCuMap(std::move(data));
}

MatrixCuMap MatrixCuMap::identity(std::size_t k) {
  std::vector<std::vector<Natural>> rows(k, std::vector<Natural>(k, 0));
  for (std::size_t i = 0; i < k; ++i) rows[i][i] = 1;
  return MatrixCuMap(std::move(rows));
}

MatrixCuMap MatrixCuMap::zero(std::size_t k_out, std::size_t k_in) {
  MatrixCuMap m(std::vector<std::vector<Natural>>(k_out, std::vector<Natural>(k_in, 0)));
  m.cols_ = k_in;
  return m;
}

ExtNatVector apply_map(const MatrixCuMap& m, const ExtNatVector& v) {
  if (v.size() != m.cols()) {
    throw Error("apply_map: vector of dimension " + std::to_string(v.size()) +
                " for a map with " + std::to_string(m.cols()) + " columns");
  }
  ExtNatVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ExtNat acc;
    for (std::size_t c = 0; c < m.cols(); ++c) acc = acc + scale(m.at(r, c), v[c]);
    out[r] = acc;
  }
  return out;
}

MatrixCuMap compose(const MatrixCuMap& outer, const MatrixCuMap& inner) {
  if (outer.cols() != inner.rows()) throw Error("compose: shape mismatch");
  std::vector<std::vector<Natural>> rows(outer.rows(), std::vector<Natural>(inner.cols(), 0));
  for (std::size_t r = 0; r < outer.rows(); ++r) {
    for (std::size_t k = 0; k < outer.cols(); ++k) {
      if (outer.at(r, k) == 0) continue;
      for (std::size_t c = 0; c < inner.cols(); ++c) rows[r][c] += outer.at(r, k) * inner.at(k, c);
    }
  }
  auto m = MatrixCuMap(std::move(rows));
  if (m.rows() == 0) return MatrixCuMap::zero(0, inner.cols());
  return m;
}

std::string to_string(const MatrixCuMap& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ",[" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += m.at(r, c).str();
    }
    out += ']';
  }
  return out + "]";
}

// ---------------------------------------------------------------------------

CuInstance<ExtNat> extnat_instance() {
  CuInstance<ExtNat> inst;
  inst.name = "extnat";
  inst.zero = ExtNat{};
  inst.add = [](const ExtNat& a, const ExtNat& b) { return a + b; };
  inst.leq = [](const ExtNat& a, const ExtNat& b) { return leq(a, b); };
  inst.way_below = [](const ExtNat& a, const ExtNat& b) { return way_below(a, b); };
  inst.sup = [](const IncreasingSequence<ExtNat>& s) -> ExtNat {
    if (s.limit) return *s.limit;
    if (!s.unbounded.empty()) return ExtNat::inf();
    if (s.stabilizes_at) return s(*s.stabilizes_at);
    throw Error("extnat sup: sequence carries no certificate");
  };
  inst.basis = [](const ExtNat& x) {
    IncreasingSequence<ExtNat> b;
    if (x.is_inf()) {
      b.term = [](std::size_t n) { return ExtNat::fin(n); };
      b.unbounded = {0};
    } else {
      // 0, 1, ..., n, n, ...
      const Natural n = x.value();
      b.term = [n](std::size_t k) { return ExtNat::fin(std::min<Natural>(Natural(k - 1), n)); };
      b.stabilizes_at = static_cast<std::size_t>(n) + 1;
    }
    return b;
  };
  inst.encode = [](const ExtNat& x) { return to_string(x); };
  return inst;
}

CuInstance<ExtNatVector> product_instance(std::size_t k) {
  if (k == 0) throw Error("product_instance: dimension must be at least 1");
  CuInstance<ExtNatVector> inst;
  inst.name = "extnat^" + std::to_string(k);
  inst.zero = ExtNatVector(k);
  inst.add = [](const ExtNatVector& a, const ExtNatVector& b) { return a + b; };
  inst.leq = [](const ExtNatVector& a, const ExtNatVector& b) { return leq(a, b); };
  inst.way_below = [](const ExtNatVector& a, const ExtNatVector& b) { return way_below(a, b); };
  inst.sup = [k](const IncreasingSequence<ExtNatVector>& s) -> ExtNatVector {
    if (s.limit) return *s.limit;
    ExtNatVector out(k);
    std::optional<ExtNatVector> settled;
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(s.unbounded.begin(), s.unbounded.end(), c) != s.unbounded.end()) {
        out[c] = ExtNat::inf();
        continue;
      }
      if (!s.stabilizes_at) throw Error("vector sup: coordinate " + std::to_string(c) + " carries no certificate");
      if (!settled) settled = s(*s.stabilizes_at);
      out[c] = (*settled)[c];
    }
    return out;
  };
  inst.basis = [](const ExtNatVector& x) {
    IncreasingSequence<ExtNatVector> b;
    b.term = [x](std::size_t n) { return basis_term(x, Natural(n)); };
    b.stabilizes_at = 1;
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c].is_inf()) b.unbounded.push_back(c);
    }
    return b;
  };
  inst.encode = [](const ExtNatVector& v) { return to_string(v); };
  return inst;
}

CuInstance<ExtRational> rational_instance() {
  CuInstance<ExtRational> inst;
  inst.name = "extrational";
  inst.zero = ExtRational{};
  inst.add = [](const ExtRational& a, const ExtRational& b) { return a + b; };
  inst.leq = [](const ExtRational& a, const ExtRational& b) { return leq(a, b); };
  inst.way_below = [](const ExtRational& a, const ExtRational& b) { return way_below(a, b); };
  inst.sup = [](const IncreasingSequence<ExtRational>& s) -> ExtRational {
    if (s.limit) return *s.limit;
    if (!s.unbounded.empty()) return ExtRational::inf();
    if (s.stabilizes_at) return s(*s.stabilizes_at);
    throw Error("extrational sup: sequence carries no certificate");
  };
  inst.basis = [](const ExtRational& x) {
    IncreasingSequence<ExtRational> b;
    if (x.is_inf()) {
      b.term = [](std::size_t n) { return ExtRational::fin(Rational(n)); };
      b.unbounded = {0};
    } else if (x.is_zero()) {
      b.term = [](std::size_t) { return ExtRational{}; };
      b.stabilizes_at = 1;
    } else {
      // q (1 - 2^{-n})
      b.term = [q = x.value()](std::size_t n) {
        const Rational half_power(Natural(1), Natural(1) << n);
        return ExtRational::fin(q * (1 - half_power));
      };
      b.limit = x;
    }
    return b;
  };
  inst.encode = [](const ExtRational& x) { return to_string(x); };
  return inst;
}

Sampler<ExtNat> extnat_sampler(SamplerOptions opts) {
  return [opts](Rng& rng) {
    if (coin(rng, opts.inf_probability)) return ExtNat::inf();
    return ExtNat(static_cast<long long>(uniform_index(rng, 0, opts.max_value)));
  };
}

Sampler<ExtNatVector> vector_sampler(std::size_t k, SamplerOptions opts) {
  auto scalar = extnat_sampler(opts);
  return [k, scalar](Rng& rng) {
    ExtNatVector v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = scalar(rng);
    return v;
  };
}

Sampler<ExtRational> rational_sampler(SamplerOptions opts) {
  return [opts](Rng& rng) {
    if (coin(rng, opts.inf_probability)) return ExtRational::inf();
    const auto q = static_cast<long long>(uniform_index(rng, 1, 8));
    const auto p = static_cast<long long>(uniform_index(rng, 0, opts.max_value * q));
    return ExtRational::fin(Rational(p, q));
  };
}

// ---------------------------------------------------------------------------

namespace {

/// Certificate of n ↦ shape(s(n)), read off the sparsity pattern.
IncreasingSequence<ExtNatVector> image_sequence(const MatrixCuMap& shape, const VectorMap& f,
                                                const IncreasingSequence<ExtNatVector>& s) {
  IncreasingSequence<ExtNatVector> out;
  out.term = [f, s](std::size_t n) { return f(s(n)); };
  out.stabilizes_at = s.stabilizes_at;
  std::set<std::size_t> rows;
  for (auto c : s.unbounded) {
    for (std::size_t r = 0; r < shape.rows(); ++r) {
      if (shape.at(r, c) != 0) rows.insert(r);
    }
  }
  out.unbounded.assign(rows.begin(), rows.end());
  return out;
}

}  // namespace

LawReport check_morphism(const MatrixCuMap& m, const Sampler<ExtNatVector>& sampler,
                         const LawConfig& config) {
  return check_morphism(m, [m](const ExtNatVector& v) { return apply_map(m, v); }, sampler, config);
}

LawReport check_morphism(const MatrixCuMap& shape, const VectorMap& f,
                         const Sampler<ExtNatVector>& sampler, const LawConfig& config) {
  const auto in = product_instance(shape.cols());
  const auto out = product_instance(std::max<std::size_t>(shape.rows(), 1));
  Rng rng(config.seed);
  LawResult zero{"zero"}, additivity{"additivity"}, monotone{"monotonicity"},
      wb{"way-below"}, sup{"sup"};
  const ExtNatVector out_zero(shape.rows());

  for (int c = 0; c < config.cases; ++c) {
    zero.record(f(in.zero) == out_zero, [&] { return "image of zero is " + to_string(f(in.zero)); });

    const auto x = sampler(rng), y = sampler(rng);
    additivity.record(f(x + y) == f(x) + f(y), [&] {
      return "x=" + to_string(x) + ", y=" + to_string(y);
    });

    const auto z = x + sampler(rng);
    monotone.record(leq(f(x), f(z)), [&] { return to_string(x) + " <= " + to_string(z); });

    const auto b = sampler(rng);
    const auto a = coin(rng, 0.5) ? basis_term(b, Natural(uniform_index(rng, 1, 8))) : b;
    wb.record(!way_below(a, b) || way_below(f(a), f(b)), [&] {
      return to_string(a) + " << " + to_string(b) + " but images " + to_string(f(a)) + ", " +
             to_string(f(b));
    });

    const auto s = random_sequence(in, sampler, rng, 1);
    if (shape.rows() == 0) {
      sup.pass();
      continue;
    }
    const auto image = image_sequence(shape, f, s);
    const auto lhs = f(in.sup(s));
    const auto rhs = out.sup(image);
    sup.record(lhs == rhs, [&] {
      return describe_sequence(in, s) + ": f(sup)=" + to_string(lhs) + ", sup f=" + to_string(rhs);
    });
  }
  return {zero, additivity, monotone, wb, sup};
}

}  // namespace cukit
