#include "cukit/perron.hpp"

#include <cmath>
#include <cstdio>

namespace cukit {

bool is_primitive(const MatrixCuMap& m) {
  if (!m.is_square() || m.rows() == 0) return false;
  const std::size_t n = m.rows();
  using BoolMatrix = std::vector<std::vector<bool>>;
  BoolMatrix base(n, std::vector<bool>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) base[r][c] = m.at(r, c) != 0;
  }
  auto multiply = [n](const BoolMatrix& a, const BoolMatrix& b) {
    BoolMatrix out(n, std::vector<bool>(n, false));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!a[r][k]) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (b[k][c]) out[r][c] = true;
        }
      }
    }
    return out;
  };
  auto positive = [](const BoolMatrix& a) {
    for (const auto& row : a) {
      for (bool x : row) {
        if (!x) return false;
      }
    }
    return true;
  };
  // Wielandt: a primitive n×n matrix has M^k > 0 for k = (n-1)^2 + 1.
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  BoolMatrix power = base;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (positive(power)) return true;
    power = multiply(power, base);
  }
  return false;
}

namespace {

/// Nullspace of a square rational matrix; empty unless one-dimensional.
std::optional<std::vector<Rational>> one_dimensional_kernel(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[row]);
    const Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() + 1 != n) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) {
      free_col = c;
      break;
    }
  }
  std::vector<Rational> v(n, 0);
  v[free_col] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a[r][free_col];
  return v;
}

}  // namespace

std::optional<PerronFunctional> perron_functional(const MatrixCuMap& m) {
  if (!is_primitive(m)) return std::nullopt;
  const std::size_t n = m.rows();
  PerronFunctional f;

  // Power iteration on the transpose.
  std::vector<long double> x(n, 1.0L);
  long double rho = 0;
  for (int it = 0; it < 5000; ++it) {
    std::vector<long double> y(n, 0.0L);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) y[c] += m.at(r, c).convert_to<long double>() * x[r];
    }
    long double norm = 0;
    for (auto v : y) norm = std::max(norm, v);
    for (auto& v : y) v /= norm;
    rho = norm;
    x = std::move(y);
  }
  // x is normalized to max 1, so the last norm is the eigenvalue estimate.
  for (auto& v : x) v /= x[0];
  f.approx_root = rho;
  f.approx_weights = x;

  const long double rounded = std::round(rho);
  if (std::fabs(rho - rounded) < 1e-6L) {
    const Natural r(static_cast<long long>(rounded));
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m.at(j, i)) - (i == j ? Rational(r) : Rational(0));
    }
    if (auto kernel = one_dimensional_kernel(a)) {
      auto& w = *kernel;
      if (w[0] != 0) {
        const Rational scale = 1 / w[0];
        for (auto& v : w) v *= scale;
      }
      bool positive = std::all_of(w.begin(), w.end(), [](const Rational& v) { return v > 0; });
      bool eigen = true;
      for (std::size_t c = 0; c < n && eigen; ++c) {
        Rational acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += w[k] * Rational(m.at(k, c));
        eigen = acc == Rational(r) * w[c];
      }
      if (positive && eigen) {
        f.exact = true;
        f.root = r;
        f.weights = w;
      }
    }
  }
  return f;
}

TraceValue evaluate_trace(const PerronFunctional& f, const ExtNatVector& v, std::size_t stage) {
  for (const auto& x : v) {
    if (x.is_inf()) return TraceValue::infinite();
  }
  TraceValue t;
  if (f.exact) {
    Rational acc = 0;
    for (std::size_t c = 0; c < v.size(); ++c) acc += f.weights[c] * Rational(v[c].value());
    Natural denom = 1;
    for (std::size_t k = 0; k < stage; ++k) denom *= f.root;
    t.kind = TraceValue::Kind::exact;
    t.value = acc / Rational(denom);
    return t;
  }
  long double acc = 0;
  for (std::size_t c = 0; c < v.size(); ++c) acc += f.approx_weights[c] * v[c].value().convert_to<long double>();
  const long double val = acc / std::pow(f.approx_root, static_cast<long double>(stage));
  t.kind = TraceValue::Kind::interval;
  t.lo = val * (1 - f.relative_margin);
  t.hi = val * (1 + f.relative_margin);
  return t;
}

namespace {

std::pair<long double, long double> enclosure(const TraceValue& t) {
  if (t.kind == TraceValue::Kind::interval) return {t.lo, t.hi};
  const long double v = t.value.convert_to<long double>();
  return {v * (1 - 1e-15L), v * (1 + 1e-15L)};
}

}  // namespace

bool certainly_greater(const TraceValue& a, const TraceValue& b) {
  if (a.is_infinite()) return !b.is_infinite();
  if (b.is_infinite()) return false;
  if (a.kind == TraceValue::Kind::exact && b.kind == TraceValue::Kind::exact) return a.value > b.value;
  return enclosure(a).first > enclosure(b).second;
}

bool certainly_leq(const TraceValue& a, const TraceValue& b) {
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  if (a.kind == TraceValue::Kind::exact && b.kind == TraceValue::Kind::exact) return a.value <= b.value;
  return enclosure(a).second <= enclosure(b).first;
}

std::string to_string(const TraceValue& t) {
  switch (t.kind) {
    case TraceValue::Kind::infinite:
      return "inf";
    case TraceValue::Kind::exact:
      return to_string(t.value);
    case TraceValue::Kind::interval: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "[%.17Lg, %.17Lg]", t.lo, t.hi);
      return buf;
    }
  }
  return {};
}

}  // namespace cukit
