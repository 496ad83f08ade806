#include "cukit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cukit::oracle {

using Solver = Eigen::SelfAdjointEigenSolver<Matrix>;

FiniteDimAlgebra::FiniteDimAlgebra(std::vector<int> sizes) : block_sizes(std::move(sizes)) {
  if (block_sizes.empty()) throw Error("algebra needs at least one block");
  for (int n : block_sizes) {
    if (n < 1) throw Error("block sizes must be positive");
  }
}

PositiveElement::PositiveElement(const FiniteDimAlgebra& algebra, std::vector<Matrix> blocks)
    : algebra_(algebra), blocks_(std::move(blocks)) {
  if (blocks_.size() != algebra_.block_sizes.size()) {
    throw Error("expected " + std::to_string(algebra_.block_sizes.size()) + " blocks, got " +
                std::to_string(blocks_.size()));
  }
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    auto& m = blocks_[j];
    const int n = algebra_.block_sizes[j];
    if (m.rows() != n || m.cols() != n) {
      throw Error("block " + std::to_string(j + 1) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
      throw Error("block " + std::to_string(j + 1) + " is not Hermitian");
    }
    m = (m + m.adjoint()) / 2.0;
    if (Solver(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < kPsdTol) {
      throw Error("block " + std::to_string(j + 1) + " is not positive semidefinite");
    }
  }
}

PositiveElement PositiveElement::zero(const FiniteDimAlgebra& algebra) {
  std::vector<Matrix> blocks;
  for (int n : algebra.block_sizes) blocks.push_back(Matrix::Zero(n, n));
  return PositiveElement(algebra, std::move(blocks));
}

std::vector<Eigen::VectorXd> spectrum(const PositiveElement& a) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& m : a.blocks()) out.push_back(Solver(m, Eigen::EigenvaluesOnly).eigenvalues());
  return out;
}

PositiveElement eps_cut(const PositiveElement& a, double eps) {
  if (!(eps > 0)) throw Error("eps_cut: eps must be positive");
  std::vector<Matrix> blocks;
  for (const auto& m : a.blocks()) {
    const Solver es(m);
    const Eigen::VectorXd cut = (es.eigenvalues().array() - eps).max(0.0).matrix();
    blocks.push_back(es.eigenvectors() * cut.cast<std::complex<double>>().asDiagonal() *
                     es.eigenvectors().adjoint());
  }
  return PositiveElement(a.algebra(), std::move(blocks));
}

RankResult rank_vector(const PositiveElement& a, double tol) {
  RankResult r;
  for (const auto& ev : spectrum(a)) {
    int rank = 0;
    for (double x : ev) {
      if (x > tol) ++rank;
      if (x > tol / 10 && x < tol * 10) r.unstable = true;
    }
    r.ranks.push_back(rank);
  }
  return r;
}

ExtNatVector to_ext_nat_vector(const std::vector<int>& ranks) {
  ExtNatVector v(ranks.size());
  for (std::size_t j = 0; j < ranks.size(); ++j) v[j] = ExtNat(ranks[j]);
  return v;
}

namespace {

void require_same_algebra(const PositiveElement& a, const PositiveElement& b) {
  if (!(a.algebra() == b.algebra())) throw Error("elements live in different algebras");
}

std::string describe_ranks(const std::vector<int>& r) {
  std::string out = "(";
  for (std::size_t j = 0; j < r.size(); ++j) out += (j ? "," : "") + std::to_string(r[j]);
  return out + ")";
}

}  // namespace

SubeqResult cuntz_subeq(const PositiveElement& a, const PositiveElement& b, double tol) {
  require_same_algebra(a, b);
  const auto ra = rank_vector(a, tol);
  const auto rb = rank_vector(b, tol);
  SubeqResult out;
  out.unstable = ra.unstable || rb.unstable;
  out.holds = true;
  for (std::size_t j = 0; j < ra.ranks.size(); ++j) out.holds = out.holds && ra.ranks[j] <= rb.ranks[j];
  return out;
}

double hermitian_norm(const Matrix& m) {
  if (m.size() == 0) return 0;
  const Matrix h = (m + m.adjoint()) / 2.0;
  return Solver(h, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

Witness witness_construct(const PositiveElement& a, const PositiveElement& b, double eps, double tol) {
  require_same_algebra(a, b);
  const PositiveElement cut = eps_cut(a, eps);
  Witness w;
  for (std::size_t j = 0; j < cut.block_count(); ++j) {
    const int n = cut.algebra().block_sizes[j];
    const Solver ea(cut.block(j));
    const Solver eb(b.block(j));
    // Eigenvalues come ascending; the support sits at the top.
    const auto& la = ea.eigenvalues();
    const auto& lb = eb.eigenvalues();
    int ra = 0, rb = 0;
    for (int k = 0; k < n; ++k) {
      ra += la[k] > tol;
      rb += lb[k] > tol;
    }
    if (ra > rb) {
      throw Error("witness_construct: block " + std::to_string(j + 1) + " needs rank " + std::to_string(ra) +
                  " but b has rank " + std::to_string(rb));
    }
    const Matrix va = ea.eigenvectors().rightCols(ra);
    const Matrix wb = eb.eigenvectors().rightCols(ra);
    Eigen::VectorXd sqrt_a = la.tail(ra).cwiseSqrt();
    Eigen::VectorXd inv_sqrt_b = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
      if (lb[k] > tol) inv_sqrt_b[k] = 1.0 / std::sqrt(lb[k]);
    }
    const Matrix a_half = va * sqrt_a.cast<std::complex<double>>().asDiagonal() * va.adjoint();
    const Matrix u = va * wb.adjoint();
    const Matrix b_pinv_half =
        eb.eigenvectors() * inv_sqrt_b.cast<std::complex<double>>().asDiagonal() * eb.eigenvectors().adjoint();
    Matrix c = a_half * u * b_pinv_half;
    const Matrix diff = c * b.block(j) * c.adjoint() - cut.block(j);
    w.residual = std::max(w.residual, hermitian_norm(diff));
    w.c.push_back(std::move(c));
  }
  return w;
}

PositiveElement direct_sum(const PositiveElement& a, const PositiveElement& b) {
  require_same_algebra(a, b);
  std::vector<int> sizes;
  std::vector<Matrix> blocks;
  for (std::size_t j = 0; j < a.block_count(); ++j) {
    const int n = a.algebra().block_sizes[j];
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    m.topLeftCorner(n, n) = a.block(j);
    m.bottomRightCorner(n, n) = b.block(j);
    sizes.push_back(2 * n);
    blocks.push_back(std::move(m));
  }
  return PositiveElement(FiniteDimAlgebra(sizes), std::move(blocks));
}

namespace {

Matrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = {re, im};
    }
  }
  return g;
}

}  // namespace

Matrix random_psd_block(int size, int rank, Rng& rng) {
  rank = std::clamp(rank, 0, size);
  if (rank == 0) return Matrix::Zero(size, size);
  const Matrix g = gaussian(size, rank, rng);
  return g * g.adjoint();
}

PositiveElement random_positive(const FiniteDimAlgebra& algebra, Rng& rng, double truncate_probability) {
  std::vector<Matrix> blocks;
  for (int n : algebra.block_sizes) {
    const int rank = coin(rng, truncate_probability) ? static_cast<int>(uniform_index(rng, 0, n)) : n;
    blocks.push_back(random_psd_block(n, rank, rng));
  }
  return PositiveElement(algebra, std::move(blocks));
}

FiniteDimAlgebra random_algebra(Rng& rng, int max_blocks, int max_size) {
  std::vector<int> sizes(uniform_index(rng, 1, max_blocks));
  for (auto& n : sizes) n = static_cast<int>(uniform_index(rng, 1, max_size));
  return FiniteDimAlgebra(sizes);
}

nlohmann::ordered_json to_json(const PositiveElement& a) {
  nlohmann::ordered_json j;
  j["block_sizes"] = a.algebra().block_sizes;
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& m : a.blocks()) {
    auto entries = nlohmann::ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
    }
    blocks.push_back(std::move(entries));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

PositiveElement positive_from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& why) { return Error("positive element: " + why); };
  if (!j.is_object() || !j.contains("block_sizes") || !j.contains("blocks")) {
    throw bad("expected an object with 'block_sizes' and 'blocks'");
  }
  const auto& sizes_json = j["block_sizes"];
  const auto& blocks_json = j["blocks"];
  if (!sizes_json.is_array() || !blocks_json.is_array()) throw bad("'block_sizes' and 'blocks' must be arrays");
  std::vector<int> sizes;
  for (const auto& s : sizes_json) {
    if (!s.is_number_integer()) throw bad("block sizes must be integers");
    sizes.push_back(s.get<int>());
  }
  const FiniteDimAlgebra algebra(sizes);
  if (blocks_json.size() != sizes.size()) throw bad("block count does not match 'block_sizes'");
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const int n = sizes[b];
    const auto& entries = blocks_json[b];
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
      throw bad("block " + std::to_string(b + 1) + " needs " + std::to_string(n * n) + " entries");
    }
    Matrix m(n, n);
    for (int k = 0; k < n * n; ++k) {
      const auto& z = entries[static_cast<std::size_t>(k)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw bad("entries must be [re, im] pairs");
      }
      m(k / n, k % n) = {z[0].get<double>(), z[1].get<double>()};
    }
    blocks.push_back(std::move(m));
  }
  return PositiveElement(algebra, std::move(blocks));
}

ProbeResult falsification_probe(const PositiveElement& a, const PositiveElement& b, double eps, int candidates,
                                Rng& rng) {
  require_same_algebra(a, b);
  const PositiveElement cut = eps_cut(a, eps);
  const auto rc = rank_vector(cut);
  const auto rb = rank_vector(b);
  std::size_t block = rc.ranks.size();
  for (std::size_t j = 0; j < rc.ranks.size() && block == rc.ranks.size(); ++j) {
    if (rc.ranks[j] > rb.ranks[j]) block = j;
  }
  if (block == rc.ranks.size()) throw Error("falsification_probe: (a - eps)_+ is dominated by b");

  // The full residual is at least the residual on this block.
  const int n = a.algebra().block_sizes[block];
  const Matrix& target = cut.block(block);
  const Matrix& bj = b.block(block);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  ProbeResult out;
  out.best_residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < candidates; ++k) {
    const Matrix c = gaussian(n, n, rng) * std::pow(10.0, log_scale(rng));
    const Matrix diff = c * bj * c.adjoint() - target;
    ++out.candidates;
    // Operator norm >= Frobenius norm / sqrt(n).
    if (diff.norm() / std::sqrt(static_cast<double>(n)) >= out.best_residual) continue;
    out.best_residual = std::min(out.best_residual, hermitian_norm(diff));
  }
  return out;
}

namespace {

double smallest_positive_eigenvalue(const PositiveElement& a, double tol) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ev : spectrum(a)) {
    for (double x : ev) {
      if (x > tol) best = std::min(best, x);
    }
  }
  return best;
}

double largest_eigenvalue(const PositiveElement& a) {
  double best = 0;
  for (const auto& ev : spectrum(a)) best = std::max(best, ev.maxCoeff());
  return best;
}

double max_entry_distance(const PositiveElement& a, const PositiveElement& b) {
  double d = 0;
  for (std::size_t j = 0; j < a.block_count(); ++j) d = std::max(d, (a.block(j) - b.block(j)).cwiseAbs().maxCoeff());
  return d;
}

PositiveElement add(const PositiveElement& a, const PositiveElement& b) {
  std::vector<Matrix> blocks;
  for (std::size_t j = 0; j < a.block_count(); ++j) blocks.push_back(a.block(j) + b.block(j));
  return PositiveElement(a.algebra(), std::move(blocks));
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

LawReport oracle_selftest(const std::vector<std::pair<PositiveElement, PositiveElement>>& pairs,
                          const SelftestConfig& config) {
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  LawResult agreement("oracle-agreement"), witness("witness-soundness"), probe("falsification-probe"),
      addition("class-addition"), identity("eps-cut-identity"), rank_drop("eps-cut-rank"),
      monotone("eps-cut-monotone");
  for (auto* law : {&agreement, &witness, &probe, &addition, &identity, &rank_drop, &monotone}) law->unknown = 0;
  std::uniform_real_distribution<double> unit(0.05, 0.95);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    const std::string tag = "pair " + std::to_string(k);
    const auto ra = rank_vector(a);
    const auto rb = rank_vector(b);
    const auto sub = cuntz_subeq(a, b);

    if (sub.unstable) {
      agreement.inconclusive();
    } else {
      const bool abstract = leq(to_ext_nat_vector(ra.ranks), to_ext_nat_vector(rb.ranks));
      agreement.record(sub.holds == abstract, [&] {
        return tag + ": ranks " + describe_ranks(ra.ranks) + " vs " + describe_ranks(rb.ranks);
      });
    }

    const double top = largest_eigenvalue(a);
    const double low = smallest_positive_eigenvalue(a, kRankTol);
    // Witnesses: at the fine cut whenever a is subequivalent to b, and at
    // a random cut whenever its precondition holds.
    std::vector<double> cuts;
    if (sub.holds && std::isfinite(low)) cuts.push_back(low / 2);
    if (top > kRankTol) cuts.push_back(unit(rng) * top);
    for (double eps : cuts) {
      const auto rc = rank_vector(eps_cut(a, eps));
      if (!cuntz_subeq(eps_cut(a, eps), b).holds) continue;
      try {
        const Witness w = witness_construct(a, b, eps);
        witness.record(w.residual <= kResidualTol, [&] {
          return tag + ", eps " + fmt(eps) + ": residual " + fmt(w.residual);
        });
      } catch (const Error& e) {
        witness.fail(tag + ", eps " + fmt(eps) + ": " + e.what() + " (cut ranks " + describe_ranks(rc.ranks) + ")");
      }
    }

    if (!sub.unstable && !sub.holds) {
      const ProbeResult p = falsification_probe(a, b, low / 2, config.probe_candidates, rng);
      probe.record(p.best_residual > 1e-3, [&] {
        return tag + ": random candidate reached residual " + fmt(p.best_residual);
      });
    }

    {
      const auto sum = rank_vector(direct_sum(a, b));
      if (sum.unstable || ra.unstable || rb.unstable) {
        addition.inconclusive();
      } else {
        bool ok = true;
        for (std::size_t j = 0; j < sum.ranks.size(); ++j) ok = ok && sum.ranks[j] == ra.ranks[j] + rb.ranks[j];
        addition.record(ok, [&] {
          return tag + ": rank of sum " + describe_ranks(sum.ranks) + " vs " + describe_ranks(ra.ranks) + " + " +
                 describe_ranks(rb.ranks);
        });
      }
    }

    if (top > kRankTol) {
      const double e1 = unit(rng) * top / 2, e2 = unit(rng) * top / 2;
      const auto twice = eps_cut(eps_cut(a, e1), e2);
      const auto once = eps_cut(a, e1 + e2);
      const double dist = max_entry_distance(twice, once);
      identity.record(dist <= 1e-9 * std::max(1.0, top), [&] {
        return tag + ": cut(cut(a, " + fmt(e1) + "), " + fmt(e2) + ") differs by " + fmt(dist);
      });

      const auto rc = rank_vector(once);
      if (rc.unstable || ra.unstable) {
        rank_drop.inconclusive();
      } else {
        rank_drop.record(leq(to_ext_nat_vector(rc.ranks), to_ext_nat_vector(ra.ranks)),
                         [&] { return tag + ": cut raised the rank"; });
      }

      // a <= a + p in the positive order.
      const PositiveElement bigger = add(a, random_positive(a.algebra(), rng));
      const double e = unit(rng) * top;
      const auto lo = rank_vector(eps_cut(a, e * 1.5));
      const auto hi = rank_vector(eps_cut(bigger, e));
      if (lo.unstable || hi.unstable) {
        monotone.inconclusive();
      } else {
        monotone.record(leq(to_ext_nat_vector(lo.ranks), to_ext_nat_vector(hi.ranks)), [&] {
          return tag + ", eps " + fmt(e) + ": " + describe_ranks(lo.ranks) + " vs " + describe_ranks(hi.ranks);
        });
      }
    }
  }
  return {agreement, witness, probe, addition, identity, rank_drop, monotone};
}

LawReport oracle_selftest(const SelftestConfig& config) {
  Rng rng(config.seed);
  std::vector<std::pair<PositiveElement, PositiveElement>> pairs;
  for (int k = 0; k < config.cases; ++k) {
    const auto algebra = random_algebra(rng);
    auto a = random_positive(algebra, rng);
    auto b = random_positive(algebra, rng);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return oracle_selftest(pairs, config);
}

LawResult class_addition_check(int samples, std::uint64_t seed, double tol) {
  Rng rng(seed);
  LawResult res("class-addition");
  res.unknown = 0;
  for (int k = 0; k < samples; ++k) {
    const auto algebra = random_algebra(rng);
    const auto a = random_positive(algebra, rng);
    const auto b = random_positive(algebra, rng);
    const auto ra = rank_vector(a, tol), rb = rank_vector(b, tol), rs = rank_vector(direct_sum(a, b), tol);
    if (ra.unstable || rb.unstable || rs.unstable) {
      res.inconclusive();
      continue;
    }
    bool ok = true;
    for (std::size_t j = 0; j < rs.ranks.size(); ++j) ok = ok && rs.ranks[j] == ra.ranks[j] + rb.ranks[j];
    res.record(ok, [&] {
      return "sample " + std::to_string(k) + ": " + describe_ranks(rs.ranks) + " vs " + describe_ranks(ra.ranks) +
             " + " + describe_ranks(rb.ranks);
    });
  }
  return res;
}

}  // namespace cukit::oracle
