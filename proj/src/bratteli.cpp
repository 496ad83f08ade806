#include "cukit/bratteli.hpp"

#include <fstream>
#include <sstream>

namespace cukit {

using nlohmann::json;

namespace {

Error schema_error(const std::string& what) { return Error("bratteli schema: " + what); }

long long read_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw schema_error(where + " must be an integer");
  return v.get<long long>();
}

}  // namespace

BratteliDiagram parse_bratteli(const json& doc) {
  if (!doc.is_object()) throw schema_error("document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "dims" && key != "mults" && key != "stationary" && key != "unital") {
      throw schema_error("unknown field '" + key + "'");
    }
  }
  if (!doc.contains("dims") || !doc["dims"].is_array()) throw schema_error("'dims' must be an array");
  if (!doc.contains("mults") || !doc["mults"].is_array()) throw schema_error("'mults' must be an array");

  BratteliDiagram b;
  for (const char* flag : {"stationary", "unital"}) {
    if (!doc.contains(flag)) continue;
    if (!doc[flag].is_boolean()) throw schema_error(std::string("'") + flag + "' must be a boolean");
  }
  b.stationary = doc.value("stationary", false);
  b.unital = doc.value("unital", false);

  const auto& dims = doc["dims"];
  if (dims.empty()) throw schema_error("'dims' must list at least one stage");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::string where = "dims of stage " + std::to_string(i + 1);
    if (!dims[i].is_array() || dims[i].empty()) throw schema_error(where + " must be a non-empty array");
    std::vector<long long> stage;
    for (const auto& x : dims[i]) {
      const long long v = read_int(x, where);
      if (v <= 0) throw Error(where + ": block sizes must be positive");
      stage.push_back(v);
    }
    b.dims.push_back(std::move(stage));
  }

  const auto& mults = doc["mults"];
  for (std::size_t i = 0; i < mults.size(); ++i) {
    const std::string where = "mults of stage " + std::to_string(i + 1);
    if (!mults[i].is_array()) throw schema_error(where + " must be a matrix");
    std::vector<std::vector<Natural>> rows;
    for (const auto& row : mults[i]) {
      if (!row.is_array()) throw schema_error(where + " must be a matrix");
      std::vector<Natural> r;
      for (const auto& x : row) {
        const long long v = read_int(x, where);
        if (v < 0) throw Error(where + ": multiplicities must be nonnegative");
        r.emplace_back(v);
      }
      rows.push_back(std::move(r));
    }
    try {
      b.mults.emplace_back(std::move(rows));
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }

  const std::size_t n = b.dims.size();
  const std::size_t expected_links = n - 1;
  if (b.stationary) {
    if (b.mults.size() != n && b.mults.size() != expected_links) {
      throw Error("stationary diagram with " + std::to_string(n) + " stages needs " + std::to_string(n - 1) +
                  " or " + std::to_string(n) + " multiplicity matrices");
    }
    if (b.mults.empty()) throw Error("stationary diagram needs a tail matrix");
  } else if (b.mults.size() != expected_links) {
    throw Error("diagram with " + std::to_string(n) + " stages needs " + std::to_string(expected_links) +
                " multiplicity matrices, got " + std::to_string(b.mults.size()));
  }

  for (std::size_t i = 0; i < b.mults.size(); ++i) {
    const auto& m = b.mults[i];
    const std::size_t in = b.dims[i].size();
    const std::size_t out = i + 1 < n ? b.dims[i + 1].size() : b.dims.back().size();
    if (m.rows() != out || m.cols() != in) {
      throw Error("stage " + std::to_string(i + 1) + ": multiplicity matrix is " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()) + ", expected " + std::to_string(out) + "x" + std::to_string(in));
    }
  }
  if (b.stationary && b.mults.size() == expected_links) {
    if (!b.mults.back().is_square()) {
      throw Error("stage " + std::to_string(b.mults.size()) + ": repeated tail matrix must be square");
    }
  }

  if (b.unital) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto& m = b.mults[i];
      for (std::size_t r = 0; r < m.rows(); ++r) {
        Natural acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) acc += m.at(r, c) * b.dims[i][c];
        if (acc != b.dims[i + 1][r]) {
          throw Error("stage " + std::to_string(i + 1) + ": block " + std::to_string(r + 1) + " of stage " +
                      std::to_string(i + 2) + " has size " + std::to_string(b.dims[i + 1][r]) +
                      " but the unital embedding gives " + acc.str());
        }
      }
    }
  }
  return b;
}

BratteliDiagram parse_bratteli(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_bratteli(doc);
}

BratteliDiagram load_bratteli(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bratteli(buf.str());
}

DiagramPtr to_cu_diagram(const BratteliDiagram& b) {
  std::vector<std::size_t> dims;
  for (const auto& d : b.dims) dims.push_back(d.size());
  std::vector<MatrixCuMap> maps = b.mults;
  if (b.stationary && maps.size() + 1 == dims.size()) {
    // The last listed matrix repeats from the last stage on.
    maps.push_back(maps.back());
  }
  return std::make_shared<const CuDiagram>(std::move(dims), std::move(maps), b.stationary);
}

Tri af_compare(const Thread& a, const Thread& b, std::size_t horizon) { return thread_leq(a, b, horizon); }

CompactApproximation compacts_below(const Thread& a, std::size_t count, std::size_t horizon) {
  const auto& d = a.diagram();
  const std::size_t h = d->effective_horizon(horizon);
  if (a.has_exact_tail() && a.exact_or_self().finite_entries()) {
    const Thread& c = a.exact_or_self();
    return {std::vector<Thread>(count, c), {Verdict::le, h, Certificate::search}};
  }

  const Thread r = rapid_representative(a, horizon);
  std::vector<Thread> all;
  for (std::size_t k = a.start(); k <= std::max(h, a.start()); ++k) all.push_back(embed(d, k, r.entry(k)));

  ThreadSequence seq;
  seq.term = [all](std::size_t n) { return all[std::min(n, all.size()) - 1]; };
  seq.stabilizes_at = all.size();
  seq.limit = a;
  const LimitSup ls = limit_sup(seq, horizon);

  CompactApproximation out{{}, ls.verified};
  for (std::size_t n = 1; n <= count; ++n) {
    const Thread& c = all[std::min(n, all.size()) - 1];
    const Tri below = thread_leq(c, a, horizon);
    if (below.is_not_le()) throw Error("compacts_below: class " + encode_thread(c) + " not below the input");
    if (below.is_unknown()) out.certified = below;
    out.classes.push_back(c);
  }
  return out;
}

namespace {

/// Finite-vector classes below y that may interpolate: y's own entries
/// with ∞ replaced by the horizon, at each stage up to the horizon.
std::vector<Thread> interpolant_candidates(const Thread& x, const Thread& y, std::size_t h) {
  std::vector<Thread> out;
  if (x.has_exact_tail() && x.exact_or_self().finite_entries()) out.push_back(x.exact_or_self());
  const auto ey = y.expand(h);
  for (std::size_t i = y.start(); i <= h; ++i) {
    const auto z = basis_term(ey[i - 1], Natural(h));
    if (!z.is_zero()) out.push_back(Thread::image(y.diagram(), i, z));
  }
  return out;
}

}  // namespace

LawResult compact_interpolation_check(const std::vector<ThreadPair>& pairs, std::size_t horizon) {
  LawResult res("compact-interpolation");
  res.unknown = 0;
  for (const auto& [x, y] : pairs) {
    const Tri wb = thread_way_below(x, y, horizon);
    const std::size_t h = x.diagram()->effective_horizon(std::max({horizon, x.prefix_end(), y.prefix_end()}));

    bool found = x.has_exact_tail() && x.exact_or_self().finite_entries() &&
                 x.exact_or_self().is_image() && x.exact_or_self().prefix().front().is_zero();
    bool undecided = false;
    for (const auto& z : found ? std::vector<Thread>{} : interpolant_candidates(x, y, h)) {
      const Tri lower = thread_leq(x, z, horizon);
      if (lower.is_not_le()) continue;
      const Tri upper = thread_leq(z, y, horizon);
      if (lower.is_le() && upper.is_le()) {
        found = true;
        break;
      }
      if (!upper.is_not_le()) undecided = true;
    }
    if (wb.is_unknown() || (!found && undecided)) {
      res.inconclusive();
      continue;
    }
    res.record(wb.is_le() == found, [&, x = x, y = y] {
      return encode_thread(x) + " vs " + encode_thread(y) + ": way-below " + to_string(wb.verdict) +
             ", interpolant " + (found ? "found" : "absent");
    });
  }
  return res;
}

LawResult order_equals_inclusion_check(const std::vector<ThreadPair>& pairs, std::size_t horizon) {
  LawResult res("order-equals-inclusion");
  res.unknown = 0;
  for (const auto& [a, b] : pairs) {
    if (!a.finite_entries() || !b.finite_entries()) throw Error("order_equals_inclusion_check: classes must be compact");
    const Tri cmp = af_compare(a, b, horizon);
    const std::size_t h = a.diagram()->effective_horizon(std::max({horizon, a.prefix_end(), b.prefix_end()}));
    const auto ea = a.expand(h);
    const auto eb = b.expand(h);
    bool dominated = false;
    for (std::size_t j = a.prefix_end(); j <= h && !dominated; ++j) dominated = leq(ea[j - 1], eb[j - 1]);
    if (cmp.is_unknown()) {
      res.inconclusive();
      continue;
    }
    res.record(cmp.is_le() == dominated, [&, a = a, b = b] {
      return encode_thread(a) + " vs " + encode_thread(b) + ": compare " + to_string(cmp.verdict) +
             ", domination " + (dominated ? "found" : "absent");
    });
  }
  return res;
}

TraceValue perron_trace(const Thread& a) {
  const auto& d = *a.diagram();
  if (!d.stationary()) throw Error("perron_trace: diagram is not stationary");
  if (!d.perron()) throw Error("perron_trace: tail matrix is not primitive");
  return *thread_trace(a);
}

}  // namespace cukit
