#include "cukit/cli.hpp"

#include "cukit/bratteli.hpp"
#include "cukit/cu_core.hpp"
#include "cukit/instances.hpp"
#include "cukit/oracle.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace cukit {

using nlohmann::ordered_json;

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::size_t default_horizon() {
  const char* env = std::getenv("CU_KIT_HORIZON");
  if (!env || !*env) return kDefaultHorizon;
  std::size_t value = 0;
  for (const char* p = env; *p; ++p) {
    if (*p < '0' || *p > '9') throw UsageError("CU_KIT_HORIZON must be a positive integer");
    value = value * 10 + static_cast<std::size_t>(*p - '0');
    if (value > 1000000) throw UsageError("CU_KIT_HORIZON too large");
  }
  if (value == 0) throw UsageError("CU_KIT_HORIZON must be at least 1");
  return value;
}

void emit(const ordered_json& report, const std::string& output, std::ostream& out, int indent = 2) {
  const std::string text = report.dump(indent) + "\n";
  if (!output.empty()) {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw UsageError("cannot write " + output);
    file << text;
  }
  out << text;
}

ordered_json law_report_json(const LawReport& report) {
  ordered_json j;
  j["passed"] = all_passed(report);
  j["laws"] = to_json(report);
  return j;
}

int cmd_check_laws(const std::string& instance, int cases, std::uint64_t seed, const std::string& output,
                   std::ostream& out) {
  const LawConfig cfg{cases, seed, 64};
  LawReport report;
  if (instance == "extnat") {
    report = check_laws(extnat_instance(), extnat_sampler(), cfg);
  } else if (instance == "extrational") {
    report = check_laws(rational_instance(), rational_sampler(), cfg);
  } else if (instance.rfind("extnat^", 0) == 0) {
    const std::string k_text = instance.substr(7);
    if (k_text.empty() || k_text.size() > 3 || k_text.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("unknown instance '" + instance + "'");
    }
    const std::size_t k = std::stoul(k_text);
    if (k == 0) throw UsageError("unknown instance '" + instance + "'");
    report = check_laws(product_instance(k), vector_sampler(k), cfg);
  } else {
    throw UsageError("unknown instance '" + instance + "' (expected extnat, extnat^k or extrational)");
  }
  ordered_json j;
  j["instance"] = instance;
  j["cases"] = cases;
  j["seed"] = seed;
  j.update(law_report_json(report));
  emit(j, output, out);
  return all_passed(report) ? kExitOk : kExitFailure;
}

struct AfArgs {
  std::string sub;
  std::string diagram;
  std::string a;
  std::string b;
  std::size_t horizon = 0;
  std::size_t count = 3;
  std::string output;
};

Thread require_thread(const DiagramPtr& d, const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string("missing ") + flag);
  return parse_thread(d, text);
}

ordered_json tri_json(const Tri& t) {
  ordered_json j;
  j["result"] = to_string(t.verdict);
  if (t.is_not_le()) j["certificate"] = to_string(t.certificate);
  if (t.is_unknown()) j["horizon"] = t.horizon;
  return j;
}

int tri_exit(const Tri& t) { return t.is_unknown() ? kExitUnknown : kExitOk; }

int cmd_af(const AfArgs& args, std::ostream& out) {
  DiagramPtr d;
  try {
    d = to_cu_diagram(load_bratteli(args.diagram));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::optional<Thread> a, b;
  try {
    a = require_thread(d, args.a, "--a");
    if (args.sub == "compare" || args.sub == "interpolate") b = require_thread(d, args.b, "--b");
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  if (args.sub == "compare") {
    const Tri t = af_compare(*a, *b, args.horizon);
    emit(tri_json(t), args.output, out, -1);
    return tri_exit(t);
  }
  if (args.sub == "compacts") {
    const auto res = compacts_below(*a, args.count, args.horizon);
    ordered_json j;
    auto classes = ordered_json::array();
    for (const auto& c : res.classes) classes.push_back(encode_thread(c));
    j["classes"] = std::move(classes);
    j.update(tri_json(res.certified));
    emit(j, args.output, out, -1);
    return tri_exit(res.certified);
  }
  if (args.sub == "interpolate") {
    const LawResult r = compact_interpolation_check({{*a, *b}}, args.horizon);
    const Tri wb = thread_way_below(*a, *b, args.horizon);
    ordered_json j = tri_json(wb);
    j["biconditional"] = r.unknown.value_or(0) > 0 ? "Unknown" : (r.passed() ? "holds" : "fails");
    emit(j, args.output, out, -1);
    if (!r.passed()) return kExitFailure;
    return r.unknown.value_or(0) > 0 ? kExitUnknown : kExitOk;
  }
  if (args.sub == "trace") {
    TraceValue t;
    try {
      t = perron_trace(*a);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    ordered_json j;
    j["value"] = to_string(t);
    emit(j, args.output, out, -1);
    return kExitOk;
  }
  throw UsageError("unknown af subcommand '" + args.sub + "'");
}

int cmd_oracle(int cases, std::uint64_t seed, const std::string& fixture, const std::string& output,
               std::ostream& out) {
  oracle::SelftestConfig cfg;
  cfg.cases = cases;
  cfg.seed = seed;
  LawReport report;
  if (!fixture.empty()) {
    std::vector<std::pair<oracle::PositiveElement, oracle::PositiveElement>> pairs;
    try {
      std::ifstream in(fixture);
      if (!in) throw Error("cannot open " + fixture);
      const auto doc = nlohmann::json::parse(in);
      if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
        throw Error("fixture must be an object with a 'pairs' array");
      }
      for (const auto& p : doc["pairs"]) {
        if (!p.is_object() || !p.contains("a") || !p.contains("b")) throw Error("each pair needs 'a' and 'b'");
        pairs.emplace_back(oracle::positive_from_json(p["a"]), oracle::positive_from_json(p["b"]));
      }
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("fixture: ") + e.what());
    } catch (const Error& e) {
      throw UsageError(std::string("fixture: ") + e.what());
    }
    report = oracle::oracle_selftest(pairs, cfg);
  } else {
    report = oracle::oracle_selftest(cfg);
  }
  ordered_json j;
  if (fixture.empty()) {
    j["cases"] = cases;
  } else {
    j["fixture"] = fixture;
  }
  j["seed"] = seed;
  j.update(law_report_json(report));
  emit(j, output, out);
  return all_passed(report) ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cuntz semigroup toolkit", "cukit"};
  app.require_subcommand(1);

  std::size_t horizon = 0;
  int cases = 0;
  std::uint64_t seed = 0;
  std::string output;

  auto* laws = app.add_subcommand("check-laws", "Run the Cu law suite on a built-in instance");
  std::string instance;
  laws->add_option("--instance", instance, "extnat, extnat^k or extrational")->required();
  laws->add_option("--cases", cases, "Cases per law")->default_val(1000)->check(CLI::PositiveNumber);
  laws->add_option("--seed", seed, "Random seed")->default_val(0);
  laws->add_option("--output", output, "Also write the report here");

  auto* af = app.add_subcommand("af", "Queries on the Cuntz semigroup of an AF algebra");
  AfArgs af_args;
  af->add_option("sub", af_args.sub, "compare | compacts | interpolate | trace")
      ->required()
      ->check(CLI::IsMember({"compare", "compacts", "interpolate", "trace"}));
  af->add_option("--diagram", af_args.diagram, "Bratteli diagram JSON")->required();
  af->add_option("--a", af_args.a, "Class, thread encoding");
  af->add_option("--b", af_args.b, "Class, thread encoding");
  af->add_option("--horizon", horizon, "Search horizon")->check(CLI::PositiveNumber);
  af->add_option("--count", af_args.count, "Number of compact classes")->default_val(3)->check(CLI::PositiveNumber);
  af->add_option("--output", output, "Also write the report here");

  auto* orc = app.add_subcommand("oracle-selftest", "Matrix oracle invariants on random or fixture pairs");
  std::string fixture;
  orc->add_option("--cases", cases, "Random pairs")->default_val(500)->check(CLI::PositiveNumber);
  orc->add_option("--seed", seed, "Random seed")->default_val(0);
  orc->add_option("--fixture", fixture, "JSON file with {\"pairs\": [{\"a\":..., \"b\":...}]}");
  orc->add_option("--output", output, "Also write the report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, msg, msg);
    (code == 0 ? out : err) << msg.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (laws->parsed()) return cmd_check_laws(instance, cases, seed, output, out);
    if (af->parsed()) {
      af_args.horizon = horizon ? horizon : default_horizon();
      af_args.output = output;
      return cmd_af(af_args, out);
    }
    if (orc->parsed()) return cmd_oracle(cases, seed, fixture, output, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cukit
