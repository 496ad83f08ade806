#include "cukit/cu_core.hpp"

namespace cukit {

void LawResult::fail(std::string counterexample) {
  ++cases;
  ++failures;
  if (!first_counterexample) first_counterexample = std::move(counterexample);
}

void LawResult::inconclusive() {
  ++cases;
  unknown = unknown.value_or(0) + 1;
}

nlohmann::ordered_json to_json(const LawResult& r) {
  nlohmann::ordered_json j;
  j["law"] = r.law;
  j["cases"] = r.cases;
  j["failures"] = r.failures;
  if (r.first_counterexample) {
    j["first_counterexample"] = *r.first_counterexample;
  } else {
    j["first_counterexample"] = nullptr;
  }
  if (r.unknown) j["unknown"] = *r.unknown;
  return j;
}

nlohmann::ordered_json to_json(const LawReport& report) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : report) arr.push_back(to_json(r));
  return arr;
}

bool all_passed(const LawReport& report) {
  return std::all_of(report.begin(), report.end(), [](const LawResult& r) { return r.passed(); });
}

const LawResult& find_law(const LawReport& report, const std::string& law) {
  for (const auto& r : report) {
    if (r.law == law) return r;
  }
  throw Error("no law named " + law);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace cukit
