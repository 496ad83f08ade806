#include "controls.hpp"
#include "cukit/cu_core.hpp"
#include "cukit/instances.hpp"

#include <doctest.h>

using namespace cukit;

namespace {

std::vector<std::string> failing_laws(const LawReport& r) {
  std::vector<std::string> out;
  for (const auto& l : r) {
    if (!l.passed()) out.push_back(l.law);
  }
  return out;
}

}  // namespace

TEST_CASE("law suite passes on the built-in instances") {
  const LawConfig cfg{300, 7, 64};
  CHECK(failing_laws(check_laws(extnat_instance(), extnat_sampler(), cfg)).empty());
  CHECK(failing_laws(check_laws(product_instance(3), vector_sampler(3), cfg)).empty());
  CHECK(failing_laws(check_laws(rational_instance(), rational_sampler(), cfg)).empty());
}

TEST_CASE("law report lists every law with case counts") {
  const auto r = check_laws(extnat_instance(), extnat_sampler(), {50, 1, 64});
  REQUIRE(r.size() == 6);
  CHECK(r[0].law == "L1:ordered-semigroup");
  CHECK(r[5].law == "L6:interplay");
  for (const auto& l : r) CHECK(l.cases == 50);
  const auto j = to_json(r[0]);
  CHECK(j.dump() == R"({"law":"L1:ordered-semigroup","cases":50,"failures":0,"first_counterexample":null})");
}

TEST_CASE("way_below set to the order fails only the basis law") {
  const auto r = check_laws(test::way_below_is_order(), extnat_sampler(), {1000, 0, 64});
  CHECK(failing_laws(r) == std::vector<std::string>{"L3:basis"});
  REQUIRE(find_law(r, "L3:basis").first_counterexample);
  CHECK(find_law(r, "L3:basis").first_counterexample->find("inf << inf") != std::string::npos);
}

TEST_CASE("capped way_below fails only additivity of way-below") {
  const auto r = check_laws(test::capped_way_below(), test::capped_sampler(), {1000, 0, 64});
  CHECK(failing_laws(r) == std::vector<std::string>{"L5:way-below-additivity"});
}

TEST_CASE("same seed, same report") {
  const auto a = to_json(check_laws(rational_instance(), rational_sampler(), {200, 11, 64}));
  const auto b = to_json(check_laws(rational_instance(), rational_sampler(), {200, 11, 64}));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("ExtNat basis climbs to a finite value and enumerates infinity") {
  const auto inst = extnat_instance();
  const auto b = inst.basis(ExtNat(3));
  CHECK(b(1) == ExtNat(0));
  CHECK(b(2) == ExtNat(1));
  CHECK(b(4) == ExtNat(3));
  CHECK(b(9) == ExtNat(3));
  CHECK(inst.sup(b) == ExtNat(3));
  const auto binf = inst.basis(ExtNat::inf());
  CHECK(binf(5) == ExtNat(5));
  CHECK(inst.sup(binf) == ExtNat::inf());
}

TEST_CASE("rational basis converges from below") {
  const auto inst = rational_instance();
  const auto q = ExtRational::fin(Rational(3, 2));
  const auto b = inst.basis(q);
  CHECK(b(1) == ExtRational::fin(Rational(3, 4)));
  CHECK(way_below(b(1), b(2)));
  CHECK(inst.sup(b) == q);
}

TEST_CASE("sup without certificate is refused") {
  IncreasingSequence<ExtNat> s;
  s.term = [](std::size_t n) { return ExtNat(static_cast<long long>(n)); };
  CHECK_THROWS_AS(extnat_instance().sup(s), Error);
}
