#include "cukit/instances.hpp"

#include <doctest.h>

using namespace cukit;

namespace {
const ExtNat inf = ExtNat::inf();
}

TEST_CASE("vector order is coordinatewise") {
  const ExtNatVector a{1, 2}, b{1, inf};
  CHECK(leq(a, b));
  CHECK_FALSE(leq(b, a));
  CHECK(way_below(a, b));
  CHECK_FALSE(way_below(b, b));
  CHECK(way_below(a, a));
  CHECK((a + b) == ExtNatVector{2, inf});
  CHECK_THROWS_AS(leq(a, ExtNatVector{1}), Error);
}

TEST_CASE("vector text form") {
  CHECK(to_string(ExtNatVector{1, inf, 0}) == "1,inf,0");
  CHECK(parse_ext_nat_vector("1,inf,0") == ExtNatVector{1, inf, 0});
  CHECK_THROWS_AS(parse_ext_nat_vector("1,,2"), Error);
}

TEST_CASE("basis term replaces infinite coordinates") {
  CHECK(basis_term(ExtNatVector{3, inf}, 7) == ExtNatVector{3, 7});
}

TEST_CASE("matrix maps act with 0 * inf = 0") {
  const MatrixCuMap m{{1, 0}, {2, 1}};
  CHECK(apply_map(m, ExtNatVector{3, 4}) == ExtNatVector{3, 10});
  CHECK(apply_map(m, ExtNatVector{0, inf}) == ExtNatVector{0, inf});
  CHECK(apply_map(m, ExtNatVector{inf, 0}) == ExtNatVector{inf, inf});
  CHECK_THROWS_AS(apply_map(m, ExtNatVector{1}), Error);
  CHECK(compose(m, m) == MatrixCuMap{{1, 0}, {4, 1}});
  CHECK(compose(MatrixCuMap::identity(2), m) == m);
}

TEST_CASE("malformed matrices are rejected") {
  CHECK_THROWS_AS((MatrixCuMap{{1, 2}, {3}}), Error);
  CHECK_THROWS_AS((MatrixCuMap{{-1}}), Error);
}

TEST_CASE("matrix maps pass the morphism laws") {
  const LawConfig cfg{200, 3, 64};
  for (const auto& m : {MatrixCuMap{{2}}, MatrixCuMap{{1, 1}, {1, 0}}, MatrixCuMap{{0, 3, 1}}, MatrixCuMap::zero(2, 2)}) {
    const auto r = check_morphism(m, vector_sampler(m.cols()), cfg);
    CHECK(all_passed(r));
  }
}

TEST_CASE("a non-additive map is caught") {
  const MatrixCuMap shape{{1}};
  const VectorMap doubled_plus_one = [](const ExtNatVector& v) {
    if (v[0].is_zero()) return v;
    return ExtNatVector{v[0] + v[0] + ExtNat(1)};
  };
  const auto r = check_morphism(shape, doubled_plus_one, vector_sampler(1), {200, 0, 64});
  CHECK_FALSE(find_law(r, "additivity").passed());
}

TEST_CASE("a map sending finite to infinite breaks way-below") {
  const MatrixCuMap shape{{1}};
  const VectorMap blowup = [](const ExtNatVector& v) {
    return v[0].is_zero() ? v : ExtNatVector{inf};
  };
  const auto r = check_morphism(shape, blowup, vector_sampler(1), {200, 0, 64});
  CHECK_FALSE(find_law(r, "way-below").passed());
  CHECK(find_law(r, "zero").passed());
}

TEST_CASE("product instance needs a dimension") {
  CHECK_THROWS_AS(product_instance(0), Error);
}
