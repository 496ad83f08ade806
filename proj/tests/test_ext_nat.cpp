#include "cukit/ext_nat.hpp"

#include <doctest.h>

using namespace cukit;

TEST_CASE("ExtNat arithmetic saturates at infinity") {
  CHECK(ExtNat(2) + ExtNat(3) == ExtNat(5));
  CHECK(ExtNat(2) + ExtNat::inf() == ExtNat::inf());
  CHECK(ExtNat::inf() + ExtNat::inf() == ExtNat::inf());
  CHECK(scale(0, ExtNat::inf()) == ExtNat(0));
  CHECK(scale(3, ExtNat::inf()) == ExtNat::inf());
  CHECK(scale(3, ExtNat(4)) == ExtNat(12));
}

TEST_CASE("ExtNat order and way-below") {
  CHECK(leq(ExtNat(0), ExtNat::inf()));
  CHECK(leq(ExtNat(3), ExtNat(3)));
  CHECK_FALSE(leq(ExtNat::inf(), ExtNat(100)));
  CHECK(way_below(ExtNat(3), ExtNat(3)));
  CHECK(way_below(ExtNat(3), ExtNat::inf()));
  CHECK_FALSE(way_below(ExtNat::inf(), ExtNat::inf()));
  CHECK_FALSE(way_below(ExtNat(4), ExtNat(3)));
}

TEST_CASE("ExtNat values beyond 64 bits") {
  ExtNat big = ExtNat::fin(Natural(1) << 100);
  CHECK(to_string(big + big) == (Natural(1) << 101).str());
  CHECK(leq(big, big + ExtNat(1)));
}

TEST_CASE("ExtNat text round trip") {
  CHECK(to_string(ExtNat::inf()) == "inf");
  CHECK(parse_ext_nat("inf") == ExtNat::inf());
  CHECK(parse_ext_nat("17") == ExtNat(17));
  CHECK_THROWS_AS(parse_ext_nat("-1"), Error);
  CHECK_THROWS_AS(parse_ext_nat(""), Error);
  CHECK_THROWS_AS(parse_ext_nat("x"), Error);
  CHECK_THROWS_AS(ExtNat::inf().value(), Error);
}

TEST_CASE("ExtRational way-below") {
  const auto half = ExtRational::fin(Rational(1, 2));
  CHECK_FALSE(way_below(half, half));
  CHECK(way_below(ExtRational(0), ExtRational(0)));
  CHECK(way_below(half, ExtRational(1)));
  CHECK(way_below(ExtRational(5), ExtRational::inf()));
  CHECK_FALSE(way_below(ExtRational::inf(), ExtRational::inf()));
  CHECK(to_string(half) == "1/2");
  CHECK(to_string(ExtRational(3)) == "3");
  CHECK(to_string(half + half) == "1");
}
