#include "support.hpp"

#include "cukit/bratteli.hpp"

#include <doctest.h>

using namespace cukit;
using test::fixture;
using test::kInf;

TEST_CASE("parsing Bratteli diagrams") {
  const auto b = parse_bratteli(std::string(R"({"dims":[[1]],"mults":[[[2]]],"stationary":true})"));
  CHECK(b.stationary);
  CHECK(b.mults.front() == MatrixCuMap{{2}});

  const auto two = parse_bratteli(std::string(R"({"dims":[[1],[2,1]],"mults":[[[1],[1]]]})"));
  CHECK_FALSE(two.stationary);
  CHECK(to_cu_diagram(two)->last_stage() == 2u);

  const auto fib = to_cu_diagram(load_bratteli(test::fixture_path("fibonacci.json")));
  CHECK(fib->dim(7) == 2);
  CHECK(fib->map(9) == MatrixCuMap{{1, 1}, {1, 0}});
}

TEST_CASE("shape errors name the stage") {
  try {
    parse_bratteli(std::string(R"({"dims":[[1],[2]],"mults":[[[1],[1]]]})"));
    FAIL("expected a shape error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("stage 1") != std::string::npos);
  }
  CHECK_NOTHROW(parse_bratteli(std::string(R"({"dims":[[1]],"mults":[]})")));
  CHECK_THROWS_AS(parse_bratteli(std::string(R"({"dims":[[1]],"mults":[],"stationary":true})")), Error);
  CHECK_THROWS_AS(parse_bratteli(std::string(R"({"dims":"x","mults":[]})")), Error);
  CHECK_THROWS_AS(parse_bratteli(std::string(R"({"dims":[[0]],"mults":[]})")), Error);
  CHECK_THROWS_AS(parse_bratteli(std::string(R"({"dims":[[1]],"mults":[],"extra":1})")), Error);
  CHECK_THROWS_AS(parse_bratteli(std::string("{not json")), Error);
}

TEST_CASE("unital block sizes are checked only when declared") {
  const std::string bad = R"({"dims":[[1],[3]],"mults":[[[2]]],"unital":true})";
  CHECK_THROWS_AS(parse_bratteli(bad), Error);
  CHECK_NOTHROW(parse_bratteli(std::string(R"({"dims":[[1],[3]],"mults":[[[2]]]})")));
  CHECK_NOTHROW(parse_bratteli(std::string(R"({"dims":[[1],[2]],"mults":[[[2]]],"unital":true})")));
}

TEST_CASE("stationary diagrams repeat a square last matrix") {
  CHECK_THROWS_AS(parse_bratteli(std::string(R"({"dims":[[1],[1,1]],"mults":[[[1],[1]]],"stationary":true})")), Error);
  const auto d = to_cu_diagram(parse_bratteli(std::string(R"({"dims":[[1],[2]],"mults":[[[2]]],"stationary":true})")));
  CHECK(d->map(1) == MatrixCuMap{{2}});
  CHECK(d->map(5) == MatrixCuMap{{2}});
}

TEST_CASE("af_compare") {
  const auto d = fixture("uhf2");
  CHECK(af_compare(embed(d, 2, {1}), embed(d, 1, {1})).is_le());
  const Tri t = af_compare(embed(d, 1, {1}), embed(d, 2, {1}));
  CHECK(t.is_not_le());
  CHECK(t.certificate == Certificate::perron);
  const auto x = embed(d, 2, {5});
  CHECK(af_compare(x, x).is_le());
}

TEST_CASE("compacts below an infinite class") {
  const auto d = fixture("uhf2");
  const auto a = embed(d, 1, {kInf});
  const auto res = compacts_below(a, 3);
  REQUIRE(res.classes.size() == 3);
  CHECK(res.certified.is_le());
  Rational prev = -1;
  for (const auto& c : res.classes) {
    CHECK(c.finite_entries());
    const auto t = perron_trace(c);
    CHECK(t.value > prev);
    prev = t.value;
  }
}

TEST_CASE("compacts below compact and zero classes") {
  const auto d = fixture("uhf6");
  const auto x = embed(d, 2, {4});
  const auto res = compacts_below(x, 4);
  for (const auto& c : res.classes) CHECK(encode_thread(c) == "@2:4");
  for (const auto& c : compacts_below(Thread::zero(d), 2).classes) CHECK(c.entry(5).is_zero());
}

TEST_CASE("compact interpolation") {
  const auto d = fixture("uhf2");
  const auto inf = embed(d, 1, {kInf});
  const std::vector<ThreadPair> pairs{
      {embed(d, 2, {1}), embed(d, 1, {1})},
      {inf, inf},
      {Thread::zero(d), embed(d, 3, {2})},
      {embed(d, 1, {3}), inf},
  };
  const auto r = compact_interpolation_check(pairs);
  CHECK(r.passed());
  CHECK(r.unknown == 0);
  CHECK(thread_way_below(inf, inf).is_not_le());
  CHECK(thread_way_below(embed(d, 1, {3}), inf).is_le());
}

TEST_CASE("order equals inclusion on compact classes") {
  const auto u = fixture("uhf2");
  const auto f = fixture("fibonacci");
  const std::vector<ThreadPair> pairs{
      {embed(u, 2, {1}), embed(u, 1, {1})},
      {embed(f, 1, {1, 0}), embed(f, 1, {0, 1})},
      {embed(f, 1, {0, 1}), embed(f, 1, {1, 0})},
      {embed(f, 2, {2, 1}), embed(f, 2, {2, 1})},
      {embed(u, 2, {2}), embed(u, 3, {0})},
  };
  const auto r = order_equals_inclusion_check(pairs);
  CHECK(r.passed());
  CHECK(r.unknown == 0);
}

TEST_CASE("Perron traces") {
  const auto d = fixture("uhf2");
  CHECK(to_string(perron_trace(embed(d, 1, {1}))) == "1/2");
  CHECK(to_string(perron_trace(embed(d, 2, {1}))) == "1/4");
  CHECK(to_string(perron_trace(Thread::zero(d))) == "0");
  CHECK(perron_trace(embed(d, 1, {kInf})).is_infinite());

  const auto f = fixture("fibonacci");
  const auto t = perron_trace(embed(f, 1, {1, 0}));
  CHECK(t.kind == TraceValue::Kind::interval);
  CHECK(t.lo < t.hi);
  CHECK_THROWS_AS(perron_trace(embed(fixture("two_block"), 1, {1, 0})), Error);
}
