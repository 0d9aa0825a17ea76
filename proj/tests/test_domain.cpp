#include <doctest.h>

#include <cmath>
#include <map>

#include "surropt/domain.hpp"
#include "surropt/errors.hpp"

using namespace surropt;

namespace {

IntegerDomain example_domain() {
  // {0, 0.1, ..., 0.5} x {50, 100, 150}
  return IntegerDomain::build({{"a", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}},
                               {"b", {50.0, 100.0, 150.0}}});
}

}  // namespace

TEST_CASE("mapped index ranges follow the value lists") {
  const IntegerDomain domain = example_domain();
  CHECK(domain.dimension() == 2);
  CHECK(domain.size(0) == 6);
  CHECK(domain.size(1) == 3);
  CHECK(domain.cardinality() == 18);
  CHECK(domain.contains(LatticePoint{{5, 2}}));
  CHECK_FALSE(domain.contains(LatticePoint{{6, 0}}));
  CHECK_FALSE(domain.contains(LatticePoint{{0, -1}}));
}

TEST_CASE("singleton domain") {
  const IntegerDomain domain = IntegerDomain::build({{"only", {7.0}}});
  CHECK(domain.cardinality() == 1);
  CHECK(domain.to_raw(LatticePoint{{0}}) == std::vector<double>{7.0});
}

TEST_CASE("MLP-style table yields 7,588,800 combinations") {
  std::vector<DimensionSpec> dims;
  const auto range = [](double from, double to, double step) {
    std::vector<double> v;
    for (double x = from; x <= to + 1e-9; x += step) v.push_back(x);
    return v;
  };
  dims.push_back({"epochs", range(50, 500, 50)});
  dims.push_back({"dropout", range(0.0, 0.5, 0.1)});
  dims.push_back({"batch", range(50, 200, 5)});
  dims.push_back({"layers", range(1, 6, 1)});
  dims.push_back({"lag", range(30, 365, 5)});
  dims.push_back({"nodes", range(5, 50, 5)});
  const IntegerDomain domain = IntegerDomain::build(dims);
  CHECK(domain.size(0) == 10);
  CHECK(domain.size(1) == 6);
  CHECK(domain.size(2) == 31);
  CHECK(domain.size(3) == 6);
  CHECK(domain.size(4) == 68);
  CHECK(domain.size(5) == 10);
  CHECK(domain.cardinality() == 7588800ull);
}

TEST_CASE("build rejects bad specs") {
  CHECK_THROWS_AS(IntegerDomain::build({}), InvalidArgument);
  CHECK_THROWS_AS(IntegerDomain::build({{"x", {}}}), InvalidArgument);
  CHECK_THROWS_AS(IntegerDomain::build({{"x", {1.0, 1.0}}}), InvalidArgument);
  CHECK_THROWS_AS(IntegerDomain::build({{"x", {2.0, 1.0}}}), InvalidArgument);

  // 2^64 overflows: forty dimensions of length 3 is fine, but 64 of length 2
  // exceed the representable range times... use 2^70 via 70 binary dims
  std::vector<DimensionSpec> dims;
  for (int i = 0; i < 70; ++i) dims.push_back({"d" + std::to_string(i), {0.0, 1.0}});
  CHECK_THROWS_AS(IntegerDomain::build(dims), InvalidArgument);
}

TEST_CASE("raw mapping matches the worked example") {
  const IntegerDomain domain = example_domain();
  const auto raw = domain.to_raw(LatticePoint{{1, 0}});
  CHECK(raw[0] == doctest::Approx(0.1));
  CHECK(raw[1] == doctest::Approx(50.0));

  const auto zeros = domain.to_raw(LatticePoint{{0, 0}});
  CHECK(zeros[0] == doctest::Approx(0.0));
  CHECK(zeros[1] == doctest::Approx(50.0));

  CHECK_THROWS_AS(domain.to_raw(LatticePoint{{6, 0}}), InvalidArgument);
}

TEST_CASE("round-trip through raw space is the identity") {
  const IntegerDomain domain = example_domain();
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const LatticePoint p = domain.random_point(rng);
    CHECK(domain.from_raw(domain.to_raw(p)) == p);
  }
  // exhaustive on the small domain
  domain.for_each_point([&](const LatticePoint& p) {
    CHECK(domain.from_raw(domain.to_raw(p)) == p);
  });
}

TEST_CASE("random_point is uniform per dimension") {
  const IntegerDomain domain = example_domain();
  Rng rng(123);
  std::map<int, int> counts_a, counts_b;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const LatticePoint p = domain.random_point(rng);
    counts_a[p.coords[0]]++;
    counts_b[p.coords[1]]++;
  }
  // chi-square against uniform; 3 sigma on each cell
  for (const auto& [value, count] : counts_a) {
    const double expected = draws / 6.0;
    const double sd = std::sqrt(expected * (1.0 - 1.0 / 6.0));
    CHECK(std::fabs(count - expected) < 3.0 * sd);
  }
  for (const auto& [value, count] : counts_b) {
    const double expected = draws / 3.0;
    const double sd = std::sqrt(expected * (1.0 - 1.0 / 3.0));
    CHECK(std::fabs(count - expected) < 3.0 * sd);
  }
}

TEST_CASE("random_point sequences are seed-deterministic") {
  const IntegerDomain domain = example_domain();
  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) {
    CHECK(domain.random_point(a) == domain.random_point(b));
  }
  const IntegerDomain singleton = IntegerDomain::build({{"only", {3.0}}});
  Rng c(0);
  CHECK(singleton.random_point(c) == LatticePoint{{0}});
}

TEST_CASE("boundary reflection") {
  const IntegerDomain domain = IntegerDomain::build(
      {{"x", {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}}});
  const auto reflect = [&](std::int64_t c) {
    const std::int64_t coords[] = {c};
    return domain.reflect_into_bounds(coords).coords[0];
  };
  CHECK(reflect(-1) == 1);
  CHECK(reflect(7) == 3);
  CHECK(reflect(3) == 3);

  // every perturbed coordinate within +-2 of the box lands inside
  for (std::int64_t c = -2; c <= 7; ++c) {
    const std::int32_t r = reflect(c);
    CHECK(r >= 0);
    CHECK(r <= 5);
  }
}

TEST_CASE("reflection clamps on degenerate dimensions") {
  const IntegerDomain one = IntegerDomain::build({{"x", {4.0}}});
  for (std::int64_t c = -2; c <= 2; ++c) {
    const std::int64_t coords[] = {c};
    CHECK(one.reflect_into_bounds(coords).coords[0] == 0);
  }
  const IntegerDomain two = IntegerDomain::build({{"x", {0.0, 1.0}}});
  for (std::int64_t c = -2; c <= 3; ++c) {
    const std::int64_t coords[] = {c};
    const std::int32_t r = two.reflect_into_bounds(coords).coords[0];
    CHECK(r >= 0);
    CHECK(r <= 1);
  }
}

TEST_CASE("cardinality equals brute-force enumeration") {
  const IntegerDomain domain = IntegerDomain::build(
      {{"a", {0, 1, 2, 3, 4, 5, 6}}, {"b", {0, 1, 2}}, {"c", {0, 1, 2, 3}}});
  std::uint64_t count = 0;
  domain.for_each_point([&](const LatticePoint&) { ++count; });
  CHECK(count == domain.cardinality());
  CHECK(count == 7ull * 3ull * 4ull);
}
