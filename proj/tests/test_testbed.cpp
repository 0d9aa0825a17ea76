#include <doctest.h>

#include <cmath>
#include <limits>

#include "surropt/testbed.hpp"

using namespace surropt;

namespace {

IntegerDomain grid(int per_dim, int dims) {
  std::vector<DimensionSpec> specs;
  for (int i = 0; i < dims; ++i) {
    std::vector<double> values;
    for (int v = 0; v < per_dim; ++v) values.push_back(v);
    specs.push_back({"x" + std::to_string(i), std::move(values)});
  }
  return IntegerDomain::build(specs);
}

}  // namespace

TEST_CASE("quadratic objective has its minimum at the target") {
  const IntegerDomain domain = grid(10, 3);
  const LatticePoint target{{3, 7, 1}};
  const auto obj = quadratic(domain, target);

  CHECK(obj->evaluate(domain.to_raw(target), 0) == 0.0);
  CHECK(obj->evaluate(domain.to_raw(LatticePoint{{4, 7, 1}}), 0) == 1.0);

  // brute-force argmin agrees
  double best = std::numeric_limits<double>::infinity();
  LatticePoint argmin;
  domain.for_each_point([&](const LatticePoint& p) {
    const double v = obj->evaluate(domain.to_raw(p), 0);
    if (v < best) {
      best = v;
      argmin = p;
    }
  });
  CHECK(argmin == target);
  CHECK(best == obj->optimum_value());
}

TEST_CASE("multimodal objective stores its enumerated optimum") {
  const IntegerDomain domain = grid(15, 2);
  const auto obj = multimodal(domain, 4);

  double best = std::numeric_limits<double>::infinity();
  LatticePoint argmin;
  domain.for_each_point([&](const LatticePoint& p) {
    const double v = obj->evaluate(domain.to_raw(p), 0);
    if (v < best) {
      best = v;
      argmin = p;
    }
  });
  CHECK(argmin == obj->optimum());
  CHECK(best == doctest::Approx(obj->optimum_value()));

  // count lattice-neighborhood local minima (all +-1 axis neighbors larger)
  int local_minima = 0;
  domain.for_each_point([&](const LatticePoint& p) {
    const double here = obj->evaluate(domain.to_raw(p), 0);
    bool is_min = true;
    for (int dim = 0; dim < domain.dimension() && is_min; ++dim) {
      for (int delta : {-1, 1}) {
        LatticePoint q = p;
        q.coords[dim] += delta;
        if (!domain.contains(q)) continue;
        if (obj->evaluate(domain.to_raw(q), 0) <= here) {
          is_min = false;
          break;
        }
      }
    }
    if (is_min) ++local_minima;
  });
  CHECK(local_minima >= 2);

  // determinism per seed
  const auto again = multimodal(domain, 4);
  CHECK(again->optimum() == obj->optimum());
  const auto other = multimodal(domain, 5);
  const auto raw = domain.to_raw(LatticePoint{{7, 7}});
  CHECK(obj->evaluate(raw, 0) == again->evaluate(raw, 0));
}

TEST_CASE("noise wrapper keeps replicability and the right scale") {
  const IntegerDomain domain = grid(5, 2);
  const LatticePoint target{{2, 2}};

  SUBCASE("sigma zero is the base objective") {
    const auto noisy = with_noise(quadratic(domain, target), 0.0);
    domain.for_each_point([&](const LatticePoint& p) {
      const auto raw = domain.to_raw(p);
      CHECK(noisy->evaluate(raw, 99) == quadratic(domain, target)->evaluate(raw, 99));
    });
  }

  SUBCASE("same (point, seed) reproduces; mean converges to the base value") {
    const double sigma = 0.5;
    const auto noisy = with_noise(quadratic(domain, target), sigma);
    const auto raw = domain.to_raw(LatticePoint{{0, 1}});
    CHECK(noisy->evaluate(raw, 7) == noisy->evaluate(raw, 7));

    const double truth = quadratic(domain, target)->evaluate(raw, 0);
    double sum = 0.0;
    const int n = 10000;
    for (int seed = 0; seed < n; ++seed) sum += noisy->evaluate(raw, seed);
    const double tolerance = 3.0 * sigma / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(sum / n - truth) < tolerance);
  }

  SUBCASE("replicate means have variance sigma^2 / N") {
    const double sigma = 0.4;
    const auto noisy = with_noise(quadratic(domain, target), sigma);
    const int replicates = 5;
    const int points = 1000;
    double var_acc = 0.0;
    Rng rng(11);
    std::uint64_t seed = 0;
    for (int i = 0; i < points; ++i) {
      const auto raw = domain.to_raw(domain.random_point(rng));
      const double truth = quadratic(domain, target)->evaluate(raw, 0);
      double mean = 0.0;
      for (int r = 0; r < replicates; ++r) mean += noisy->evaluate(raw, seed++);
      mean /= replicates;
      var_acc += (mean - truth) * (mean - truth);
    }
    const double empirical = var_acc / points;
    const double expected = sigma * sigma / replicates;
    CHECK(empirical == doctest::Approx(expected).epsilon(0.2));
  }
}
