#include "surropt/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surropt/errors.hpp"

namespace surropt {

namespace {

Eigen::VectorXd to_vector(const LatticePoint& p) {
  Eigen::VectorXd x(p.coords.size());
  for (std::size_t i = 0; i < p.coords.size(); ++i) x(i) = p.coords[i];
  return x;
}

double min_distance_to(const std::vector<Eigen::VectorXd>& evaluated,
                       const Eigen::VectorXd& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& e : evaluated) {
    best = std::min(best, (e - x).norm());
  }
  return best;
}

}  // namespace

CandidateSet generate_candidates(const IntegerDomain& domain,
                                 const LatticePoint& best,
                                 const PointSet& evaluated, int m, Rng& rng) {
  if (m < 1) throw InvalidArgument("candidate count must be positive");
  if (!domain.contains(best)) {
    throw InvalidArgument("incumbent point is not in the domain");
  }
  const int d = domain.dimension();
  CandidateSet out;
  out.points.reserve(2 * static_cast<std::size_t>(m));
  out.origins.reserve(2 * static_cast<std::size_t>(m));

  std::vector<std::int64_t> shifted(d);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j) {
      const std::int64_t magnitude = 1 + static_cast<std::int64_t>(rng.below(2));
      const std::int64_t sign = rng.below(2) == 0 ? 1 : -1;
      shifted[j] = static_cast<std::int64_t>(best.coords[j]) + sign * magnitude;
    }
    LatticePoint candidate = domain.reflect_into_bounds(shifted);
    if (evaluated.contains(candidate)) continue;
    out.points.push_back(std::move(candidate));
    out.origins.push_back(CandidateOrigin::perturbation);
  }
  for (int i = 0; i < m; ++i) {
    LatticePoint candidate = domain.random_point(rng);
    if (evaluated.contains(candidate)) continue;
    out.points.push_back(std::move(candidate));
    out.origins.push_back(CandidateOrigin::global);
  }

  if (out.points.empty()) {
    throw SearchExhausted(
        "no unevaluated candidate could be generated; search space exhausted");
  }
  return out;
}

LatticePoint weighted_score_select(
    const CandidateSet& candidates, const RbfModel& rbf,
    const std::vector<LatticePoint>& evaluated_points, double omega) {
  if (candidates.points.empty()) {
    throw InvalidArgument("candidate set is empty");
  }
  if (omega < 0.0 || omega > 1.0) {
    throw InvalidArgument("score weight must lie in [0, 1]");
  }
  const std::size_t count = candidates.points.size();

  std::vector<Eigen::VectorXd> evaluated;
  evaluated.reserve(evaluated_points.size());
  for (const LatticePoint& p : evaluated_points) evaluated.push_back(to_vector(p));

  std::vector<double> distance(count), prediction(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::VectorXd x = to_vector(candidates.points[i]);
    distance[i] = min_distance_to(evaluated, x);
    prediction[i] = rbf.predict(x);
  }

  const auto [dist_min_it, dist_max_it] =
      std::minmax_element(distance.begin(), distance.end());
  const auto [pred_min_it, pred_max_it] =
      std::minmax_element(prediction.begin(), prediction.end());
  const double dist_min = *dist_min_it, dist_max = *dist_max_it;
  const double pred_min = *pred_min_it, pred_max = *pred_max_it;
  const bool flat_distance = !(dist_max > dist_min);
  const bool flat_prediction = !(pred_max > pred_min);

  std::size_t best_index = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    // equal extremes: every candidate receives the same score component
    const double v_distance =
        flat_distance ? 1.0 : (dist_max - distance[i]) / (dist_max - dist_min);
    const double v_prediction =
        flat_prediction ? 1.0 : (prediction[i] - pred_min) / (pred_max - pred_min);
    const double score = omega * v_distance + (1.0 - omega) * v_prediction;
    if (score < best_score) {
      best_score = score;
      best_index = i;
    }
  }
  return candidates.points[best_index];
}

GaResult ga_maximize_ei(const IntegerDomain& domain, const GpModel& gp,
                        double ell_best, const GaConfig& config, Rng& rng) {
  if (config.population < 2 || config.generations < 0) {
    throw InvalidArgument("GA needs a population of at least two");
  }
  const int d = domain.dimension();
  const double mutation_prob =
      config.mutation_prob > 0.0 ? config.mutation_prob : 1.0 / d;

  GaResult result;
  result.point.coords.assign(d, 0);
  result.expected_improvement = -std::numeric_limits<double>::infinity();

  std::vector<LatticePoint> population(config.population);
  std::vector<double> fitness(config.population);
  const auto score = [&](const LatticePoint& p) {
    ++result.fitness_evaluations;
    return gp.expected_improvement(p, ell_best);
  };

  for (int i = 0; i < config.population; ++i) {
    population[i] = domain.random_point(rng);
    fitness[i] = score(population[i]);
  }

  const auto track_best = [&]() {
    for (int i = 0; i < config.population; ++i) {
      if (fitness[i] > result.expected_improvement) {
        result.expected_improvement = fitness[i];
        result.point = population[i];
      }
    }
  };
  track_best();

  const auto tournament = [&]() -> int {
    int winner = static_cast<int>(rng.below(config.population));
    for (int k = 1; k < config.tournament; ++k) {
      const int other = static_cast<int>(rng.below(config.population));
      if (fitness[other] > fitness[winner]) winner = other;
    }
    return winner;
  };

  std::vector<LatticePoint> offspring(config.population);
  std::vector<double> offspring_fitness(config.population);
  for (int gen = 0; gen < config.generations; ++gen) {
    // elitism: the incumbent survives with its cached fitness
    offspring[0] = result.point;
    offspring_fitness[0] = result.expected_improvement;
    for (int i = 1; i < config.population; ++i) {
      const LatticePoint& a = population[tournament()];
      const LatticePoint& b = population[tournament()];
      LatticePoint child = a;
      if (rng.bernoulli(config.crossover_prob)) {
        for (int j = 0; j < d; ++j) {
          if (rng.bernoulli(0.5)) child.coords[j] = b.coords[j];
        }
      }
      for (int j = 0; j < d; ++j) {
        if (rng.bernoulli(mutation_prob)) {
          child.coords[j] = static_cast<std::int32_t>(rng.below(domain.size(j)));
        }
      }
      offspring_fitness[i] = score(child);
      offspring[i] = std::move(child);
    }
    population.swap(offspring);
    fitness.swap(offspring_fitness);
    track_best();
  }
  return result;
}

LatticePoint random_propose(const IntegerDomain& domain,
                            const PointSet& evaluated, Rng& rng) {
  if (evaluated.size() >= domain.cardinality()) {
    throw SearchExhausted("every lattice point has been evaluated");
  }
  constexpr int kRejectionCap = 100000;
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    LatticePoint p = domain.random_point(rng);
    if (!evaluated.contains(p)) return p;
  }
  // almost-full small domain: enumerate the complement and draw from it
  std::vector<LatticePoint> complement;
  domain.for_each_point([&](const LatticePoint& p) {
    if (!evaluated.contains(p)) complement.push_back(p);
  });
  if (complement.empty()) {
    throw SearchExhausted("every lattice point has been evaluated");
  }
  return complement[rng.below(complement.size())];
}

}  // namespace surropt
