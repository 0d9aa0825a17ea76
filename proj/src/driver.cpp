#include "surropt/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "surropt/errors.hpp"
#include "surropt/gp_surrogate.hpp"
#include "surropt/rbf_surrogate.hpp"

namespace surropt {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::rbf:
      return "rbf";
    case Strategy::gp:
      return "gp";
    case Strategy::random:
      return "random";
  }
  return "random";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "rbf") return Strategy::rbf;
  if (name == "gp") return Strategy::gp;
  if (name == "random") return Strategy::random;
  throw InvalidArgument("unknown strategy '" + name + "'");
}

std::size_t OptimizationTrace::incumbent_index() const {
  if (records.empty()) throw InvalidArgument("trace has no records");
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].mean_loss < records[best].mean_loss) best = i;
  }
  return best;
}

namespace {

EvaluationRecord evaluate_point(const ExpensiveObjective& objective,
                                const IntegerDomain& domain,
                                const LatticePoint& point, int replicates,
                                Rng& rng) {
  EvaluationRecord record;
  record.point = point;
  record.raw = domain.to_raw(point);

  std::vector<std::uint64_t> seeds(replicates);
  for (int i = 0; i < replicates; ++i) seeds[i] = rng.next_u64();

  std::string first_failure;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < replicates; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < 2 && !done; ++attempt) {
      try {
        const double loss = objective.evaluate(record.raw, seeds[i]);
        record.replicate_seeds.push_back(seeds[i]);
        record.replicate_losses.push_back(loss);
        done = true;
      } catch (const Error& e) {
        if (first_failure.empty()) first_failure = e.what();
      }
    }
  }
  record.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (record.replicate_losses.empty()) {
    throw NumericError("all " + std::to_string(replicates) +
                       " replicate evaluations failed at a point; last error: " +
                       first_failure);
  }
  double sum = 0.0;
  for (double loss : record.replicate_losses) sum += loss;
  record.mean_loss = sum / static_cast<double>(record.replicate_losses.size());
  return record;
}

}  // namespace

OptimizationTrace run_hpo(const ExpensiveObjective& objective,
                          const IntegerDomain& domain, Strategy strategy,
                          int budget, int n0, int replicates, Rng& rng,
                          const AlgorithmParams& params) {
  if (n0 < 1 || budget < n0) {
    throw InvalidArgument("need budget >= n0 >= 1");
  }
  if (replicates < 1) throw InvalidArgument("replicate count must be positive");
  if (domain.cardinality() < static_cast<std::uint64_t>(budget)) {
    throw InvalidArgument("evaluation budget exceeds the lattice size");
  }

  OptimizationTrace trace;
  trace.strategy = strategy;
  trace.n0 = n0;
  trace.replicates = replicates;
  trace.budget = budget;
  trace.records.reserve(budget);
  trace.best_so_far.reserve(budget);

  PointSet evaluated;
  std::vector<LatticePoint> evaluated_points;
  WeightCycle weights;

  const auto commit = [&](const LatticePoint& point) {
    EvaluationRecord record =
        evaluate_point(objective, domain, point, replicates, rng);
    evaluated.insert(point);
    evaluated_points.push_back(point);
    const double best_before =
        trace.best_so_far.empty() ? std::numeric_limits<double>::infinity()
                                  : trace.best_so_far.back();
    trace.best_so_far.push_back(std::min(best_before, record.mean_loss));
    trace.records.push_back(std::move(record));
  };

  // initial design: n0 distinct uniform points
  while (static_cast<int>(trace.records.size()) < n0) {
    LatticePoint p = domain.random_point(rng);
    if (evaluated.contains(p)) continue;
    commit(p);
  }

  while (static_cast<int>(trace.records.size()) < budget) {
    LatticePoint next;
    switch (strategy) {
      case Strategy::random:
        next = random_propose(domain, evaluated, rng);
        break;
      case Strategy::rbf: {
        Eigen::VectorXd values(trace.records.size());
        for (std::size_t i = 0; i < trace.records.size(); ++i) {
          values(i) = trace.records[i].mean_loss;
        }
        try {
          const RbfModel rbf = RbfModel::fit(evaluated_points, values);
          const LatticePoint& incumbent =
              trace.records[trace.incumbent_index()].point;
          const CandidateSet candidates = generate_candidates(
              domain, incumbent, evaluated, params.candidate_m, rng);
          next = weighted_score_select(candidates, rbf, evaluated_points,
                                       weights.next());
        } catch (const NumericError&) {
          // affinely dependent design: one random point restores rank(P)
          next = random_propose(domain, evaluated, rng);
        } catch (const SearchExhausted&) {
          next = random_propose(domain, evaluated, rng);
        }
        break;
      }
      case Strategy::gp: {
        Eigen::VectorXd values(trace.records.size());
        for (std::size_t i = 0; i < trace.records.size(); ++i) {
          values(i) = trace.records[i].mean_loss;
        }
        try {
          const GpModel gp = GpModel::fit(evaluated_points, values);
          const double ell_best = trace.best_so_far.back();
          next = ga_maximize_ei(domain, gp, ell_best, params.ga, rng).point;
        } catch (const NumericError&) {
          next = random_propose(domain, evaluated, rng);
        }
        if (evaluated.contains(next)) {
          // flat or fully exploited EI landscape; keep the run moving
          next = random_propose(domain, evaluated, rng);
        }
        break;
      }
    }
    commit(next);
  }
  return trace;
}

SeriesSummary summarize_series(const std::vector<std::vector<double>>& series) {
  if (series.empty()) throw InvalidArgument("no series to summarize");
  const std::size_t length = series.front().size();
  for (const auto& s : series) {
    if (s.size() != length) {
      throw InvalidArgument("series have ragged lengths");
    }
  }
  SeriesSummary out;
  out.mean.resize(length);
  out.stddev.resize(length);
  const double n = static_cast<double>(series.size());
  for (std::size_t i = 0; i < length; ++i) {
    double sum = 0.0;
    for (const auto& s : series) sum += s[i];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& s : series) sq += (s[i] - mean) * (s[i] - mean);
    out.mean[i] = mean;
    out.stddev[i] = std::sqrt(sq / n);  // population std
  }
  return out;
}

SeriesSummary summarize_trials(const std::vector<OptimizationTrace>& traces) {
  std::vector<std::vector<double>> curves;
  curves.reserve(traces.size());
  for (const OptimizationTrace& t : traces) curves.push_back(t.best_so_far);
  return summarize_series(curves);
}

}  // namespace surropt
