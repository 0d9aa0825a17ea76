#include "surropt/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "surropt/errors.hpp"
#include "surropt/forecast_objective.hpp"
#include "surropt/testbed.hpp"

namespace surropt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

struct BuiltObjective {
  std::unique_ptr<ExpensiveObjective> objective;
  std::shared_ptr<const HpoProblemSpec> problem;  // set for timeseries runs
};

BuiltObjective build_objective(const ExperimentConfig& config,
                               const IntegerDomain& domain) {
  BuiltObjective built;
  if (const auto* ts = std::get_if<TimeseriesObjectiveSpec>(&config.objective)) {
    auto series = std::make_shared<DailySeries>(
        ts->series_path ? DailySeries::load(*ts->series_path)
                        : generate_series(*ts->generator));
    auto problem = std::make_shared<HpoProblemSpec>(HpoProblemSpec{
        std::move(series), ts->train_count, domain});
    built.problem = problem;
    built.objective = make_objective(problem);
    return built;
  }
  const auto& syn = std::get<SyntheticObjectiveSpec>(config.objective);
  LatticePoint target;
  if (syn.target) {
    target.coords = *syn.target;
  } else {
    for (const DimensionSpec& dim : config.domain_dims) {
      target.coords.push_back(static_cast<std::int32_t>(dim.values.size() / 2));
    }
  }
  if (syn.kind == "quadratic") {
    built.objective = quadratic(domain, target);
  } else if (syn.kind == "noisy_quadratic") {
    built.objective = with_noise(quadratic(domain, target), syn.sigma);
  } else {
    built.objective = multimodal(domain, syn.seed);
  }
  return built;
}

json record_to_json(const EvaluationRecord& record, int index,
                    double best_so_far) {
  return json{{"index", index},
              {"coords", record.point.coords},
              {"raw", record.raw},
              {"replicate_seeds", record.replicate_seeds},
              {"replicate_losses", record.replicate_losses},
              {"mean_loss", record.mean_loss},
              {"best_so_far", best_so_far}};
}

}  // namespace

std::string trace_to_jsonl(const StoredTrace& stored) {
  std::ostringstream out;
  out << json{{"strategy", stored.strategy},
              {"trial", stored.trial},
              {"budget", stored.budget},
              {"n0", stored.n0},
              {"replicates", stored.replicates},
              {"seed", stored.seed},
              {"dimensions", stored.dimension_names}}
             .dump()
      << "\n";
  for (std::size_t i = 0; i < stored.trace.records.size(); ++i) {
    out << record_to_json(stored.trace.records[i], static_cast<int>(i + 1),
                          stored.trace.best_so_far[i])
               .dump()
        << "\n";
  }
  return out.str();
}

StoredTrace trace_from_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("trace file '" + path + "' is empty");
  }
  StoredTrace stored;
  try {
    const json meta = json::parse(line);
    stored.strategy = meta.at("strategy").get<std::string>();
    stored.trial = meta.at("trial").get<int>();
    stored.budget = meta.at("budget").get<int>();
    stored.n0 = meta.at("n0").get<int>();
    stored.replicates = meta.at("replicates").get<int>();
    stored.seed = meta.at("seed").get<std::uint64_t>();
    stored.dimension_names =
        meta.at("dimensions").get<std::vector<std::string>>();
    stored.trace.strategy = strategy_from_string(stored.strategy);
    stored.trace.n0 = stored.n0;
    stored.trace.replicates = stored.replicates;
    stored.trace.budget = stored.budget;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      EvaluationRecord record;
      record.point.coords = j.at("coords").get<std::vector<std::int32_t>>();
      record.raw = j.at("raw").get<std::vector<double>>();
      record.replicate_seeds =
          j.at("replicate_seeds").get<std::vector<std::uint64_t>>();
      record.replicate_losses =
          j.at("replicate_losses").get<std::vector<double>>();
      record.mean_loss = j.at("mean_loss").get<double>();
      stored.trace.best_so_far.push_back(j.at("best_so_far").get<double>());
      stored.trace.records.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw DataError("trace file '" + path + "' is malformed: " + e.what());
  }
  return stored;
}

void run_experiment(const ExperimentConfig& config) {
  config.validate();
  const IntegerDomain domain = IntegerDomain::build(config.domain_dims);
  const BuiltObjective built = build_objective(config, domain);

  fs::create_directories(config.output_dir);
  write_file(fs::path(config.output_dir) / "config.json",
             config.to_json().dump(2) + "\n");

  std::vector<std::string> dimension_names;
  for (const DimensionSpec& dim : config.domain_dims) {
    dimension_names.push_back(dim.name);
  }

  std::ostringstream best_rows;
  best_rows << "strategy,trial";
  for (const std::string& name : dimension_names) best_rows << ',' << name;
  best_rows << ",mean_loss\n";

  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    const Strategy strategy = config.strategies[s];
    std::vector<OptimizationTrace> traces;
    std::vector<std::vector<double>> cumulative_times;

    for (int trial = 0; trial < config.trials; ++trial) {
      const std::uint64_t seed =
          trial_seed(config.master_seed, static_cast<int>(s), trial);
      Rng rng(seed);
      OptimizationTrace trace =
          run_hpo(*built.objective, domain, strategy, config.budget,
                  config.effective_n0(), config.replicates, rng);

      StoredTrace stored;
      stored.strategy = to_string(strategy);
      stored.trial = trial + 1;
      stored.budget = config.budget;
      stored.n0 = config.effective_n0();
      stored.replicates = config.replicates;
      stored.seed = seed;
      stored.dimension_names = dimension_names;
      stored.trace = trace;

      const std::string stem =
          "trace_" + stored.strategy + "_t" + std::to_string(trial + 1);
      write_file(fs::path(config.output_dir) / (stem + ".jsonl"),
                 trace_to_jsonl(stored));

      // measured timings are deliberately not part of the trace file
      std::ostringstream time_csv;
      time_csv << "evaluation,seconds,cumulative_seconds\n";
      std::vector<double> cumulative;
      double acc = 0.0;
      for (std::size_t i = 0; i < trace.records.size(); ++i) {
        acc += trace.records[i].wall_time_seconds;
        cumulative.push_back(acc);
        time_csv << (i + 1) << ',' << csv_number(trace.records[i].wall_time_seconds)
                 << ',' << csv_number(acc) << "\n";
      }
      write_file(fs::path(config.output_dir) / (stem + ".time.csv"),
                 time_csv.str());
      cumulative_times.push_back(std::move(cumulative));

      const EvaluationRecord& best = trace.records[trace.incumbent_index()];
      best_rows << stored.strategy << ',' << (trial + 1);
      for (double v : best.raw) best_rows << ',' << csv_number(v);
      best_rows << ',' << csv_number(best.mean_loss) << "\n";

      traces.push_back(std::move(trace));
    }

    const SeriesSummary best_summary = summarize_trials(traces);
    const SeriesSummary time_summary = summarize_series(cumulative_times);
    std::ostringstream summary;
    summary << "evaluation,mean_best,std_best,mean_cum_seconds,std_cum_seconds\n";
    for (std::size_t i = 0; i < best_summary.mean.size(); ++i) {
      summary << (i + 1) << ',' << csv_number(best_summary.mean[i]) << ','
              << csv_number(best_summary.stddev[i]) << ','
              << csv_number(time_summary.mean[i]) << ','
              << csv_number(time_summary.stddev[i]) << "\n";
    }
    write_file(fs::path(config.output_dir) /
                   ("summary_" + to_string(strategy) + ".csv"),
               summary.str());
  }

  write_file(fs::path(config.output_dir) / "best_hyperparameters.csv",
             best_rows.str());
}

void emit_plot_data(const std::string& traces_dir, const std::string& out_dir) {
  if (!fs::is_directory(traces_dir)) {
    throw IoError("'" + traces_dir + "' is not a directory");
  }
  std::vector<fs::path> trace_files;
  for (const auto& entry : fs::directory_iterator(traces_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trace_", 0) == 0 && entry.path().extension() == ".jsonl") {
      trace_files.push_back(entry.path());
    }
  }
  if (trace_files.empty()) {
    throw DataError("no trace_*.jsonl files in '" + traces_dir + "'");
  }
  std::sort(trace_files.begin(), trace_files.end());

  std::map<std::string, std::vector<StoredTrace>> by_strategy;
  for (const fs::path& path : trace_files) {
    StoredTrace stored = trace_from_jsonl(path.string());

    const fs::path time_path =
        path.parent_path() / (path.stem().string() + ".time.csv");
    std::ifstream time_in(time_path);
    if (!time_in) {
      throw IoError("missing timing sidecar '" + time_path.string() + "'");
    }
    std::string line;
    std::getline(time_in, line);  // header
    std::size_t row = 0;
    while (std::getline(time_in, line)) {
      if (line.empty()) continue;
      const auto last_comma = line.find_last_of(',');
      if (last_comma == std::string::npos || row >= stored.trace.records.size()) {
        throw DataError("timing sidecar '" + time_path.string() +
                        "' does not match its trace");
      }
      const auto first_comma = line.find(',');
      stored.trace.records[row].wall_time_seconds =
          std::stod(line.substr(first_comma + 1, last_comma - first_comma - 1));
      ++row;
    }
    if (row != stored.trace.records.size()) {
      throw DataError("timing sidecar '" + time_path.string() +
                      "' does not match its trace");
    }
    by_strategy[stored.strategy].push_back(std::move(stored));
  }

  fs::create_directories(out_dir);

  std::ostringstream convergence;
  convergence << "strategy,evaluation,mean_best,std_best\n";
  std::ostringstream time_plot;
  time_plot << "strategy,evaluation,mean_cum_seconds,std_cum_seconds\n";
  std::ostringstream hyper;
  hyper << "strategy,dimension,mean,std\n";

  for (auto& [strategy, traces] : by_strategy) {
    std::vector<std::vector<double>> best_curves, time_curves;
    for (const StoredTrace& stored : traces) {
      best_curves.push_back(stored.trace.best_so_far);
      std::vector<double> cumulative;
      double acc = 0.0;
      for (const EvaluationRecord& r : stored.trace.records) {
        acc += r.wall_time_seconds;
        cumulative.push_back(acc);
      }
      time_curves.push_back(std::move(cumulative));
    }
    const SeriesSummary best_summary = summarize_series(best_curves);
    const SeriesSummary time_summary = summarize_series(time_curves);
    for (std::size_t i = 0; i < best_summary.mean.size(); ++i) {
      convergence << strategy << ',' << (i + 1) << ','
                  << csv_number(best_summary.mean[i]) << ','
                  << csv_number(best_summary.stddev[i]) << "\n";
      time_plot << strategy << ',' << (i + 1) << ','
                << csv_number(time_summary.mean[i]) << ','
                << csv_number(time_summary.stddev[i]) << "\n";
    }

    // distribution of the per-trial optima, in raw units
    const std::size_t dims = traces.front().dimension_names.size();
    std::vector<std::vector<double>> optima(dims);
    for (const StoredTrace& stored : traces) {
      const EvaluationRecord& best =
          stored.trace.records[stored.trace.incumbent_index()];
      for (std::size_t d = 0; d < dims; ++d) {
        optima[d].push_back(best.raw[d]);
      }
    }
    for (std::size_t d = 0; d < dims; ++d) {
      double mean = 0.0;
      for (double v : optima[d]) mean += v;
      mean /= static_cast<double>(optima[d].size());
      double sq = 0.0;
      for (double v : optima[d]) sq += (v - mean) * (v - mean);
      const double stddev = std::sqrt(sq / static_cast<double>(optima[d].size()));
      hyper << strategy << ',' << traces.front().dimension_names[d] << ','
            << csv_number(mean) << ',' << csv_number(stddev) << "\n";
    }
  }

  write_file(fs::path(out_dir) / "convergence.csv", convergence.str());
  write_file(fs::path(out_dir) / "time.csv", time_plot.str());
  write_file(fs::path(out_dir) / "hyperparameters.csv", hyper.str());
}

}  // namespace surropt
