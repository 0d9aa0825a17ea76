#include "surropt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "surropt/errors.hpp"

namespace surropt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

const json& require(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

template <typename T>
T as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail(path, "has the wrong type");
  }
}

std::vector<double> dimension_values(const json& j, const std::string& path) {
  if (j.contains("values")) {
    return as<std::vector<double>>(j.at("values"), path + ".values");
  }
  if (j.contains("from") && j.contains("to") && j.contains("step")) {
    const double from = as<double>(j.at("from"), path + ".from");
    const double to = as<double>(j.at("to"), path + ".to");
    const double step = as<double>(j.at("step"), path + ".step");
    if (!(step > 0.0) || to < from) fail(path, "needs from <= to and step > 0");
    std::vector<double> values;
    for (int k = 0;; ++k) {
      const double v = from + k * step;
      if (v > to + 1e-9 * std::max(1.0, std::fabs(to))) break;
      values.push_back(v);
    }
    return values;
  }
  fail(path, "needs either 'values' or 'from'/'to'/'step'");
}

}  // namespace

nlohmann::json synthetic_series_spec_to_json(const SyntheticSeriesSpec& s) {
  return json{{"days", s.days},
              {"wells", s.wells},
              {"seed", s.seed},
              {"start_date", s.start_date},
              {"base_level_m", s.base_level_m},
              {"seasonal_amplitude_m", s.seasonal_amplitude_m},
              {"annual_decline_m", s.annual_decline_m},
              {"recharge_gain", s.recharge_gain},
              {"temperature_drawdown", s.temperature_drawdown},
              {"storm_response_m", s.storm_response_m},
              {"noise_sd_m", s.noise_sd_m}};
}

SyntheticSeriesSpec synthetic_series_spec_from_json(const nlohmann::json& j) {
  SyntheticSeriesSpec s;
  const std::string path = "generator";
  if (!j.is_object()) fail(path, "must be an object");
  const auto opt = [&](const char* key, auto& field) {
    if (j.contains(key)) {
      field = as<std::decay_t<decltype(field)>>(j.at(key), path + "." + key);
    }
  };
  opt("days", s.days);
  opt("wells", s.wells);
  opt("seed", s.seed);
  opt("start_date", s.start_date);
  opt("base_level_m", s.base_level_m);
  opt("seasonal_amplitude_m", s.seasonal_amplitude_m);
  opt("annual_decline_m", s.annual_decline_m);
  opt("recharge_gain", s.recharge_gain);
  opt("temperature_drawdown", s.temperature_drawdown);
  opt("storm_response_m", s.storm_response_m);
  opt("noise_sd_m", s.noise_sd_m);
  return s;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse(j);
}

ExperimentConfig ExperimentConfig::parse(const json& j) {
  ExperimentConfig cfg;
  if (!j.is_object()) fail("config", "must be an object");

  const json& obj = require(j, "objective", "config");
  const std::string kind = as<std::string>(require(obj, "kind", "objective"),
                                           "objective.kind");
  if (kind == "timeseries") {
    TimeseriesObjectiveSpec ts;
    if (obj.contains("series")) {
      ts.series_path = as<std::string>(obj.at("series"), "objective.series");
    }
    if (obj.contains("generator")) {
      ts.generator = synthetic_series_spec_from_json(obj.at("generator"));
    }
    ts.train_count = as<int>(require(obj, "train_samples", "objective"),
                             "objective.train_samples");
    cfg.objective = std::move(ts);
  } else if (kind == "quadratic" || kind == "multimodal" ||
             kind == "noisy_quadratic") {
    SyntheticObjectiveSpec syn;
    syn.kind = kind;
    if (obj.contains("target")) {
      syn.target = as<std::vector<std::int32_t>>(obj.at("target"),
                                                 "objective.target");
    }
    if (obj.contains("sigma")) {
      syn.sigma = as<double>(obj.at("sigma"), "objective.sigma");
    }
    if (obj.contains("seed")) {
      syn.seed = as<std::uint64_t>(obj.at("seed"), "objective.seed");
    }
    cfg.objective = std::move(syn);
  } else {
    fail("objective.kind",
         "must be one of quadratic, multimodal, noisy_quadratic, timeseries");
  }

  const json& domain = require(j, "domain", "config");
  if (!domain.is_array() || domain.empty()) {
    fail("domain", "must be a non-empty array of dimensions");
  }
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const std::string path = "domain[" + std::to_string(i) + "]";
    DimensionSpec dim;
    dim.name = as<std::string>(require(domain[i], "name", path), path + ".name");
    dim.values = dimension_values(domain[i], path);
    cfg.domain_dims.push_back(std::move(dim));
  }

  const json& strategies = require(j, "strategies", "config");
  if (!strategies.is_array() || strategies.empty()) {
    fail("strategies", "must be a non-empty array");
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const std::string path = "strategies[" + std::to_string(i) + "]";
    try {
      cfg.strategies.push_back(
          strategy_from_string(as<std::string>(strategies[i], path)));
    } catch (const InvalidArgument& e) {
      fail(path, e.what());
    }
  }

  if (j.contains("trials")) cfg.trials = as<int>(j.at("trials"), "trials");
  if (j.contains("budget")) cfg.budget = as<int>(j.at("budget"), "budget");
  if (j.contains("n0")) cfg.n0 = as<int>(j.at("n0"), "n0");
  if (j.contains("replicates")) {
    cfg.replicates = as<int>(j.at("replicates"), "replicates");
  }
  if (j.contains("master_seed")) {
    cfg.master_seed = as<std::uint64_t>(j.at("master_seed"), "master_seed");
  }
  if (j.contains("output_dir")) {
    cfg.output_dir = as<std::string>(j.at("output_dir"), "output_dir");
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (trials < 1) fail("trials", "must be at least 1");
  if (replicates < 1) fail("replicates", "must be at least 1");
  if (budget < effective_n0()) {
    fail("budget", "must be at least n0 (= " + std::to_string(effective_n0()) +
                       " here)");
  }
  if (n0 && *n0 < 1) fail("n0", "must be at least 1");
  if (strategies.empty()) fail("strategies", "must be non-empty");
  {
    std::set<std::string> names;
    for (std::size_t i = 0; i < domain_dims.size(); ++i) {
      if (!names.insert(domain_dims[i].name).second) {
        fail("domain[" + std::to_string(i) + "].name",
             "duplicate dimension name '" + domain_dims[i].name + "'");
      }
    }
  }
  std::uint64_t cardinality = 0;
  try {
    cardinality = IntegerDomain::build(domain_dims).cardinality();
  } catch (const Error& e) {
    fail("domain", e.what());
  }
  if (cardinality < static_cast<std::uint64_t>(budget)) {
    fail("budget", "exceeds the lattice size |domain| = " +
                       std::to_string(cardinality));
  }
  if (const auto* ts = std::get_if<TimeseriesObjectiveSpec>(&objective)) {
    if (!ts->series_path && !ts->generator) {
      fail("objective", "timeseries objective needs 'series' or 'generator'");
    }
    if (ts->series_path && ts->generator) {
      fail("objective", "give either 'series' or 'generator', not both");
    }
    if (ts->train_count < 1) fail("objective.train_samples", "must be positive");
  } else {
    const auto& syn = std::get<SyntheticObjectiveSpec>(objective);
    if (syn.kind == "noisy_quadratic" && syn.sigma < 0.0) {
      fail("objective.sigma", "must be nonnegative");
    }
    if (syn.target && syn.target->size() != domain_dims.size()) {
      fail("objective.target", "length must equal the domain dimension");
    }
  }
  if (output_dir.empty()) fail("output_dir", "must be non-empty");
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  if (const auto* ts = std::get_if<TimeseriesObjectiveSpec>(&objective)) {
    json obj{{"kind", "timeseries"}, {"train_samples", ts->train_count}};
    if (ts->series_path) obj["series"] = *ts->series_path;
    if (ts->generator) obj["generator"] = synthetic_series_spec_to_json(*ts->generator);
    j["objective"] = std::move(obj);
  } else {
    const auto& syn = std::get<SyntheticObjectiveSpec>(objective);
    json obj{{"kind", syn.kind}};
    if (syn.target) obj["target"] = *syn.target;
    if (syn.kind == "noisy_quadratic") obj["sigma"] = syn.sigma;
    if (syn.kind == "multimodal") obj["seed"] = syn.seed;
    j["objective"] = std::move(obj);
  }
  j["domain"] = json::array();
  for (const DimensionSpec& dim : domain_dims) {
    j["domain"].push_back(json{{"name", dim.name}, {"values", dim.values}});
  }
  j["strategies"] = json::array();
  for (Strategy s : strategies) j["strategies"].push_back(to_string(s));
  j["trials"] = trials;
  j["budget"] = budget;
  if (n0) j["n0"] = *n0;
  j["replicates"] = replicates;
  j["master_seed"] = master_seed;
  j["output_dir"] = output_dir;
  return j;
}

}  // namespace surropt
