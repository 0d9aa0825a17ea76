#include "surropt/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "surropt/errors.hpp"

namespace surropt {

// ---------------------------------------------------------------------------
// calendar helpers (Howard Hinnant's civil-days algorithms)

std::int64_t days_from_civil(const Date& d) {
  const int y = d.year - (d.month <= 2 ? 1 : 0);
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 +
      static_cast<unsigned>(d.day) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 +
         static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned month = mp + (mp < 10 ? 3 : -9);
  return Date{static_cast<int>(y + (month <= 2 ? 1 : 0)),
              static_cast<int>(month), static_cast<int>(day)};
}

Date parse_date(const std::string& iso) {
  Date d;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw DataError("date '" + iso + "' is not in YYYY-MM-DD form");
  }
  const auto to_int = [&](int lo, int len) {
    int value = 0;
    const char* first = iso.data() + lo;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc() || ptr != first + len) {
      throw DataError("date '" + iso + "' is not in YYYY-MM-DD form");
    }
    return value;
  };
  d.year = to_int(0, 4);
  d.month = to_int(5, 2);
  d.day = to_int(8, 2);
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31 ||
      civil_from_days(days_from_civil(d)) != d) {
    throw DataError("date '" + iso + "' is not a valid calendar day");
  }
  return d;
}

std::string format_date(const Date& d) {
  char buf[11];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

int day_of_year(const Date& d) {
  return static_cast<int>(days_from_civil(d) -
                          days_from_civil(Date{d.year, 1, 1})) +
         1;
}

int week_of_year(const Date& d) { return (day_of_year(d) - 1) / 7 + 1; }

// ---------------------------------------------------------------------------
// DailySeries

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, int line_number,
                    const std::string& column) {
  if (field.empty()) {
    throw DataError("line " + std::to_string(line_number) +
                    ": missing value in column '" + column + "'");
  }
  try {
    std::size_t used = 0;
    const double value = std::stod(field, &used);
    if (used != field.size() || !std::isfinite(value)) throw std::exception();
    return value;
  } catch (...) {
    throw DataError("line " + std::to_string(line_number) +
                    ": cannot parse '" + field + "' in column '" + column + "'");
  }
}

}  // namespace

DailySeries DailySeries::from_columns(
    Date start, std::vector<std::string> wells, std::vector<double> temp,
    std::vector<double> precip, std::vector<double> streamflow,
    std::vector<std::vector<double>> groundwater) {
  if (wells.empty() || wells.size() != groundwater.size()) {
    throw InvalidArgument("series needs one groundwater column per well");
  }
  const std::size_t n = temp.size();
  if (n == 0 || precip.size() != n || streamflow.size() != n) {
    throw InvalidArgument("series columns must be non-empty and equal-length");
  }
  for (const auto& gw : groundwater) {
    if (gw.size() != n) {
      throw InvalidArgument("series columns must be non-empty and equal-length");
    }
  }
  DailySeries s;
  s.start_ = start;
  s.wells_ = std::move(wells);
  s.temp_ = std::move(temp);
  s.precip_ = std::move(precip);
  s.streamflow_ = std::move(streamflow);
  s.gw_ = std::move(groundwater);
  s.week_.resize(n);
  s.month_.resize(n);
  const std::int64_t epoch = days_from_civil(start);
  for (std::size_t i = 0; i < n; ++i) {
    const Date d = civil_from_days(epoch + static_cast<std::int64_t>(i));
    s.week_[i] = week_of_year(d);
    s.month_[i] = d.month;
  }
  return s;
}

DailySeries DailySeries::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("series file is empty");
  const std::vector<std::string> header = split_line(line);

  int col_date = -1, col_temp = -1, col_precip = -1, col_stream = -1;
  int col_week = -1, col_month = -1;
  std::vector<std::pair<std::string, int>> well_columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "date") col_date = static_cast<int>(c);
    else if (name == "temp") col_temp = static_cast<int>(c);
    else if (name == "precip") col_precip = static_cast<int>(c);
    else if (name == "streamflow") col_stream = static_cast<int>(c);
    else if (name == "week") col_week = static_cast<int>(c);
    else if (name == "month") col_month = static_cast<int>(c);
    else if (name.rfind("gw_", 0) == 0)
      well_columns.emplace_back(name.substr(3), static_cast<int>(c));
    else
      throw DataError("unknown column '" + name + "' in series header");
  }
  if (col_date < 0 || col_temp < 0 || col_precip < 0 || col_stream < 0 ||
      well_columns.empty()) {
    throw DataError(
        "series header must contain date,temp,precip,streamflow and at least "
        "one gw_<well> column");
  }

  std::vector<Date> dates;
  std::vector<double> temp, precip, streamflow;
  std::vector<std::vector<double>> gw(well_columns.size());
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_number) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    Date d;
    try {
      d = parse_date(fields[col_date]);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!dates.empty()) {
      const std::int64_t expected = days_from_civil(dates.back()) + 1;
      const std::int64_t got = days_from_civil(d);
      if (got != expected) {
        throw DataError("line " + std::to_string(line_number) +
                        ": date gap — expected " +
                        format_date(civil_from_days(expected)) + ", found " +
                        format_date(d));
      }
    }
    dates.push_back(d);
    temp.push_back(parse_number(fields[col_temp], line_number, "temp"));
    precip.push_back(parse_number(fields[col_precip], line_number, "precip"));
    streamflow.push_back(
        parse_number(fields[col_stream], line_number, "streamflow"));
    if (col_week >= 0) {
      const double w = parse_number(fields[col_week], line_number, "week");
      if (static_cast<int>(w) != week_of_year(d)) {
        throw DataError("line " + std::to_string(line_number) +
                        ": week column disagrees with the date");
      }
    }
    if (col_month >= 0) {
      const double m = parse_number(fields[col_month], line_number, "month");
      if (static_cast<int>(m) != d.month) {
        throw DataError("line " + std::to_string(line_number) +
                        ": month column disagrees with the date");
      }
    }
    for (std::size_t w = 0; w < well_columns.size(); ++w) {
      gw[w].push_back(parse_number(fields[well_columns[w].second], line_number,
                                   "gw_" + well_columns[w].first));
    }
  }
  if (dates.empty()) throw DataError("series file has no data rows");

  std::vector<std::string> wells;
  for (auto& [name, col] : well_columns) wells.push_back(name);
  return from_columns(dates.front(), std::move(wells), std::move(temp),
                      std::move(precip), std::move(streamflow), std::move(gw));
}

void DailySeries::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write series file '" + path + "'");
  out << "date,temp,precip,streamflow";
  for (const std::string& w : wells_) out << ",gw_" << w;
  out << "\n";
  char buf[64];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out << ',' << buf;
  };
  for (int i = 0; i < days(); ++i) {
    out << format_date(date(i));
    put(temp_[i]);
    put(precip_[i]);
    put(streamflow_[i]);
    for (int w = 0; w < well_count(); ++w) put(gw_[w][i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

Date DailySeries::date(int i) const {
  return civil_from_days(days_from_civil(start_) + i);
}

double DailySeries::variable(int i, int v) const {
  switch (v) {
    case 0: return temp_[i];
    case 1: return precip_[i];
    case 2: return streamflow_[i];
    case 3: return week_[i];
    case 4: return month_[i];
    default: return gw_[v - kExogenousColumns][i];
  }
}

DailySeries DailySeries::head(int days_wanted) const {
  if (days_wanted < 1 || days_wanted > days()) {
    throw InvalidArgument("prefix length out of range");
  }
  DailySeries s;
  s.start_ = start_;
  s.wells_ = wells_;
  const auto take = [&](const std::vector<double>& src) {
    return std::vector<double>(src.begin(), src.begin() + days_wanted);
  };
  s.temp_ = take(temp_);
  s.precip_ = take(precip_);
  s.streamflow_ = take(streamflow_);
  s.week_ = take(week_);
  s.month_ = take(month_);
  for (const auto& col : gw_) s.gw_.push_back(take(col));
  return s;
}

// ---------------------------------------------------------------------------
// scaling

double ScalingSpec::Channel::forward(double x) const {
  const double t = log1p ? std::log1p(x) : x;
  return (t - min) / (max - min);
}

double ScalingSpec::Channel::inverse(double y) const {
  const double t = y * (max - min) + min;
  return log1p ? std::expm1(t) : t;
}

const ScalingSpec::Channel& ScalingSpec::variable(int v) const {
  switch (v) {
    case 0: return temp;
    case 1: return precip;
    case 2: return streamflow;
    case 3: return week;
    case 4: return month;
    default: return gw[static_cast<std::size_t>(v) - DailySeries::kExogenousColumns];
  }
}

double ScalingSpec::scale_groundwater(int well, double level) const {
  return gw[well].forward(level);
}

double ScalingSpec::invert_groundwater(int well, double normalized) const {
  return gw[well].inverse(normalized);
}

double ScalingSpec::rmse_level_units(int well, double normalized_mse) const {
  return std::sqrt(std::max(0.0, normalized_mse)) * (gw[well].max - gw[well].min);
}

namespace {

ScalingSpec::Channel minmax_channel(const DailySeries& series, int variable,
                                    const std::string& name, bool log1p) {
  ScalingSpec::Channel ch;
  ch.log1p = log1p;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < series.days(); ++i) {
    double v = series.variable(i, variable);
    if (log1p) {
      if (v < 0.0) {
        throw DataError("column '" + name + "' is negative; cannot log-transform");
      }
      v = std::log1p(v);
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    throw DataError("column '" + name + "' is constant; cannot scale to [0,1]");
  }
  ch.min = lo;
  ch.max = hi;
  return ch;
}

}  // namespace

ScalingSpec fit_scaling(const DailySeries& series) {
  ScalingSpec spec;
  spec.temp = minmax_channel(series, 0, "temp", false);
  spec.precip = minmax_channel(series, 1, "precip", false);
  spec.streamflow = minmax_channel(series, 2, "streamflow", true);
  spec.week = ScalingSpec::Channel{0.0, 53.0, false};
  spec.month = ScalingSpec::Channel{0.0, 12.0, false};
  for (int w = 0; w < series.well_count(); ++w) {
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < series.days(); ++i) {
      hi = std::max(hi, series.groundwater(i, w));
    }
    if (!(hi > 0.0)) {
      throw DataError("column 'gw_" + series.wells()[w] +
                      "' has no positive level; cannot scale against sea level");
    }
    // the floor is mean sea level, not the observed minimum
    spec.gw.push_back(ScalingSpec::Channel{0.0, hi, false});
  }
  return spec;
}

// ---------------------------------------------------------------------------
// lag samples

LagSampleSet::LagSampleSet(int lag, int train_rows, Eigen::MatrixXd inputs,
                           Eigen::MatrixXd targets, std::vector<int> anchor_days)
    : lag_(lag),
      train_rows_(train_rows),
      inputs_(std::move(inputs)),
      targets_(std::move(targets)),
      anchor_days_(std::move(anchor_days)) {}

Eigen::Block<const Eigen::MatrixXd> LagSampleSet::inputs(Split s) const {
  return s == Split::train
             ? inputs_.topRows(train_rows_)
             : inputs_.bottomRows(sample_count() - train_rows_);
}

Eigen::Block<const Eigen::MatrixXd> LagSampleSet::targets(Split s) const {
  return s == Split::train
             ? targets_.topRows(train_rows_)
             : targets_.bottomRows(sample_count() - train_rows_);
}

LagSampleSet build_lag_samples(const DailySeries& series,
                               const ScalingSpec& scaling, int lag,
                               int train_count) {
  if (lag < 1) throw InvalidArgument("lag must be at least one day");
  if (train_count < 1) throw InvalidArgument("training split must be non-empty");
  const int days = series.days();
  if (days < lag + 1 + train_count + 1) {
    throw InvalidArgument(
        "series too short: " + std::to_string(days) + " days cannot supply " +
        std::to_string(train_count) + " training samples at lag " +
        std::to_string(lag));
  }
  const int v = series.variable_count();
  const int wells = series.well_count();
  const int rows = days - lag;
  const int width = (lag + 1) * v;

  Eigen::MatrixXd inputs(rows, width);
  Eigen::MatrixXd targets(rows, wells);
  std::vector<int> anchors(rows);
  for (int r = 0; r < rows; ++r) {
    const int anchor = lag + r;  // the day being predicted
    anchors[r] = anchor;
    int col = 0;
    for (int day = anchor - lag; day <= anchor; ++day) {
      for (int var = 0; var < v; ++var, ++col) {
        // the anchor day's own level is the target; its input slot carries
        // the most recent known level (day anchor-1)
        const int source_day =
            (var >= DailySeries::kExogenousColumns && day == anchor) ? day - 1
                                                                     : day;
        inputs(r, col) =
            scaling.variable(var).forward(series.variable(source_day, var));
      }
    }
    for (int w = 0; w < wells; ++w) {
      targets(r, w) = scaling.scale_groundwater(w, series.groundwater(anchor, w));
    }
  }
  return LagSampleSet(lag, train_count, std::move(inputs), std::move(targets),
                      std::move(anchors));
}

double persistence_mse(const DailySeries& series, const ScalingSpec& scaling,
                       const LagSampleSet& samples, LagSampleSet::Split split) {
  const int begin =
      split == LagSampleSet::Split::train ? 0 : samples.train_rows();
  const int end = split == LagSampleSet::Split::train
                      ? samples.train_rows()
                      : samples.sample_count();
  if (end <= begin) throw InvalidArgument("empty split");
  double acc = 0.0;
  for (int r = begin; r < end; ++r) {
    const int anchor = samples.anchor_day(r);
    for (int w = 0; w < series.well_count(); ++w) {
      const double predicted =
          scaling.scale_groundwater(w, series.groundwater(anchor - 1, w));
      const double truth =
          scaling.scale_groundwater(w, series.groundwater(anchor, w));
      acc += (predicted - truth) * (predicted - truth);
    }
  }
  return acc / (static_cast<double>(end - begin) * series.well_count());
}

}  // namespace surropt
