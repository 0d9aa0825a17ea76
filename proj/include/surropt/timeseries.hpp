#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace surropt {

// Proleptic Gregorian calendar day.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  bool operator==(const Date&) const = default;
};

Date parse_date(const std::string& iso);        // "YYYY-MM-DD"
std::string format_date(const Date& d);
std::int64_t days_from_civil(const Date& d);    // days since 1970-01-01
Date civil_from_days(std::int64_t z);
int day_of_year(const Date& d);                 // 1..366
int week_of_year(const Date& d);                // 1..53, ceil(doy / 7)

// Gap-free daily observations: temperature, precipitation, streamflow, the
// calendar features, and one groundwater column per well. Immutable after
// construction.
class DailySeries {
 public:
  // Columns in sample order; groundwater columns follow these.
  static constexpr int kExogenousColumns = 5;  // temp, precip, streamflow, week, month

  // Delimited text with header date,temp,precip,streamflow,gw_<well>[,...].
  // Optional week/month columns are validated if present, derived otherwise.
  // Rejects date gaps, missing values, and unparseable rows.
  static DailySeries load(const std::string& path);

  static DailySeries from_columns(Date start, std::vector<std::string> wells,
                                  std::vector<double> temp,
                                  std::vector<double> precip,
                                  std::vector<double> streamflow,
                                  std::vector<std::vector<double>> groundwater);

  void save(const std::string& path) const;

  int days() const { return static_cast<int>(temp_.size()); }
  int well_count() const { return static_cast<int>(wells_.size()); }
  int variable_count() const { return kExogenousColumns + well_count(); }
  const std::vector<std::string>& wells() const { return wells_; }

  Date date(int i) const;
  double temp(int i) const { return temp_[i]; }
  double precip(int i) const { return precip_[i]; }
  double streamflow(int i) const { return streamflow_[i]; }
  double week(int i) const { return week_[i]; }
  double month(int i) const { return month_[i]; }
  double groundwater(int i, int well) const { return gw_[well][i]; }

  // Value of variable `v` (sample order: exogenous then wells) on day i.
  double variable(int i, int v) const;

  // The first `days` observations (used for out-of-sample retraining).
  DailySeries head(int days) const;

 private:
  DailySeries() = default;

  Date start_;
  std::vector<std::string> wells_;
  std::vector<double> temp_, precip_, streamflow_, week_, month_;
  std::vector<std::vector<double>> gw_;
};

// Per-variable affine [0,1] scaling fitted on a series: groundwater minima are
// pinned at 0 (sea level), streamflow is log(1+x)-transformed before scaling,
// calendar features use the fixed ranges 0..53 and 0..12.
struct ScalingSpec {
  struct Channel {
    double min = 0.0;
    double max = 1.0;
    bool log1p = false;

    double forward(double x) const;
    double inverse(double y) const;
  };

  Channel temp, precip, streamflow, week, month;
  std::vector<Channel> gw;  // one per well

  const Channel& variable(int v) const;  // sample order, as DailySeries

  double scale_groundwater(int well, double level) const;
  double invert_groundwater(int well, double normalized) const;

  // sqrt(mse) in level units for a normalized-unit test MSE.
  double rmse_level_units(int well, double normalized_mse) const;
};

ScalingSpec fit_scaling(const DailySeries& series);

// Supervised samples with lag G: the sample anchored at day t has inputs from
// days t-G..t (all variables, scaled) and the scaled groundwater levels of day
// t as targets. The anchor day's groundwater input slots carry day t-1's
// levels, which is what is actually known when day t is being predicted; in
// dynamic forecasting those slots receive the previous prediction. Anchors run
// t = G..L-1, so a series of L days yields L-G samples.
class LagSampleSet {
 public:
  enum class Split { train, test };

  LagSampleSet(int lag, int train_rows, Eigen::MatrixXd inputs,
               Eigen::MatrixXd targets, std::vector<int> anchor_days);

  int lag() const { return lag_; }
  int sample_count() const { return static_cast<int>(inputs_.rows()); }
  int input_width() const { return static_cast<int>(inputs_.cols()); }
  int target_width() const { return static_cast<int>(targets_.cols()); }
  int train_rows() const { return train_rows_; }
  int test_rows() const { return sample_count() - train_rows_; }

  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::MatrixXd& targets() const { return targets_; }
  int anchor_day(int row) const { return anchor_days_[row]; }

  Eigen::Block<const Eigen::MatrixXd> inputs(Split s) const;
  Eigen::Block<const Eigen::MatrixXd> targets(Split s) const;

 private:
  int lag_;
  int train_rows_;
  Eigen::MatrixXd inputs_;   // rows x (G+1)*V
  Eigen::MatrixXd targets_;  // rows x wells
  std::vector<int> anchor_days_;
};

// Chronological split with a lag-independent training-set size: the first
// `train_count` samples train, the remainder tests.
LagSampleSet build_lag_samples(const DailySeries& series,
                               const ScalingSpec& scaling, int lag,
                               int train_count);

// One-step persistence baseline on a sample split: predict each target as the
// previous day's (scaled) level and return the MSE in normalized units.
double persistence_mse(const DailySeries& series, const ScalingSpec& scaling,
                       const LagSampleSet& samples, LagSampleSet::Split split);

}  // namespace surropt
