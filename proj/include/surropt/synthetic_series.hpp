#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surropt/timeseries.hpp"

namespace surropt {

// Parameters of the synthetic desk-scale hydrograph: an annual temperature
// cycle, winter-season rain, runoff-driven streamflow, and per-well
// groundwater levels composed of a seasonal swing, a multi-year decline, a
// slow rain-recharge response, and a small unpredictable residual.
struct SyntheticSeriesSpec {
  int days = 1500;
  int wells = 1;
  std::uint64_t seed = 20140915;
  std::string start_date = "2010-01-01";

  double base_level_m = 46.0;       // first well; +3 m per additional well
  double seasonal_amplitude_m = 3.0;
  double annual_decline_m = 1.2;    // drought trend per year
  double recharge_gain = 0.05;      // level response to the recharge state
  double temperature_drawdown = 0.08;  // level response to the smoothed temperature
  double storm_response_m = 0.0;    // same-day level jump per mm of rain
  double noise_sd_m = 0.02;         // day-to-day residual
};

DailySeries generate_series(const SyntheticSeriesSpec& spec);

}  // namespace surropt
