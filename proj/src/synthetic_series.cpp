#include "surropt/synthetic_series.hpp"

#include <cmath>
#include <numbers>

#include "surropt/errors.hpp"
#include "surropt/rng.hpp"

namespace surropt {

DailySeries generate_series(const SyntheticSeriesSpec& spec) {
  if (spec.days < 2) throw InvalidArgument("series needs at least two days");
  if (spec.wells < 1) throw InvalidArgument("series needs at least one well");

  const Date start = parse_date(spec.start_date);
  const std::int64_t epoch = days_from_civil(start);
  Rng rng(spec.seed);

  const int n = spec.days;
  std::vector<double> temp(n), precip(n), streamflow(n);
  std::vector<std::vector<double>> gw(spec.wells, std::vector<double>(n));

  std::vector<double> recharge(n), temp_smooth(n);
  double flow = 6.0;
  double rech = 2.0;
  double tsm = 10.0;
  for (int t = 0; t < n; ++t) {
    const Date d = civil_from_days(epoch + t);
    const double phase =
        2.0 * std::numbers::pi * (day_of_year(d) - 1) / 365.25;

    // winter-cold, summer-hot annual cycle
    temp[t] = 17.0 - 9.0 * std::cos(phase) + rng.normal(0.0, 1.3);

    // rain concentrated in the cold season
    const double wet = 0.5 * (1.0 + std::cos(phase));
    const double rain_prob = 0.05 + 0.40 * wet;
    if (rng.bernoulli(rain_prob)) {
      precip[t] = -6.0 * (0.4 + wet) * std::log(1.0 - rng.uniform01());
    } else {
      precip[t] = 0.0;
    }

    // runoff with slow recession; spans orders of magnitude across seasons
    flow = 0.93 * flow + 5.0 * precip[t] + 0.35;
    streamflow[t] = flow * (1.0 + 0.02 * rng.normal());
    if (streamflow[t] < 0.0) streamflow[t] = 0.0;

    // slow aquifer recharge memory and smoothed irrigation-season demand
    rech = 0.975 * rech + 0.025 * precip[t];
    tsm = 0.96 * tsm + 0.04 * temp[t];
    recharge[t] = rech;
    temp_smooth[t] = tsm;
  }

  for (int w = 0; w < spec.wells; ++w) {
    const double base = spec.base_level_m + 3.0 * w;
    const double amplitude = spec.seasonal_amplitude_m * (1.0 + 0.15 * w);
    const double phase_shift = 0.25 * w;
    for (int t = 0; t < n; ++t) {
      const Date d = civil_from_days(epoch + t);
      const double phase =
          2.0 * std::numbers::pi * (day_of_year(d) - 1) / 365.25;
      const double seasonal = amplitude * std::sin(phase + phase_shift);
      const double trend = -spec.annual_decline_m * (t / 365.25);
      const double response = spec.recharge_gain * recharge[t] * amplitude -
                              spec.temperature_drawdown * temp_smooth[t] +
                              spec.storm_response_m * precip[t];
      gw[w][t] = base + seasonal + trend + response +
                 rng.normal(0.0, spec.noise_sd_m);
    }
  }

  return DailySeries::from_columns(start, [&] {
    std::vector<std::string> names;
    for (int w = 0; w < spec.wells; ++w) {
      names.push_back(std::string(1, static_cast<char>('A' + w)));
    }
    return names;
  }(), std::move(temp), std::move(precip), std::move(streamflow), std::move(gw));
}

}  // namespace surropt
