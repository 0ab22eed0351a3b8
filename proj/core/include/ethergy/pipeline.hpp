/*
   Copyright 2026 The Ethergy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <ethergy/efficiency.hpp>
#include <ethergy/emissions.hpp>
#include <ethergy/energy.hpp>
#include <ethergy/types.hpp>

namespace ethergy {

struct DailyEstimate {
    Date date;
    double hashrate_ths{0};
    Bounds efficiency_mhs_w;
    Bounds power_w;
    Bounds energy_kwh;
    double factor_gco2_kwh{0};   // network emissions factor for the day
    Bounds emissions_t;          // tonnes CO2 per day
    std::size_t mapped_blocks{0};
    std::size_t unmapped_blocks{0};
};

struct RunSummary {
    Date start;
    Date end;
    Bounds total_energy_twh;
    Bounds total_emissions_mt;
    Date peak_power_date;
    double peak_power_w{0};        // best estimate at its peak
    Date peak_emissions_date;
    double peak_emissions_t{0};
};

struct PipelineConfig {
    ScenarioBounds params;
    double hours_per_year = kHoursPerYear;
    int smoothing_window_days = 21;  // first weeks of the factor series
    int threads = 0;                 // 0 = hardware concurrency
    bool additive_hw_overhead = false;
    AdditiveHwOverhead additive_hw;
    std::optional<Date> start;         // restrict the run range
    std::optional<Date> end;
    std::optional<Date> report_start;  // widen the summary range with zero-days
};

struct PipelineResult {
    std::vector<DailyEstimate> daily;
    RunSummary summary;
};

/// Unweighted mean factor over the mapped blocks of one day; nullopt when
/// nothing is mapped. All attributions must belong to one UTC day.
std::optional<double> daily_network_factor(std::span<const BlockAttribution> day_attributions);

/// Replaces every present value inside [window_begin, window_end) with the
/// median of the window's original present values. Absent values stay absent.
void smooth_early_window(std::vector<std::optional<double>>& factors, std::size_t window_begin,
                         std::size_t window_end);

/// Energy-only series: per-day efficiency band, scenario power and energy.
/// Factor and emissions columns are zero.
std::vector<DailyEstimate> compute_energy_series(std::span<const HashrateSample> hashrate,
                                                 const EfficiencyModel& model,
                                                 const PipelineConfig& config);

/// Full daily pipeline: energy series joined with per-day network emissions
/// factors (smoothed over the early window, carried forward across days with
/// no mapped blocks) and the resulting emissions with bounds.
PipelineResult run_pipeline(std::span<const HashrateSample> hashrate,
                            const EfficiencyModel& model,
                            std::span<const BlockAttribution> attributions,
                            const PipelineConfig& config);

RunSummary summarize(std::span<const DailyEstimate> daily,
                     std::optional<Date> report_start = std::nullopt);

// Comparison modes against other estimation styles.
struct FixedFactorReport {
    double factor_gco2_kwh{0};
    Bounds total_emissions_mt;
    std::vector<std::pair<Date, Bounds>> daily_emissions_t;
};

/// Recomputes every day's emissions with one constant factor.
FixedFactorReport fixed_factor_report(std::span<const DailyEstimate> daily,
                                      double factor_gco2_kwh);

struct PeriodSumEntry {
    double factor_gco2_kwh{0};
    Bounds total_emissions_mt;
};

struct PeriodSumReport {
    Date from;
    Date to;
    Bounds total_energy_twh;
    std::vector<PeriodSumEntry> entries;
};

/// Sums daily energy over [from, to] and converts it to emissions at each of
/// the given constant factors.
PeriodSumReport period_sum_report(std::span<const DailyEstimate> daily, Date from, Date to,
                                  std::span<const double> factors);

// Serialization (canonical column order, stable float formatting).
std::string daily_to_csv(std::span<const DailyEstimate> daily);
std::vector<DailyEstimate> load_daily(const std::filesystem::path& path);
std::string summary_to_json(const RunSummary& summary, std::string_view config_fingerprint);

}  // namespace ethergy
