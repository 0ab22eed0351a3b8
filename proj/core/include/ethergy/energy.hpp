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

#include <array>

#include <ethergy/types.hpp>

namespace ethergy {

/// The four dimensionless knobs of the power model. `over_*` and `loss_grid`
/// are multipliers >= 1; `eff_psu` is the AC->DC conversion ratio in (0, 1].
struct ScenarioParameters {
    double over_hw{1.03};
    double over_dc{1.10};
    double loss_grid{1.06};
    double eff_psu{0.90};

    void validate() const;  // throws ValidationError on a bad value
};

/// Low/best/high parameter sets, ordered by the energy estimate they produce:
/// "low" holds the values that yield the LOWEST energy (so the highest PSU
/// efficiency), "high" the values that yield the highest.
struct ScenarioBounds {
    ScenarioParameters low{1.01, 1.01, 1.05, 0.95};
    ScenarioParameters best{1.03, 1.10, 1.06, 0.90};
    ScenarioParameters high{1.06, 1.20, 1.07, 0.80};

    void validate() const;
};

inline constexpr double kHoursPerYear = 8766.0;   // 365.25-day year
inline constexpr double kHoursPerYearCivil = 8760.0;

/// Network power draw in Watts:
///   hashrate_ths * 1e6 * over_hw * over_dc * loss_grid / (eff * eff_psu)
/// with efficiency in MH/s per W.
double estimate_power(double hashrate_ths, double efficiency_mhs_w,
                      const ScenarioParameters& params);

/// Variant where non-GPU hardware draw enters as fixed Watts per worker
/// instead of the over_hw multiplier (worker count is hashrate divided by a
/// typical per-worker hashrate). The base draw is a wall-side quantity, so it
/// is not divided by PSU efficiency.
struct AdditiveHwOverhead {
    double watts_per_worker{20.0};
    double worker_hashrate_mhs{550.0};
};

double estimate_power_additive(double hashrate_ths, double efficiency_mhs_w,
                               const ScenarioParameters& params, const AdditiveHwOverhead& hw);

struct PowerEstimate {
    Date date;
    Bounds power_w;
    Bounds energy_kwh;       // for one day: power * 24 h
    Bounds annualized_twh;   // power extrapolated to a full year
};

/// Applies the three parameter sets to one day. The low power estimate pairs
/// the low-energy parameters with the HIGH end of the efficiency band, and
/// vice versa.
PowerEstimate scenario_triple(double hashrate_ths, const Bounds& efficiency_mhs_w,
                              const ScenarioBounds& params, double hours_per_year = kHoursPerYear);

/// Worker-level hardware overhead: (wall GPU power + base power) / wall GPU
/// power, where wall GPU power is gpu_count * per_gpu_power / psu_eff.
double compute_hw_overhead(int gpu_count, double per_gpu_power_w, double psu_eff,
                           double base_power_w);

/// Hashrate-share-weighted blend of per-class overheads. Shares must be
/// nonnegative and sum to 1 within 1e-9.
double blend_hw_overhead(const std::array<double, 3>& shares,
                         const std::array<double, 3>& overheads);

/// Power in Watts extrapolated to TWh per year.
double annualize_twh(double power_w, double hours_per_year = kHoursPerYear);

}  // namespace ethergy
