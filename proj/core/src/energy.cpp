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

#include <ethergy/energy.hpp>

#include <cmath>
#include <string>

#include <ethergy/errors.hpp>

namespace ethergy {

void ScenarioParameters::validate() const {
    auto check = [](double v, double lo, double hi, const char* name) {
        if (!(v >= lo && v <= hi) || !std::isfinite(v)) {
            throw ValidationError(std::string(name) + " = " + std::to_string(v) +
                                  " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  "]");
        }
    };
    check(over_hw, 1.0, 10.0, "over_hw");
    check(over_dc, 1.0, 10.0, "over_dc");
    check(loss_grid, 1.0, 2.0, "loss_grid");
    if (!(eff_psu > 0 && eff_psu <= 1.0)) {
        throw ValidationError("eff_psu = " + std::to_string(eff_psu) + " outside (0, 1]");
    }
}

void ScenarioBounds::validate() const {
    low.validate();
    best.validate();
    high.validate();
}

double estimate_power(double hashrate_ths, double efficiency_mhs_w,
                      const ScenarioParameters& params) {
    if (!(efficiency_mhs_w > 0)) {
        throw ValidationError("division by nonpositive efficiency");
    }
    if (!(hashrate_ths > 0)) {
        throw ValidationError("hashrate must be positive");
    }
    // 1 TH/s = 1e6 MH/s, so hashrate/efficiency lands directly in Watts.
    return hashrate_ths * 1e6 * params.over_hw * params.over_dc * params.loss_grid /
           (efficiency_mhs_w * params.eff_psu);
}

double estimate_power_additive(double hashrate_ths, double efficiency_mhs_w,
                               const ScenarioParameters& params, const AdditiveHwOverhead& hw) {
    if (!(efficiency_mhs_w > 0)) {
        throw ValidationError("division by nonpositive efficiency");
    }
    if (!(hw.worker_hashrate_mhs > 0)) {
        throw ValidationError("worker hashrate must be positive");
    }
    const double hashrate_mhs = hashrate_ths * 1e6;
    const double wall_gpu_w = hashrate_mhs / (efficiency_mhs_w * params.eff_psu);
    const double worker_count = hashrate_mhs / hw.worker_hashrate_mhs;
    return (wall_gpu_w + worker_count * hw.watts_per_worker) * params.over_dc * params.loss_grid;
}

PowerEstimate scenario_triple(double hashrate_ths, const Bounds& efficiency_mhs_w,
                              const ScenarioBounds& params, double hours_per_year) {
    if (!efficiency_mhs_w.ordered()) {
        throw ValidationError("inverted efficiency triple");
    }
    params.validate();

    PowerEstimate est;
    // Lower energy comes from the low-energy parameter set and the MORE
    // efficient end of the hardware band, and symmetrically for the high end.
    est.power_w.low = estimate_power(hashrate_ths, efficiency_mhs_w.high, params.low);
    est.power_w.best = estimate_power(hashrate_ths, efficiency_mhs_w.best, params.best);
    est.power_w.high = estimate_power(hashrate_ths, efficiency_mhs_w.low, params.high);
    if (!est.power_w.ordered()) {
        throw ValidationError("scenario parameter sets produce an unordered power triple");
    }
    est.energy_kwh = est.power_w.scaled(24.0 / 1000.0);
    est.annualized_twh = est.power_w.scaled(hours_per_year / 1e12);
    return est;
}

double compute_hw_overhead(int gpu_count, double per_gpu_power_w, double psu_eff,
                           double base_power_w) {
    if (gpu_count < 1) throw ValidationError("gpu_count must be at least 1");
    if (!(per_gpu_power_w > 0) || !(base_power_w >= 0)) {
        throw ValidationError("power values must be positive");
    }
    if (!(psu_eff > 0 && psu_eff <= 1.0)) {
        throw ValidationError("psu efficiency outside (0, 1]");
    }
    const double wall_gpu_w = gpu_count * per_gpu_power_w / psu_eff;
    return (wall_gpu_w + base_power_w) / wall_gpu_w;
}

double blend_hw_overhead(const std::array<double, 3>& shares,
                         const std::array<double, 3>& overheads) {
    double share_sum = 0;
    for (double s : shares) {
        if (s < 0) throw ValidationError("negative hashrate share");
        share_sum += s;
    }
    if (std::abs(share_sum - 1.0) > 1e-9) {
        throw ValidationError("hashrate shares must sum to 1, got " + std::to_string(share_sum));
    }
    double blended = 0;
    for (std::size_t i = 0; i < 3; ++i) blended += shares[i] * overheads[i];
    return blended;
}

double annualize_twh(double power_w, double hours_per_year) {
    if (power_w < 0) throw ValidationError("power must be nonnegative");
    return power_w * hours_per_year / 1e12;  // W*h -> TWh
}

}  // namespace ethergy
