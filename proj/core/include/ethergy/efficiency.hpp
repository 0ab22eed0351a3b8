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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <ethergy/tables.hpp>
#include <ethergy/types.hpp>

namespace ethergy {

/// Log-linear hashing-efficiency trend: log2(MH/s/W) fit against days since
/// network genesis, with a symmetric +/- MAE band in linear units.
struct EfficiencyModel {
    double slope{0};      // log2(MH/s/W) per day
    double intercept{0};  // log2(MH/s/W) at genesis
    double band_mae{0};   // MH/s/W
    Date window_start;
    Date window_end;

    /// Trendline value at `date` clamped into the fit window.
    double value_at(Date date) const;
};

struct FitOptions {
    // Efficiency is expected to improve over time; a flat or decreasing fit
    // is rejected unless explicitly permitted.
    bool allow_nonpositive_slope = false;
};

EfficiencyModel fit_efficiency_trend(std::span<const BenchmarkRecord> benchmarks,
                                     const FitOptions& options = {});

/// (low, best, high) efficiency at `date`; the low bound is floored at a
/// small positive value so downstream divisions stay finite.
Bounds efficiency_at(const EfficiencyModel& model, Date date);

std::string efficiency_model_to_json(const EfficiencyModel& model);
EfficiencyModel efficiency_model_from_json(std::string_view json_text);

/// Case-insensitive substring classification of a worker ID against the term
/// table. The longest matching term wins; ties break to the match appearing
/// earliest in the ID. Returns nullopt when nothing matches.
std::optional<std::string> classify_worker_id(std::string_view worker_id,
                                              const HardwareTermTable& terms);

/// Hashrate-weighted average efficiency over (weight MH/s, efficiency) items.
double weighted_efficiency(std::span<const std::pair<double, double>> items);

struct HardwareProfile {
    std::string canonical_hardware;
    double median_efficiency{0};  // MH/s per W
    double median_power_w{0};
};

/// Groups benchmarks by canonical hardware (via the term table) and takes
/// per-group medians. Benchmarks matching no term are skipped.
std::vector<HardwareProfile> build_hardware_profiles(std::span<const BenchmarkRecord> benchmarks,
                                                     const HardwareTermTable& terms);

const HardwareProfile* find_profile(std::span<const HardwareProfile> profiles,
                                    std::string_view canonical);

/// GPU-reported worker power implied by its hashrate and hardware profile.
double worker_power_estimate(double reported_hashrate_mhs, const HardwareProfile& profile);

inline constexpr double kSmallRigMaxMhs = 100.0;   // single/dual GPU boundary
inline constexpr double kLargeRigMinMhs = 350.0;   // six-GPU-class boundary

struct HashrateDistribution {
    struct Bin {
        double lower_mhs{0};  // bin covers [lower, lower + width)
        std::size_t worker_count{0};
        double hashrate_mhs{0};
    };
    std::vector<Bin> bins;
    double bin_width_mhs{10};
    double total_hashrate_mhs{0};
    // hashrate shares for [0, 100), [100, 350), [350, inf) MH/s; sum to 1
    double share_small{0};
    double share_mid{0};
    double share_large{0};
};

HashrateDistribution hashrate_distribution(std::span<const WorkerSnapshot> snapshot,
                                           double bin_width_mhs = 10.0);

}  // namespace ethergy
