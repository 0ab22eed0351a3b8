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

#include <ethergy/efficiency.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include <ethergy/errors.hpp>

namespace ethergy {

namespace {

constexpr double kEfficiencyFloor = 1e-6;  // MH/s/W

constexpr std::string_view kModelSchema = "ethergy.efficiency_model/1";

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

double EfficiencyModel::value_at(Date date) const {
    const Date clamped = std::clamp(date, window_start, window_end);
    const double t = static_cast<double>(clamped - kGenesisDate);
    return std::exp2(intercept + slope * t);
}

EfficiencyModel fit_efficiency_trend(std::span<const BenchmarkRecord> benchmarks,
                                     const FitOptions& options) {
    if (benchmarks.size() < 2) {
        throw ValidationError("efficiency fit needs at least two benchmarks");
    }

    double sum_x = 0, sum_y = 0;
    for (const auto& b : benchmarks) {
        sum_x += static_cast<double>(b.release_date - kGenesisDate);
        sum_y += std::log2(b.efficiency());
    }
    const double n = static_cast<double>(benchmarks.size());
    const double mean_x = sum_x / n;
    const double mean_y = sum_y / n;

    double sxx = 0, sxy = 0;
    for (const auto& b : benchmarks) {
        const double dx = static_cast<double>(b.release_date - kGenesisDate) - mean_x;
        const double dy = std::log2(b.efficiency()) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx == 0) {
        throw ValidationError("degenerate fit: all benchmarks share one release date");
    }

    EfficiencyModel model;
    model.slope = sxy / sxx;
    model.intercept = mean_y - model.slope * mean_x;
    if (model.slope <= 0 && !options.allow_nonpositive_slope) {
        throw ValidationError("efficiency trend slope is not positive; pass "
                              "allow_nonpositive_slope to accept a flat or decreasing fit");
    }

    auto [min_it, max_it] =
        std::minmax_element(benchmarks.begin(), benchmarks.end(),
                            [](const auto& a, const auto& b) {
                                return a.release_date < b.release_date;
                            });
    model.window_start = min_it->release_date;
    model.window_end = max_it->release_date;

    double abs_err = 0;
    for (const auto& b : benchmarks) {
        const double t = static_cast<double>(b.release_date - kGenesisDate);
        const double trend = std::exp2(model.intercept + model.slope * t);
        abs_err += std::abs(trend - b.efficiency());
    }
    model.band_mae = abs_err / n;
    return model;
}

Bounds efficiency_at(const EfficiencyModel& model, Date date) {
    const double best = model.value_at(date);
    return {std::max(best - model.band_mae, kEfficiencyFloor), best, best + model.band_mae};
}

std::string efficiency_model_to_json(const EfficiencyModel& model) {
    nlohmann::ordered_json j;
    j["schema"] = kModelSchema;
    j["slope"] = model.slope;
    j["intercept"] = model.intercept;
    j["band_mae"] = model.band_mae;
    j["window_start"] = model.window_start.to_string();
    j["window_end"] = model.window_end.to_string();
    return j.dump(2) + "\n";
}

EfficiencyModel efficiency_model_from_json(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad efficiency model JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != kModelSchema) {
        throw ValidationError("efficiency model JSON missing schema tag '" +
                              std::string(kModelSchema) + "'");
    }
    try {
        EfficiencyModel model;
        model.slope = j.at("slope").get<double>();
        model.intercept = j.at("intercept").get<double>();
        model.band_mae = j.at("band_mae").get<double>();
        model.window_start = Date::parse(j.at("window_start").get<std::string>());
        model.window_end = Date::parse(j.at("window_end").get<std::string>());
        if (model.band_mae < 0) throw ValidationError("band_mae must be nonnegative");
        if (model.window_end < model.window_start) {
            throw ValidationError("fit window is inverted");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad efficiency model JSON: ") + e.what());
    }
}

std::optional<std::string> classify_worker_id(std::string_view worker_id,
                                              const HardwareTermTable& terms) {
    const std::string haystack = to_lower(worker_id);
    const HardwareTermTable::Term* best = nullptr;
    std::size_t best_len = 0, best_pos = 0;
    for (const auto& t : terms.terms()) {
        const std::size_t pos = haystack.find(to_lower(t.term));
        if (pos == std::string::npos) continue;
        const std::size_t len = t.term.size();
        if (!best || len > best_len || (len == best_len && pos < best_pos)) {
            best = &t;
            best_len = len;
            best_pos = pos;
        }
    }
    if (!best) return std::nullopt;
    return best->canonical;
}

double weighted_efficiency(std::span<const std::pair<double, double>> items) {
    double weight_sum = 0, weighted = 0;
    for (const auto& [weight, eff] : items) {
        if (weight < 0) throw ValidationError("negative hashrate weight");
        weight_sum += weight;
        weighted += weight * eff;
    }
    if (weight_sum <= 0) throw ValidationError("weighted efficiency needs a positive weight");
    return weighted / weight_sum;
}

std::vector<HardwareProfile> build_hardware_profiles(std::span<const BenchmarkRecord> benchmarks,
                                                     const HardwareTermTable& terms) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& b : benchmarks) {
        if (auto canonical = classify_worker_id(b.hardware_name, terms)) {
            auto& [effs, powers] = groups[*canonical];
            effs.push_back(b.efficiency());
            powers.push_back(b.power_w);
        }
    }
    std::vector<HardwareProfile> out;
    out.reserve(groups.size());
    for (auto& [canonical, data] : groups) {
        out.push_back({canonical, median(std::move(data.first)), median(std::move(data.second))});
    }
    return out;
}

const HardwareProfile* find_profile(std::span<const HardwareProfile> profiles,
                                    std::string_view canonical) {
    for (const auto& p : profiles) {
        if (p.canonical_hardware == canonical) return &p;
    }
    return nullptr;
}

double worker_power_estimate(double reported_hashrate_mhs, const HardwareProfile& profile) {
    if (!(profile.median_efficiency > 0)) {
        throw ValidationError("profile efficiency must be positive");
    }
    return reported_hashrate_mhs / profile.median_efficiency;
}

HashrateDistribution hashrate_distribution(std::span<const WorkerSnapshot> snapshot,
                                           double bin_width_mhs) {
    if (snapshot.empty()) throw ValidationError("empty worker snapshot");
    if (!(bin_width_mhs > 0)) throw ValidationError("bin width must be positive");

    HashrateDistribution dist;
    dist.bin_width_mhs = bin_width_mhs;

    double max_rate = 0;
    for (const auto& w : snapshot) max_rate = std::max(max_rate, w.reported_hashrate_mhs);
    const std::size_t bin_count = static_cast<std::size_t>(max_rate / bin_width_mhs) + 1;
    dist.bins.resize(bin_count);
    for (std::size_t i = 0; i < bin_count; ++i) {
        dist.bins[i].lower_mhs = static_cast<double>(i) * bin_width_mhs;
    }

    for (const auto& w : snapshot) {
        const auto idx = static_cast<std::size_t>(w.reported_hashrate_mhs / bin_width_mhs);
        auto& bin = dist.bins[std::min(idx, bin_count - 1)];
        ++bin.worker_count;
        bin.hashrate_mhs += w.reported_hashrate_mhs;
        dist.total_hashrate_mhs += w.reported_hashrate_mhs;

        if (w.reported_hashrate_mhs < kSmallRigMaxMhs) {
            dist.share_small += w.reported_hashrate_mhs;
        } else if (w.reported_hashrate_mhs < kLargeRigMinMhs) {
            dist.share_mid += w.reported_hashrate_mhs;
        } else {
            dist.share_large += w.reported_hashrate_mhs;
        }
    }
    if (dist.total_hashrate_mhs <= 0) {
        throw ValidationError("snapshot carries no hashrate");
    }
    dist.share_small /= dist.total_hashrate_mhs;
    dist.share_mid /= dist.total_hashrate_mhs;
    dist.share_large /= dist.total_hashrate_mhs;
    return dist;
}

}  // namespace ethergy
