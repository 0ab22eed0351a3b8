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

#include <ethergy/pipeline.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include <ethergy/csv.hpp>
#include <ethergy/errors.hpp>

namespace ethergy {

namespace {

constexpr double kGramsPerTonne = 1e6;

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Bounds emissions_for(const Bounds& energy_kwh, double factor_gco2_kwh) {
    // kWh * g/kWh = g; tonnes = g / 1e6. Low/high pair low/high energy with
    // the same daily factor: the factor's own uncertainty is not banded.
    return energy_kwh.scaled(factor_gco2_kwh / kGramsPerTonne);
}

void run_parallel(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    unsigned requested = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    requested = std::min<unsigned>(requested, 64);
    if (requested <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(requested);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const std::size_t chunk = (n + requested - 1) / requested;
    for (unsigned t = 0; t < requested; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                const std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::optional<double> daily_network_factor(std::span<const BlockAttribution> day_attributions) {
    double sum = 0;
    std::size_t mapped = 0;
    for (const auto& a : day_attributions) {
        if (!day_attributions.empty() && a.day != day_attributions.front().day) {
            throw ValidationError("attributions span more than one day");
        }
        if (a.emissions_factor) {
            sum += *a.emissions_factor;
            ++mapped;
        }
    }
    if (mapped == 0) return std::nullopt;
    return sum / static_cast<double>(mapped);
}

void smooth_early_window(std::vector<std::optional<double>>& factors, std::size_t window_begin,
                         std::size_t window_end) {
    window_end = std::min(window_end, factors.size());
    if (window_begin >= window_end) return;  // empty window is a no-op
    std::vector<double> present;
    for (std::size_t i = window_begin; i < window_end; ++i) {
        if (factors[i]) present.push_back(*factors[i]);
    }
    if (present.empty()) return;
    const double m = median_of(std::move(present));
    for (std::size_t i = window_begin; i < window_end; ++i) {
        if (factors[i]) factors[i] = m;
    }
}

std::vector<DailyEstimate> compute_energy_series(std::span<const HashrateSample> hashrate,
                                                 const EfficiencyModel& model,
                                                 const PipelineConfig& config) {
    config.params.validate();

    std::vector<const HashrateSample*> days;
    days.reserve(hashrate.size());
    for (const auto& s : hashrate) {
        if (config.start && s.date < *config.start) continue;
        if (config.end && s.date > *config.end) continue;
        days.push_back(&s);
    }
    if (days.empty()) throw ValidationError("no hashrate samples in the requested date range");

    std::vector<DailyEstimate> daily(days.size());
    run_parallel(days.size(), config.threads, [&](std::size_t i) {
        const HashrateSample& s = *days[i];
        DailyEstimate& d = daily[i];
        d.date = s.date;
        d.hashrate_ths = s.network_hashrate_ths;
        d.efficiency_mhs_w = efficiency_at(model, s.date);
        if (config.additive_hw_overhead) {
            d.power_w = {estimate_power_additive(s.network_hashrate_ths, d.efficiency_mhs_w.high,
                                                 config.params.low, config.additive_hw),
                         estimate_power_additive(s.network_hashrate_ths, d.efficiency_mhs_w.best,
                                                 config.params.best, config.additive_hw),
                         estimate_power_additive(s.network_hashrate_ths, d.efficiency_mhs_w.low,
                                                 config.params.high, config.additive_hw)};
            d.energy_kwh = d.power_w.scaled(24.0 / 1000.0);
        } else {
            const PowerEstimate est = scenario_triple(s.network_hashrate_ths, d.efficiency_mhs_w,
                                                      config.params, config.hours_per_year);
            d.power_w = est.power_w;
            d.energy_kwh = est.energy_kwh;
        }
        if (!d.power_w.ordered() || !d.energy_kwh.ordered()) {
            throw ValidationError("unordered power bounds on " + d.date.to_string());
        }
    });
    return daily;
}

PipelineResult run_pipeline(std::span<const HashrateSample> hashrate,
                            const EfficiencyModel& model,
                            std::span<const BlockAttribution> attributions,
                            const PipelineConfig& config) {
    if (hashrate.empty()) throw ValidationError("empty hashrate series");
    if (attributions.empty()) throw ValidationError("no block attributions");

    // group factors by UTC day
    std::map<Date, std::vector<const BlockAttribution*>> by_day;
    for (const auto& a : attributions) by_day[a.day].push_back(&a);

    PipelineConfig effective = config;
    const Date blocks_first = by_day.begin()->first;
    const Date blocks_last = by_day.rbegin()->first;
    effective.start = std::max(config.start.value_or(hashrate.front().date),
                               std::max(hashrate.front().date, blocks_first));
    effective.end = std::min(config.end.value_or(hashrate.back().date),
                             std::min(hashrate.back().date, blocks_last));
    if (*effective.end < *effective.start) {
        throw ValidationError("hashrate series and block data have no overlapping date range");
    }

    PipelineResult result;
    result.daily = compute_energy_series(hashrate, model, effective);

    // raw per-day factors and block counts over the run range
    const std::size_t n = result.daily.size();
    std::vector<std::optional<double>> factors(n);
    for (std::size_t i = 0; i < n; ++i) {
        DailyEstimate& d = result.daily[i];
        const auto it = by_day.find(d.date);
        if (it != by_day.end()) {
            double sum = 0;
            for (const BlockAttribution* a : it->second) {
                if (a->emissions_factor) {
                    sum += *a->emissions_factor;
                    ++d.mapped_blocks;
                } else {
                    ++d.unmapped_blocks;
                }
            }
            if (d.mapped_blocks > 0) {
                factors[i] = sum / static_cast<double>(d.mapped_blocks);
            }
        }
    }

    // the factor series is noisy right after the first block: flatten the
    // opening window to its median
    if (config.smoothing_window_days > 0 && result.daily.front().date <= blocks_first) {
        const std::size_t offset =
            static_cast<std::size_t>(blocks_first - result.daily.front().date);
        smooth_early_window(factors, offset,
                            offset + static_cast<std::size_t>(config.smoothing_window_days));
    }

    // carry the last known factor across zero-mapped days
    if (!factors.front()) {
        throw ValidationError("no mapped blocks on " + result.daily.front().date.to_string() +
                              "; the run cannot start without a factor (extend the factor table "
                              "or the block data)");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!factors[i]) factors[i] = *factors[i - 1];
    }

    for (std::size_t i = 0; i < n; ++i) {
        DailyEstimate& d = result.daily[i];
        d.factor_gco2_kwh = *factors[i];
        d.emissions_t = emissions_for(d.energy_kwh, d.factor_gco2_kwh);
        if (!d.emissions_t.ordered()) {
            throw ValidationError("unordered emissions bounds on " + d.date.to_string());
        }
    }

    result.summary = summarize(result.daily, config.report_start);
    return result;
}

RunSummary summarize(std::span<const DailyEstimate> daily, std::optional<Date> report_start) {
    if (daily.empty()) throw ValidationError("empty daily series");

    RunSummary s;
    s.start = daily.front().date;
    s.end = daily.back().date;
    if (report_start && *report_start < s.start) s.start = *report_start;

    Bounds energy_kwh{};
    Bounds emissions_t{};
    s.peak_power_date = daily.front().date;
    s.peak_emissions_date = daily.front().date;
    for (const auto& d : daily) {
        energy_kwh = energy_kwh + d.energy_kwh;
        emissions_t = emissions_t + d.emissions_t;
        if (d.power_w.best > s.peak_power_w) {
            s.peak_power_w = d.power_w.best;
            s.peak_power_date = d.date;
        }
        if (d.emissions_t.best > s.peak_emissions_t) {
            s.peak_emissions_t = d.emissions_t.best;
            s.peak_emissions_date = d.date;
        }
    }
    s.total_energy_twh = energy_kwh.scaled(1e-9);
    s.total_emissions_mt = emissions_t.scaled(1e-6);
    return s;
}

FixedFactorReport fixed_factor_report(std::span<const DailyEstimate> daily,
                                      double factor_gco2_kwh) {
    if (daily.empty()) throw ValidationError("empty daily series");
    if (!(factor_gco2_kwh > 0)) throw ValidationError("factor must be positive");

    FixedFactorReport report;
    report.factor_gco2_kwh = factor_gco2_kwh;
    Bounds total_t{};
    report.daily_emissions_t.reserve(daily.size());
    for (const auto& d : daily) {
        const Bounds t = emissions_for(d.energy_kwh, factor_gco2_kwh);
        report.daily_emissions_t.emplace_back(d.date, t);
        total_t = total_t + t;
    }
    report.total_emissions_mt = total_t.scaled(1e-6);
    return report;
}

PeriodSumReport period_sum_report(std::span<const DailyEstimate> daily, Date from, Date to,
                                  std::span<const double> factors) {
    if (to < from) throw ValidationError("empty period: 'to' precedes 'from'");

    PeriodSumReport report;
    report.from = from;
    report.to = to;
    Bounds energy_kwh{};
    bool any = false;
    for (const auto& d : daily) {
        if (d.date < from || d.date > to) continue;
        energy_kwh = energy_kwh + d.energy_kwh;
        any = true;
    }
    if (!any) throw ValidationError("no daily estimates inside " + from.to_string() + ".." +
                                    to.to_string());
    report.total_energy_twh = energy_kwh.scaled(1e-9);
    for (double f : factors) {
        if (!(f > 0)) throw ValidationError("factor must be positive");
        report.entries.push_back({f, energy_kwh.scaled(f / kGramsPerTonne).scaled(1e-6)});
    }
    return report;
}

std::string daily_to_csv(std::span<const DailyEstimate> daily) {
    std::string out =
        "date,hashrate_ths,eff_low,eff_best,eff_high,power_w_low,power_w_best,power_w_high,"
        "energy_kwh_low,energy_kwh_best,energy_kwh_high,factor_gco2_kwh,emissions_t_low,"
        "emissions_t_best,emissions_t_high,mapped_blocks,unmapped_blocks\n";
    for (const auto& d : daily) {
        out += d.date.to_string();
        out += "," + csv::format_double(d.hashrate_ths);
        out += "," + csv::format_double(d.efficiency_mhs_w.low);
        out += "," + csv::format_double(d.efficiency_mhs_w.best);
        out += "," + csv::format_double(d.efficiency_mhs_w.high);
        out += "," + csv::format_double(d.power_w.low);
        out += "," + csv::format_double(d.power_w.best);
        out += "," + csv::format_double(d.power_w.high);
        out += "," + csv::format_double(d.energy_kwh.low);
        out += "," + csv::format_double(d.energy_kwh.best);
        out += "," + csv::format_double(d.energy_kwh.high);
        out += "," + csv::format_double(d.factor_gco2_kwh);
        out += "," + csv::format_double(d.emissions_t.low);
        out += "," + csv::format_double(d.emissions_t.best);
        out += "," + csv::format_double(d.emissions_t.high);
        out += "," + std::to_string(d.mapped_blocks);
        out += "," + std::to_string(d.unmapped_blocks);
        out += "\n";
    }
    return out;
}

std::vector<DailyEstimate> load_daily(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(
        path,
        "date,hashrate_ths,eff_low,eff_best,eff_high,power_w_low,power_w_best,power_w_high,"
        "energy_kwh_low,energy_kwh_best,energy_kwh_high,factor_gco2_kwh,emissions_t_low,"
        "emissions_t_best,emissions_t_high,mapped_blocks,unmapped_blocks",
        17);
    std::vector<DailyEstimate> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        DailyEstimate d;
        try {
            d.date = Date::parse(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ":" + std::to_string(row.line_no) + ": " +
                                  e.what());
        }
        auto num = [&](std::size_t i) {
            return csv::parse_double(row.fields[i], path, row.line_no, "value");
        };
        d.hashrate_ths = num(1);
        d.efficiency_mhs_w = {num(2), num(3), num(4)};
        d.power_w = {num(5), num(6), num(7)};
        d.energy_kwh = {num(8), num(9), num(10)};
        d.factor_gco2_kwh = num(11);
        d.emissions_t = {num(12), num(13), num(14)};
        d.mapped_blocks = static_cast<std::size_t>(
            csv::parse_int(row.fields[15], path, row.line_no, "mapped_blocks"));
        d.unmapped_blocks = static_cast<std::size_t>(
            csv::parse_int(row.fields[16], path, row.line_no, "unmapped_blocks"));
        out.push_back(d);
    }
    return out;
}

std::string summary_to_json(const RunSummary& summary, std::string_view config_fingerprint) {
    nlohmann::ordered_json j;
    j["schema"] = "ethergy.summary/1";
    j["config_fingerprint"] = std::string(config_fingerprint);
    j["date_range"] = {{"start", summary.start.to_string()}, {"end", summary.end.to_string()}};
    j["total_energy_twh"] = {{"low", summary.total_energy_twh.low},
                             {"best", summary.total_energy_twh.best},
                             {"high", summary.total_energy_twh.high}};
    j["total_emissions_mt"] = {{"low", summary.total_emissions_mt.low},
                               {"best", summary.total_emissions_mt.best},
                               {"high", summary.total_emissions_mt.high}};
    j["peak_power"] = {{"date", summary.peak_power_date.to_string()},
                       {"watts", summary.peak_power_w}};
    j["peak_emissions"] = {{"date", summary.peak_emissions_date.to_string()},
                           {"tonnes_per_day", summary.peak_emissions_t}};
    return j.dump(2) + "\n";
}

}  // namespace ethergy
