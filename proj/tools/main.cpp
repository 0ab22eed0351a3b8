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

// Command-line front end: ingestion, model fitting, block classification,
// the daily energy/emissions estimate, comparison reports, and SVG figures.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ethergy/config.hpp>
#include <ethergy/csv.hpp>
#include <ethergy/efficiency.hpp>
#include <ethergy/emissions.hpp>
#include <ethergy/errors.hpp>
#include <ethergy/ingestion.hpp>
#include <ethergy/pipeline.hpp>
#include <ethergy/rpc_fetch.hpp>
#include <ethergy/svg_plot.hpp>

namespace {

using namespace ethergy;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    bool quiet = false;
    // overrides that win over the config file when given
    std::string hashrate, blocks, benchmarks, workers, factors, pool_regions, region_grid_map,
        patterns, hardware_terms, miner_pools, model_path;
    std::string source;
    std::string gap_policy;
    std::string start, end, report_start;
    std::optional<double> year_hours;
    std::optional<int> smoothing_window;
    std::optional<int> threads;
    std::string over_hw, over_dc, loss_grid, eff_psu;  // "low,best,high"
    std::string hw_overhead_mode;
    std::optional<double> hw_watts_per_worker;
    std::optional<double> hw_worker_hashrate;
};

void say(const GlobalArgs& g, const std::string& line) {
    if (!g.quiet) std::fprintf(stderr, "%s\n", line.c_str());
}

RunConfig load_config(const GlobalArgs& g) {
    RunConfig cfg;
    if (!g.config_path.empty()) {
        const std::filesystem::path path = g.config_path;
        cfg = RunConfig::from_file(path);
        cfg.resolve_relative_to(path.has_parent_path() ? path.parent_path()
                                                       : std::filesystem::path("."));
    }
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;  // flags win over config
    if (g.quiet) cfg.quiet = true;
    if (!g.source.empty()) cfg.source = hashrate_source_from_string(g.source);
    if (!g.gap_policy.empty()) {
        if (g.gap_policy == "reject") cfg.gap_policy = GapPolicy::reject;
        else if (g.gap_policy == "forward_fill") cfg.gap_policy = GapPolicy::forward_fill;
        else
            throw ValidationError("--gap-policy expects reject or forward_fill, got '" +
                                  g.gap_policy + "'");
    }
    if (!g.start.empty()) cfg.pipeline.start = Date::parse(g.start);
    if (!g.end.empty()) cfg.pipeline.end = Date::parse(g.end);
    if (!g.report_start.empty()) cfg.pipeline.report_start = Date::parse(g.report_start);
    if (g.year_hours) cfg.pipeline.hours_per_year = *g.year_hours;
    if (g.smoothing_window) cfg.pipeline.smoothing_window_days = *g.smoothing_window;
    if (g.threads) cfg.pipeline.threads = *g.threads;

    auto path_override = [](std::filesystem::path& dst, const std::string& src) {
        if (!src.empty()) dst = src;
    };
    path_override(cfg.hashrate, g.hashrate);
    path_override(cfg.blocks, g.blocks);
    path_override(cfg.benchmarks, g.benchmarks);
    path_override(cfg.workers, g.workers);
    path_override(cfg.factors, g.factors);
    path_override(cfg.pool_regions, g.pool_regions);
    path_override(cfg.region_grid_map, g.region_grid_map);
    path_override(cfg.patterns, g.patterns);
    path_override(cfg.hardware_terms, g.hardware_terms);
    path_override(cfg.miner_pools, g.miner_pools);
    path_override(cfg.model, g.model_path);

    auto triple_override = [](const std::string& text, auto member) {
        if (text.empty()) return false;
        const auto t = parse_triple(text);
        member(t);
        return true;
    };
    auto& p = cfg.pipeline.params;
    triple_override(g.over_hw, [&](const auto& t) {
        p.low.over_hw = t[0];
        p.best.over_hw = t[1];
        p.high.over_hw = t[2];
    });
    triple_override(g.over_dc, [&](const auto& t) {
        p.low.over_dc = t[0];
        p.best.over_dc = t[1];
        p.high.over_dc = t[2];
    });
    triple_override(g.loss_grid, [&](const auto& t) {
        p.low.loss_grid = t[0];
        p.best.loss_grid = t[1];
        p.high.loss_grid = t[2];
    });
    triple_override(g.eff_psu, [&](const auto& t) {
        p.low.eff_psu = t[0];
        p.best.eff_psu = t[1];
        p.high.eff_psu = t[2];
    });
    if (!g.hw_overhead_mode.empty()) {
        if (g.hw_overhead_mode == "multiplicative") cfg.pipeline.additive_hw_overhead = false;
        else if (g.hw_overhead_mode == "additive") cfg.pipeline.additive_hw_overhead = true;
        else
            throw ValidationError("--hw-overhead-mode expects multiplicative or additive");
    }
    if (g.hw_watts_per_worker) cfg.pipeline.additive_hw.watts_per_worker = *g.hw_watts_per_worker;
    if (g.hw_worker_hashrate) {
        cfg.pipeline.additive_hw.worker_hashrate_mhs = *g.hw_worker_hashrate;
    }
    return cfg;
}

EfficiencyModel model_for(const RunConfig& cfg) {
    if (!cfg.model.empty()) {
        return efficiency_model_from_json(csv::read_file(cfg.model));
    }
    return fit_efficiency_trend(load_benchmarks(cfg.benchmarks));
}

std::vector<BlockAttribution> attributions_for(const RunConfig& cfg,
                                               std::span<const BlockRecord> blocks) {
    const PatternTable patterns = load_patterns(cfg.patterns);
    const PoolRegionTable pools = load_pool_regions(cfg.pool_regions);
    const RegionGridMap region_grids = load_region_grid_map(cfg.region_grid_map);
    const EmissionsFactorTable factors = load_factor_table(cfg.factors);
    const MinerPoolTable miner_pools = load_miner_pools(cfg.miner_pools);
    pools.validate_against(region_grids);
    region_grids.validate_against(factors);
    validate_pattern_regions(patterns, region_grids);
    return attribute_blocks(blocks, patterns, pools, miner_pools, region_grids, factors);
}

int cmd_fetch_blocks(const GlobalArgs& g, const FetchOptions& opts) {
    const FetchResult result = fetch_blocks(opts);
    say(g, "fetched " + std::to_string(result.rows_written) + " blocks" +
               (result.resumed ? " (resumed)" : "") + " into " + opts.out_csv.string());
    return 0;
}

int cmd_ingest(const GlobalArgs& g) {
    RunConfig cfg = load_config(g);
    cfg.validate(/*require_blocks=*/false);
    const std::filesystem::path dir = cfg.out_dir;

    const auto hashrate = load_hashrate(cfg.hashrate, cfg.source, cfg.gap_policy);
    csv::write_file(dir / "hashrate.csv", to_canonical_csv(hashrate.samples));
    say(g, "hashrate: " + std::to_string(hashrate.samples.size()) + " days (" +
               std::to_string(hashrate.filled_days) + " filled)");

    if (!cfg.blocks.empty()) {
        const auto blocks = load_blocks(cfg.blocks);
        csv::write_file(dir / "blocks.csv", to_canonical_csv(blocks.blocks));
        say(g, "blocks: " + std::to_string(blocks.blocks.size()) + " rows (" +
                   std::to_string(blocks.invalid_extra_data_count) + " invalid extraData)");
    }
    const auto benchmarks = load_benchmarks(cfg.benchmarks);
    csv::write_file(dir / "benchmarks.csv", to_canonical_csv(benchmarks));
    if (!cfg.workers.empty()) {
        const auto workers = load_workers(cfg.workers);
        csv::write_file(dir / "workers.csv", to_canonical_csv(workers));
        say(g, "workers: " + std::to_string(workers.size()) + " rows");
    }
    csv::write_file(dir / "factors.csv", to_canonical_csv(load_factor_table(cfg.factors)));
    csv::write_file(dir / "pool_regions.csv",
                    to_canonical_csv(load_pool_regions(cfg.pool_regions)));
    csv::write_file(dir / "region_grid_map.csv",
                    to_canonical_csv(load_region_grid_map(cfg.region_grid_map)));
    csv::write_file(dir / "patterns.csv", to_canonical_csv(load_patterns(cfg.patterns)));
    if (!cfg.hardware_terms.empty()) {
        csv::write_file(dir / "hardware_terms.csv",
                        to_canonical_csv(load_hardware_terms(cfg.hardware_terms)));
    }
    if (!cfg.miner_pools.empty()) {
        csv::write_file(dir / "miner_pools.csv",
                        to_canonical_csv(load_miner_pools(cfg.miner_pools)));
    }
    say(g, "canonical datasets written to " + dir.string());
    return 0;
}

int cmd_fit_efficiency(const GlobalArgs& g, const std::string& out_path) {
    RunConfig cfg = load_config(g);
    if (cfg.benchmarks.empty()) throw ValidationError("missing required path: benchmarks");
    const EfficiencyModel model = fit_efficiency_trend(load_benchmarks(cfg.benchmarks));
    const std::filesystem::path out =
        out_path.empty() ? cfg.out_dir / "efficiency_model.json" : std::filesystem::path(out_path);
    csv::write_file(out, efficiency_model_to_json(model));
    say(g, "model written to " + out.string() + " (band MAE " +
               csv::format_double(model.band_mae) + " MH/s/W)");
    return 0;
}

int cmd_classify(const GlobalArgs& g) {
    RunConfig cfg = load_config(g);
    cfg.validate(/*require_blocks=*/true);
    const auto blocks = load_blocks(cfg.blocks);
    if (blocks.invalid_extra_data_count > 0) {
        say(g, "warning: " + std::to_string(blocks.invalid_extra_data_count) +
                   " blocks carried malformed extraData hex (kept with empty text)");
    }
    const auto attributions = attributions_for(cfg, blocks.blocks);
    csv::write_file(cfg.out_dir / "attributions.csv", attributions_to_csv(attributions));

    std::size_t by_extra = 0, by_pool = 0, unmapped = 0;
    for (const auto& a : attributions) {
        switch (a.method) {
            case AttributionMethod::extra_data: ++by_extra; break;
            case AttributionMethod::pool: ++by_pool; break;
            case AttributionMethod::unmapped: ++unmapped; break;
        }
    }
    say(g, "attributions: " + std::to_string(by_extra) + " by extraData, " +
               std::to_string(by_pool) + " by pool, " + std::to_string(unmapped) + " unmapped");
    return 0;
}

int cmd_estimate(const GlobalArgs& g) {
    RunConfig cfg = load_config(g);
    cfg.validate(/*require_blocks=*/true);

    const auto hashrate = load_hashrate(cfg.hashrate, cfg.source, cfg.gap_policy);
    const EfficiencyModel model = model_for(cfg);
    const auto blocks = load_blocks(cfg.blocks);
    const auto attributions = attributions_for(cfg, blocks.blocks);

    const PipelineResult result =
        run_pipeline(hashrate.samples, model, attributions, cfg.pipeline);

    const std::filesystem::path dir = cfg.out_dir;
    csv::write_file(dir / "daily.csv", daily_to_csv(result.daily));
    csv::write_file(dir / "summary.json", summary_to_json(result.summary, cfg.fingerprint()));
    csv::write_file(dir / "attributions.csv", attributions_to_csv(attributions));
    csv::write_file(dir / "efficiency_model.json", efficiency_model_to_json(model));

    say(g, "daily estimates: " + std::to_string(result.daily.size()) + " days, total " +
               csv::format_fixed(result.summary.total_energy_twh.best, 3) + " TWh, " +
               csv::format_fixed(result.summary.total_emissions_mt.best, 3) + " MtCO2");
    say(g, "outputs in " + dir.string());
    return 0;
}

int cmd_report(const GlobalArgs& g, const std::string& daily_path, const std::string& mode,
               double fixed_factor, const std::string& from, const std::string& to,
               const std::vector<double>& factors, const std::string& out_path) {
    const auto daily = load_daily(daily_path);
    std::string text;
    if (mode == "fixed-factor") {
        const FixedFactorReport report = fixed_factor_report(daily, fixed_factor);
        text += "mode: fixed-factor\n";
        text += "factor_gco2_kwh: " + csv::format_double(report.factor_gco2_kwh) + "\n";
        text += "total_emissions_mt: " + csv::format_double(report.total_emissions_mt.low) + "," +
                csv::format_double(report.total_emissions_mt.best) + "," +
                csv::format_double(report.total_emissions_mt.high) + "\n";
    } else if (mode == "period-sum") {
        if (from.empty() || to.empty()) {
            throw ValidationError("period-sum needs --from and --to dates");
        }
        if (factors.empty()) throw ValidationError("period-sum needs at least one --factors");
        const PeriodSumReport report =
            period_sum_report(daily, Date::parse(from), Date::parse(to), factors);
        text += "mode: period-sum\n";
        text += "period: " + report.from.to_string() + ".." + report.to.to_string() + "\n";
        text += "total_energy_twh: " + csv::format_double(report.total_energy_twh.low) + "," +
                csv::format_double(report.total_energy_twh.best) + "," +
                csv::format_double(report.total_energy_twh.high) + "\n";
        for (const auto& e : report.entries) {
            text += "emissions_mt_at_" + csv::format_double(e.factor_gco2_kwh) + ": " +
                    csv::format_double(e.total_emissions_mt.low) + "," +
                    csv::format_double(e.total_emissions_mt.best) + "," +
                    csv::format_double(e.total_emissions_mt.high) + "\n";
        }
    } else {
        throw ValidationError("unknown report mode '" + mode +
                              "'; valid modes: fixed-factor, period-sum");
    }
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        csv::write_file(out_path, text);
        say(g, "report written to " + out_path);
    }
    return 0;
}

int cmd_plot(const GlobalArgs& g, const std::string& daily_path, const std::string& figure_name,
             const std::string& attributions_path, const std::string& blocks_path,
             const std::string& out_path, double year_hours) {
    const Figure figure = figure_from_string(figure_name);

    std::vector<DailyEstimate> daily;
    std::vector<BlockAttribution> attributions;
    if (figure == Figure::regions) {
        if (attributions_path.empty() || blocks_path.empty()) {
            throw ValidationError(
                "the regions figure needs --attributions and --blocks (to date the blocks)");
        }
        attributions = load_attributions(attributions_path);
        const auto blocks = load_blocks(blocks_path);
        std::map<std::uint64_t, Date> day_of;
        for (const auto& b : blocks.blocks) day_of[b.height] = b.day();
        for (auto& a : attributions) {
            const auto it = day_of.find(a.height);
            if (it == day_of.end()) {
                throw ValidationError("attribution height " + std::to_string(a.height) +
                                      " missing from " + blocks_path);
            }
            a.day = it->second;
        }
    } else {
        if (daily_path.empty()) throw ValidationError("missing --daily input");
        daily = load_daily(daily_path);
    }

    const std::string svg = render_figure(figure, daily, attributions, year_hours);
    const std::filesystem::path out = out_path.empty()
                                          ? std::filesystem::path(figure_name + ".svg")
                                          : std::filesystem::path(out_path);
    csv::write_file(out, svg);
    say(g, "figure written to " + out.string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bottom-up Ethereum proof-of-work energy and emissions estimator"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "Run configuration file (key = value sections)");
    app.add_option("--out", g.out_dir, "Output directory (wins over the config file)");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");
    // every config key has a flag; flags win on conflict
    app.add_option("--hashrate", g.hashrate, "Hashrate CSV path");
    app.add_option("--blocks", g.blocks, "Blocks CSV path");
    app.add_option("--benchmarks", g.benchmarks, "Benchmarks CSV path");
    app.add_option("--workers", g.workers, "Worker snapshot CSV path");
    app.add_option("--factors", g.factors, "Emissions factor table path");
    app.add_option("--pool-regions", g.pool_regions, "Pool-to-region table path");
    app.add_option("--region-grid-map", g.region_grid_map, "Region-to-grid table path");
    app.add_option("--patterns", g.patterns, "extraData pattern table path");
    app.add_option("--hardware-terms", g.hardware_terms, "Hardware term table path");
    app.add_option("--miner-pools", g.miner_pools, "Miner-to-pool table path");
    app.add_option("--model", g.model_path, "Pre-fit efficiency model JSON");
    app.add_option("--source", g.source, "Hashrate source: etherscan, coinwarz, other");
    app.add_option("--gap-policy", g.gap_policy, "Hashrate gap policy: reject, forward_fill");
    app.add_option("--start", g.start, "Restrict the run to dates >= this");
    app.add_option("--end", g.end, "Restrict the run to dates <= this");
    app.add_option("--report-start", g.report_start, "Summary range start (zero-days padded)");
    double year_hours_flag = 0;
    auto* year_opt =
        app.add_option("--year-hours", year_hours_flag, "Hours per year (8766 or 8760)");
    int smoothing_flag = 0;
    auto* smoothing_opt = app.add_option("--smoothing-window", smoothing_flag,
                                         "Days of early factor smoothing");
    int threads_flag = 0;
    auto* threads_opt = app.add_option("--threads", threads_flag, "Worker threads (0 = auto)");
    app.add_option("--over-hw", g.over_hw, "Hardware overhead triple low,best,high");
    app.add_option("--over-dc", g.over_dc, "Datacenter overhead triple low,best,high");
    app.add_option("--loss-grid", g.loss_grid, "Grid loss triple low,best,high");
    app.add_option("--eff-psu", g.eff_psu, "PSU efficiency triple low,best,high");
    app.add_option("--hw-overhead-mode", g.hw_overhead_mode, "multiplicative or additive");
    double hw_watts_flag = 0, hw_rate_flag = 0;
    auto* hw_watts_opt = app.add_option("--hw-watts-per-worker", hw_watts_flag,
                                        "Base Watts per worker (additive mode)");
    auto* hw_rate_opt = app.add_option("--hw-worker-hashrate", hw_rate_flag,
                                       "Typical worker MH/s (additive mode)");

    auto* fetch = app.add_subcommand("fetch-blocks", "Download block metadata over JSON-RPC");
    FetchOptions fopts;
    std::string fetch_out = "blocks.csv", fetch_checkpoint;
    fetch->add_option("--endpoint", fopts.endpoint, "JSON-RPC endpoint URL")->required();
    fetch->add_option("--from", fopts.from_height, "First block height")->required();
    fetch->add_option("--to", fopts.to_height, "Last block height (inclusive)")->required();
    fetch->add_option("--out-csv", fetch_out, "Output CSV path");
    fetch->add_option("--checkpoint", fetch_checkpoint,
                      "Checkpoint file (default <out-csv>.checkpoint)");
    fetch->add_option("--rate", fopts.requests_per_second, "Requests per second (default 10)");
    fetch->add_option("--retries", fopts.max_retries, "Retries per request");

    auto* ingest = app.add_subcommand("ingest", "Validate datasets and write canonical copies");

    auto* fit = app.add_subcommand("fit-efficiency", "Fit the hashing-efficiency trend");
    std::string fit_out;
    fit->add_option("--model-out", fit_out,
                    "Output JSON path (default <out>/efficiency_model.json)");

    auto* classify = app.add_subcommand("classify",
                                        "Attribute blocks to regions and emissions factors");

    auto* estimate = app.add_subcommand("estimate",
                                        "Run the full daily energy/emissions pipeline");

    auto* report = app.add_subcommand("report", "Comparison reports over a daily series");
    std::string report_daily, report_mode, report_from, report_to, report_out;
    double report_factor = 475.0;
    std::vector<double> report_factors;
    report->add_option("--daily", report_daily, "daily.csv produced by estimate")->required();
    report->add_option("--mode", report_mode, "fixed-factor or period-sum")->required();
    report->add_option("--factor", report_factor, "Constant factor for fixed-factor mode");
    report->add_option("--from", report_from, "Period start (period-sum)");
    report->add_option("--to", report_to, "Period end (period-sum)");
    report->add_option("--factors", report_factors, "Constant factors for period-sum");
    report->add_option("--report-out", report_out, "Write the report here instead of stdout");

    auto* plot = app.add_subcommand("plot", "Render a figure as SVG");
    std::string plot_daily, plot_figure, plot_attr, plot_blocks, plot_out;
    double plot_year_hours = kHoursPerYear;
    plot->add_option("--daily", plot_daily, "daily.csv produced by estimate");
    plot->add_option("--figure", plot_figure, "power, efficiency, regions, factors, emissions")
        ->required();
    plot->add_option("--attributions", plot_attr, "attributions.csv (regions figure)");
    plot->add_option("--blocks", plot_blocks, "blocks.csv (regions figure)");
    plot->add_option("--svg-out", plot_out, "Output SVG path (default <figure>.svg)");
    plot->add_option("--year-hours", plot_year_hours, "Hours per year for annualized axes");

    CLI11_PARSE(app, argc, argv);

    if (year_opt->count() > 0) g.year_hours = year_hours_flag;
    if (smoothing_opt->count() > 0) g.smoothing_window = smoothing_flag;
    if (threads_opt->count() > 0) g.threads = threads_flag;
    if (hw_watts_opt->count() > 0) g.hw_watts_per_worker = hw_watts_flag;
    if (hw_rate_opt->count() > 0) g.hw_worker_hashrate = hw_rate_flag;

    try {
        if (fetch->parsed()) {
            fopts.out_csv = fetch_out;
            if (!fetch_checkpoint.empty()) fopts.checkpoint = fetch_checkpoint;
            fopts.quiet = g.quiet;
            return cmd_fetch_blocks(g, fopts);
        }
        if (ingest->parsed()) return cmd_ingest(g);
        if (fit->parsed()) return cmd_fit_efficiency(g, fit_out);
        if (classify->parsed()) return cmd_classify(g);
        if (estimate->parsed()) return cmd_estimate(g);
        if (report->parsed()) {
            return cmd_report(g, report_daily, report_mode, report_factor, report_from, report_to,
                              report_factors, report_out);
        }
        if (plot->parsed()) {
            return cmd_plot(g, plot_daily, plot_figure, plot_attr, plot_blocks, plot_out,
                            plot_year_hours);
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: validation: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: io: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: runtime: %s\n", e.what());
        return 2;
    }
    return 0;
}
