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

#include <ethergy/config.hpp>

#include <charconv>
#include <fstream>

#include <ethergy/csv.hpp>
#include <ethergy/errors.hpp>

namespace ethergy {

namespace {

std::string trim(std::string_view text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
}

double to_double(const std::string& value, const std::string& key) {
    double out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ValidationError("config key '" + key + "': malformed number '" + value + "'");
    }
    return out;
}

int to_int(const std::string& value, const std::string& key) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ValidationError("config key '" + key + "': malformed integer '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ValidationError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

std::string triple_text(double low, double best, double high) {
    return csv::format_double(low) + "," + csv::format_double(best) + "," +
           csv::format_double(high);
}

}  // namespace

std::array<double, 3> parse_triple(std::string_view text) {
    const auto parts = csv::split_line(text, ',');
    if (parts.size() != 3) {
        throw ValidationError("expected 'low,best,high', got '" + std::string(text) + "'");
    }
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) out[i] = to_double(trim(parts[i]), "triple");
    return out;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());

    RunConfig cfg;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[' && text.back() == ']') {
            section = trim(text.substr(1, text.size() - 2));
            if (section != "paths" && section != "pipeline" && section != "energy" &&
                section != "output") {
                throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                      ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const std::string qualified = section.empty() ? key : section + "." + key;

        if (qualified == "paths.hashrate") cfg.hashrate = value;
        else if (qualified == "paths.blocks") cfg.blocks = value;
        else if (qualified == "paths.benchmarks") cfg.benchmarks = value;
        else if (qualified == "paths.workers") cfg.workers = value;
        else if (qualified == "paths.factors") cfg.factors = value;
        else if (qualified == "paths.pool_regions") cfg.pool_regions = value;
        else if (qualified == "paths.region_grid_map") cfg.region_grid_map = value;
        else if (qualified == "paths.patterns") cfg.patterns = value;
        else if (qualified == "paths.hardware_terms") cfg.hardware_terms = value;
        else if (qualified == "paths.miner_pools") cfg.miner_pools = value;
        else if (qualified == "paths.model") cfg.model = value;
        else if (qualified == "pipeline.hashrate_source")
            cfg.source = hashrate_source_from_string(value);
        else if (qualified == "pipeline.gap_policy") {
            if (value == "reject") cfg.gap_policy = GapPolicy::reject;
            else if (value == "forward_fill") cfg.gap_policy = GapPolicy::forward_fill;
            else
                throw ValidationError("config key '" + qualified + "': expected reject or "
                                      "forward_fill, got '" + value + "'");
        } else if (qualified == "pipeline.smoothing_window_days")
            cfg.pipeline.smoothing_window_days = to_int(value, qualified);
        else if (qualified == "pipeline.year_hours")
            cfg.pipeline.hours_per_year = to_double(value, qualified);
        else if (qualified == "pipeline.threads")
            cfg.pipeline.threads = to_int(value, qualified);
        else if (qualified == "pipeline.start_date")
            cfg.pipeline.start = Date::parse(value);
        else if (qualified == "pipeline.end_date")
            cfg.pipeline.end = Date::parse(value);
        else if (qualified == "pipeline.report_start")
            cfg.pipeline.report_start = Date::parse(value);
        else if (qualified == "energy.over_hw") {
            const auto t = parse_triple(value);
            cfg.pipeline.params.low.over_hw = t[0];
            cfg.pipeline.params.best.over_hw = t[1];
            cfg.pipeline.params.high.over_hw = t[2];
        } else if (qualified == "energy.over_dc") {
            const auto t = parse_triple(value);
            cfg.pipeline.params.low.over_dc = t[0];
            cfg.pipeline.params.best.over_dc = t[1];
            cfg.pipeline.params.high.over_dc = t[2];
        } else if (qualified == "energy.loss_grid") {
            const auto t = parse_triple(value);
            cfg.pipeline.params.low.loss_grid = t[0];
            cfg.pipeline.params.best.loss_grid = t[1];
            cfg.pipeline.params.high.loss_grid = t[2];
        } else if (qualified == "energy.eff_psu") {
            // energy-ordered: the low-energy scenario uses the BEST psu
            const auto t = parse_triple(value);
            cfg.pipeline.params.low.eff_psu = t[0];
            cfg.pipeline.params.best.eff_psu = t[1];
            cfg.pipeline.params.high.eff_psu = t[2];
        } else if (qualified == "energy.hw_overhead_mode") {
            if (value == "multiplicative") cfg.pipeline.additive_hw_overhead = false;
            else if (value == "additive") cfg.pipeline.additive_hw_overhead = true;
            else
                throw ValidationError("config key '" + qualified +
                                      "': expected multiplicative or additive");
        } else if (qualified == "energy.hw_additive_watts_per_worker")
            cfg.pipeline.additive_hw.watts_per_worker = to_double(value, qualified);
        else if (qualified == "energy.hw_worker_hashrate_mhs")
            cfg.pipeline.additive_hw.worker_hashrate_mhs = to_double(value, qualified);
        else if (qualified == "output.dir") cfg.out_dir = value;
        else if (qualified == "output.quiet") cfg.quiet = to_bool(value, qualified);
        else
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": unknown config key '" + qualified + "'");
    }
    return cfg;
}

void RunConfig::resolve_relative_to(const std::filesystem::path& base) {
    auto fix = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = base / p;
    };
    fix(hashrate);
    fix(blocks);
    fix(benchmarks);
    fix(workers);
    fix(factors);
    fix(pool_regions);
    fix(region_grid_map);
    fix(patterns);
    fix(hardware_terms);
    fix(miner_pools);
    fix(model);
}

void RunConfig::validate(bool require_blocks) const {
    auto require = [](const std::filesystem::path& p, const char* what) {
        if (p.empty()) throw ValidationError(std::string("missing required path: ") + what);
        if (!std::filesystem::exists(p)) {
            throw ValidationError(std::string(what) + " file not found: " + p.string());
        }
    };
    require(hashrate, "hashrate");
    if (model.empty()) {
        require(benchmarks, "benchmarks");
    } else {
        require(model, "model");
    }
    require(factors, "factors");
    require(pool_regions, "pool_regions");
    require(region_grid_map, "region_grid_map");
    require(patterns, "patterns");
    require(miner_pools, "miner_pools");
    if (require_blocks) require(blocks, "blocks");
    pipeline.params.validate();
    if (pipeline.hours_per_year <= 0) throw ValidationError("year_hours must be positive");
    if (pipeline.smoothing_window_days < 0) {
        throw ValidationError("smoothing_window_days must be nonnegative");
    }
}

std::string RunConfig::canonical_text() const {
    const auto& p = pipeline.params;
    std::string out;
    out += "[paths]\n";
    out += "hashrate = " + hashrate.string() + "\n";
    out += "blocks = " + blocks.string() + "\n";
    out += "benchmarks = " + benchmarks.string() + "\n";
    out += "workers = " + workers.string() + "\n";
    out += "factors = " + factors.string() + "\n";
    out += "pool_regions = " + pool_regions.string() + "\n";
    out += "region_grid_map = " + region_grid_map.string() + "\n";
    out += "patterns = " + patterns.string() + "\n";
    out += "hardware_terms = " + hardware_terms.string() + "\n";
    out += "miner_pools = " + miner_pools.string() + "\n";
    out += "model = " + model.string() + "\n";
    out += "[pipeline]\n";
    out += "hashrate_source = " + std::string(to_string(source)) + "\n";
    out += std::string("gap_policy = ") +
           (gap_policy == GapPolicy::reject ? "reject" : "forward_fill") + "\n";
    out += "smoothing_window_days = " + std::to_string(pipeline.smoothing_window_days) + "\n";
    out += "year_hours = " + csv::format_double(pipeline.hours_per_year) + "\n";
    out += "threads = " + std::to_string(pipeline.threads) + "\n";
    out += "start_date = " + (pipeline.start ? pipeline.start->to_string() : "") + "\n";
    out += "end_date = " + (pipeline.end ? pipeline.end->to_string() : "") + "\n";
    out += "report_start = " + (pipeline.report_start ? pipeline.report_start->to_string() : "") +
           "\n";
    out += "[energy]\n";
    out += "over_hw = " + triple_text(p.low.over_hw, p.best.over_hw, p.high.over_hw) + "\n";
    out += "over_dc = " + triple_text(p.low.over_dc, p.best.over_dc, p.high.over_dc) + "\n";
    out += "loss_grid = " + triple_text(p.low.loss_grid, p.best.loss_grid, p.high.loss_grid) +
           "\n";
    out += "eff_psu = " + triple_text(p.low.eff_psu, p.best.eff_psu, p.high.eff_psu) + "\n";
    out += std::string("hw_overhead_mode = ") +
           (pipeline.additive_hw_overhead ? "additive" : "multiplicative") + "\n";
    out += "hw_additive_watts_per_worker = " +
           csv::format_double(pipeline.additive_hw.watts_per_worker) + "\n";
    out += "hw_worker_hashrate_mhs = " +
           csv::format_double(pipeline.additive_hw.worker_hashrate_mhs) + "\n";
    out += "[output]\n";
    out += "dir = " + out_dir.string() + "\n";
    out += std::string("quiet = ") + (quiet ? "true" : "false") + "\n";
    return out;
}

std::string RunConfig::fingerprint() const {
    // Hash only what changes the numbers: the [pipeline] and [energy]
    // sections plus the source selection. File locations and output paths
    // deliberately stay out so the same run is identifiable across checkouts.
    const std::string full = canonical_text();
    const auto begin = full.find("[pipeline]");
    const auto end = full.find("[output]");
    const std::string text = full.substr(begin, end - begin);
    // FNV-1a, 64-bit
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace ethergy
