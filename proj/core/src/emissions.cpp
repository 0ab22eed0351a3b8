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

#include <ethergy/emissions.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include <ethergy/csv.hpp>
#include <ethergy/errors.hpp>

namespace ethergy {

double mix_emission_factor(std::span<const GenerationSource> sources,
                           double total_generation_twh) {
    double covered = 0, weighted = 0;
    for (const auto& s : sources) {
        if (s.generation_twh < 0) throw ValidationError("negative generation");
        if (s.factor_gco2_kwh < 0) throw ValidationError("negative emissions factor");
        covered += s.generation_twh;
        weighted += s.generation_twh * s.factor_gco2_kwh;
    }
    if (!(total_generation_twh > 0)) throw ValidationError("total generation must be positive");
    if (covered > total_generation_twh * (1 + 1e-9)) {
        throw ValidationError("source generation exceeds total generation");
    }
    return weighted / total_generation_twh;
}

double generation_based_factor(double total_emissions, MassUnit unit,
                               double total_generation_twh) {
    if (!(total_emissions > 0)) throw ValidationError("emissions must be positive");
    if (!(total_generation_twh > 0)) throw ValidationError("generation must be positive");
    const double grams =
        unit == MassUnit::short_tons ? total_emissions * kKgPerShortTon * 1e3
                                     : total_emissions * 1e6;
    const double kwh = total_generation_twh * 1e9;
    return grams / kwh;
}

std::vector<YearFactor> extend_factor_series(std::span<const YearFactor> known,
                                             std::span<const int> target_years) {
    if (known.size() < 2) {
        throw ValidationError("factor series extension needs at least two known points");
    }

    double mean_x = 0, mean_y = 0;
    for (const auto& k : known) {
        mean_x += k.year;
        mean_y += k.gco2_per_kwh;
    }
    mean_x /= static_cast<double>(known.size());
    mean_y /= static_cast<double>(known.size());

    double sxx = 0, sxy = 0;
    for (const auto& k : known) {
        sxx += (k.year - mean_x) * (k.year - mean_x);
        sxy += (k.year - mean_x) * (k.gco2_per_kwh - mean_y);
    }
    if (sxx == 0) throw ValidationError("known factors share one year");
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_x;

    std::vector<YearFactor> out(known.begin(), known.end());
    std::set<int> have;
    for (const auto& k : known) have.insert(k.year);
    for (int year : target_years) {
        if (have.contains(year)) continue;
        const double fitted = std::max(intercept + slope * year, 1.0);
        out.push_back({year, fitted, Provenance::interpolated});
        have.insert(year);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
    return out;
}

std::string_view to_string(AttributionMethod m) {
    switch (m) {
        case AttributionMethod::extra_data: return "extra_data";
        case AttributionMethod::pool: return "pool";
        case AttributionMethod::unmapped: return "unmapped";
    }
    return "unmapped";
}

AttributionMethod attribution_method_from_string(std::string_view text) {
    if (text == "extra_data") return AttributionMethod::extra_data;
    if (text == "pool") return AttributionMethod::pool;
    if (text == "unmapped") return AttributionMethod::unmapped;
    throw ValidationError("unknown attribution method '" + std::string(text) + "'");
}

void validate_pattern_regions(const PatternTable& patterns, const RegionGridMap& region_grids) {
    for (const auto& p : patterns.patterns()) {
        if (!region_grids.contains(p.region)) {
            throw ValidationError("pattern '" + p.source + "' references unknown region '" +
                                  p.region + "'");
        }
    }
}

BlockAttribution classify_block(const BlockRecord& block, const PatternTable& patterns,
                                const PoolRegionTable& pools, const MinerPoolTable& miner_pools) {
    BlockAttribution attr;
    attr.height = block.height;
    attr.day = block.day();

    if (auto region = patterns.match(block.extra_data)) {
        attr.method = AttributionMethod::extra_data;
        attr.region_mix = {{*region, 1.0}};
        return attr;
    }
    if (const std::string* pool = miner_pools.find(block.miner)) {
        if (const WeightedMix* mix = pools.find(*pool)) {
            attr.method = AttributionMethod::pool;
            attr.region_mix = *mix;
            return attr;
        }
    }
    attr.method = AttributionMethod::unmapped;
    return attr;
}

double grid_mix_factor(const WeightedMix& region_mix, const RegionGridMap& region_grids,
                       const EmissionsFactorTable& factors, int year) {
    if (region_mix.empty()) throw ValidationError("empty region mix");
    double total_weight = 0, weighted = 0;
    for (const auto& [region, region_weight] : region_mix) {
        const WeightedMix& grids = region_grids.at(region);  // throws on unknown label
        for (const auto& [grid, grid_weight] : grids) {
            const double w = region_weight * grid_weight;
            weighted += w * factors.at(grid, year);  // throws naming (grid, year)
            total_weight += w;
        }
    }
    return weighted / total_weight;
}

std::vector<BlockAttribution> attribute_blocks(std::span<const BlockRecord> blocks,
                                               const PatternTable& patterns,
                                               const PoolRegionTable& pools,
                                               const MinerPoolTable& miner_pools,
                                               const RegionGridMap& region_grids,
                                               const EmissionsFactorTable& factors) {
    std::vector<BlockAttribution> out;
    out.reserve(blocks.size());
    for (const auto& block : blocks) {
        BlockAttribution attr = classify_block(block, patterns, pools, miner_pools);
        if (attr.method != AttributionMethod::unmapped) {
            attr.emissions_factor =
                grid_mix_factor(attr.region_mix, region_grids, factors, attr.day.year());
        }
        out.push_back(std::move(attr));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.height < b.height; });
    return out;
}

std::string attributions_to_csv(std::span<const BlockAttribution> attributions) {
    std::string out = "height,method,region_mix,gco2_per_kwh\n";
    for (const auto& a : attributions) {
        out += std::to_string(a.height) + "," + std::string(to_string(a.method)) + ",";
        std::string mix;
        for (const auto& [region, weight] : a.region_mix) {
            if (!mix.empty()) mix += ";";
            mix += region + "=" + csv::format_fixed(weight, 6);
        }
        out += mix + ",";
        if (a.emissions_factor) out += csv::format_double(*a.emissions_factor);
        out += "\n";
    }
    return out;
}

std::vector<BlockAttribution> load_attributions(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "height,method,region_mix,gco2_per_kwh", 4);
    std::vector<BlockAttribution> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        BlockAttribution a;
        a.height = static_cast<std::uint64_t>(
            csv::parse_int(row.fields[0], path, row.line_no, "height"));
        a.method = attribution_method_from_string(row.fields[1]);
        if (!row.fields[2].empty()) {
            for (const auto& part : csv::split_line(row.fields[2], ';')) {
                const std::size_t eq = part.find('=');
                if (eq == std::string::npos) {
                    throw ValidationError(path.string() + ":" + std::to_string(row.line_no) +
                                          ": malformed region mix '" + part + "'");
                }
                a.region_mix.emplace_back(part.substr(0, eq),
                                          csv::parse_double(std::string_view(part).substr(eq + 1),
                                                            path, row.line_no, "weight"));
            }
        }
        if (!row.fields[3].empty()) {
            a.emissions_factor = csv::parse_double(row.fields[3], path, row.line_no, "factor");
        }
        if ((a.method == AttributionMethod::unmapped) != !a.emissions_factor) {
            throw ValidationError(path.string() + ":" + std::to_string(row.line_no) +
                                  ": method and factor presence disagree");
        }
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace ethergy
