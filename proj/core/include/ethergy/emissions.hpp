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

#include <ethergy/tables.hpp>
#include <ethergy/types.hpp>

namespace ethergy {

/// One electricity source inside a grid's generation mix.
struct GenerationSource {
    double generation_twh{0};
    double factor_gco2_kwh{0};
};

/// Generation-weighted average emissions factor. Any generation not covered
/// by `sources` counts as zero-emission.
double mix_emission_factor(std::span<const GenerationSource> sources,
                           double total_generation_twh);

enum class MassUnit { short_tons, tonnes };

inline constexpr double kKgPerShortTon = 907.18;  // 2000 lb

/// Total emissions divided by total generation, in gCO2/kWh.
double generation_based_factor(double total_emissions, MassUnit unit,
                               double total_generation_twh);

struct YearFactor {
    int year{0};
    double gco2_per_kwh{0};
    Provenance provenance{Provenance::third_party};
};

/// Least-squares line over the known (year, factor) points; target years not
/// already known are filled from the line, tagged interpolated, and floored
/// at 1 gCO2/kWh. Returns the union, sorted by year.
std::vector<YearFactor> extend_factor_series(std::span<const YearFactor> known,
                                             std::span<const int> target_years);

enum class AttributionMethod { extra_data, pool, unmapped };

std::string_view to_string(AttributionMethod m);
AttributionMethod attribution_method_from_string(std::string_view text);

struct BlockAttribution {
    std::uint64_t height{0};
    Date day;  // UTC day of the block timestamp
    AttributionMethod method{AttributionMethod::unmapped};
    WeightedMix region_mix;                  // empty iff unmapped
    std::optional<double> emissions_factor;  // gCO2/kWh; nullopt iff unmapped
};

/// Region labels form a closed set: every label a pattern can produce must
/// exist in the region->grid map. Throws ValidationError naming offenders.
void validate_pattern_regions(const PatternTable& patterns, const RegionGridMap& region_grids);

/// Region assignment for one block: extraData patterns first, then the
/// miner's pool distribution, otherwise unmapped. Does not attach a factor.
BlockAttribution classify_block(const BlockRecord& block, const PatternTable& patterns,
                                const PoolRegionTable& pools, const MinerPoolTable& miner_pools);

/// Expands a region mix to grids and averages that year's factors.
double grid_mix_factor(const WeightedMix& region_mix, const RegionGridMap& region_grids,
                       const EmissionsFactorTable& factors, int year);

/// classify_block + grid_mix_factor over a block list, using each block's
/// calendar year. Output is ordered by height regardless of execution order.
std::vector<BlockAttribution> attribute_blocks(std::span<const BlockRecord> blocks,
                                               const PatternTable& patterns,
                                               const PoolRegionTable& pools,
                                               const MinerPoolTable& miner_pools,
                                               const RegionGridMap& region_grids,
                                               const EmissionsFactorTable& factors);

std::string attributions_to_csv(std::span<const BlockAttribution> attributions);
std::vector<BlockAttribution> load_attributions(const std::filesystem::path& path);

}  // namespace ethergy
