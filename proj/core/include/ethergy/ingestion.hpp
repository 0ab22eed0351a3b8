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
#include <span>
#include <variant>
#include <vector>

#include <ethergy/tables.hpp>
#include <ethergy/types.hpp>

namespace ethergy {

/// What to do when a hashrate series has missing days. Forward-filling copies
/// the previous day's value and reports how many days were filled; it is never
/// applied implicitly.
enum class GapPolicy { reject, forward_fill };

struct HashrateLoadResult {
    std::vector<HashrateSample> samples;  // sorted by date, contiguous
    std::size_t filled_days{0};
};

HashrateLoadResult load_hashrate(const std::filesystem::path& path, HashrateSource source,
                                 GapPolicy gap_policy = GapPolicy::reject);

struct BlockLoadResult {
    std::vector<BlockRecord> blocks;  // sorted by height
    std::size_t invalid_extra_data_count{0};
};

BlockLoadResult load_blocks(const std::filesystem::path& path);

std::vector<BenchmarkRecord> load_benchmarks(const std::filesystem::path& path);
std::vector<WorkerSnapshot> load_workers(const std::filesystem::path& path);

EmissionsFactorTable load_factor_table(const std::filesystem::path& path);
PoolRegionTable load_pool_regions(const std::filesystem::path& path);
RegionGridMap load_region_grid_map(const std::filesystem::path& path);
PatternTable load_patterns(const std::filesystem::path& path);
HardwareTermTable load_hardware_terms(const std::filesystem::path& path);
MinerPoolTable load_miner_pools(const std::filesystem::path& path);

enum class TableSchema { factors, pool_regions, region_grid_map, hardware_terms, patterns };

using AnyTable = std::variant<EmissionsFactorTable, PoolRegionTable, RegionGridMap,
                              HardwareTermTable, PatternTable>;

AnyTable load_table(const std::filesystem::path& path, TableSchema schema);

// Canonical serializers. Loading a file and re-serializing it yields a stable
// canonical byte stream: write(load(write(load(x)))) == write(load(x)).
std::string to_canonical_csv(std::span<const HashrateSample> samples);
std::string to_canonical_csv(std::span<const BlockRecord> blocks);
std::string to_canonical_csv(std::span<const BenchmarkRecord> benchmarks);
std::string to_canonical_csv(std::span<const WorkerSnapshot> workers);
std::string to_canonical_csv(const EmissionsFactorTable& table);
std::string to_canonical_csv(const PoolRegionTable& table);
std::string to_canonical_csv(const RegionGridMap& map);
std::string to_canonical_csv(const PatternTable& table);
std::string to_canonical_csv(const HardwareTermTable& table);
std::string to_canonical_csv(const MinerPoolTable& table);

/// Hex-decodes then lossily UTF-8-decodes, replacing every undecodable byte
/// with U+FFFD. Returns nullopt when `hex` is not a valid hex string.
std::optional<std::string> decode_extra_data(std::string_view hex);

/// Lossy UTF-8 sanitization of raw bytes (U+FFFD for invalid sequences).
std::string lossy_utf8(std::string_view bytes);

}  // namespace ethergy
