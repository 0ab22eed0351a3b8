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
#include <map>
#include <optional>
#include <string>

#include <ethergy/ingestion.hpp>
#include <ethergy/pipeline.hpp>

namespace ethergy {

/// Everything a reproducible run needs. Mirrors the CLI flags one to one;
/// flags win over config-file values.
struct RunConfig {
    // [paths]
    std::filesystem::path hashrate;
    std::filesystem::path blocks;
    std::filesystem::path benchmarks;
    std::filesystem::path workers;
    std::filesystem::path factors;
    std::filesystem::path pool_regions;
    std::filesystem::path region_grid_map;
    std::filesystem::path patterns;
    std::filesystem::path hardware_terms;
    std::filesystem::path miner_pools;
    std::filesystem::path model;  // optional pre-fit model JSON

    // [pipeline]
    HashrateSource source = HashrateSource::etherscan;
    GapPolicy gap_policy = GapPolicy::reject;
    PipelineConfig pipeline;

    // [output]
    std::filesystem::path out_dir = "out";
    bool quiet = false;

    /// Parses a `key = value` sections file. Unknown keys are errors.
    static RunConfig from_file(const std::filesystem::path& path);

    /// Paths in the config file resolve relative to the file's directory.
    void resolve_relative_to(const std::filesystem::path& base);

    /// Checks that every referenced path exists and parameters are valid.
    void validate(bool require_blocks) const;

    /// Canonical `key = value` rendering of every setting.
    std::string canonical_text() const;

    /// Stable 64-bit FNV-1a hash of canonical_text(), as 16 hex digits.
    std::string fingerprint() const;
};

/// Parses "low,best,high" (energy-ordered) into three doubles.
std::array<double, 3> parse_triple(std::string_view text);

}  // namespace ethergy
