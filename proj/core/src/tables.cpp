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

#include <ethergy/tables.hpp>

#include <algorithm>

#include <ethergy/errors.hpp>

namespace ethergy {

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::government: return "government";
        case Provenance::energy_mix: return "energy_mix";
        case Provenance::interpolated: return "interpolated";
        case Provenance::third_party: return "third_party";
    }
    return "unknown";
}

Provenance provenance_from_string(std::string_view text) {
    if (text == "government") return Provenance::government;
    if (text == "energy_mix") return Provenance::energy_mix;
    if (text == "interpolated") return Provenance::interpolated;
    if (text == "third_party") return Provenance::third_party;
    throw ValidationError("unknown provenance '" + std::string(text) + "'");
}

void normalize_mix(WeightedMix& mix, std::string_view context) {
    double total = 0;
    for (const auto& [name, weight] : mix) {
        if (weight < 0) {
            throw ValidationError(std::string(context) + ": negative weight for '" + name + "'");
        }
        total += weight;
    }
    if (total <= 0) throw ValidationError(std::string(context) + ": empty distribution");
    for (auto& [name, weight] : mix) weight /= total;
}

void EmissionsFactorTable::insert(const std::string& grid, int year, double gco2_per_kwh,
                                  Provenance provenance) {
    if (!(gco2_per_kwh > 0 && gco2_per_kwh < 1200)) {
        throw ValidationError("emissions factor for (" + grid + ", " + std::to_string(year) +
                              ") out of range (0, 1200): " + std::to_string(gco2_per_kwh));
    }
    const auto [it, inserted] = entries_.try_emplace({grid, year}, Entry{gco2_per_kwh, provenance});
    if (!inserted) {
        throw ValidationError("duplicate emissions factor for (" + grid + ", " +
                              std::to_string(year) + ")");
    }
}

const EmissionsFactorTable::Entry* EmissionsFactorTable::find(std::string_view grid,
                                                              int year) const {
    const auto it = entries_.find({std::string(grid), year});
    return it == entries_.end() ? nullptr : &it->second;
}

double EmissionsFactorTable::at(std::string_view grid, int year) const {
    const Entry* entry = find(grid, year);
    if (!entry) {
        throw ValidationError("no emissions factor for (" + std::string(grid) + ", " +
                              std::to_string(year) + "); extend the factor table");
    }
    return entry->gco2_per_kwh;
}

bool EmissionsFactorTable::contains_grid(std::string_view grid) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first.first == grid; });
}

std::vector<std::string> EmissionsFactorTable::grids() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_) {
        if (out.empty() || out.back() != key.first) out.push_back(key.first);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<int, int> EmissionsFactorTable::year_range() const {
    if (entries_.empty()) throw ValidationError("empty emissions factor table");
    int lo = entries_.begin()->first.second;
    int hi = lo;
    for (const auto& [key, entry] : entries_) {
        lo = std::min(lo, key.second);
        hi = std::max(hi, key.second);
    }
    return {lo, hi};
}

void RegionGridMap::insert(const std::string& region, WeightedMix mix) {
    normalize_mix(mix, "region '" + region + "'");
    if (!rows_.try_emplace(region, std::move(mix)).second) {
        throw ValidationError("duplicate region '" + region + "'");
    }
}

const WeightedMix& RegionGridMap::at(std::string_view region) const {
    const auto it = rows_.find(region);
    if (it == rows_.end()) {
        throw ValidationError("unknown region label '" + std::string(region) + "'");
    }
    return it->second;
}

bool RegionGridMap::contains(std::string_view region) const {
    return rows_.find(region) != rows_.end();
}

std::vector<std::string> RegionGridMap::region_labels() const {
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& [region, mix] : rows_) out.push_back(region);
    return out;
}

void RegionGridMap::validate_against(const EmissionsFactorTable& factors) const {
    for (const auto& [region, mix] : rows_) {
        for (const auto& [grid, weight] : mix) {
            if (!factors.contains_grid(grid)) {
                throw ValidationError("region '" + region + "' references unknown grid '" + grid +
                                      "'");
            }
        }
    }
}

void PoolRegionTable::insert(const std::string& pool, WeightedMix mix) {
    normalize_mix(mix, "pool '" + pool + "'");
    if (!rows_.try_emplace(pool, std::move(mix)).second) {
        throw ValidationError("duplicate pool '" + pool + "'");
    }
}

const WeightedMix* PoolRegionTable::find(std::string_view pool) const {
    const auto it = rows_.find(pool);
    return it == rows_.end() ? nullptr : &it->second;
}

std::vector<std::string> PoolRegionTable::pools() const {
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& [pool, mix] : rows_) out.push_back(pool);
    return out;
}

void PoolRegionTable::validate_against(const RegionGridMap& map) const {
    for (const auto& [pool, mix] : rows_) {
        for (const auto& [region, weight] : mix) {
            if (!map.contains(region)) {
                throw ValidationError("pool '" + pool + "' references unknown region '" + region +
                                      "'");
            }
        }
    }
}

void PatternTable::add(const std::string& source, const std::string& region) {
    try {
        std::regex re(source, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
        patterns_.push_back({source, region, std::move(re)});
    } catch (const std::regex_error& e) {
        throw ValidationError("bad pattern '" + source + "': " + e.what());
    }
}

std::optional<std::string> PatternTable::match(std::string_view text) const {
    for (const auto& p : patterns_) {
        if (std::regex_search(text.begin(), text.end(), p.regex)) return p.region;
    }
    return std::nullopt;
}

void HardwareTermTable::add(const std::string& term, const std::string& canonical) {
    if (term.empty()) throw ValidationError("empty hardware term");
    terms_.push_back({term, canonical});
}

void MinerPoolTable::insert(const std::string& miner, const std::string& pool) {
    if (!rows_.try_emplace(miner, pool).second) {
        throw ValidationError("duplicate miner address '" + miner + "'");
    }
}

const std::string* MinerPoolTable::find(std::string_view miner) const {
    const auto it = rows_.find(std::string(miner));
    return it == rows_.end() ? nullptr : &it->second;
}

}  // namespace ethergy
