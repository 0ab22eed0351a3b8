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

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ethergy {

enum class Provenance { government, energy_mix, interpolated, third_party };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

/// Region or grid weights, normalized to sum to 1 on construction.
using WeightedMix = std::vector<std::pair<std::string, double>>;

/// Normalizes weights in place. Throws ValidationError on a negative weight
/// or an all-zero ("empty") distribution. `context` names the offending row.
void normalize_mix(WeightedMix& mix, std::string_view context);

/// Grid x year matrix of emissions factors in gCO2/kWh, with provenance.
class EmissionsFactorTable {
  public:
    struct Entry {
        double gco2_per_kwh{0};
        Provenance provenance{Provenance::third_party};
    };

    void insert(const std::string& grid, int year, double gco2_per_kwh, Provenance provenance);

    const Entry* find(std::string_view grid, int year) const;

    /// Throws ValidationError naming the (grid, year) pair when absent.
    double at(std::string_view grid, int year) const;

    bool contains_grid(std::string_view grid) const;
    std::vector<std::string> grids() const;
    std::pair<int, int> year_range() const;
    std::size_t size() const { return entries_.size(); }

    const std::map<std::pair<std::string, int>, Entry>& entries() const { return entries_; }

  private:
    std::map<std::pair<std::string, int>, Entry> entries_;
};

/// Region label -> grid mix (Table-style mapping data, normalized on load).
class RegionGridMap {
  public:
    void insert(const std::string& region, WeightedMix mix);
    const WeightedMix& at(std::string_view region) const;  // throws if absent
    bool contains(std::string_view region) const;
    std::vector<std::string> region_labels() const;
    std::size_t size() const { return rows_.size(); }

    /// Checks that every referenced grid appears in the factor table.
    void validate_against(const EmissionsFactorTable& factors) const;

  private:
    std::map<std::string, WeightedMix, std::less<>> rows_;
};

/// Mining pool name -> region mix, normalized on load.
class PoolRegionTable {
  public:
    void insert(const std::string& pool, WeightedMix mix);
    const WeightedMix* find(std::string_view pool) const;
    std::vector<std::string> pools() const;
    std::size_t size() const { return rows_.size(); }

    /// Checks that every referenced region label exists in `map`.
    void validate_against(const RegionGridMap& map) const;

  private:
    std::map<std::string, WeightedMix, std::less<>> rows_;
};

/// Ordered list of (regex, region). First match wins.
class PatternTable {
  public:
    struct Pattern {
        std::string source;
        std::string region;
        std::regex regex;
    };

    /// Compiles and appends. Throws ValidationError on a bad expression.
    void add(const std::string& source, const std::string& region);

    /// Region of the first pattern matching anywhere in `text`.
    std::optional<std::string> match(std::string_view text) const;

    const std::vector<Pattern>& patterns() const { return patterns_; }
    std::size_t size() const { return patterns_.size(); }

  private:
    std::vector<Pattern> patterns_;
};

/// Hardware search terms mapped to a canonical hardware name.
class HardwareTermTable {
  public:
    struct Term {
        std::string term;        // matched case-insensitively as a substring
        std::string canonical;
    };

    void add(const std::string& term, const std::string& canonical);
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

  private:
    std::vector<Term> terms_;
};

/// Miner payout address -> pool name.
class MinerPoolTable {
  public:
    void insert(const std::string& miner, const std::string& pool);
    const std::string* find(std::string_view miner) const;
    std::size_t size() const { return rows_.size(); }
    const std::unordered_map<std::string, std::string>& rows() const { return rows_; }

  private:
    std::unordered_map<std::string, std::string> rows_;
};

}  // namespace ethergy
