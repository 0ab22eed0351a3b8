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

#include <ethergy/ingestion.hpp>

#include <algorithm>
#include <cctype>
#include <set>

#include <ethergy/csv.hpp>
#include <ethergy/errors.hpp>

namespace ethergy {

namespace {

std::string loc(const std::filesystem::path& path, std::size_t line_no) {
    return path.string() + ":" + std::to_string(line_no);
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Splits "name=weight;name=weight" (legacy comma separators also accepted,
// which is why the caller hands us the raw fields after the first comma).
WeightedMix parse_mix(std::span<const std::string> fields, const std::filesystem::path& path,
                      std::size_t line_no) {
    WeightedMix mix;
    for (const auto& field : fields) {
        for (const auto& part : csv::split_line(field, ';')) {
            if (part.empty()) continue;
            const std::size_t eq = part.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ValidationError(loc(path, line_no) + ": malformed weight '" + part + "'");
            }
            mix.emplace_back(part.substr(0, eq),
                             csv::parse_double(std::string_view(part).substr(eq + 1), path,
                                               line_no, "weight"));
        }
    }
    return mix;
}

}  // namespace

std::string_view to_string(HashrateSource source) {
    switch (source) {
        case HashrateSource::etherscan: return "etherscan";
        case HashrateSource::coinwarz: return "coinwarz";
        case HashrateSource::other: return "other";
    }
    return "other";
}

HashrateSource hashrate_source_from_string(std::string_view text) {
    if (text == "etherscan") return HashrateSource::etherscan;
    if (text == "coinwarz") return HashrateSource::coinwarz;
    if (text == "other") return HashrateSource::other;
    throw ValidationError("unknown hashrate source '" + std::string(text) + "'");
}

HashrateLoadResult load_hashrate(const std::filesystem::path& path, HashrateSource source,
                                 GapPolicy gap_policy) {
    const auto rows = csv::read_rows(path, "date,hashrate_ths", 2, 2);
    if (rows.empty()) throw ValidationError(path.string() + ": no samples");

    std::vector<HashrateSample> samples;
    samples.reserve(rows.size());
    for (const auto& row : rows) {
        HashrateSample s;
        try {
            s.date = Date::parse(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
        s.network_hashrate_ths = csv::parse_double(row.fields[1], path, row.line_no, "hashrate");
        if (!(s.network_hashrate_ths > 0)) {
            throw ValidationError(loc(path, row.line_no) + ": hashrate must be positive");
        }
        s.source = source;
        samples.push_back(s);
    }
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].date == samples[i - 1].date) {
            throw ValidationError(path.string() + ": duplicate sample for " +
                                  samples[i].date.to_string());
        }
    }

    HashrateLoadResult result;
    result.samples.reserve(samples.size());
    result.samples.push_back(samples.front());
    for (std::size_t i = 1; i < samples.size(); ++i) {
        Date expected = result.samples.back().date + 1;
        while (expected < samples[i].date) {
            if (gap_policy == GapPolicy::reject) {
                throw ValidationError(path.string() + ": non-contiguous series, missing " +
                                      expected.to_string() +
                                      " (use forward-fill policy to fill gaps)");
            }
            HashrateSample fill = result.samples.back();
            fill.date = expected;
            result.samples.push_back(fill);
            ++result.filled_days;
            expected = expected + 1;
        }
        result.samples.push_back(samples[i]);
    }
    return result;
}

std::optional<std::string> decode_extra_data(std::string_view hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    std::string bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_digit(hex[i]);
        const int lo = hex_digit(hex[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        bytes.push_back(static_cast<char>(hi * 16 + lo));
    }
    return lossy_utf8(bytes);
}

std::string lossy_utf8(std::string_view bytes) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";  // U+FFFD
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        unsigned cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1Fu;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0Fu;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07u;
        }
        bool ok = len != 0 && i + len <= bytes.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            const auto bk = static_cast<unsigned char>(bytes[i + k]);
            if ((bk & 0xC0) != 0x80) {
                ok = false;
            } else {
                cp = (cp << 6) | (bk & 0x3Fu);
            }
        }
        if (ok) {
            // reject overlong encodings, surrogates, and out-of-range points
            static constexpr unsigned kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
            if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
        }
        if (ok) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out.append(kReplacement);
            ++i;
        }
    }
    return out;
}

BlockLoadResult load_blocks(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "height,timestamp,miner,extra_data_hex", 3, 4);

    BlockLoadResult result;
    result.blocks.reserve(rows.size());
    for (const auto& row : rows) {
        BlockRecord b;
        const std::int64_t height = csv::parse_int(row.fields[0], path, row.line_no, "height");
        if (height < 0) throw ValidationError(loc(path, row.line_no) + ": negative height");
        b.height = static_cast<std::uint64_t>(height);
        b.timestamp = csv::parse_int(row.fields[1], path, row.line_no, "timestamp");

        b.miner = to_lower(row.fields[2]);
        if (b.miner.size() != 42 || b.miner[0] != '0' || b.miner[1] != 'x' ||
            !std::all_of(b.miner.begin() + 2, b.miner.end(),
                         [](char c) { return hex_digit(c) >= 0; })) {
            throw ValidationError(loc(path, row.line_no) + ": malformed miner address '" +
                                  row.fields[2] + "'");
        }

        // extra_data_hex column may be absent entirely (3-field row)
        std::string hex = row.fields.size() > 3 ? row.fields[3] : std::string{};
        if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) hex = hex.substr(2);
        auto decoded = decode_extra_data(hex);
        if (!decoded) {
            ++result.invalid_extra_data_count;
            b.extra_data_hex.clear();
            b.extra_data.clear();
        } else {
            if (hex.size() / 2 > 32) {
                throw ValidationError(loc(path, row.line_no) + ": extraData exceeds 32 bytes");
            }
            b.extra_data_hex = to_lower(hex);
            b.extra_data = std::move(*decoded);
        }
        result.blocks.push_back(std::move(b));
    }

    std::sort(result.blocks.begin(), result.blocks.end(),
              [](const auto& a, const auto& b) { return a.height < b.height; });
    for (std::size_t i = 1; i < result.blocks.size(); ++i) {
        const auto& prev = result.blocks[i - 1];
        const auto& cur = result.blocks[i];
        if (cur.height == prev.height) {
            throw ValidationError(path.string() + ": duplicate height " +
                                  std::to_string(cur.height));
        }
        if (cur.timestamp < prev.timestamp) {
            throw ValidationError(path.string() + ": timestamp decreases at height " +
                                  std::to_string(cur.height));
        }
    }
    return result;
}

std::vector<BenchmarkRecord> load_benchmarks(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "hardware,release_date,hashrate_mhs,power_w,source", 5, 5);
    std::vector<BenchmarkRecord> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        BenchmarkRecord b;
        b.hardware_name = row.fields[0];
        try {
            b.release_date = Date::parse(row.fields[1]);
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
        b.hashrate_mhs = csv::parse_double(row.fields[2], path, row.line_no, "hashrate");
        b.power_w = csv::parse_double(row.fields[3], path, row.line_no, "power");
        b.source = row.fields[4];
        if (!(b.hashrate_mhs > 0)) {
            throw ValidationError(loc(path, row.line_no) + ": hashrate must be positive");
        }
        if (!(b.power_w > 0)) {
            throw ValidationError(loc(path, row.line_no) + ": power must be positive");
        }
        const double eff = b.efficiency();
        if (!(eff > 0 && eff < 2)) {
            throw ValidationError(loc(path, row.line_no) +
                                  ": efficiency outside sanity bound (0, 2) MH/s/W");
        }
        out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.release_date, a.hardware_name, a.source, a.hashrate_mhs, a.power_w) <
               std::tie(b.release_date, b.hardware_name, b.source, b.hashrate_mhs, b.power_w);
    });
    return out;
}

std::vector<WorkerSnapshot> load_workers(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "snapshot_date,worker_id,hashrate_mhs", 3, 3);
    std::vector<WorkerSnapshot> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        WorkerSnapshot w;
        try {
            w.snapshot_date = Date::parse(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
        w.worker_id = row.fields[1];
        if (w.worker_id.empty()) {
            throw ValidationError(loc(path, row.line_no) + ": empty worker id");
        }
        w.reported_hashrate_mhs = csv::parse_double(row.fields[2], path, row.line_no, "hashrate");
        if (w.reported_hashrate_mhs < 0) {
            throw ValidationError(loc(path, row.line_no) + ": hashrate must be nonnegative");
        }
        out.push_back(std::move(w));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.snapshot_date, a.worker_id) < std::tie(b.snapshot_date, b.worker_id);
    });
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].snapshot_date == out[i - 1].snapshot_date &&
            out[i].worker_id == out[i - 1].worker_id) {
            throw ValidationError(path.string() + ": duplicate worker '" + out[i].worker_id +
                                  "' on " + out[i].snapshot_date.to_string());
        }
    }
    return out;
}

EmissionsFactorTable load_factor_table(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "grid,year,gco2_per_kwh,provenance", 3, 4);
    EmissionsFactorTable table;
    for (const auto& row : rows) {
        const int year =
            static_cast<int>(csv::parse_int(row.fields[1], path, row.line_no, "year"));
        const double value = csv::parse_double(row.fields[2], path, row.line_no, "factor");
        // provenance column may be omitted in hand-rolled files
        const Provenance prov = row.fields.size() > 3 && !row.fields[3].empty()
                                    ? provenance_from_string(row.fields[3])
                                    : Provenance::third_party;
        try {
            table.insert(row.fields[0], year, value, prov);
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
    }
    return table;
}

PoolRegionTable load_pool_regions(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "pool,regions", 2);
    PoolRegionTable table;
    for (const auto& row : rows) {
        const std::span<const std::string> rest(row.fields.data() + 1, row.fields.size() - 1);
        try {
            table.insert(row.fields[0], parse_mix(rest, path, row.line_no));
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
    }
    return table;
}

RegionGridMap load_region_grid_map(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "region,grids", 2);
    RegionGridMap map;
    for (const auto& row : rows) {
        const std::span<const std::string> rest(row.fields.data() + 1, row.fields.size() - 1);
        try {
            map.insert(row.fields[0], parse_mix(rest, path, row.line_no));
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
    }
    return map;
}

PatternTable load_patterns(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "pattern,region", 2);
    PatternTable table;
    for (const auto& row : rows) {
        // the pattern itself may contain commas; the region label cannot
        std::string pattern = row.fields[0];
        for (std::size_t i = 1; i + 1 < row.fields.size(); ++i) pattern += "," + row.fields[i];
        try {
            table.add(pattern, row.fields.back());
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
    }
    return table;
}

HardwareTermTable load_hardware_terms(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "term,canonical_hardware", 2);
    HardwareTermTable table;
    for (const auto& row : rows) {
        try {
            table.add(row.fields[0], row.fields[1]);
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
    }
    return table;
}

MinerPoolTable load_miner_pools(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path, "miner,pool", 2, 2);
    MinerPoolTable table;
    for (const auto& row : rows) {
        try {
            table.insert(to_lower(row.fields[0]), row.fields[1]);
        } catch (const ValidationError& e) {
            throw ValidationError(loc(path, row.line_no) + ": " + e.what());
        }
    }
    return table;
}

AnyTable load_table(const std::filesystem::path& path, TableSchema schema) {
    switch (schema) {
        case TableSchema::factors: return load_factor_table(path);
        case TableSchema::pool_regions: return load_pool_regions(path);
        case TableSchema::region_grid_map: return load_region_grid_map(path);
        case TableSchema::hardware_terms: return load_hardware_terms(path);
        case TableSchema::patterns: return load_patterns(path);
    }
    throw ValidationError("unknown table schema");
}

std::string to_canonical_csv(std::span<const HashrateSample> samples) {
    std::string out = "date,hashrate_ths\n";
    for (const auto& s : samples) {
        out += s.date.to_string() + "," + csv::format_double(s.network_hashrate_ths) + "\n";
    }
    return out;
}

std::string to_canonical_csv(std::span<const BlockRecord> blocks) {
    std::string out = "height,timestamp,miner,extra_data_hex\n";
    for (const auto& b : blocks) {
        out += std::to_string(b.height) + "," + std::to_string(b.timestamp) + "," + b.miner + "," +
               b.extra_data_hex + "\n";
    }
    return out;
}

std::string to_canonical_csv(std::span<const BenchmarkRecord> benchmarks) {
    std::string out = "hardware,release_date,hashrate_mhs,power_w,source\n";
    for (const auto& b : benchmarks) {
        out += b.hardware_name + "," + b.release_date.to_string() + "," +
               csv::format_double(b.hashrate_mhs) + "," + csv::format_double(b.power_w) + "," +
               b.source + "\n";
    }
    return out;
}

std::string to_canonical_csv(std::span<const WorkerSnapshot> workers) {
    std::string out = "snapshot_date,worker_id,hashrate_mhs\n";
    for (const auto& w : workers) {
        out += w.snapshot_date.to_string() + "," + w.worker_id + "," +
               csv::format_double(w.reported_hashrate_mhs) + "\n";
    }
    return out;
}

std::string to_canonical_csv(const EmissionsFactorTable& table) {
    std::string out = "grid,year,gco2_per_kwh,provenance\n";
    for (const auto& [key, entry] : table.entries()) {
        out += key.first + "," + std::to_string(key.second) + "," +
               csv::format_double(entry.gco2_per_kwh) + "," +
               std::string(to_string(entry.provenance)) + "\n";
    }
    return out;
}

namespace {

std::string mix_to_string(const WeightedMix& mix) {
    std::string out;
    for (const auto& [name, weight] : mix) {
        if (!out.empty()) out += ";";
        out += name + "=" + csv::format_double(weight);
    }
    return out;
}

}  // namespace

std::string to_canonical_csv(const PoolRegionTable& table) {
    std::string out = "pool,regions\n";
    for (const auto& pool : table.pools()) {
        out += pool + "," + mix_to_string(*table.find(pool)) + "\n";
    }
    return out;
}

std::string to_canonical_csv(const RegionGridMap& map) {
    std::string out = "region,grids\n";
    for (const auto& region : map.region_labels()) {
        out += region + "," + mix_to_string(map.at(region)) + "\n";
    }
    return out;
}

std::string to_canonical_csv(const PatternTable& table) {
    std::string out = "pattern,region\n";
    for (const auto& p : table.patterns()) out += p.source + "," + p.region + "\n";
    return out;
}

std::string to_canonical_csv(const HardwareTermTable& table) {
    std::string out = "term,canonical_hardware\n";
    for (const auto& t : table.terms()) out += t.term + "," + t.canonical + "\n";
    return out;
}

std::string to_canonical_csv(const MinerPoolTable& table) {
    std::vector<std::pair<std::string, std::string>> rows(table.rows().begin(),
                                                          table.rows().end());
    std::sort(rows.begin(), rows.end());
    std::string out = "miner,pool\n";
    for (const auto& [miner, pool] : rows) out += miner + "," + pool + "\n";
    return out;
}

}  // namespace ethergy
