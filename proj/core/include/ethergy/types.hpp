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

#include <cstdint>
#include <string>
#include <string_view>

#include <ethergy/date.hpp>

namespace ethergy {

/// A (low, best, high) triple. "low" and "high" bound the quantity itself,
/// so `low <= best <= high` must hold wherever a Bounds is produced.
struct Bounds {
    double low{0};
    double best{0};
    double high{0};

    bool ordered() const { return low <= best && best <= high; }

    Bounds scaled(double k) const { return {low * k, best * k, high * k}; }

    Bounds operator+(const Bounds& o) const { return {low + o.low, best + o.best, high + o.high}; }

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

enum class HashrateSource { etherscan, coinwarz, other };

std::string_view to_string(HashrateSource source);
HashrateSource hashrate_source_from_string(std::string_view text);

/// One day of network-wide hashrate, in terahashes per second.
struct HashrateSample {
    Date date;
    double network_hashrate_ths{0};
    HashrateSource source{HashrateSource::etherscan};
};

/// One mined block's metadata. `extra_data` is the lossily UTF-8-decoded
/// text of the extraData field; `extra_data_hex` keeps the canonical raw
/// bytes (lowercase hex, empty when the input hex was malformed).
struct BlockRecord {
    std::uint64_t height{0};
    std::int64_t timestamp{0};  // Unix seconds, UTC
    std::string miner;          // 0x-prefixed lowercase hex, 20 bytes
    std::string extra_data_hex;
    std::string extra_data;

    Date day() const { return Date::from_unix_seconds(timestamp); }
};

/// A published hashrate/power benchmark for one piece of hardware.
struct BenchmarkRecord {
    std::string hardware_name;
    Date release_date;
    double hashrate_mhs{0};
    double power_w{0};
    std::string source;

    double efficiency() const { return hashrate_mhs / power_w; }  // MH/s per W
};

/// One worker's reported hashrate on one snapshot day.
struct WorkerSnapshot {
    Date snapshot_date;
    std::string worker_id;
    double reported_hashrate_mhs{0};
};

}  // namespace ethergy
