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
#include <filesystem>
#include <string>

namespace ethergy {

/// Block header download over Ethereum JSON-RPC (eth_getBlockByNumber).
struct FetchOptions {
    std::string endpoint;  // e.g. http://127.0.0.1:8545
    std::uint64_t from_height{0};
    std::uint64_t to_height{0};  // inclusive
    std::filesystem::path out_csv;
    std::filesystem::path checkpoint;  // defaults to out_csv + ".checkpoint"
    double requests_per_second{10.0};
    int max_retries{5};
    bool quiet{false};
};

struct FetchResult {
    std::uint64_t rows_written{0};
    std::uint64_t first_height{0};
    std::uint64_t last_height{0};
    bool resumed{false};
};

/// Appends `height,timestamp,miner,extra_data_hex` rows to out_csv, writing
/// the header when the file is new. Progress is checkpointed after every
/// block so an interrupted run resumes without duplicate heights. Requests
/// are paced to `requests_per_second` and retried with exponential backoff.
FetchResult fetch_blocks(const FetchOptions& options);

}  // namespace ethergy
