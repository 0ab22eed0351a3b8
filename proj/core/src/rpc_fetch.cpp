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

#include <ethergy/rpc_fetch.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <ethergy/csv.hpp>
#include <ethergy/errors.hpp>

namespace ethergy {

namespace {

std::string to_hex_quantity(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t from_hex_quantity(const std::string& text) {
    if (text.rfind("0x", 0) != 0) throw ValidationError("expected hex quantity, got " + text);
    return std::stoull(text.substr(2), nullptr, 16);
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Endpoint {
    std::string base;  // scheme://host:port
    std::string path;  // request target, default "/"
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ValidationError("endpoint must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

struct FetchedBlock {
    std::uint64_t height;
    std::uint64_t timestamp;
    std::string miner;
    std::string extra_data_hex;
};

FetchedBlock fetch_one(httplib::Client& client, const std::string& path, std::uint64_t height,
                       int max_retries, bool quiet) {
    const nlohmann::json request = {{"jsonrpc", "2.0"},
                                    {"method", "eth_getBlockByNumber"},
                                    {"params", {to_hex_quantity(height), false}},
                                    {"id", height}};
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = std::chrono::milliseconds(250LL << (attempt - 1));
            if (!quiet) {
                std::fprintf(stderr, "retry %d for block %llu after %lld ms: %s\n", attempt,
                             static_cast<unsigned long long>(height),
                             static_cast<long long>(delay.count()), last_error.c_str());
            }
            std::this_thread::sleep_for(delay);
        }
        auto res = client.Post(path, request.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("bad JSON: ") + e.what();
            continue;
        }
        if (body.contains("error") && !body["error"].is_null()) {
            last_error = "RPC error: " + body["error"].dump();
            continue;
        }
        const auto& result = body["result"];
        if (result.is_null()) {
            last_error = "null result (block not available)";
            continue;
        }
        try {
            FetchedBlock block;
            block.height = from_hex_quantity(result.at("number").get<std::string>());
            block.timestamp = from_hex_quantity(result.at("timestamp").get<std::string>());
            block.miner = to_lower(result.at("miner").get<std::string>());
            std::string extra = result.value("extraData", "0x");
            if (extra.rfind("0x", 0) == 0) extra = extra.substr(2);
            block.extra_data_hex = to_lower(extra);
            return block;
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("unexpected result shape: ") + e.what();
        }
    }
    throw IoError("giving up on block " + std::to_string(height) + ": " + last_error);
}

}  // namespace

FetchResult fetch_blocks(const FetchOptions& options) {
    if (options.to_height < options.from_height) {
        throw ValidationError("height range is empty");
    }
    if (!(options.requests_per_second > 0)) {
        throw ValidationError("request rate must be positive");
    }

    const std::filesystem::path checkpoint_path =
        options.checkpoint.empty() ? std::filesystem::path(options.out_csv.string() + ".checkpoint")
                                   : options.checkpoint;

    FetchResult result;
    std::uint64_t next = options.from_height;
    if (std::filesystem::exists(checkpoint_path)) {
        const std::string text = csv::read_file(checkpoint_path);
        const std::uint64_t done = std::stoull(text);
        if (done + 1 > next) {
            next = done + 1;
            result.resumed = true;
        }
    }
    if (next > options.to_height) {
        result.first_height = next;
        result.last_height = options.to_height;
        return result;  // nothing left to do
    }

    const bool fresh = !std::filesystem::exists(options.out_csv);
    if (options.out_csv.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(options.out_csv.parent_path(), ec);
    }
    std::ofstream out(options.out_csv, std::ios::app);
    if (!out) throw IoError("cannot open " + options.out_csv.string());
    if (fresh) out << "height,timestamp,miner,extra_data_hex\n";

    const Endpoint endpoint = split_endpoint(options.endpoint);
    httplib::Client client(endpoint.base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(30, 0);

    const auto interval =
        std::chrono::duration<double>(1.0 / options.requests_per_second);
    auto next_request_at = std::chrono::steady_clock::now();

    result.first_height = next;
    for (std::uint64_t height = next; height <= options.to_height; ++height) {
        std::this_thread::sleep_until(next_request_at);
        next_request_at = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval);

        const FetchedBlock block =
            fetch_one(client, endpoint.path, height, options.max_retries, options.quiet);
        out << block.height << ',' << block.timestamp << ',' << block.miner << ','
            << block.extra_data_hex << '\n';
        out.flush();
        if (!out) throw IoError("short write to " + options.out_csv.string());
        csv::write_file(checkpoint_path, std::to_string(height) + "\n");
        ++result.rows_written;
        result.last_height = height;
    }
    return result;
}

}  // namespace ethergy
