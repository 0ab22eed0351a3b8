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

#include <benchmark/benchmark.h>

#include <random>

#include <ethergy/efficiency.hpp>
#include <ethergy/emissions.hpp>
#include <ethergy/energy.hpp>
#include <ethergy/ingestion.hpp>
#include <ethergy/pipeline.hpp>

namespace {

using namespace ethergy;

const std::filesystem::path kDataDir = ETHERGY_DATA_DIR;

std::vector<std::string> synthetic_worker_ids(std::size_t n) {
    std::mt19937_64 rng(42);
    const std::vector<std::string> tags{"3090", "3070", "1080ti", "rx580", "a10", ""};
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& tag = tags[rng() % tags.size()];
        ids.push_back("rig" + std::to_string(i) + "_" + tag + "_x" + std::to_string(rng() % 8));
    }
    return ids;
}

void BM_EstimatePower(benchmark::State& state) {
    const ScenarioParameters best;
    double hashrate = 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_power(hashrate, 0.3, best));
        hashrate += 1e-9;
    }
}
BENCHMARK(BM_EstimatePower);

void BM_ClassifyWorkerId(benchmark::State& state) {
    const auto terms = load_hardware_terms(kDataDir / "hardware_terms.csv");
    const auto ids = synthetic_worker_ids(4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_worker_id(ids[i++ % ids.size()], terms));
    }
}
BENCHMARK(BM_ClassifyWorkerId);

void BM_PatternMatch(benchmark::State& state) {
    const auto patterns = load_patterns(kDataDir / "patterns.csv");
    const std::vector<std::string> samples{"ethermine-europe-west3", "geth-go1.16", "us-east4",
                                           "nanopool.org", "asia1-prod"};
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(patterns.match(samples[i++ % samples.size()]));
    }
}
BENCHMARK(BM_PatternMatch);

void BM_GridMixFactor(benchmark::State& state) {
    const auto factors = load_factor_table(kDataDir / "factors.csv");
    const auto region_grids = load_region_grid_map(kDataDir / "region_grid_map.csv");
    const WeightedMix mix{{"europe", 0.49}, {"us", 0.25}, {"asia", 0.26}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_mix_factor(mix, region_grids, factors, 2019));
    }
}
BENCHMARK(BM_GridMixFactor);

void BM_PipelineYear(benchmark::State& state) {
    EfficiencyModel model;
    model.slope = 4e-4;
    model.intercept = -2.3;
    model.band_mae = 0.06;
    model.window_start = kGenesisDate;
    model.window_end = kGenesisDate + 2500;

    const Date day0 = Date::parse("2020-01-01");
    std::vector<HashrateSample> hashrate;
    std::vector<BlockAttribution> attrs;
    for (int i = 0; i < 365; ++i) {
        hashrate.push_back({day0 + i, 150.0 + i * 0.3, HashrateSource::etherscan});
        BlockAttribution a;
        a.height = static_cast<std::uint64_t>(i);
        a.day = day0 + i;
        a.method = AttributionMethod::extra_data;
        a.region_mix = {{"europe", 1.0}};
        a.emissions_factor = 300.0 + i % 40;
        attrs.push_back(a);
    }
    PipelineConfig config;
    config.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(hashrate, model, attrs, config));
    }
}
BENCHMARK(BM_PipelineYear);

}  // namespace

BENCHMARK_MAIN();
