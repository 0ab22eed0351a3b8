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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <ethergy/efficiency.hpp>
#include <ethergy/errors.hpp>
#include <ethergy/ingestion.hpp>

using namespace ethergy;

namespace {

const std::filesystem::path kDataDir = ETHERGY_DATA_DIR;

BenchmarkRecord bench(Date release, double eff) {
    // efficiency = hashrate/power; fix power at 100 W
    return {"test hw", release, eff * 100.0, 100.0, "test"};
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("two-point fit doubles over the window") {
    const std::vector<BenchmarkRecord> points{bench(kGenesisDate, 0.1),
                                              bench(kGenesisDate + 2192, 0.2)};
    const EfficiencyModel model = fit_efficiency_trend(points);
    CHECK(model.value_at(kGenesisDate) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(model.value_at(kGenesisDate + 2192) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(model.band_mae == doctest::Approx(0.0).epsilon(1e-12));

    // closed-form log-linear evaluation at the midpoint
    const double expected = 0.1 * std::exp2(1096.0 / 2192.0);
    CHECK(model.value_at(kGenesisDate + 1096) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.1414).epsilon(1e-3));
}

TEST_CASE("constant benchmarks produce no usable slope") {
    const std::vector<BenchmarkRecord> flat{bench(kGenesisDate, 0.3),
                                            bench(kGenesisDate + 100, 0.3),
                                            bench(kGenesisDate + 900, 0.3)};
    CHECK_THROWS_WITH_AS(fit_efficiency_trend(flat), doctest::Contains("slope"), ValidationError);
    FitOptions allow;
    allow.allow_nonpositive_slope = true;
    const EfficiencyModel model = fit_efficiency_trend(flat, allow);
    CHECK(model.slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(model.value_at(kGenesisDate + 450) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("degenerate fits are rejected") {
    CHECK_THROWS_AS(fit_efficiency_trend(std::vector<BenchmarkRecord>{bench(kGenesisDate, 0.1)}),
                    ValidationError);
    const std::vector<BenchmarkRecord> same_day{bench(kGenesisDate + 5, 0.1),
                                                bench(kGenesisDate + 5, 0.2)};
    CHECK_THROWS_WITH_AS(fit_efficiency_trend(same_day), doctest::Contains("degenerate"),
                         ValidationError);
}

TEST_CASE("shipped corpus fit lands inside the cross-checked range") {
    const auto benchmarks = load_benchmarks(kDataDir / "benchmarks.csv");
    const EfficiencyModel model = fit_efficiency_trend(benchmarks);
    CHECK(model.slope > 0);
    const double at_20210429 = model.value_at(Date::parse("2021-04-29"));
    CHECK(at_20210429 >= 0.17);
    CHECK(at_20210429 <= 0.40);
    CHECK(model.band_mae > 0);
    CHECK(model.band_mae < 0.15);
}

TEST_CASE("efficiency_at clamps and bands") {
    const std::vector<BenchmarkRecord> points{bench(kGenesisDate, 0.1),
                                              bench(kGenesisDate + 2192, 0.2)};
    EfficiencyModel model = fit_efficiency_trend(points);

    // date before the window start evaluates exactly as the window start
    const Bounds before = efficiency_at(model, kGenesisDate - 100);
    const Bounds at_start = efficiency_at(model, kGenesisDate);
    CHECK(before.low == at_start.low);
    CHECK(before.best == at_start.best);
    CHECK(before.high == at_start.high);

    // zero band collapses the triple
    CHECK(at_start.low == at_start.best);
    CHECK(at_start.best == at_start.high);

    model.band_mae = 0.03;
    const Bounds banded = efficiency_at(model, kGenesisDate + 1096);
    CHECK(banded.ordered());
    CHECK(banded.high - banded.best == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(banded.best - banded.low == doctest::Approx(0.03).epsilon(1e-12));

    // a band wider than the trend floors at a small positive value
    model.band_mae = 10.0;
    CHECK(efficiency_at(model, kGenesisDate).low > 0);
}

TEST_CASE("efficiency_at is monotone for positive slopes") {
    const auto model = fit_efficiency_trend(load_benchmarks(kDataDir / "benchmarks.csv"));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> day(-200, 2600);
    for (int i = 0; i < 500; ++i) {
        const int a = day(rng), b = day(rng);
        const Date da = kGenesisDate + std::min(a, b);
        const Date db = kGenesisDate + std::max(a, b);
        CHECK(efficiency_at(model, da).best <= efficiency_at(model, db).best);
    }
}

TEST_CASE("refitting on the trendline recovers the model") {
    const auto base = fit_efficiency_trend(load_benchmarks(kDataDir / "benchmarks.csv"));
    std::vector<BenchmarkRecord> sampled;
    for (int t = 0; t <= 2200; t += 200) {
        sampled.push_back(bench(kGenesisDate + t,
                                std::exp2(base.intercept + base.slope * t)));
    }
    const auto refit = fit_efficiency_trend(sampled);
    CHECK(refit.slope == doctest::Approx(base.slope).epsilon(1e-9));
    CHECK(refit.intercept == doctest::Approx(base.intercept).epsilon(1e-9));
    CHECK(refit.band_mae < 1e-12);
}

TEST_CASE("model JSON round-trips through the schema") {
    const auto model = fit_efficiency_trend(load_benchmarks(kDataDir / "benchmarks.csv"));
    const std::string json_text = efficiency_model_to_json(model);
    const EfficiencyModel back = efficiency_model_from_json(json_text);
    CHECK(back.slope == model.slope);
    CHECK(back.intercept == model.intercept);
    CHECK(back.band_mae == model.band_mae);
    CHECK(back.window_start == model.window_start);
    CHECK(back.window_end == model.window_end);
    CHECK_THROWS_WITH_AS(efficiency_model_from_json("{}"), doctest::Contains("schema"),
                         ValidationError);
    CHECK_THROWS_AS(efficiency_model_from_json("not json"), ValidationError);
}

TEST_CASE("worker id classification against the shipped terms") {
    const auto terms = load_hardware_terms(kDataDir / "hardware_terms.csv");
    CHECK(classify_worker_id("moneta_3060Ti_1", terms) == "3060Ti");
    CHECK(classify_worker_id("rig5ubuntu1080*6", terms) == "1080");
    CHECK_FALSE(classify_worker_id("mpyKId18", terms).has_value());
    CHECK_FALSE(classify_worker_id("Sneezy_f559df40", terms).has_value());
    CHECK(classify_worker_id("9throw2nda10section192x168x30x96", terms) == "A10");

    // longest term wins over a shorter overlapping one
    CHECK(classify_worker_id("evga1080ti_rig", terms) == "1080Ti");
    CHECK(classify_worker_id("GeForce RTX 3060 Ti LHR", terms) == "3060Ti");
    // case-insensitive
    CHECK(classify_worker_id("MINER_RX580_01", terms) == "RX 580");
}

TEST_CASE("classification ties break to the earliest position") {
    HardwareTermTable terms;
    terms.add("abcd", "first");
    terms.add("wxyz", "second");
    CHECK(classify_worker_id("__wxyz__abcd__", terms) == "second");
    CHECK(classify_worker_id("__abcd__wxyz__", terms) == "first");
}

TEST_CASE("adding a non-matching term never changes classifications") {
    const auto terms = load_hardware_terms(kDataDir / "hardware_terms.csv");
    HardwareTermTable extended;
    for (const auto& t : terms.terms()) extended.add(t.term, t.canonical);
    extended.add("zzzz-no-such-hardware", "Nothing");

    const std::vector<std::string> ids{"moneta_3060Ti_1", "rig5ubuntu1080*6", "mpyKId18",
                                       "farm12_3090_7", "a10pro_unit3"};
    for (const auto& id : ids) {
        CHECK(classify_worker_id(id, terms) == classify_worker_id(id, extended));
    }
}

TEST_CASE("weighted efficiency") {
    using Item = std::pair<double, double>;
    const std::vector<Item> single{{100.0, 0.38}};
    CHECK(weighted_efficiency(single) == doctest::Approx(0.38).epsilon(1e-12));

    const std::vector<Item> identical{{7.0, 0.25}, {7.0, 0.25}};
    CHECK(weighted_efficiency(identical) == doctest::Approx(0.25).epsilon(1e-12));

    // (300*0.2 + 100*0.4) / 400 = 0.25
    const std::vector<Item> mixed{{300.0, 0.2}, {100.0, 0.4}};
    CHECK(weighted_efficiency(mixed) == doctest::Approx(0.25).epsilon(1e-12));

    const std::vector<Item> zeros{{0.0, 0.2}, {0.0, 0.4}};
    CHECK_THROWS_AS(weighted_efficiency(zeros), ValidationError);
}

TEST_CASE("weighted efficiency stays inside the item range") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> weight(0.0, 500.0);
    std::uniform_real_distribution<double> eff(0.05, 0.6);
    for (int round = 0; round < 200; ++round) {
        std::vector<std::pair<double, double>> items;
        double lo = 1e9, hi = 0;
        for (int i = 0; i < 10; ++i) {
            items.emplace_back(weight(rng) + 1e-6, eff(rng));
            lo = std::min(lo, items.back().second);
            hi = std::max(hi, items.back().second);
        }
        const double avg = weighted_efficiency(items);
        CHECK(avg >= lo);
        CHECK(avg <= hi);
    }
}

TEST_CASE("weighted efficiency covers the aggregate-statistics check") {
    // model share x per-model hashrate as weights, as reported by monitoring
    // software that publishes model percentages
    const std::vector<std::pair<double, double>> items{
        {0.17 * 60.0, 0.46},   // 17% of fleet on a 60 MH/s model
        {0.33 * 30.0, 0.30},   // 33% on a 30 MH/s model
        {0.50 * 100.0, 0.40},  // remainder
    };
    const double avg = weighted_efficiency(items);
    const double expected = (0.17 * 60 * 0.46 + 0.33 * 30 * 0.30 + 0.50 * 100 * 0.40) /
                            (0.17 * 60 + 0.33 * 30 + 0.50 * 100);
    CHECK(avg == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("hardware profiles pool benchmarks by canonical name") {
    const auto benchmarks = load_benchmarks(kDataDir / "benchmarks.csv");
    const auto terms = load_hardware_terms(kDataDir / "hardware_terms.csv");
    const auto profiles = build_hardware_profiles(benchmarks, terms);

    const HardwareProfile* p3090 = find_profile(profiles, "3090");
    REQUIRE(p3090 != nullptr);
    CHECK(p3090->median_efficiency == doctest::Approx(0.38).epsilon(1e-9));

    const HardwareProfile* p580 = find_profile(profiles, "RX 580");
    REQUIRE(p580 != nullptr);
    CHECK(p580->median_efficiency == doctest::Approx(0.30).epsilon(1e-9));

    // the RX 5700 pool must not swallow RX 570 benchmarks or vice versa
    const HardwareProfile* p570 = find_profile(profiles, "RX 570");
    const HardwareProfile* p5700 = find_profile(profiles, "RX 5700");
    REQUIRE(p570 != nullptr);
    REQUIRE(p5700 != nullptr);
    CHECK(p570->median_efficiency < 0.35);
    CHECK(p5700->median_efficiency > 0.40);
}

TEST_CASE("worker power estimate") {
    const HardwareProfile profile{"3090", 0.38, 300.0};
    CHECK(worker_power_estimate(380.0, profile) == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(worker_power_estimate(0.0, profile) == 0.0);
    CHECK_THROWS_AS(worker_power_estimate(1.0, HardwareProfile{"x", 0.0, 0.0}), ValidationError);
}

TEST_CASE("median worker power over the shipped snapshot is near six mid GPUs") {
    const auto workers = load_workers(kDataDir / "workers.csv");
    const auto terms = load_hardware_terms(kDataDir / "hardware_terms.csv");
    const auto profiles =
        build_hardware_profiles(load_benchmarks(kDataDir / "benchmarks.csv"), terms);

    std::vector<double> powers;
    for (const auto& w : workers) {
        if (const auto canonical = classify_worker_id(w.worker_id, terms)) {
            if (const HardwareProfile* p = find_profile(profiles, *canonical)) {
                powers.push_back(worker_power_estimate(w.reported_hashrate_mhs, *p));
            }
        }
    }
    REQUIRE(powers.size() > 100);
    const double med = median_of(powers);
    // reference point: six GPUs at the 109 W benchmark median
    CHECK(med > 654.0 * 0.75);
    CHECK(med < 654.0 * 1.25);
}

TEST_CASE("hashrate distribution buckets") {
    auto worker = [](double mhs) { return WorkerSnapshot{kGenesisDate, "w", mhs}; };

    std::vector<WorkerSnapshot> one{worker(550)};
    one[0].worker_id = "only";
    const auto single = hashrate_distribution(one);
    CHECK(single.share_small == 0.0);
    CHECK(single.share_mid == 0.0);
    CHECK(single.share_large == 1.0);

    std::vector<WorkerSnapshot> three{worker(50), worker(150), worker(550)};
    three[0].worker_id = "a";
    three[1].worker_id = "b";
    three[2].worker_id = "c";
    const auto dist = hashrate_distribution(three);
    CHECK(dist.share_small == doctest::Approx(50.0 / 750.0).epsilon(1e-12));
    CHECK(dist.share_mid == doctest::Approx(150.0 / 750.0).epsilon(1e-12));
    CHECK(dist.share_large == doctest::Approx(550.0 / 750.0).epsilon(1e-12));
    CHECK(dist.share_small + dist.share_mid + dist.share_large ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(hashrate_distribution(std::vector<WorkerSnapshot>{}), ValidationError);
}

TEST_CASE("bimodal synthetic snapshot peaks at the configured modes") {
    std::vector<WorkerSnapshot> snapshot;
    std::mt19937_64 rng(23);
    std::normal_distribution<double> low(60.0, 5.0), high(550.0, 12.0);
    for (int i = 0; i < 400; ++i) {
        snapshot.push_back({kGenesisDate, "lo" + std::to_string(i), std::max(1.0, low(rng))});
        snapshot.push_back({kGenesisDate, "hi" + std::to_string(i), std::max(1.0, high(rng))});
    }
    const auto dist = hashrate_distribution(snapshot, 10.0);
    const auto count_near = [&](double mhs) {
        std::size_t total = 0;
        for (const auto& bin : dist.bins) {
            if (std::abs(bin.lower_mhs - mhs) <= 10.0) total += bin.worker_count;
        }
        return total;
    };
    CHECK(count_near(60.0) > 150);
    CHECK(count_near(550.0) > 150);
    CHECK(count_near(250.0) == 0);
}
