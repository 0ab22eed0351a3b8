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

#include <cmath>
#include <filesystem>

#include <ethergy/csv.hpp>
#include <ethergy/emissions.hpp>
#include <ethergy/errors.hpp>
#include <ethergy/ingestion.hpp>

using namespace ethergy;

namespace {

const std::filesystem::path kDataDir = ETHERGY_DATA_DIR;

struct Tables {
    EmissionsFactorTable factors;
    RegionGridMap region_grids;
    PoolRegionTable pools;
    PatternTable patterns;
    MinerPoolTable miner_pools;
};

const Tables& shipped_tables() {
    static const Tables t = [] {
        Tables t;
        t.factors = load_factor_table(kDataDir / "factors.csv");
        t.region_grids = load_region_grid_map(kDataDir / "region_grid_map.csv");
        t.pools = load_pool_regions(kDataDir / "pool_regions.csv");
        t.patterns = load_patterns(kDataDir / "patterns.csv");
        t.miner_pools = load_miner_pools(kDataDir / "miner_pools.csv");
        return t;
    }();
    return t;
}

BlockRecord make_block(std::uint64_t height, const std::string& extra, const std::string& miner,
                       std::int64_t ts = 1614556800 /* 2021-03-01 */) {
    BlockRecord b;
    b.height = height;
    b.timestamp = ts;
    b.miner = miner;
    b.extra_data = extra;
    return b;
}

// independent oracle: flatten region weights to grid weights, then average
double brute_force_factor(const WeightedMix& region_mix, const RegionGridMap& map,
                          const EmissionsFactorTable& factors, int year) {
    double num = 0, den = 0;
    for (const auto& [region, rw] : region_mix) {
        for (const auto& [grid, gw] : map.at(region)) {
            num += rw * gw * factors.at(grid, year);
            den += rw * gw;
        }
    }
    return num / den;
}

}  // namespace

TEST_CASE("energy-mix weighting reproduces the 2018 gas/oil/coal example") {
    const std::vector<GenerationSource> sources{{523.0, 400.0}, {7.9, 600.0}, {176.0, 845.0}};
    const double factor = mix_emission_factor(sources, 1109.0);
    CHECK(factor == doctest::Approx(327.0).epsilon(0.5 / 327.0));
    // independent arithmetic
    CHECK(factor == doctest::Approx((523.0 * 400 + 7.9 * 600 + 176.0 * 845) / 1109.0)
                        .epsilon(1e-12));
}

TEST_CASE("energy-mix weighting edge cases") {
    const std::vector<GenerationSource> full{{10.0, 777.0}};
    CHECK(mix_emission_factor(full, 10.0) == doctest::Approx(777.0).epsilon(1e-12));

    // wet-season scaling: 5% coal at 890, rest zero-emission
    const std::vector<GenerationSource> wet{{0.05, 890.0}};
    CHECK(mix_emission_factor(wet, 1.0) == doctest::Approx(44.5).epsilon(1e-12));

    const std::vector<GenerationSource> overfull{{11.0, 400.0}};
    CHECK_THROWS_WITH_AS(mix_emission_factor(overfull, 10.0), doctest::Contains("exceeds"),
                         ValidationError);
    CHECK_THROWS_AS(mix_emission_factor(full, 0.0), ValidationError);
}

TEST_CASE("generation-based factor with unit conversion") {
    // 1.83 Gt (short tons) over 4140 TWh is about 401 g/kWh
    const double us2019 = generation_based_factor(1.83e9, MassUnit::short_tons, 4140.0);
    CHECK(us2019 == doctest::Approx(401.0).epsilon(1.0 / 401.0));

    // 0.442 short tons per MWh is the same figure
    const double per_mwh = generation_based_factor(0.442, MassUnit::short_tons, 1e-6);
    CHECK(per_mwh == doctest::Approx(401.0).epsilon(1.0 / 401.0));

    // metric sanity: 1 tonne over 1 TWh is 0.001 g/kWh
    CHECK(generation_based_factor(1.0, MassUnit::tonnes, 1.0) ==
          doctest::Approx(0.001).epsilon(1e-12));

    CHECK_THROWS_AS(generation_based_factor(1.0, MassUnit::tonnes, 0.0), ValidationError);
}

TEST_CASE("factor series interpolation") {
    // independent least-squares oracle for the two-point case: the midpoint
    const std::vector<YearFactor> asia{{2015, 666.0, Provenance::third_party},
                                       {2017, 638.0, Provenance::third_party}};
    const std::vector<int> target{2016};
    const auto filled = extend_factor_series(asia, target);
    REQUIRE(filled.size() == 3);
    CHECK(filled[1].year == 2016);
    CHECK(filled[1].gco2_per_kwh == doctest::Approx(652.0).epsilon(1e-12));
    CHECK(filled[1].provenance == Provenance::interpolated);
    // the shipped table records 651 for Asia 2016; the line fit is within 2
    CHECK(std::abs(filled[1].gco2_per_kwh - 651.0) <= 2.0);

    // constant series stays constant
    const std::vector<YearFactor> flat{{2015, 100.0, {}}, {2018, 100.0, {}}};
    const std::vector<int> years{2016, 2017, 2019};
    for (const auto& f : extend_factor_series(flat, years)) {
        CHECK(f.gco2_per_kwh == doctest::Approx(100.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(extend_factor_series(std::vector<YearFactor>{{2015, 1.0, {}}}, years),
                    ValidationError);
}

TEST_CASE("extrapolating the Europe series lands near the shipped 2021 value") {
    const std::vector<YearFactor> europe{{2015, 313, {}}, {2016, 302, {}}, {2017, 301, {}},
                                         {2018, 288, {}}, {2019, 253, {}}, {2020, 231, {}}};
    // independent OLS oracle over (year, value)
    double mx = 0, my = 0;
    for (const auto& e : europe) {
        mx += e.year;
        my += e.gco2_per_kwh;
    }
    mx /= 6.0;
    my /= 6.0;
    double sxx = 0, sxy = 0;
    for (const auto& e : europe) {
        sxx += (e.year - mx) * (e.year - mx);
        sxy += (e.year - mx) * (e.gco2_per_kwh - my);
    }
    const double oracle_2021 = my + (sxy / sxx) * (2021 - mx);

    const std::vector<int> target{2021};
    const auto filled = extend_factor_series(europe, target);
    CHECK(filled.back().year == 2021);
    CHECK(filled.back().gco2_per_kwh == doctest::Approx(oracle_2021).epsilon(1e-9));
    CHECK(std::abs(filled.back().gco2_per_kwh - 224.0) <= 10.0);
}

TEST_CASE("interpolation is exact on collinear inputs and floors at 1") {
    const std::vector<YearFactor> line{{2015, 500.0, {}}, {2016, 480.0, {}}, {2017, 460.0, {}}};
    const std::vector<int> years{2018, 2019};
    const auto filled = extend_factor_series(line, years);
    CHECK(filled[3].gco2_per_kwh == doctest::Approx(440.0).epsilon(1e-12));
    CHECK(filled[4].gco2_per_kwh == doctest::Approx(420.0).epsilon(1e-12));

    const std::vector<YearFactor> steep{{2015, 20.0, {}}, {2016, 10.0, {}}};
    const std::vector<int> far{2021};
    CHECK(extend_factor_series(steep, far).back().gco2_per_kwh == 1.0);  // floored
}

TEST_CASE("block classification follows the mapping flow") {
    const auto& t = shipped_tables();
    const std::string huobi_addr = "0x1111111111111111111111111111111111111111";
    MinerPoolTable miners;
    miners.insert(huobi_addr, "Huobi Mining Pool");
    miners.insert("0xea674fdde714fd979de3edf0f56aa9716b898ec8", "Ethermine");

    SUBCASE("extraData pattern wins") {
        const auto attr = classify_block(make_block(1, "ethermine-europe-west3",
                                                    "0xea674fdde714fd979de3edf0f56aa9716b898ec8"),
                                         t.patterns, t.pools, miners);
        CHECK(attr.method == AttributionMethod::extra_data);
        REQUIRE(attr.region_mix.size() == 1);
        CHECK(attr.region_mix[0].first == "europe-west");
    }

    SUBCASE("pool fallback when extraData matches nothing") {
        const auto attr =
            classify_block(make_block(2, "geth", huobi_addr), t.patterns, t.pools, miners);
        CHECK(attr.method == AttributionMethod::pool);
        REQUIRE(attr.region_mix.size() == 3);
        CHECK(attr.region_mix[0].first == "europe");
        CHECK(attr.region_mix[0].second == doctest::Approx(0.49).epsilon(1e-12));
        CHECK(attr.region_mix[1].second == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(attr.region_mix[2].second == doctest::Approx(0.26).epsilon(1e-12));
    }

    SUBCASE("unknown miner with plain extraData is unmapped") {
        const auto attr = classify_block(
            make_block(3, "geth", "0x2222222222222222222222222222222222222222"), t.patterns,
            t.pools, miners);
        CHECK(attr.method == AttributionMethod::unmapped);
        CHECK(attr.region_mix.empty());
        CHECK_FALSE(attr.emissions_factor.has_value());
    }

    SUBCASE("extraData precedence over a mappable miner") {
        const auto attr =
            classify_block(make_block(4, "eu-w1", huobi_addr), t.patterns, t.pools, miners);
        CHECK(attr.method == AttributionMethod::extra_data);
        CHECK(attr.region_mix[0].first == "europe-west");
    }
}

TEST_CASE("grid mix factors match the shipped tables") {
    const auto& t = shipped_tables();

    // europe-north 2018: Europe 2/9 * 288 + Sweden 6/9 * 11 + Germany 1/9 * 404
    const WeightedMix north{{"europe-north", 1.0}};
    CHECK(grid_mix_factor(north, t.region_grids, t.factors, 2018) ==
          doctest::Approx((2.0 * 288 + 6.0 * 11 + 1.0 * 404) / 9.0).epsilon(1e-12));
    CHECK(grid_mix_factor(north, t.region_grids, t.factors, 2018) ==
          doctest::Approx(116.2).epsilon(1e-3));

    // china 2018: (613 + 2*646 + 2*42) / 5
    const WeightedMix china{{"china", 1.0}};
    CHECK(grid_mix_factor(china, t.region_grids, t.factors, 2018) ==
          doctest::Approx(397.8).epsilon(1e-12));

    // single-grid region
    const WeightedMix taiwan{{"taiwan", 1.0}};
    CHECK(grid_mix_factor(taiwan, t.region_grids, t.factors, 2019) == 509.0);

    CHECK_THROWS_WITH_AS(grid_mix_factor(taiwan, t.region_grids, t.factors, 2030),
                         doctest::Contains("(Taiwan, 2030)"), ValidationError);
    const WeightedMix unknown{{"atlantis", 1.0}};
    CHECK_THROWS_AS(grid_mix_factor(unknown, t.region_grids, t.factors, 2018), ValidationError);
}

TEST_CASE("all region rows match the brute-force oracle across all years") {
    const auto& t = shipped_tables();
    for (const auto& region : t.region_grids.region_labels()) {
        for (int year = 2015; year <= 2021; ++year) {
            const WeightedMix mix{{region, 1.0}};
            const double got = grid_mix_factor(mix, t.region_grids, t.factors, year);
            const double expected = brute_force_factor(mix, t.region_grids, t.factors, year);
            CHECK(got == doctest::Approx(expected).epsilon(1e-9));

            // the average must lie inside the span of its inputs
            double lo = 1e9, hi = 0;
            for (const auto& [grid, w] : t.region_grids.at(region)) {
                lo = std::min(lo, t.factors.at(grid, year));
                hi = std::max(hi, t.factors.at(grid, year));
            }
            CHECK(got >= lo);
            CHECK(got <= hi);
        }
    }
}

TEST_CASE("attribute_blocks fills factors and orders by height") {
    const auto& t = shipped_tables();
    MinerPoolTable miners;
    miners.insert("0x1111111111111111111111111111111111111111", "Huobi Mining Pool");

    std::vector<BlockRecord> blocks{
        make_block(30, "geth", "0x1111111111111111111111111111111111111111"),
        make_block(10, "ethermine-europe-west3", "0x2222222222222222222222222222222222222222"),
        make_block(20, "geth", "0x3333333333333333333333333333333333333333"),
    };
    const auto attrs =
        attribute_blocks(blocks, t.patterns, t.pools, miners, t.region_grids, t.factors);
    REQUIRE(attrs.size() == 3);
    CHECK(attrs[0].height == 10);
    CHECK(attrs[1].height == 20);
    CHECK(attrs[2].height == 30);
    CHECK(attrs[0].method == AttributionMethod::extra_data);
    CHECK(attrs[1].method == AttributionMethod::unmapped);
    CHECK(attrs[2].method == AttributionMethod::pool);

    // factor equals the oracle for the block's calendar year (2021)
    CHECK(attrs[0].emissions_factor.has_value());
    CHECK(*attrs[0].emissions_factor ==
          doctest::Approx(brute_force_factor({{"europe-west", 1.0}}, t.region_grids, t.factors,
                                             2021))
              .epsilon(1e-12));
    CHECK_FALSE(attrs[1].emissions_factor.has_value());

    // method and factor presence are tied
    for (const auto& a : attrs) {
        CHECK((a.method == AttributionMethod::unmapped) == !a.emissions_factor.has_value());
        CHECK((a.method == AttributionMethod::unmapped) == a.region_mix.empty());
    }
}

TEST_CASE("pattern region labels form a closed set") {
    const auto& t = shipped_tables();
    CHECK_NOTHROW(validate_pattern_regions(t.patterns, t.region_grids));

    PatternTable bad;
    bad.add("mars-base", "mars");
    CHECK_THROWS_WITH_AS(validate_pattern_regions(bad, t.region_grids),
                         doctest::Contains("mars"), ValidationError);
}

TEST_CASE("bundle fixture attribution fractions sum to one") {
    const auto& t = shipped_tables();
    const std::filesystem::path bundle =
        std::filesystem::path(ETHERGY_FIXTURES_DIR) / "bundle";
    const auto blocks = load_blocks(bundle / "blocks.csv");
    const auto miners = load_miner_pools(bundle / "miner_pools.csv");

    std::size_t by_extra = 0, by_pool = 0, unmapped = 0;
    for (const auto& b : blocks.blocks) {
        switch (classify_block(b, t.patterns, t.pools, miners).method) {
            case AttributionMethod::extra_data: ++by_extra; break;
            case AttributionMethod::pool: ++by_pool; break;
            case AttributionMethod::unmapped: ++unmapped; break;
        }
    }
    CHECK(by_extra + by_pool + unmapped == blocks.blocks.size());
    CHECK(by_extra > 0);
    CHECK(by_pool > 0);
    CHECK(unmapped > 0);
    const double total = static_cast<double>(blocks.blocks.size());
    CHECK(by_extra / total + by_pool / total + unmapped / total == 1.0);
}

TEST_CASE("attributions csv round-trips") {
    const auto& t = shipped_tables();
    MinerPoolTable miners;
    miners.insert("0x1111111111111111111111111111111111111111", "Huobi Mining Pool");
    std::vector<BlockRecord> blocks{
        make_block(1, "ethermine-europe-west3", "0x2222222222222222222222222222222222222222"),
        make_block(2, "geth", "0x1111111111111111111111111111111111111111"),
        make_block(3, "geth", "0x4444444444444444444444444444444444444444"),
    };
    const auto attrs =
        attribute_blocks(blocks, t.patterns, t.pools, miners, t.region_grids, t.factors);
    const std::string text = attributions_to_csv(attrs);
    CHECK(text.find("height,method,region_mix,gco2_per_kwh") == 0);
    CHECK(text.find("europe-west=1.000000") != std::string::npos);  // 6-decimal weights

    const auto dir = std::filesystem::temp_directory_path() / "ethergy_emissions_test";
    std::filesystem::create_directories(dir);
    csv::write_file(dir / "attributions.csv", text);
    const auto loaded = load_attributions(dir / "attributions.csv");
    REQUIRE(loaded.size() == attrs.size());
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        CHECK(loaded[i].height == attrs[i].height);
        CHECK(loaded[i].method == attrs[i].method);
        CHECK(loaded[i].region_mix.size() == attrs[i].region_mix.size());
        CHECK(loaded[i].emissions_factor.has_value() == attrs[i].emissions_factor.has_value());
    }
}
