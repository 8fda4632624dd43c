#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "landex/market_model.hpp"
#include "landex/synth.hpp"

using namespace landex;

TEST_CASE("canonical_bundle_key sorts and deduplicates") {
    const BundleKey key = canonical_bundle_key({{1, 0}, {0, 0}});
    REQUIRE(key.coords == std::vector<ParcelCoord>{{0, 0}, {1, 0}});

    const BundleKey single = canonical_bundle_key({{5, 5}});
    CHECK(single.coords == std::vector<ParcelCoord>{{5, 5}});
    CHECK(single.lot_size() == 1);

    CHECK_THROWS_AS(canonical_bundle_key({{0, 0}, {0, 0}}), DuplicateParcel);
    CHECK_THROWS_AS(canonical_bundle_key({}), EmptyBundle);
    CHECK_THROWS_AS(canonical_bundle_key({{408, 3}}), OutOfGrid);
    CHECK_THROWS_AS(canonical_bundle_key({{-1, 3}}), OutOfGrid);
    CHECK_NOTHROW(canonical_bundle_key({{407, 407}}));
}

TEST_CASE("canonical_bundle_key is order-insensitive and idempotent") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ParcelCoord> coords;
        const int n = 1 + rng.uniform_int(12);
        for (int i = 0; i < n; ++i)
            coords.push_back({rng.uniform_int(408), rng.uniform_int(408)});
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

        const BundleKey reference = canonical_bundle_key(coords);
        for (int shuffle = 0; shuffle < 5; ++shuffle) {
            for (std::size_t i = coords.size(); i > 1; --i)
                std::swap(coords[i - 1],
                          coords[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(i)))]);
            CHECK(canonical_bundle_key(coords) == reference);
        }
        CHECK(canonical_bundle_key(reference.coords) == reference);
    }
}

TEST_CASE("week_of matches the ISO calendar") {
    CHECK(week_of(parse_instant("2019-12-05T12:00:00Z")) == WeekId{2019, 49});
    CHECK(week_of(parse_instant("2020-08-14T00:00:00Z")) == WeekId{2020, 33});
    CHECK(week_of(parse_instant("2021-01-01T00:00:00Z")) == WeekId{2020, 53});
    CHECK(week_of(parse_instant("2021-01-04T00:00:00Z")) == WeekId{2021, 1});
    CHECK(week_of(parse_instant("1970-01-01T00:00:00Z")) == WeekId{1970, 1});
}

TEST_CASE("week_of is monotone and serial round-trips") {
    SplitMix64 rng(11);
    std::int64_t prev_seconds = 0;
    WeekId prev_week = week_of(UtcInstant{0});
    for (int i = 0; i < 500; ++i) {
        prev_seconds += static_cast<std::int64_t>(rng.uniform() * 3e6);
        const UtcInstant t{prev_seconds};
        const WeekId week = week_of(t);
        CHECK(prev_week <= week);
        prev_week = week;

        CHECK(week_from_serial(week_serial(week)) == week);
        CHECK(week_serial(week) == week_serial(t.date()));
    }
}

TEST_CASE("week labels parse back") {
    const WeekId week{2020, 33};
    CHECK(week.label() == "2020-W33");
    CHECK(parse_week("2020-W33") == week);
    CHECK(parse_week("2020-33") == week);
    CHECK_THROWS_AS(parse_week("2020-W54"), BadTimestamp);
    CHECK_THROWS_AS(parse_week("2021-W53"), BadTimestamp);  // 2021 has 52 weeks
    CHECK_NOTHROW(parse_week("2020-W53"));
}

TEST_CASE("date and instant parsing round-trips and rejects junk") {
    CHECK(format_date(parse_date("2021-02-28")) == "2021-02-28");
    CHECK(format_instant(parse_instant("2021-11-30T14:03:22Z")) ==
          "2021-11-30T14:03:22Z");
    CHECK(parse_date("2020-02-29").days == days_from_civil(2020, 2, 29));
    CHECK_THROWS_AS(parse_date("2021-02-29"), BadTimestamp);
    CHECK_THROWS_AS(parse_date("2021-13-01"), BadTimestamp);
    CHECK_THROWS_AS(parse_date("2021-1-1"), BadTimestamp);
    CHECK_THROWS_AS(parse_instant("2021-11-30 14:03:22"), BadTimestamp);
    CHECK_THROWS_AS(parse_instant("2021-11-30T14:03:22+01"), BadTimestamp);
    CHECK_THROWS_AS(parse_instant("2021-11-30T25:03:22Z"), BadTimestamp);
}

TEST_CASE("decimal arithmetic is exact and lossless") {
    CHECK(Decimal::parse("1.50").to_string() == "1.5");
    CHECK(Decimal::parse("0.10").plus(Decimal::parse("0.20")).to_string() == "0.3");
    CHECK(Decimal::parse("123456789.123456789").to_string() == "123456789.123456789");
    CHECK(Decimal::parse("2").to_double() == 2.0);
    CHECK(Decimal::parse("-3.25").is_negative());
    CHECK(Decimal::parse("0.000").is_zero());
    CHECK(Decimal::parse("1.05").compare(Decimal::parse("1.5")) < 0);

    Decimal sum;
    for (int i = 0; i < 9; ++i) sum = sum.plus(Decimal::parse("1"));
    CHECK(sum.to_string() == "9");

    CHECK_THROWS_AS(Decimal::parse("1e5"), MalformedRow);
    CHECK_THROWS_AS(Decimal::parse(""), MalformedRow);
    CHECK_THROWS_AS(Decimal::parse("1.2.3"), MalformedRow);
    CHECK_THROWS_AS(Decimal::parse("abc"), MalformedRow);
}

TEST_CASE("tokens canonicalize to upper case") {
    CHECK(Token("weth").symbol() == "WETH");
    CHECK(Token("wEth") == Token("WETH"));
    CHECK(Token::usd().is_usd());
    CHECK_FALSE(Token("SAND").is_usd());
}

TEST_CASE("price table rejects duplicates and non-positive prices") {
    PriceTable table;
    table.add(parse_date("2021-01-01"), Token("ETH"), 730.0);
    CHECK(table.size() == 1);
    CHECK(table.usd_price(parse_date("2021-01-01"), Token("ETH")) == 730.0);
    CHECK(table.usd_price(parse_date("2021-01-01"), Token::usd()) == 1.0);
    CHECK_THROWS_AS(table.add(parse_date("2021-01-01"), Token("ETH"), 731.0),
                    DuplicatePriceRow);
    CHECK_THROWS_AS(table.add(parse_date("2021-01-02"), Token("ETH"), 0.0),
                    NonPositivePrice);
    CHECK_THROWS_AS(table.usd_price(parse_date("2021-01-02"), Token("ETH")),
                    MissingPrice);
    CHECK_FALSE(table.find(parse_date("2021-01-02"), Token("ETH")).has_value());
}

TEST_CASE("bundle hashes are stable and distinguish keys") {
    const BundleKey a = canonical_bundle_key({{0, 0}, {0, 1}});
    const BundleKey b = canonical_bundle_key({{0, 0}, {1, 0}});
    CHECK(bundle_hash(a) == bundle_hash(canonical_bundle_key({{0, 1}, {0, 0}})));
    CHECK(bundle_hash(a) != bundle_hash(b));
    CHECK(bundle_hash_hex(a).size() == 16);
}
