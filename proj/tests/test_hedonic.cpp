#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "landex/hedonic.hpp"
#include "test_support.hpp"

using namespace landex;
using landex::test::TxBuilder;
using landex::test::add_constant_prices;
using landex::test::max_log_level_error;
using landex::test::run_pipeline;

namespace {

DenominatedSale make_sale(const Transaction& tx, double price,
                          const Token& denom = Token::usd()) {
    return DenominatedSale{tx, denom, price, std::log(price)};
}

HedonicSpec no_winsor_spec(Token denom = Token::usd()) {
    HedonicSpec spec;
    spec.denomination = std::move(denom);
    spec.winsor = WinsorBounds{0.0, 1.0};
    return spec;
}

}  // namespace

TEST_CASE("design for two plain secondary ETH sales has only week and controls") {
    const Transaction tx1 = TxBuilder{}.id("A").build();
    const Transaction tx2 =
        TxBuilder{}.id("B").at("2021-01-05T12:00:00Z").minted("2021-01-05").build();
    const auto [X, y] = build_hedonic_design({make_sale(tx1, 10), make_sale(tx2, 20)},
                                             no_winsor_spec());

    REQUIRE(X.cols() == 3);  // week dummy, ln lot, ln age; no primary, no settlement
    CHECK(X.column_labels[0] == "week:2021-W01");
    CHECK(X.column_labels[1] == "ln_lot_size");
    CHECK(X.column_labels[2] == "ln_age_days");
    CHECK(X.values.col(0) == Eigen::VectorXd::Ones(2));
    CHECK(X.values.col(1).cwiseAbs().maxCoeff() == 0.0);  // lot 1
    CHECK(X.values.col(2).cwiseAbs().maxCoeff() == 0.0);  // age 0
    CHECK(y(0) == doctest::Approx(std::log(10.0)));
}

TEST_CASE("a primary SAND mint carries both the primary and the SAND dummy") {
    const Transaction eth = TxBuilder{}.id("A").build();
    const Transaction mint =
        TxBuilder{}.id("B").parcels({{3, 3}}).settled("SAND").primary().build();
    const Transaction sand2 =
        TxBuilder{}.id("C").parcels({{4, 4}}).settled("SAND").build();
    const auto [X, y] = build_hedonic_design(
        {make_sale(eth, 10), make_sale(mint, 12), make_sale(sand2, 11)},
        no_winsor_spec());

    REQUIRE(X.column_labels.back() == "settle:SAND");
    const Eigen::Index primary_col = X.cols() - 2;
    CHECK(X.column_labels[static_cast<std::size_t>(primary_col)] == "primary_sale");
    CHECK(X.values(1, primary_col) == 1.0);
    CHECK(X.values(1, X.cols() - 1) == 1.0);
    CHECK(X.values(0, primary_col) == 0.0);
    CHECK(X.values(0, X.cols() - 1) == 0.0);
    CHECK(X.values(2, primary_col) == 0.0);
    CHECK(X.values(2, X.cols() - 1) == 1.0);
}

TEST_CASE("rare settlement tokens fold into OTHER") {
    std::vector<DenominatedSale> sales;
    for (int i = 0; i < 4; ++i)
        sales.push_back(make_sale(
            TxBuilder{}.id("E" + std::to_string(i)).parcels({{i, 0}}).build(), 10 + i));
    sales.push_back(make_sale(
        TxBuilder{}.id("X").parcels({{9, 9}}).settled("USDC").build(), 9));
    const auto [X, y] = build_hedonic_design(sales, no_winsor_spec());
    CHECK(X.column_labels.back() == std::string("settle:") + kOtherTokenSymbol);
}

TEST_CASE("age zero enters as a zero regressor") {
    const Transaction young = TxBuilder{}.build();
    CHECK(young.age_days == 0);
    const Transaction old =
        TxBuilder{}.id("B").parcels({{2, 2}}).minted("2020-12-28").build();
    const auto [X, y] =
        build_hedonic_design({make_sale(young, 10), make_sale(old, 12)}, no_winsor_spec());
    CHECK(X.values(0, 2) == 0.0);
    CHECK(X.values(1, 2) == doctest::Approx(std::log(8.0)));  // 7 days + 1
}

TEST_CASE("empty input raises EmptyAfterFilter") {
    CHECK_THROWS_AS(build_hedonic_design({}, no_winsor_spec()), EmptyAfterFilter);
}

TEST_CASE("all sales in one week produce a single unit index point") {
    // Varied lots and ages keep the one-week design full-rank.
    std::vector<DenominatedSale> sales;
    sales.push_back(make_sale(TxBuilder{}.id("A").parcels({{0, 0}, {0, 1}}).build(), 21));
    sales.push_back(make_sale(TxBuilder{}.id("B").parcels({{5, 5}}).build(), 10));
    sales.push_back(
        make_sale(TxBuilder{}.id("C").parcels({{7, 7}}).minted("2020-12-01").build(), 11));
    sales.push_back(make_sale(
        TxBuilder{}.id("D").parcels({{9, 1}, {9, 2}, {8, 1}}).minted("2020-11-01").build(),
        33));

    const HedonicFit fit = hedonic_index(sales, no_winsor_spec());
    REQUIRE(fit.index.points.size() == 1);
    CHECK(fit.index.points[0].week == WeekId{2021, 1});
    CHECK(fit.index.points[0].level == 1.0);
    CHECK(fit.index.points[0].n_obs == 4);
}

TEST_CASE("zero-noise synthetic market is recovered exactly") {
    SynthConfig cfg = SynthConfig::defaults();
    cfg.seed = 91;
    cfg.n_weeks = 12;
    cfg.n_bundles = 80;
    cfg.sales_per_week = 30;
    cfg.max_lot = 6;
    cfg.index_weekly_vol = 0.08;
    cfg.lot_elasticity = 0.95;
    cfg.age_coefficient = -0.02;
    cfg.primary_discount = -0.35;
    cfg.settlement_premia = {{"SAND", 0.04}, {"WETH", -0.30}};

    const SynthMarket market = generate_market(cfg);
    const auto pipeline = run_pipeline(market);
    REQUIRE(pipeline.agg.rejected.empty());

    for (const Token& denom : {Token::usd(), Token("ETH"), Token("SAND")}) {
        const auto sales = convert_all(pipeline.agg.transactions, denom, pipeline.prices);
        const HedonicFit fit = hedonic_index(sales, no_winsor_spec(denom));

        CHECK(fit.regression.adj_r_squared == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(max_log_level_error(fit.index, market.truth, denom.symbol()) < 1e-8);
        CHECK(fit.regression.coefficient(kLnLotSizeLabel) ==
              doctest::Approx(cfg.lot_elasticity).epsilon(1e-8));
        CHECK(fit.regression.coefficient(kLnAgeLabel) ==
              doctest::Approx(cfg.age_coefficient).epsilon(1e-8));
        CHECK(fit.regression.coefficient(kPrimarySaleLabel) ==
              doctest::Approx(cfg.primary_discount).epsilon(1e-8));
        CHECK(fit.regression.coefficient(std::string(kSettleLabelPrefix) + "SAND") ==
              doctest::Approx(0.04).epsilon(1e-8));
        CHECK(fit.regression.coefficient(std::string(kSettleLabelPrefix) + "WETH") ==
              doctest::Approx(-0.30).epsilon(1e-8));
    }
}

TEST_CASE("uniform price scaling moves only the week dummies") {
    SynthConfig cfg = SynthConfig::defaults();
    cfg.seed = 17;
    cfg.n_weeks = 8;
    cfg.n_bundles = 50;
    cfg.sales_per_week = 25;
    cfg.noise_base_var = 0.04;
    cfg.lot_elasticity = 1.0;
    cfg.primary_discount = -0.3;

    const auto pipeline = run_pipeline(generate_market(cfg));
    const auto sales = convert_all(pipeline.agg.transactions, Token::usd(), pipeline.prices);

    std::vector<DenominatedSale> scaled = sales;
    for (auto& s : scaled) {
        s.price *= 10.0;
        s.log_price = std::log(s.price);
    }

    HedonicSpec spec = no_winsor_spec();
    spec.winsor = WinsorBounds{0.01, 0.99};
    const HedonicFit base = hedonic_index(sales, spec);
    const HedonicFit shifted = hedonic_index(scaled, spec);

    REQUIRE(base.index.points.size() == shifted.index.points.size());
    for (std::size_t i = 0; i < base.index.points.size(); ++i)
        CHECK(base.index.points[i].level ==
              doctest::Approx(shifted.index.points[i].level).epsilon(1e-10));
    for (std::size_t i = 0; i < base.regression.labels.size(); ++i) {
        if (base.regression.labels[i].rfind(kWeekLabelPrefix, 0) == 0) continue;
        CHECK(base.regression.coefficients(static_cast<Eigen::Index>(i)) ==
              doctest::Approx(shifted.regression.coefficients(static_cast<Eigen::Index>(i)))
                  .epsilon(1e-10));
    }
}

TEST_CASE("constant exchange rates leave the index unchanged") {
    SynthConfig cfg = SynthConfig::defaults();
    cfg.seed = 33;
    cfg.n_weeks = 6;
    cfg.n_bundles = 40;
    cfg.sales_per_week = 20;
    cfg.noise_base_var = 0.01;
    // Freeze every token's path so settlement->target rates are constant.
    for (auto& t : cfg.tokens) t.weekly_vol = 0.0;

    const auto pipeline = run_pipeline(generate_market(cfg));
    const auto usd_sales =
        convert_all(pipeline.agg.transactions, Token::usd(), pipeline.prices);
    const auto eth_sales =
        convert_all(pipeline.agg.transactions, Token("ETH"), pipeline.prices);
    REQUIRE(usd_sales.size() == eth_sales.size());

    const HedonicFit in_usd = hedonic_index(usd_sales, no_winsor_spec());
    const HedonicFit in_eth = hedonic_index(eth_sales, no_winsor_spec(Token("ETH")));

    REQUIRE(in_usd.index.points.size() == in_eth.index.points.size());
    for (std::size_t i = 0; i < in_usd.index.points.size(); ++i)
        CHECK(in_usd.index.points[i].level ==
              doctest::Approx(in_eth.index.points[i].level).epsilon(1e-10));
}

TEST_CASE("settlement premia report order and the zero-SE sentinel") {
    const Transaction eth = TxBuilder{}.id("A").build();
    const Transaction weth =
        TxBuilder{}.id("B").parcels({{1, 1}}).settled("WETH").build();
    const Transaction weth2 =
        TxBuilder{}.id("C").parcels({{2, 2}}).settled("WETH").build();
    const Transaction sand =
        TxBuilder{}.id("D").parcels({{3, 3}}).settled("SAND").build();
    const Transaction sand2 =
        TxBuilder{}.id("E").parcels({{4, 4}}).settled("SAND").build();
    const Transaction eth_lot2 = TxBuilder{}.id("F").parcels({{5, 5}, {5, 6}}).build();
    const Transaction eth_aged =
        TxBuilder{}.id("G").parcels({{7, 7}}).minted("2020-12-28").build();

    // Exactly determined system: zero residuals, zero robust SEs.
    const std::vector<DenominatedSale> sales = {
        make_sale(eth, 10),  make_sale(weth, 7),      make_sale(weth2, 7),
        make_sale(sand, 11), make_sale(sand2, 11),    make_sale(eth_lot2, 25),
        make_sale(eth_aged, 9)};
    const HedonicFit fit = hedonic_index(sales, no_winsor_spec());

    const auto rows = settlement_premia(fit.regression);
    REQUIRE(rows.size() >= 4);
    CHECK(rows[0].term == kLnLotSizeLabel);
    CHECK(rows[1].term == kLnAgeLabel);
    CHECK(rows[2].term == "settle:SAND");
    CHECK(rows[3].term == "settle:WETH");

    for (const auto& row : rows) {
        if (row.robust_se == 0.0)
            CHECK(std::isinf(row.t_stat));
    }
    // SAND premium is positive, WETH discount negative; sentinel signs agree.
    CHECK(rows[2].estimate > 0.0);
    CHECK(rows[3].estimate < 0.0);
    CHECK(rows[2].t_stat > 0.0);
    CHECK(rows[3].t_stat < 0.0);

    CHECK_THROWS_AS(fit.regression.coefficient("settle:DOGE"), MissingTerm);
}

TEST_CASE("indices rebase to any observed week and count gaps") {
    PriceIndex index;
    index.base_week = WeekId{2021, 1};
    index.points = {IndexPoint{WeekId{2021, 1}, 1.0, 3},
                    IndexPoint{WeekId{2021, 2}, 2.0, 4},
                    IndexPoint{WeekId{2021, 5}, 4.0, 2}};
    CHECK(index.gap_weeks() == 2);  // weeks 3 and 4 unobserved

    const PriceIndex rebased = index.rebased(WeekId{2021, 2});
    CHECK(rebased.base_week == WeekId{2021, 2});
    CHECK(rebased.points[0].level == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rebased.points[1].level == 1.0);
    CHECK(rebased.points[2].level == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rebased.points[1].n_obs == 4);
    CHECK(index.max_level() == 4.0);

    CHECK_THROWS_AS(index.rebased(WeekId{2021, 3}), MissingTerm);
}

TEST_CASE("missing price drops are counted during conversion") {
    PriceTable table;
    add_constant_prices(table, "ETH", 2000.0, "2021-01-04", 14);
    add_constant_prices(table, "SAND", 1.0, "2021-01-11", 7);  // second week only

    const std::vector<Transaction> txs = {
        TxBuilder{}.id("A").build(),
        TxBuilder{}.id("B").parcels({{1, 1}}).at("2021-01-12T00:00:00Z").build()};

    ConversionDrops drops;
    const auto sand_sales = convert_all(txs, Token("SAND"), table, &drops);
    CHECK(sand_sales.size() == 1);
    CHECK(drops.missing_price == 1);

    const auto usd_sales = convert_all(txs, Token::usd(), table, &drops);
    CHECK(usd_sales.size() == 2);
    CHECK(drops.missing_price == 0);
}
