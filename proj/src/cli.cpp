#include "landex/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "landex/report.hpp"
#include "landex/synth.hpp"

namespace landex {
namespace cli {

namespace {

struct RunConfig {
    std::string tx_path;
    std::string prices_path;
    std::vector<std::string> denoms = {"USD"};
    double winsor_low = 0.001;
    double winsor_high = 0.999;
    std::string out_dir = ".";
    std::string row_price_mode = "per-parcel";
    bool strict_tokens = false;
    std::string base_week;  // optional "YYYY-WW" index base override
    int min_token_count = 2;
};

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool needs_prices) {
    cmd->fallthrough(true);  // lets the app-level --config follow the subcommand
    cmd->add_option("--tx", cfg.tx_path, "transactions.csv path")->required();
    auto* prices = cmd->add_option("--prices", cfg.prices_path, "prices.csv path");
    if (needs_prices) prices->required();
    cmd->add_option("--out-dir", cfg.out_dir, "output directory");
    cmd->add_option("--row-price-mode", cfg.row_price_mode,
                    "per-parcel (sum rows) or per-bundle (first row)")
        ->check(CLI::IsMember({"per-parcel", "per-bundle"}));
    cmd->add_flag("--strict-tokens", cfg.strict_tokens,
                  "reject settlement tokens outside the known registry");
}

void add_denom_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--denom", cfg.denoms,
                    "denominations to compute (repeatable; USD or a token symbol)");
    cmd->add_option("--winsor-low", cfg.winsor_low, "lower winsorization quantile");
    cmd->add_option("--winsor-high", cfg.winsor_high, "upper winsorization quantile");
    cmd->add_option("--base-week", cfg.base_week,
                    "index base week override, e.g. 2020-W33");
    cmd->add_option("--min-token-count", cfg.min_token_count,
                    "settlement tokens seen fewer times fold into OTHER");
}

struct LoadedData {
    std::vector<RawSaleRecord> raw;
    BundleAggregation bundles;
    PriceTable prices;
};

LoadedData load(const RunConfig& cfg, bool with_prices) {
    LoadedData data;
    std::ifstream tx_in(cfg.tx_path);
    if (!tx_in) throw DataError("cannot open transactions file '" + cfg.tx_path + "'");
    data.raw = parse_transactions(tx_in, ParseOptions{cfg.strict_tokens});
    data.bundles = aggregate_to_bundles(data.raw, cfg.row_price_mode == "per-bundle"
                                                      ? RowPriceMode::PerBundle
                                                      : RowPriceMode::PerParcel);
    if (with_prices) {
        std::ifstream price_in(cfg.prices_path);
        if (!price_in) throw DataError("cannot open price file '" + cfg.prices_path + "'");
        data.prices = parse_price_table(price_in);
    }
    return data;
}

void print_base_counts(const LoadedData& data) {
    std::cout << "parsed rows:         " << data.raw.size() << "\n";
    std::cout << "bundle transactions: " << data.bundles.transactions.size()
              << " (rejected non-contiguous groups: " << data.bundles.rejected.size()
              << ")\n";
}

// One denomination's full processing; pure, so denominations can run
// concurrently.
DenomReport process_denomination(const Token& denom, const LoadedData& data,
                                 const std::vector<RepeatSalePair>& pairs,
                                 const RunConfig& cfg) {
    DenomReport rep;
    rep.denomination = denom;

    const auto sales =
        convert_all(data.bundles.transactions, denom, data.prices, &rep.drops);
    rep.n_priceable = static_cast<int>(sales.size());

    HedonicSpec spec;
    spec.denomination = denom;
    spec.winsor = WinsorBounds{cfg.winsor_low, cfg.winsor_high};
    spec.min_token_count = cfg.min_token_count;
    try {
        rep.hedonic = hedonic_index(sales, spec);
        if (!cfg.base_week.empty()) {
            const WeekId base = parse_week(cfg.base_week);
            rep.hedonic->index = rep.hedonic->index.rebased(base);
        }
    } catch (const NumericError& e) {
        rep.hedonic_error = e.what();
        rep.hedonic_error_numeric = true;
    } catch (const std::exception& e) {
        rep.hedonic_error = e.what();
    }

    try {
        rep.case_shiller = case_shiller_index(pairs, denom, data.prices);
        if (!cfg.base_week.empty()) {
            const WeekId base = parse_week(cfg.base_week);
            rep.case_shiller->index = rep.case_shiller->index.rebased(base);
        }
    } catch (const NumericError& e) {
        rep.case_shiller_error = e.what();
        rep.case_shiller_error_numeric = true;
    } catch (const std::exception& e) {
        rep.case_shiller_error = e.what();
    }

    rep.moics = moic_rows(pairs, denom, data.prices, &rep.moic_unpriceable);
    return rep;
}

std::vector<DenomReport> process_all_denominations(
    const LoadedData& data, const std::vector<RepeatSalePair>& pairs,
    const RunConfig& cfg) {
    std::vector<std::future<DenomReport>> futures;
    futures.reserve(cfg.denoms.size());
    for (const auto& symbol : cfg.denoms) {
        const Token denom = symbol == "USD" ? Token::usd() : Token(symbol);
        futures.push_back(std::async(std::launch::async, process_denomination, denom,
                                     std::cref(data), std::cref(pairs), std::cref(cfg)));
    }
    std::vector<DenomReport> reports;
    reports.reserve(futures.size());
    for (auto& f : futures) reports.push_back(f.get());
    return reports;
}

// Rethrown per-denomination failures: hedonic and repeat subcommands fail
// hard, report degrades to prose.
void rethrow_denom_errors(const std::vector<DenomReport>& reports, bool hedonic,
                          bool repeat) {
    for (const auto& rep : reports) {
        struct Failure {
            bool enabled;
            const std::string& error;
            bool numeric;
        };
        for (const auto& f :
             {Failure{hedonic, rep.hedonic_error, rep.hedonic_error_numeric},
              Failure{repeat, rep.case_shiller_error, rep.case_shiller_error_numeric}}) {
            if (!f.enabled || f.error.empty()) continue;
            const std::string message = "[" + rep.denomination.symbol() + "] " + f.error;
            if (f.numeric) throw NumericError(message);
            throw DataError(message);
        }
    }
}

void print_denom_counts(const std::vector<DenomReport>& reports) {
    for (const auto& rep : reports) {
        std::cout << "[" << rep.denomination.symbol()
                  << "] priceable: " << rep.n_priceable
                  << " (missing price: " << rep.drops.missing_price
                  << ", zero price: " << rep.drops.zero_price << ")";
        if (rep.hedonic) {
            std::cout << " regressed: " << rep.hedonic->regression.n_obs;
            if (rep.hedonic->index.gap_weeks() > 0)
                std::cout << " index gap weeks: " << rep.hedonic->index.gap_weeks();
        }
        if (rep.case_shiller)
            std::cout << " cs pairs used: " << rep.case_shiller->diagnostics.n_used;
        std::cout << "\n";
    }
}

int cmd_ingest(const RunConfig& cfg) {
    const LoadedData data = load(cfg, false);
    OutputBundle out;
    out.add("bundles.csv", bundles_csv(data.bundles.transactions));
    out.write_all(cfg.out_dir);
    print_base_counts(data);
    std::cout << "wrote bundles.csv\n";
    return 0;
}

int cmd_hedonic(const RunConfig& cfg) {
    const LoadedData data = load(cfg, true);
    const auto pairs = match_repeat_sales(data.bundles.transactions);
    auto reports = process_all_denominations(data, pairs, cfg);
    rethrow_denom_errors(reports, true, false);

    OutputBundle out;
    for (const auto& rep : reports) {
        out.add("index_" + rep.denomination.symbol() + ".csv",
                index_csv(rep.hedonic->index));
        out.add("hedonic_coefs_" + rep.denomination.symbol() + ".csv",
                coefs_csv(settlement_premia(rep.hedonic->regression)));
    }
    out.write_all(cfg.out_dir);
    print_base_counts(data);
    print_denom_counts(reports);
    return 0;
}

int cmd_repeat(const RunConfig& cfg) {
    const LoadedData data = load(cfg, true);
    const auto pairs = match_repeat_sales(data.bundles.transactions);
    auto reports = process_all_denominations(data, pairs, cfg);
    rethrow_denom_errors(reports, false, true);

    OutputBundle out;
    for (const auto& rep : reports) {
        out.add("rs_index_" + rep.denomination.symbol() + ".csv",
                index_csv(rep.case_shiller->index));
        out.add("moic_" + rep.denomination.symbol() + ".csv", moic_csv(rep.moics));
        out.add("rs_diagnostics_" + rep.denomination.symbol() + ".txt",
                diagnostics_text(rep.denomination, rep.case_shiller->diagnostics));
    }
    out.write_all(cfg.out_dir);
    print_base_counts(data);
    std::cout << "repeat-sale pairs:   " << pairs.size() << "\n";
    print_denom_counts(reports);
    for (const auto& rep : reports)
        std::cout << diagnostics_text(rep.denomination, rep.case_shiller->diagnostics);
    return 0;
}

// Summary and series artifacts shared by the stats and report subcommands.
void add_stats_outputs(OutputBundle& out, const LoadedData& data, const RunConfig& cfg) {
    const auto& txs = data.bundles.transactions;

    std::vector<double> lot, age;
    for (const auto& tx : txs) {
        lot.push_back(static_cast<double>(tx.lot_size));
        age.push_back(static_cast<double>(tx.age_days));
    }
    if (lot.size() >= 2) out.add("summary_lot_size.csv", summary_csv(summarize(lot)));
    if (age.size() >= 2) out.add("summary_age_days.csv", summary_csv(summarize(age)));

    const WinsorBounds winsor{cfg.winsor_low, cfg.winsor_high};
    for (const auto& symbol : cfg.denoms) {
        const Token denom = symbol == "USD" ? Token::usd() : Token(symbol);
        ConversionDrops drops;
        std::vector<double> prices;
        for (const auto& sale : convert_all(txs, denom, data.prices, &drops))
            prices.push_back(sale.price);
        if (prices.size() >= 2)
            out.add("summary_price_" + denom.symbol() + ".csv",
                    summary_csv(summarize(winsorize(prices, winsor))));
    }

    const auto share = sand_settlement_share(txs);
    if (!share.empty()) out.add("series_sand_share.csv", series_csv(share));

    if (const auto base = earliest_common_week(data.prices, Token("ETH"), Token("SAND")))
        out.add("series_relprice_ETH_SAND.csv",
                series_csv(relative_price_index(Token("ETH"), Token("SAND"), data.prices,
                                                *base)));
}

int cmd_stats(const RunConfig& cfg) {
    const LoadedData data = load(cfg, true);
    OutputBundle out;
    add_stats_outputs(out, data, cfg);

    const auto share = sand_settlement_share(data.bundles.transactions);
    const auto eth_weekly = weekly_mean_price(data.prices, Token("ETH"));
    const auto sand_weekly = weekly_mean_price(data.prices, Token("SAND"));
    if (const auto it = out.files().find("series_relprice_ETH_SAND.csv");
        it != out.files().end() && !share.empty()) {
        if (const auto base =
                earliest_common_week(data.prices, Token("ETH"), Token("SAND"))) {
            const auto rel =
                relative_price_index(Token("ETH"), Token("SAND"), data.prices, *base);
            if (const auto c = correlation_or_null(share, rel))
                std::cout << "corr(sand share, SAND/ETH relative price): "
                          << format_number(*c) << "\n";
        }
    }
    if (const auto c = correlation_or_null(eth_weekly, sand_weekly))
        std::cout << "corr(weekly ETH price, weekly SAND price): " << format_number(*c)
                  << "\n";

    out.write_all(cfg.out_dir);
    print_base_counts(data);
    std::cout << "wrote " << out.files().size() << " stats files\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    const LoadedData data = load(cfg, true);
    const auto pairs = match_repeat_sales(data.bundles.transactions);
    auto reports = process_all_denominations(data, pairs, cfg);

    OutputBundle out;
    out.add("bundles.csv", bundles_csv(data.bundles.transactions));
    add_stats_outputs(out, data, cfg);
    for (const auto& rep : reports) {
        const std::string symbol = rep.denomination.symbol();
        if (rep.hedonic) {
            out.add("index_" + symbol + ".csv", index_csv(rep.hedonic->index));
            out.add("hedonic_coefs_" + symbol + ".csv",
                    coefs_csv(settlement_premia(rep.hedonic->regression)));
        }
        if (rep.case_shiller) {
            out.add("rs_index_" + symbol + ".csv", index_csv(rep.case_shiller->index));
            out.add("rs_diagnostics_" + symbol + ".txt",
                    diagnostics_text(rep.denomination, rep.case_shiller->diagnostics));
        }
        out.add("moic_" + symbol + ".csv", moic_csv(rep.moics));
    }

    ReportInputs inputs;
    inputs.parsed_rows = data.raw.size();
    inputs.accepted_transactions = data.bundles.transactions.size();
    inputs.rejected_groups = data.bundles.rejected.size();
    inputs.transactions = data.bundles.transactions;
    inputs.pairs = pairs;
    inputs.prices = data.prices;
    inputs.winsor = WinsorBounds{cfg.winsor_low, cfg.winsor_high};
    inputs.denoms = reports;
    out.add("report.md", report_markdown(inputs));

    out.write_all(cfg.out_dir);
    print_base_counts(data);
    std::cout << "repeat-sale pairs:   " << pairs.size() << "\n";
    print_denom_counts(reports);
    std::cout << "wrote " << out.files().size() << " files to " << cfg.out_dir << "\n";
    return 0;
}

struct SimulateConfig {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string config_path;
    std::string out_dir = ".";
};

int cmd_simulate(const SimulateConfig& sim) {
    SynthConfig cfg = sim.config_path.empty() ? SynthConfig::defaults()
                                              : SynthConfig::from_file(sim.config_path);
    if (sim.seed_given) cfg.seed = sim.seed;
    cfg.validate();

    const SynthMarket market = generate_market(cfg);
    OutputBundle out;
    out.add("transactions.csv", market.transactions_csv);
    out.add("prices.csv", market.prices_csv);
    out.add("truth.csv", truth_csv(market.truth));
    out.write_all(sim.out_dir);

    const auto rows = std::count(market.transactions_csv.begin(),
                                 market.transactions_csv.end(), '\n') - 1;
    std::cout << "generated rows:      " << rows << "\n";
    std::cout << "wrote transactions.csv, prices.csv, truth.csv to " << sim.out_dir
              << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Price indices and return statistics for bundled NFT parcel markets"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value file with one [subcommand] section per command");

    RunConfig cfg;
    SimulateConfig sim;

    auto* ingest = app.add_subcommand("ingest", "validate and echo bundle-level rows");
    add_common_options(ingest, cfg, false);

    auto* hedonic =
        app.add_subcommand("hedonic", "all-sales hedonic index and coefficient table");
    add_common_options(hedonic, cfg, true);
    add_denom_options(hedonic, cfg);

    auto* repeat =
        app.add_subcommand("repeat", "Case-Shiller repeat-sales index and MOIC table");
    add_common_options(repeat, cfg, true);
    add_denom_options(repeat, cfg);

    auto* stats = app.add_subcommand("stats", "summaries, shares, and correlations");
    add_common_options(stats, cfg, true);
    add_denom_options(stats, cfg);

    auto* report = app.add_subcommand("report", "run everything and write report.md");
    add_common_options(report, cfg, true);
    add_denom_options(report, cfg);

    auto* simulate =
        app.add_subcommand("simulate", "deterministic synthetic market with ground truth");
    auto* seed_opt = simulate->add_option("--seed", sim.seed, "generator seed");
    simulate->add_option("--config", sim.config_path,
                         "flat key=value generator parameters");
    simulate->add_option("--out-dir", sim.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            app.exit(e);
            return 0;
        }
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(cfg);
        if (hedonic->parsed()) return cmd_hedonic(cfg);
        if (repeat->parsed()) return cmd_repeat(cfg);
        if (stats->parsed()) return cmd_stats(cfg);
        if (report->parsed()) return cmd_report(cfg);
        if (simulate->parsed()) {
            sim.seed_given = seed_opt->count() > 0;
            return cmd_simulate(sim);
        }
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace cli
}  // namespace landex
