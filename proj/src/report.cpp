#include "landex/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace landex {

std::string format_number(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void OutputBundle::add(const std::string& filename, std::string content) {
    files_[filename] = std::move(content);
}

void OutputBundle::write_all(const std::string& out_dir) const {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : files_) {
        const auto path = std::filesystem::path(out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        out << content;
    }
}

std::string index_csv(const PriceIndex& index) {
    std::ostringstream out;
    out << "iso_year,iso_week,level,n_obs\n";
    for (const auto& p : index.points)
        out << p.week.iso_year << ',' << p.week.iso_week << ',' << format_number(p.level)
            << ',' << p.n_obs << '\n';
    return out.str();
}

std::string coefs_csv(const std::vector<PremiumRow>& rows) {
    std::ostringstream out;
    out << "term,estimate,robust_se,t_stat\n";
    for (const auto& r : rows)
        out << r.term << ',' << format_number(r.estimate) << ','
            << format_number(r.robust_se) << ',' << format_number(r.t_stat) << '\n';
    return out.str();
}

std::string summary_csv(const SummaryStats& s) {
    std::ostringstream out;
    out << "stat,value\n";
    out << "n," << s.n << '\n';
    out << "mean," << format_number(s.mean) << '\n';
    out << "std_dev," << format_number(s.std_dev) << '\n';
    out << "skewness," << format_number(s.skewness) << '\n';
    out << "kurtosis," << format_number(s.kurtosis) << '\n';
    out << "p5," << format_number(s.p5) << '\n';
    out << "p50," << format_number(s.p50) << '\n';
    out << "p95," << format_number(s.p95) << '\n';
    return out.str();
}

std::string series_csv(const WeeklySeries& series) {
    std::ostringstream out;
    out << "iso_year,iso_week,value\n";
    for (const auto& p : series)
        out << p.week.iso_year << ',' << p.week.iso_week << ',' << format_number(p.value)
            << '\n';
    return out.str();
}

std::string bundles_csv(const std::vector<Transaction>& txs) {
    std::ostringstream out;
    out << "tx_id,timestamp,lot_size,bundle_hash,price_amount,token,sale_type,mint_date,"
           "age_days\n";
    for (const auto& tx : txs)
        out << tx.tx_id << ',' << format_instant(tx.timestamp) << ',' << tx.lot_size << ','
            << bundle_hash_hex(tx.bundle) << ',' << tx.price_amount.to_string() << ','
            << tx.settlement.symbol() << ',' << to_string(tx.sale_kind) << ','
            << format_date(tx.mint_date) << ',' << tx.age_days << '\n';
    return out.str();
}

std::vector<MoicRow> moic_rows(const std::vector<RepeatSalePair>& pairs,
                               const Token& denomination, const PriceTable& table,
                               int* n_unpriceable) {
    std::vector<MoicRow> rows;
    rows.reserve(pairs.size());
    int dropped = 0;
    for (const auto& pair : pairs) {
        try {
            rows.push_back(MoicRow{bundle_hash_hex(pair.buy.bundle), pair.buy.timestamp,
                                   pair.sell.timestamp, pair.hold_weeks,
                                   moic(pair, denomination, table)});
        } catch (const MissingPrice&) {
            ++dropped;
        } catch (const ZeroPrice&) {
            ++dropped;
        }
    }
    if (n_unpriceable) *n_unpriceable = dropped;
    return rows;
}

std::string moic_csv(const std::vector<MoicRow>& rows) {
    std::ostringstream out;
    out << "bundle_hash,buy_ts,sell_ts,hold_weeks,moic\n";
    for (const auto& r : rows)
        out << r.bundle_hash << ',' << format_instant(r.buy_ts) << ','
            << format_instant(r.sell_ts) << ',' << r.hold_weeks << ','
            << format_number(r.moic) << '\n';
    return out.str();
}

std::string diagnostics_text(const Token& denomination,
                             const CaseShillerDiagnostics& d) {
    std::ostringstream out;
    out << "case-shiller diagnostics [" << denomination.symbol() << "]\n";
    out << "  pairs in:            " << d.n_pairs_input << '\n';
    out << "  dropped unpriceable: " << d.n_unpriceable << '\n';
    out << "  dropped same-week:   " << d.n_same_week << '\n';
    out << "  pairs used:          " << d.n_used << '\n';
    out << "  step-2 intercept:    " << format_number(d.step2_intercept) << '\n';
    out << "  step-2 slope:        " << format_number(d.step2_slope) << '\n';
    out << "  weight range:        [" << format_number(d.weight_min) << ", "
        << format_number(d.weight_max) << "]\n";
    out << "  uniform weights:     " << (d.uniform_weights ? "yes" : "no") << '\n';
    return out.str();
}

WeeklySeries index_series(const PriceIndex& index) {
    WeeklySeries out;
    out.reserve(index.points.size());
    for (const auto& p : index.points) out.push_back(WeekPoint{p.week, p.level});
    return out;
}

std::optional<double> correlation_or_null(const WeeklySeries& a, const WeeklySeries& b) {
    try {
        return pearson(a, b);
    } catch (const DataError&) {
        return std::nullopt;
    }
}

namespace {

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string corr_text(const std::optional<double>& c) {
    return c ? fmt4(*c) : std::string("n/a");
}

void summary_row(std::ostringstream& out, const std::string& name,
                 const SummaryStats& s) {
    out << "| " << name << " | " << s.n << " | " << fmt4(s.mean) << " | "
        << fmt4(s.std_dev) << " | " << fmt4(s.skewness) << " | " << fmt4(s.kurtosis)
        << " | " << fmt4(s.p5) << " | " << fmt4(s.p50) << " | " << fmt4(s.p95) << " |\n";
}

}  // namespace

std::string report_markdown(const ReportInputs& in) {
    std::ostringstream out;
    out << "# LAND market report\n\n";

    out << "## Sample accounting\n\n";
    out << "- parcel rows parsed: " << in.parsed_rows << "\n";
    out << "- bundle transactions: " << in.accepted_transactions
        << " (non-contiguous groups rejected: " << in.rejected_groups << ")\n";
    out << "- repeat-sale pairs: " << in.pairs.size() << "\n";
    for (const auto& d : in.denoms)
        out << "- [" << d.denomination.symbol() << "] priceable sales: " << d.n_priceable
            << " (missing price: " << d.drops.missing_price
            << ", zero price: " << d.drops.zero_price << ")\n";
    out << '\n';

    out << "## Settlement mix\n\n";
    out << "| token | primary | secondary | total |\n";
    out << "|---|---|---|---|\n";
    {
        std::map<std::string, std::pair<int, int>> mix;
        for (const auto& tx : in.transactions) {
            auto& slot = mix[tx.settlement.symbol()];
            (tx.sale_kind == SaleKind::Primary ? slot.first : slot.second) += 1;
        }
        for (const auto& [symbol, counts] : mix)
            out << "| " << symbol << " | " << counts.first << " | " << counts.second
                << " | " << (counts.first + counts.second) << " |\n";
    }
    out << '\n';

    out << "## Transaction characteristics\n\n";
    out << "| series | n | mean | std | skew | kurt | p5 | p50 | p95 |\n";
    out << "|---|---|---|---|---|---|---|---|---|\n";
    {
        std::vector<double> lot, age;
        for (const auto& tx : in.transactions) {
            lot.push_back(static_cast<double>(tx.lot_size));
            age.push_back(static_cast<double>(tx.age_days));
        }
        const auto usd_denom =
            std::find_if(in.denoms.begin(), in.denoms.end(),
                         [](const DenomReport& d) { return d.denomination.is_usd(); });
        if (usd_denom != in.denoms.end() && usd_denom->n_priceable >= 2) {
            std::vector<double> usd;
            ConversionDrops drops;
            for (const auto& sale :
                 convert_all(in.transactions, Token::usd(), in.prices, &drops))
                usd.push_back(sale.price);
            summary_row(out, "USD price (winsorized)",
                        summarize(winsorize(usd, in.winsor)));
        }
        if (lot.size() >= 2) summary_row(out, "lot size", summarize(lot));
        if (age.size() >= 2) summary_row(out, "age (days)", summarize(age));
    }
    out << '\n';

    for (const auto& d : in.denoms) {
        out << "## Denomination " << d.denomination.symbol() << "\n\n";
        if (d.hedonic) {
            out << "### Hedonic regression\n\n";
            out << "- observations: " << d.hedonic->regression.n_obs << "\n";
            out << "- adj R-squared: " << fmt4(d.hedonic->regression.adj_r_squared)
                << "\n\n";
            out << "| term | estimate | robust se | t |\n";
            out << "|---|---|---|---|\n";
            for (const auto& row : settlement_premia(d.hedonic->regression))
                out << "| " << row.term << " | " << fmt4(row.estimate) << " | "
                    << fmt4(row.robust_se) << " | " << fmt4(row.t_stat) << " |\n";
            out << "\n- all-sales index max level: "
                << fmt4(d.hedonic->index.max_level()) << " (base week "
                << d.hedonic->index.base_week.label() << ", gap weeks "
                << d.hedonic->index.gap_weeks() << ")\n";
            const auto sand_price = weekly_mean_price(in.prices, Token("SAND"));
            if (!sand_price.empty())
                out << "- correlation with weekly SAND price: "
                    << corr_text(correlation_or_null(index_series(d.hedonic->index),
                                                     sand_price))
                    << "\n";
        } else {
            out << "### Hedonic regression\n\nnot available: " << d.hedonic_error
                << "\n";
        }
        out << '\n';

        if (d.case_shiller) {
            out << "### Repeat-sales (Case-Shiller) index\n\n";
            out << "- pairs used: " << d.case_shiller->diagnostics.n_used << "\n";
            out << "- index max level: " << fmt4(d.case_shiller->index.max_level())
                << " (base week " << d.case_shiller->index.base_week.label() << ")\n";
            if (d.hedonic)
                out << "- correlation with all-sales index: "
                    << corr_text(correlation_or_null(
                           index_series(d.case_shiller->index),
                           index_series(d.hedonic->index)))
                    << "\n";
            out << "- step-2 slope: " << fmt4(d.case_shiller->diagnostics.step2_slope)
                << " (intercept " << fmt4(d.case_shiller->diagnostics.step2_intercept)
                << ")\n";
        } else {
            out << "### Repeat-sales (Case-Shiller) index\n\nnot available: "
                << d.case_shiller_error << "\n";
        }
        out << '\n';

        if (d.moics.size() >= 2) {
            std::vector<double> values;
            values.reserve(d.moics.size());
            for (const auto& row : d.moics) values.push_back(row.moic);
            out << "### Investment multiples (MOIC)\n\n";
            out << "| series | n | mean | std | skew | kurt | p5 | p50 | p95 |\n";
            out << "|---|---|---|---|---|---|---|---|---|\n";
            summary_row(out, "MOIC " + d.denomination.symbol(), summarize(values));
            out << '\n';
        }
    }

    out << "## Token price relationships\n\n";
    {
        const auto eth = weekly_mean_price(in.prices, Token("ETH"));
        const auto sand = weekly_mean_price(in.prices, Token("SAND"));
        if (!eth.empty() && !sand.empty())
            out << "- weekly ETH/SAND price correlation: "
                << corr_text(correlation_or_null(eth, sand)) << "\n";
        const auto share = sand_settlement_share(in.transactions);
        const auto base = earliest_common_week(in.prices, Token("ETH"), Token("SAND"));
        if (!share.empty() && base) {
            const auto rel =
                relative_price_index(Token("ETH"), Token("SAND"), in.prices, *base);
            out << "- correlation of SAND settlement share with SAND/ETH relative "
                   "price: "
                << corr_text(correlation_or_null(share, rel)) << "\n";
        }
    }
    return out.str();
}

}  // namespace landex
