#include "landex/hedonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace landex {

namespace {

// Table order for settlement dummies; anything else alphabetical, OTHER last.
int settlement_rank(const std::string& symbol) {
    if (symbol == "SAND") return 0;
    if (symbol == "WETH") return 1;
    if (symbol == "DAI") return 2;
    if (symbol == "USDC") return 3;
    if (symbol == kOtherTokenSymbol) return 5;
    return 4;
}

bool settlement_order(const std::string& a, const std::string& b) {
    const int ra = settlement_rank(a), rb = settlement_rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

}  // namespace

PriceIndex PriceIndex::rebased(const WeekId& base) const {
    const auto it = std::find_if(points.begin(), points.end(),
                                 [&base](const IndexPoint& p) { return p.week == base; });
    if (it == points.end())
        throw MissingTerm("index has no point at week " + base.label());
    PriceIndex out;
    out.base_week = base;
    out.points.reserve(points.size());
    const double base_level = it->level;
    for (const auto& p : points)
        out.points.push_back(
            IndexPoint{p.week, p.week == base ? 1.0 : p.level / base_level, p.n_obs});
    return out;
}

double PriceIndex::max_level() const {
    double best = 0.0;
    for (const auto& p : points) best = std::max(best, p.level);
    return best;
}

int PriceIndex::gap_weeks() const {
    if (points.size() < 2) return 0;
    const std::int64_t span =
        week_serial(points.back().week) - week_serial(points.front().week) + 1;
    return static_cast<int>(span - static_cast<std::int64_t>(points.size()));
}

std::vector<DenominatedSale> convert_all(const std::vector<Transaction>& txs,
                                         const Token& denomination,
                                         const PriceTable& table,
                                         ConversionDrops* drops) {
    std::vector<DenominatedSale> sales;
    sales.reserve(txs.size());
    ConversionDrops local;
    for (const auto& tx : txs) {
        try {
            sales.push_back(convert(tx, denomination, table));
        } catch (const MissingPrice&) {
            ++local.missing_price;
        } catch (const ZeroPrice&) {
            ++local.zero_price;
        }
    }
    if (drops) *drops = local;
    return sales;
}

std::pair<DesignMatrix, Eigen::VectorXd> build_hedonic_design(
    const std::vector<DenominatedSale>& sales, const HedonicSpec& spec) {
    if (sales.empty())
        throw EmptyAfterFilter("no priceable sales in denomination " +
                               spec.denomination.symbol());

    const Eigen::Index n = static_cast<Eigen::Index>(sales.size());

    // Winsorize price levels, then take logs for the response.
    std::vector<double> prices;
    prices.reserve(sales.size());
    for (const auto& s : sales) prices.push_back(s.price);
    const std::vector<double> clamped = winsorize(prices, spec.winsor);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
        y(i) = std::log(clamped[static_cast<std::size_t>(i)]);

    // Week dummies in chronological order.
    std::map<std::int64_t, Eigen::Index> week_col;
    for (const auto& s : sales)
        week_col.emplace(week_serial(week_of(s.source.timestamp)), 0);
    {
        Eigen::Index col = 0;
        for (auto& [serial, index] : week_col) index = col++;
    }
    const Eigen::Index n_weeks = static_cast<Eigen::Index>(week_col.size());

    // Settlement dummies: count occurrences, fold rare tokens into OTHER,
    // omit the reference category. The omitted token never folds; it is the
    // reference no matter how thin it is.
    std::map<std::string, int> token_counts;
    for (const auto& s : sales) ++token_counts[s.source.settlement.symbol()];
    auto effective_symbol = [&](const Token& token) -> std::string {
        if (token == spec.omitted_settlement) return token.symbol();
        const auto it = token_counts.find(token.symbol());
        if (it != token_counts.end() && it->second < spec.min_token_count)
            return kOtherTokenSymbol;
        return token.symbol();
    };
    std::vector<std::string> settle_symbols;
    for (const auto& [symbol, count] : token_counts) {
        if (symbol == spec.omitted_settlement.symbol()) continue;
        const std::string eff =
            count < spec.min_token_count ? kOtherTokenSymbol : symbol;
        if (std::find(settle_symbols.begin(), settle_symbols.end(), eff) ==
            settle_symbols.end())
            settle_symbols.push_back(eff);
    }
    std::sort(settle_symbols.begin(), settle_symbols.end(), settlement_order);
    std::map<std::string, Eigen::Index> settle_col;
    for (std::size_t i = 0; i < settle_symbols.size(); ++i)
        settle_col[settle_symbols[i]] = static_cast<Eigen::Index>(i);

    bool any_primary = false, any_secondary = false;
    for (const auto& s : sales) {
        (s.source.sale_kind == SaleKind::Primary ? any_primary : any_secondary) = true;
    }
    const bool with_primary_dummy = any_primary && any_secondary;

    const Eigen::Index k = n_weeks + 2 + (with_primary_dummy ? 1 : 0) +
                           static_cast<Eigen::Index>(settle_symbols.size());
    DesignMatrix X;
    X.values = Eigen::MatrixXd::Zero(n, k);
    X.column_labels.reserve(static_cast<std::size_t>(k));
    for (const auto& [serial, index] : week_col)
        X.column_labels.push_back(std::string(kWeekLabelPrefix) +
                                  week_from_serial(serial).label());
    X.column_labels.push_back(kLnLotSizeLabel);
    X.column_labels.push_back(kLnAgeLabel);
    if (with_primary_dummy) X.column_labels.push_back(kPrimarySaleLabel);
    for (const auto& symbol : settle_symbols)
        X.column_labels.push_back(std::string(kSettleLabelPrefix) + symbol);

    const Eigen::Index lot_col = n_weeks;
    const Eigen::Index age_col = n_weeks + 1;
    const Eigen::Index primary_col = n_weeks + 2;
    const Eigen::Index settle_base = primary_col + (with_primary_dummy ? 1 : 0);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = sales[static_cast<std::size_t>(i)];
        X.values(i, week_col.at(week_serial(week_of(s.source.timestamp)))) = 1.0;
        X.values(i, lot_col) = std::log(static_cast<double>(s.source.lot_size));
        X.values(i, age_col) = std::log(static_cast<double>(s.source.age_days) + 1.0);
        if (with_primary_dummy && s.source.sale_kind == SaleKind::Primary)
            X.values(i, primary_col) = 1.0;
        const std::string eff = effective_symbol(s.source.settlement);
        const auto it = settle_col.find(eff);
        if (it != settle_col.end()) X.values(i, settle_base + it->second) = 1.0;
    }
    return {std::move(X), std::move(y)};
}

HedonicFit hedonic_index(const std::vector<DenominatedSale>& sales,
                         const HedonicSpec& spec) {
    auto [X, y] = build_hedonic_design(sales, spec);
    RegressionResult fit = ols(X, y);

    std::map<std::int64_t, int> week_obs;
    for (const auto& s : sales) ++week_obs[week_serial(week_of(s.source.timestamp))];

    PriceIndex index;
    const std::string prefix = kWeekLabelPrefix;
    std::vector<std::pair<WeekId, double>> deltas;
    for (std::size_t i = 0; i < fit.labels.size(); ++i) {
        if (fit.labels[i].rfind(prefix, 0) != 0) continue;
        deltas.emplace_back(parse_week(fit.labels[i].substr(prefix.size())),
                            fit.coefficients(static_cast<Eigen::Index>(i)));
    }
    // Columns were laid out chronologically, so deltas already are.
    index.base_week = deltas.front().first;
    const double base_delta = deltas.front().second;
    for (const auto& [week, delta] : deltas) {
        const double level = week == index.base_week ? 1.0 : std::exp(delta - base_delta);
        index.points.push_back(IndexPoint{week, level, week_obs.at(week_serial(week))});
    }
    return HedonicFit{std::move(index), std::move(fit)};
}

std::vector<PremiumRow> settlement_premia(const RegressionResult& result) {
    std::vector<PremiumRow> rows;
    auto push = [&rows, &result](const std::string& label) {
        const double est = result.coefficient(label);
        const double se = result.robust_se_of(label);
        double t = 0.0;
        if (se > 0.0) {
            t = est / se;
        } else {
            t = est < 0.0 ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
        }
        rows.push_back(PremiumRow{label, est, se, t});
    };

    push(kLnLotSizeLabel);
    push(kLnAgeLabel);
    const auto& labels = result.labels;
    if (std::find(labels.begin(), labels.end(), kPrimarySaleLabel) != labels.end())
        push(kPrimarySaleLabel);

    std::vector<std::string> settle_symbols;
    const std::string prefix = kSettleLabelPrefix;
    for (const auto& label : labels)
        if (label.rfind(prefix, 0) == 0) settle_symbols.push_back(label.substr(prefix.size()));
    std::sort(settle_symbols.begin(), settle_symbols.end(), settlement_order);
    for (const auto& symbol : settle_symbols) push(prefix + symbol);
    return rows;
}

}  // namespace landex
