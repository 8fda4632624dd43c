#include "landex/repeat_sales.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "landex/ingest.hpp"

namespace landex {

std::vector<RepeatSalePair> match_repeat_sales(const std::vector<Transaction>& txs) {
    std::map<BundleKey, std::vector<const Transaction*>> by_bundle;
    for (const auto& tx : txs) by_bundle[tx.bundle].push_back(&tx);

    std::vector<RepeatSalePair> pairs;
    for (auto& [key, chain] : by_bundle) {
        std::sort(chain.begin(), chain.end(),
                  [](const Transaction* a, const Transaction* b) {
                      if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
                      return a->tx_id < b->tx_id;
                  });
        for (std::size_t i = 1; i < chain.size(); ++i) {
            if (chain[i]->sale_kind != SaleKind::Secondary) continue;
            const std::int64_t hold = week_serial(week_of(chain[i]->timestamp)) -
                                      week_serial(week_of(chain[i - 1]->timestamp));
            pairs.push_back(RepeatSalePair{*chain[i - 1], *chain[i], hold});
        }
    }
    return pairs;
}

double moic(const RepeatSalePair& pair, const Token& denomination,
            const PriceTable& table) {
    const double buy = convert(pair.buy, denomination, table).price;
    const double sell = convert(pair.sell, denomination, table).price;
    return sell / buy;
}

double dlog_price(const RepeatSalePair& pair, const Token& denomination,
                  const PriceTable& table) {
    const DenominatedSale buy = convert(pair.buy, denomination, table);
    const DenominatedSale sell = convert(pair.sell, denomination, table);
    return sell.log_price - buy.log_price;
}

BmnStage bmn_stage(const std::vector<RepeatSalePair>& pairs, const Token& denomination,
                   const PriceTable& table) {
    struct UsablePair {
        const RepeatSalePair* pair;
        double dlog;
        std::int64_t buy_week;
        std::int64_t sell_week;
    };

    BmnStage stage;
    stage.n_pairs_input = static_cast<int>(pairs.size());

    std::vector<UsablePair> usable;
    usable.reserve(pairs.size());
    for (const auto& pair : pairs) {
        double d = 0.0;
        try {
            d = dlog_price(pair, denomination, table);
        } catch (const MissingPrice&) {
            ++stage.n_unpriceable;
            continue;
        } catch (const ZeroPrice&) {
            ++stage.n_unpriceable;
            continue;
        }
        const std::int64_t bw = week_serial(week_of(pair.buy.timestamp));
        const std::int64_t sw = week_serial(week_of(pair.sell.timestamp));
        if (bw == sw) {
            ++stage.n_same_week;
            continue;
        }
        usable.push_back(UsablePair{&pair, d, bw, sw});
    }
    if (usable.empty())
        throw EmptyAfterFilter("no repeat-sale pairs span more than one week in " +
                               denomination.symbol());

    // Distinct weeks among remaining legs; the earliest is the base.
    std::map<std::int64_t, Eigen::Index> week_index;
    for (const auto& u : usable) {
        week_index.emplace(u.buy_week, 0);
        week_index.emplace(u.sell_week, 0);
    }
    {
        Eigen::Index next = 0;
        for (auto& [serial, idx] : week_index) idx = next++;
    }
    const std::int64_t base_serial = week_index.begin()->first;

    // The estimator only identifies weeks reachable from the base through
    // chains of pairs; verify connectivity up front and report components.
    {
        std::vector<Eigen::Index> parent(week_index.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&parent](Eigen::Index a) {
            while (parent[static_cast<std::size_t>(a)] != a) {
                parent[static_cast<std::size_t>(a)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
                a = parent[static_cast<std::size_t>(a)];
            }
            return a;
        };
        for (const auto& u : usable) {
            const Eigen::Index a = find(week_index.at(u.buy_week));
            const Eigen::Index b = find(week_index.at(u.sell_week));
            if (a != b) parent[static_cast<std::size_t>(a)] = b;
        }
        std::map<Eigen::Index, std::vector<std::string>> components;
        for (const auto& [serial, idx] : week_index)
            components[find(idx)].push_back(week_from_serial(serial).label());
        if (components.size() > 1) {
            std::ostringstream msg;
            msg << "repeat-sale week graph is disconnected; components:";
            for (const auto& [root, weeks] : components) {
                msg << " [";
                for (std::size_t i = 0; i < weeks.size(); ++i)
                    msg << (i ? " " : "") << weeks[i];
                msg << "]";
            }
            throw RankDeficient(msg.str());
        }
    }

    const Eigen::Index n = static_cast<Eigen::Index>(usable.size());
    const Eigen::Index k = static_cast<Eigen::Index>(week_index.size()) - 1;
    stage.design.values = Eigen::MatrixXd::Zero(n, k);
    for (const auto& [serial, idx] : week_index) {
        if (serial == base_serial) continue;
        stage.design.column_labels.push_back(week_from_serial(serial).label());
        stage.week_columns.push_back(week_from_serial(serial));
    }

    stage.response.resize(n);
    auto column_of = [&](std::int64_t serial) -> Eigen::Index {
        return week_index.at(serial) - 1;  // base week occupies slot 0
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& u = usable[static_cast<std::size_t>(i)];
        stage.response(i) = u.dlog;
        if (u.sell_week != base_serial)
            stage.design.values(i, column_of(u.sell_week)) += 1.0;
        if (u.buy_week != base_serial)
            stage.design.values(i, column_of(u.buy_week)) -= 1.0;
        stage.hold_weeks.push_back(static_cast<double>(u.sell_week - u.buy_week));
    }

    std::map<std::int64_t, int> legs;
    for (const auto& u : usable) {
        ++legs[u.buy_week];
        ++legs[u.sell_week];
    }
    stage.base_week = week_from_serial(base_serial);
    stage.leg_counts.push_back(legs.at(base_serial));
    for (const auto& week : stage.week_columns)
        stage.leg_counts.push_back(legs.at(week_serial(week)));

    stage.fit = ols(stage.design, stage.response);
    return stage;
}

VarianceFit variance_stage(const Eigen::VectorXd& residuals,
                           const std::vector<double>& hold_weeks) {
    if (static_cast<std::size_t>(residuals.size()) != hold_weeks.size())
        throw DimensionMismatch("residuals and holding periods differ in length");
    if (residuals.size() == 0) throw EmptyInput();

    const Eigen::Index n = residuals.size();
    const Eigen::VectorXd e2 = residuals.array().square();
    // Solver round-off leaves ~1e-16 residuals on exactly identified
    // systems; below this the first stage counts as perfect.
    constexpr double kPerfectFit = 1e-24;

    VarianceFit out;
    if (e2.maxCoeff() <= kPerfectFit) {
        out.predictions = Eigen::VectorXd::Ones(n);
        out.uniform = true;
        return out;
    }
    const bool all_holds_equal =
        std::all_of(hold_weeks.begin(), hold_weeks.end(),
                    [&](double h) { return h == hold_weeks.front(); });
    if (all_holds_equal || n < 2) {
        const double mean = e2.mean();
        out.predictions = Eigen::VectorXd::Constant(n, mean);
        out.intercept = mean;
        return out;
    }

    DesignMatrix X;
    X.values = Eigen::MatrixXd::Ones(n, 2);
    for (Eigen::Index i = 0; i < n; ++i)
        X.values(i, 1) = hold_weeks[static_cast<std::size_t>(i)];
    X.column_labels = {"intercept", "hold_weeks"};
    const RegressionResult fit = ols(X, e2);
    out.intercept = fit.coefficients(0);
    out.slope = fit.coefficients(1);

    Eigen::VectorXd fitted = X.values * fit.coefficients;
    double smallest_positive = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (fitted(i) > 0.0 &&
            (smallest_positive == 0.0 || fitted(i) < smallest_positive))
            smallest_positive = fitted(i);
    }
    const double floor_value = std::max(1e-8, smallest_positive * 1e-3);
    out.predictions = fitted.cwiseMax(floor_value);
    return out;
}

CaseShillerResult case_shiller_index(const std::vector<RepeatSalePair>& pairs,
                                     const Token& denomination,
                                     const PriceTable& table) {
    CaseShillerResult result;
    result.first_stage = bmn_stage(pairs, denomination, table);
    BmnStage& stage1 = result.first_stage;

    const VarianceFit step2 = variance_stage(stage1.fit.residuals, stage1.hold_weeks);
    const Eigen::VectorXd weights = step2.predictions.cwiseInverse();

    CaseShillerDiagnostics& diag = result.diagnostics;
    diag.n_pairs_input = stage1.n_pairs_input;
    diag.n_unpriceable = stage1.n_unpriceable;
    diag.n_same_week = stage1.n_same_week;
    diag.n_used = static_cast<int>(stage1.response.size());
    diag.step2_intercept = step2.intercept;
    diag.step2_slope = step2.slope;
    diag.weight_min = weights.minCoeff();
    diag.weight_max = weights.maxCoeff();
    diag.uniform_weights = step2.uniform;

    result.weighted_fit = wls(stage1.design, stage1.response, weights);

    PriceIndex index;
    index.base_week = stage1.base_week;
    index.points.push_back(IndexPoint{stage1.base_week, 1.0, stage1.leg_counts[0]});
    for (std::size_t j = 0; j < stage1.week_columns.size(); ++j) {
        index.points.push_back(
            IndexPoint{stage1.week_columns[j],
                       std::exp(result.weighted_fit.coefficients(static_cast<Eigen::Index>(j))),
                       stage1.leg_counts[j + 1]});
    }
    result.index = std::move(index);
    return result;
}

}  // namespace landex
