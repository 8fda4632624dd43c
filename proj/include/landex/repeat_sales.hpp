#ifndef LANDEX_REPEAT_SALES_HPP
#define LANDEX_REPEAT_SALES_HPP

#include <cstdint>
#include <vector>

#include "landex/market_model.hpp"
#include "landex/price_index.hpp"
#include "landex/regress.hpp"

namespace landex {

// Two chronologically adjacent transactions of an identical bundle; the
// sell side is always a secondary sale.
struct RepeatSalePair {
    Transaction buy;
    Transaction sell;
    std::int64_t hold_weeks = 0;  // ISO week-serial difference, >= 0
};

// Pairs each secondary sale with the immediately preceding transaction of
// the same bundle key (mint or purchase). A key traded m times yields up to
// m-1 pairs; chains are consecutive, never all-pairs. Ties on identical
// timestamps break by tx_id so the result is independent of input order.
std::vector<RepeatSalePair> match_repeat_sales(const std::vector<Transaction>& txs);

// Multiple on invested capital: sell price over buy price, each leg
// converted at its own date. Throws MissingPrice / ZeroPrice.
double moic(const RepeatSalePair& pair, const Token& denomination,
            const PriceTable& table);

// Log price change of a pair in one denomination; moic == exp of this.
double dlog_price(const RepeatSalePair& pair, const Token& denomination,
                  const PriceTable& table);

// First (unweighted) stage of the repeat-sales regression: the response is
// the pair's log price change; each non-base week contributes a column that
// is +1 at the sell week, -1 at the buy week, and 0 elsewhere. The base
// week is the earliest week across all legs and its dummy is fixed at zero.
struct BmnStage {
    RegressionResult fit;
    DesignMatrix design;       // kept for the weighted re-estimation
    Eigen::VectorXd response;  // dlog price per used pair
    WeekId base_week;
    std::vector<WeekId> week_columns;     // column order of `fit`
    std::vector<double> hold_weeks;       // per used pair, aligned with residuals
    std::vector<int> leg_counts;          // legs per week: base first, then columns
    int n_pairs_input = 0;
    int n_unpriceable = 0;  // dropped by MissingPrice/ZeroPrice on a leg
    int n_same_week = 0;    // dropped: buy and sell in one week
};

// Throws EmptyAfterFilter when nothing survives the filters, RankDeficient
// when the pairs do not connect every observed week to the base (reported
// with the week components).
BmnStage bmn_stage(const std::vector<RepeatSalePair>& pairs, const Token& denomination,
                   const PriceTable& table);

// Second stage: squared first-stage residuals regressed on holding periods
// (in weeks) with an intercept. Predictions are floored to stay positive.
// When every holding period is equal the fit degrades to the constant
// mean(e^2); when the first stage is perfect the weights are uniform.
struct VarianceFit {
    Eigen::VectorXd predictions;  // > 0
    double intercept = 0.0;
    double slope = 0.0;
    bool uniform = false;  // uniform-weight convention triggered
};

VarianceFit variance_stage(const Eigen::VectorXd& residuals,
                           const std::vector<double>& hold_weeks);

struct CaseShillerDiagnostics {
    int n_pairs_input = 0;
    int n_unpriceable = 0;
    int n_same_week = 0;
    int n_used = 0;
    double step2_intercept = 0.0;
    double step2_slope = 0.0;
    double weight_min = 0.0;
    double weight_max = 0.0;
    bool uniform_weights = false;
};

struct CaseShillerResult {
    PriceIndex index;
    CaseShillerDiagnostics diagnostics;
    BmnStage first_stage;
    RegressionResult weighted_fit;
};

// Three-step Case-Shiller estimator: unweighted first stage, variance model
// in holding time, then WLS with weights 1/prediction. Index levels are the
// exponentiated week dummies with the base week at 1.
CaseShillerResult case_shiller_index(const std::vector<RepeatSalePair>& pairs,
                                     const Token& denomination, const PriceTable& table);

}  // namespace landex

#endif  // LANDEX_REPEAT_SALES_HPP
