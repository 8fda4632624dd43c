#ifndef LANDEX_STATS_HPP
#define LANDEX_STATS_HPP

#include <optional>
#include <vector>

#include "landex/market_model.hpp"

namespace landex {

// Descriptive block matching the summary tables: sample std dev (n-1),
// population central moments inside the standardized ratios, raw (non-excess)
// kurtosis, type-7 percentiles.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
};

// Throws TooFewObservations for n < 2.
SummaryStats summarize(const std::vector<double>& values);

struct WeekPoint {
    WeekId week;
    double value = 0.0;
};

// Sorted weekly series.
using WeeklySeries = std::vector<WeekPoint>;

// Sample Pearson correlation over the WeekId intersection of the two series.
// Throws NoOverlap (< 2 shared weeks) or ConstantSeries.
double pearson(const WeeklySeries& a, const WeeklySeries& b);

// Weekly mean of daily USD prices for one token, over every week the table
// covers it.
WeeklySeries weekly_mean_price(const PriceTable& table, const Token& token);

// Weekly ratio mean(usd(denominator)) / mean(usd(numerator)), normalized to
// 1 at `base`; rises when the denominator-role token appreciates against the
// numerator-role token. Only days on which both tokens are priced count.
// Throws MissingPrice when the base week has no such day.
WeeklySeries relative_price_index(const Token& numerator, const Token& denominator,
                                  const PriceTable& table, const WeekId& base);

// Earliest week with at least one day pricing both tokens, if any; the
// natural base for relative_price_index.
std::optional<WeekId> earliest_common_week(const PriceTable& table, const Token& a,
                                           const Token& b);

// Per week: secondary sales settled in SAND over all secondary sales.
// Weeks without secondary sales are omitted.
WeeklySeries sand_settlement_share(const std::vector<Transaction>& txs);

}  // namespace landex

#endif  // LANDEX_STATS_HPP
