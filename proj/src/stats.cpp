#include "landex/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "landex/ingest.hpp"

namespace landex {

SummaryStats summarize(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2)
        throw TooFewObservations("summary needs at least 2 observations, got " +
                                 std::to_string(n));

    SummaryStats s;
    s.n = n;
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.std_dev = std::sqrt(m2 / static_cast<double>(n - 1));
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

    s.p5 = quantile_type7(values, 0.05);
    s.p50 = quantile_type7(values, 0.50);
    s.p95 = quantile_type7(values, 0.95);
    return s;
}

double pearson(const WeeklySeries& a, const WeeklySeries& b) {
    std::map<std::int64_t, double> b_by_week;
    for (const auto& p : b) b_by_week[week_serial(p.week)] = p.value;

    std::vector<double> xs, ys;
    for (const auto& p : a) {
        const auto it = b_by_week.find(week_serial(p.week));
        if (it == b_by_week.end()) continue;
        xs.push_back(p.value);
        ys.push_back(it->second);
    }
    if (xs.size() < 2)
        throw NoOverlap("series share " + std::to_string(xs.size()) +
                        " weeks; need at least 2");

    const std::size_t n = xs.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ConstantSeries("correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

WeeklySeries weekly_mean_price(const PriceTable& table, const Token& token) {
    std::map<std::int64_t, std::pair<double, int>> sums;
    for (const auto& [key, price] : table.entries()) {
        if (key.second != token.symbol()) continue;
        auto& [sum, count] = sums[week_serial(UtcDate{key.first})];
        sum += price;
        ++count;
    }
    WeeklySeries out;
    out.reserve(sums.size());
    for (const auto& [serial, acc] : sums)
        out.push_back(WeekPoint{week_from_serial(serial), acc.first / acc.second});
    return out;
}

WeeklySeries relative_price_index(const Token& numerator, const Token& denominator,
                                  const PriceTable& table, const WeekId& base) {
    // Weekly means over days priced for both tokens.
    std::map<std::int64_t, std::array<double, 3>> acc;  // num sum, den sum, count
    for (const auto& [key, num_price] : table.entries()) {
        if (key.second != numerator.symbol()) continue;
        const auto den_price = table.find(UtcDate{key.first}, denominator);
        if (!den_price) continue;
        auto& slot = acc[week_serial(UtcDate{key.first})];
        slot[0] += num_price;
        slot[1] += *den_price;
        slot[2] += 1.0;
    }
    if (numerator.is_usd()) {
        // USD rows are implicit; walk the denominator token instead.
        acc.clear();
        for (const auto& [key, den_price] : table.entries()) {
            if (key.second != denominator.symbol()) continue;
            auto& slot = acc[week_serial(UtcDate{key.first})];
            slot[0] += 1.0;
            slot[1] += den_price;
            slot[2] += 1.0;
        }
    }

    const auto base_it = acc.find(week_serial(base));
    if (base_it == acc.end() || base_it->second[2] == 0.0)
        throw MissingPrice("base week " + base.label() + " has no day pricing both " +
                           numerator.symbol() + " and " + denominator.symbol());
    const double base_ratio = base_it->second[1] / base_it->second[0];

    WeeklySeries out;
    out.reserve(acc.size());
    for (const auto& [serial, slot] : acc) {
        const double ratio = slot[1] / slot[0];
        out.push_back(WeekPoint{week_from_serial(serial), ratio / base_ratio});
    }
    return out;
}

std::optional<WeekId> earliest_common_week(const PriceTable& table, const Token& a,
                                           const Token& b) {
    for (const auto& [key, price] : table.entries()) {
        const Token row_token(key.second);
        if (row_token != a && row_token != b) continue;
        const Token other = row_token == a ? b : a;
        if (table.find(UtcDate{key.first}, other))
            return week_of_date(UtcDate{key.first});
    }
    if ((a.is_usd() || b.is_usd())) {
        const Token token = a.is_usd() ? b : a;
        for (const auto& [key, price] : table.entries())
            if (key.second == token.symbol()) return week_of_date(UtcDate{key.first});
    }
    return std::nullopt;
}

WeeklySeries sand_settlement_share(const std::vector<Transaction>& txs) {
    std::map<std::int64_t, std::pair<int, int>> counts;  // sand, total secondary
    for (const auto& tx : txs) {
        if (tx.sale_kind != SaleKind::Secondary) continue;
        auto& [sand, total] = counts[week_serial(week_of(tx.timestamp))];
        ++total;
        if (tx.settlement.symbol() == "SAND") ++sand;
    }
    WeeklySeries out;
    out.reserve(counts.size());
    for (const auto& [serial, c] : counts)
        out.push_back(WeekPoint{week_from_serial(serial),
                                static_cast<double>(c.first) / c.second});
    return out;
}

}  // namespace landex
