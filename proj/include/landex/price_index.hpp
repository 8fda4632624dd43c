#ifndef LANDEX_PRICE_INDEX_HPP
#define LANDEX_PRICE_INDEX_HPP

#include <vector>

#include "landex/market_model.hpp"

namespace landex {

struct IndexPoint {
    WeekId week;
    double level = 0.0;  // > 0, 1 at the base week
    int n_obs = 0;
};

// Weekly index levels: exponentiated time dummies, normalized to 1 at the
// base week. Weeks without observations simply have no point; levels are
// never interpolated across gaps.
struct PriceIndex {
    std::vector<IndexPoint> points;  // strictly increasing weeks
    WeekId base_week;

    // Renormalizes so `base` has level exactly 1. Throws MissingTerm if the
    // week has no point.
    PriceIndex rebased(const WeekId& base) const;

    double max_level() const;

    // Calendar weeks inside the span with no observations (never
    // interpolated, only counted).
    int gap_weeks() const;
};

}  // namespace landex

#endif  // LANDEX_PRICE_INDEX_HPP
