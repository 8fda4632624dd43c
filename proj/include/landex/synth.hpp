#ifndef LANDEX_SYNTH_HPP
#define LANDEX_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "landex/market_model.hpp"

namespace landex {

// Random-walk parameters for one token's daily USD price. Prices step once
// per ISO week (constant within a week) so that weekly time dummies are the
// exactly correct model for every denomination.
struct TokenPath {
    Token token;
    double start_usd = 1.0;
    double weekly_drift = 0.0;
    double weekly_vol = 0.0;
    int start_week = 0;        // offset from the market start; earlier days unpriced
    double secondary_share = 0.0;  // relative weight among secondary settlements
};

// Everything the generator needs; flat key=value files map onto this.
struct SynthConfig {
    std::uint64_t seed = 1;
    int n_weeks = 20;
    int n_bundles = 100;
    double sales_per_week = 20.0;  // Poisson mean
    UtcDate start_date = UtcDate{days_from_civil(2021, 1, 4)};  // a Monday
    int max_lot = 9;
    double lot_growth_prob = 0.35;  // geometric tail of the lot-size draw

    double index_start_usd = 50.0;  // initial bundle price level per parcel
    double index_weekly_vol = 0.05;
    double index_weekly_drift = 0.0;

    double lot_elasticity = 1.0;      // on ln lot size
    double age_coefficient = 0.0;     // on ln(age days + 1)
    double primary_discount = 0.0;    // on the mint dummy
    std::map<std::string, double> settlement_premia;  // vs ETH; ETH fixed at 0

    double noise_base_var = 0.0;
    double noise_hold_slope = 0.0;  // added variance per week since last trade

    std::vector<TokenPath> tokens;  // defaulted to ETH/SAND/WETH if empty

    static SynthConfig defaults();
    // Flat key=value text (# comments). Unknown keys are errors. Throws
    // InvalidConfig.
    static SynthConfig from_file(const std::string& path);
    void validate() const;  // InvalidConfig
};

struct TruthPoint {
    WeekId week;
    std::string denom;
    double log_delta = 0.0;  // log index level relative to the base week
};

struct GroundTruth {
    std::vector<TruthPoint> deltas;
    double lot_elasticity = 0.0;
    double age_coefficient = 0.0;
    double primary_discount = 0.0;
    std::map<std::string, double> settlement_premia;
};

struct SynthMarket {
    std::string transactions_csv;
    std::string prices_csv;
    GroundTruth truth;
};

// Deterministic synthetic market with known ground truth. The stream is a
// SplitMix64 sequence keyed by the seed, so identical configs produce
// byte-identical files. Every bundle is 4-connected; the first trade of a
// bundle is its mint; later trades are secondary sales, which makes repeat
// pairs plentiful. Log sale prices follow
//   delta_week + beta . x + premium(settlement) + eps,
// with eps variance = base + slope * (weeks since the bundle last traded).
SynthMarket generate_market(const SynthConfig& config);

std::string truth_csv(const GroundTruth& truth);

// Counter-based 64-bit generator (SplitMix64); the fixed generation stream
// behind generate_market, exposed for tests that need deterministic draws.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double uniform();            // [0, 1)
    double normal();             // Box-Muller, one fresh pair per two calls
    int poisson(double mean);    // inversion by multiplication
    int uniform_int(int bound);  // [0, bound)

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace landex

#endif  // LANDEX_SYNTH_HPP
