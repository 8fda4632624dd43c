#include "landex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace landex {

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

int SplitMix64::poisson(double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double product = uniform();
    while (product > limit) {
        ++k;
        product *= uniform();
    }
    return k;
}

int SplitMix64::uniform_int(int bound) {
    return static_cast<int>(uniform() * bound);
}

SynthConfig SynthConfig::defaults() {
    SynthConfig cfg;
    cfg.settlement_premia = {{"SAND", 0.0}, {"WETH", 0.0}};
    cfg.tokens = {
        TokenPath{Token("ETH"), 1500.0, 0.0, 0.03, 0, 0.6},
        TokenPath{Token("WETH"), 1500.0, 0.0, 0.03, 0, 0.2},
        TokenPath{Token("SAND"), 0.5, 0.0, 0.05, 0, 0.2},
    };
    return cfg;
}

void SynthConfig::validate() const {
    if (n_weeks < 2) throw InvalidConfig("n_weeks must be at least 2");
    if (n_bundles < 1) throw InvalidConfig("n_bundles must be positive");
    if (sales_per_week <= 0.0 || sales_per_week > 500.0)
        throw InvalidConfig("sales_per_week must be in (0, 500]");
    if (max_lot < 1 || max_lot > 36) throw InvalidConfig("max_lot must be in 1..36");
    if (noise_base_var < 0.0 || noise_hold_slope < 0.0)
        throw InvalidConfig("noise variances must be non-negative");
    if (index_weekly_vol < 0.0) throw InvalidConfig("index_weekly_vol must be >= 0");
    if (index_start_usd <= 0.0) throw InvalidConfig("index_start_usd must be positive");
    if (((start_date.days % 7) + 7) % 7 != 4)
        throw InvalidConfig("start_date must be a Monday so weeks align with ISO weeks");
    if (tokens.empty()) throw InvalidConfig("at least one token path is required");
    double week0_share = 0.0;
    for (const auto& t : tokens) {
        if (t.start_usd <= 0.0)
            throw InvalidConfig("token " + t.token.symbol() + " needs a positive start price");
        if (t.weekly_vol < 0.0 || t.secondary_share < 0.0)
            throw InvalidConfig("token " + t.token.symbol() + " has a negative parameter");
        if (t.start_week < 0 || t.start_week >= n_weeks)
            throw InvalidConfig("token " + t.token.symbol() + " start_week out of range");
        if (t.start_week == 0) week0_share += t.secondary_share;
    }
    if (week0_share <= 0.0)
        throw InvalidConfig(
            "at least one token with start_week 0 needs a positive secondary share");
    // The static grid layout places each bundle in its own 6x6 block.
    if (n_bundles > 68 * 68) throw InvalidConfig("n_bundles exceeds grid capacity (4624)");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("bad numeric value for '" + key + "': '" + value + "'");
    }
}

TokenPath* find_token(SynthConfig& cfg, const std::string& symbol) {
    for (auto& t : cfg.tokens)
        if (t.token.symbol() == symbol) return &t;
    return nullptr;
}

// token_<SYMBOL>_<field> keys configure per-token price paths.
bool apply_token_key(SynthConfig& cfg, const std::string& key, const std::string& value) {
    if (key.rfind("token_", 0) != 0) return false;
    const auto rest = key.substr(6);
    const auto underscore = rest.rfind('_');
    if (underscore == std::string::npos)
        throw InvalidConfig("bad token key '" + key + "'");
    std::string symbol = rest.substr(0, underscore);
    std::string field = rest.substr(underscore + 1);
    if (field == "week" && symbol.size() > 6 && symbol.rfind("_start") == symbol.size() - 6) {
        // token_X_start_week splits awkwardly on the last underscore
        symbol = symbol.substr(0, symbol.size() - 6);
        field = "start_week";
    }
    symbol = Token(symbol).symbol();
    TokenPath* path = find_token(cfg, symbol);
    if (!path) {
        cfg.tokens.push_back(TokenPath{Token(symbol), 1.0, 0.0, 0.0, 0, 0.0});
        path = &cfg.tokens.back();
    }
    if (field == "start") {
        path->start_usd = to_double(key, value);
    } else if (field == "drift") {
        path->weekly_drift = to_double(key, value);
    } else if (field == "vol") {
        path->weekly_vol = to_double(key, value);
    } else if (field == "start_week") {
        path->start_week = static_cast<int>(to_double(key, value));
    } else if (field == "share") {
        path->secondary_share = to_double(key, value);
    } else {
        throw InvalidConfig("unknown token field in '" + key + "'");
    }
    return true;
}

}  // namespace

SynthConfig SynthConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file '" + path + "'");

    SynthConfig cfg = defaults();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig(path + ":" + std::to_string(line_no) +
                                ": expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));

        if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "n_weeks") {
            cfg.n_weeks = static_cast<int>(to_double(key, value));
        } else if (key == "n_bundles") {
            cfg.n_bundles = static_cast<int>(to_double(key, value));
        } else if (key == "sales_per_week") {
            cfg.sales_per_week = to_double(key, value);
        } else if (key == "start_date") {
            cfg.start_date = parse_date(value);
        } else if (key == "max_lot") {
            cfg.max_lot = static_cast<int>(to_double(key, value));
        } else if (key == "lot_growth_prob") {
            cfg.lot_growth_prob = to_double(key, value);
        } else if (key == "index_start_usd") {
            cfg.index_start_usd = to_double(key, value);
        } else if (key == "index_weekly_vol") {
            cfg.index_weekly_vol = to_double(key, value);
        } else if (key == "index_weekly_drift") {
            cfg.index_weekly_drift = to_double(key, value);
        } else if (key == "lot_elasticity") {
            cfg.lot_elasticity = to_double(key, value);
        } else if (key == "age_coefficient") {
            cfg.age_coefficient = to_double(key, value);
        } else if (key == "primary_discount") {
            cfg.primary_discount = to_double(key, value);
        } else if (key == "noise_base_var") {
            cfg.noise_base_var = to_double(key, value);
        } else if (key == "noise_hold_slope") {
            cfg.noise_hold_slope = to_double(key, value);
        } else if (key.rfind("premium_", 0) == 0) {
            cfg.settlement_premia[Token(key.substr(8)).symbol()] = to_double(key, value);
        } else if (!apply_token_key(cfg, key, value)) {
            throw InvalidConfig(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

struct BundleState {
    BundleKey key;
    UtcDate mint_date;
    UtcDate last_trade_date;
    std::int64_t last_trade_week = -1;  // market-relative; -1 = never traded
    bool traded = false;
};

// Grows a 4-connected shape inside the bundle's private 6x6 block, so
// bundles never overlap and contiguity holds by construction.
BundleKey grow_bundle(SplitMix64& rng, int block_index, int lot) {
    const int block_x = (block_index % 68) * 6;
    const int block_y = (block_index / 68) * 6;
    std::set<ParcelCoord> cells;
    ParcelCoord cur{block_x + rng.uniform_int(6), block_y + rng.uniform_int(6)};
    cells.insert(cur);
    int guard = 0;
    while (static_cast<int>(cells.size()) < lot && ++guard < 1000) {
        // Pick a random occupied cell and push outward.
        auto it = cells.begin();
        std::advance(it, rng.uniform_int(static_cast<int>(cells.size())));
        const ParcelCoord base = *it;
        static constexpr int kDx[4] = {1, -1, 0, 0};
        static constexpr int kDy[4] = {0, 0, 1, -1};
        const int dir = rng.uniform_int(4);
        const ParcelCoord next{base.x + kDx[dir], base.y + kDy[dir]};
        if (next.x < block_x || next.x >= block_x + 6 || next.y < block_y ||
            next.y >= block_y + 6)
            continue;
        cells.insert(next);
    }
    return canonical_bundle_key(std::vector<ParcelCoord>(cells.begin(), cells.end()));
}

std::string format_amount(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", value);
    return buf;
}

}  // namespace

SynthMarket generate_market(const SynthConfig& config) {
    config.validate();
    SplitMix64 rng(config.seed);

    // Latent USD log index and weekly token prices. Token prices hold still
    // within each week so weekly dummies are exactly the right model in
    // every denomination.
    std::vector<double> log_index(static_cast<std::size_t>(config.n_weeks));
    log_index[0] = std::log(config.index_start_usd);
    for (int w = 1; w < config.n_weeks; ++w)
        log_index[static_cast<std::size_t>(w)] =
            log_index[static_cast<std::size_t>(w - 1)] + config.index_weekly_drift +
            config.index_weekly_vol * rng.normal();

    std::vector<std::vector<double>> token_usd(config.tokens.size());
    for (std::size_t t = 0; t < config.tokens.size(); ++t) {
        const TokenPath& path = config.tokens[t];
        auto& series = token_usd[t];
        series.assign(static_cast<std::size_t>(config.n_weeks), 0.0);
        double log_price = std::log(path.start_usd);
        for (int w = path.start_week; w < config.n_weeks; ++w) {
            if (w > path.start_week)
                log_price += path.weekly_drift + path.weekly_vol * rng.normal();
            series[static_cast<std::size_t>(w)] = std::exp(log_price);
        }
    }

    // Bundle shapes.
    std::vector<BundleState> bundles;
    bundles.reserve(static_cast<std::size_t>(config.n_bundles));
    for (int b = 0; b < config.n_bundles; ++b) {
        int lot = 1;
        while (lot < config.max_lot && rng.uniform() < config.lot_growth_prob) ++lot;
        bundles.push_back(
            BundleState{grow_bundle(rng, b, lot), UtcDate{0}, UtcDate{0}, -1, false});
    }

    auto pick_secondary_token = [&](std::int64_t week) -> int {
        // Restrict to tokens already priced this week; validate() guarantees
        // the week-0 pool is non-empty.
        double available = 0.0;
        for (std::size_t t = 0; t < config.tokens.size(); ++t)
            if (week >= config.tokens[t].start_week)
                available += config.tokens[t].secondary_share;
        double draw = rng.uniform() * available;
        int last = 0;
        for (std::size_t t = 0; t < config.tokens.size(); ++t) {
            if (week < config.tokens[t].start_week ||
                config.tokens[t].secondary_share <= 0.0)
                continue;
            last = static_cast<int>(t);
            draw -= config.tokens[t].secondary_share;
            if (draw < 0.0) break;
        }
        return last;
    };

    // Mints settle in SAND once it is priced, in DAI before that. When DAI
    // has no configured path it is synthesized as a constant 1 USD
    // stablecoin so those mints stay convertible.
    int sand_index = -1, dai_index = -1;
    for (std::size_t t = 0; t < config.tokens.size(); ++t) {
        if (config.tokens[t].token.symbol() == "SAND") sand_index = static_cast<int>(t);
        if (config.tokens[t].token.symbol() == "DAI") dai_index = static_cast<int>(t);
    }
    const int sand_start =
        sand_index >= 0 ? config.tokens[static_cast<std::size_t>(sand_index)].start_week
                        : config.n_weeks;
    const bool need_synthetic_dai = sand_start > 0 && dai_index < 0;

    auto mint_settlement = [&](std::int64_t week) -> std::pair<Token, double> {
        if (sand_index >= 0 && week >= sand_start)
            return {config.tokens[static_cast<std::size_t>(sand_index)].token,
                    token_usd[static_cast<std::size_t>(sand_index)]
                             [static_cast<std::size_t>(week)]};
        if (dai_index >= 0) {
            const auto& path = config.tokens[static_cast<std::size_t>(dai_index)];
            if (week < path.start_week)
                throw InvalidConfig("mints need DAI before its configured start week");
            return {path.token,
                    token_usd[static_cast<std::size_t>(dai_index)]
                             [static_cast<std::size_t>(week)]};
        }
        return {Token("DAI"), 1.0};
    };

    std::ostringstream tx_out;
    tx_out << "tx_id,timestamp,parcel_x,parcel_y,price_amount,token,sale_type,mint_date\n";

    int tx_counter = 0;
    for (std::int64_t week = 0; week < config.n_weeks; ++week) {
        const int n_sales = std::max(1, rng.poisson(config.sales_per_week));
        for (int s = 0; s < n_sales; ++s) {
            BundleState& bundle =
                bundles[static_cast<std::size_t>(rng.uniform_int(config.n_bundles))];
            const bool primary = !bundle.traded;

            // Resales never predate the bundle's previous trade date.
            const std::int64_t week_start = config.start_date.days + week * 7;
            std::int64_t min_offset = 0;
            if (!primary && bundle.last_trade_date.days > week_start)
                min_offset = bundle.last_trade_date.days - week_start;
            const UtcDate sale_date{week_start + min_offset +
                                    rng.uniform_int(static_cast<int>(7 - min_offset))};
            const UtcInstant ts{sale_date.days * 86400 + rng.uniform_int(86400)};
            if (primary) bundle.mint_date = sale_date;

            Token settlement;
            double token_price = 1.0;
            if (primary) {
                std::tie(settlement, token_price) = mint_settlement(week);
            } else {
                const int t = pick_secondary_token(week);
                settlement = config.tokens[static_cast<std::size_t>(t)].token;
                token_price = token_usd[static_cast<std::size_t>(t)]
                                       [static_cast<std::size_t>(week)];
            }

            const std::int64_t age_days = sale_date.days - bundle.mint_date.days;
            const double hold_weeks =
                bundle.traded ? static_cast<double>(week - bundle.last_trade_week) : 0.0;
            const double noise_var =
                config.noise_base_var + config.noise_hold_slope * hold_weeks;
            const double eps = noise_var > 0.0 ? std::sqrt(noise_var) * rng.normal() : 0.0;

            double premium = 0.0;
            const auto premium_it = config.settlement_premia.find(settlement.symbol());
            if (premium_it != config.settlement_premia.end()) premium = premium_it->second;

            const double log_usd =
                log_index[static_cast<std::size_t>(week)] +
                config.lot_elasticity * std::log(static_cast<double>(bundle.key.lot_size())) +
                config.age_coefficient * std::log(static_cast<double>(age_days) + 1.0) +
                (primary ? config.primary_discount : 0.0) + premium + eps;
            const double amount = std::exp(log_usd) / token_price;

            char tx_id[16];
            std::snprintf(tx_id, sizeof(tx_id), "T%06d", tx_counter++);
            const std::string timestamp = format_instant(ts);
            const std::string mint = format_date(bundle.mint_date);
            const std::string kind(to_string(primary ? SaleKind::Primary : SaleKind::Secondary));
            // One row per parcel, amount split evenly.
            const int lot = bundle.key.lot_size();
            const double per_parcel = amount / lot;
            for (int p = 0; p < lot; ++p) {
                const auto& coord = bundle.key.coords[static_cast<std::size_t>(p)];
                tx_out << tx_id << ',' << timestamp << ',' << coord.x << ',' << coord.y
                       << ',' << format_amount(per_parcel) << ',' << settlement.symbol()
                       << ',' << kind << ',' << mint << '\n';
            }

            bundle.traded = true;
            bundle.last_trade_week = week;
            bundle.last_trade_date = sale_date;
        }
    }

    std::ostringstream price_out;
    price_out << "date,token,usd_price\n";
    for (std::int64_t week = 0; week < config.n_weeks; ++week) {
        for (int day = 0; day < 7; ++day) {
            const UtcDate date{config.start_date.days + week * 7 + day};
            if (need_synthetic_dai)
                price_out << format_date(date) << ",DAI,1.000000000000\n";
            for (std::size_t t = 0; t < config.tokens.size(); ++t) {
                if (week < config.tokens[t].start_week) continue;
                price_out << format_date(date) << ',' << config.tokens[t].token.symbol()
                          << ',' << format_amount(token_usd[t][static_cast<std::size_t>(week)])
                          << '\n';
            }
        }
    }

    // Ground truth: log index levels relative to the first week each
    // denomination is defined, matching how the estimators normalize.
    SynthMarket market;
    market.truth.lot_elasticity = config.lot_elasticity;
    market.truth.age_coefficient = config.age_coefficient;
    market.truth.primary_discount = config.primary_discount;
    market.truth.settlement_premia = config.settlement_premia;

    auto push_truth = [&](const std::string& denom, int start_week,
                          const std::vector<double>& log_token) {
        const double base = log_index[static_cast<std::size_t>(start_week)] -
                            (log_token.empty() ? 0.0
                                               : log_token[static_cast<std::size_t>(start_week)]);
        for (int w = start_week; w < config.n_weeks; ++w) {
            const double level =
                log_index[static_cast<std::size_t>(w)] -
                (log_token.empty() ? 0.0 : log_token[static_cast<std::size_t>(w)]) - base;
            market.truth.deltas.push_back(TruthPoint{
                week_of_date(UtcDate{config.start_date.days + w * 7}), denom, level});
        }
    };
    push_truth("USD", 0, {});
    for (std::size_t t = 0; t < config.tokens.size(); ++t) {
        std::vector<double> logs(static_cast<std::size_t>(config.n_weeks), 0.0);
        for (int w = config.tokens[t].start_week; w < config.n_weeks; ++w)
            logs[static_cast<std::size_t>(w)] =
                std::log(token_usd[t][static_cast<std::size_t>(w)]);
        push_truth(config.tokens[t].token.symbol(), config.tokens[t].start_week, logs);
    }

    market.transactions_csv = tx_out.str();
    market.prices_csv = price_out.str();
    return market;
}

std::string truth_csv(const GroundTruth& truth) {
    std::ostringstream out;
    out << "iso_year,iso_week,denom,true_log_delta\n";
    char buf[64];
    for (const auto& point : truth.deltas) {
        std::snprintf(buf, sizeof(buf), "%.12g", point.log_delta);
        out << point.week.iso_year << ',' << point.week.iso_week << ',' << point.denom
            << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace landex
