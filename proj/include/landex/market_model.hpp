#ifndef LANDEX_MARKET_MODEL_HPP
#define LANDEX_MARKET_MODEL_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landex/decimal.hpp"
#include "landex/errors.hpp"

namespace landex {

// The LAND map is a 408x408 grid; coordinates outside it are rejected at
// parse time.
inline constexpr int kGridMin = 0;
inline constexpr int kGridMax = 407;

struct ParcelCoord {
    int x = 0;
    int y = 0;

    auto operator<=>(const ParcelCoord&) const = default;
};

// Identity of a bundle: its full, lexicographically sorted, duplicate-free
// coordinate set. Two transactions are repeat sales of the same asset iff
// their keys compare equal.
struct BundleKey {
    std::vector<ParcelCoord> coords;

    int lot_size() const { return static_cast<int>(coords.size()); }
    auto operator<=>(const BundleKey&) const = default;
};

// Builds the canonical key from an arbitrarily ordered coordinate list.
// Throws EmptyBundle, OutOfGrid, or DuplicateParcel.
BundleKey canonical_bundle_key(std::vector<ParcelCoord> coords);

// Stable 64-bit FNV-1a digest of the canonical coordinate list, used as the
// bundle identifier in emitted files.
std::uint64_t bundle_hash(const BundleKey& key);
std::string bundle_hash_hex(const BundleKey& key);

// Settlement token / denomination symbol, canonicalized to upper case.
// "USD" is the fiat denomination: it never appears as a settlement token in
// transaction files but is a valid conversion target with usd price 1.
class Token {
  public:
    Token() : symbol_("ETH") {}
    explicit Token(std::string_view symbol);

    static Token usd() { return Token("USD"); }
    // Symbols from the sample's settlement distribution; parsing in strict
    // mode rejects anything else.
    static const std::vector<std::string>& registry();

    bool is_usd() const { return symbol_ == "USD"; }
    const std::string& symbol() const { return symbol_; }

    auto operator<=>(const Token&) const = default;

  private:
    std::string symbol_;
};

enum class SaleKind { Primary, Secondary };

std::string_view to_string(SaleKind kind);
SaleKind parse_sale_kind(std::string_view text);  // "primary" / "secondary"

// ---------------------------------------------------------------------------
// Calendar: UTC dates and instants, plus ISO-8601 week-years.

struct UtcDate {
    std::int64_t days = 0;  // days since 1970-01-01

    auto operator<=>(const UtcDate&) const = default;
};

struct UtcInstant {
    std::int64_t seconds = 0;  // seconds since 1970-01-01T00:00:00Z

    UtcDate date() const;
    auto operator<=>(const UtcInstant&) const = default;
};

std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

UtcDate parse_date(std::string_view text);        // "YYYY-MM-DD"
UtcInstant parse_instant(std::string_view text);  // "YYYY-MM-DDTHH:MM:SSZ"
std::string format_date(UtcDate date);
std::string format_instant(UtcInstant instant);

// ISO-8601 week-year. Ordering is chronological (year, then week).
struct WeekId {
    int iso_year = 0;
    int iso_week = 0;  // 1..53

    auto operator<=>(const WeekId&) const = default;
    std::string label() const;  // "2020-W33"
};

WeekId week_of(UtcInstant instant);
WeekId week_of_date(UtcDate date);

// Contiguous Monday-aligned week counter: consecutive ISO weeks differ by
// exactly 1, across year boundaries. Holding periods are differences of this.
std::int64_t week_serial(UtcDate date);
std::int64_t week_serial(const WeekId& week);
WeekId week_from_serial(std::int64_t serial);

WeekId parse_week(std::string_view text);  // "2020-W33" (or "2020-33")

// ---------------------------------------------------------------------------

// One bundle-level sale or mint. Immutable after construction.
struct Transaction {
    std::string tx_id;
    BundleKey bundle;
    int lot_size = 0;  // equals bundle.lot_size()
    UtcInstant timestamp;
    Decimal price_amount;  // in settlement-token units
    Token settlement;
    SaleKind sale_kind = SaleKind::Secondary;
    UtcDate mint_date;
    std::int64_t age_days = 0;  // whole UTC days from mint_date to timestamp
};

// Daily USD price per token; the bridge for denomination conversion.
class PriceTable {
  public:
    // Throws DuplicatePriceRow / NonPositivePrice.
    void add(UtcDate date, const Token& token, double usd_price);

    // USD is implicitly priced at 1 on every date.
    std::optional<double> find(UtcDate date, const Token& token) const;
    double usd_price(UtcDate date, const Token& token) const;  // MissingPrice

    std::size_t size() const { return entries_.size(); }

    const std::map<std::pair<std::int64_t, std::string>, double>& entries() const {
        return entries_;
    }

  private:
    std::map<std::pair<std::int64_t, std::string>, double> entries_;
};

// A transaction re-expressed in a common denomination.
struct DenominatedSale {
    Transaction source;
    Token denomination;
    double price = 0.0;      // > 0, in denomination units
    double log_price = 0.0;  // ln(price)
};

}  // namespace landex

#endif  // LANDEX_MARKET_MODEL_HPP
