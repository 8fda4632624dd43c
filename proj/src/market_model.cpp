#include "landex/market_model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace landex {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

}  // namespace

BundleKey canonical_bundle_key(std::vector<ParcelCoord> coords) {
    if (coords.empty()) throw EmptyBundle();
    for (const auto& c : coords) {
        if (c.x < kGridMin || c.x > kGridMax || c.y < kGridMin || c.y > kGridMax)
            throw OutOfGrid("parcel (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                            ") outside the 408x408 grid");
    }
    std::sort(coords.begin(), coords.end());
    const auto dup = std::adjacent_find(coords.begin(), coords.end());
    if (dup != coords.end())
        throw DuplicateParcel("parcel (" + std::to_string(dup->x) + "," +
                              std::to_string(dup->y) + ") listed twice in one bundle");
    return BundleKey{std::move(coords)};
}

std::uint64_t bundle_hash(const BundleKey& key) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
    auto mix = [&h](std::string_view s) {
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
    };
    for (const auto& c : key.coords) {
        mix(std::to_string(c.x));
        mix(":");
        mix(std::to_string(c.y));
        mix(";");
    }
    return h;
}

std::string bundle_hash_hex(const BundleKey& key) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(bundle_hash(key)));
    return buf;
}

Token::Token(std::string_view symbol) {
    symbol_.reserve(symbol.size());
    for (const char c : symbol)
        symbol_.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
}

const std::vector<std::string>& Token::registry() {
    static const std::vector<std::string> kRegistry = {"ETH", "WETH", "SAND", "DAI", "USDC"};
    return kRegistry;
}

std::string_view to_string(SaleKind kind) {
    return kind == SaleKind::Primary ? "primary" : "secondary";
}

SaleKind parse_sale_kind(std::string_view text) {
    std::string lower;
    lower.reserve(text.size());
    for (const char c : text)
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "primary") return SaleKind::Primary;
    if (lower == "secondary") return SaleKind::Secondary;
    throw MalformedRow("sale_type must be 'primary' or 'secondary', got '" +
                       std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Calendar

UtcDate UtcInstant::date() const { return UtcDate{floor_div(seconds, 86400)}; }

// Howard Hinnant's civil-days algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = floor_div(y, 400);
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = floor_div(z, 146097);
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

UtcDate parse_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    char tail = '\0';
    const std::string s(text);
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 ||
        s.size() != 10 || m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
        throw BadTimestamp("expected YYYY-MM-DD date, got '" + s + "'");
    return UtcDate{days_from_civil(y, m, d)};
}

UtcInstant parse_instant(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char zone = '\0', tail = '\0';
    const std::string s(text);
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%c", &y, &mo, &d, &h, &mi, &sec,
                    &zone, &tail) != 7 ||
        zone != 'Z' || s.size() != 20 || mo < 1 || mo > 12 || d < 1 ||
        d > days_in_month(y, mo) || h > 23 || mi > 59 || sec > 59)
        throw BadTimestamp("expected YYYY-MM-DDTHH:MM:SSZ timestamp, got '" + s + "'");
    return UtcInstant{days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec};
}

std::string format_date(UtcDate date) {
    int y, m, d;
    civil_from_days(date.days, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::string format_instant(UtcInstant instant) {
    const std::int64_t days = floor_div(instant.seconds, 86400);
    std::int64_t rem = instant.seconds - days * 86400;
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

std::string WeekId::label() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-W%02d", iso_year, iso_week);
    return buf;
}

WeekId week_of_date(UtcDate date) {
    // 1970-01-01 was a Thursday. ISO weekday: Monday = 1 .. Sunday = 7.
    const std::int64_t days = date.days;
    const int iso_wd = static_cast<int>(((days % 7) + 10) % 7) + 1;
    const std::int64_t thursday = days + (4 - iso_wd);
    int y, m, d;
    civil_from_days(thursday, y, m, d);
    const std::int64_t jan1 = days_from_civil(y, 1, 1);
    return WeekId{y, static_cast<int>((thursday - jan1) / 7) + 1};
}

WeekId week_of(UtcInstant instant) { return week_of_date(instant.date()); }

std::int64_t week_serial(UtcDate date) { return floor_div(date.days + 3, 7); }

std::int64_t week_serial(const WeekId& week) {
    // Jan 4 always falls in ISO week 1 of its year.
    const std::int64_t jan4 = days_from_civil(week.iso_year, 1, 4);
    return week_serial(UtcDate{jan4}) + (week.iso_week - 1);
}

WeekId week_from_serial(std::int64_t serial) {
    // Thursday of the serial-indexed week.
    return week_of_date(UtcDate{serial * 7 + 0});
}

WeekId parse_week(std::string_view text) {
    int y = 0, w = 0;
    const std::string s(text);
    char tail = '\0';
    if (std::sscanf(s.c_str(), "%4d-W%2d%c", &y, &w, &tail) != 2 &&
        std::sscanf(s.c_str(), "%4d-%2d%c", &y, &w, &tail) != 2)
        throw BadTimestamp("expected week as YYYY-WW, got '" + s + "'");
    if (w < 1 || w > 53) throw BadTimestamp("ISO week out of range in '" + s + "'");
    const WeekId week{y, w};
    if (week_from_serial(week_serial(week)) != week)
        throw BadTimestamp("'" + s + "' is not a valid ISO week");
    return week;
}

// ---------------------------------------------------------------------------

void PriceTable::add(UtcDate date, const Token& token, double usd_price) {
    if (!(usd_price > 0.0))
        throw NonPositivePrice("usd price for " + token.symbol() + " on " +
                               format_date(date) + " must be positive");
    const auto [it, inserted] = entries_.emplace(
        std::make_pair(date.days, token.symbol()), usd_price);
    (void)it;
    if (!inserted)
        throw DuplicatePriceRow("duplicate price row for " + token.symbol() + " on " +
                                format_date(date));
}

std::optional<double> PriceTable::find(UtcDate date, const Token& token) const {
    if (token.is_usd()) return 1.0;
    const auto it = entries_.find(std::make_pair(date.days, token.symbol()));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

double PriceTable::usd_price(UtcDate date, const Token& token) const {
    const auto price = find(date, token);
    if (!price)
        throw MissingPrice("no USD price for " + token.symbol() + " on " +
                           format_date(date));
    return *price;
}

}  // namespace landex
