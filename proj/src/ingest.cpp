#include "landex/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace landex {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

bool plausible_token_symbol(const std::string& symbol) {
    if (symbol.empty() || symbol.size() > 16) return false;
    return std::all_of(symbol.begin(), symbol.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

Token parse_token_field(const std::string& text, const ParseOptions& options,
                        std::size_t line_no) {
    Token token(text);
    if (token.is_usd())
        throw UnknownToken("line " + std::to_string(line_no) +
                           ": USD is a denomination, not a settlement token");
    if (!plausible_token_symbol(token.symbol()))
        throw UnknownToken("line " + std::to_string(line_no) + ": bad token symbol '" +
                           text + "'");
    if (options.strict_tokens) {
        const auto& known = Token::registry();
        if (std::find(known.begin(), known.end(), token.symbol()) == known.end())
            throw UnknownToken("line " + std::to_string(line_no) + ": token '" +
                               token.symbol() + "' not in registry (strict mode)");
    }
    return token;
}

int parse_int_field(const std::string& text, const char* what, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw MalformedRow("line " + std::to_string(line_no) + ": bad " + what + " '" +
                           text + "'");
    }
}

}  // namespace

std::vector<RawSaleRecord> parse_transactions(std::istream& in,
                                              const ParseOptions& options) {
    static const std::string kHeader =
        "tx_id,timestamp,parcel_x,parcel_y,price_amount,token,sale_type,mint_date";

    std::string line;
    if (!std::getline(in, line)) throw MalformedRow("transactions file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw MalformedRow("transactions header must be '" + kHeader + "', got '" + line +
                           "'");

    std::vector<RawSaleRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8)
            throw MalformedRow("line " + std::to_string(line_no) + ": expected 8 fields, got " +
                               std::to_string(fields.size()));

        RawSaleRecord rec;
        rec.tx_id = fields[0];
        if (rec.tx_id.empty())
            throw MalformedRow("line " + std::to_string(line_no) + ": empty tx_id");
        try {
            rec.timestamp = parse_instant(fields[1]);
            rec.mint_date = parse_date(fields[7]);
        } catch (const BadTimestamp& e) {
            throw BadTimestamp("line " + std::to_string(line_no) + ": " + e.what());
        }
        rec.parcel.x = parse_int_field(fields[2], "parcel_x", line_no);
        rec.parcel.y = parse_int_field(fields[3], "parcel_y", line_no);
        if (rec.parcel.x < kGridMin || rec.parcel.x > kGridMax || rec.parcel.y < kGridMin ||
            rec.parcel.y > kGridMax)
            throw OutOfGrid("line " + std::to_string(line_no) + ": parcel (" + fields[2] +
                            "," + fields[3] + ") outside the 408x408 grid");
        try {
            rec.price_amount = Decimal::parse(fields[4]);
        } catch (const MalformedRow& e) {
            throw MalformedRow("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (rec.price_amount.is_negative())
            throw MalformedRow("line " + std::to_string(line_no) +
                               ": price_amount must be non-negative");
        rec.settlement = parse_token_field(fields[5], options, line_no);
        try {
            rec.sale_kind = parse_sale_kind(fields[6]);
        } catch (const MalformedRow& e) {
            throw MalformedRow("line " + std::to_string(line_no) + ": " + e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

PriceTable parse_price_table(std::istream& in) {
    static const std::string kHeader = "date,token,usd_price";

    std::string line;
    if (!std::getline(in, line)) throw MalformedRow("price file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw MalformedRow("price header must be '" + kHeader + "', got '" + line + "'");

    PriceTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw MalformedRow("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                               std::to_string(fields.size()));
        UtcDate date;
        try {
            date = parse_date(fields[0]);
        } catch (const BadTimestamp& e) {
            throw BadTimestamp("line " + std::to_string(line_no) + ": " + e.what());
        }
        const Token token(fields[1]);
        if (!plausible_token_symbol(token.symbol()) || token.is_usd())
            throw UnknownToken("line " + std::to_string(line_no) + ": bad token symbol '" +
                               fields[1] + "'");
        double price = 0.0;
        try {
            price = Decimal::parse(fields[2]).to_double();
        } catch (const MalformedRow& e) {
            throw MalformedRow("line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            table.add(date, token, price);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + std::string(e.what()));
        }
    }
    return table;
}

bool is_contiguous(const std::vector<ParcelCoord>& coords) {
    if (coords.empty()) throw EmptyBundle();
    std::set<ParcelCoord> unvisited(coords.begin(), coords.end());

    // Flood fill from an arbitrary member over 4-neighborhood edges.
    std::vector<ParcelCoord> frontier{*unvisited.begin()};
    unvisited.erase(unvisited.begin());
    while (!frontier.empty()) {
        const ParcelCoord cur = frontier.back();
        frontier.pop_back();
        const ParcelCoord neighbors[4] = {{cur.x - 1, cur.y},
                                          {cur.x + 1, cur.y},
                                          {cur.x, cur.y - 1},
                                          {cur.x, cur.y + 1}};
        for (const auto& n : neighbors) {
            const auto it = unvisited.find(n);
            if (it != unvisited.end()) {
                frontier.push_back(n);
                unvisited.erase(it);
            }
        }
    }
    return unvisited.empty();
}

std::int64_t compute_age(UtcDate mint_date, UtcInstant timestamp) {
    const std::int64_t age = timestamp.date().days - mint_date.days;
    if (age < 0)
        throw NegativeAge("sale at " + format_instant(timestamp) + " predates mint date " +
                          format_date(mint_date));
    return age;
}

BundleAggregation aggregate_to_bundles(const std::vector<RawSaleRecord>& records,
                                       RowPriceMode mode) {
    // Group rows by tx_id, keeping first-appearance order for deterministic
    // output regardless of container iteration quirks.
    std::unordered_map<std::string, std::size_t> group_index;
    std::vector<std::vector<const RawSaleRecord*>> groups;
    for (const auto& rec : records) {
        const auto [it, inserted] = group_index.emplace(rec.tx_id, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(&rec);
    }

    BundleAggregation out;
    for (const auto& group : groups) {
        const RawSaleRecord& first = *group.front();
        std::vector<ParcelCoord> parcels;
        parcels.reserve(group.size());
        Decimal price = first.price_amount;
        UtcDate mint = first.mint_date;
        for (std::size_t i = 0; i < group.size(); ++i) {
            const RawSaleRecord& rec = *group[i];
            if (rec.timestamp != first.timestamp || rec.settlement != first.settlement ||
                rec.sale_kind != first.sale_kind)
                throw InconsistentGroup("tx '" + first.tx_id +
                                        "': parcels disagree on timestamp, token, or sale type");
            parcels.push_back(rec.parcel);
            if (i > 0 && mode == RowPriceMode::PerParcel)
                price = price.plus(rec.price_amount);
            mint = std::min(mint, rec.mint_date);
        }

        if (!is_contiguous(parcels)) {
            out.rejected.push_back(RejectedGroup{first.tx_id, std::move(parcels)});
            continue;
        }

        Transaction tx;
        tx.tx_id = first.tx_id;
        tx.bundle = canonical_bundle_key(std::move(parcels));
        tx.lot_size = tx.bundle.lot_size();
        tx.timestamp = first.timestamp;
        tx.price_amount = price;
        tx.settlement = first.settlement;
        tx.sale_kind = first.sale_kind;
        tx.mint_date = mint;
        try {
            tx.age_days = compute_age(mint, first.timestamp);
        } catch (const NegativeAge& e) {
            throw NegativeAge("tx '" + first.tx_id + "': " + e.what());
        }
        out.transactions.push_back(std::move(tx));
    }
    return out;
}

DenominatedSale convert(const Transaction& tx, const Token& target,
                        const PriceTable& table) {
    if (tx.price_amount.is_zero())
        throw ZeroPrice("tx '" + tx.tx_id + "' has zero price");

    double price = 0.0;
    if (target == tx.settlement) {
        price = tx.price_amount.to_double();
    } else {
        const UtcDate date = tx.timestamp.date();
        const double rate =
            table.usd_price(date, tx.settlement) / table.usd_price(date, target);
        price = tx.price_amount.to_double() * rate;
    }
    return DenominatedSale{tx, target, price, std::log(price)};
}

double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) throw EmptyInput();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double h = static_cast<double>(n - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> winsorize(const std::vector<double>& values, WinsorBounds bounds) {
    if (values.empty()) throw EmptyInput();
    if (!(bounds.low_q >= 0.0 && bounds.low_q < bounds.high_q && bounds.high_q <= 1.0))
        throw InvalidConfig("winsor bounds must satisfy 0 <= low < high <= 1");
    const double lo = quantile_type7(values, bounds.low_q);
    const double hi = quantile_type7(values, bounds.high_q);
    std::vector<double> out;
    out.reserve(values.size());
    for (const double v : values) out.push_back(std::clamp(v, lo, hi));
    return out;
}

}  // namespace landex
