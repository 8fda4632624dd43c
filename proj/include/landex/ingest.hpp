#ifndef LANDEX_INGEST_HPP
#define LANDEX_INGEST_HPP

#include <iosfwd>
#include <vector>

#include "landex/market_model.hpp"

namespace landex {

// One CSV row: a single parcel's share of a transaction.
struct RawSaleRecord {
    std::string tx_id;
    UtcInstant timestamp;
    ParcelCoord parcel;
    Decimal price_amount;
    Token settlement;
    SaleKind sale_kind = SaleKind::Secondary;
    UtcDate mint_date;
};

struct WinsorBounds {
    double low_q = 0.001;
    double high_q = 0.999;
};

// Whether each row carries its parcel's share of the price (summed per
// bundle) or the full bundle price repeated on every row (first row taken).
enum class RowPriceMode { PerParcel, PerBundle };

struct ParseOptions {
    // Strict mode rejects settlement tokens outside Token::registry();
    // lenient mode admits any alphanumeric symbol.
    bool strict_tokens = false;
};

// Reads `transactions.csv` rows:
//   tx_id,timestamp,parcel_x,parcel_y,price_amount,token,sale_type,mint_date
// Row order is preserved. Throws MalformedRow (with line number),
// UnknownToken, BadTimestamp.
std::vector<RawSaleRecord> parse_transactions(std::istream& in,
                                              const ParseOptions& options = {});

// Reads `prices.csv` rows: date,token,usd_price.
// Throws DuplicatePriceRow, NonPositivePrice, MalformedRow.
PriceTable parse_price_table(std::istream& in);

// True iff the coordinate set is connected under 4-neighborhood adjacency.
bool is_contiguous(const std::vector<ParcelCoord>& coords);

// A tx_id group that failed the contiguity filter.
struct RejectedGroup {
    std::string tx_id;
    std::vector<ParcelCoord> parcels;
};

struct BundleAggregation {
    std::vector<Transaction> transactions;
    std::vector<RejectedGroup> rejected;
};

// Groups parcel rows by tx_id into bundle-level transactions. Within a
// group the parcels must agree on timestamp, token, and sale kind
// (InconsistentGroup otherwise); the bundle price is the sum of the rows'
// amounts (or the first row's amount in PerBundle mode), the mint date is
// the earliest parcel mint date, and age is counted from that date.
// Non-contiguous groups land in `rejected`. Group order follows first
// appearance in the input.
BundleAggregation aggregate_to_bundles(const std::vector<RawSaleRecord>& records,
                                       RowPriceMode mode = RowPriceMode::PerParcel);

// Whole UTC days from mint date to the transaction date. Throws NegativeAge.
std::int64_t compute_age(UtcDate mint_date, UtcInstant timestamp);

// Re-expresses a transaction in `target` units through the daily USD bridge:
//   price = amount * usd(settlement, date) / usd(target, date).
// Identity conversions bypass the table. Throws MissingPrice / ZeroPrice.
DenominatedSale convert(const Transaction& tx, const Token& target,
                        const PriceTable& table);

// Linear-interpolation ("type 7") quantile of already positive values:
// position h = (n-1)*q, interpolated between adjacent order statistics.
double quantile_type7(std::vector<double> values, double q);

// Clamps every value into [Q(low_q), Q(high_q)], preserving input order.
// Throws EmptyInput.
std::vector<double> winsorize(const std::vector<double>& values, WinsorBounds bounds);

}  // namespace landex

#endif  // LANDEX_INGEST_HPP
