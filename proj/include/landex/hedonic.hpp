#ifndef LANDEX_HEDONIC_HPP
#define LANDEX_HEDONIC_HPP

#include <utility>
#include <vector>

#include "landex/ingest.hpp"
#include "landex/market_model.hpp"
#include "landex/price_index.hpp"
#include "landex/regress.hpp"

namespace landex {

// Column labels used by the hedonic design. Week dummy labels are
// kWeekLabelPrefix + WeekId::label().
inline constexpr const char* kWeekLabelPrefix = "week:";
inline constexpr const char* kLnLotSizeLabel = "ln_lot_size";
inline constexpr const char* kLnAgeLabel = "ln_age_days";
inline constexpr const char* kPrimarySaleLabel = "primary_sale";
inline constexpr const char* kSettleLabelPrefix = "settle:";
inline constexpr const char* kOtherTokenSymbol = "OTHER";

struct HedonicSpec {
    Token denomination = Token::usd();
    Token omitted_settlement = Token("ETH");
    WinsorBounds winsor;
    // Settlement tokens seen fewer than this many times fold into one
    // "OTHER" dummy so near-empty columns cannot produce spurious fits.
    int min_token_count = 2;
};

// Response is the log of the winsorized price level. Columns: one 0/1 dummy
// per observed week-year (no intercept), ln lot size, ln(age_days + 1), a
// primary-sale dummy (only when both sale kinds are observed, otherwise the
// column cannot vary), and one dummy per settlement token except the
// omitted category. Throws EmptyAfterFilter.
std::pair<DesignMatrix, Eigen::VectorXd> build_hedonic_design(
    const std::vector<DenominatedSale>& sales, const HedonicSpec& spec);

struct HedonicFit {
    PriceIndex index;
    RegressionResult regression;
};

// Fits the all-sales design and exponentiates the week dummies into the
// index, normalized at the earliest observed week.
HedonicFit hedonic_index(const std::vector<DenominatedSale>& sales,
                         const HedonicSpec& spec);

struct PremiumRow {
    std::string term;
    double estimate = 0.0;
    double robust_se = 0.0;
    double t_stat = 0.0;  // +/- infinity when the SE is exactly zero
};

// Control and settlement coefficients in report order: ln lot size, ln age,
// primary sale, then the settlement dummies (SAND, WETH, DAI, USDC first,
// remaining symbols alphabetically, OTHER last). Throws MissingTerm only if
// a control present in the design cannot be found, never for settlement
// dummies absent from the data.
std::vector<PremiumRow> settlement_premia(const RegressionResult& result);

// Count of sales dropped per reason while converting to one denomination.
struct ConversionDrops {
    int missing_price = 0;
    int zero_price = 0;
};

// Converts every transaction, silently dropping the ones the price table
// cannot bridge (this is how pre-introduction SAND sales leave the sample)
// and counting the drops.
std::vector<DenominatedSale> convert_all(const std::vector<Transaction>& txs,
                                         const Token& denomination,
                                         const PriceTable& table,
                                         ConversionDrops* drops = nullptr);

}  // namespace landex

#endif  // LANDEX_HEDONIC_HPP
