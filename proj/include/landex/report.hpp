#ifndef LANDEX_REPORT_HPP
#define LANDEX_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "landex/hedonic.hpp"
#include "landex/repeat_sales.hpp"
#include "landex/stats.hpp"

namespace landex {

// Fixed-format float text shared by every emitted file, so reruns are
// byte-identical.
std::string format_number(double value);

// In-memory artifact set; everything is rendered first and written once, by
// a single writer, at the end of a run.
class OutputBundle {
  public:
    void add(const std::string& filename, std::string content);
    void write_all(const std::string& out_dir) const;
    const std::map<std::string, std::string>& files() const { return files_; }

  private:
    std::map<std::string, std::string> files_;
};

// CSV renderers for the external interfaces.
std::string index_csv(const PriceIndex& index);
std::string coefs_csv(const std::vector<PremiumRow>& rows);
std::string summary_csv(const SummaryStats& stats);
std::string series_csv(const WeeklySeries& series);
std::string bundles_csv(const std::vector<Transaction>& txs);

struct MoicRow {
    std::string bundle_hash;
    UtcInstant buy_ts;
    UtcInstant sell_ts;
    std::int64_t hold_weeks = 0;
    double moic = 0.0;
};

// Pairs that cannot be priced in the denomination are skipped and counted.
std::vector<MoicRow> moic_rows(const std::vector<RepeatSalePair>& pairs,
                               const Token& denomination, const PriceTable& table,
                               int* n_unpriceable = nullptr);
std::string moic_csv(const std::vector<MoicRow>& rows);

std::string diagnostics_text(const Token& denomination,
                             const CaseShillerDiagnostics& diag);

// Index levels as a weekly series, for correlation statistics.
WeeklySeries index_series(const PriceIndex& index);

// pearson() wrapped for report prose: degenerate series become nullopt
// rather than an error.
std::optional<double> correlation_or_null(const WeeklySeries& a, const WeeklySeries& b);

// Per-denomination bundle of everything the markdown report needs.
struct DenomReport {
    Token denomination;
    ConversionDrops drops;
    int n_priceable = 0;
    std::optional<HedonicFit> hedonic;
    std::string hedonic_error;
    bool hedonic_error_numeric = false;
    std::optional<CaseShillerResult> case_shiller;
    std::string case_shiller_error;
    bool case_shiller_error_numeric = false;
    std::vector<MoicRow> moics;
    int moic_unpriceable = 0;
};

struct ReportInputs {
    std::size_t parsed_rows = 0;
    std::size_t accepted_transactions = 0;
    std::size_t rejected_groups = 0;
    std::vector<Transaction> transactions;
    std::vector<RepeatSalePair> pairs;
    PriceTable prices;
    WinsorBounds winsor;
    std::vector<DenomReport> denoms;
};

std::string report_markdown(const ReportInputs& inputs);

}  // namespace landex

#endif  // LANDEX_REPORT_HPP
