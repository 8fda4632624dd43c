#ifndef LANDEX_ERRORS_HPP
#define LANDEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace landex {

// Input / validation failures. The CLI maps these to exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures (rank deficiency, degenerate fits). CLI exit code 4.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyBundle : DataError {
    EmptyBundle() : DataError("bundle has no parcels") {}
};

struct OutOfGrid : DataError {
    explicit OutOfGrid(const std::string& what) : DataError(what) {}
};

struct DuplicateParcel : DataError {
    explicit DuplicateParcel(const std::string& what) : DataError(what) {}
};

struct MalformedRow : DataError {
    explicit MalformedRow(const std::string& what) : DataError(what) {}
};

struct UnknownToken : DataError {
    explicit UnknownToken(const std::string& what) : DataError(what) {}
};

struct BadTimestamp : DataError {
    explicit BadTimestamp(const std::string& what) : DataError(what) {}
};

struct DuplicatePriceRow : DataError {
    explicit DuplicatePriceRow(const std::string& what) : DataError(what) {}
};

struct NonPositivePrice : DataError {
    explicit NonPositivePrice(const std::string& what) : DataError(what) {}
};

struct InconsistentGroup : DataError {
    explicit InconsistentGroup(const std::string& what) : DataError(what) {}
};

struct NegativeAge : DataError {
    explicit NegativeAge(const std::string& what) : DataError(what) {}
};

struct MissingPrice : DataError {
    explicit MissingPrice(const std::string& what) : DataError(what) {}
};

struct ZeroPrice : DataError {
    explicit ZeroPrice(const std::string& what) : DataError(what) {}
};

struct EmptyInput : DataError {
    EmptyInput() : DataError("input is empty") {}
};

struct TooFewObservations : DataError {
    explicit TooFewObservations(const std::string& what) : DataError(what) {}
};

struct ConstantSeries : DataError {
    explicit ConstantSeries(const std::string& what) : DataError(what) {}
};

struct NoOverlap : DataError {
    explicit NoOverlap(const std::string& what) : DataError(what) {}
};

struct MissingTerm : DataError {
    explicit MissingTerm(const std::string& what) : DataError(what) {}
};

struct InvalidConfig : DataError {
    explicit InvalidConfig(const std::string& what) : DataError(what) {}
};

struct EmptyAfterFilter : DataError {
    explicit EmptyAfterFilter(const std::string& what) : DataError(what) {}
};

struct RankDeficient : NumericError {
    explicit RankDeficient(const std::string& what) : NumericError(what) {}
};

struct DimensionMismatch : NumericError {
    explicit DimensionMismatch(const std::string& what) : NumericError(what) {}
};

struct NonPositiveWeight : NumericError {
    explicit NonPositiveWeight(const std::string& what) : NumericError(what) {}
};

struct DegenerateVarianceFit : NumericError {
    explicit DegenerateVarianceFit(const std::string& what) : NumericError(what) {}
};

}  // namespace landex

#endif  // LANDEX_ERRORS_HPP
