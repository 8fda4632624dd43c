#ifndef LANDEX_DECIMAL_HPP
#define LANDEX_DECIMAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "landex/errors.hpp"

namespace landex {

// Exact decimal amount: integer mantissa plus base-10 scale. Monetary fields
// stay in this form through ingestion so CSV round-trips are lossless; they
// drop to double only when a regression or conversion needs arithmetic that
// decimals cannot express exactly.
//
// Capacity is 36 significant digits, enough for token amounts quoted in
// 18-decimal wei-style units. Addition is exact and overflow-checked.
class Decimal {
  public:
    Decimal() = default;

    // Parses a plain decimal string: [+-] digits [ '.' digits ].
    // Throws MalformedRow on anything else (including exponents).
    static Decimal parse(std::string_view text);

    static Decimal from_int(std::int64_t value);

    Decimal plus(const Decimal& other) const;

    bool is_zero() const { return mantissa_ == 0; }
    bool is_negative() const { return mantissa_ < 0; }

    // -1 / 0 / +1 comparison by numeric value.
    int compare(const Decimal& other) const;

    bool operator==(const Decimal& other) const { return compare(other) == 0; }
    bool operator<(const Decimal& other) const { return compare(other) < 0; }

    // Correctly rounded via strtod on the exact decimal text.
    double to_double() const;

    // Canonical text: no exponent, trailing fractional zeros stripped.
    std::string to_string() const;

  private:
    Decimal(__int128 mantissa, int scale) : mantissa_(mantissa), scale_(scale) {
        normalize();
    }

    void normalize();

    __int128 mantissa_ = 0;
    int scale_ = 0;  // digits after the decimal point
};

}  // namespace landex

#endif  // LANDEX_DECIMAL_HPP
