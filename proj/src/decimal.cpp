#include "landex/decimal.hpp"

#include <cctype>
#include <cstdlib>

namespace landex {

namespace {

constexpr int kMaxDigits = 36;

__int128 pow10_128(int n) {
    __int128 p = 1;
    for (int i = 0; i < n; ++i) p *= 10;
    return p;
}

int digit_count(__int128 v) {
    if (v < 0) v = -v;
    int n = 1;
    while (v >= 10) {
        v /= 10;
        ++n;
    }
    return n;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
    const std::string original(text);
    auto fail = [&original]() -> Decimal {
        throw MalformedRow("not a decimal number: '" + original + "'");
    };

    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }

    __int128 mantissa = 0;
    int scale = 0;
    int digits = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (seen_point) return fail();
            seen_point = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
        seen_digit = true;
        if (digits == 0 && c == '0' && !seen_point) {
            // leading integer zeros carry no information
            continue;
        }
        if (++digits > kMaxDigits)
            throw MalformedRow("decimal exceeds " + std::to_string(kMaxDigits) +
                               " significant digits: '" + original + "'");
        mantissa = mantissa * 10 + (c - '0');
        if (seen_point) ++scale;
    }
    if (!seen_digit) return fail();
    if (negative) mantissa = -mantissa;
    return Decimal(mantissa, scale);
}

Decimal Decimal::from_int(std::int64_t value) {
    return Decimal(static_cast<__int128>(value), 0);
}

void Decimal::normalize() {
    if (mantissa_ == 0) {
        scale_ = 0;
        return;
    }
    while (scale_ > 0 && mantissa_ % 10 == 0) {
        mantissa_ /= 10;
        --scale_;
    }
}

Decimal Decimal::plus(const Decimal& other) const {
    __int128 a = mantissa_;
    __int128 b = other.mantissa_;
    int scale = scale_;
    if (scale_ < other.scale_) {
        a *= pow10_128(other.scale_ - scale_);
        scale = other.scale_;
    } else if (other.scale_ < scale_) {
        b *= pow10_128(scale_ - other.scale_);
    }
    if (digit_count(a) > kMaxDigits || digit_count(b) > kMaxDigits)
        throw MalformedRow("decimal addition overflow");
    return Decimal(a + b, scale);
}

int Decimal::compare(const Decimal& other) const {
    __int128 a = mantissa_;
    __int128 b = other.mantissa_;
    if (scale_ < other.scale_) {
        a *= pow10_128(other.scale_ - scale_);
    } else if (other.scale_ < scale_) {
        b *= pow10_128(scale_ - other.scale_);
    }
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

double Decimal::to_double() const {
    return std::strtod(to_string().c_str(), nullptr);
}

std::string Decimal::to_string() const {
    __int128 v = mantissa_;
    const bool negative = v < 0;
    if (negative) v = -v;

    std::string digits;
    do {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    } while (v != 0);
    while (static_cast<int>(digits.size()) <= scale_) digits.push_back('0');

    std::string out;
    if (negative) out.push_back('-');
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        out.push_back(digits[static_cast<std::size_t>(i)]);
        if (i == scale_ && scale_ > 0) out.push_back('.');
    }
    return out;
}

}  // namespace landex
