#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sdsplit {

/// Exact non-negative rational, normalized with den > 0. Used wherever a
/// fraction of capacity must be compared against integer demands without
/// floating point (split thresholds, denomination sizes).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    /// Parses decimal text such as "0", "0.05", "1", ".4" exactly.
    static Rational from_decimal(std::string_view text);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;

    bool operator==(const Rational&) const = default;
};

bool operator<(const Rational& a, const Rational& b);

/// a * scale compared against value: value > a*scale, exactly.
inline bool exceeds(std::int64_t value, const Rational& a, std::int64_t scale) {
    return value * a.den > a.num * scale;
}

}  // namespace sdsplit
