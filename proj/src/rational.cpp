#include "sdsplit/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace sdsplit {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num < 0) throw std::invalid_argument("rational must be non-negative");
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::from_decimal(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::int64_t integral = 0, frac = 0, scale = 1;
    std::size_t i = 0;
    bool any_digit = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("bad rational literal: " + std::string(text));
        integral = integral * 10 + (text[i] - '0');
        any_digit = true;
    }
    if (i < text.size()) {  // fractional part
        for (++i; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9')
                throw std::invalid_argument("bad rational literal: " + std::string(text));
            if (scale > 100'000'000'000'000'000 / 10)
                throw std::invalid_argument("rational literal has too many digits");
            frac = frac * 10 + (text[i] - '0');
            scale *= 10;
            any_digit = true;
        }
    }
    if (!any_digit) throw std::invalid_argument("bad rational literal: " + std::string(text));
    return Rational(integral * scale + frac, scale);
}

std::string Rational::to_string() const {
    if (den == 1) return std::to_string(num);
    // Exact decimal form whenever the denominator is 2^a * 5^b.
    std::int64_t rest = den;
    std::int64_t mult = 1;
    int tens = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        mult *= 5;
        ++tens;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        mult *= 2;
        ++tens;
    }
    if (rest != 1) return std::to_string(num) + "/" + std::to_string(den);
    std::string digits = std::to_string(num * mult);
    while (static_cast<int>(digits.size()) <= tens) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - tens, '.');
    // trim trailing zeros but keep at least one fractional digit
    while (digits.back() == '0' && digits[digits.size() - 2] != '.') digits.pop_back();
    return digits;
}

bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }

}  // namespace sdsplit
