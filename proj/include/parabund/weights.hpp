// include/parabund/weights.hpp - exact rational parabolic weights and window reduction.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace parabund {

using BigInt = boost::multiprecision::cpp_int;

/// An exact rational filtration index. Always stored reduced with a positive
/// denominator, so equality is structural.
class Weight {
public:
    Weight() = default;
    Weight(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    explicit Weight(const BigInt& n) : value_(n) {}
    Weight(const BigInt& numerator, const BigInt& denominator);

    /// Parses "p/q", "-p/q" or "n". Throws InputError on anything else.
    static Weight parse(std::string_view text);

    BigInt numerator() const;
    BigInt denominator() const;
    bool is_integer() const { return denominator() == 1; }

    /// "p/q", or "n" when the denominator is one.
    std::string str() const;
    double to_double() const;
    long double to_long_double() const;

    Weight operator-() const;
    Weight& operator+=(const Weight& rhs);
    Weight& operator-=(const Weight& rhs);
    Weight& operator*=(const Weight& rhs);
    Weight& operator/=(const Weight& rhs);

    friend Weight operator+(Weight lhs, const Weight& rhs) { return lhs += rhs; }
    friend Weight operator-(Weight lhs, const Weight& rhs) { return lhs -= rhs; }
    friend Weight operator*(Weight lhs, const Weight& rhs) { return lhs *= rhs; }
    friend Weight operator/(Weight lhs, const Weight& rhs) { return lhs /= rhs; }

    friend bool operator==(const Weight& lhs, const Weight& rhs) { return lhs.value_ == rhs.value_; }
    friend std::strong_ordering operator<=>(const Weight& lhs, const Weight& rhs);

private:
    using Rational = boost::multiprecision::cpp_rational;
    explicit Weight(Rational v) : value_(std::move(v)) {}

    Rational value_{0};
};

std::ostream& operator<<(std::ostream& os, const Weight& w);

BigInt floor_q(const Weight& w);
/// Ceiling, computed as -floor(-w).
BigInt ceil_q(const Weight& w);

/// w = reduced + shift with reduced in the half-open window (a-1, a].
struct WindowReduction {
    Weight reduced;
    BigInt shift;
};

/// shift = ceil(w - a), reduced = w - shift.
WindowReduction reduce_to_window(const Weight& w, const Weight& a);

/// True iff w lies in (a-1, a].
bool in_window(const Weight& w, const Weight& a);

/// Sorted copy; multisets of weights compare through this.
std::vector<Weight> sorted(std::vector<Weight> ws);
Weight sum(const std::vector<Weight>& ws);

/// Parses a comma separated list of rational literals ("-1/3,0,1/2").
std::vector<Weight> parse_weight_list(std::string_view text);

} // namespace parabund
