#include "parabund/weights.hpp"

#include "parabund/errors.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace parabund {

namespace mp = boost::multiprecision;

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw InputError("malformed rational literal \"" + std::string(whole) + "\"");
    }
    BigInt v{std::string(s)};
    return negative ? BigInt(-v) : v;
}

// floor(n / d) for d > 0; cpp_int division truncates toward zero.
BigInt floor_div(const BigInt& n, const BigInt& d) {
    BigInt q = n / d;
    if (n % d != 0 && n < 0) {
        --q;
    }
    return q;
}

} // namespace

Weight::Weight(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) {
        throw InputError("rational with zero denominator");
    }
    value_ = Rational(numerator, denominator);
}

Weight Weight::parse(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Weight(parse_integer(text, whole));
    }
    const BigInt num = parse_integer(text.substr(0, slash), whole);
    const std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
        throw InputError("malformed rational literal \"" + std::string(whole) + "\"");
    }
    return Weight(num, BigInt(std::string(den_text)));
}

BigInt Weight::numerator() const { return mp::numerator(value_); }
BigInt Weight::denominator() const { return mp::denominator(value_); }

std::string Weight::str() const {
    if (is_integer()) {
        return numerator().str();
    }
    return numerator().str() + "/" + denominator().str();
}

double Weight::to_double() const { return value_.convert_to<double>(); }

long double Weight::to_long_double() const { return value_.convert_to<long double>(); }

Weight Weight::operator-() const { return Weight(Rational(-value_)); }

Weight& Weight::operator+=(const Weight& rhs) {
    value_ += rhs.value_;
    return *this;
}

Weight& Weight::operator-=(const Weight& rhs) {
    value_ -= rhs.value_;
    return *this;
}

Weight& Weight::operator*=(const Weight& rhs) {
    value_ *= rhs.value_;
    return *this;
}

Weight& Weight::operator/=(const Weight& rhs) {
    if (rhs.value_ == 0) {
        throw CalculusError("division of a weight by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

std::strong_ordering operator<=>(const Weight& lhs, const Weight& rhs) {
    if (lhs.value_ < rhs.value_) return std::strong_ordering::less;
    if (lhs.value_ > rhs.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Weight& w) { return os << w.str(); }

BigInt floor_q(const Weight& w) { return floor_div(w.numerator(), w.denominator()); }

BigInt ceil_q(const Weight& w) { return -floor_q(-w); }

WindowReduction reduce_to_window(const Weight& w, const Weight& a) {
    BigInt shift = ceil_q(w - a);
    return {w - Weight(shift), std::move(shift)};
}

bool in_window(const Weight& w, const Weight& a) { return a - Weight(1) < w && w <= a; }

std::vector<Weight> sorted(std::vector<Weight> ws) {
    std::sort(ws.begin(), ws.end());
    return ws;
}

Weight sum(const std::vector<Weight>& ws) {
    Weight total;
    for (const auto& w : ws) total += w;
    return total;
}

std::vector<Weight> parse_weight_list(std::string_view text) {
    std::vector<Weight> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(Weight::parse(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace parabund
