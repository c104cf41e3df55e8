#include "nbvp/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string_view>

namespace nbvp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude the FMA-based error terms may themselves be rounded,
// so the helpers give up on exactness detection and widen unconditionally.
constexpr double kTiny = 0x1p-960;

void require_finite(double v, const char* op) {
    if (!std::isfinite(v)) {
        throw NonFiniteInterval(std::string("non-finite result in ") + op);
    }
}

// Error-free transformation: a + b == s + err exactly.
double two_sum_error(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

double step_down(double v, int ulps) {
    for (int i = 0; i < ulps; ++i) {
        v = next_down(v);
    }
    return v;
}

double step_up(double v, int ulps) {
    for (int i = 0; i < ulps; ++i) {
        v = next_up(v);
    }
    return v;
}

// Libm results for exp/sin/cos are within one ulp on glibc; two ulps of
// inflation per endpoint covers that error.
constexpr int kLibmSlack = 2;

double pow_nonneg(double x, int n, bool down) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r = down ? mul_down(r, x) : mul_up(r, x);
    }
    return r;
}

// x^n rounded in the requested direction, any sign of x.
double pow_point(double x, int n, bool down) {
    if (x >= 0.0 || n % 2 == 0) {
        return pow_nonneg(std::fabs(x), n, down);
    }
    return -pow_nonneg(-x, n, !down);
}

struct Decimal {
    bool negative = false;
    std::string digits; // significant digits, no leading zeros; empty == 0
    long exponent = 0;  // value = 0.d1d2d3... * 10^exponent
};

void strip_trailing_zeros(Decimal& d) {
    while (!d.digits.empty() && d.digits.back() == '0') {
        d.digits.pop_back();
    }
    if (d.digits.empty()) {
        d.exponent = 0;
        d.negative = false;
    }
}

// Exact decimal expansion of a finite double (glibc printf is exact).
Decimal exact_decimal(double v) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, "%.780e", v);
    Decimal d;
    std::string_view s(buf);
    if (s.front() == '-') {
        d.negative = true;
        s.remove_prefix(1);
    }
    const auto e_pos = s.find('e');
    const long exp10 = std::strtol(std::string(s.substr(e_pos + 1)).c_str(), nullptr, 10);
    for (char c : s.substr(0, e_pos)) {
        if (c != '.') {
            d.digits.push_back(c);
        }
    }
    d.exponent = exp10 + 1;
    // The leading digit is nonzero unless v == 0.
    if (d.digits.front() == '0') {
        d.digits.clear();
    }
    strip_trailing_zeros(d);
    return d;
}

bool parse_decimal_literal(std::string_view s, Decimal& out) {
    Decimal d;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        d.negative = s[i] == '-';
        ++i;
    }
    std::string mantissa;
    long point_shift = 0;
    bool seen_point = false;
    bool any_digit = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c >= '0' && c <= '9') {
            any_digit = true;
            mantissa.push_back(c);
            if (seen_point) {
                --point_shift;
            }
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) {
        return false;
    }
    long exp10 = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        const std::string rest(s.substr(i));
        char* end = nullptr;
        exp10 = std::strtol(rest.c_str(), &end, 10);
        if (end == rest.c_str() || *end != '\0') {
            return false;
        }
        i = s.size();
    }
    if (i != s.size()) {
        return false;
    }
    std::size_t lead = 0;
    while (lead < mantissa.size() && mantissa[lead] == '0') {
        ++lead;
    }
    d.digits = mantissa.substr(lead);
    d.exponent = static_cast<long>(d.digits.size()) + point_shift + exp10;
    strip_trailing_zeros(d);
    out = d;
    return true;
}

} // namespace

double next_down(double v) { return std::nextafter(v, -kInf); }
double next_up(double v) { return std::nextafter(v, kInf); }

double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    return two_sum_error(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    return two_sum_error(a, b, s) > 0.0 ? next_up(s) : s;
}

double mul_down(double a, double b) {
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double p = a * b;
    if (!std::isfinite(p)) {
        return p;
    }
    if (std::fabs(p) < kTiny) {
        return next_down(p);
    }
    return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double p = a * b;
    if (!std::isfinite(p)) {
        return p;
    }
    if (std::fabs(p) < kTiny) {
        return next_up(p);
    }
    return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

double div_down(double a, double b) {
    if (a == 0.0) {
        return 0.0;
    }
    const double q = a / b;
    if (!std::isfinite(q)) {
        return q;
    }
    if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) {
        return next_down(q);
    }
    // a - q*b is exact; the true quotient is q + r/b.
    const double r = std::fma(-q, b, a);
    const bool below = (r < 0.0) != (b < 0.0) && r != 0.0;
    return below ? next_down(q) : q;
}

double div_up(double a, double b) {
    if (a == 0.0) {
        return 0.0;
    }
    const double q = a / b;
    if (!std::isfinite(q)) {
        return q;
    }
    if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) {
        return next_up(q);
    }
    const double r = std::fma(-q, b, a);
    const bool above = (r > 0.0) == (b > 0.0) && r != 0.0;
    return above ? next_up(q) : q;
}

Interval::Interval(double point) : lo_(point), hi_(point) {
    require_finite(point, "interval construction");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    require_finite(lo, "interval construction");
    require_finite(hi, "interval construction");
    if (!(lo <= hi)) {
        throw IntervalError("interval with lo > hi");
    }
}

double Interval::mid() const {
    if (lo_ == hi_) {
        return lo_;
    }
    return 0.5 * lo_ + 0.5 * hi_;
}

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const {
    if (contains_zero()) {
        return 0.0;
    }
    return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval operator+(const Interval& a, const Interval& b) {
    return {add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b) {
    return {add_down(a.lo(), -b.hi()), add_up(a.hi(), -b.lo())};
}

Interval operator-(const Interval& a) { return {-a.hi(), -a.lo()}; }

Interval operator*(const Interval& a, const Interval& b) {
    const double l = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()),
                               mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())});
    const double h = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()),
                               mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())});
    return {l, h};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) {
        throw DivisionByZeroInterval();
    }
    const double l = std::min({div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()),
                               div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())});
    const double h = std::max({div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()),
                               div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())});
    return {l, h};
}

Interval sqr(const Interval& a) {
    const double lo = a.mig();
    const double hi = a.mag();
    return {mul_down(lo, lo), mul_up(hi, hi)};
}

Interval abs(const Interval& a) { return {a.mig(), a.mag()}; }

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval intersect(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        throw EmptyIntersection();
    }
    return {lo, hi};
}

Interval max(const Interval& a, const Interval& b) {
    return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval min(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

namespace {

double sqrt_down(double v) {
    const double s = std::sqrt(v);
    if (v == 0.0) {
        return 0.0;
    }
    if (v < kTiny) {
        return next_down(s);
    }
    return std::fma(-s, s, v) < 0.0 ? next_down(s) : s;
}

double sqrt_up(double v) {
    const double s = std::sqrt(v);
    if (v == 0.0) {
        return 0.0;
    }
    if (v < kTiny) {
        return next_up(s);
    }
    return std::fma(-s, s, v) > 0.0 ? next_up(s) : s;
}

} // namespace

Interval sqrt(const Interval& a) {
    if (a.lo() < 0.0) {
        throw NegativeDomain("sqrt of an interval with negative lower endpoint " + to_string(a));
    }
    return {std::max(0.0, sqrt_down(a.lo())), sqrt_up(a.hi())};
}

Interval exp(const Interval& a) {
    const double hi = std::exp(a.hi());
    require_finite(hi, "exp");
    const double lo = std::max(0.0, step_down(std::exp(a.lo()), kLibmSlack));
    return {lo, step_up(hi, kLibmSlack)};
}

namespace {

// Beyond this magnitude argument multiples of pi are too coarse to track.
constexpr double kTrigArgLimit = 0x1p50;

enum class TrigKind { sine, cosine };

Interval trig(const Interval& a, TrigKind kind) {
    const Interval full(-1.0, 1.0);
    if (a.mag() > kTrigArgLimit || a.width() > 7.0) {
        return full;
    }
    const auto f = [kind](double v) { return kind == TrigKind::sine ? std::sin(v) : std::cos(v); };
    const double f_lo = f(a.lo());
    const double f_hi = f(a.hi());
    double lo = step_down(std::min(f_lo, f_hi), kLibmSlack);
    double hi = step_up(std::max(f_lo, f_hi), kLibmSlack);

    // Interior extrema sit at k*pi (cos) or (k + 1/2)*pi (sin). The candidate
    // index range is computed in interval arithmetic and may only be too wide,
    // which adds spurious extrema but never drops a real one.
    const Interval pi = const_pi();
    Interval q_lo = Interval(a.lo()) / pi;
    Interval q_hi = Interval(a.hi()) / pi;
    if (kind == TrigKind::sine) {
        q_lo -= Interval(0.5);
        q_hi -= Interval(0.5);
    }
    const double k_first = std::ceil(q_lo.lo());
    const double k_last = std::floor(q_hi.hi());
    for (double k = k_first; k <= k_last; k += 1.0) {
        const bool even = std::fmod(std::fabs(k), 2.0) == 0.0;
        if (even) {
            hi = 1.0;
        } else {
            lo = -1.0;
        }
    }
    return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

} // namespace

Interval sin(const Interval& a) { return trig(a, TrigKind::sine); }
Interval cos(const Interval& a) { return trig(a, TrigKind::cosine); }

Interval pow_int(const Interval& a, int n) {
    if (n < 0) {
        throw std::invalid_argument("pow_int requires a non-negative exponent");
    }
    if (n == 0) {
        return {1.0};
    }
    if (n == 1) {
        return a;
    }
    Interval r;
    if (n % 2 == 0) {
        r = Interval(pow_nonneg(a.mig(), n, true), pow_nonneg(a.mag(), n, false));
    } else {
        r = Interval(pow_point(a.lo(), n, true), pow_point(a.hi(), n, false));
    }
    return r;
}

Interval const_pi() { return {0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1}; }

Interval const_c1() { return {0x1.25583a9f9c31ap+0, 0x1.25583a9f9c31bp+0}; }

std::string format_directed(double v, bool down) {
    constexpr std::size_t kDigits = 17;
    if (!std::isfinite(v)) {
        return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    }
    Decimal d = exact_decimal(v);
    if (d.digits.empty()) {
        return "0.0000000000000000e+00";
    }
    std::string kept = d.digits.substr(0, std::min(kDigits, d.digits.size()));
    const bool inexact = d.digits.size() > kDigits;
    kept.resize(kDigits, '0');
    long exponent = d.exponent;
    // Truncation moves toward zero; round the magnitude up when that is the
    // wrong direction for the requested bound.
    const bool bump = inexact && (d.negative == down);
    if (bump) {
        int i = static_cast<int>(kDigits) - 1;
        while (i >= 0 && kept[static_cast<std::size_t>(i)] == '9') {
            kept[static_cast<std::size_t>(i)] = '0';
            --i;
        }
        if (i < 0) {
            kept.insert(kept.begin(), '1');
            kept.pop_back();
            ++exponent;
        } else {
            ++kept[static_cast<std::size_t>(i)];
        }
    }
    char exp_buf[32];
    std::snprintf(exp_buf, sizeof exp_buf, "e%+03ld", exponent - 1);
    std::string out;
    if (d.negative) {
        out.push_back('-');
    }
    out.push_back(kept[0]);
    out.push_back('.');
    out.append(kept, 1, std::string::npos);
    out.append(exp_buf);
    return out;
}

std::string to_string(const Interval& a) {
    return "[" + format_directed(a.lo(), true) + ", " + format_directed(a.hi(), false) + "]";
}

Interval enclose_decimal(const std::string& literal) {
    Decimal lit;
    if (!parse_decimal_literal(literal, lit)) {
        throw std::invalid_argument("malformed decimal literal '" + literal + "'");
    }
    const double d = std::strtod(literal.c_str(), nullptr);
    require_finite(d, "decimal literal");
    const Decimal exact = exact_decimal(d);
    if (exact.digits == lit.digits && exact.exponent == lit.exponent &&
        exact.negative == lit.negative) {
        return {d};
    }
    return {next_down(d), next_up(d)};
}

} // namespace nbvp
