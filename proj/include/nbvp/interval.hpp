#pragma once

#include <stdexcept>
#include <string>

namespace nbvp {

class IntervalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DivisionByZeroInterval : public IntervalError {
  public:
    DivisionByZeroInterval() : IntervalError("division by an interval containing zero") {}
};

class NegativeDomain : public IntervalError {
  public:
    explicit NegativeDomain(const std::string& what) : IntervalError(what) {}
};

class EmptyIntersection : public IntervalError {
  public:
    EmptyIntersection() : IntervalError("intersection of disjoint intervals") {}
};

// Result of an operation would be unbounded (overflow or non-finite input).
class NonFiniteInterval : public IntervalError {
  public:
    explicit NonFiniteInterval(const std::string& what) : IntervalError(what) {}
};

/// Closed real interval [lo, hi] with finite endpoints.
///
/// Arithmetic is performed in round-to-nearest and each endpoint is then
/// moved outward to the neighbouring double whenever the rounded result is
/// not exact, so every result contains the exact image of its arguments.
/// Hardware rounding modes are never touched.
class Interval {
  public:
    constexpr Interval() = default;
    Interval(double point); // NOLINT(google-explicit-constructor)
    Interval(double lo, double hi);

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] double mid() const;
    [[nodiscard]] double width() const { return hi_ - lo_; }
    [[nodiscard]] double rad() const { return 0.5 * (hi_ - lo_); }
    /// Largest absolute value of a member.
    [[nodiscard]] double mag() const;
    /// Smallest absolute value of a member.
    [[nodiscard]] double mig() const;

    [[nodiscard]] bool contains(double v) const { return lo_ <= v && v <= hi_; }
    [[nodiscard]] bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
    [[nodiscard]] bool subset_of(const Interval& other) const {
        return other.lo_ <= lo_ && hi_ <= other.hi_;
    }
    [[nodiscard]] bool is_point() const { return lo_ == hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

  private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

Interval sqr(const Interval& a);
Interval abs(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);
Interval sqrt(const Interval& a);
Interval exp(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval pow_int(const Interval& a, int n);
/// Elementwise max/min of two intervals (images of max(s,t), min(s,t)).
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

/// Enclosure of pi, one ulp wide.
Interval const_pi();
/// Enclosure of c1 = tanh(1)^(-1/2) = sqrt((e^2+1)/(e^2-1)), one ulp wide.
Interval const_c1();

/// Directed-rounding helpers on doubles; exact when the operation is exact.
double add_down(double a, double b);
double add_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double next_down(double v);
double next_up(double v);

/// Decimal rendering with 17 significant digits rounded toward -inf
/// (`down == true`) or toward +inf.
std::string format_directed(double v, bool down);
/// "[lo, hi]" with the lower endpoint rounded down and the upper rounded up.
std::string to_string(const Interval& a);

/// Enclosure of a decimal literal such as "0.1" or "2.5e-3": a point
/// interval when the literal is exactly representable, otherwise the two
/// neighbouring doubles.
Interval enclose_decimal(const std::string& literal);

} // namespace nbvp
