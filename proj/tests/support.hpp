#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "nbvp/expr.hpp"
#include "nbvp/interval.hpp"
#include "nbvp/series.hpp"

namespace nbvp::test {

inline double ulp(double v) {
    const double a = std::fabs(v);
    return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(0x5eed1234abcdULL);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Interval random_interval(double scale = 10.0) {
    const double a = uniform(-scale, scale);
    const double w = std::pow(10.0, uniform(-12.0, 0.5));
    return {a, a + w};
}

inline double sample(const Interval& x) {
    const double t = uniform(0.0, 1.0);
    const double v = x.lo() + t * (x.hi() - x.lo());
    return std::min(std::max(v, x.lo()), x.hi());
}

/// Random smooth expression in x, u, v. Denominators are kept >= 1 and
/// exp arguments bounded, so values and derivatives stay moderate on [-1, 1]^3.
inline Expr random_expr(int depth) {
    const Expr leaves[] = {Expr::variable(Var::x), Expr::variable(Var::u), Expr::variable(Var::v),
                           Expr::constant(uniform(-2.0, 2.0))};
    if (depth <= 0) {
        return leaves[uniform_int(0, 3)];
    }
    const Expr a = random_expr(depth - 1);
    switch (uniform_int(0, 9)) {
    case 0:
        return a + random_expr(depth - 1);
    case 1:
        return a - random_expr(depth - 1);
    case 2:
    case 3:
        return a * random_expr(depth - 1);
    case 4: {
        const Expr b = random_expr(depth - 1);
        return a / (Expr::constant(1.5) + b * b);
    }
    case 5:
        return -a;
    case 6:
        return pow_int(a, uniform_int(0, 3));
    case 7:
        return sin(a);
    case 8:
        return cos(a);
    default:
        return exp(sin(a));
    }
}

/// Dense-sampling trapezoid integral of a float function on [0, 1].
template <class F>
double dense_integral(F&& f, int n = 20000) {
    double s = 0.5 * (f(0.0) + f(1.0));
    for (int j = 1; j < n; ++j) {
        s += f(static_cast<double>(j) / n);
    }
    return s / n;
}

/// Composite Simpson integral of a float function on [0, 1], independent of
/// the library's quadrature.
template <class F>
double simpson_oracle(F&& f, int n = 4096) {
    double s = f(0.0) + f(1.0);
    for (int j = 1; j < n; ++j) {
        s += (j % 2 == 1 ? 4.0 : 2.0) * f(static_cast<double>(j) / n);
    }
    return s / (3.0 * n);
}

} // namespace nbvp::test
