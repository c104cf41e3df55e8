#include "nbvp/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nbvp {

namespace {

void require_index(int k, const char* what) {
    if (k < 1) {
        throw std::invalid_argument(std::string(what) + " requires an index >= 1");
    }
}

Interval mode_frequency_interval(int k) { return Interval(static_cast<double>(k - 1)) * const_pi(); }

} // namespace

double omega(int k) {
    require_index(k, "omega");
    const double t = (k - 1) * std::numbers::pi;
    const double t2 = t * t;
    return std::sqrt(1.0 + t2 + t2 * t2);
}

Interval omega_interval(int k) {
    require_index(k, "omega");
    const Interval t2 = sqr(mode_frequency_interval(k));
    return sqrt(Interval(1.0) + t2 + sqr(t2));
}

double tail_lambda(int m) {
    require_index(m, "tail_lambda");
    const double s = 1.0 / (m * std::numbers::pi);
    const double s2 = s * s;
    return 1.0 / std::sqrt(1.0 + s2 + s2 * s2);
}

Interval tail_lambda_interval(int m) {
    require_index(m, "tail_lambda");
    const Interval s2 = sqr(Interval(1.0) / (Interval(static_cast<double>(m)) * const_pi()));
    return Interval(1.0) / sqrt(Interval(1.0) + s2 + sqr(s2));
}

double diag_a(int k) {
    require_index(k, "diag_a");
    if (k == 1) {
        return 0.0;
    }
    const double t = (k - 1) * std::numbers::pi;
    return -(t * t) / omega(k);
}

Interval diag_a_interval(int k) {
    require_index(k, "diag_a");
    if (k == 1) {
        return Interval(0.0);
    }
    return -(sqr(mode_frequency_interval(k)) / omega_interval(k));
}

CosCoeffs CosCoeffs::from_amplitudes(std::span<const double> amplitudes) {
    std::vector<double> b(amplitudes.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        b[i] = amplitudes[i] * omega(static_cast<int>(i) + 1);
    }
    return CosCoeffs(std::move(b));
}

double CosCoeffs::amplitude(int k) const { return (*this)[k] / omega(k); }

std::vector<double> CosCoeffs::amplitudes() const {
    std::vector<double> a(b_.size());
    for (int k = 1; k <= m(); ++k) {
        a[static_cast<std::size_t>(k - 1)] = amplitude(k);
    }
    return a;
}

double h2_norm(const CosCoeffs& c) {
    double s = 0.0;
    for (double v : c.b()) {
        s += v * v;
    }
    return std::sqrt(s);
}

Interval h2_norm_interval(const CosCoeffs& c) {
    Interval s(0.0);
    for (double v : c.b()) {
        s += sqr(Interval(v));
    }
    return sqrt(s);
}

namespace {

Expr mode_argument(int k) {
    return Expr::constant(static_cast<double>(k - 1)) * Expr::pi() * Expr::variable(Var::x);
}

Expr sqrt2() { return Expr::constant(std::numbers::sqrt2, sqrt(Interval(2.0))); }

Expr mode_frequency(int k) { return Expr::constant(static_cast<double>(k - 1)) * Expr::pi(); }

Expr omega_constant(int k) { return Expr::constant(omega(k), omega_interval(k)); }

} // namespace

Expr cosine_mode(int k) {
    require_index(k, "cosine_mode");
    if (k == 1) {
        return Expr::constant(1.0);
    }
    return sqrt2() * cos(mode_argument(k));
}

Expr cosine_mode_derivative(int k) {
    require_index(k, "cosine_mode_derivative");
    if (k == 1) {
        return Expr();
    }
    return -(sqrt2() * mode_frequency(k)) * sin(mode_argument(k));
}

Expr h2_mode(int k) {
    require_index(k, "h2_mode");
    if (k == 1) {
        return Expr::constant(1.0);
    }
    return (sqrt2() / omega_constant(k)) * cos(mode_argument(k));
}

TrigPoly reconstruct(const CosCoeffs& c) {
    TrigPoly p;
    p.cos_coeff.resize(static_cast<std::size_t>(c.m()));
    for (int k = 1; k <= c.m(); ++k) {
        const Expr bk = Expr::constant(c[k]);
        if (k == 1) {
            p.cos_coeff[0] = c[1];
            p.w = p.w + bk;
            continue;
        }
        // Folded constant: value b_k sqrt2/omega(k), enclosure of the exact real.
        const Expr coeff = bk * sqrt2() / omega_constant(k);
        p.cos_coeff[static_cast<std::size_t>(k - 1)] = coeff.node().value;
        if (coeff.is_exactly(0.0)) {
            continue;
        }
        const Expr freq = mode_frequency(k);
        const Expr arg = mode_argument(k);
        p.w = p.w + coeff * cos(arg);
        p.dw = p.dw + (-(coeff * freq)) * sin(arg);
        p.d2w = p.d2w + (-(coeff * freq * freq)) * cos(arg);
    }
    return p;
}

double TrigPoly::value(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < cos_coeff.size(); ++i) {
        s += cos_coeff[i] * std::cos(static_cast<double>(i) * std::numbers::pi * x);
    }
    return s;
}

double TrigPoly::d1(double x) const {
    double s = 0.0;
    for (std::size_t i = 1; i < cos_coeff.size(); ++i) {
        const double f = static_cast<double>(i) * std::numbers::pi;
        s -= cos_coeff[i] * f * std::sin(f * x);
    }
    return s;
}

double TrigPoly::d2(double x) const {
    double s = 0.0;
    for (std::size_t i = 1; i < cos_coeff.size(); ++i) {
        const double f = static_cast<double>(i) * std::numbers::pi;
        s -= cos_coeff[i] * f * f * std::cos(f * x);
    }
    return s;
}

PathExpr substitute_path(const Expr& e, const TrigPoly& w) { return substitute_path(e, w.w, w.dw); }

} // namespace nbvp
