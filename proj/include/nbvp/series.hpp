#pragma once

#include <span>
#include <vector>

#include "nbvp/expr.hpp"
#include "nbvp/interval.hpp"

namespace nbvp {

/// Basis weight omega(k) = sqrt(1 + ((k-1)pi)^2 + ((k-1)pi)^4), k >= 1.
double omega(int k);
Interval omega_interval(int k);

/// (pi m)^2 / omega(m+1): the smallest modulus of the diagonal tail beyond m.
double tail_lambda(int m);
Interval tail_lambda_interval(int m);

/// a_1 = 0, a_k = -(pi(k-1))^2 / omega(k): diagonal of the second-derivative
/// operator in h_cos coordinates.
double diag_a(int k);
Interval diag_a_interval(int k);

/// Candidate coefficients in h_cos coordinates. Mode k (1-based) contributes
/// b_k * sqrt(2) cos((k-1) pi x) / omega(k), mode 1 the constant b_1, so the
/// H^2 norm of the function is the Euclidean norm of b.
class CosCoeffs {
  public:
    CosCoeffs() = default;
    explicit CosCoeffs(std::vector<double> b) : b_(std::move(b)) {}
    static CosCoeffs zeros(int m) { return CosCoeffs(std::vector<double>(static_cast<std::size_t>(m), 0.0)); }
    /// From the coefficients of 1, sqrt(2)cos(pi x), sqrt(2)cos(2 pi x), ...
    static CosCoeffs from_amplitudes(std::span<const double> amplitudes);

    [[nodiscard]] int m() const { return static_cast<int>(b_.size()); }
    [[nodiscard]] std::span<const double> b() const { return b_; }
    [[nodiscard]] std::vector<double>& values() { return b_; }
    [[nodiscard]] double operator[](int k) const { return b_[static_cast<std::size_t>(k - 1)]; }
    /// Coefficient of sqrt(2) cos((k-1) pi x) (of 1 for k = 1): b_k / omega(k).
    [[nodiscard]] double amplitude(int k) const;
    [[nodiscard]] std::vector<double> amplitudes() const;

  private:
    std::vector<double> b_;
};

double h2_norm(const CosCoeffs& c);
Interval h2_norm_interval(const CosCoeffs& c);

/// L^2-orthonormal cosine basis function: 1 for k = 1, sqrt(2) cos((k-1) pi x).
Expr cosine_mode(int k);
/// Its x-derivative.
Expr cosine_mode_derivative(int k);
/// H^2-orthonormal basis function cosine_mode(k) / omega(k).
Expr h2_mode(int k);

/// A trigonometric polynomial with closed forms for w, w' and w''.
/// Coefficients in the expressions carry enclosures of the exact reals
/// b_k sqrt(2) / omega(k); the doubles `cos_coeff` are their float values.
struct TrigPoly {
    Expr w;
    Expr dw;
    Expr d2w;
    /// Coefficient of cos((k-1) pi x), index k-1.
    std::vector<double> cos_coeff;

    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double d1(double x) const;
    [[nodiscard]] double d2(double x) const;
};

TrigPoly reconstruct(const CosCoeffs& c);

PathExpr substitute_path(const Expr& e, const TrigPoly& w);

} // namespace nbvp
