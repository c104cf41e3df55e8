#pragma once

#include <stdexcept>
#include <string>

#include "nbvp/expr.hpp"
#include "nbvp/galerkin.hpp"
#include "nbvp/interval.hpp"
#include "nbvp/linalg.hpp"
#include "nbvp/parallel.hpp"
#include "nbvp/series.hpp"

namespace nbvp {

/// Raised when the Simpson remainder is wider than the plain Riemann
/// enclosure and fallback is disabled.
class FourthDerivativeBlowup : public std::runtime_error {
  public:
    FourthDerivativeBlowup() : std::runtime_error("Simpson remainder wider than Riemann enclosure") {}
};

/// A failure inside one certification stage; `stage()` names it.
class RigorStageError : public std::runtime_error {
  public:
    RigorStageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    [[nodiscard]] const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

struct EnclosureOptions {
    int remainder_cells = 32;
    bool allow_fallback = true;
    Exec exec = Exec::parallel;
};

struct IntegralEnclosure {
    Interval value;
    /// Simpson mode only: the node sum and the remainder enclosure.
    Interval simpson_sum;
    Interval remainder;
    bool fallback = false;
};

/// Encloses the integral of g over [0, 1] split into `panels` equal panels
/// (even for Simpson).
///
/// Simpson mode: one Simpson application per panel (endpoints and midpoint,
/// node spacing h = 1/(2 panels)) on interval-evaluated nodes, plus
/// -(h^5/90) g''''(xi) per panel, where g'''' is the symbolic fourth
/// derivative enclosed on `remainder_cells` sub-cells of the panel by the
/// intersection of its natural extension and its mean-value form. If the
/// remainder is wider than the Riemann enclosure the Riemann result is
/// returned and `fallback` is set (or FourthDerivativeBlowup is thrown).
///
/// Riemann mode: sum of panel width times the enclosure of g on each panel.
IntegralEnclosure enclose_integral(const PathExpr& g, int panels, QuadMode mode,
                                   const EnclosureOptions& options = {});

struct EtaBound {
    double eta = 0.0;
    /// Enclosure of the integral of the squared residual.
    Interval integral;
    bool fallback = false;
};

/// Upper bound on the L^2 norm of w'' - f(x, w, w') for w = reconstruct(b).
EtaBound eta_bound(const ProblemSpec& p, const CosCoeffs& b);

struct JacobianEnclosure {
    IntervalMatrix matrix;
    int fallbacks = 0;
};

/// Entrywise enclosure of the Galerkin Jacobian at b.
JacobianEnclosure interval_jacobian(const ProblemSpec& p, const CosCoeffs& b);

/// Certified lower bound on the smallest singular value of every matrix in
/// `a`, via an approximate inverse V of mid(a): with q >= ||I - V a||_F < 1,
/// ||a^{-1}||_F <= ||V||_F / (1 - q). Returns 0 when q >= 1 or mid(a) is
/// singular.
double nu0_bound(const IntervalMatrix& a);

/// Upper bound on ||f_u(z)||_C0 + ||f_u(z)||_C1 + ||f_u'(z)||_C0 + ||f_u'(z)||_C1
/// for z(x) = (x, w(x), w'(x)), with `subdiv` cells on [0, 1].
double n_bound(const ProblemSpec& p, const CosCoeffs& b, int subdiv);

/// Upper bound on c1 times the Frobenius norm of the (u, v) Hessian of f
/// over [0, 1] x [-c1 r, c1 r]^2. Axes the Hessian does not depend on are
/// not subdivided.
double k_bound(const ProblemSpec& p, double r, int subdiv);

struct NuAssembly {
    double L = 0.0;
    double nu = 0.0;
};

/// L = min(nu0, tail_lambda(m)), nu = L - N/(pi m) rounded down, clamped at 0.
NuAssembly assemble_nu(double nu0, int m, double N);

enum class CertStatus { verified, failed };
enum class FailureReason { none, nu_nonpositive, discriminant_negative, t_star_exceeds_r, stage_error };

std::string to_string(CertStatus s);
std::string to_string(FailureReason r);

struct Certificate {
    CertStatus status = CertStatus::failed;
    FailureReason reason = FailureReason::none;
    /// Stage that produced a failure ("kantorovich", "eta", ...).
    std::string stage;
    std::string detail;
    double t_star = 0.0;
    double t_dstar = 0.0;
    /// t** is infinite (K = 0); t_dstar then holds R.
    bool t_dstar_infinite = false;
    Interval t_star_enclosure;
    double radius_h2 = 0.0;
    double radius_c1 = 0.0;
    double uniqueness_radius = 0.0;
};

/// Kantorovich test on g1(t) = eta - nu t + (K/2) t^2.
Certificate kantorovich_verify(double eta, double nu, double K, double R);

struct RigorBounds {
    double eta = 0.0;
    double N = 0.0;
    double K = 0.0;
    double nu0 = 0.0;
    double L = 0.0;
    double nu = 0.0;
    double r = 0.0;
    double tail = 0.0;
    bool eta_fallback = false;
    int jacobian_fallbacks = 0;

    [[nodiscard]] bool quad_fallback() const { return eta_fallback || jacobian_fallbacks > 0; }
};

struct CertifyResult {
    RigorBounds bounds;
    Certificate certificate;
};

/// Full certification of candidate b. Stage failures throw RigorStageError.
CertifyResult certify(const ProblemSpec& p, const CosCoeffs& b);

/// The path z substituted into f_u and f_u' (in that order).
std::pair<PathExpr, PathExpr> linearisation_paths(const ProblemSpec& p, const CosCoeffs& b);
/// The residual w'' - f(x, w, w') as a path expression.
PathExpr residual_path(const ProblemSpec& p, const CosCoeffs& b);

namespace reference {

// Straightforward serial versions of the kernels above: tree-walking
// evaluation, no tapes, no threads. Kept to cross-check the optimised
// kernels bit for bit and as the benchmark baseline.
IntegralEnclosure enclose_integral(const PathExpr& g, int panels, QuadMode mode, int remainder_cells);
double n_bound(const ProblemSpec& p, const CosCoeffs& b, int subdiv);
double k_bound(const ProblemSpec& p, double r, int subdiv);

} // namespace reference

} // namespace nbvp
