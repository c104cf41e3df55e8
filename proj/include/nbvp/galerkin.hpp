#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nbvp/expr.hpp"
#include "nbvp/linalg.hpp"
#include "nbvp/parallel.hpp"
#include "nbvp/series.hpp"

namespace nbvp {

enum class QuadMode { simpson, riemann };

struct NewtonOptions {
    /// Initial guess in h_cos coordinates; empty means the zero vector.
    std::vector<double> b0;
    double tol = 1e-12;
    int max_iter = 50;
    int max_halvings = 10;
};

struct QuadratureOptions {
    int solver_panels = 1024;
    int rigor_panels = 64;
    /// Cells per axis for the N and K sup-norm enclosures.
    int subdiv = 256;
    /// Sub-cells per Simpson panel used to enclose the fourth derivative.
    int remainder_cells = 32;
    QuadMode mode = QuadMode::simpson;
    Exec exec = Exec::parallel;
};

/// The boundary value problem u'' = f(x, u, u'), u'(0) = u'(1) = 0 together
/// with the discretisation and search parameters.
struct ProblemSpec {
    Expr f;
    int m = 5;
    NewtonOptions newton;
    QuadratureOptions quad;
    /// Kantorovich search radius around the candidate (H^2 norm).
    double R = 1.0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

class SingularJacobian : public std::runtime_error {
  public:
    explicit SingularJacobian(int iteration)
        : std::runtime_error("singular Galerkin Jacobian at Newton iteration " + std::to_string(iteration)) {}
};

class NoConvergence : public std::runtime_error {
  public:
    NoConvergence(int max_iter, double residual)
        : std::runtime_error("Newton did not converge in " + std::to_string(max_iter) +
                             " iterations (residual " + std::to_string(residual) + ")") {}
};

/// Composite Simpson rule on [0, 1] with `panels` equal panels, each using
/// its two endpoints and midpoint. `panels` must be positive and even.
double simpson_fixed(const PathExpr& g, int panels);

/// G_i(b) = integral of (w'' - f(x, w, w')) times cosine_mode(i), i = 1..m,
/// with w = reconstruct(b), integrated by composite Simpson.
std::vector<double> galerkin_residual(const ProblemSpec& p, const CosCoeffs& b);

/// A_ij = a_j delta_ij - integral of (f_u(z) h2_mode(j) + f_u'(z) h2_mode(j)') cosine_mode(i).
RealMatrix jacobian(const ProblemSpec& p, const CosCoeffs& b);

struct NewtonResult {
    CosCoeffs b;
    int iterations = 0;
    /// Infinity norm of the residual before each iteration and at the end.
    std::vector<double> residual_history;
};

/// Damped Newton iteration on the Galerkin system; step halving (at most
/// `max_halvings` times) whenever the residual norm does not decrease.
NewtonResult newton_solve(const ProblemSpec& p);

} // namespace nbvp
