#include "nbvp/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nbvp {

namespace {

void require_even_panels(int panels) {
    if (panels < 2 || panels % 2 != 0) {
        throw std::invalid_argument("Simpson quadrature needs a positive even panel count, got " +
                                    std::to_string(panels));
    }
}

// A panel is one Simpson application: endpoints plus midpoint, so the node
// grid has 2 * panels subintervals of width h.
double simpson_weight(int j, int panels) {
    const int last = 2 * panels;
    const double h = 1.0 / last;
    if (j == 0 || j == last) {
        return h / 3.0;
    }
    return (j % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
}

double node(int j, int panels) { return static_cast<double>(j) / (2 * panels); }

double mode_value(int k, double x) {
    return k == 1 ? 1.0 : std::numbers::sqrt2 * std::cos((k - 1) * std::numbers::pi * x);
}

double mode_slope(int k, double x) {
    if (k == 1) {
        return 0.0;
    }
    const double f = (k - 1) * std::numbers::pi;
    return -std::numbers::sqrt2 * f * std::sin(f * x);
}

double inf_norm(const std::vector<double>& v) {
    double n = 0.0;
    for (double e : v) {
        n = std::max(n, std::fabs(e));
    }
    return n;
}

// Samples of the path z(x) = (x, w(x), w'(x)) on the Simpson nodes.
struct PathSamples {
    std::vector<double> x, w, dw, d2w, weight;
};

PathSamples sample_path(const CosCoeffs& b, int panels) {
    const TrigPoly w = reconstruct(b);
    PathSamples s;
    const auto n = 2 * static_cast<std::size_t>(panels) + 1;
    s.x.resize(n);
    s.w.resize(n);
    s.dw.resize(n);
    s.d2w.resize(n);
    s.weight.resize(n);
    for (int j = 0; j <= 2 * panels; ++j) {
        const auto i = static_cast<std::size_t>(j);
        s.x[i] = node(j, panels);
        s.w[i] = w.value(s.x[i]);
        s.dw[i] = w.d1(s.x[i]);
        s.d2w[i] = w.d2(s.x[i]);
        s.weight[i] = simpson_weight(j, panels);
    }
    return s;
}

} // namespace

void ProblemSpec::validate() const {
    if (m < 1) {
        throw std::invalid_argument("problem.m must be >= 1");
    }
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw std::invalid_argument("problem.R must be a positive finite number");
    }
    if (!(newton.tol > 0.0)) {
        throw std::invalid_argument("newton.tol must be positive");
    }
    if (newton.max_iter < 1) {
        throw std::invalid_argument("newton.max_iter must be >= 1");
    }
    if (!newton.b0.empty() && static_cast<int>(newton.b0.size()) != m) {
        throw std::invalid_argument("newton.b0 must have m = " + std::to_string(m) + " entries");
    }
    if (quad.solver_panels < 2 || quad.solver_panels % 2 != 0) {
        throw std::invalid_argument("solver panel count must be a positive even integer");
    }
    if (quad.rigor_panels < 2 || quad.rigor_panels % 2 != 0) {
        throw std::invalid_argument("rigor.panels must be a positive even integer");
    }
    if (quad.subdiv < 1) {
        throw std::invalid_argument("rigor.subdiv must be >= 1");
    }
    if (quad.remainder_cells < 1) {
        throw std::invalid_argument("rigor.remainder_cells must be >= 1");
    }
}

double simpson_fixed(const PathExpr& g, int panels) {
    require_even_panels(panels);
    const Tape tape(g.expr());
    std::vector<double> scratch;
    std::vector<double> terms(2 * static_cast<std::size_t>(panels) + 1);
    for (int j = 0; j <= 2 * panels; ++j) {
        double v = 0.0;
        tape.eval(node(j, panels), 0.0, 0.0, scratch, std::span<double>(&v, 1));
        terms[static_cast<std::size_t>(j)] = simpson_weight(j, panels) * v;
    }
    return pairwise_sum(terms);
}

std::vector<double> galerkin_residual(const ProblemSpec& p, const CosCoeffs& b) {
    const int panels = p.quad.solver_panels;
    require_even_panels(panels);
    const PathSamples s = sample_path(b, panels);
    const Tape f(p.f);
    const std::size_t n = s.x.size();
    std::vector<double> residual(n);
    std::vector<double> scratch;
    for (std::size_t j = 0; j < n; ++j) {
        double fv = 0.0;
        f.eval(s.x[j], s.w[j], s.dw[j], scratch, std::span<double>(&fv, 1));
        residual[j] = s.d2w[j] - fv;
    }
    std::vector<double> g(static_cast<std::size_t>(b.m()));
    std::vector<double> terms(n);
    for (int i = 1; i <= b.m(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            terms[j] = s.weight[j] * residual[j] * mode_value(i, s.x[j]);
        }
        g[static_cast<std::size_t>(i - 1)] = pairwise_sum(terms);
    }
    return g;
}

RealMatrix jacobian(const ProblemSpec& p, const CosCoeffs& b) {
    const int panels = p.quad.solver_panels;
    require_even_panels(panels);
    const PathSamples s = sample_path(b, panels);
    const Expr fu = diff(p.f, Var::u);
    const Expr fv = diff(p.f, Var::v);
    const Expr both[] = {fu, fv};
    const Tape partials{std::span<const Expr>(both)};
    const std::size_t n = s.x.size();
    std::vector<double> fu_s(n);
    std::vector<double> fv_s(n);
    std::vector<double> scratch;
    double out[2];
    for (std::size_t j = 0; j < n; ++j) {
        partials.eval(s.x[j], s.w[j], s.dw[j], scratch, out);
        fu_s[j] = out[0];
        fv_s[j] = out[1];
    }
    const int m = b.m();
    RealMatrix a(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    std::vector<double> terms(n);
    for (int j = 1; j <= m; ++j) {
        const double w = omega(j);
        for (int i = 1; i <= m; ++i) {
            for (std::size_t q = 0; q < n; ++q) {
                const double x = s.x[q];
                const double coupling = fu_s[q] * mode_value(j, x) / w + fv_s[q] * mode_slope(j, x) / w;
                terms[q] = s.weight[q] * coupling * mode_value(i, x);
            }
            const double delta = i == j ? diag_a(j) : 0.0;
            a(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = delta - pairwise_sum(terms);
        }
    }
    return a;
}

NewtonResult newton_solve(const ProblemSpec& p) {
    p.validate();
    NewtonResult result;
    result.b = p.newton.b0.empty() ? CosCoeffs::zeros(p.m) : CosCoeffs(p.newton.b0);
    std::vector<double> g = galerkin_residual(p, result.b);
    double norm = inf_norm(g);
    for (int it = 0; it < p.newton.max_iter; ++it) {
        result.residual_history.push_back(norm);
        if (norm <= p.newton.tol) {
            result.iterations = it;
            return result;
        }
        std::vector<double> step;
        try {
            std::vector<double> rhs(g.size());
            std::transform(g.begin(), g.end(), rhs.begin(), [](double v) { return -v; });
            step = solve(jacobian(p, result.b), rhs);
        } catch (const SingularMatrix&) {
            throw SingularJacobian(it);
        }
        double scale = 1.0;
        CosCoeffs trial;
        std::vector<double> g_trial;
        double norm_trial = 0.0;
        for (int h = 0; h <= p.newton.max_halvings; ++h) {
            std::vector<double> bt(step.size());
            for (std::size_t k = 0; k < bt.size(); ++k) {
                bt[k] = result.b.b()[k] + scale * step[k];
            }
            trial = CosCoeffs(std::move(bt));
            g_trial = galerkin_residual(p, trial);
            norm_trial = inf_norm(g_trial);
            if (norm_trial < norm) {
                break;
            }
            scale *= 0.5;
        }
        // After exhausting the halvings the shortest step is taken anyway.
        result.b = std::move(trial);
        g = std::move(g_trial);
        norm = norm_trial;
    }
    result.residual_history.push_back(norm);
    if (norm <= p.newton.tol) {
        result.iterations = p.newton.max_iter;
        return result;
    }
    throw NoConvergence(p.newton.max_iter, norm);
}

} // namespace nbvp
