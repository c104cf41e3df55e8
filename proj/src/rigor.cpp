#include "nbvp/rigor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace nbvp {

namespace {

// [c/s, (c+1)/s] with outward-rounded endpoints. Cells for s and 2s nest.
Interval unit_cell(double c, double s) { return Interval(div_down(c, s), div_up(c + 1.0, s)); }

Interval unit_node(double j, double n) { return Interval(div_down(j, n), div_up(j, n)); }

double midpoint_of(const Interval& x) {
    const double c = 0.5 * (x.lo() + x.hi());
    return std::clamp(c, x.lo(), x.hi());
}

// g, g'''' and g''''' of one integrand, compiled.
struct CompiledIntegrand {
    Tape g;
    Tape g45;

    explicit CompiledIntegrand(const PathExpr& path, bool with_remainder) : g(path.expr()) {
        if (with_remainder) {
            const PathExpr d4 = path.derivative().derivative().derivative().derivative();
            const Expr both[] = {d4.expr(), d4.derivative().expr()};
            g45 = Tape(std::span<const Expr>(both));
        }
    }
};

struct PanelTerms {
    Interval simpson;
    Interval remainder;
};

Interval eval_g(const Tape& t, const Interval& x, std::vector<Interval>& scratch) {
    Interval out;
    t.eval(x, Interval(0.0), Interval(0.0), scratch, std::span<Interval>(&out, 1));
    return out;
}

// Encloses g'''' over panel i, [i/n, (i+1)/n], as the hull over `cells`
// sub-cells of natural extension intersected with the mean-value form.
Interval fourth_derivative_on_panel(const Tape& g45, std::size_t panel, int panels, int cells,
                                    std::vector<Interval>& scratch) {
    const double denom = static_cast<double>(panels) * cells;
    const double base = static_cast<double>(panel) * cells;
    Interval acc;
    for (int c = 0; c < cells; ++c) {
        const Interval x = unit_cell(base + c, denom);
        const Interval xc(midpoint_of(x));
        std::array<Interval, 2> on_cell;
        std::array<Interval, 2> at_centre;
        g45.eval(x, Interval(0.0), Interval(0.0), scratch, on_cell);
        g45.eval(xc, Interval(0.0), Interval(0.0), scratch, at_centre);
        const Interval mean_value = at_centre[0] + on_cell[1] * (x - xc);
        const Interval cell = intersect(on_cell[0], mean_value);
        acc = c == 0 ? cell : hull(acc, cell);
    }
    return acc;
}

IntegralEnclosure finish(const std::vector<PanelTerms>& panel_terms, std::span<const Interval> riemann_terms,
                         QuadMode mode, bool allow_fallback) {
    IntegralEnclosure r;
    const Interval riemann = pairwise_sum(riemann_terms);
    if (mode == QuadMode::riemann) {
        r.value = riemann;
        return r;
    }
    std::vector<Interval> s(panel_terms.size());
    std::vector<Interval> e(panel_terms.size());
    for (std::size_t i = 0; i < panel_terms.size(); ++i) {
        s[i] = panel_terms[i].simpson;
        e[i] = panel_terms[i].remainder;
    }
    r.simpson_sum = pairwise_sum(s);
    r.remainder = pairwise_sum(e);
    if (r.remainder.width() > riemann.width()) {
        if (!allow_fallback) {
            throw FourthDerivativeBlowup();
        }
        r.value = riemann;
        r.fallback = true;
        return r;
    }
    r.value = r.simpson_sum + r.remainder;
    return r;
}

void check_panels(int panels, QuadMode mode) {
    if (panels < 1 || (mode == QuadMode::simpson && panels % 2 != 0)) {
        throw std::invalid_argument("enclose_integral: Simpson needs a positive even panel count, got " +
                                    std::to_string(panels));
    }
}

// A panel is one Simpson application on [j/n, (j+1)/n] with its midpoint;
// the node spacing h is half the panel width.
struct SimpsonConstants {
    Interval width;
    Interval h_third;
    Interval remainder_scale;
};

SimpsonConstants simpson_constants(int panels) {
    const Interval width = Interval(1.0) / Interval(static_cast<double>(panels));
    const Interval h = width / Interval(2.0);
    return {width, h / Interval(3.0), pow_int(h, 5) / Interval(90.0)};
}

template <class Stage>
auto run_stage(const char* name, Stage&& stage) -> decltype(stage()) {
    try {
        return stage();
    } catch (const RigorStageError&) {
        throw;
    } catch (const std::exception& e) {
        throw RigorStageError(name, e.what());
    }
}

std::array<Expr, 3> uv_hessian(const Expr& f) {
    const Expr fu = diff(f, Var::u);
    const Expr fv = diff(f, Var::v);
    return {diff(fu, Var::u), diff(fu, Var::v), diff(fv, Var::v)};
}

Interval frobenius_of_hessian(const Interval& uu, const Interval& uv, const Interval& vv) {
    return sqrt(sqr(uu) + Interval(2.0) * sqr(uv) + sqr(vv));
}

// Cell c of s equal parts of [-rho, rho].
Interval symmetric_cell(double rho, double c, double s) {
    const Interval left(-rho);
    const Interval span(2.0 * rho);
    const Interval a = left + span * (Interval(c) / Interval(s));
    const Interval b = left + span * (Interval(c + 1.0) / Interval(s));
    return Interval(a.lo(), b.hi());
}

struct KGrid {
    double rho = 0.0;
    std::size_t nx = 1, nu = 1, nv = 1;

    [[nodiscard]] std::size_t size() const { return nx * nu * nv; }

    [[nodiscard]] std::array<Interval, 3> cell(std::size_t idx) const {
        const std::size_t iv = idx % nv;
        const std::size_t iu = (idx / nv) % nu;
        const std::size_t ix = idx / (nv * nu);
        return {unit_cell(static_cast<double>(ix), static_cast<double>(nx)),
                symmetric_cell(rho, static_cast<double>(iu), static_cast<double>(nu)),
                symmetric_cell(rho, static_cast<double>(iv), static_cast<double>(nv))};
    }
};

KGrid k_grid(const std::array<Expr, 3>& h, double r, int subdiv) {
    auto uses = [&](Var var) {
        return std::any_of(h.begin(), h.end(), [&](const Expr& e) { return e.depends_on(var); });
    };
    KGrid g;
    g.rho = (const_c1() * Interval(r)).hi();
    const auto s = static_cast<std::size_t>(subdiv);
    g.nx = uses(Var::x) ? s : 1;
    g.nu = uses(Var::u) ? s : 1;
    g.nv = uses(Var::v) ? s : 1;
    return g;
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) {
        m = std::max(m, e);
    }
    return m;
}

void check_subdiv(int subdiv) {
    if (subdiv < 1) {
        throw std::invalid_argument("subdivision count must be >= 1");
    }
}

struct NCellNorms {
    double c0_u = 0.0, c1_u = 0.0, c0_v = 0.0, c1_v = 0.0;
};

NCellNorms norms_from(const Interval& g1, const Interval& dg1, const Interval& g2, const Interval& dg2) {
    return {abs(g1).hi(), sqrt(sqr(g1) + sqr(dg1)).hi(), abs(g2).hi(), sqrt(sqr(g2) + sqr(dg2)).hi()};
}

double combine_norms(const std::vector<NCellNorms>& cells) {
    NCellNorms m;
    for (const auto& c : cells) {
        m.c0_u = std::max(m.c0_u, c.c0_u);
        m.c1_u = std::max(m.c1_u, c.c1_u);
        m.c0_v = std::max(m.c0_v, c.c0_v);
        m.c1_v = std::max(m.c1_v, c.c1_v);
    }
    return (Interval(m.c0_u) + Interval(m.c1_u) + Interval(m.c0_v) + Interval(m.c1_v)).hi();
}

} // namespace

IntegralEnclosure enclose_integral(const PathExpr& g, int panels, QuadMode mode, const EnclosureOptions& options) {
    check_panels(panels, mode);
    if (options.remainder_cells < 1) {
        throw std::invalid_argument("remainder_cells must be >= 1");
    }
    const bool simpson = mode == QuadMode::simpson;
    const CompiledIntegrand ci(g, simpson);
    const double n = panels;
    const SimpsonConstants k = simpson_constants(panels);
    std::vector<Interval> riemann(static_cast<std::size_t>(panels));

    if (!simpson) {
        for_each_index(options.exec, riemann.size(), [&](std::size_t j) {
            std::vector<Interval> scratch;
            riemann[j] = k.width * eval_g(ci.g, unit_cell(static_cast<double>(j), n), scratch);
        });
        return finish({}, riemann, mode, options.allow_fallback);
    }

    std::vector<PanelTerms> panel_terms(static_cast<std::size_t>(panels));
    for_each_index(options.exec, panel_terms.size(), [&](std::size_t i) {
        std::vector<Interval> scratch;
        const double j = 2.0 * static_cast<double>(i);
        const Interval g0 = eval_g(ci.g, unit_node(j, 2.0 * n), scratch);
        const Interval g1 = eval_g(ci.g, unit_node(j + 1.0, 2.0 * n), scratch);
        const Interval g2 = eval_g(ci.g, unit_node(j + 2.0, 2.0 * n), scratch);
        PanelTerms& t = panel_terms[i];
        t.simpson = k.h_third * (g0 + Interval(4.0) * g1 + g2);
        const Interval d4 = fourth_derivative_on_panel(ci.g45, i, panels, options.remainder_cells, scratch);
        t.remainder = -(k.remainder_scale * d4);
        riemann[i] = k.width * eval_g(ci.g, unit_cell(static_cast<double>(i), n), scratch);
    });
    return finish(panel_terms, riemann, mode, options.allow_fallback);
}

PathExpr residual_path(const ProblemSpec& p, const CosCoeffs& b) {
    const TrigPoly w = reconstruct(b);
    return PathExpr(w.d2w - substitute_path(p.f, w).expr());
}

std::pair<PathExpr, PathExpr> linearisation_paths(const ProblemSpec& p, const CosCoeffs& b) {
    const TrigPoly w = reconstruct(b);
    return {substitute_path(diff(p.f, Var::u), w), substitute_path(diff(p.f, Var::v), w)};
}

EtaBound eta_bound(const ProblemSpec& p, const CosCoeffs& b) {
    const PathExpr res = residual_path(p, b);
    const PathExpr sq(res.expr() * res.expr());
    const EnclosureOptions opts{p.quad.remainder_cells, true, p.quad.exec};
    const IntegralEnclosure e = enclose_integral(sq, p.quad.rigor_panels, p.quad.mode, opts);
    EtaBound out;
    out.integral = e.value;
    out.fallback = e.fallback;
    const Interval clamped(std::max(e.value.lo(), 0.0), std::max(e.value.hi(), 0.0));
    out.eta = sqrt(clamped).hi();
    return out;
}

JacobianEnclosure interval_jacobian(const ProblemSpec& p, const CosCoeffs& b) {
    const int m = b.m();
    const auto [fu, fv] = linearisation_paths(p, b);
    const auto dim = static_cast<std::size_t>(m);
    JacobianEnclosure out{IntervalMatrix(dim, dim), 0};
    std::vector<int> fell_back(dim * dim, 0);
    const EnclosureOptions opts{p.quad.remainder_cells, true, Exec::serial};
    for_each_index(p.quad.exec, dim * dim, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / dim) + 1;
        const int j = static_cast<int>(idx % dim) + 1;
        const Expr uj = h2_mode(j);
        const Expr coupling = fu.expr() * uj + fv.expr() * diff(uj, Var::x);
        const PathExpr integrand(coupling * cosine_mode(i));
        const IntegralEnclosure e = enclose_integral(integrand, p.quad.rigor_panels, p.quad.mode, opts);
        const Interval delta = i == j ? diag_a_interval(j) : Interval(0.0);
        out.matrix(idx / dim, idx % dim) = delta - e.value;
        fell_back[idx] = e.fallback ? 1 : 0;
    });
    for (int f : fell_back) {
        out.fallbacks += f;
    }
    return out;
}

double nu0_bound(const IntervalMatrix& a) {
    const std::size_t n = a.rows();
    RealMatrix v;
    try {
        v = inverse(midpoint(a));
    } catch (const SingularMatrix&) {
        return 0.0;
    }
    Interval e_sq(0.0);
    Interval v_sq(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Interval s(i == j ? 1.0 : 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                s -= Interval(v(i, k)) * a(k, j);
            }
            e_sq += sqr(s);
            v_sq += sqr(Interval(v(i, j)));
        }
    }
    const double q = sqrt(e_sq).hi();
    if (!(q < 1.0)) {
        return 0.0;
    }
    const double nu0 = ((Interval(1.0) - Interval(q)) / sqrt(v_sq)).lo();
    return std::max(nu0, 0.0);
}

double n_bound(const ProblemSpec& p, const CosCoeffs& b, int subdiv) {
    check_subdiv(subdiv);
    const auto [fu, fv] = linearisation_paths(p, b);
    const Expr outs[] = {fu.expr(), fu.derivative().expr(), fv.expr(), fv.derivative().expr()};
    const Tape tape{std::span<const Expr>(outs)};
    std::vector<NCellNorms> cells(static_cast<std::size_t>(subdiv));
    for_each_index(p.quad.exec, cells.size(), [&](std::size_t c) {
        std::vector<Interval> scratch;
        std::array<Interval, 4> g;
        tape.eval(unit_cell(static_cast<double>(c), subdiv), Interval(0.0), Interval(0.0), scratch, g);
        cells[c] = norms_from(g[0], g[1], g[2], g[3]);
    });
    return combine_norms(cells);
}

double k_bound(const ProblemSpec& p, double r, int subdiv) {
    check_subdiv(subdiv);
    const auto h = uv_hessian(p.f);
    const KGrid grid = k_grid(h, r, subdiv);
    const Tape tape{std::span<const Expr>(h)};
    std::vector<double> cells(grid.size());
    for_each_index(p.quad.exec, cells.size(), [&](std::size_t idx) {
        std::vector<Interval> scratch;
        std::array<Interval, 3> out;
        const auto box = grid.cell(idx);
        tape.eval(box[0], box[1], box[2], scratch, out);
        cells[idx] = frobenius_of_hessian(out[0], out[1], out[2]).hi();
    });
    return (const_c1() * Interval(max_of(cells))).hi();
}

NuAssembly assemble_nu(double nu0, int m, double N) {
    if (m < 1) {
        throw std::invalid_argument("assemble_nu: m must be >= 1");
    }
    NuAssembly a;
    a.L = std::min(nu0, tail_lambda_interval(m).lo());
    const Interval nu = Interval(a.L) - Interval(N) / (Interval(static_cast<double>(m)) * const_pi());
    a.nu = std::max(nu.lo(), 0.0);
    return a;
}

std::string to_string(CertStatus s) { return s == CertStatus::verified ? "Verified" : "Failed"; }

std::string to_string(FailureReason r) {
    switch (r) {
    case FailureReason::none:
        return "none";
    case FailureReason::nu_nonpositive:
        return "NuNonpositive";
    case FailureReason::discriminant_negative:
        return "DiscriminantNegative";
    case FailureReason::t_star_exceeds_r:
        return "TStarExceedsR";
    case FailureReason::stage_error:
        return "StageError";
    }
    return "unknown";
}

Certificate kantorovich_verify(double eta, double nu, double K, double R) {
    if (!(eta >= 0.0) || !(K >= 0.0) || !(R > 0.0) || !std::isfinite(eta) || !std::isfinite(K) ||
        !std::isfinite(nu)) {
        throw std::invalid_argument("kantorovich_verify: need finite eta >= 0, K >= 0, R > 0");
    }
    Certificate c;
    c.stage = "kantorovich";
    if (!(nu > 0.0)) {
        c.reason = FailureReason::nu_nonpositive;
        c.detail = "lower bound on the inverse of the linearisation is not positive";
        return c;
    }
    const Interval n(nu);
    if (K == 0.0) {
        c.t_star_enclosure = Interval(eta) / n;
        c.t_dstar = R;
        c.t_dstar_infinite = true;
    } else {
        const Interval disc = sqr(n) - Interval(2.0) * Interval(K) * Interval(eta);
        if (!(disc.lo() > 0.0)) {
            c.reason = FailureReason::discriminant_negative;
            c.detail = "nu^2 - 2 K eta is not certified positive";
            return c;
        }
        const Interval root = sqrt(disc);
        c.t_star_enclosure = Interval(2.0) * Interval(eta) / (n + root);
        c.t_dstar = ((n + root) / Interval(K)).lo();
    }
    c.t_star = c.t_star_enclosure.hi();
    if (!(c.t_star <= R)) {
        c.reason = FailureReason::t_star_exceeds_r;
        c.detail = "t* exceeds the search radius R";
        return c;
    }
    c.status = CertStatus::verified;
    c.stage.clear();
    c.radius_h2 = c.t_star;
    c.radius_c1 = (const_c1() * Interval(c.t_star)).hi();
    c.uniqueness_radius = std::min(c.t_dstar, R);
    return c;
}

CertifyResult certify(const ProblemSpec& p, const CosCoeffs& b) {
    run_stage("input", [&] {
        p.validate();
        if (b.m() != p.m) {
            throw std::invalid_argument("candidate has " + std::to_string(b.m()) + " coefficients, m = " +
                                        std::to_string(p.m));
        }
        for (double v : b.b()) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("candidate has a non-finite coefficient");
            }
        }
    });
    CertifyResult out;
    RigorBounds& bd = out.bounds;
    bd.r = run_stage("radius", [&] { return (h2_norm_interval(b) + Interval(p.R)).hi(); });
    const EtaBound eta = run_stage("eta", [&] { return eta_bound(p, b); });
    bd.eta = eta.eta;
    bd.eta_fallback = eta.fallback;
    const JacobianEnclosure a = run_stage("jacobian", [&] { return interval_jacobian(p, b); });
    bd.jacobian_fallbacks = a.fallbacks;
    bd.nu0 = run_stage("nu0", [&] { return nu0_bound(a.matrix); });
    bd.tail = run_stage("tail", [&] { return tail_lambda_interval(p.m).lo(); });
    bd.N = run_stage("N", [&] { return n_bound(p, b, p.quad.subdiv); });
    bd.K = run_stage("K", [&] { return k_bound(p, bd.r, p.quad.subdiv); });
    const NuAssembly nu = run_stage("nu", [&] { return assemble_nu(bd.nu0, p.m, bd.N); });
    bd.L = nu.L;
    bd.nu = nu.nu;
    out.certificate = run_stage("kantorovich", [&] { return kantorovich_verify(bd.eta, bd.nu, bd.K, p.R); });
    if (out.certificate.reason == FailureReason::nu_nonpositive && bd.nu0 == 0.0) {
        out.certificate.detail = "Galerkin matrix invertibility not established (nu0 = 0)";
    }
    return out;
}

namespace reference {

IntegralEnclosure enclose_integral(const PathExpr& g, int panels, QuadMode mode, int remainder_cells) {
    check_panels(panels, mode);
    if (remainder_cells < 1) {
        throw std::invalid_argument("remainder_cells must be >= 1");
    }
    const double n = panels;
    const SimpsonConstants k = simpson_constants(panels);
    std::vector<Interval> riemann;
    for (int j = 0; j < panels; ++j) {
        riemann.push_back(k.width * g(unit_cell(j, n)));
    }
    if (mode == QuadMode::riemann) {
        return finish({}, riemann, mode, true);
    }
    const PathExpr d4 = g.derivative().derivative().derivative().derivative();
    const PathExpr d5 = d4.derivative();
    std::vector<PanelTerms> panel_terms;
    const double denom = n * remainder_cells;
    for (int i = 0; i < panels; ++i) {
        PanelTerms t;
        t.simpson = k.h_third * (g(unit_node(2 * i, 2 * n)) + Interval(4.0) * g(unit_node(2 * i + 1, 2 * n)) +
                                 g(unit_node(2 * i + 2, 2 * n)));
        Interval acc;
        for (int c = 0; c < remainder_cells; ++c) {
            const Interval x = unit_cell(static_cast<double>(i) * remainder_cells + c, denom);
            const Interval xc(midpoint_of(x));
            const Interval cell = intersect(d4(x), d4(xc) + d5(x) * (x - xc));
            acc = c == 0 ? cell : hull(acc, cell);
        }
        t.remainder = -(k.remainder_scale * acc);
        panel_terms.push_back(t);
    }
    return finish(panel_terms, riemann, mode, true);
}

double n_bound(const ProblemSpec& p, const CosCoeffs& b, int subdiv) {
    check_subdiv(subdiv);
    const auto [fu, fv] = linearisation_paths(p, b);
    const PathExpr dfu = fu.derivative();
    const PathExpr dfv = fv.derivative();
    std::vector<NCellNorms> cells;
    for (int c = 0; c < subdiv; ++c) {
        const Interval x = unit_cell(c, subdiv);
        cells.push_back(norms_from(fu(x), dfu(x), fv(x), dfv(x)));
    }
    return combine_norms(cells);
}

double k_bound(const ProblemSpec& p, double r, int subdiv) {
    check_subdiv(subdiv);
    const auto h = uv_hessian(p.f);
    const KGrid grid = k_grid(h, r, subdiv);
    double m = 0.0;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const auto box = grid.cell(idx);
        const Interval uu = eval_interval(h[0], box[0], box[1], box[2]);
        const Interval uv = eval_interval(h[1], box[0], box[1], box[2]);
        const Interval vv = eval_interval(h[2], box[0], box[1], box[2]);
        m = std::max(m, frobenius_of_hessian(uu, uv, vv).hi());
    }
    return (const_c1() * Interval(m)).hi();
}

} // namespace reference

} // namespace nbvp
