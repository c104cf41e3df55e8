#include <cmath>
#include <numbers>
#include <utility>

#include "doctest.h"
#include "nbvp/galerkin.hpp"
#include "nbvp/rigor.hpp"
#include "integrals.hpp"
#include "support.hpp"

using namespace nbvp;

namespace {

const double kPi = std::numbers::pi;
// mpmath, 40 digits.
constexpr double kC1 = 1.145877517669027008315306752403764242146;
constexpr double kTStar = 0.1339745962155613532362768292470638165286;
constexpr double kTDStar = 1.866025403784438646763723170752936183471;
constexpr double kDiag24 = 1.788854381999831757127338934985020988352;

bool overlaps(const Interval& a, const Interval& b) { return a.lo() <= b.hi() && b.lo() <= a.hi(); }

ProblemSpec problem(const std::string& f, int m = 5) {
    ProblemSpec p;
    p.f = parse(f);
    p.m = m;
    return p;
}

ProblemSpec cubic() { return problem("u^3/6 - u - cos(pi*x)"); }

ProblemSpec sine() {
    ProblemSpec p = problem("sin(u) - cos(2*pi*x)");
    p.newton.b0 = CosCoeffs::from_amplitudes(std::vector<double>{3.14, 0.0, 0.02, 0.0, 0.0}).values();
    return p;
}

RealMatrix random_matrix(std::size_t n) {
    RealMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = test::uniform(-1, 1) + (i == j ? 3.0 : 0.0);
        }
    }
    return a;
}

IntervalMatrix point(const RealMatrix& a) {
    IntervalMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            r(i, j) = Interval(a(i, j));
        }
    }
    return r;
}

/// Smallest singular value from power iteration on (A^-1)^T A^-1.
double sigma_min(const RealMatrix& a) {
    const RealMatrix inv = inverse(a);
    const std::size_t n = a.rows();
    std::vector<double> x(n, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> y(n, 0.0), z(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                y[i] += inv(i, j) * x[j];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                z[i] += inv(j, i) * y[j];
            }
        }
        double nz = 0.0;
        for (double v : z) {
            nz += v * v;
        }
        nz = std::sqrt(nz);
        lambda = nz;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = z[i] / nz;
        }
    }
    return 1.0 / std::sqrt(lambda);
}

Interval g1(const Interval& t, double eta, double nu, double K) {
    return Interval(eta) - Interval(nu) * t + Interval(0.5) * Interval(K) * sqr(t);
}

} // namespace

TEST_CASE("enclosures contain the exact integrals") {
    for (const auto& [text, value] : test::kIntegrals) {
        CAPTURE(text);
        const PathExpr g(parse(text));
        const Interval exact = enclose_decimal(value);
        const IntegralEnclosure s = enclose_integral(g, 64, QuadMode::simpson);
        const IntegralEnclosure r = enclose_integral(g, 64, QuadMode::riemann);
        CHECK(overlaps(s.value, exact));
        CHECK(overlaps(r.value, exact));
        CHECK(overlaps(s.value, r.value));
        CHECK(!s.fallback);
        CHECK(s.value.width() <= std::max(r.value.width(), 1e-14));
        // Coarse grids stay sound.
        CHECK(overlaps(enclose_integral(g, 2, QuadMode::simpson).value, exact));
        CHECK(overlaps(enclose_integral(g, 3, QuadMode::riemann).value, exact));
    }
}

TEST_CASE("enclosure widths") {
    const IntegralEnclosure one = enclose_integral(PathExpr(Expr::constant(1.0)), 2, QuadMode::simpson);
    CHECK(one.value.contains(1.0));
    CHECK(one.value.width() <= 1e-14);
    CHECK(one.remainder.is_point());

    const IntegralEnclosure c2 = enclose_integral(PathExpr(parse("cos(pi*x)^2")), 64, QuadMode::simpson);
    CHECK(c2.value.contains(0.5));
    CHECK(c2.value.width() <= 1e-8);

    // x^4: g'''' = 24, so each of the 8 panels (h = 1/16) contributes
    // exactly -(h^5/90) 24 < 0.
    const IntegralEnclosure q = enclose_integral(PathExpr(parse("x^4")), 8, QuadMode::simpson);
    CHECK(q.remainder.hi() < 0.0);
    CHECK(q.remainder.contains(-8.0 * 24.0 / (90.0 * std::pow(16.0, 5))));
    CHECK(q.value.contains(0.2));
    CHECK(q.simpson_sum.lo() > 0.2);
}

TEST_CASE("riemann enclosure converges at first order") {
    const PathExpr g(parse("exp(x)"));
    const double w1 = enclose_integral(g, 100, QuadMode::riemann).value.width();
    const double w2 = enclose_integral(g, 200, QuadMode::riemann).value.width();
    CHECK(w2 == doctest::Approx(w1 / 2).epsilon(0.02));
}

TEST_CASE("fourth-derivative blowup falls back to riemann") {
    const PathExpr g(parse("1/(x + 0.001)"));
    const IntegralEnclosure e = enclose_integral(g, 16, QuadMode::simpson);
    CHECK(e.fallback);
    CHECK(e.value == enclose_integral(g, 16, QuadMode::riemann).value);
    CHECK(e.value.contains(std::log(1.001 / 0.001)));
    EnclosureOptions strict;
    strict.allow_fallback = false;
    CHECK_THROWS_AS(enclose_integral(g, 16, QuadMode::simpson, strict), FourthDerivativeBlowup);
}

TEST_CASE("enclose_integral argument checks") {
    const PathExpr g(parse("x"));
    CHECK_THROWS_AS(enclose_integral(g, 3, QuadMode::simpson), std::invalid_argument);
    CHECK_THROWS_AS(enclose_integral(g, 0, QuadMode::riemann), std::invalid_argument);
    EnclosureOptions o;
    o.remainder_cells = 0;
    CHECK_THROWS_AS(enclose_integral(g, 4, QuadMode::simpson, o), std::invalid_argument);
}

TEST_CASE("property: random integrands are enclosed") {
    for (int t = 0; t < 40; ++t) {
        const Expr e = substitute(substitute(test::random_expr(3), Var::u, parse("0.5*x")), Var::v,
                                  parse("1 - x"));
        const PathExpr g(e);
        const double approx = test::simpson_oracle([&](double x) { return g(x); }, 8192);
        const IntegralEnclosure s = enclose_integral(g, 32, QuadMode::simpson);
        const IntegralEnclosure r = enclose_integral(g, 32, QuadMode::riemann);
        CAPTURE(to_string(e));
        const double slack = 1e-9 * std::max(1.0, std::fabs(approx));
        CHECK(overlaps(s.value, Interval(approx - slack, approx + slack)));
        CHECK(overlaps(r.value, Interval(approx - slack, approx + slack)));
        CHECK(overlaps(s.value, r.value));
    }
}

TEST_CASE("eta bound") {
    SUBCASE("exact solution") {
        const EtaBound e = eta_bound(problem("-u"), CosCoeffs({0, 0, 0, 0, 0}));
        CHECK(e.eta <= 1e-14);
        CHECK(e.eta >= 0.0);
    }
    SUBCASE("dominates the float residual norm") {
        for (const ProblemSpec& p : {cubic(), sine()}) {
            const NewtonResult n = newton_solve(p);
            for (const CosCoeffs& b : {n.b, CosCoeffs({0.3, 0.1, -0.2, 0.05, 0.0})}) {
                const EtaBound e = eta_bound(p, b);
                const PathExpr res = residual_path(p, b);
                const double l2 = std::sqrt(test::simpson_oracle([&](double x) { return res(x) * res(x); }, 8192));
                CHECK(e.eta >= l2 * (1 - 1e-6));
                CHECK(e.eta <= 2 * l2 + 1e-6);
                CHECK(!e.fallback);
            }
        }
    }
}

TEST_CASE("interval jacobian") {
    SUBCASE("f = 0 gives the diagonal") {
        const JacobianEnclosure j = interval_jacobian(problem("0"), CosCoeffs({0.1, 0.2, 0.3, 0.4, 0.5}));
        for (int i = 1; i <= 5; ++i) {
            for (int k = 1; k <= 5; ++k) {
                const Interval& e = j.matrix(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(k - 1));
                if (i == k) {
                    CHECK(e.contains(diag_a(k)));
                } else {
                    CHECK(e.contains(0.0));
                    CHECK(e.width() <= 1e-10);
                }
            }
        }
    }
    SUBCASE("f = -u") {
        const JacobianEnclosure j = interval_jacobian(problem("-u"), CosCoeffs({0.1, 0.2, 0.3, 0.4, 0.5}));
        CHECK(j.matrix(0, 0).contains(1.0));
        for (int k = 2; k <= 5; ++k) {
            const auto d = static_cast<std::size_t>(k - 1);
            CHECK(j.matrix(d, d).contains((1 - std::pow((k - 1) * kPi, 2)) / omega(k)));
        }
    }
    SUBCASE("agrees with the float jacobian") {
        for (ProblemSpec p : {cubic(), sine(), problem("u*up + sin(up) - x")}) {
            p.quad.solver_panels = 4096;
            const CosCoeffs b({0.4, 0.9, -0.3, 0.1, 0.02});
            const JacobianEnclosure ji = interval_jacobian(p, b);
            const RealMatrix jf = jacobian(p, b);
            CHECK(ji.fallbacks == 0);
            for (std::size_t i = 0; i < 5; ++i) {
                for (std::size_t k = 0; k < 5; ++k) {
                    const Interval& e = ji.matrix(i, k);
                    CHECK(std::fabs(e.mid() - jf(i, k)) <= 1e-8);
                    CHECK(overlaps(e, Interval(jf(i, k) - 1e-12, jf(i, k) + 1e-12)));
                }
            }
        }
    }
}

TEST_CASE("nu0 bound") {
    CHECK(nu0_bound(point(RealMatrix::identity(4))) >= 0.499);
    CHECK(nu0_bound(point(RealMatrix::identity(4))) <= 0.5);

    RealMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    const double nd = nu0_bound(point(d));
    CHECK(nd >= 1.7888);
    CHECK(nd <= kDiag24);

    RealMatrix s(2, 2, 1.0);
    CHECK(nu0_bound(point(s)) == 0.0);

    // Wide entries: the contraction test fails, so no bound.
    IntervalMatrix w = point(RealMatrix::identity(2));
    w(0, 0) = Interval(-1.0, 3.0);
    CHECK(nu0_bound(w) == 0.0);

    for (int t = 0; t < 30; ++t) {
        const auto n = static_cast<std::size_t>(test::uniform_int(1, 8));
        const RealMatrix a = random_matrix(n);
        const double nu = nu0_bound(point(a));
        const double fro_inv = frobenius(inverse(a));
        CHECK(nu <= sigma_min(a) * (1 + 1e-9));
        CHECK(nu >= 0.9 / fro_inv);
        // Small interval perturbations keep the bound valid for the midpoint.
        IntervalMatrix wide = point(a);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                wide(i, j) = Interval(a(i, j) - 1e-6, a(i, j) + 1e-6);
            }
        }
        CHECK(nu0_bound(wide) <= nu);
    }
}

TEST_CASE("N bound") {
    SUBCASE("f = -u") {
        const double N = n_bound(problem("-u"), CosCoeffs({0.5, 0.1, 0, 0, 0}), 64);
        CHECK(N >= 2.0);
        CHECK(N <= 2.0 + 1e-10);
    }
    SUBCASE("f_u = cos(pi x)") {
        // C0 = 1 and C1 = sup sqrt(cos^2 + pi^2 sin^2) = pi, at x = 1/2.
        const double N = n_bound(problem("u*cos(pi*x)"), CosCoeffs({0.2, 0.1, 0, 0, 0}), 512);
        CHECK(N >= 1 + kPi);
        CHECK(N <= (1 + kPi) * 1.01);
    }
    SUBCASE("f_u = sqrt(2) cos(pi x)") {
        // C0 = sqrt(2), C1 = sup sqrt(2 cos^2 + 2 pi^2 sin^2) = sqrt(2) pi.
        const ProblemSpec p = problem("u^2/2");
        const CosCoeffs b({0.0, omega(2), 0, 0, 0});
        const double exact = std::numbers::sqrt2 * (1 + kPi);
        double prev = INFINITY;
        for (int s : {16, 64, 256, 1024}) {
            const double N = n_bound(p, b, s);
            CHECK(N >= exact);
            CHECK(N <= prev);
            prev = N;
        }
        CHECK(prev <= exact * 1.01);
    }
    SUBCASE("dominates dense sampling") {
        for (const ProblemSpec& p : {cubic(), sine(), problem("u*up + sin(up) - x")}) {
            const CosCoeffs b({0.4, 0.9, -0.3, 0.1, 0.02});
            const auto [fu, fv] = linearisation_paths(p, b);
            const PathExpr dfu = fu.derivative();
            const PathExpr dfv = fv.derivative();
            double c0u = 0, c1u = 0, c0v = 0, c1v = 0;
            for (int j = 0; j <= 4000; ++j) {
                const double x = j / 4000.0;
                c0u = std::max(c0u, std::fabs(fu(x)));
                c1u = std::max(c1u, std::hypot(fu(x), dfu(x)));
                c0v = std::max(c0v, std::fabs(fv(x)));
                c1v = std::max(c1v, std::hypot(fv(x), dfv(x)));
            }
            const double sampled = c0u + c1u + c0v + c1v;
            const double N = n_bound(p, b, 256);
            CHECK(N >= sampled);
            CHECK(N <= sampled * 1.05);
        }
    }
    CHECK_THROWS_AS(n_bound(problem("-u"), CosCoeffs({0, 0, 0, 0, 0}), 0), std::invalid_argument);
}

TEST_CASE("K bound") {
    SUBCASE("linear f") {
        CHECK(k_bound(problem("-u + 2*up - cos(pi*x)"), 3.0, 64) <= 1e-12);
    }
    SUBCASE("sine nonlinearity: sup |sin| = 1") {
        const double K = k_bound(sine(), 4.2, 256);
        CHECK(K >= kC1);
        CHECK(K <= const_c1().hi() * (1 + 4e-16));
    }
    SUBCASE("cubic: sup |u| over the box") {
        const double r = 1.8;
        const double K = k_bound(cubic(), r, 256);
        const double exact = kC1 * kC1 * r;
        CHECK(K >= exact);
        CHECK(K <= exact * (1 + 1e-12));
    }
    SUBCASE("dominates dense sampling") {
        const ProblemSpec p = problem("u*up + sin(up) - x*u^2");
        const double r = 0.7;
        const double box = kC1 * r;
        const Expr fu = diff(p.f, Var::u);
        const Expr fv = diff(p.f, Var::v);
        const Expr h[] = {diff(fu, Var::u), diff(fu, Var::v), diff(fv, Var::v)};
        double sup = 0.0;
        for (int a = 0; a <= 20; ++a) {
            for (int bu = 0; bu <= 40; ++bu) {
                for (int bv = 0; bv <= 40; ++bv) {
                    const double x = a / 20.0;
                    const double u = -box + 2 * box * bu / 40.0;
                    const double v = -box + 2 * box * bv / 40.0;
                    const double uu = eval_float(h[0], x, u, v);
                    const double uv = eval_float(h[1], x, u, v);
                    const double vv = eval_float(h[2], x, u, v);
                    sup = std::max(sup, std::sqrt(uu * uu + 2 * uv * uv + vv * vv));
                }
            }
        }
        const double K = k_bound(p, r, 64);
        CHECK(K >= kC1 * sup);
        CHECK(K <= kC1 * sup * 1.2);
    }
}

TEST_CASE("assemble_nu") {
    const NuAssembly a = assemble_nu(10.0, 5, 0.0);
    CHECK(a.L == tail_lambda_interval(5).lo());
    CHECK(a.nu == a.L);
    const NuAssembly b = assemble_nu(0.5, 5, 1.0);
    CHECK(b.L == 0.5);
    CHECK(b.nu <= 0.5 - 1.0 / (5 * kPi));
    CHECK(b.nu == doctest::Approx(0.5 - 1.0 / (5 * kPi)).epsilon(1e-15));
    CHECK(assemble_nu(0.0, 5, 0.0).nu == 0.0);
    CHECK(assemble_nu(0.1, 1, 100.0).nu == 0.0);
    CHECK_THROWS_AS(assemble_nu(1.0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("kantorovich_verify") {
    SUBCASE("quadratic case") {
        const Certificate c = kantorovich_verify(0.125, 1.0, 1.0, 1.0);
        CHECK(c.status == CertStatus::verified);
        CHECK(c.reason == FailureReason::none);
        CHECK(c.stage.empty());
        CHECK(c.t_star_enclosure.contains(kTStar));
        CHECK(c.t_star >= kTStar);
        CHECK(c.t_star <= kTStar * (1 + 1e-14));
        CHECK(c.t_dstar <= kTDStar);
        CHECK(c.t_dstar >= kTDStar * (1 - 1e-14));
        CHECK(!c.t_dstar_infinite);
        CHECK(c.uniqueness_radius == 1.0);
        CHECK(c.radius_h2 == c.t_star);
        CHECK(c.radius_c1 >= kC1 * c.t_star);
        CHECK(c.radius_c1 <= kC1 * c.t_star * (1 + 1e-14));
    }
    SUBCASE("K = 0") {
        const Certificate c = kantorovich_verify(0.25, 2.0, 0.0, 3.0);
        CHECK(c.status == CertStatus::verified);
        CHECK(c.t_star_enclosure.contains(0.125));
        CHECK(c.t_dstar_infinite);
        CHECK(c.t_dstar == 3.0);
        CHECK(c.uniqueness_radius == 3.0);
    }
    SUBCASE("failures") {
        const Certificate a = kantorovich_verify(0.1, 0.0, 1.0, 1.0);
        CHECK(a.status == CertStatus::failed);
        CHECK(a.reason == FailureReason::nu_nonpositive);
        CHECK(a.stage == "kantorovich");
        CHECK(kantorovich_verify(1.0, 1.0, 1.0, 1.0).reason == FailureReason::discriminant_negative);
        CHECK(kantorovich_verify(0.5, 1.0, 1.0, 1.0).reason == FailureReason::discriminant_negative);
        CHECK(kantorovich_verify(0.5, 1.0, 0.0, 0.1).reason == FailureReason::t_star_exceeds_r);
        CHECK(kantorovich_verify(0.125, 1.0, 1.0, 0.1).reason == FailureReason::t_star_exceeds_r);
    }
    SUBCASE("invalid input") {
        CHECK_THROWS_AS(kantorovich_verify(-1.0, 1.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(kantorovich_verify(0.1, 1.0, -1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(kantorovich_verify(0.1, 1.0, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(kantorovich_verify(NAN, 1.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(kantorovich_verify(0.1, INFINITY, 1.0, 1.0), std::invalid_argument);
    }
    SUBCASE("property: certificate brackets the root of g1") {
        for (int t = 0; t < 500; ++t) {
            const double nu = test::uniform(0.01, 5);
            const double K = test::uniform(0.0, 10);
            const double eta = test::uniform(0.0, 1.0) * nu * nu / (2 * K + 1e-300) * 0.999;
            const Certificate c = kantorovich_verify(eta, nu, K, 1e6);
            REQUIRE(c.status == CertStatus::verified);
            CHECK(g1(c.t_star_enclosure, eta, nu, K).contains_zero());
            CHECK(g1(Interval(c.t_star), eta, nu, K).hi() <= 1e-12 * std::max(eta, 1e-300) + 1e-300);
            CHECK(c.uniqueness_radius >= c.t_star);
            if (K > 0 && c.t_dstar > c.t_star * (1 + 1e-6)) {
                const double mid = 0.5 * (c.t_star + c.t_dstar);
                CHECK(g1(Interval(mid), eta, nu, K).hi() < 0.0);
            }
            CHECK(c.radius_c1 >= kC1 * c.radius_h2);
        }
    }
}

TEST_CASE("to_string of statuses") {
    CHECK(to_string(CertStatus::verified) == "Verified");
    CHECK(to_string(CertStatus::failed) == "Failed");
    CHECK(to_string(FailureReason::none) == "none");
    CHECK(to_string(FailureReason::nu_nonpositive) == "NuNonpositive");
    CHECK(to_string(FailureReason::discriminant_negative) == "DiscriminantNegative");
    CHECK(to_string(FailureReason::t_star_exceeds_r) == "TStarExceedsR");
    CHECK(to_string(FailureReason::stage_error) == "StageError");
}

TEST_CASE("certify: cubic problem") {
    const ProblemSpec p = cubic();
    const NewtonResult n = newton_solve(p);
    const CertifyResult r = certify(p, n.b);
    const RigorBounds& bd = r.bounds;
    CHECK(r.certificate.status == CertStatus::verified);
    CHECK(r.certificate.radius_h2 <= 1e-5);
    CHECK(r.certificate.radius_c1 >= kC1 * r.certificate.radius_h2);
    CHECK(bd.eta <= 1e-6);
    CHECK(bd.nu > 0.0);
    CHECK(bd.nu <= bd.L);
    CHECK(bd.L <= bd.nu0);
    CHECK(bd.L <= bd.tail);
    CHECK(bd.r >= h2_norm(n.b) + p.R);
    CHECK(bd.K >= kC1 * kC1 * bd.r);
    CHECK(!bd.quad_fallback());
    const double disc = bd.nu * bd.nu - 2 * bd.K * bd.eta;
    CHECK(disc > 0.0);
}

TEST_CASE("certify: sine problem") {
    const ProblemSpec p = sine();
    const CertifyResult r = certify(p, newton_solve(p).b);
    CHECK(r.certificate.status == CertStatus::verified);
    CHECK(r.certificate.radius_h2 <= 1e-5);
    CHECK(r.bounds.K == doctest::Approx(kC1).epsilon(1e-12));
}

TEST_CASE("certify: failures") {
    SUBCASE("strong cubic with a zero candidate") {
        const ProblemSpec p = problem("-u + 1000*u^3 - cos(pi*x)");
        const CertifyResult r = certify(p, CosCoeffs(std::vector<double>(5, 0.0)));
        CHECK(r.certificate.status == CertStatus::failed);
        CHECK(r.certificate.reason == FailureReason::discriminant_negative);
    }
    SUBCASE("zero candidate for the cubic problem") {
        const CertifyResult r = certify(cubic(), CosCoeffs(std::vector<double>(5, 0.0)));
        CHECK(r.certificate.status == CertStatus::failed);
        CHECK(r.certificate.reason != FailureReason::none);
    }
    SUBCASE("stage errors") {
        try {
            (void)certify(problem("1/u"), CosCoeffs({0.1, 0, 0, 0, 0}));
            FAIL("expected a stage error");
        } catch (const RigorStageError& e) {
            CHECK(e.stage() == "K");
        }
        CHECK_THROWS_AS(certify(cubic(), CosCoeffs({0.0, 1.0})), RigorStageError);
        CHECK_THROWS_AS(certify(cubic(), CosCoeffs({0.0, NAN, 0, 0, 0})), RigorStageError);
    }
}

TEST_CASE("property: refinement never loosens the bounds") {
    for (ProblemSpec p : {cubic(), sine()}) {
        const CosCoeffs b = newton_solve(p).b;
        p.quad.rigor_panels = 16;
        p.quad.subdiv = 32;
        CertifyResult prev = certify(p, b);
        for (int step = 0; step < 3; ++step) {
            p.quad.rigor_panels *= 2;
            p.quad.subdiv *= 2;
            const CertifyResult next = certify(p, b);
            CAPTURE(p.quad.rigor_panels);
            CHECK(next.bounds.eta <= prev.bounds.eta);
            CHECK(next.bounds.N <= prev.bounds.N);
            CHECK(next.bounds.K <= prev.bounds.K);
            CHECK(next.bounds.nu0 >= prev.bounds.nu0);
            prev = next;
        }
    }
}

TEST_CASE("radius_c1 is c1 times radius_h2") {
    const ProblemSpec p = cubic();
    const CertifyResult r = certify(p, newton_solve(p).b);
    const Interval expect = const_c1() * Interval(r.certificate.radius_h2);
    CHECK(r.certificate.radius_c1 == expect.hi());
    CHECK(r.certificate.radius_c1 - expect.lo() <= 4 * test::ulp(r.certificate.radius_c1));
}
