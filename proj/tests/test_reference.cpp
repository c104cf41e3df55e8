// The tape-compiled, threaded kernels must agree bit for bit with the
// serial tree-walking reference, whatever the thread count.
#include <omp.h>

#include <cstring>

#include "doctest.h"
#include "nbvp/galerkin.hpp"
#include "nbvp/rigor.hpp"
#include "support.hpp"

using namespace nbvp;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const Interval& a, const Interval& b) { return same_bits(a.lo(), b.lo()) && same_bits(a.hi(), b.hi()); }

ProblemSpec problem(const std::string& f, Exec exec) {
    ProblemSpec p;
    p.f = parse(f);
    p.quad.exec = exec;
    return p;
}

const char* const kProblems[] = {"u^3/6 - u - cos(pi*x)", "sin(u) - cos(2*pi*x)", "u*up + sin(up) - x*u^2",
                                 "exp(-u)*up - 0.5"};

const CosCoeffs kCandidate({0.4, 0.9, -0.3, 0.1, 0.02});

} // namespace

TEST_CASE("enclose_integral matches the reference") {
    omp_set_num_threads(4);
    const char* integrands[] = {"cos(pi*x)^2", "exp(x)*sin(3*x)", "1/(1 + x^2)", "x^7 - x", "1/(x + 0.001)"};
    for (const char* text : integrands) {
        CAPTURE(text);
        const PathExpr g(parse(text));
        for (QuadMode mode : {QuadMode::simpson, QuadMode::riemann}) {
            for (int panels : {2, 16, 64}) {
                for (int cells : {1, 8, 32}) {
                    const IntegralEnclosure ref = reference::enclose_integral(g, panels, mode, cells);
                    for (Exec exec : {Exec::serial, Exec::parallel}) {
                        const IntegralEnclosure opt = enclose_integral(g, panels, mode, {cells, true, exec});
                        CHECK(same_bits(ref.value, opt.value));
                        CHECK(same_bits(ref.simpson_sum, opt.simpson_sum));
                        CHECK(same_bits(ref.remainder, opt.remainder));
                        CHECK(ref.fallback == opt.fallback);
                    }
                }
            }
        }
    }
}

TEST_CASE("random integrands match the reference") {
    omp_set_num_threads(3);
    for (int t = 0; t < 30; ++t) {
        const Expr e = substitute(substitute(test::random_expr(3), Var::u, parse("x^2")), Var::v, parse("cos(x)"));
        const PathExpr g(e);
        CAPTURE(to_string(e));
        const IntegralEnclosure ref = reference::enclose_integral(g, 8, QuadMode::simpson, 4);
        const IntegralEnclosure opt = enclose_integral(g, 8, QuadMode::simpson, {4, true, Exec::parallel});
        CHECK(same_bits(ref.value, opt.value));
    }
}

TEST_CASE("n_bound and k_bound match the reference") {
    omp_set_num_threads(4);
    for (const char* f : kProblems) {
        CAPTURE(f);
        for (int subdiv : {1, 7, 64}) {
            const double n_ref = reference::n_bound(problem(f, Exec::serial), kCandidate, subdiv);
            const double k_ref = reference::k_bound(problem(f, Exec::serial), 1.3, subdiv);
            for (Exec exec : {Exec::serial, Exec::parallel}) {
                CHECK(same_bits(n_ref, n_bound(problem(f, exec), kCandidate, subdiv)));
                CHECK(same_bits(k_ref, k_bound(problem(f, exec), 1.3, subdiv)));
            }
        }
    }
}

TEST_CASE("certify is reproducible across thread counts") {
    ProblemSpec p = problem(kProblems[0], Exec::serial);
    p.quad.subdiv = 64;
    const CosCoeffs b = newton_solve(p).b;
    omp_set_num_threads(1);
    const CertifyResult serial = certify(p, b);
    p.quad.exec = Exec::parallel;
    for (int threads : {1, 2, 5}) {
        omp_set_num_threads(threads);
        const CertifyResult par = certify(p, b);
        CHECK(same_bits(serial.bounds.eta, par.bounds.eta));
        CHECK(same_bits(serial.bounds.N, par.bounds.N));
        CHECK(same_bits(serial.bounds.K, par.bounds.K));
        CHECK(same_bits(serial.bounds.nu0, par.bounds.nu0));
        CHECK(same_bits(serial.bounds.nu, par.bounds.nu));
        CHECK(same_bits(serial.certificate.t_star, par.certificate.t_star));
        CHECK(same_bits(serial.certificate.radius_c1, par.certificate.radius_c1));
    }
}

TEST_CASE("interval jacobian is reproducible across thread counts") {
    const ProblemSpec ps = problem(kProblems[2], Exec::serial);
    const ProblemSpec pp = problem(kProblems[2], Exec::parallel);
    const JacobianEnclosure a = interval_jacobian(ps, kCandidate);
    omp_set_num_threads(4);
    const JacobianEnclosure b = interval_jacobian(pp, kCandidate);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(same_bits(a.matrix(i, j), b.matrix(i, j)));
        }
    }
}
