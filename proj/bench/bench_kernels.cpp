// Serial reference kernels against the tape-compiled OpenMP kernels on the
// two example problems. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "nbvp/galerkin.hpp"
#include "nbvp/rigor.hpp"

using namespace nbvp;

namespace {

ProblemSpec example(int which, Exec exec) {
    ProblemSpec p;
    if (which == 0) {
        p.f = parse("u^3/6 - u - cos(pi*x)");
    } else {
        p.f = parse("sin(u) - cos(2*pi*x)");
        p.newton.b0 = CosCoeffs::from_amplitudes(std::vector<double>{3.14, 0.0, 0.02, 0.0, 0.0}).values();
    }
    p.quad.exec = exec;
    return p;
}

const CosCoeffs& candidate(int which) {
    static const CosCoeffs b[2] = {newton_solve(example(0, Exec::serial)).b, newton_solve(example(1, Exec::serial)).b};
    return b[which];
}

PathExpr eta_integrand(int which) {
    const PathExpr res = residual_path(example(which, Exec::serial), candidate(which));
    return PathExpr(res.expr() * res.expr());
}

void BM_EnclosureReference(benchmark::State& state) {
    const PathExpr g = eta_integrand(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::enclose_integral(g, 64, QuadMode::simpson, 32));
    }
}

void BM_EnclosureSerial(benchmark::State& state) {
    const PathExpr g = eta_integrand(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(enclose_integral(g, 64, QuadMode::simpson, {32, true, Exec::serial}));
    }
}

void BM_EnclosureParallel(benchmark::State& state) {
    const PathExpr g = eta_integrand(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(enclose_integral(g, 64, QuadMode::simpson, {32, true, Exec::parallel}));
    }
}

void BM_NBoundReference(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const ProblemSpec p = example(w, Exec::serial);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::n_bound(p, candidate(w), 256));
    }
}

void BM_NBoundParallel(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const ProblemSpec p = example(w, Exec::parallel);
    for (auto _ : state) {
        benchmark::DoNotOptimize(n_bound(p, candidate(w), 256));
    }
}

void BM_KBoundReference(benchmark::State& state) {
    const ProblemSpec p = example(static_cast<int>(state.range(0)), Exec::serial);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::k_bound(p, 2.0, 256));
    }
}

void BM_KBoundParallel(benchmark::State& state) {
    const ProblemSpec p = example(static_cast<int>(state.range(0)), Exec::parallel);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k_bound(p, 2.0, 256));
    }
}

void BM_CertifySerial(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const ProblemSpec p = example(w, Exec::serial);
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify(p, candidate(w)));
    }
}

void BM_CertifyParallel(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const ProblemSpec p = example(w, Exec::parallel);
    state.counters["threads"] = omp_get_max_threads();
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify(p, candidate(w)));
    }
}

} // namespace

// Argument: 0 = cubic example, 1 = sine example.
BENCHMARK(BM_EnclosureReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnclosureSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnclosureParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NBoundReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NBoundParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KBoundReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KBoundParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifySerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_CertifyParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
