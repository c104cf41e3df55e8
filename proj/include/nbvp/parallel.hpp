#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include "nbvp/interval.hpp"

namespace nbvp {

/// Execution policy for data-parallel kernels. Both policies produce
/// bit-identical results: work items are independent and every reduction
/// runs serially in index order afterwards.
enum class Exec { serial, parallel };

/// Runs body(i) for i in [0, n). With Exec::parallel the loop is spread over
/// OpenMP threads. If bodies throw, the exception of the smallest index is
/// rethrown after the loop.
template <class Body>
void for_each_index(Exec exec, std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> v);
Interval pairwise_sum(std::span<const Interval> v);

/// Number of OpenMP threads a parallel region would use (1 without OpenMP).
int max_threads();

} // namespace nbvp
