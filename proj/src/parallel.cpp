#include "nbvp/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nbvp {

namespace {

// Leaves below this size are summed left to right.
constexpr std::size_t kLeaf = 8;

template <class T>
T cascade(std::span<const T> v) {
    if (v.empty()) {
        return T(0.0);
    }
    if (v.size() <= kLeaf) {
        T s = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) {
            s += v[i];
        }
        return s;
    }
    const std::size_t half = v.size() / 2;
    return cascade(v.first(half)) + cascade(v.subspan(half));
}

} // namespace

double pairwise_sum(std::span<const double> v) { return cascade(v); }
Interval pairwise_sum(std::span<const Interval> v) { return cascade(v); }

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace nbvp
