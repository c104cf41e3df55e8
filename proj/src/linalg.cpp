#include "nbvp/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace nbvp {

namespace {

struct Lu {
    RealMatrix lu;
    std::vector<std::size_t> perm;
};

Lu factor(const RealMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("LU factorisation needs a square matrix");
    }
    const std::size_t n = a.rows();
    Lu f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            scale = std::max(scale, std::fabs(a(i, j)));
        }
    }
    const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
    RealMatrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(m(i, k)) > std::fabs(m(p, k))) {
                p = i;
            }
        }
        if (!(std::fabs(m(p, k)) > threshold)) {
            throw SingularMatrix();
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(p, j), m(k, j));
            }
            std::swap(f.perm[p], f.perm[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            m(i, k) /= m(k, k);
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) -= m(i, k) * m(k, j);
            }
        }
    }
    return f;
}

std::vector<double> substitute(const Lu& f, const std::vector<double>& rhs) {
    const std::size_t n = f.lu.rows();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) {
            s -= f.lu(i, j) * y[j];
        }
        y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= f.lu(i, j) * y[j];
        }
        y[i] = s / f.lu(i, i);
    }
    return y;
}

} // namespace

std::vector<double> solve(const RealMatrix& a, const std::vector<double>& rhs) {
    if (rhs.size() != a.rows()) {
        throw std::invalid_argument("solve: dimension mismatch");
    }
    return substitute(factor(a), rhs);
}

RealMatrix inverse(const RealMatrix& a) {
    const Lu f = factor(a);
    const std::size_t n = a.rows();
    RealMatrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        const auto col = substitute(f, e);
        for (std::size_t i = 0; i < n; ++i) {
            inv(i, j) = col[i];
        }
    }
    return inv;
}

RealMatrix midpoint(const IntervalMatrix& a) {
    RealMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = a(i, j).mid();
        }
    }
    return m;
}

double frobenius(const RealMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(s);
}

} // namespace nbvp
