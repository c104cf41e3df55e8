#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "nbvp/interval.hpp"

namespace nbvp {

class SingularMatrix : public std::runtime_error {
  public:
    SingularMatrix() : std::runtime_error("matrix is numerically singular") {}
};

/// Dense row-major matrix.
template <class T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T(0.0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T(1.0);
        }
        return m;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using IntervalMatrix = Matrix<Interval>;

/// Solves A x = rhs by LU with partial pivoting. Throws SingularMatrix when
/// a pivot falls below n * eps * max|A|.
std::vector<double> solve(const RealMatrix& a, const std::vector<double>& rhs);
RealMatrix inverse(const RealMatrix& a);
RealMatrix midpoint(const IntervalMatrix& a);
/// Float Frobenius norm.
double frobenius(const RealMatrix& a);

} // namespace nbvp
