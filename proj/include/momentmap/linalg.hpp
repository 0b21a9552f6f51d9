#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "momentmap/poly.hpp"

namespace momentmap {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major dense complex matrix. Row and column counts are fixed at
/// construction; all entries start at zero.
class DenseMatrix {
public:
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
        if (rows > kMaxDim || cols > kMaxDim)
            throw std::invalid_argument("DenseMatrix: dimension exceeds 4096");
        data_.resize(static_cast<size_t>(rows) * static_cast<size_t>(cols));
    }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Complex& operator()(int i, int j) { return data_[index(i, j)]; }
    Complex operator()(int i, int j) const { return data_[index(i, j)]; }

    double max_abs() const {
        double m = 0.0;
        for (Complex c : data_) m = std::max(m, std::abs(c));
        return m;
    }

    static constexpr int kMaxDim = 4096;

private:
    size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("DenseMatrix: index out of range");
        return static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j);
    }

    int rows_, cols_;
    std::vector<Complex> data_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

namespace detail {

// Partial-pivoted LU, pivot chosen by largest modulus. exact_zero is set
// when some pivot search finds an all-zero column, which makes the
// determinant exactly zero (no rounding involved).
struct LuFactors {
    DenseMatrix lu;
    std::vector<int> row_of;  // permutation applied to rhs
    int sign = 1;
    bool exact_zero = false;
    double max_initial_abs = 0.0;
};

inline LuFactors lu_factor(DenseMatrix m) {
    const int n = m.rows();
    LuFactors f{std::move(m), {}, 1, false, 0.0};
    f.row_of.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) f.row_of[static_cast<size_t>(i)] = i;
    f.max_initial_abs = f.lu.max_abs();

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(f.lu(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(f.lu(r, col));
            if (v > best) { best = v; pivot = r; }
        }
        if (best == 0.0) { f.exact_zero = true; return f; }
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(pivot, j), f.lu(col, j));
            std::swap(f.row_of[static_cast<size_t>(pivot)], f.row_of[static_cast<size_t>(col)]);
            f.sign = -f.sign;
        }
        Complex d = f.lu(col, col);
        for (int r = col + 1; r < n; ++r) {
            Complex factor = f.lu(r, col) / d;
            f.lu(r, col) = factor;
            if (factor == Complex{}) continue;
            for (int j = col + 1; j < n; ++j) f.lu(r, j) -= factor * f.lu(col, j);
        }
    }
    return f;
}

}  // namespace detail

inline Complex determinant(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    if (m.rows() == 0) return Complex{1.0, 0.0};
    detail::LuFactors f = detail::lu_factor(m);
    if (f.exact_zero) return Complex{};
    Complex det{static_cast<double>(f.sign), 0.0};
    for (int i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
    return det;
}

/// Solves m x = rhs. Signals SingularMatrixError when any pivot falls below
/// 1e-13 times the largest initial entry modulus (a zero matrix is singular
/// outright), rather than dividing by near-noise.
inline std::vector<Complex> solve(const DenseMatrix& m, const std::vector<Complex>& rhs) {
    if (m.rows() != m.cols()) throw std::invalid_argument("solve: matrix not square");
    const int n = m.rows();
    if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("solve: rhs size mismatch");
    if (n == 0) return {};

    detail::LuFactors f = detail::lu_factor(m);
    if (f.exact_zero || f.max_initial_abs == 0.0)
        throw SingularMatrixError("solve: matrix is singular");
    const double floor = 1e-13 * f.max_initial_abs;
    for (int i = 0; i < n; ++i)
        if (std::abs(f.lu(i, i)) < floor)
            throw SingularMatrixError("solve: pivot below singularity threshold");

    std::vector<Complex> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = rhs[static_cast<size_t>(f.row_of[static_cast<size_t>(i)])];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu(i, i);
    }
    return x;
}

}  // namespace momentmap
