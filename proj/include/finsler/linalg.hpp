#pragma once

// Small dense matrices and fixed-rank tensors for n <= a handful.

#include <array>
#include <cstddef>
#include <vector>

namespace finsler::linalg {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, const std::vector<double>& v);

/// Determinant by partial-pivoting LU.
double determinant(const Matrix& a);
/// Inverse by Gauss-Jordan with partial pivoting; throws SingularPoint on a zero pivot.
Matrix inverse(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs(const std::vector<double>& v);
double norm(const std::vector<double>& v);

/// Rank-R tensor over an n-dimensional index range, row-major.
template <std::size_t R>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::size_t n) : n_(n), data_(pow_n(n), 0.0) {}

    std::size_t dim() const { return n_; }

    template <typename... I>
    double& operator()(I... idx) {
        static_assert(sizeof...(I) == R);
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }
    template <typename... I>
    double operator()(I... idx) const {
        static_assert(sizeof...(I) == R);
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = v < 0 ? (-v > m ? -v : m) : (v > m ? v : m);
        return m;
    }

private:
    static std::size_t pow_n(std::size_t n) {
        std::size_t p = 1;
        for (std::size_t r = 0; r < R; ++r) p *= n;
        return p;
    }
    std::size_t offset(std::array<std::size_t, R> idx) const {
        std::size_t o = 0;
        for (std::size_t r = 0; r < R; ++r) o = o * n_ + idx[r];
        return o;
    }

    std::size_t n_ = 0;
    std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

}  // namespace finsler::linalg
