#pragma once

#include <cstddef>
#include <vector>

#include "inramr/kernels.hpp"

namespace inramr {

/// Row-major dense matrix of doubles. Thin value type; the arithmetic lives
/// in the kernel layer.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
    double* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * cols; }
    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

/// C = A * B^T
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.rows);
    if (!c.empty()) kernels::ops().gemm_nt(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.rows);
    return c;
}

/// C = A * B
inline Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.cols);
    if (!c.empty()) kernels::ops().gemm_nn(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
    return c;
}

}  // namespace inramr
