// NEON kernel variants for aarch64, where 128-bit SIMD is baseline.

#include <arm_neon.h>

#include <cstddef>

#include "inramr/kernels.hpp"

namespace inramr::kernels {

namespace {

double dot(const double* x, const double* y, int n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, int n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nt(const double* a, const double* b, double* c, int l, int n, int m) {
    for (int i = 0; i < l; ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * n;
        double* ci = c + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            ci[j] = dot(ai, b + static_cast<std::size_t>(j) * n, n);
        }
    }
}

void gemm_nn(const double* a, const double* b, double* c, int l, int m, int n) {
    for (int i = 0; i < l; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) ci[j] = 0.0;
        const double* ai = a + static_cast<std::size_t>(i) * m;
        for (int k = 0; k < m; ++k) {
            axpy(ai[k], b + static_cast<std::size_t>(k) * n, ci, n);
        }
    }
}

void gemm_tn_acc(const double* a, const double* b, double* c, int l, int m, int n) {
    for (int k = 0; k < l; ++k) {
        const double* ak = a + static_cast<std::size_t>(k) * m;
        const double* bk = b + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < m; ++i) {
            if (ak[i] == 0.0) continue;
            axpy(ak[i], bk, c + static_cast<std::size_t>(i) * n, n);
        }
    }
}

void add_bias(double* y, const double* b, int l, int m) {
    for (int i = 0; i < l; ++i) {
        double* yi = y + static_cast<std::size_t>(i) * m;
        int j = 0;
        for (; j + 2 <= m; j += 2) {
            vst1q_f64(yi + j, vaddq_f64(vld1q_f64(yi + j), vld1q_f64(b + j)));
        }
        for (; j < m; ++j) yi[j] += b[j];
    }
}

void relu(double* y, std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vmaxq_f64(vld1q_f64(y + i), zero));
    }
    for (; i < n; ++i) y[i] = y[i] > 0.0 ? y[i] : 0.0;
}

}  // namespace

const Ops& neon_ops() {
    static const Ops ops = {
        gemm_nt, gemm_nn, gemm_tn_acc, dot, axpy, add_bias, relu, "neon",
    };
    return ops;
}

}  // namespace inramr::kernels
