// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2;
// it is reached solely through the runtime dispatch in kernels.cpp.

#include <immintrin.h>

#include <cstddef>

#include "inramr/kernels.hpp"

namespace inramr::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot(const double* x, const double* y, int n) {
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, int n) {
    const __m256d va = _mm256_set1_pd(alpha);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nt(const double* a, const double* b, double* c, int l, int n, int m) {
    for (int i = 0; i < l; ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * n;
        double* ci = c + static_cast<std::size_t>(i) * m;
        int j = 0;
        // Two B rows per pass share the A row loads.
        for (; j + 2 <= m; j += 2) {
            const double* b0 = b + static_cast<std::size_t>(j) * n;
            const double* b1 = b0 + n;
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            int k = 0;
            for (; k + 4 <= n; k += 4) {
                const __m256d av = _mm256_loadu_pd(ai + k);
                acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + k), acc0);
                acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + k), acc1);
            }
            double s0 = hsum(acc0);
            double s1 = hsum(acc1);
            for (; k < n; ++k) {
                s0 += ai[k] * b0[k];
                s1 += ai[k] * b1[k];
            }
            ci[j] = s0;
            ci[j + 1] = s1;
        }
        for (; j < m; ++j) {
            ci[j] = dot(ai, b + static_cast<std::size_t>(j) * n, n);
        }
    }
}

void gemm_nn(const double* a, const double* b, double* c, int l, int m, int n) {
    for (int i = 0; i < l; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        int j = 0;
        for (; j + 4 <= n; j += 4) _mm256_storeu_pd(ci + j, _mm256_setzero_pd());
        for (; j < n; ++j) ci[j] = 0.0;
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
        for (; j + 4 <= m; j += 4) {
            _mm256_storeu_pd(yi + j, _mm256_add_pd(_mm256_loadu_pd(yi + j), _mm256_loadu_pd(b + j)));
        }
        for (; j < m; ++j) yi[j] += b[j];
    }
}

void relu(double* y, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(y + i), zero));
    }
    for (; i < n; ++i) y[i] = y[i] > 0.0 ? y[i] : 0.0;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        gemm_nt, gemm_nn, gemm_tn_acc, dot, axpy, add_bias, relu, "avx2",
    };
    return ops;
}

}  // namespace inramr::kernels
