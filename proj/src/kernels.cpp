#include "inramr/kernels.hpp"

#include <atomic>
#include <cstring>

#include "inramr/util.hpp"

namespace inramr::kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels. Deliberately plain loops: these define the
// semantics the SIMD variants are tested against.
// ---------------------------------------------------------------------------

namespace scalar {

void gemm_nt(const double* a, const double* b, double* c, int l, int n, int m) {
    for (int i = 0; i < l; ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * n;
        double* ci = c + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            const double* bj = b + static_cast<std::size_t>(j) * n;
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += ai[k] * bj[k];
            ci[j] = s;
        }
    }
}

void gemm_nn(const double* a, const double* b, double* c, int l, int m, int n) {
    for (int i = 0; i < l; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) ci[j] = 0.0;
        const double* ai = a + static_cast<std::size_t>(i) * m;
        for (int k = 0; k < m; ++k) {
            const double aik = ai[k];
            const double* bk = b + static_cast<std::size_t>(k) * n;
            for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
}

void gemm_tn_acc(const double* a, const double* b, double* c, int l, int m, int n) {
    for (int k = 0; k < l; ++k) {
        const double* ak = a + static_cast<std::size_t>(k) * m;
        const double* bk = b + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < m; ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            double* ci = c + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) ci[j] += aki * bk[j];
        }
    }
}

double dot(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_bias(double* y, const double* b, int l, int m) {
    for (int i = 0; i < l; ++i) {
        double* yi = y + static_cast<std::size_t>(i) * m;
        for (int j = 0; j < m; ++j) yi[j] += b[j];
    }
}

void relu(double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] > 0.0 ? y[i] : 0.0;
}

}  // namespace scalar

static const Ops kScalarOps = {
    scalar::gemm_nt, scalar::gemm_nn, scalar::gemm_tn_acc,
    scalar::dot,     scalar::axpy,    scalar::add_bias,
    scalar::relu,    "scalar",
};

#if INRAMR_HAVE_AVX2_TU
const Ops& avx2_ops();  // kernels_avx2.cpp
#endif
#if INRAMR_HAVE_NEON_TU
const Ops& neon_ops();  // kernels_neon.cpp
#endif

bool available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if INRAMR_HAVE_AVX2_TU
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::neon:
#if INRAMR_HAVE_NEON_TU
            return true;
#else
            return false;
#endif
    }
    return false;
}

const Ops& ops_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return kScalarOps;
        case Backend::avx2:
#if INRAMR_HAVE_AVX2_TU
            if (available(Backend::avx2)) return avx2_ops();
#endif
            break;
        case Backend::neon:
#if INRAMR_HAVE_NEON_TU
            return neon_ops();
#endif
            break;
    }
    throw ContractError("kernel backend not available on this machine");
}

namespace {

Backend detect_backend() {
    if (available(Backend::avx2)) return Backend::avx2;
    if (available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::atomic<int> g_forced{-1};

}  // namespace

Backend active_backend() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<Backend>(forced);
    static const Backend detected = detect_backend();
    return detected;
}

const Ops& ops() { return ops_for(active_backend()); }

void force_backend(Backend b) {
    if (!available(b)) throw ContractError("kernel backend not available on this machine");
    g_forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void clear_forced_backend() { g_forced.store(-1, std::memory_order_relaxed); }

}  // namespace inramr::kernels
