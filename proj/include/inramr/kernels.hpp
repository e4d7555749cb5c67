#pragma once

#include <cstddef>

namespace inramr::kernels {

enum class Backend { scalar, avx2, neon };

/// Dense double-precision kernels behind the hot loops: batched layer
/// evaluation, QR column updates, gradient accumulation. Every backend
/// implements the same contract; scalar is the reference the others are
/// equivalence-tested against. Matrices are row-major and may not alias.
struct Ops {
    /// C (l x m) = A (l x n) * B (m x n)^T
    void (*gemm_nt)(const double* a, const double* b, double* c, int l, int n, int m);
    /// C (l x n) = A (l x m) * B (m x n)
    void (*gemm_nn)(const double* a, const double* b, double* c, int l, int m, int n);
    /// C (m x n) += A (l x m)^T * B (l x n)
    void (*gemm_tn_acc)(const double* a, const double* b, double* c, int l, int m, int n);
    double (*dot)(const double* x, const double* y, int n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, int n);
    /// Y (l x m) += broadcast row b (length m)
    void (*add_bias)(double* y, const double* b, int l, int m);
    /// y = max(y, 0) elementwise
    void (*relu)(double* y, std::size_t n);
    const char* name;
};

/// Kernels for the backend picked at startup (honors force_backend).
const Ops& ops();

/// Kernels for a specific backend; throws ContractError if unavailable here.
const Ops& ops_for(Backend b);

bool available(Backend b);
Backend active_backend();

/// Test hook: pin the dispatched backend. Not thread-safe against concurrent
/// ops() users; call before spinning up work.
void force_backend(Backend b);
void clear_forced_backend();

}  // namespace inramr::kernels
