#pragma once

#include <vector>

#include "inramr/matrix.hpp"

namespace inramr::lowrank {

/// Interpolative decomposition Z ~= Z[:, index_set] * D of one layer's
/// activation matrix. `residual_rel` is the relative Frobenius residual the
/// factorization achieved on the matrix it was computed from.
struct InterpDecomp {
    std::vector<int> index_set;  // k distinct column indices of Z
    Matrix d;                    // k x m interpolation matrix
    double residual_rel = 0.0;
    int k = 0;
};

/// Column subset selection by Businger-Golub column-pivoted Householder QR,
/// truncated at the first k whose trailing block satisfies
/// ||R22||_F <= eps * ||Z||_F. Pivot-magnitude ties go to the lowest column
/// index, so the result is deterministic. If no k < m meets the bound the
/// full column set is returned with D a (permuted) identity and zero
/// residual. Throws NumericError when Z is all zero (relative criterion
/// undefined); callers that can tolerate that case use `is_all_zero` first.
InterpDecomp interp_decomp(const Matrix& z, double eps);

/// Back-substitution for the interpolation coefficients: returns T with
/// R11 * T = R12, R11 upper-triangular. Throws NumericError on a zero
/// diagonal (unreachable when R11 comes from pivoted QR).
Matrix solve_interpolation(const Matrix& r11, const Matrix& r12);

bool is_all_zero(const Matrix& z);

/// ||Z - Z[:, I] * D||_F / ||Z||_F recomputed from scratch; the independent
/// check used by the certificate tests and the acceptance suite.
double reconstruction_residual(const Matrix& z, const InterpDecomp& id);

}  // namespace inramr::lowrank
