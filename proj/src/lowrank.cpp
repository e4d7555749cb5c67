#include "inramr/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "inramr/util.hpp"

namespace inramr::lowrank {

namespace {

// Norm downdates are refreshed from scratch once cancellation eats more than
// this fraction of the norm tracked since the last refresh.
constexpr double kDriftGuard = 1e-6;

// Margin on the squared truncation threshold below which the cheap downdated
// estimate is confirmed by an exact trailing-norm recomputation.
constexpr double kExactTriggerMargin = 1.25;

struct QrcpWorkspace {
    int l = 0, m = 0;
    std::vector<double> w;        // column-major copy of Z; column j at w[j*l]
    std::vector<int> perm;        // perm[t] = original column at position t
    std::vector<double> cnorm;    // downdated squared norms of trailing columns
    std::vector<double> refresh;  // squared norms at last exact refresh

    double* col(int j) { return w.data() + static_cast<std::size_t>(j) * l; }
    const double* col(int j) const { return w.data() + static_cast<std::size_t>(j) * l; }

    double exact_colnorm_sq(int j, int from_row) const {
        const double* cj = col(j);
        double s = 0.0;
        for (int i = from_row; i < l; ++i) s += cj[i] * cj[i];
        return s;
    }

    void refresh_trailing(int from_col, int from_row) {
        for (int j = from_col; j < m; ++j) {
            cnorm[j] = exact_colnorm_sq(j, from_row);
            refresh[j] = cnorm[j];
        }
    }
};

}  // namespace

bool is_all_zero(const Matrix& z) {
    for (double v : z.data) {
        if (v != 0.0) return false;
    }
    return true;
}

Matrix solve_interpolation(const Matrix& r11, const Matrix& r12) {
    if (r11.rows != r11.cols || r11.rows != r12.rows) {
        throw ContractError("solve_interpolation: R11 must be square and conform with R12");
    }
    const int k = r11.rows;
    const int q = r12.cols;
    Matrix t(k, q);
    if (k == 0 || q == 0) return t;
    const auto& ops = kernels::ops();
    for (int i = k - 1; i >= 0; --i) {
        for (int j = 0; j < q; ++j) t(i, j) = r12(i, j);
        for (int p = i + 1; p < k; ++p) {
            ops.axpy(-r11(i, p), t.row(p), t.row(i), q);
        }
        const double diag = r11(i, i);
        if (diag == 0.0) {
            throw NumericError("solve_interpolation: zero diagonal (numerical-rank inconsistency)");
        }
        for (int j = 0; j < q; ++j) t(i, j) /= diag;
    }
    return t;
}

InterpDecomp interp_decomp(const Matrix& z, double eps) {
    if (z.rows < 1 || z.cols < 1) throw ContractError("interp_decomp: empty matrix");
    if (is_all_zero(z)) throw NumericError("interp_decomp: all-zero matrix, relative criterion undefined");

    const int l = z.rows;
    const int m = z.cols;
    const int t_max = std::min(l, m);
    const auto& ops = kernels::ops();

    QrcpWorkspace ws;
    ws.l = l;
    ws.m = m;
    ws.w.resize(static_cast<std::size_t>(l) * m);
    ws.perm.resize(m);
    ws.cnorm.resize(m);
    ws.refresh.resize(m);
    for (int j = 0; j < m; ++j) {
        double* cj = ws.col(j);
        for (int i = 0; i < l; ++i) cj[i] = z(i, j);
        ws.perm[j] = j;
        ws.cnorm[j] = ops.dot(cj, cj, l);
        ws.refresh[j] = ws.cnorm[j];
    }

    double norm_sq = 0.0;
    for (int j = 0; j < m; ++j) norm_sq += ws.cnorm[j];
    const double thresh_sq = eps * eps * norm_sq;

    int k = -1;
    double trailing_sq_at_stop = 0.0;
    std::vector<double> hh(l);  // Householder vector for the current column

    for (int t = 0; k < 0;) {
        // Truncation check. Skipped at t == 0: a nonzero Z can never satisfy
        // it for eps < 1, and always doing one step keeps k >= 1 even for
        // out-of-contract eps >= 1. The cheap downdated estimate is confirmed
        // by an exact trailing-norm recomputation before any stop decision.
        if (t >= 1) {
            double trailing_est = 0.0;
            for (int j = t; j < m; ++j) trailing_est += ws.cnorm[j];
            if (t == t_max || trailing_est <= thresh_sq * kExactTriggerMargin) {
                ws.refresh_trailing(t, t);
                double trailing_exact = 0.0;
                for (int j = t; j < m; ++j) trailing_exact += ws.cnorm[j];
                if (t == t_max || trailing_exact <= thresh_sq) {
                    k = t;
                    trailing_sq_at_stop = t == t_max ? 0.0 : trailing_exact;
                    break;
                }
            }
        }

        // Pivot: largest remaining column norm, lowest index on ties.
        int pivot = t;
        for (int j = t + 1; j < m; ++j) {
            if (ws.cnorm[j] > ws.cnorm[pivot]) pivot = j;
        }
        if (pivot != t) {
            double* ct = ws.col(t);
            double* cp = ws.col(pivot);
            for (int i = 0; i < l; ++i) std::swap(ct[i], cp[i]);
            std::swap(ws.perm[t], ws.perm[pivot]);
            std::swap(ws.cnorm[t], ws.cnorm[pivot]);
            std::swap(ws.refresh[t], ws.refresh[pivot]);
        }

        double* ct = ws.col(t);
        const double pivot_norm_sq = ws.exact_colnorm_sq(t, t);
        if (pivot_norm_sq == 0.0) {
            if (t == 0) {
                // Nonzero Z guarantees a nonzero max column at t == 0.
                throw NumericError("interp_decomp: inconsistent column norms");
            }
            // A stale downdate picked a truly zero column. Refresh and let the
            // truncation check settle whether anything real remains.
            ws.refresh_trailing(t, t);
            continue;
        }

        // Householder reflector zeroing column t below the diagonal.
        const double norm = std::sqrt(pivot_norm_sq);
        const double beta = ct[t] >= 0.0 ? -norm : norm;
        hh[t] = ct[t] - beta;
        double vsq = hh[t] * hh[t];
        for (int i = t + 1; i < l; ++i) {
            hh[i] = ct[i];
            vsq += hh[i] * hh[i];
        }
        ct[t] = beta;
        for (int i = t + 1; i < l; ++i) ct[i] = 0.0;

        const int len = l - t;
        for (int j = t + 1; j < m; ++j) {
            double* cj = ws.col(j);
            const double coef = -2.0 * ops.dot(hh.data() + t, cj + t, len) / vsq;
            ops.axpy(coef, hh.data() + t, cj + t, len);

            const double r = cj[t];
            double updated = ws.cnorm[j] - r * r;
            if (!(updated > kDriftGuard * kDriftGuard * ws.refresh[j])) {
                updated = ws.exact_colnorm_sq(j, t + 1);
                ws.refresh[j] = updated;
            }
            ws.cnorm[j] = updated;
        }
        ++t;
    }

    InterpDecomp out;
    out.k = k;
    out.index_set.assign(ws.perm.begin(), ws.perm.begin() + k);
    out.residual_rel = std::sqrt(std::max(trailing_sq_at_stop, 0.0) / norm_sq);
    out.d = Matrix(k, m);
    for (int i = 0; i < k; ++i) out.d(i, ws.perm[i]) = 1.0;

    if (k < m) {
        Matrix r11(k, k);
        Matrix r12(k, m - k);
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) r11(i, j) = ws.col(j)[i];
            for (int j = k; j < m; ++j) r12(i, j - k) = ws.col(j)[i];
        }
        Matrix tcoef = solve_interpolation(r11, r12);
        for (int i = 0; i < k; ++i) {
            for (int j = k; j < m; ++j) out.d(i, ws.perm[j]) = tcoef(i, j - k);
        }
    }
    return out;
}

double reconstruction_residual(const Matrix& z, const InterpDecomp& id) {
    Matrix zi(z.rows, id.k);
    for (int i = 0; i < z.rows; ++i) {
        for (int t = 0; t < id.k; ++t) zi(i, t) = z(i, id.index_set[t]);
    }
    Matrix recon = matmul_nn(zi, id.d);
    double err_sq = 0.0;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < z.data.size(); ++i) {
        const double d = z.data[i] - recon.data[i];
        err_sq += d * d;
        norm_sq += z.data[i] * z.data[i];
    }
    return norm_sq > 0.0 ? std::sqrt(err_sq / norm_sq) : 0.0;
}

}  // namespace inramr::lowrank
