#include "sclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sclab/errors.hpp"
#include "sclab/util.hpp"

namespace sclab::linalg {

namespace {

// Magnitude floor that keeps Sturm / LU pivots out of the denormal range
// without changing any sign decision.
constexpr double kPivotFloor = 1e-300;

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double vec_norm2(const std::vector<double>& v) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
    return std::sqrt(util::pairwise_sum(sq));
}

// ||T v - lambda v||_2, the quantity EigenPair::residual promises.
double residual_norm(const SymTridiag& T, double lambda, const std::vector<double>& v) {
    const int n = T.n();
    std::vector<double> sq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double r = (T.diag[static_cast<std::size_t>(i)] - lambda) * v[static_cast<std::size_t>(i)];
        if (i > 0) r += T.off[static_cast<std::size_t>(i - 1)] * v[static_cast<std::size_t>(i - 1)];
        if (i + 1 < n) r += T.off[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i + 1)];
        sq[static_cast<std::size_t>(i)] = r * r;
    }
    return std::sqrt(util::pairwise_sum(sq));
}

// max |entry| of T: a lower bound on ||T||_2 used to scale residual targets,
// so meeting the scaled target also meets it relative to the true norm.
double entry_max(const SymTridiag& T) {
    double m = 0.0;
    for (double d : T.diag) m = std::max(m, std::fabs(d));
    for (double e : T.off) m = std::max(m, std::fabs(e));
    return m;
}

// Fix the overall sign: the largest-magnitude component (first such index on
// ties) is made positive, so repeated solves agree bitwise.
void fix_sign(std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::fabs(v[i]) > std::fabs(v[best])) best = i;
    if (v[best] < 0.0)
        for (double& x : v) x = -x;
}

// Solves (T - shift I) x = b by tridiagonal LU with partial pivoting
// (factorization recomputed per call; each inverse-iteration step is O(n)).
// Returns false when a pivot magnitude falls below kPivotFloor, signalling
// the caller to retry with a nudged shift.
bool solve_shifted(const SymTridiag& T, double shift, std::vector<double>& x) {
    const int n = T.n();
    std::vector<double> sub(static_cast<std::size_t>(std::max(0, n - 1)));
    std::vector<double> mid(static_cast<std::size_t>(n));
    std::vector<double> sup(static_cast<std::size_t>(std::max(0, n - 1)));
    std::vector<double> sup2(static_cast<std::size_t>(std::max(0, n - 2)), 0.0);  // pivoting fill-in
    for (int i = 0; i < n; ++i) mid[static_cast<std::size_t>(i)] = T.diag[static_cast<std::size_t>(i)] - shift;
    for (int i = 0; i + 1 < n; ++i) {
        sub[static_cast<std::size_t>(i)] = T.off[static_cast<std::size_t>(i)];
        sup[static_cast<std::size_t>(i)] = T.off[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i + 1 < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (std::fabs(sub[k]) > std::fabs(mid[k])) {  // swap rows i, i+1
            std::swap(mid[k], sub[k]);
            std::swap(sup[k], mid[k + 1]);
            if (i + 2 < n) {
                sup2[k] = sup[k + 1];
                sup[k + 1] = 0.0;
            }
            std::swap(x[k], x[k + 1]);
        }
        if (std::fabs(mid[k]) < kPivotFloor) return false;
        const double m = sub[k] / mid[k];
        mid[k + 1] -= m * sup[k];
        if (i + 2 < n) sup[k + 1] -= m * sup2[k];
        x[k + 1] -= m * x[k];
    }
    if (std::fabs(mid[static_cast<std::size_t>(n - 1)]) < kPivotFloor) return false;
    for (int i = n - 1; i >= 0; --i) {
        const std::size_t k = static_cast<std::size_t>(i);
        double s = x[k];
        if (i + 1 < n) s -= sup[k] * x[k + 1];
        if (i + 2 < n) s -= sup2[k] * x[k + 2];
        x[k] = s / mid[k];
    }
    return true;
}

// Bisects eigenvalue #index (0-based, ascending) to a bracket of width <= tol
// inside [lo, hi], where the Sturm counts at lo/hi straddle the index.
double bisect_eigenvalue(const SymTridiag& T, int index, double lo, double hi, double tol) {
    int steps = 0;
    while (hi - lo > tol) {
        if (++steps > 200)
            throw IterationLimit("eigenvalue bisection exceeded 200 steps (tol=" +
                                 std::to_string(tol) + ")");
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(T, mid) > index)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Shared core of ground_pair / ground_pair_parity: bisection for the two
// lowest eigenvalues, degeneracy gate, then inverse iteration.
EigenPair ground_pair_impl(const SymTridiag& T, double tol) {
    const int n = T.n();
    if (n == 1) return EigenPair{T.diag[0], {1.0}, 0.0};

    const double bound = norm_bound(T);
    const double scale = std::max(1.0, bound);
    const double width = tol > 0.0 ? tol : 1e-14 * scale;

    const double lo0 = -bound, hi0 = bound;
    const double lam0 = bisect_eigenvalue(T, 0, lo0, hi0, width);
    const double lam1 = bisect_eigenvalue(T, 1, std::max(lo0, lam0 - width), hi0, width);
    const double gap = lam1 - lam0;
    if (gap <= 1e-13 * bound)
        throw NearDegenerate("lowest eigenvalues separated by " + std::to_string(gap) +
                             " (<= 1e-13 * " + std::to_string(bound) +
                             "); ground vector undefined at this precision");

    // Shift slightly above lambda0 so the factorization is regular, but never
    // so far that the shift is closer to lambda1 than to lambda0.
    double offset = std::min(1e-12 * scale, 0.125 * gap);
    if (offset <= 0.0) offset = 1e-12 * scale;
    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    const double rtarget = 1e-10 * std::max(1.0, entry_max(T));
    double resid = std::numeric_limits<double>::infinity();
    double shift = lam0 + offset;
    int restarts = 0;
    for (int iter = 0; iter < 8; ++iter) {
        std::vector<double> y = v;
        if (!solve_shifted(T, shift, y)) {
            if (++restarts > 4)
                throw IterationLimit("inverse iteration: persistent singular pivot");
            // Nudge off the exact eigenvalue; stays well below gap/2 so the
            // shift remains closest to lambda0.
            shift = lam0 + offset * (1.0 + 0.3 * restarts);
            --iter;
            continue;
        }
        const double ny = vec_norm2(y);
        if (!(ny > 0.0) || !std::isfinite(ny))
            throw IterationLimit("inverse iteration produced a non-finite iterate");
        for (double& x : y) x /= ny;
        v = std::move(y);
        resid = residual_norm(T, lam0, v);
        if (resid <= rtarget) break;
    }
    if (resid > rtarget)
        throw IterationLimit("inverse iteration residual " + std::to_string(resid) +
                             " above target " + std::to_string(rtarget) + " after 8 steps");
    fix_sign(v);
    return EigenPair{lam0, std::move(v), resid};
}

double frobenius(const DenseSym& D) {
    std::vector<double> sq(D.a.size());
    for (std::size_t i = 0; i < D.a.size(); ++i) sq[i] = D.a[i] * D.a[i];
    return std::sqrt(util::pairwise_sum(sq));
}

double off_frobenius(const DenseSym& D) {
    std::vector<double> sq;
    sq.reserve(D.a.size());
    for (int i = 0; i < D.n; ++i)
        for (int j = 0; j < D.n; ++j)
            if (i != j) sq.push_back(D.at(i, j) * D.at(i, j));
    return std::sqrt(util::pairwise_sum(sq));
}

}  // namespace

void SymTridiag::validate() const {
    if (diag.empty()) throw Error("tridiagonal matrix must have at least one row");
    if (off.size() + 1 != diag.size())
        throw Error("tridiagonal shape mismatch: " + std::to_string(diag.size()) +
                    " diagonal vs " + std::to_string(off.size()) + " off-diagonal entries");
    if (!all_finite(diag) || !all_finite(off))
        throw Error("tridiagonal matrix contains a non-finite entry");
}

DenseSym DenseSym::zero(int n) {
    DenseSym D;
    D.n = n;
    D.a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    return D;
}

ComplexDense ComplexDense::zero(int n) {
    ComplexDense M;
    M.n = n;
    M.a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), {0.0, 0.0});
    return M;
}

ComplexDense ComplexDense::identity(int n) {
    ComplexDense M = zero(n);
    for (int i = 0; i < n; ++i) M.at(i, i) = 1.0;
    return M;
}

ComplexDense& ComplexDense::operator+=(const ComplexDense& other) {
    if (n != other.n) throw Error("matrix sum: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += other.a[i];
    return *this;
}

ComplexDense& ComplexDense::operator-=(const ComplexDense& other) {
    if (n != other.n) throw Error("matrix difference: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= other.a[i];
    return *this;
}

ComplexDense& ComplexDense::operator*=(std::complex<double> c) {
    for (auto& x : a) x *= c;
    return *this;
}

ComplexDense operator*(const ComplexDense& A, const ComplexDense& B) {
    if (A.n != B.n) throw Error("matrix product: dimension mismatch");
    const int n = A.n;
    ComplexDense C = ComplexDense::zero(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const std::complex<double> aik = A.at(i, k);
            if (aik == std::complex<double>{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

ComplexDense operator-(ComplexDense A, const ComplexDense& B) {
    A -= B;
    return A;
}

ComplexDense operator+(ComplexDense A, const ComplexDense& B) {
    A += B;
    return A;
}

double hermitian_defect(const ComplexDense& M) {
    double d = 0.0;
    for (int i = 0; i < M.n; ++i)
        for (int j = i; j < M.n; ++j)
            d = std::max(d, std::abs(M.at(i, j) - std::conj(M.at(j, i))));
    return d;
}

int sturm_count(const SymTridiag& T, double x) {
    const int n = T.n();
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
        const double e = i > 0 ? T.off[static_cast<std::size_t>(i - 1)] : 0.0;
        q = (T.diag[static_cast<std::size_t>(i)] - x) - e * e / q;
        if (std::fabs(q) < kPivotFloor) q = (q < 0.0) ? -kPivotFloor : kPivotFloor;
        if (q < 0.0) ++count;
    }
    return count;
}

Spectrum tridiag_eigs(const SymTridiag& T, int k, double tol) {
    T.validate();
    const int n = T.n();
    if (k < 1 || k > n)
        throw Error("tridiag_eigs: requested " + std::to_string(k) + " of " +
                    std::to_string(n) + " eigenvalues");
    const double bound = norm_bound(T);
    const double width = tol > 0.0 ? tol : 1e-14 * std::max(1.0, bound);
    Spectrum s;
    s.values.reserve(static_cast<std::size_t>(k));
    double lo = -bound;
    for (int i = 0; i < k; ++i) {
        const double lam = bisect_eigenvalue(T, i, lo, bound, width);
        s.values.push_back(lam);
        lo = std::max(lo, lam - width);  // eigenvalue i+1 cannot lie below this
    }
    return s;
}

double norm_bound(const SymTridiag& T) {
    const int n = T.n();
    double b = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = std::fabs(T.diag[static_cast<std::size_t>(i)]);
        if (i > 0) row += std::fabs(T.off[static_cast<std::size_t>(i - 1)]);
        if (i + 1 < n) row += std::fabs(T.off[static_cast<std::size_t>(i)]);
        b = std::max(b, row);
    }
    return b;
}

EigenPair ground_pair(const SymTridiag& T, double tol) {
    T.validate();
    return ground_pair_impl(T, tol);
}

EigenPair ground_pair_parity(const SymTridiag& T, double tol) {
    T.validate();
    const int n = T.n();
    for (int i = 0; i < n; ++i)
        if (T.diag[static_cast<std::size_t>(i)] != T.diag[static_cast<std::size_t>(n - 1 - i)])
            throw Error("parity solve requires a bitwise reflection-symmetric diagonal");
    for (int i = 0; i + 1 < n; ++i)
        if (T.off[static_cast<std::size_t>(i)] != T.off[static_cast<std::size_t>(n - 2 - i)])
            throw Error("parity solve requires bitwise reflection-symmetric off-diagonals");
    if (n == 1) return EigenPair{T.diag[0], {1.0}, 0.0};

    // Fold onto the even-reflection subspace. Basis: (e_i + e_{n-1-i})/sqrt2
    // for i < n/2, plus the fixed middle vector when n is odd.
    const int h = n / 2;
    SymTridiag F;
    if (n % 2 == 0) {
        F.diag.assign(T.diag.begin(), T.diag.begin() + h);
        F.off.assign(T.off.begin(), T.off.begin() + (h - 1));
        F.diag[static_cast<std::size_t>(h - 1)] += T.off[static_cast<std::size_t>(h - 1)];
    } else {
        F.diag.assign(T.diag.begin(), T.diag.begin() + h + 1);
        F.off.assign(T.off.begin(), T.off.begin() + h);
        F.off[static_cast<std::size_t>(h - 1)] *= std::sqrt(2.0);
    }

    EigenPair folded = ground_pair_impl(F, tol);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < h; ++i) {
        const double x = folded.vector[static_cast<std::size_t>(i)] * inv_sqrt2;
        v[static_cast<std::size_t>(i)] = x;
        v[static_cast<std::size_t>(n - 1 - i)] = x;  // same double both sides: exact symmetry
    }
    if (n % 2 == 1) v[static_cast<std::size_t>(h)] = folded.vector[static_cast<std::size_t>(h)];
    fix_sign(v);
    const double resid = residual_norm(T, folded.value, v);
    return EigenPair{folded.value, std::move(v), resid};
}

Spectrum dense_eigen(const DenseSym& D) {
    const int n = D.n;
    if (n < 1) throw Error("dense_eigen: empty matrix");
    if (n > 4096) throw SizeExceeded("dense_eigen: n=" + std::to_string(n) + " exceeds 4096");
    if (D.a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw Error("dense_eigen: storage does not match declared dimension");
    if (!all_finite(D.a)) throw Error("dense_eigen: matrix contains a non-finite entry");

    DenseSym A = D;
    std::vector<std::vector<double>> V(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) V[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;

    const double total = frobenius(A);
    const double threshold = 1e-14 * total;
    bool converged = total == 0.0 || n == 1;
    for (int sweep = 0; !converged && sweep < 60; ++sweep) {
        if (off_frobenius(A) <= threshold) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A.at(p, q);
                if (apq == 0.0) continue;
                const double tau = (A.at(q, q) - A.at(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double app = A.at(p, p), aqq = A.at(q, q);
                A.at(p, p) = app - t * apq;
                A.at(q, q) = aqq + t * apq;
                A.at(p, q) = 0.0;
                A.at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = A.at(k, p), akq = A.at(k, q);
                    A.at(k, p) = c * akp - s * akq;
                    A.at(p, k) = A.at(k, p);
                    A.at(k, q) = s * akp + c * akq;
                    A.at(q, k) = A.at(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    const double vkq = V[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    V[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * vkp - s * vkq;
                    V[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && off_frobenius(A) > threshold)
        throw IterationLimit("Jacobi sweeps did not reach the off-diagonal threshold");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&A](int i, int j) { return A.at(i, i) < A.at(j, j); });
    Spectrum s;
    s.values.resize(static_cast<std::size_t>(n));
    s.vectors.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int src = order[static_cast<std::size_t>(i)];
        s.values[static_cast<std::size_t>(i)] = A.at(src, src);
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            col[static_cast<std::size_t>(k)] = V[static_cast<std::size_t>(k)][static_cast<std::size_t>(src)];
        fix_sign(col);
        s.vectors[static_cast<std::size_t>(i)] = std::move(col);
    }
    return s;
}

double operator_norm(const SymTridiag& T) {
    T.validate();
    const int n = T.n();
    if (n == 1) return std::fabs(T.diag[0]);
    const double bound = norm_bound(T);
    if (bound == 0.0) return 0.0;
    const double width = 1e-14 * std::max(1.0, bound);
    const double lo = bisect_eigenvalue(T, 0, -bound, bound, width);
    const double hi = bisect_eigenvalue(T, n - 1, -bound, bound, width);
    return std::max(std::fabs(lo), std::fabs(hi));
}

double operator_norm(const DenseSym& D) {
    if (D.n < 1) throw Error("operator_norm: empty matrix");
    const double total = frobenius(D);
    if (total == 0.0) return 0.0;
    if (off_frobenius(D) <= 1e-12 * total) {
        double m = 0.0;
        for (int i = 0; i < D.n; ++i) m = std::max(m, std::fabs(D.at(i, i)));
        return m;
    }
    const Spectrum s = dense_eigen(D);
    return std::max(std::fabs(s.values.front()), std::fabs(s.values.back()));
}

double operator_norm(const ComplexDense& M) {
    const int n = M.n;
    if (n < 1) throw Error("operator_norm: empty matrix");
    if (M.a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw Error("operator_norm: storage does not match declared dimension");
    double scale = 0.0;
    for (const auto& x : M.a) scale = std::max(scale, std::abs(x));
    const double defect = hermitian_defect(M);
    if (defect > 1e-12 * std::max(1.0, scale))
        throw NotHermitian("operator_norm: Hermitian defect " + std::to_string(defect));
    if (scale == 0.0) return 0.0;

    // Diagonal fast path: resolves by inspection when the off-diagonal part is
    // negligible (relative error bounded by the same 1e-12).
    std::vector<double> offsq, totsq;
    offsq.reserve(M.a.size());
    totsq.reserve(M.a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double m2 = std::norm(M.at(i, j));
            totsq.push_back(m2);
            if (i != j) offsq.push_back(m2);
        }
    const double total = std::sqrt(util::pairwise_sum(totsq));
    if (std::sqrt(util::pairwise_sum(offsq)) <= 1e-12 * total) {
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(M.at(i, i)));
        return m;
    }

    // Real symmetric embedding [[Re, -Im], [Im, Re]]: same spectrum, doubled
    // multiplicity, so the spectral norm carries over unchanged.
    DenseSym B = DenseSym::zero(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = M.at(i, j).real();
            const double im = M.at(i, j).imag();
            B.at(i, j) = re;
            B.at(n + i, n + j) = re;
            B.at(i, n + j) = -im;
            B.at(n + i, j) = im;
        }
    return operator_norm(B);
}

}  // namespace sclab::linalg
