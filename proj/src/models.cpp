#include "sclab/models.hpp"

#include <cmath>
#include <string>

#include "sclab/errors.hpp"

namespace sclab::models {

void DoubleWellConfig::validate() const {
    if (!(hbar > 0.0)) throw Error("double well: hbar must be positive, got " + std::to_string(hbar));
    if (!(L > 0.0)) throw Error("double well: half-width must be positive");
    if (M < 64)
        throw ResolutionGuard("double well: M=" + std::to_string(M) + " below the minimum of 64");
    const double limit = std::sqrt(hbar) / 8.0;
    if (dx() > limit)
        throw ResolutionGuard("double well: spacing " + std::to_string(dx()) +
                              " exceeds sqrt(hbar)/8 = " + std::to_string(limit));
}

void CurieWeissConfig::validate() const {
    if (N < 1) throw Error("spin chain: N must be >= 1, got " + std::to_string(N));
}

void BoseHubbardConfig::validate() const {
    if (N < 1) throw Error("boson pair: N must be >= 1, got " + std::to_string(N));
    if (T != 1.0 || U != -2.0 || rho != -2.0)
        throw UnsupportedParameters(
            "boson pair: matrix entries encode (T, U, rho) = (1, -2, -2); got (" +
            std::to_string(T) + ", " + std::to_string(U) + ", " + std::to_string(rho) + ")");
}

std::vector<double> double_well_grid(const DoubleWellConfig& cfg) {
    const int M = cfg.M;
    const double dx = cfg.dx();
    std::vector<double> x(static_cast<std::size_t>(M));
    for (int i = 0; i < (M + 1) / 2; ++i) {
        x[static_cast<std::size_t>(i)] = -cfg.L + (i + 1) * dx;
        x[static_cast<std::size_t>(M - 1 - i)] = -x[static_cast<std::size_t>(i)];
    }
    if (M % 2 == 1) x[static_cast<std::size_t>(M / 2)] = 0.0;
    return x;
}

DoubleWellOperator build_double_well(const DoubleWellConfig& cfg) {
    cfg.validate();
    DoubleWellOperator op;
    op.dx = cfg.dx();
    op.grid = double_well_grid(cfg);
    const double kin = cfg.hbar * cfg.hbar / (op.dx * op.dx);
    op.matrix.diag.resize(static_cast<std::size_t>(cfg.M));
    op.matrix.off.assign(static_cast<std::size_t>(cfg.M - 1), -kin);
    for (int i = 0; i < cfg.M; ++i)
        op.matrix.diag[static_cast<std::size_t>(i)] =
            2.0 * kin + quartic_potential(op.grid[static_cast<std::size_t>(i)]);
    return op;
}

linalg::SymTridiag build_cw_dicke(const CurieWeissConfig& cfg) {
    cfg.validate();
    const int N = cfg.N;
    linalg::SymTridiag H;
    H.diag.resize(static_cast<std::size_t>(N + 1));
    H.off.resize(static_cast<std::size_t>(N));
    for (int k = 0; k <= N; ++k) {
        const double twist = static_cast<double>(2 * k - N);
        H.diag[static_cast<std::size_t>(k)] = -(cfg.J / (2.0 * N)) * twist * twist;
    }
    for (int k = 0; k < N; ++k)
        H.off[static_cast<std::size_t>(k)] =
            -cfg.B * std::sqrt(static_cast<double>(N - k) * static_cast<double>(k + 1));
    return H;
}

linalg::ComplexDense build_cw_tensor(const CurieWeissConfig& cfg) {
    cfg.validate();
    if (cfg.N > 10)
        throw SizeExceeded("product-space construction limited to N <= 10, got N=" +
                           std::to_string(cfg.N));
    const int N = cfg.N;
    const int dim = 1 << N;
    linalg::ComplexDense H = linalg::ComplexDense::zero(dim);
    for (int b = 0; b < dim; ++b) {
        // sum_i sigma3(i) on a product state: +1 per set bit, -1 per clear bit.
        const int s = 2 * __builtin_popcount(static_cast<unsigned>(b)) - N;
        H.at(b, b) = -(cfg.J / (2.0 * N)) * static_cast<double>(s) * static_cast<double>(s);
        for (int j = 0; j < N; ++j) H.at(b ^ (1 << j), b) += -cfg.B;  // sigma1(j) flips bit j
    }
    return H;
}

linalg::SymTridiag build_bh(const BoseHubbardConfig& cfg) {
    cfg.validate();
    const int N = cfg.N;
    const double D = static_cast<double>(N + 1);
    linalg::SymTridiag H;
    H.diag.resize(static_cast<std::size_t>(N + 1));
    H.off.resize(static_cast<std::size_t>(N));
    for (int n1 = 0; n1 <= N; ++n1) {
        const double m = n1 - 0.5 * N;  // Sz eigenvalue
        H.diag[static_cast<std::size_t>(n1)] = -(2.0 / (D * D)) * (m * m - N + 0.5);
    }
    for (int n1 = 0; n1 < N; ++n1)
        H.off[static_cast<std::size_t>(n1)] =
            -(1.0 / (2.0 * D)) *
            std::sqrt(static_cast<double>(N - n1) * static_cast<double>(n1 + 1));
    return H;
}

linalg::SymTridiag apply_perturbation(const linalg::SymTridiag& H, const Perturbation& p,
                                      const CurieWeissConfig& cfg) {
    cfg.validate();
    if (p.kind != Perturbation::Kind::cw_field)
        throw KindMismatch("spin matrix perturbed with a non-field perturbation");
    if (H.n() != cfg.N + 1)
        throw KindMismatch("spin perturbation: matrix dimension " + std::to_string(H.n()) +
                           " does not match N+1 = " + std::to_string(cfg.N + 1));
    linalg::SymTridiag P = H;
    for (int k = 0; k <= cfg.N; ++k)
        P.diag[static_cast<std::size_t>(k)] += p.epsilon * static_cast<double>(2 * k - cfg.N);
    return P;
}

linalg::SymTridiag apply_perturbation(const linalg::SymTridiag& H, const Perturbation& p,
                                      const DoubleWellConfig& cfg) {
    cfg.validate();
    if (p.kind != Perturbation::Kind::schrodinger_flea)
        throw KindMismatch("position-space matrix perturbed with a non-flea perturbation");
    if (H.n() != cfg.M)
        throw KindMismatch("flea perturbation: matrix dimension " + std::to_string(H.n()) +
                           " does not match M = " + std::to_string(cfg.M));
    if (!(p.flea.w > 0.0)) throw Error("flea width must be positive");
    const std::vector<double> x = double_well_grid(cfg);
    linalg::SymTridiag P = H;
    for (int i = 0; i < cfg.M; ++i) {
        const double u = (x[static_cast<std::size_t>(i)] - p.flea.q0) / p.flea.w;
        P.diag[static_cast<std::size_t>(i)] += p.flea.delta * std::exp(-u * u);
    }
    return P;
}

}  // namespace sclab::models
