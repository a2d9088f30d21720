#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/linalg.hpp"
#include "sclab/models.hpp"
#include "sclab/util.hpp"

using namespace sclab;
using linalg::DenseSym;
using linalg::SymTridiag;

namespace {

double grid_mean_position(const std::vector<double>& v, const std::vector<double>& x) {
    std::vector<double> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) terms[i] = v[i] * v[i] * x[i];
    return util::pairwise_sum(terms);
}

// Independent reconstruction of the boson-pair matrix from raw two-mode
// ladder operators on the occupation basis |n1, N-n1>:
//   a1†a2 |n1> = sqrt((n1+1)(N-n1)) |n1+1>,
// assembled as -(2/(N+1)^2)(Sz^2 - N + 1/2) - (1/(N+1)) Sx with dense
// products, guarding the builder's closed-form entries against sign and
// grouping mistakes.
DenseSym bh_occupation_oracle(int N) {
    const int d = N + 1;
    const double D = static_cast<double>(N + 1);
    DenseSym hop = DenseSym::zero(d);  // a1†a2 + a2†a1
    for (int n1 = 0; n1 < N; ++n1) {
        const double amp =
            std::sqrt(static_cast<double>(n1 + 1) * static_cast<double>(N - n1));
        hop.at(n1 + 1, n1) += amp;
        hop.at(n1, n1 + 1) += amp;
    }
    DenseSym H = DenseSym::zero(d);
    for (int a = 0; a < d; ++a) {
        const double mza = a - 0.5 * N;
        H.at(a, a) = -(2.0 / (D * D)) * (mza * mza - N + 0.5);
        for (int b = 0; b < d; ++b) H.at(a, b) += -(1.0 / D) * 0.5 * hop.at(a, b);
    }
    return H;
}

}  // namespace

TEST_CASE("double-well grid is mirrored and samples the potential exactly") {
    models::DoubleWellConfig cfg;
    cfg.hbar = 1.0;
    cfg.L = 3.0;
    cfg.M = 101;
    const auto op = models::build_double_well(cfg);
    REQUIRE(op.grid.size() == 101);
    CHECK(op.grid[50] == 0.0);  // odd M puts a point exactly at the origin
    for (int i = 0; i < 101; ++i)
        CHECK(op.grid[static_cast<std::size_t>(i)] ==
              -op.grid[static_cast<std::size_t>(100 - i)]);

    CHECK(models::quartic_potential(0.0) == 1.0);
    CHECK(models::quartic_potential(1.0) == 0.0);
    CHECK(models::quartic_potential(-1.0) == 0.0);

    // diag - 2 hbar^2/dx^2 recovers V on the grid; near x = +-1 the value is
    // quadratically small in the grid offset.
    const double kin = cfg.hbar * cfg.hbar / (op.dx * op.dx);
    CHECK(op.matrix.diag[50] - 2.0 * kin == 1.0);
    int near_one = 0;
    for (int i = 1; i < 101; ++i)
        if (std::fabs(op.grid[static_cast<std::size_t>(i)] - 1.0) <
            std::fabs(op.grid[static_cast<std::size_t>(near_one)] - 1.0))
            near_one = i;
    CHECK(std::fabs(op.grid[static_cast<std::size_t>(near_one)] - 1.0) < 1e-12);
    CHECK(std::fabs(op.matrix.diag[static_cast<std::size_t>(near_one)] - 2.0 * kin) < 1e-23);
    for (double e : op.matrix.off) CHECK(e == -kin);
}

TEST_CASE("double-well ground energy tracks the harmonic approximation") {
    models::DoubleWellConfig cfg;
    cfg.hbar = 0.05;
    const auto op = models::build_double_well(cfg);
    const auto g = linalg::ground_pair_parity(op.matrix, 0.0);
    // Each well is approximately harmonic with E0 ~= 2*hbar = 0.1.
    CHECK(g.value > 0.09);
    CHECK(g.value < 0.11);
}

TEST_CASE("double-well ground energy decreases strictly along the hbar ladder") {
    const double hbars[] = {0.5, 0.2, 0.1, 0.05, 0.02};
    double prev = std::numeric_limits<double>::infinity();
    for (double h : hbars) {
        models::DoubleWellConfig cfg;
        cfg.hbar = h;
        const auto op = models::build_double_well(cfg);
        const double e0 = linalg::ground_pair_parity(op.matrix, 0.0).value;
        CHECK(e0 > 0.0);
        CHECK(e0 < prev);
        prev = e0;
    }
    CHECK(prev < 0.06);  // hbar = 0.02 is already deep in the well
}

TEST_CASE("double-well config guards") {
    models::DoubleWellConfig coarse;
    coarse.hbar = 0.02;
    coarse.M = 128;  // dx = 6/129 > sqrt(0.02)/8
    CHECK_THROWS_AS(models::build_double_well(coarse), ResolutionGuard);

    models::DoubleWellConfig tiny;
    tiny.hbar = 1.0;
    tiny.M = 32;
    CHECK_THROWS_AS(models::build_double_well(tiny), ResolutionGuard);

    models::DoubleWellConfig bad;
    bad.hbar = 0.0;
    CHECK_THROWS_AS(models::build_double_well(bad), Error);
}

TEST_CASE("spin-chain matrix entries and reflection symmetry") {
    SUBCASE("single site closed form") {
        models::CurieWeissConfig cfg;
        cfg.N = 1;
        const auto H = models::build_cw_dicke(cfg);
        REQUIRE(H.n() == 2);
        CHECK(H.diag[0] == -0.5);
        CHECK(H.diag[1] == -0.5);
        CHECK(H.off[0] == -0.5);
    }
    SUBCASE("diagonal is a palindrome for every N") {
        models::CurieWeissConfig cfg;
        cfg.N = 7;
        cfg.B = 0.9;
        cfg.J = 0.7;
        const auto H = models::build_cw_dicke(cfg);
        for (int k = 0; k <= 7; ++k)
            CHECK(H.diag[static_cast<std::size_t>(k)] ==
                  H.diag[static_cast<std::size_t>(7 - k)]);
        for (int k = 0; k < 7; ++k) CHECK(H.off[static_cast<std::size_t>(k)] < 0.0);
    }
    SUBCASE("N < 1 rejected") {
        models::CurieWeissConfig cfg;
        cfg.N = 0;
        CHECK_THROWS_AS(models::build_cw_dicke(cfg), Error);
    }
}

TEST_CASE("spin-chain ground state: positive, symmetric, zero magnetization") {
    for (int N : {7, 40}) {
        models::CurieWeissConfig cfg;
        cfg.N = N;
        const auto H = models::build_cw_dicke(cfg);
        const auto g = linalg::ground_pair_parity(H, 0.0);
        for (double c : g.vector) CHECK(c > 0.0);
        for (int k = 0; k <= N; ++k)
            CHECK(g.vector[static_cast<std::size_t>(k)] ==
                  g.vector[static_cast<std::size_t>(N - k)]);
        std::vector<double> terms(static_cast<std::size_t>(N + 1));
        for (int k = 0; k <= N; ++k)
            terms[static_cast<std::size_t>(k)] = g.vector[static_cast<std::size_t>(k)] *
                                                 g.vector[static_cast<std::size_t>(k)] *
                                                 (2.0 * k - N) / N;
        CHECK(std::fabs(util::pairwise_sum(terms)) < 1e-12);
    }
}

TEST_CASE("spin-chain energy density rises monotonically to -(1+B^2)/2") {
    const double limit = -(1.0 + 0.25) / 2.0;  // B = 0.5, J = 1
    double prev = -std::numeric_limits<double>::infinity();
    for (int N : {10, 20, 50, 100, 200, 500, 1000}) {
        models::CurieWeissConfig cfg;
        cfg.N = N;
        const auto H = models::build_cw_dicke(cfg);
        const double per_site = linalg::ground_pair_parity(H, 0.0).value / N;
        CHECK(per_site > prev);   // approaches the limit from below
        CHECK(per_site < limit);  // product states bound the density above
        prev = per_site;
    }
    CHECK(std::fabs(prev - limit) < 1e-3);
}

TEST_CASE("product-space spin construction") {
    SUBCASE("single site: -(J/2) I - B sigma1") {
        models::CurieWeissConfig cfg;
        cfg.N = 1;
        const auto H = models::build_cw_tensor(cfg);
        REQUIRE(H.n == 2);
        CHECK(H.at(0, 0) == std::complex<double>(-0.5));
        CHECK(H.at(1, 1) == std::complex<double>(-0.5));
        CHECK(H.at(0, 1) == std::complex<double>(-0.5));
        CHECK(H.at(1, 0) == std::complex<double>(-0.5));
    }
    SUBCASE("ground energy matches the symmetric-sector matrix") {
        for (int N : {2, 3}) {
            models::CurieWeissConfig cfg;
            cfg.N = N;
            const auto Ht = models::build_cw_tensor(cfg);
            DenseSym R = DenseSym::zero(Ht.n);
            for (int i = 0; i < Ht.n; ++i)
                for (int j = 0; j < Ht.n; ++j) {
                    CHECK(Ht.at(i, j).imag() == 0.0);
                    R.at(i, j) = Ht.at(i, j).real();
                }
            const double tensor_ground = linalg::dense_eigen(R).values.front();
            const auto Hd = models::build_cw_dicke(cfg);
            const double dicke_ground = linalg::ground_pair_parity(Hd, 0.0).value;
            CHECK(tensor_ground == doctest::Approx(dicke_ground).epsilon(1e-12));
            if (N == 2)
                CHECK(tensor_ground ==
                      doctest::Approx(-(1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-6));
        }
    }
    SUBCASE("commutes with the global spin flip") {
        models::CurieWeissConfig cfg;
        cfg.N = 3;
        cfg.B = 0.9;
        const auto H = models::build_cw_tensor(cfg);
        const int dim = H.n;
        linalg::ComplexDense V = linalg::ComplexDense::zero(dim);
        for (int b = 0; b < dim; ++b) V.at(b ^ (dim - 1), b) = 1.0;  // sigma1 on every site
        const auto C = H * V - V * H;
        double worst = 0.0;
        for (const auto& z : C.a) worst = std::max(worst, std::abs(z));
        CHECK(worst <= 1e-12);
    }
    SUBCASE("dimension guard") {
        models::CurieWeissConfig cfg;
        cfg.N = 11;
        CHECK_THROWS_AS(models::build_cw_tensor(cfg), SizeExceeded);
    }
}

TEST_CASE("boson-pair matrix entries") {
    SUBCASE("N=1 closed form") {
        models::BoseHubbardConfig cfg;
        cfg.N = 1;
        const auto H = models::build_bh(cfg);
        REQUIRE(H.n() == 2);
        CHECK(H.diag[0] == 0.125);
        CHECK(H.diag[1] == 0.125);
        CHECK(H.off[0] == -0.25);
        CHECK(linalg::ground_pair(H, 0.0).value == doctest::Approx(-0.125).epsilon(1e-13));
    }
    SUBCASE("diagonal palindrome and negative hopping") {
        models::BoseHubbardConfig cfg;
        cfg.N = 5;
        const auto H = models::build_bh(cfg);
        for (int k = 0; k <= 5; ++k)
            CHECK(H.diag[static_cast<std::size_t>(k)] ==
                  H.diag[static_cast<std::size_t>(5 - k)]);
        for (double e : H.off) CHECK(e < 0.0);
    }
    SUBCASE("occupation-basis oracle agrees entrywise") {
        for (int N = 2; N <= 6; ++N) {
            models::BoseHubbardConfig cfg;
            cfg.N = N;
            const auto H = models::build_bh(cfg);
            const DenseSym O = bh_occupation_oracle(N);
            for (int a = 0; a <= N; ++a)
                for (int b = 0; b <= N; ++b) {
                    double h = 0.0;
                    if (a == b) h = H.diag[static_cast<std::size_t>(a)];
                    if (std::abs(a - b) == 1)
                        h = H.off[static_cast<std::size_t>(std::min(a, b))];
                    CHECK(std::fabs(O.at(a, b) - h) <= 1e-12);
                }
        }
    }
    SUBCASE("non-reference parameters rejected") {
        models::BoseHubbardConfig cfg;
        cfg.N = 4;
        cfg.T = 2.0;
        CHECK_THROWS_AS(models::build_bh(cfg), UnsupportedParameters);
        cfg.T = 1.0;
        cfg.U = -1.0;
        CHECK_THROWS_AS(models::build_bh(cfg), UnsupportedParameters);
        cfg.U = -2.0;
        cfg.rho = 0.0;
        CHECK_THROWS_AS(models::build_bh(cfg), UnsupportedParameters);
        models::BoseHubbardConfig none;
        none.N = 0;
        CHECK_THROWS_AS(models::build_bh(none), Error);
    }
}

TEST_CASE("field perturbation on the spin chain") {
    models::CurieWeissConfig cfg;
    cfg.N = 4;
    const auto H = models::build_cw_dicke(cfg);
    models::Perturbation p;
    p.kind = models::Perturbation::Kind::cw_field;

    SUBCASE("zero strength leaves the matrix bitwise unchanged") {
        p.epsilon = 0.0;
        const auto P = models::apply_perturbation(H, p, cfg);
        for (int k = 0; k <= 4; ++k)
            CHECK(P.diag[static_cast<std::size_t>(k)] == H.diag[static_cast<std::size_t>(k)]);
        for (int k = 0; k < 4; ++k)
            CHECK(P.off[static_cast<std::size_t>(k)] == H.off[static_cast<std::size_t>(k)]);
    }
    SUBCASE("diagonal gains epsilon (2k - N), hopping untouched") {
        p.epsilon = 1e-3;
        const auto P = models::apply_perturbation(H, p, cfg);
        for (int k = 0; k <= 4; ++k)
            CHECK(P.diag[static_cast<std::size_t>(k)] ==
                  H.diag[static_cast<std::size_t>(k)] + 1e-3 * (2 * k - 4));
        for (int k = 0; k < 4; ++k)
            CHECK(P.off[static_cast<std::size_t>(k)] == H.off[static_cast<std::size_t>(k)]);
    }
    SUBCASE("positive field drives magnetization negative before the limit") {
        models::CurieWeissConfig big;
        big.N = 100;
        const auto H100 = models::build_cw_dicke(big);
        p.epsilon = 1e-3;
        const auto P = models::apply_perturbation(H100, p, big);
        const auto g = linalg::ground_pair(P, 0.0);
        std::vector<double> terms(101);
        for (int k = 0; k <= 100; ++k)
            terms[static_cast<std::size_t>(k)] = g.vector[static_cast<std::size_t>(k)] *
                                                 g.vector[static_cast<std::size_t>(k)] *
                                                 (2.0 * k - 100.0) / 100.0;
        CHECK(util::pairwise_sum(terms) < -0.5);
    }
    SUBCASE("kind and shape mismatches are rejected") {
        models::Perturbation flea;
        flea.kind = models::Perturbation::Kind::schrodinger_flea;
        CHECK_THROWS_AS(models::apply_perturbation(H, flea, cfg), KindMismatch);
        models::CurieWeissConfig other;
        other.N = 5;
        CHECK_THROWS_AS(models::apply_perturbation(H, p, other), KindMismatch);
    }
}

TEST_CASE("flea perturbation on the double well") {
    models::DoubleWellConfig cfg;
    cfg.hbar = 0.05;
    const auto op = models::build_double_well(cfg);
    models::Perturbation p;
    p.kind = models::Perturbation::Kind::schrodinger_flea;
    p.flea = {0.1, 1.0, 0.2};

    SUBCASE("bump lands on the diagonal only") {
        const auto P = models::apply_perturbation(op.matrix, p, cfg);
        for (std::size_t i = 0; i < op.matrix.off.size(); ++i)
            CHECK(P.off[i] == op.matrix.off[i]);
        double added = 0.0;
        for (std::size_t i = 0; i < op.matrix.diag.size(); ++i) {
            const double d = P.diag[i] - op.matrix.diag[i];
            CHECK(d >= 0.0);
            added = std::max(added, d);
        }
        CHECK(added == doctest::Approx(0.1).epsilon(1e-3));  // peak near x = q0
    }
    SUBCASE("flea in the right well localizes the ground state left") {
        const auto P = models::apply_perturbation(op.matrix, p, cfg);
        const auto g = linalg::ground_pair(P, 0.0);
        CHECK(grid_mean_position(g.vector, op.grid) < -0.8);
    }
    SUBCASE("mirrored flea flips the mean position") {
        const auto Pr = models::apply_perturbation(op.matrix, p, cfg);
        models::Perturbation pl = p;
        pl.flea.q0 = -1.0;
        const auto Pl = models::apply_perturbation(op.matrix, pl, cfg);
        // The two matrices are exact reflections of each other.
        for (int i = 0; i < cfg.M; ++i)
            CHECK(Pr.diag[static_cast<std::size_t>(i)] ==
                  Pl.diag[static_cast<std::size_t>(cfg.M - 1 - i)]);
        const double qr = grid_mean_position(linalg::ground_pair(Pr, 0.0).vector, op.grid);
        const double ql = grid_mean_position(linalg::ground_pair(Pl, 0.0).vector, op.grid);
        CHECK(std::fabs(qr + ql) < 1e-8);
    }
    SUBCASE("guards") {
        models::Perturbation bad = p;
        bad.flea.w = 0.0;
        CHECK_THROWS_AS(models::apply_perturbation(op.matrix, bad, cfg), Error);
        models::Perturbation field;
        field.kind = models::Perturbation::Kind::cw_field;
        CHECK_THROWS_AS(models::apply_perturbation(op.matrix, field, cfg), KindMismatch);
        models::DoubleWellConfig other = cfg;
        other.M = 1024;
        CHECK_THROWS_AS(models::apply_perturbation(op.matrix, p, other), KindMismatch);
    }
}
