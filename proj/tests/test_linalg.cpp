#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "sclab/errors.hpp"
#include "sclab/linalg.hpp"
#include "sclab/util.hpp"

using namespace sclab;
using linalg::ComplexDense;
using linalg::DenseSym;
using linalg::EigenPair;
using linalg::SymTridiag;

namespace {

SymTridiag laplacian3() {
    // diag (2,2,2), off (-1,-1): eigenvalues 2 - sqrt2, 2, 2 + sqrt2.
    return SymTridiag{{2.0, 2.0, 2.0}, {-1.0, -1.0}};
}

// Ferromagnet-with-field spin matrix in the symmetric-sector basis for three
// levels: diag(-1, 0, -1), off -(1/2)sqrt2 each. Ground value (-1 - sqrt5)/2.
SymTridiag spin_three_level() {
    const double e = -0.5 * std::sqrt(2.0);
    return SymTridiag{{-1.0, 0.0, -1.0}, {e, e}};
}

// Symmetric double-well discretization: grid of M interior points on [-L, L],
// second-difference kinetic term, quartic well (x^2-1)^2. The grid is built
// mirrored so the matrix is bitwise palindromic.
SymTridiag double_well(double hbar, int M, double L, std::vector<double>* grid = nullptr) {
    const double dx = 2.0 * L / (M + 1);
    std::vector<double> x(static_cast<std::size_t>(M));
    for (int j = 0; j < (M + 1) / 2; ++j) {
        x[static_cast<std::size_t>(j)] = -L + (j + 1) * dx;
        x[static_cast<std::size_t>(M - 1 - j)] = -x[static_cast<std::size_t>(j)];
    }
    if (M % 2 == 1) x[static_cast<std::size_t>(M / 2)] = 0.0;
    const double kin = hbar * hbar / (dx * dx);
    SymTridiag T;
    T.diag.resize(static_cast<std::size_t>(M));
    T.off.assign(static_cast<std::size_t>(M - 1), -kin);
    for (int j = 0; j < M; ++j) {
        const double q = x[static_cast<std::size_t>(j)];
        const double w = q * q - 1.0;
        T.diag[static_cast<std::size_t>(j)] = 2.0 * kin + w * w;
    }
    if (grid) *grid = std::move(x);
    return T;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("sturm_count counts eigenvalues strictly below the shift") {
    SymTridiag D{{1.0, 2.0, 3.0}, {0.0, 0.0}};
    CHECK(linalg::sturm_count(D, 0.5) == 0);
    CHECK(linalg::sturm_count(D, 1.5) == 1);
    CHECK(linalg::sturm_count(D, 2.5) == 2);
    CHECK(linalg::sturm_count(D, 3.5) == 3);

    const auto L = laplacian3();
    CHECK(linalg::sturm_count(L, 2.0 - std::sqrt(2.0) - 1e-12) == 0);
    CHECK(linalg::sturm_count(L, 2.0) == 1);
    CHECK(linalg::sturm_count(L, 2.0 + std::sqrt(2.0) + 1e-12) == 3);
}

TEST_CASE("tridiag_eigs reproduces the closed-form Laplacian spectrum") {
    const auto L = laplacian3();
    const auto s = linalg::tridiag_eigs(L, 3, 0.0);
    REQUIRE(s.values.size() == 3);
    CHECK(s.values[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-13));
    CHECK(s.values[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(s.values[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("tridiag_eigs throws IterationLimit for an unattainable tolerance") {
    CHECK_THROWS_AS(linalg::tridiag_eigs(laplacian3(), 1, 1e-300), IterationLimit);
}

TEST_CASE("validate rejects malformed tridiagonal input") {
    const SymTridiag empty{{}, {}};
    CHECK_THROWS_AS(empty.validate(), Error);
    const SymTridiag shape{{1.0, 2.0}, {}};
    CHECK_THROWS_AS(shape.validate(), Error);
    const SymTridiag nonfinite{{1.0, std::nan("")}, {0.0}};
    CHECK_THROWS_AS(nonfinite.validate(), Error);
}

TEST_CASE("ground_pair on diagonal and 2x2 exchange fixtures") {
    SUBCASE("diagonal matrix: minimum entry, basis vector") {
        SymTridiag D{{3.0, -2.0, 5.0}, {0.0, 0.0}};
        const auto g = linalg::ground_pair(D, 0.0);
        CHECK(g.value == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(g.vector[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(g.vector[0]) < 1e-10);
        CHECK(std::fabs(g.vector[2]) < 1e-10);
        CHECK(g.residual <= 1e-10 * 5.0);
    }
    SUBCASE("exchange matrix: value -1, antisymmetric vector, positive sign fix") {
        SymTridiag X{{0.0, 0.0}, {1.0}};
        const auto g = linalg::ground_pair(X, 0.0);
        CHECK(g.value == doctest::Approx(-1.0).epsilon(1e-14));
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(g.vector[0] == doctest::Approx(r).epsilon(1e-12));
        CHECK(g.vector[1] == doctest::Approx(-r).epsilon(1e-12));
    }
    SUBCASE("repeated eigenvalues raise NearDegenerate") {
        SymTridiag D{{2.0, 2.0, 2.0}, {0.0, 0.0}};
        CHECK_THROWS_AS(linalg::ground_pair(D, 0.0), NearDegenerate);
    }
}

TEST_CASE("ground_pair matches small symmetric-sector spin fixtures") {
    SUBCASE("two-level ferromagnet: uniform ground state") {
        SymTridiag T{{-0.5, -0.5}, {-0.5}};
        const auto g = linalg::ground_pair(T, 0.0);
        CHECK(g.value == doctest::Approx(-1.0).epsilon(1e-14));
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(g.vector[0] == doctest::Approx(r).epsilon(1e-12));
        CHECK(g.vector[1] == doctest::Approx(r).epsilon(1e-12));
    }
    SUBCASE("three-level: golden-ratio ground value") {
        const auto g = linalg::ground_pair(spin_three_level(), 0.0);
        CHECK(g.value == doctest::Approx(-(1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
    }
    SUBCASE("two-mode hopping fixture") {
        SymTridiag T{{0.125, 0.125}, {-0.25}};
        const auto g = linalg::ground_pair(T, 0.0);
        CHECK(g.value == doctest::Approx(-0.125).epsilon(1e-13));
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(g.vector[0] == doctest::Approx(r).epsilon(1e-12));
        CHECK(g.vector[1] == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("ground_pair_parity agrees with the generic solver when both work") {
    SUBCASE("4x4 palindromic fixture, closed-form even spectrum") {
        SymTridiag T{{1.0, 2.0, 2.0, 1.0}, {-1.0, -3.0, -1.0}};
        const auto gp = linalg::ground_pair(T, 0.0);
        const auto pp = linalg::ground_pair_parity(T, 0.0);
        CHECK(pp.value == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-13));
        CHECK(gp.value == doctest::Approx(pp.value).epsilon(1e-12));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::fabs(std::fabs(gp.vector[i]) - std::fabs(pp.vector[i])) < 1e-10);
    }
    SUBCASE("odd-length three-level fixture") {
        const auto gp = linalg::ground_pair(spin_three_level(), 0.0);
        const auto pp = linalg::ground_pair_parity(spin_three_level(), 0.0);
        CHECK(pp.value == doctest::Approx(gp.value).epsilon(1e-13));
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(gp.vector[i] == doctest::Approx(pp.vector[i]).epsilon(1e-10));
    }
    SUBCASE("non-palindromic input is rejected") {
        SymTridiag T{{1.0, 2.0}, {-1.0}};
        CHECK_THROWS_AS(linalg::ground_pair_parity(T, 0.0), Error);
        SymTridiag U{{1.0, 2.0, 1.0}, {-1.0, -2.0}};
        CHECK_THROWS_AS(linalg::ground_pair_parity(U, 0.0), Error);
    }
}

TEST_CASE("parity solve succeeds where tunnelling splitting underflows") {
    // Deep double well: the even/odd splitting of the lowest pair is far
    // below resolvable precision, so the generic solver must refuse and the
    // parity solver must deliver a symmetric ground state.
    std::vector<double> x;
    const auto T = double_well(0.02, 512, 3.0, &x);
    CHECK_THROWS_AS(linalg::ground_pair(T, 0.0), NearDegenerate);

    const auto g = linalg::ground_pair_parity(T, 0.0);
    CHECK(g.value > 0.0);        // ground energy of the quartic well is positive
    CHECK(g.value < 0.1);        // and small at small hbar
    double entry_scale = 0.0;
    for (double d : T.diag) entry_scale = std::max(entry_scale, std::fabs(d));
    CHECK(g.residual <= 1e-10 * entry_scale);

    // Bitwise mirror symmetry of the vector.
    for (int i = 0; i < 512; ++i)
        CHECK(g.vector[static_cast<std::size_t>(i)] ==
              g.vector[static_cast<std::size_t>(511 - i)]);

    // Position expectation cancels to rounding because vector and grid mirror.
    std::vector<double> terms(512);
    for (int i = 0; i < 512; ++i)
        terms[static_cast<std::size_t>(i)] =
            g.vector[static_cast<std::size_t>(i)] * g.vector[static_cast<std::size_t>(i)] *
            x[static_cast<std::size_t>(i)];
    CHECK(std::fabs(util::pairwise_sum(terms)) < 1e-13);

    // Norm is preserved through fold/unfold.
    CHECK(dot(g.vector, g.vector) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense_eigen matches tridiagonal bisection and satisfies residuals") {
    DenseSym A = DenseSym::zero(3);
    A.at(0, 0) = 2.0;
    A.at(1, 1) = 2.0;
    A.at(2, 2) = 2.0;
    A.at(0, 1) = A.at(1, 0) = -1.0;
    A.at(1, 2) = A.at(2, 1) = -1.0;
    const auto s = linalg::dense_eigen(A);
    REQUIRE(s.values.size() == 3);
    REQUIRE(s.vectors.size() == 3);
    const auto ref = linalg::tridiag_eigs(laplacian3(), 3, 0.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(s.values[static_cast<std::size_t>(i)] ==
              doctest::Approx(ref.values[static_cast<std::size_t>(i)]).epsilon(1e-13));
        // Residual ||A v - lambda v||_inf.
        const auto& v = s.vectors[static_cast<std::size_t>(i)];
        for (int r = 0; r < 3; ++r) {
            double acc = 0.0;
            for (int c = 0; c < 3; ++c) acc += A.at(r, c) * v[static_cast<std::size_t>(c)];
            CHECK(std::fabs(acc - s.values[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(r)]) <
                  1e-13);
        }
        CHECK(dot(v, v) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("dense_eigen guards dimension and storage") {
    DenseSym big;
    big.n = 4097;  // guard fires before storage is touched
    CHECK_THROWS_AS(linalg::dense_eigen(big), SizeExceeded);
    DenseSym bad;
    bad.n = 2;
    bad.a = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(linalg::dense_eigen(bad), Error);
}

TEST_CASE("operator_norm properties across all three overloads") {
    SUBCASE("tridiagonal: sign flip, zero, and scaling") {
        const auto L = laplacian3();
        const double nL = linalg::operator_norm(L);
        CHECK(nL == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-13));
        SymTridiag Lneg = L;
        for (auto& d : Lneg.diag) d = -d;
        for (auto& e : Lneg.off) e = -e;
        CHECK(linalg::operator_norm(Lneg) == doctest::Approx(nL).epsilon(1e-13));
        SymTridiag Ls = L;
        for (auto& d : Ls.diag) d *= -2.5;
        for (auto& e : Ls.off) e *= -2.5;
        CHECK(linalg::operator_norm(Ls) == doctest::Approx(2.5 * nL).epsilon(1e-13));
        CHECK(linalg::operator_norm(SymTridiag{{0.0, 0.0}, {0.0}}) == 0.0);
        CHECK(linalg::operator_norm(SymTridiag{{1.0, -1.0}, {0.0}}) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("dense: diagonal fast path and Jacobi path agree with tridiagonal") {
        DenseSym D = DenseSym::zero(2);
        D.at(0, 0) = 1.0;
        D.at(1, 1) = -3.0;
        CHECK(linalg::operator_norm(D) == doctest::Approx(3.0).epsilon(1e-14));
        DenseSym X = DenseSym::zero(2);
        X.at(0, 1) = X.at(1, 0) = 1.0;
        CHECK(linalg::operator_norm(X) == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("complex Hermitian: embedding reproduces the closed form") {
        ComplexDense M = ComplexDense::zero(2);
        M.at(0, 0) = 2.0;
        M.at(1, 1) = 2.0;
        M.at(0, 1) = {0.0, 1.0};
        M.at(1, 0) = {0.0, -1.0};  // eigenvalues 2 +- 1
        CHECK(linalg::operator_norm(M) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("complex diagonal fast path") {
        ComplexDense M = ComplexDense::zero(3);
        M.at(0, 0) = 1.0;
        M.at(1, 1) = -4.0;
        M.at(2, 2) = 2.0;
        CHECK(linalg::operator_norm(M) == doctest::Approx(4.0).epsilon(1e-14));
    }
    SUBCASE("non-Hermitian input is rejected") {
        ComplexDense M = ComplexDense::zero(2);
        M.at(0, 1) = {0.0, 1.0};
        M.at(1, 0) = {0.0, 1.0};
        CHECK_THROWS_AS(linalg::operator_norm(M), NotHermitian);
    }
}

TEST_CASE("ComplexDense algebra building blocks") {
    ComplexDense A = ComplexDense::zero(2);
    A.at(0, 0) = 1.0;
    A.at(0, 1) = {0.0, 1.0};
    A.at(1, 0) = {0.0, -1.0};
    A.at(1, 1) = 2.0;
    const ComplexDense I = ComplexDense::identity(2);
    const ComplexDense AI = A * I;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(AI.at(i, j) - A.at(i, j)) < 1e-15);
    // A^2 - tr(A) A + det(A) I = 0 (Cayley-Hamilton, 2x2).
    const std::complex<double> tr = A.at(0, 0) + A.at(1, 1);
    const std::complex<double> det = A.at(0, 0) * A.at(1, 1) - A.at(0, 1) * A.at(1, 0);
    ComplexDense CH = A * A;
    ComplexDense trA = A;
    trA *= tr;
    CH -= trA;
    ComplexDense detI = I;
    detI *= det;
    CH += detI;
    CHECK(linalg::hermitian_defect(A) < 1e-15);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(CH.at(i, j)) < 1e-14);
}
