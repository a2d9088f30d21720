#include "sclab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "sclab/errors.hpp"
#include "sclab/models.hpp"
#include "sclab/util.hpp"

namespace sclab::tensor {

namespace {

using std::complex;

constexpr int kMaxSites = 10;

void check_sites(int N, const char* where) {
    if (N < 1) throw Error(std::string(where) + ": need at least one site");
    if (N > kMaxSites)
        throw SizeExceeded(std::string(where) + ": N=" + std::to_string(N) +
                           " exceeds the " + std::to_string(kMaxSites) + "-site cap");
}

/// Action of a single-site operator on one basis bit value (0 = up).
/// Returns the output bit value and writes the amplitude.
int pauli_bit_action(Pauli op, int bit, complex<double>& amp) {
    switch (op) {
        case Pauli::Id:
            amp = 1.0;
            return bit;
        case Pauli::X:
            amp = 1.0;
            return 1 - bit;
        case Pauli::Y:
            amp = bit == 0 ? complex<double>(0.0, 1.0) : complex<double>(0.0, -1.0);
            return 1 - bit;
        case Pauli::Z:
            amp = bit == 0 ? 1.0 : -1.0;
            return bit;
    }
    throw Error("unreachable single-site label");
}

/// Applies the product factors[k] acting on sites[k] (distinct, 1-based) to
/// every basis column and accumulates the matrix entries into M.
void accumulate_placement(const std::vector<Pauli>& factors, const std::vector<int>& sites,
                          int N, ComplexDense& M) {
    const int dim = 1 << N;
    for (int col = 0; col < dim; ++col) {
        int row = col;
        complex<double> amp = 1.0;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            const int pos = N - sites[k];  // site 1 = most significant bit
            complex<double> a;
            const int in = (row >> pos) & 1;
            const int out = pauli_bit_action(factors[k], in, a);
            if (out != in) row ^= 1 << pos;
            amp *= a;
        }
        M.at(row, col) += amp;
    }
}

/// Enumerates injective placements of factors into 1..N in lexicographic
/// order, accumulating each product operator into M. Returns the count.
long enumerate_placements(const std::vector<Pauli>& factors, int N, std::vector<int>& sites,
                          std::vector<bool>& used, ComplexDense& M) {
    if (sites.size() == factors.size()) {
        accumulate_placement(factors, sites, N, M);
        return 1;
    }
    long count = 0;
    for (int s = 1; s <= N; ++s) {
        if (used[static_cast<std::size_t>(s)]) continue;
        used[static_cast<std::size_t>(s)] = true;
        sites.push_back(s);
        count += enumerate_placements(factors, N, sites, used, M);
        sites.pop_back();
        used[static_cast<std::size_t>(s)] = false;
    }
    return count;
}

/// Basis index with its bits rearranged: bit at position p of the input
/// moves to position perm[p] of the output.
int permute_bits(int b, const std::vector<int>& perm) {
    int out = 0;
    for (std::size_t p = 0; p < perm.size(); ++p)
        if ((b >> p) & 1) out |= 1 << perm[p];
    return out;
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

/// Number of up-spins of a basis state (bit value 0 = up).
int up_count(int b, int N) {
    return N - __builtin_popcount(static_cast<unsigned>(b));
}

int term_degree(const std::array<int, 3>& e) { return e[0] + e[1] + e[2]; }

}  // namespace

Poly3& Poly3::add(int a, int b, int c, double coeff) {
    if (a < 0 || b < 0 || c < 0) throw Error("polynomial exponents must be nonnegative");
    terms[{a, b, c}] += coeff;
    return *this;
}

int Poly3::degree() const {
    int d = 0;
    for (const auto& [e, coeff] : terms)
        if (coeff != 0.0) d = std::max(d, term_degree(e));
    return d;
}

double Poly3::eval(double x, double y, double z) const {
    double acc = 0.0;
    for (const auto& [e, coeff] : terms)
        acc += coeff * std::pow(x, e[0]) * std::pow(y, e[1]) * std::pow(z, e[2]);
    return acc;
}

Poly3 poly_mul(const Poly3& f, const Poly3& g) {
    Poly3 out;
    for (const auto& [ef, cf] : f.terms) {
        if (cf == 0.0) continue;
        for (const auto& [eg, cg] : g.terms) {
            if (cg == 0.0) continue;
            out.add(ef[0] + eg[0], ef[1] + eg[1], ef[2] + eg[2], cf * cg);
        }
    }
    return out;
}

Poly3 poly_diff(const Poly3& f, int axis) {
    if (axis < 0 || axis > 2) throw Error("poly_diff: axis must be 0, 1, or 2");
    Poly3 out;
    for (const auto& [e, coeff] : f.terms) {
        if (coeff == 0.0 || e[axis] == 0) continue;
        std::array<int, 3> d = e;
        d[axis] -= 1;
        out.add(d[0], d[1], d[2], coeff * e[axis]);
    }
    return out;
}

ComplexDense site_embed(Pauli op, int i, int N) {
    check_sites(N, "site_embed");
    if (i < 1 || i > N)
        throw Error("site_embed: site " + std::to_string(i) + " outside 1.." + std::to_string(N));
    ComplexDense M = ComplexDense::zero(1 << N);
    accumulate_placement({op}, {i}, N, M);
    return M;
}

ComplexDense symmetrize_place(const std::vector<Pauli>& factors, int N) {
    check_sites(N, "symmetrize_place");
    if (factors.empty()) throw Error("symmetrize_place: empty factor list");
    if (static_cast<int>(factors.size()) > N)
        throw Error("symmetrize_place: " + std::to_string(factors.size()) + " factors exceed " +
                    std::to_string(N) + " sites");
    ComplexDense M = ComplexDense::zero(1 << N);
    std::vector<int> sites;
    std::vector<bool> used(static_cast<std::size_t>(N) + 1, false);
    const long count = enumerate_placements(factors, N, sites, used, M);
    const double inv = 1.0 / static_cast<double>(count);
    M *= inv;
    return M;
}

ComplexDense full_symmetrizer(const ComplexDense& A, int N) {
    if (N < 1) throw Error("full_symmetrizer: need at least one site");
    if (N > 4)
        throw SizeExceeded("full_symmetrizer: N=" + std::to_string(N) +
                           " exceeds the 4-site factorial cap");
    const int dim = 1 << N;
    if (A.n != dim)
        throw Error("full_symmetrizer: matrix dimension " + std::to_string(A.n) +
                    " is not 2^" + std::to_string(N));
    std::vector<int> perm(static_cast<std::size_t>(N));
    std::iota(perm.begin(), perm.end(), 0);
    ComplexDense S = ComplexDense::zero(dim);
    long count = 0;
    do {
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) S.at(permute_bits(r, perm), permute_bits(c, perm)) += A.at(r, c);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    S *= 1.0 / static_cast<double>(count);
    return S;
}

ComplexDense quantize_poly(const Poly3& p, int N) {
    check_sites(N, "quantize_poly");
    if (p.degree() > 4)
        throw DegreeExceeded("quantize_poly: total degree " + std::to_string(p.degree()) +
                             " exceeds the cap of 4");
    const int dim = 1 << N;
    ComplexDense M = ComplexDense::zero(dim);
    for (const auto& [e, coeff] : p.terms) {
        if (coeff == 0.0) continue;
        const int L = term_degree(e);
        if (L == 0) {
            for (int i = 0; i < dim; ++i) M.at(i, i) += coeff;
            continue;
        }
        if (L > N) continue;  // too few sites to place the factors: zero operator
        std::vector<Pauli> factors;
        factors.insert(factors.end(), static_cast<std::size_t>(e[0]), Pauli::X);
        factors.insert(factors.end(), static_cast<std::size_t>(e[1]), Pauli::Y);
        factors.insert(factors.end(), static_cast<std::size_t>(e[2]), Pauli::Z);
        const ComplexDense S = symmetrize_place(factors, N);
        for (std::size_t idx = 0; idx < M.a.size(); ++idx) M.a[idx] += coeff * S.a[idx];
    }
    return M;
}

ComplexDense collective_spin(int axis, int N) {
    if (N < 0) throw Error("collective_spin: negative site count");
    if (axis < 1 || axis > 3) throw Error("collective_spin: axis must be 1, 2, or 3");
    ComplexDense J = ComplexDense::zero(N + 1);
    if (axis == 3) {
        for (int k = 0; k <= N; ++k) J.at(k, k) = k - 0.5 * N;
        return J;
    }
    for (int k = 0; k < N; ++k) {
        const double c = 0.5 * std::sqrt(static_cast<double>(N - k) * (k + 1));
        if (axis == 1) {
            J.at(k + 1, k) = c;
            J.at(k, k + 1) = c;
        } else {
            J.at(k + 1, k) = complex<double>(0.0, -c);
            J.at(k, k + 1) = complex<double>(0.0, c);
        }
    }
    return J;
}

ComplexDense quantize_poly_dicke(const Poly3& p, int N) {
    if (N < 1) throw Error("quantize_poly_dicke: need at least one site");
    if (p.degree() > 2)
        throw DegreeExceeded("quantize_poly_dicke: total degree " + std::to_string(p.degree()) +
                             " exceeds the symmetric-sector cap of 2");
    const int dim = N + 1;
    ComplexDense M = ComplexDense::zero(dim);
    auto axpy = [&M](double coeff, const ComplexDense& S) {
        for (std::size_t idx = 0; idx < M.a.size(); ++idx) M.a[idx] += coeff * S.a[idx];
    };
    for (const auto& [e, coeff] : p.terms) {
        if (coeff == 0.0) continue;
        const int L = term_degree(e);
        if (L == 0) {
            for (int i = 0; i < dim; ++i) M.at(i, i) += coeff;
            continue;
        }
        if (L > N) continue;  // too few sites to place the factors: zero operator
        if (L == 1) {
            const int axis = e[0] == 1 ? 1 : (e[1] == 1 ? 2 : 3);
            axpy(2.0 * coeff / N, collective_spin(axis, N));
            continue;
        }
        const double denom = static_cast<double>(N) * (N - 1);
        if (e[0] == 2 || e[1] == 2 || e[2] == 2) {
            const int axis = e[0] == 2 ? 1 : (e[1] == 2 ? 2 : 3);
            const ComplexDense J = collective_spin(axis, N);
            ComplexDense S = J * J;
            S *= 4.0;
            for (int i = 0; i < dim; ++i) S.at(i, i) -= static_cast<double>(N);
            axpy(coeff / denom, S);
        } else {
            const int a = e[0] == 1 ? 1 : 2;  // first axis present in the pair
            const int b = e[2] == 1 ? 3 : 2;  // second axis present in the pair
            const ComplexDense Ja = collective_spin(a, N);
            const ComplexDense Jb = collective_spin(b, N);
            const ComplexDense S = Ja * Jb + Jb * Ja;
            axpy(2.0 * coeff / denom, S);
        }
    }
    return M;
}

double dicke_expectation(const std::vector<double>& psi, const Poly3& p) {
    if (psi.empty()) throw Error("dicke_expectation: empty state vector");
    const int N = static_cast<int>(psi.size()) - 1;
    if (p.degree() > 2)
        throw DegreeExceeded("dicke_expectation: total degree " + std::to_string(p.degree()) +
                             " exceeds the symmetric-sector cap of 2");
    // Ladder amplitudes c_k = sqrt((N-k)(k+1)) and the images of psi under
    // the three collective generators, all kept as real vectors (the middle
    // generator's image is purely imaginary; u holds its magnitude).
    std::vector<double> c(static_cast<std::size_t>(std::max(N, 0)));
    for (int k = 0; k < N; ++k)
        c[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(N - k) * (k + 1));
    auto m_of = [N](int k) { return k - 0.5 * N; };
    auto ladder = [&](int k, double sign) {
        double v = 0.0;
        if (k > 0) v += c[static_cast<std::size_t>(k - 1)] * psi[static_cast<std::size_t>(k - 1)];
        if (k < N) v += sign * c[static_cast<std::size_t>(k)] * psi[static_cast<std::size_t>(k + 1)];
        return 0.5 * v;
    };
    double result = 0.0;
    std::vector<double> work(psi.size());
    for (const auto& [e, coeff] : p.terms) {
        if (coeff == 0.0) continue;
        const int L = term_degree(e);
        if (L == 0) {
            double nrm = 0.0;
            for (double v : psi) nrm += v * v;
            result += coeff * nrm;
            continue;
        }
        if (L > N) continue;
        if (e[1] % 2 == 1) continue;  // odd middle-axis terms vanish for real states
        const double denom = static_cast<double>(N) * (N - 1);
        if (L == 1) {
            if (e[2] == 1) {  // z: diagonal m values
                for (std::size_t k = 0; k < psi.size(); ++k)
                    work[k] = psi[k] * psi[k] * m_of(static_cast<int>(k));
                result += coeff * (2.0 / N) * util::pairwise_sum(work);
            } else {  // x: nearest-neighbor couplings
                for (std::size_t k = 0; k < psi.size(); ++k)
                    work[k] = psi[k] * ladder(static_cast<int>(k), +1.0);
                result += coeff * (2.0 / N) * util::pairwise_sum(work);
            }
        } else if (e[2] == 2) {  // z^2
            for (std::size_t k = 0; k < psi.size(); ++k) {
                const double m = m_of(static_cast<int>(k));
                work[k] = psi[k] * psi[k] * m * m;
            }
            result += coeff * (4.0 * util::pairwise_sum(work) - N) / denom;
        } else if (e[0] == 2 || e[1] == 2) {  // x^2 or y^2: squared ladder image
            const double sign = e[0] == 2 ? +1.0 : -1.0;
            for (std::size_t k = 0; k < psi.size(); ++k) {
                const double w = ladder(static_cast<int>(k), sign);
                work[k] = w * w;
            }
            result += coeff * (4.0 * util::pairwise_sum(work) - N) / denom;
        } else {  // xz: symmetrized product of ladder and diagonal parts
            for (std::size_t k = 0; k < psi.size(); ++k)
                work[k] = ladder(static_cast<int>(k), +1.0) * m_of(static_cast<int>(k)) * psi[k];
            result += coeff * 4.0 * util::pairwise_sum(work) / denom;
        }
    }
    return result;
}

ComplexDense dicke_project(const ComplexDense& A, int N) {
    check_sites(N, "dicke_project");
    const int dim = 1 << N;
    if (A.n != dim)
        throw Error("dicke_project: matrix dimension " + std::to_string(A.n) + " is not 2^" +
                    std::to_string(N));
    std::vector<double> invroot(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
        invroot[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(binomial(N, k));
    ComplexDense P = ComplexDense::zero(N + 1);
    std::vector<complex<double>> image(static_cast<std::size_t>(dim));
    std::vector<complex<double>> overlap(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) {
        // image = A |k>, with |k> the normalized sum over k-up product states.
        std::fill(image.begin(), image.end(), complex<double>(0.0, 0.0));
        for (int b = 0; b < dim; ++b) {
            if (up_count(b, N) != k) continue;
            for (int r = 0; r < dim; ++r) image[static_cast<std::size_t>(r)] += A.at(r, b);
        }
        for (auto& v : image) v *= invroot[static_cast<std::size_t>(k)];
        std::fill(overlap.begin(), overlap.end(), complex<double>(0.0, 0.0));
        double total = 0.0;
        for (int r = 0; r < dim; ++r) {
            const auto v = image[static_cast<std::size_t>(r)];
            overlap[static_cast<std::size_t>(up_count(r, N))] += v;
            total += std::norm(v);
        }
        for (int kp = 0; kp <= N; ++kp)
            overlap[static_cast<std::size_t>(kp)] *= invroot[static_cast<std::size_t>(kp)];
        // Componentwise residual against the in-sector part; subtracting the
        // squared norms instead would cancel catastrophically.
        double leak2 = 0.0;
        for (int r = 0; r < dim; ++r) {
            const auto uc = static_cast<std::size_t>(up_count(r, N));
            leak2 += std::norm(image[static_cast<std::size_t>(r)] - overlap[uc] * invroot[uc]);
        }
        const double scale = std::max(1.0, std::sqrt(total));
        if (std::sqrt(leak2) > 1e-12 * scale)
            throw SectorLeak("dicke_project: column " + std::to_string(k) + " leaks " +
                             util::format_g17(std::sqrt(leak2)) +
                             " outside the symmetric sector");
        for (int kp = 0; kp <= N; ++kp) P.at(kp, k) = overlap[static_cast<std::size_t>(kp)];
    }
    return P;
}

double verify_qnh(int N, double J, double B) {
    if (N < 2) throw Error("verify_qnh: need at least two sites, got " + std::to_string(N));
    check_sites(N, "verify_qnh");
    models::CurieWeissConfig cfg;
    cfg.N = N;
    cfg.B = B;
    cfg.J = J;
    ComplexDense H = models::build_cw_tensor(cfg);
    H *= 1.0 / static_cast<double>(N);
    Poly3 symbol;
    symbol.add(0, 0, 2, -0.5 * J).add(1, 0, 0, -B);
    const ComplexDense D = H - quantize_poly(symbol, N);
    return linalg::operator_norm(D);
}

}  // namespace sclab::tensor
