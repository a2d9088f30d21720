#include "sclab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "sclab/errors.hpp"
#include "sclab/linalg.hpp"
#include "sclab/quantize.hpp"
#include "sclab/util.hpp"

namespace sclab::experiments {

namespace {

using classical::ClassicalModel;
using classical::ClassicalPoint;
using classical::ModelId;
using linalg::ComplexDense;
using linalg::EigenPair;
using linalg::SymTridiag;
using tensor::Poly3;

constexpr const char* kEnergyName = "energy";

std::string model_name(ModelId id) {
    switch (id) {
        case ModelId::double_well:
            return "double_well";
        case ModelId::curie_weiss:
            return "curie_weiss";
        case ModelId::bose_hubbard:
            return "bose_hubbard";
    }
    throw Error("unreachable: unknown model id");
}

ClassicalModel classical_of(ModelId id, double J, double B) {
    switch (id) {
        case ModelId::double_well:
            return ClassicalModel::double_well();
        case ModelId::curie_weiss:
            return ClassicalModel::curie_weiss(J, B);
        case ModelId::bose_hubbard:
            return ClassicalModel::bose_hubbard();
    }
    throw Error("unreachable: unknown model id");
}

unsigned pick_workers(int requested) {
    return requested <= 0 ? util::default_workers() : static_cast<unsigned>(requested);
}

/// Runs fn(i) for i in [0, n), catching per-task exceptions; the first
/// failing index (in index order, independent of scheduling) is rethrown
/// as Error with `where(i)` prepended.
void parallel_tasks(std::size_t n, unsigned workers,
                    const std::function<void(std::size_t)>& fn,
                    const std::function<std::string(std::size_t)>& where) {
    std::vector<std::string> failures(n);
    util::parallel_for_indexed(n, workers, [&](std::size_t i) {
        try {
            fn(i);
        } catch (const std::exception& ex) {
            failures[i] = ex.what();
            if (failures[i].empty()) failures[i] = "unknown failure";
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty()) throw Error(where(i) + ": " + failures[i]);
}

/// Ground-state position expectation on the grid, pairwise-reduced.
double grid_mean_q(const std::vector<double>& psi, const std::vector<double>& grid) {
    std::vector<double> work(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) work[i] = psi[i] * psi[i] * grid[i];
    return util::pairwise_sum(work);
}

double max_entry_diff(const ComplexDense& A, const ComplexDense& B) {
    double worst = 0.0;
    for (std::size_t k = 0; k < A.a.size(); ++k) worst = std::max(worst, std::abs(A.a[k] - B.a[k]));
    return worst;
}

std::vector<ConvergenceRecord> filter_records(const std::vector<ConvergenceRecord>& records,
                                              const std::string& name) {
    std::vector<ConvergenceRecord> out;
    for (const auto& r : records)
        if (r.observable == name) out.push_back(r);
    return out;
}

/// Two-sided check: |measured - target| <= tolerance.
CheckLine line(std::string label, double measured, double target, double tolerance,
               bool informational = false) {
    CheckLine l;
    l.label = std::move(label);
    l.measured = measured;
    l.target = target;
    l.tolerance = tolerance;
    l.pass = std::fabs(measured - target) <= tolerance;
    l.informational = informational;
    return l;
}

/// Check with an explicit verdict (one-sided or boolean conditions).
CheckLine verdict_line(std::string label, double measured, double target, double tolerance,
                       bool pass, bool informational = false) {
    CheckLine l;
    l.label = std::move(label);
    l.measured = measured;
    l.target = target;
    l.tolerance = tolerance;
    l.pass = pass;
    l.informational = informational;
    return l;
}

CriterionResult guarded(int id, std::string name,
                        const std::function<void(CriterionResult&)>& body) {
    CriterionResult c;
    c.id = id;
    c.name = std::move(name);
    try {
        body(c);
        bool ok = !c.checks.empty();
        for (const auto& l : c.checks)
            if (!l.informational && !l.pass) ok = false;
        c.pass = ok;
    } catch (const std::exception& ex) {
        c.pass = false;
        const std::string why = std::string("aborted: ") + ex.what();
        c.note = c.note.empty() ? why : c.note + "; " + why;
    }
    return c;
}

/// Least-squares fit of v ~ c0 + c1 * x^(-r) at fixed r; returns the RMS
/// misfit (huge when the normal equations degenerate).
double power_fit_at(const std::vector<double>& x, const std::vector<double>& v,
                    std::size_t start, double r, double* c0_out, double* c1_out) {
    const std::size_t m = x.size() - start;
    double s0 = static_cast<double>(m), s1 = 0.0, s2 = 0.0, sv = 0.0, stv = 0.0;
    for (std::size_t i = start; i < x.size(); ++i) {
        const double t = std::pow(x[i], -r);
        s1 += t;
        s2 += t * t;
        sv += v[i];
        stv += t * v[i];
    }
    const double det = s0 * s2 - s1 * s1;
    if (!(std::fabs(det) > 1e-30 * std::max(1.0, s0 * s2))) return 1e300;
    const double c1 = (s0 * stv - s1 * sv) / det;
    const double c0 = (sv - c1 * s1) / s0;
    double ss = 0.0;
    for (std::size_t i = start; i < x.size(); ++i) {
        const double t = std::pow(x[i], -r);
        const double e = c0 + c1 * t - v[i];
        ss += e * e;
    }
    if (c0_out) *c0_out = c0;
    if (c1_out) *c1_out = c1;
    return std::sqrt(ss / static_cast<double>(m));
}

/// Golden-section minimum of the RMS misfit over the exponent.
double best_exponent(const std::vector<double>& x, const std::vector<double>& v,
                     std::size_t start) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.05, hi = 6.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = power_fit_at(x, v, start, c, nullptr, nullptr);
    double fd = power_fit_at(x, v, start, d, nullptr, nullptr);
    for (int it = 0; it < 100; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = power_fit_at(x, v, start, c, nullptr, nullptr);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = power_fit_at(x, v, start, d, nullptr, nullptr);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SweepObservable observable_by_name(ModelId id, const std::string& name) {
    auto mono = [&](int a, int b, int c) { return SweepObservable{name, Poly3::monomial(a, b, c, 1.0)}; };
    if (id == ModelId::double_well) {
        if (name == "q") return mono(1, 0, 0);
        if (name == "p") return mono(0, 1, 0);
        if (name == "q2") return mono(2, 0, 0);
        if (name == "p2") return mono(0, 2, 0);
        if (name == "qp") return mono(1, 1, 0);
    } else {
        if (name == "x") return mono(1, 0, 0);
        if (name == "y") return mono(0, 1, 0);
        if (name == "z") return mono(0, 0, 1);
        if (name == "x2") return mono(2, 0, 0);
        if (name == "y2") return mono(0, 2, 0);
        if (name == "z2") return mono(0, 0, 2);
        if (name == "xz") return mono(1, 0, 1);
    }
    throw Error("unknown observable '" + name + "' for model " + model_name(id));
}

void SweepSpec::validate() const {
    const bool plane = model == ModelId::double_well;
    if (plane) {
        if (!n_values.empty()) throw Error("sweep: the double well sweeps hbar, not N");
        if (hbar_values.empty()) throw Error("sweep: empty hbar axis");
        for (std::size_t i = 0; i < hbar_values.size(); ++i) {
            if (!(hbar_values[i] >= 0.01))
                throw Error("sweep: hbar " + util::format_g17(hbar_values[i]) +
                            " below the 0.01 floor");
            if (i > 0 && !(hbar_values[i] < hbar_values[i - 1]))
                throw Error("sweep: hbar axis must be strictly decreasing");
        }
    } else {
        if (!hbar_values.empty()) throw Error("sweep: spin models sweep N, not hbar");
        if (n_values.empty()) throw Error("sweep: empty N axis");
        const int cap = model == ModelId::curie_weiss ? 5000 : 2000;
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            if (n_values[i] < 2) throw Error("sweep: N must be at least 2");
            if (n_values[i] > cap)
                throw SizeExceeded("sweep: N=" + std::to_string(n_values[i]) +
                                   " above the cap " + std::to_string(cap));
            if (i > 0 && n_values[i] <= n_values[i - 1])
                throw Error("sweep: N axis must be strictly increasing");
        }
        if (model == ModelId::curie_weiss && !(B > 0.0 && B < 1.0))
            throw Error("sweep: field B must lie in (0,1)");
    }
    if (observables.empty() && !include_energy) throw Error("sweep: nothing to record");
    for (std::size_t i = 0; i < observables.size(); ++i) {
        const auto& obs = observables[i];
        if (obs.name.empty()) throw Error("sweep: unnamed observable");
        if (include_energy && obs.name == kEnergyName)
            throw Error("sweep: observable name 'energy' is reserved");
        for (std::size_t j = 0; j < i; ++j)
            if (observables[j].name == obs.name)
                throw Error("sweep: duplicate observable '" + obs.name + "'");
        if (plane) {
            for (const auto& [e, coeff] : obs.poly.terms)
                if (coeff != 0.0 && e[2] != 0)
                    throw Error("sweep: plane observable '" + obs.name +
                                "' uses a third coordinate");
        } else if (obs.poly.degree() > 2) {
            throw Error("sweep: spin observable '" + obs.name +
                        "' has degree above the quantized closed-form cap of 2");
        }
    }
}

std::vector<ConvergenceRecord> run_limit_sweep(const SweepSpec& spec) {
    spec.validate();
    const bool plane = spec.model == ModelId::double_well;
    const std::string mname = model_name(spec.model);
    const std::string pname = plane ? "hbar" : "N";

    const ClassicalModel cm = classical_of(spec.model, spec.J, spec.B);
    const classical::MinimaSet minima = classical::find_minima(cm);
    const classical::MixtureState mix = classical::limit_mixture(minima, cm);
    std::vector<double> cls(spec.observables.size());
    for (std::size_t j = 0; j < spec.observables.size(); ++j) {
        const Poly3& poly = spec.observables[j].poly;
        cls[j] = classical::mixture_expect(
            mix, [&poly](const ClassicalPoint& pt) { return poly.eval(pt.c[0], pt.c[1], pt.c[2]); });
    }

    const std::size_t points = plane ? spec.hbar_values.size() : spec.n_values.size();
    const std::size_t per_point = spec.observables.size() + (spec.include_energy ? 1 : 0);
    std::vector<std::vector<ConvergenceRecord>> slots(points);

    auto record = [&](std::size_t i, const std::string& obs, double quantum, double classic) {
        ConvergenceRecord r;
        r.model = mname;
        r.param_name = pname;
        r.param_value = plane ? spec.hbar_values[i] : static_cast<double>(spec.n_values[i]);
        r.observable = obs;
        r.quantum = quantum;
        r.classical = classic;
        r.abs_error = std::fabs(quantum - classic);
        slots[i].push_back(std::move(r));
    };

    auto task = [&](std::size_t i) {
        slots[i].reserve(per_point);
        if (plane) {
            const double hbar = spec.hbar_values[i];
            models::DoubleWellConfig cfg;
            cfg.hbar = hbar;
            cfg.L = spec.dw_box;
            cfg.M = spec.dw_points;
            const models::DoubleWellOperator op = models::build_double_well(cfg);
            const EigenPair pair = linalg::ground_pair_parity(op.matrix, 0.0);
            // Window wide enough for the coherent spread at every admissible
            // hbar; shrinks toward the classical support as hbar -> 0.
            const double half = 2.0 + 3.0 * std::sqrt(hbar);
            const quantize::PhaseWindow window{-half, half, -half, half};
            const quantize::PhaseMesh mesh = quantize::phase_mesh_for(window, hbar);
            for (std::size_t j = 0; j < spec.observables.size(); ++j) {
                const Poly3& poly = spec.observables[j].poly;
                const double quantum = quantize::husimi_schrodinger_expect(
                    pair.vector, hbar, op.grid,
                    [&poly](double q, double p) { return poly.eval(q, p, 0.0); }, window, mesh);
                record(i, spec.observables[j].name, quantum, cls[j]);
            }
            if (spec.include_energy) record(i, kEnergyName, pair.value, minima.value);
        } else {
            const int N = spec.n_values[i];
            SymTridiag H;
            if (spec.model == ModelId::curie_weiss) {
                models::CurieWeissConfig cfg;
                cfg.N = N;
                cfg.B = spec.B;
                cfg.J = spec.J;
                H = models::build_cw_dicke(cfg);
            } else {
                models::BoseHubbardConfig cfg;
                cfg.N = N;
                H = models::build_bh(cfg);
            }
            const EigenPair pair = linalg::ground_pair_parity(H, 0.0);
            for (std::size_t j = 0; j < spec.observables.size(); ++j) {
                const double quantum =
                    spec.model == ModelId::curie_weiss
                        ? tensor::dicke_expectation(pair.vector, spec.observables[j].poly)
                        : quantize::berezin_dicke_expect(pair.vector, spec.observables[j].poly);
                record(i, spec.observables[j].name, quantum, cls[j]);
            }
            if (spec.include_energy)
                record(i, kEnergyName,
                       spec.model == ModelId::curie_weiss ? pair.value / N : pair.value,
                       minima.value);
        }
    };
    auto where = [&](std::size_t i) {
        return "sweep " + mname + " at " + pname + "=" +
               util::format_g17(plane ? spec.hbar_values[i]
                                      : static_cast<double>(spec.n_values[i]));
    };
    parallel_tasks(points, pick_workers(spec.workers), task, where);

    std::vector<ConvergenceRecord> records;
    records.reserve(points * per_point);
    for (auto& s : slots)
        for (auto& r : s) records.push_back(std::move(r));

    // Endpoint sanity: approaching the limit must not worsen any observable
    // (observables that are exact everywhere get absolute slack).
    if (points >= 2) {
        for (std::size_t j = 0; j < per_point; ++j) {
            const ConvergenceRecord& first = records[j];
            const ConvergenceRecord& last = records[(points - 1) * per_point + j];
            if (!(last.abs_error <= first.abs_error || last.abs_error <= 1e-10))
                throw Error("sweep sanity: error for '" + first.observable +
                            "' grows toward the limit (" + util::format_g17(first.abs_error) +
                            " -> " + util::format_g17(last.abs_error) + ")");
        }
    }
    return records;
}

LimitEstimate extrapolate(const std::vector<ConvergenceRecord>& records) {
    if (records.size() < 4) throw Error("extrapolate: need at least 4 records");
    const std::string& name = records.front().observable;
    for (const auto& r : records)
        if (r.observable != name) throw Error("extrapolate: records mix observables");
    const std::size_t n = records.size();
    const bool increasing = records[1].param_value > records[0].param_value;
    std::vector<double> x(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = increasing ? records[i].param_value : 1.0 / records[i].param_value;
        v[i] = records[i].quantum;
        if (i > 0 && !(x[i] > x[i - 1]))
            throw Error("extrapolate: parameter axis is not strictly monotone");
    }

    LimitEstimate est;
    double dev = 0.0;
    for (double vi : v) dev = std::max(dev, std::fabs(vi - v.back()));
    if (dev <= 1e-14 * std::max(1.0, std::fabs(v.back()))) {
        est.value = v.back();
        est.rate = 0.0;
        est.residual = 0.0;
        est.points_used = static_cast<int>(n);
        return est;
    }

    int sign = 0;
    bool mixed = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = v[i + 1] - v[i];
        if (d == 0.0) continue;
        const int s = d > 0.0 ? 1 : -1;
        if (sign == 0)
            sign = s;
        else if (s != sign)
            mixed = true;
    }
    if (mixed) {
        // Two-point rate-1 eliminant of the last records; flagged, since no
        // single power law describes the sequence.
        const double a = (v[n - 2] - v[n - 1]) / (1.0 / x[n - 2] - 1.0 / x[n - 1]);
        est.value = v[n - 1] - a / x[n - 1];
        est.rate = 1.0;
        est.residual = std::numeric_limits<double>::infinity();
        est.degenerate = true;
        est.points_used = 2;
        return est;
    }

    double best_res = std::numeric_limits<double>::infinity();
    for (std::size_t start = 0; start + 4 <= n; ++start) {
        const double r = best_exponent(x, v, start);
        double c0 = 0.0, c1 = 0.0;
        const double res = power_fit_at(x, v, start, r, &c0, &c1);
        if (res < best_res) {
            best_res = res;
            est.value = c0;
            est.rate = r;
            est.residual = res;
            est.points_used = static_cast<int>(n - start);
        }
    }
    if (!std::isfinite(best_res)) {
        est.value = v.back();
        est.rate = 1.0;
        est.residual = std::numeric_limits<double>::infinity();
        est.degenerate = true;
        est.points_used = static_cast<int>(n);
    }
    return est;
}

FleaScanCw flea_scan_cw(double B, double J, const std::vector<double>& epsilons,
                        const std::vector<int>& n_values) {
    if (!(B > 0.0 && B < 1.0)) throw Error("flea scan: field B must lie in (0,1)");
    if (!(J > 0.0)) throw Error("flea scan: coupling J must be positive");
    if (epsilons.empty() || n_values.empty()) throw Error("flea scan: empty parameter list");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] != 0.0) || !std::isfinite(epsilons[i]))
            throw Error("flea scan: eps entries must be nonzero");
        if (i > 0 && (epsilons[i] - epsilons[i - 1]) *
                             (epsilons[1] - epsilons[0]) <= 0.0)
            throw Error("flea scan: eps list must be strictly monotone");
    }
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1) throw Error("flea scan: N must be positive");
        if (n_values[i] > 5000) throw SizeExceeded("flea scan: N above the cap 5000");
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw Error("flea scan: N list must be strictly increasing");
    }

    FleaScanCw out;
    out.B = B;
    out.J = J;
    out.epsilons = epsilons;
    out.n_values = n_values;
    out.m3.assign(epsilons.size() * n_values.size(), 0.0);
    const Poly3 zpoly = Poly3::monomial(0, 0, 1, 1.0);

    auto task = [&](std::size_t k) {
        const std::size_t ie = k / n_values.size();
        const std::size_t in = k % n_values.size();
        models::CurieWeissConfig cfg;
        cfg.N = n_values[in];
        cfg.B = B;
        cfg.J = J;
        const SymTridiag H = models::build_cw_dicke(cfg);
        models::Perturbation pert;
        pert.kind = models::Perturbation::Kind::cw_field;
        pert.epsilon = epsilons[ie];
        const SymTridiag Hp = models::apply_perturbation(H, pert, cfg);
        // The field lifts the reflection degeneracy, so the plain solver is
        // both applicable and the honest choice: no parity projection.
        const EigenPair pair = linalg::ground_pair(Hp, 0.0);
        out.m3[k] = tensor::dicke_expectation(pair.vector, zpoly);
    };
    auto where = [&](std::size_t k) {
        return "flea scan at eps=" + util::format_g17(epsilons[k / n_values.size()]) +
               ", N=" + std::to_string(n_values[k % n_values.size()]);
    };
    parallel_tasks(out.m3.size(), util::default_workers(), task, where);

    const double branch = std::sqrt(1.0 - B * B);
    out.broken_branch_ok = true;
    for (std::size_t ie = 0; ie < epsilons.size(); ++ie) {
        const double want = epsilons[ie] > 0.0 ? -branch : branch;
        const double got = out.m3[ie * n_values.size() + (n_values.size() - 1)];
        if (std::fabs(got - want) > 0.05) out.broken_branch_ok = false;
    }
    std::size_t imin = 0;
    for (std::size_t ie = 1; ie < epsilons.size(); ++ie)
        if (std::fabs(epsilons[ie]) < std::fabs(epsilons[imin])) imin = ie;
    out.symmetric_limit_ok = true;
    for (std::size_t in = 0; in < n_values.size(); ++in)
        if (std::fabs(out.m3[imin * n_values.size() + in]) > 0.05)
            out.symmetric_limit_ok = false;
    return out;
}

FleaSchrodingerScan flea_schrodinger(const std::vector<double>& hbar_values,
                                     const models::Perturbation& flea) {
    if (flea.kind != models::Perturbation::Kind::schrodinger_flea)
        throw KindMismatch("flea_schrodinger: expected a potential-bump perturbation");
    if (!(flea.flea.delta >= 0.0))
        throw Error("flea_schrodinger: bump amplitude must be nonnegative");
    if (hbar_values.empty()) throw Error("flea_schrodinger: empty hbar list");
    for (std::size_t i = 0; i < hbar_values.size(); ++i) {
        if (!(hbar_values[i] >= 0.01))
            throw Error("flea_schrodinger: hbar below the 0.01 floor");
        if (i > 0 && !(hbar_values[i] < hbar_values[i - 1]))
            throw Error("flea_schrodinger: hbar list must be strictly decreasing");
    }

    FleaSchrodingerScan out;
    out.hbars = hbar_values;
    out.mean_q.assign(hbar_values.size(), 0.0);
    auto task = [&](std::size_t i) {
        models::DoubleWellConfig cfg;
        cfg.hbar = hbar_values[i];
        cfg.L = 8.0;  // the sweep discretization: one grid serves all hbar
        cfg.M = 2048;
        const models::DoubleWellOperator op = models::build_double_well(cfg);
        EigenPair pair;
        if (flea.flea.delta == 0.0) {
            pair = linalg::ground_pair_parity(op.matrix, 0.0);
        } else {
            const SymTridiag Hp = models::apply_perturbation(op.matrix, flea, cfg);
            pair = linalg::ground_pair(Hp, 0.0);
        }
        out.mean_q[i] = grid_mean_q(pair.vector, op.grid);
    };
    auto where = [&](std::size_t i) {
        return "bump scan at hbar=" + util::format_g17(hbar_values[i]);
    };
    parallel_tasks(hbar_values.size(), util::default_workers(), task, where);

    out.localizes_small_hbar = out.mean_q.back() <= -0.8;
    out.symmetric_large_hbar = std::fabs(out.mean_q.front()) <= 0.1;
    return out;
}

namespace {

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix;
/// its spectrum is the doubled Hermitian spectrum.
linalg::DenseSym real_embedding(const ComplexDense& M) {
    linalg::DenseSym D = linalg::DenseSym::zero(2 * M.n);
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j) {
            const std::complex<double> w = M.at(i, j);
            D.at(i, j) = w.real();
            D.at(i, j + M.n) = -w.imag();
            D.at(i + M.n, j) = w.imag();
            D.at(i + M.n, j + M.n) = w.real();
        }
    return D;
}

bool bits_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

void criterion_chain_defect(CriterionResult& c) {
    for (int N = 2; N <= 10; ++N) {
        const double measured = tensor::verify_qnh(N, 1.0, 0.5);
        const double target =
            N % 2 == 0 ? 1.0 / (2.0 * (N - 1)) : (N + 1.0) / (2.0 * N * N);
        c.checks.push_back(line("per-site chain vs quantized symbol, N=" + std::to_string(N),
                                measured, target, 1e-10));
    }
}

void criterion_sector_reduction(CriterionResult& c) {
    for (int N = 1; N <= 8; ++N) {
        double worst = 0.0;
        for (double J : {0.5, 1.0})
            for (double B : {0.25, 0.5, 0.9}) {
                models::CurieWeissConfig cfg;
                cfg.N = N;
                cfg.B = B;
                cfg.J = J;
                const SymTridiag direct = models::build_cw_dicke(cfg);
                const ComplexDense projected =
                    tensor::dicke_project(models::build_cw_tensor(cfg), N);
                for (int i = 0; i <= N; ++i)
                    for (int j = 0; j <= N; ++j) {
                        double want = 0.0;
                        if (i == j)
                            want = direct.diag[static_cast<std::size_t>(i)];
                        else if (std::abs(i - j) == 1)
                            want = direct.off[static_cast<std::size_t>(std::min(i, j))];
                        worst = std::max(worst, std::abs(projected.at(i, j) - want));
                    }
            }
        c.checks.push_back(line("reduction defect over the (J,B) grid, N=" + std::to_string(N),
                                worst, 0.0, 1e-12));
    }
}

void criterion_upper_symbols(CriterionResult& c) {
    struct Row {
        std::string label;
        bool mandatory;
        std::function<Poly3(int)> symbol;
        std::function<ComplexDense(int)> target;
    };
    auto spin = [](int axis, int N) { return tensor::collective_spin(axis, N); };
    auto linear = [](int a, int b, int cc) {
        return [a, b, cc](int N) { return Poly3::monomial(a, b, cc, 0.5 * (N + 2)); };
    };
    auto shifted = [](int a, int b, int cc) {
        return [a, b, cc](int N) {
            Poly3 p = Poly3::monomial(a, b, cc, 0.25 * (N + 2.0) * (N + 3.0));
            p.add(0, 0, 0, -0.25 * (N + 2.0));
            return p;
        };
    };
    const std::vector<Row> rows = {
        {"Sz from (N+2)/2 z", true, linear(0, 0, 1), [&](int N) { return spin(3, N); }},
        {"Sz^2 from (N+2)(N+3)/4 z^2 - (N+2)/4", true, shifted(0, 0, 2),
         [&](int N) { return spin(3, N) * spin(3, N); }},
        {"Sx from (N+2)/2 x", true, linear(1, 0, 0), [&](int N) { return spin(1, N); }},
        {"Sx^2 from (N+2)(N+3)/4 x - (N+2)/4 (azimuth-linear)", false, shifted(1, 0, 0),
         [&](int N) { return spin(1, N) * spin(1, N); }},
        {"Sy from (N+2)/2 y", false, linear(0, 1, 0), [&](int N) { return spin(2, N); }},
        {"Sy^2 from (N+2)(N+3)/4 y - (N+2)/4 (azimuth-linear)", false, shifted(0, 1, 0),
         [&](int N) { return spin(2, N) * spin(2, N); }},
    };
    const std::vector<int> Ns = {1, 2, 5, 10, 20};
    std::string failures;
    for (const auto& row : rows) {
        double worst = 0.0;
        for (int N : Ns) {
            const quantize::SphereQuad quad = quantize::sphere_quadrature(2 * N + 2);
            const ComplexDense got =
                quantize::berezin_spin_matrix(N, quantize::sphere_poly(row.symbol(N)), quad);
            worst = std::max(worst, max_entry_diff(got, row.target(N)));
        }
        const CheckLine l = line(row.label, worst, 0.0, 1e-10, !row.mandatory);
        if (!l.pass) {
            if (!failures.empty()) failures += "; ";
            failures += row.label + " defect " + util::format_g17(worst);
        }
        c.checks.push_back(l);
    }
    if (!failures.empty())
        c.note = "rows recorded failing as data: " + failures +
                 "; squaring the trigonometric factor repairs both (see the unit tests); "
                 "the three mandatory rows gate this criterion";
}

}  // namespace

AcceptanceReport acceptance_suite(const AcceptanceOptions& options) {
    AcceptanceReport rep;
    const Poly3 X = Poly3::monomial(1, 0, 0, 1.0);
    const Poly3 Z = Poly3::monomial(0, 0, 1, 1.0);

    rep.criteria.push_back(
        guarded(1, "chain defect closed form", criterion_chain_defect));
    rep.criteria.push_back(
        guarded(2, "symmetric-sector reduction equals tensor build", criterion_sector_reduction));
    rep.criteria.push_back(
        guarded(3, "upper-symbol reconstruction of spin operators", criterion_upper_symbols));

    rep.criteria.push_back(guarded(4, "mean-field spin sweep limits", [&](CriterionResult& c) {
        SweepSpec spec;
        spec.model = ModelId::curie_weiss;
        spec.B = 0.5;
        spec.J = 1.0;
        spec.n_values = {50, 100, 200, 500, 1000, 2000};
        spec.observables = {observable_by_name(spec.model, "x"),
                            observable_by_name(spec.model, "z"),
                            observable_by_name(spec.model, "z2")};
        spec.workers = options.workers;
        const auto recs = run_limit_sweep(spec);
        rep.sweep_records.insert(rep.sweep_records.end(), recs.begin(), recs.end());
        c.checks.push_back(
            line("extrapolated <Q(x)>", extrapolate(filter_records(recs, "x")).value, 0.5, 5e-3));
        c.checks.push_back(line("extrapolated <Q(z^2)>",
                                extrapolate(filter_records(recs, "z2")).value, 0.75, 5e-3));
        double worst_z = 0.0;
        for (const auto& r : filter_records(recs, "z"))
            worst_z = std::max(worst_z, std::fabs(r.quantum));
        c.checks.push_back(line("max |<Q(z)>| over N", worst_z, 0.0, 1e-10));
        c.checks.push_back(line("extrapolated ground energy per site",
                                extrapolate(filter_records(recs, kEnergyName)).value, -0.625,
                                5e-3));
    }));

    rep.criteria.push_back(guarded(5, "boson-dimer sweep limits", [&](CriterionResult& c) {
        SweepSpec spec;
        spec.model = ModelId::bose_hubbard;
        spec.n_values = {50, 100, 200, 500, 1000};
        spec.observables = {observable_by_name(spec.model, "x"),
                            observable_by_name(spec.model, "z"),
                            observable_by_name(spec.model, "z2")};
        spec.workers = options.workers;
        const auto recs = run_limit_sweep(spec);
        rep.sweep_records.insert(rep.sweep_records.end(), recs.begin(), recs.end());
        c.checks.push_back(
            line("extrapolated <x>", extrapolate(filter_records(recs, "x")).value, 0.5, 5e-3));
        c.checks.push_back(
            line("extrapolated <z^2>", extrapolate(filter_records(recs, "z2")).value, 0.75, 5e-3));
        double worst_z = 0.0;
        for (const auto& r : filter_records(recs, "z"))
            worst_z = std::max(worst_z, std::fabs(r.quantum));
        c.checks.push_back(line("max |<z>| over N", worst_z, 0.0, 1e-8));
        c.checks.push_back(line("extrapolated ground energy",
                                extrapolate(filter_records(recs, kEnergyName)).value, -0.625,
                                5e-3));
    }));

    rep.criteria.push_back(guarded(6, "double-well semiclassical sweep", [&](CriterionResult& c) {
        SweepSpec spec;
        spec.model = ModelId::double_well;
        spec.hbar_values = {0.5, 0.2, 0.1, 0.05, 0.02};
        spec.observables = {observable_by_name(spec.model, "q"),
                            observable_by_name(spec.model, "q2"),
                            observable_by_name(spec.model, "p2")};
        spec.workers = options.workers;
        const auto recs = run_limit_sweep(spec);
        rep.sweep_records.insert(rep.sweep_records.end(), recs.begin(), recs.end());
        const auto energy = filter_records(recs, kEnergyName);
        double worst_step = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < energy.size(); ++i)
            worst_step = std::max(worst_step, energy[i + 1].quantum - energy[i].quantum);
        c.checks.push_back(verdict_line("ground energy strictly decreasing (max step)",
                                        worst_step, 0.0, 0.0, worst_step < 0.0));
        c.checks.push_back(line("ground energy at hbar=0.02", energy.back().quantum, 0.0, 0.06));
        double worst_q = 0.0;
        for (const auto& r : filter_records(recs, "q"))
            worst_q = std::max(worst_q, std::fabs(r.quantum));
        c.checks.push_back(line("max |<q>| over hbar", worst_q, 0.0, 1e-6));
        const auto q2 = filter_records(recs, "q2");
        c.checks.push_back(line("<q^2> at hbar=0.02", q2.back().quantum, 1.0, 0.05));
        c.checks.push_back(line("extrapolated <q^2>", extrapolate(q2).value, 1.0, 0.02));
        c.checks.push_back(line("extrapolated <p^2>",
                                extrapolate(filter_records(recs, "p2")).value, 0.0, 0.02));
    }));

    rep.criteria.push_back(guarded(7, "classical symmetry-breaking verdicts", [&](CriterionResult& c) {
        struct Fixture {
            ClassicalModel model;
            std::vector<ClassicalPoint> expected;
        };
        const double s = std::sqrt(0.75);
        const std::vector<Fixture> fixtures = {
            {ClassicalModel::double_well(),
             {classical::plane_point(-1.0, 0.0), classical::plane_point(1.0, 0.0)}},
            {ClassicalModel::curie_weiss(1.0, 0.5),
             {classical::ball_point(0.5, 0.0, -s), classical::ball_point(0.5, 0.0, s)}},
            {ClassicalModel::bose_hubbard(),
             {classical::sphere_point(5.0 * std::numbers::pi / 6.0, 0.0),
              classical::sphere_point(std::numbers::pi / 6.0, 0.0)}},
        };
        for (const auto& fx : fixtures) {
            const std::string name = model_name(fx.model.id);
            const classical::SsbReport verdict = classical::ssb_verdict(fx.model);
            bool pure_all_move = true;
            for (bool fixed : verdict.dirac_invariant) pure_all_move = pure_all_move && !fixed;
            const bool ssb_ok = verdict.ssb && pure_all_move && verdict.mixture_invariant;
            c.checks.push_back(verdict_line("verdict is SSB for " + name, ssb_ok ? 1.0 : 0.0,
                                            1.0, 0.0, ssb_ok));
            double worst = 0.0;
            for (std::size_t i = 0; i < fx.expected.size(); ++i) {
                double d2 = 0.0;
                for (int k = 0; k < 3; ++k) {
                    const double d =
                        verdict.minima.points[i].c[static_cast<std::size_t>(k)] -
                        fx.expected[i].c[static_cast<std::size_t>(k)];
                    d2 += d * d;
                }
                worst = std::max(worst, std::sqrt(d2));
            }
            c.checks.push_back(line("minima match closed forms for " + name, worst, 0.0, 1e-8));
        }
    }));

    rep.criteria.push_back(guarded(8, "two-stage limits: field and bump selection", [&](CriterionResult& c) {
        const double branch = std::sqrt(0.75);
        rep.flea_branch = flea_scan_cw(0.5, 1.0, {-1e-3, 1e-3}, {500, 1000, 2000});
        const std::size_t last = rep.flea_branch.n_values.size() - 1;
        const double m_neg = rep.flea_branch.m3[0 * rep.flea_branch.n_values.size() + last];
        const double m_pos = rep.flea_branch.m3[1 * rep.flea_branch.n_values.size() + last];
        c.checks.push_back(line("m3 at N=2000, eps=-1e-3", m_neg, branch, 0.05));
        c.checks.push_back(line("m3 at N=2000, eps=+1e-3", m_pos, -branch, 0.05));
        c.checks.push_back(line("field-flip antisymmetry at N=2000", m_neg + m_pos, 0.0, 1e-8));

        rep.flea_symmetric = flea_scan_cw(0.5, 1.0, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, {20, 100});
        const std::size_t cols = rep.flea_symmetric.n_values.size();
        const double m20 = rep.flea_symmetric.m3[4 * cols + 0];
        const double m100 = rep.flea_symmetric.m3[4 * cols + 1];
        c.checks.push_back(
            line("|m3| at N=20, eps=1e-6 (gap-dominated regime)", std::fabs(m20), 0.0, 0.05, true));
        c.checks.push_back(line("|m3| at N=100, eps=1e-6", std::fabs(m100), 0.0, 0.05));

        models::Perturbation bump;
        bump.kind = models::Perturbation::Kind::schrodinger_flea;
        bump.flea.delta = 0.1;
        bump.flea.q0 = 1.0;
        bump.flea.w = 0.2;
        rep.flea_dw = flea_schrodinger({0.5, 0.2, 0.1, 0.05, 0.02}, bump);
        c.checks.push_back(
            line("<q> at hbar=0.02 with bump at +1", rep.flea_dw.mean_q.back(), -1.0, 0.2));
        c.checks.push_back(
            line("|<q>| at hbar=0.5 with bump at +1", std::fabs(rep.flea_dw.mean_q.front()),
                 0.0, 0.1));
        c.note =
            "the N=100 small-field sub-check is unattainable in double precision: the "
            "unperturbed even/odd gap there is ~4e-19, so every representable field dominates "
            "it and the ground state localizes (measured m3 stays near -0.86 down to eps = "
            "1e-14); the N=20 row shows the gap-dominated symmetric regime at the same eps. "
            "Left failing as measured rather than masked by a parity-projected solve, which "
            "would break the N=2000 branch checks above.";
    }));

    rep.criteria.push_back(guarded(9, "deformation-condition diagnostics", [&](CriterionResult& c) {
        double worst_norm_defect = 0.0;
        for (int N = 1; N <= 40; ++N) {
            const double norm = linalg::operator_norm(quantize::berezin_poly_matrix(Z, N));
            worst_norm_defect =
                std::max(worst_norm_defect, std::fabs(std::fabs(norm - 1.0) - 2.0 / (N + 2.0)));
        }
        c.checks.push_back(
            line("sup-norm defect matches 2/(N+2) for N<=40", worst_norm_defect, 0.0, 1e-10));

        const std::vector<int> Ns = {8, 16, 32, 64};
        const quantize::DiagnosticsReport prod = quantize::quantization_diagnostics(Ns, Z, Z);
        double worst_step = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < prod.rows.size(); ++i)
            worst_step = std::max(worst_step,
                                  prod.rows[i + 1].product_defect - prod.rows[i].product_defect);
        c.checks.push_back(verdict_line("product defect strictly decreasing (max step)",
                                        worst_step, 0.0, 0.0, worst_step < 0.0));
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const auto& row : prod.rows) {
            const double lx = std::log(static_cast<double>(row.N));
            const double ly = std::log(row.product_defect);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double m = static_cast<double>(prod.rows.size());
        const double rate = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
        c.checks.push_back(line("product-defect decay rate", rate, 1.0, 0.2));

        const quantize::DiagnosticsReport dgr = quantize::quantization_diagnostics(Ns, Z, X);
        for (const auto& row : dgr.rows)
            c.checks.push_back(line("commutator-bracket defect at N=" + std::to_string(row.N),
                                    row.dgr_defect, 0.0, 5.0 / row.N));
        rep.dgr_sign = dgr.dgr_sign;
        rep.dgr_scale = dgr.dgr_scale;
        c.note = "commutator convention constants (sign, scale) = (" +
                 std::to_string(dgr.dgr_sign) + ", " + util::format_g17(dgr.dgr_scale) +
                 "), measured once and frozen";
    }));

    rep.criteria.push_back(guarded(10, "module property spot checks", [&](CriterionResult& c) {
        {  // ground-pair residuals across the three models
            models::CurieWeissConfig cw;
            cw.N = 500;
            const SymTridiag Hcw = models::build_cw_dicke(cw);
            const EigenPair pcw = linalg::ground_pair_parity(Hcw, 0.0);
            c.checks.push_back(verdict_line(
                "ground residual, mean-field chain N=500", pcw.residual, 0.0,
                1e-10 * std::max(1.0, linalg::norm_bound(Hcw)),
                pcw.residual <= 1e-10 * std::max(1.0, linalg::norm_bound(Hcw))));
            models::BoseHubbardConfig bh;
            bh.N = 500;
            const SymTridiag Hbh = models::build_bh(bh);
            const EigenPair pbh = linalg::ground_pair_parity(Hbh, 0.0);
            c.checks.push_back(verdict_line(
                "ground residual, boson dimer N=500", pbh.residual, 0.0,
                1e-10 * std::max(1.0, linalg::norm_bound(Hbh)),
                pbh.residual <= 1e-10 * std::max(1.0, linalg::norm_bound(Hbh))));
            models::DoubleWellConfig dw;
            dw.hbar = 0.1;
            dw.L = 8.0;
            dw.M = 2048;
            const models::DoubleWellOperator op = models::build_double_well(dw);
            const EigenPair pdw = linalg::ground_pair_parity(op.matrix, 0.0);
            c.checks.push_back(verdict_line(
                "ground residual, double well hbar=0.1", pdw.residual, 0.0,
                1e-10 * std::max(1.0, linalg::norm_bound(op.matrix)),
                pdw.residual <= 1e-10 * std::max(1.0, linalg::norm_bound(op.matrix))));
        }
        {  // Husimi unit mass (the tamper knob for harness self-tests)
            models::BoseHubbardConfig bh;
            bh.N = 25;
            const EigenPair pair = linalg::ground_pair_parity(models::build_bh(bh), 0.0);
            const quantize::HusimiDensity density =
                quantize::husimi_spin_density(pair.vector, quantize::sphere_quadrature(50));
            c.checks.push_back(line("coherent-family unit mass", density.mass,
                                    options.husimi_unit_target, 1e-8));
        }
        {  // positivity and contraction of the coherent-state quantization
            Poly3 pos = Poly3::monomial(2, 0, 0, 1.0);
            pos.add(1, 0, 0, 0.6);
            pos.add(0, 0, 0, 0.09);
            const linalg::Spectrum spec =
                linalg::dense_eigen(real_embedding(quantize::berezin_poly_matrix(pos, 6)));
            const double min_eig = spec.values.front();
            c.checks.push_back(verdict_line("positivity: min eigenvalue of Q((x+0.3)^2)",
                                            min_eig, 0.0, 1e-10, min_eig >= -1e-10));
            const double norm9 = linalg::operator_norm(quantize::berezin_poly_matrix(Z, 9));
            c.checks.push_back(line("contraction: ||Q(z)|| at N=9", norm9, 9.0 / 11.0, 1e-12));
        }
        {  // symmetrizer idempotence on a fixed non-symmetric matrix
            ComplexDense A = ComplexDense::zero(8);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    A.at(i, j) = {0.3 * i - 0.2 * j + 0.05, 0.01 * i * j - 0.04 * j};
            const ComplexDense S = tensor::full_symmetrizer(A, 3);
            const ComplexDense SS = tensor::full_symmetrizer(S, 3);
            c.checks.push_back(line("symmetrizer idempotence at N=3", max_entry_diff(SS, S),
                                    0.0, 1e-12));
        }
        {  // product-state exactness of the symmetrized placements
            const int N = 6;
            const double theta = 1.1, phi = 0.7;
            const std::complex<double> up(std::cos(0.5 * theta), 0.0);
            const std::complex<double> dn = std::polar(std::sin(0.5 * theta), phi);
            const int dim = 1 << N;
            std::vector<std::complex<double>> v(static_cast<std::size_t>(dim));
            for (int b = 0; b < dim; ++b) {
                std::complex<double> amp(1.0, 0.0);
                for (int s = 0; s < N; ++s) amp *= ((b >> s) & 1) != 0 ? dn : up;
                v[static_cast<std::size_t>(b)] = amp;
            }
            auto expect = [&](const Poly3& p) {
                const ComplexDense M = tensor::quantize_poly(p, N);
                std::complex<double> acc(0.0, 0.0);
                for (int i = 0; i < dim; ++i) {
                    std::complex<double> row(0.0, 0.0);
                    for (int j = 0; j < dim; ++j)
                        row += M.at(i, j) * v[static_cast<std::size_t>(j)];
                    acc += std::conj(v[static_cast<std::size_t>(i)]) * row;
                }
                return acc.real();
            };
            c.checks.push_back(line("product-state expectation of Q(z)", expect(Z),
                                    std::cos(theta), 1e-12));
            c.checks.push_back(line("product-state expectation of Q(z^2)",
                                    expect(Poly3::monomial(0, 0, 2, 1.0)),
                                    std::cos(theta) * std::cos(theta), 1e-12));
            Poly3 xz = Poly3::monomial(1, 0, 1, 1.0);
            c.checks.push_back(line("product-state expectation of Q(xz)", expect(xz),
                                    std::sin(theta) * std::cos(phi) * std::cos(theta), 1e-12));
        }
        {  // bitwise determinism across worker counts
            SweepSpec spec;
            spec.model = ModelId::curie_weiss;
            spec.n_values = {50, 100, 200};
            spec.observables = {observable_by_name(spec.model, "x"),
                                observable_by_name(spec.model, "z2")};
            spec.workers = 1;
            const auto lone = run_limit_sweep(spec);
            spec.workers = 4;
            const auto pooled = run_limit_sweep(spec);
            int diffs = lone.size() == pooled.size() ? 0 : 1;
            for (std::size_t i = 0; diffs == 0 && i < lone.size(); ++i) {
                if (!bits_equal(lone[i].quantum, pooled[i].quantum) ||
                    !bits_equal(lone[i].classical, pooled[i].classical) ||
                    !bits_equal(lone[i].abs_error, pooled[i].abs_error) ||
                    !bits_equal(lone[i].param_value, pooled[i].param_value) ||
                    lone[i].observable != pooled[i].observable)
                    diffs = 1;
            }
            c.checks.push_back(line("sweep bitwise identical, 1 vs 4 workers",
                                    static_cast<double>(diffs), 0.0, 0.0));
        }
    }));

    rep.all_pass = true;
    for (const auto& crit : rep.criteria) rep.all_pass = rep.all_pass && crit.pass;
    return rep;
}

}  // namespace sclab::experiments
