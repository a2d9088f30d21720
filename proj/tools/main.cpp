// Command-line surface: subcommands over one INI config. Exit codes:
// 0 success, 1 acceptance failure, 2 config error, 3 runtime failure
// (numerics or I/O). Every output file embeds the config hash.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sclab/config.hpp"
#include "sclab/errors.hpp"
#include "sclab/experiments.hpp"
#include "sclab/linalg.hpp"
#include "sclab/models.hpp"
#include "sclab/quantize.hpp"
#include "sclab/report.hpp"
#include "sclab/tensor.hpp"
#include "sclab/util.hpp"

namespace {

using nlohmann::json;
using sclab::Error;
using sclab::classical::ModelId;
using sclab::config::RunConfig;
using sclab::experiments::SweepSpec;
using sclab::linalg::EigenPair;
using sclab::linalg::SymTridiag;
using sclab::tensor::Poly3;

constexpr int kOk = 0;
constexpr int kAcceptanceFailure = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeFailure = 3;

int fail_config(const std::string& msg) {
    std::fprintf(stderr, "config error: %s\n", msg.c_str());
    return kConfigError;
}

int fail_runtime(const std::string& msg) {
    std::fprintf(stderr, "runtime failure: %s\n", msg.c_str());
    return kRuntimeFailure;
}

std::string model_text(ModelId id) {
    switch (id) {
        case ModelId::double_well:
            return "double_well";
        case ModelId::curie_weiss:
            return "curie_weiss";
        case ModelId::bose_hubbard:
            return "bose_hubbard";
    }
    return "curie_weiss";
}

std::string out_path(const std::string& out_dir, const RunConfig& cfg,
                     const std::string& suffix) {
    return (std::filesystem::path(out_dir) / (cfg.prefix + "_" + suffix)).string();
}

std::vector<std::string> default_observables(ModelId id) {
    if (id == ModelId::double_well) return {"q", "q2", "p2"};
    return {"x", "z", "z2"};
}

SweepSpec sweep_spec_from(const RunConfig& cfg) {
    SweepSpec spec;
    spec.model = cfg.kind;
    spec.J = cfg.J;
    spec.B = cfg.B;
    if (cfg.kind == ModelId::double_well) {
        spec.hbar_values = cfg.hbar_values;
        spec.dw_box = cfg.box;
        spec.dw_points = cfg.points;
    } else {
        spec.n_values = cfg.n_values;
    }
    const auto names = cfg.observables.empty() ? default_observables(cfg.kind)
                                               : cfg.observables;
    for (const auto& name : names)
        spec.observables.push_back(sclab::experiments::observable_by_name(cfg.kind, name));
    spec.include_energy = cfg.include_energy;
    spec.workers = cfg.workers;
    return spec;
}

double grid_mean_q(const std::vector<double>& psi, const std::vector<double>& grid) {
    std::vector<double> work(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) work[i] = psi[i] * psi[i] * grid[i];
    return sclab::util::pairwise_sum(work);
}

void emit_json(const json& payload, const std::string& path) {
    sclab::report::write_file_atomic(path, payload.dump(2) + "\n");
}

// --- subcommands -----------------------------------------------------------

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir) {
    SweepSpec spec;
    try {
        spec = sweep_spec_from(cfg);
        spec.validate();
    } catch (const Error& ex) {
        return fail_config(ex.what());
    }
    try {
        const auto records = sclab::experiments::run_limit_sweep(spec);
        if (cfg.format != "json")
            sclab::report::emit_records_csv(records, cfg.hash(),
                                            out_path(out_dir, cfg, "sweep.csv"));
        if (cfg.format != "csv") {
            sclab::report::Report rep;
            rep.config_hash = cfg.hash();
            rep.tables = records;
            sclab::report::emit_report_json(rep, out_path(out_dir, cfg, "sweep.json"));
        }
        std::printf("sweep: %zu records for %s written under %s\n", records.size(),
                    model_text(cfg.kind).c_str(), out_dir.c_str());
        return kOk;
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
    sclab::models::Perturbation pert;
    try {
        if (cfg.perturbation == "field") {
            if (cfg.kind != ModelId::curie_weiss)
                throw Error("a longitudinal field perturbs only the curie_weiss model");
            pert.kind = sclab::models::Perturbation::Kind::cw_field;
            pert.epsilon = cfg.epsilon;
        } else if (cfg.perturbation == "bump") {
            if (cfg.kind != ModelId::double_well)
                throw Error("a potential bump perturbs only the double_well model");
            pert.kind = sclab::models::Perturbation::Kind::schrodinger_flea;
            pert.flea.delta = cfg.delta;
            pert.flea.q0 = cfg.q0;
            pert.flea.w = cfg.w;
        }
        if (cfg.kind == ModelId::curie_weiss) {
            sclab::models::CurieWeissConfig mc{cfg.n, cfg.B, cfg.J};
            mc.validate();
        } else if (cfg.kind == ModelId::bose_hubbard) {
            sclab::models::BoseHubbardConfig mc;
            mc.N = cfg.n;
            mc.validate();
        } else {
            sclab::models::DoubleWellConfig mc{cfg.hbar, cfg.box, cfg.points};
            mc.validate();
        }
    } catch (const Error& ex) {
        return fail_config(ex.what());
    }

    try {
        const bool perturbed = cfg.perturbation != "none";
        json payload{{"config_hash", cfg.hash()},
                     {"model", model_text(cfg.kind)},
                     {"perturbation", cfg.perturbation}};
        EigenPair pair;
        if (cfg.kind == ModelId::double_well) {
            sclab::models::DoubleWellConfig mc{cfg.hbar, cfg.box, cfg.points};
            const auto op = sclab::models::build_double_well(mc);
            if (perturbed && pert.flea.delta != 0.0) {
                const SymTridiag Hp = sclab::models::apply_perturbation(op.matrix, pert, mc);
                pair = sclab::linalg::ground_pair(Hp, 0.0);
            } else {
                pair = sclab::linalg::ground_pair_parity(op.matrix, 0.0);
            }
            payload["param_name"] = "hbar";
            payload["param_value"] = cfg.hbar;
            payload["mean_q"] = grid_mean_q(pair.vector, op.grid);
        } else {
            SymTridiag H;
            if (cfg.kind == ModelId::curie_weiss) {
                const sclab::models::CurieWeissConfig mc{cfg.n, cfg.B, cfg.J};
                H = sclab::models::build_cw_dicke(mc);
                if (perturbed) H = sclab::models::apply_perturbation(H, pert, mc);
            } else {
                sclab::models::BoseHubbardConfig mc;
                mc.N = cfg.n;
                H = sclab::models::build_bh(mc);
            }
            pair = perturbed ? sclab::linalg::ground_pair(H, 0.0)
                             : sclab::linalg::ground_pair_parity(H, 0.0);
            payload["param_name"] = "N";
            payload["param_value"] = cfg.n;
            const Poly3 z = Poly3::monomial(0, 0, 1, 1.0);
            payload["m3"] = cfg.kind == ModelId::curie_weiss
                                ? sclab::tensor::dicke_expectation(pair.vector, z)
                                : sclab::quantize::berezin_dicke_expect(pair.vector, z);
            if (cfg.kind == ModelId::curie_weiss)
                payload["energy_per_site"] = pair.value / cfg.n;
        }
        payload["energy"] = pair.value;
        payload["residual"] = pair.residual;
        emit_json(payload, out_path(out_dir, cfg, "solve.json"));
        std::printf("solve: %s ground energy %s (residual %.3g)\n",
                    model_text(cfg.kind).c_str(),
                    sclab::util::format_g17(pair.value).c_str(), pair.residual);
        return kOk;
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
}

int cmd_classical(const RunConfig& cfg, const std::string& out_dir) {
    sclab::classical::ClassicalModel model = sclab::classical::ClassicalModel::double_well();
    try {
        if (cfg.kind == ModelId::curie_weiss)
            model = sclab::classical::ClassicalModel::curie_weiss(cfg.J, cfg.B);
        else if (cfg.kind == ModelId::bose_hubbard)
            model = sclab::classical::ClassicalModel::bose_hubbard();
    } catch (const Error& ex) {
        return fail_config(ex.what());
    }
    try {
        const auto verdict = sclab::classical::ssb_verdict(model);
        json minima = json::array();
        for (const auto& pt : verdict.minima.points)
            minima.push_back({pt.c[0], pt.c[1], pt.c[2]});
        json excluded = json::array();
        for (std::size_t i = 0; i < verdict.minima.excluded.size(); ++i) {
            const auto& pt = verdict.minima.excluded[i];
            excluded.push_back({{"point", {pt.c[0], pt.c[1], pt.c[2]}},
                                {"value", verdict.minima.excluded_values[i]}});
        }
        const json payload{{"config_hash", cfg.hash()},
                           {"model", model_text(cfg.kind)},
                           {"minima", minima},
                           {"minimum_value", verdict.minima.value},
                           {"max_gradient_norm", verdict.minima.max_gradient_norm},
                           {"excluded_stationary_points", excluded},
                           {"dirac_invariant", verdict.dirac_invariant},
                           {"mixture_invariant", verdict.mixture_invariant},
                           {"ssb", verdict.ssb},
                           {"mixture_weights", verdict.invariant_witness.weights},
                           {"notes", verdict.notes}};
        emit_json(payload, out_path(out_dir, cfg, "classical.json"));
        std::printf("classical: %s has %zu minima at value %s; symmetry %s\n",
                    model_text(cfg.kind).c_str(), verdict.minima.points.size(),
                    sclab::util::format_g17(verdict.minima.value).c_str(),
                    verdict.ssb ? "broken (mixture survives)" : "unbroken");
        return kOk;
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
}

int cmd_diagnose(const RunConfig& cfg, const std::string& out_dir) {
    try {
        json chain = json::array();
        for (int N = 2; N <= 10; ++N)
            chain.push_back({{"N", N},
                             {"defect", sclab::tensor::verify_qnh(N, cfg.J, cfg.B)}});
        const Poly3 z = Poly3::monomial(0, 0, 1, 1.0);
        const Poly3 x = Poly3::monomial(1, 0, 0, 1.0);
        const auto diag =
            sclab::quantize::quantization_diagnostics({8, 16, 32, 64}, z, x);
        json rows = json::array();
        for (const auto& row : diag.rows)
            rows.push_back({{"N", row.N},
                            {"norm", row.norm_f},
                            {"product_defect", row.product_defect},
                            {"bracket_defect", row.dgr_defect}});
        const json payload{{"config_hash", cfg.hash()},
                           {"chain_defects", chain},
                           {"convention", {{"sign", diag.dgr_sign}, {"scale", diag.dgr_scale}}},
                           {"diagnostics", rows}};
        emit_json(payload, out_path(out_dir, cfg, "diagnose.json"));
        std::printf("diagnose: convention (sign, scale) = (%+d, %g); "
                    "bracket defect %.3g at N=64\n",
                    diag.dgr_sign, diag.dgr_scale, diag.rows.back().dgr_defect);
        return kOk;
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
}

int cmd_flea(const RunConfig& cfg, const std::string& out_dir) {
    try {  // mirror the scan preconditions so bad input maps to exit 2
        if (!(cfg.B > 0.0 && cfg.B < 1.0) || !(cfg.J > 0.0))
            throw Error("field scan needs B in (0,1) and J > 0");
        if (cfg.epsilons.empty() || cfg.n_values.empty() || cfg.hbar_values.empty())
            throw Error("field scan needs nonempty epsilons, n_values and hbar_values");
        for (double e : cfg.epsilons)
            if (e == 0.0) throw Error("epsilons must be nonzero");
        if (!(cfg.delta >= 0.0)) throw Error("bump amplitude must be nonnegative");
        if (!(cfg.w > 0.0)) throw Error("bump width must be positive");
    } catch (const Error& ex) {
        return fail_config(ex.what());
    }
    try {
        const auto field =
            sclab::experiments::flea_scan_cw(cfg.B, cfg.J, cfg.epsilons, cfg.n_values);
        sclab::models::Perturbation bump;
        bump.kind = sclab::models::Perturbation::Kind::schrodinger_flea;
        bump.flea.delta = cfg.delta;
        bump.flea.q0 = cfg.q0;
        bump.flea.w = cfg.w;
        const auto dw = sclab::experiments::flea_schrodinger(cfg.hbar_values, bump);

        json m3 = json::array();
        for (std::size_t ie = 0; ie < field.epsilons.size(); ++ie)
            for (std::size_t in = 0; in < field.n_values.size(); ++in)
                m3.push_back({{"eps", field.epsilons[ie]},
                              {"N", field.n_values[in]},
                              {"m3", field.m3[ie * field.n_values.size() + in]}});
        json mean_q = json::array();
        for (std::size_t i = 0; i < dw.hbars.size(); ++i)
            mean_q.push_back({{"hbar", dw.hbars[i]}, {"mean_q", dw.mean_q[i]}});
        const json payload{
            {"config_hash", cfg.hash()},
            {"field_scan",
             {{"B", field.B},
              {"J", field.J},
              {"m3", m3},
              {"broken_branch_ok", field.broken_branch_ok},
              {"symmetric_limit_ok", field.symmetric_limit_ok}}},
            {"bump_scan",
             {{"delta", cfg.delta},
              {"q0", cfg.q0},
              {"w", cfg.w},
              {"mean_q", mean_q},
              {"localizes_small_hbar", dw.localizes_small_hbar},
              {"symmetric_large_hbar", dw.symmetric_large_hbar}}}};
        emit_json(payload, out_path(out_dir, cfg, "flea.json"));
        std::printf("flea: field scan branch %s, symmetric limit %s; "
                    "bump scan localizes %s, symmetric at large hbar %s\n",
                    field.broken_branch_ok ? "saturated" : "not saturated",
                    field.symmetric_limit_ok ? "kept" : "lost",
                    dw.localizes_small_hbar ? "yes" : "no",
                    dw.symmetric_large_hbar ? "yes" : "no");
        return kOk;
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
}

int cmd_accept(const RunConfig& cfg, const std::string& out_dir) {
    sclab::experiments::AcceptanceReport rep;
    try {
        sclab::experiments::AcceptanceOptions opt;
        opt.workers = cfg.workers;
        rep = sclab::experiments::acceptance_suite(opt);
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
    for (const auto& crit : rep.criteria) {
        std::printf("[%s] criterion %d: %s\n", crit.pass ? "PASS" : "FAIL", crit.id,
                    crit.name.c_str());
        for (const auto& l : crit.checks)
            std::printf("    %s%s  %s: measured=%.9g target=%.9g tol=%.9g\n",
                        l.pass ? "ok  " : "FAIL", l.informational ? " (info)" : "",
                        l.label.c_str(), l.measured, l.target, l.tolerance);
        if (!crit.note.empty()) std::printf("    note: %s\n", crit.note.c_str());
    }
    try {
        sclab::report::Report out;
        out.config_hash = cfg.hash();
        out.dgr_sign = rep.dgr_sign;
        out.dgr_scale = rep.dgr_scale;
        out.criteria = rep.criteria;
        out.tables = rep.sweep_records;
        if (cfg.format != "csv")
            sclab::report::emit_report_json(out, out_path(out_dir, cfg, "accept.json"));
        if (cfg.format != "json")
            sclab::report::emit_records_csv(rep.sweep_records, cfg.hash(),
                                            out_path(out_dir, cfg, "accept.csv"));
    } catch (const Error& ex) {
        return fail_runtime(ex.what());
    }
    int passed = 0;
    for (const auto& crit : rep.criteria)
        if (crit.pass) ++passed;
    std::printf("ACCEPTANCE: %d/%zu criteria passed\n", passed, rep.criteria.size());
    return rep.all_pass ? kOk : kAcceptanceFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for classical limits and symmetry breaking"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    CLI::App* subs[6] = {
        app.add_subcommand("solve", "ground pair of the configured model"),
        app.add_subcommand("sweep", "convergence sweep toward the classical limit"),
        app.add_subcommand("classical", "classical minima and the symmetry verdict"),
        app.add_subcommand("diagnose", "quantization diagnostics and chain defects"),
        app.add_subcommand("flea", "perturbation scans (field and potential bump)"),
        app.add_subcommand("accept", "run the full acceptance suite"),
    };
    for (auto* sub : subs) {
        sub->add_option("--config", config_path, "INI config file (defaults when omitted)");
        sub->add_option("--out", out_dir, "output directory (created if missing)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::fprintf(stderr, "%s\n", ex.what());
        std::fprintf(stderr, "%s", app.help().c_str());
        return kConfigError;
    }

    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) return fail_config("cannot read config file '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            cfg = sclab::config::parse_config(buffer.str());
        } catch (const Error& ex) {
            return fail_config(std::string(config_path) + ": " + ex.what());
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail_runtime("cannot create output directory '" + out_dir + "'");

    if (subs[0]->parsed()) return cmd_solve(cfg, out_dir);
    if (subs[1]->parsed()) return cmd_sweep(cfg, out_dir);
    if (subs[2]->parsed()) return cmd_classical(cfg, out_dir);
    if (subs[3]->parsed()) return cmd_diagnose(cfg, out_dir);
    if (subs[4]->parsed()) return cmd_flea(cfg, out_dir);
    return cmd_accept(cfg, out_dir);
}
