// Command-line driver: ground states, mass-frequency maps, linearized
// spectra, and time-evolution experiments for the double-power NLS
//   i phi_t + lap phi + |phi|^{4/d} phi - |phi|^{p-1} phi = 0.
#include <CLI11.hpp>

#include <cstdio>

#include "solitonlab/io.hpp"

using namespace solitonlab;

namespace {

int run_and_report(const ExperimentConfig& cfg) {
    const RunManifest m = run(cfg);
    if (m.status == "ok") {
        std::printf("ok: %zu artifact(s) in %s (%.2fs)\n", m.artifacts.size(),
                    cfg.out_dir.string().c_str(), m.wall_time_s);
        for (const auto& note : m.notes) std::printf("  note: %s\n", note.c_str());
        return 0;
    }
    std::fprintf(stderr, "error [%s]: %s\n", m.error_kind.c_str(), m.error_message.c_str());
    return 3;
}

void add_common(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--d", cfg.params.d, "dimension (2 or 3)");
    cmd->add_option("--p", cfg.params.p, "defocusing exponent");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--nodes", cfg.n_nodes, "radial nodes");
    cmd->add_option("--rmax", cfg.r_max, "radial domain size (0 = auto)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soliton-lab: ground states, spectra and dynamics of the "
                 "competitive double-power NLS"};
    app.require_subcommand(1);

    ExperimentConfig cfg;

    auto* gs = app.add_subcommand("groundstate", "shoot the ground state Q_omega");
    add_common(gs, cfg);
    gs->add_option("--omega", cfg.omega, "soliton frequency")->required();
    gs->callback([&] { cfg.kind = ExperimentKind::Groundstate; });

    auto* q = app.add_subcommand("q", "shoot the critical ground state q");
    add_common(q, cfg);
    q->callback([&] { cfg.kind = ExperimentKind::CriticalQ; });

    auto* mm = app.add_subcommand("massmap", "sample the mass-frequency map");
    add_common(mm, cfg);
    mm->add_option("--omega-min", cfg.omega_min);
    mm->add_option("--omega-max", cfg.omega_max);
    mm->add_option("--steps", cfg.omega_steps);
    mm->callback([&] { cfg.kind = ExperimentKind::MassMap; });

    auto* mn = app.add_subcommand("minimize", "fixed-mass energy minimization");
    add_common(mn, cfg);
    mn->add_option("--mass", cfg.mass, "prescribed mass")->required();
    mn->add_option("--L", cfg.grid_L);
    mn->add_option("--N", cfg.grid_N);
    mn->callback([&] { cfg.kind = ExperimentKind::Minimize; });

    auto* mp = app.add_subcommand("minimize-pohozaev", "Pohozaev-constrained minimization");
    add_common(mp, cfg);
    mp->add_option("--omega", cfg.omega, "target frequency")->required();
    mp->add_option("--mass-cap", cfg.mass_cap, "upper mass bound")->required();
    mp->add_option("--L", cfg.grid_L);
    mp->add_option("--N", cfg.grid_N);
    mp->callback([&] { cfg.kind = ExperimentKind::MinimizePohozaev; });

    auto* sp = app.add_subcommand("spectrum", "linearized spectra and VK report");
    add_common(sp, cfg);
    sp->add_option("--omega-list", cfg.omega_list, "frequencies (>= 3)")->required()
        ->expected(-3);
    sp->callback([&] { cfg.kind = ExperimentKind::Spectrum; });

    auto* ev = app.add_subcommand("evolve", "evolve a single soliton");
    add_common(ev, cfg);
    ev->add_option("--omega", cfg.omega)->required();
    ev->add_option("--T", cfg.T);
    ev->add_option("--dt", cfg.dt);
    ev->add_option("--L", cfg.grid_L);
    ev->add_option("--N", cfg.grid_N);
    ev->add_option("--probe-dt", cfg.probe_dt);
    ev->add_option("--snapshot-stride", cfg.snapshot_stride);
    ev->callback([&] { cfg.kind = ExperimentKind::Evolve; });

    auto* st = app.add_subcommand("stability", "perturbed-soliton stability run");
    add_common(st, cfg);
    st->add_option("--omega", cfg.omega)->required();
    st->add_option("--eps", cfg.eps, "relative perturbation size in [0, 0.1]");
    st->add_option("--T", cfg.T);
    st->add_option("--dt", cfg.dt);
    st->add_option("--L", cfg.grid_L);
    st->add_option("--N", cfg.grid_N);
    st->add_option("--probe-dt", cfg.probe_dt);
    st->add_option("--seed", cfg.seed);
    st->callback([&] { cfg.kind = ExperimentKind::Stability; });

    std::string ms_config;
    auto* ms = app.add_subcommand("multisoliton", "multi-soliton run from a config file");
    ms->add_option("--config", ms_config, "key = value config with [soliton] sections")
        ->required();
    ms->add_option("--T", cfg.T);
    auto* rn = app.add_subcommand("run", "run a full experiment config file");
    std::string rn_config;
    rn->add_option("config", rn_config, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ms->parsed()) {
            ExperimentConfig file_cfg = parse_config_file(ms_config);
            if (file_cfg.kind != ExperimentKind::MultiSoliton)
                throw ConfigError("multisoliton expects kind = multisoliton");
            if (ms->count("--T") > 0) file_cfg.T = cfg.T;
            return run_and_report(file_cfg);
        }
        if (rn->parsed()) {
            return run_and_report(parse_config_file(rn_config));
        }
        return run_and_report(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.kind().c_str(), e.what());
        return 3;
    }
}
