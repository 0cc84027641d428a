#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/dynamics.hpp"
#include "solitonlab/spectral.hpp"
#include "solitonlab/variational.hpp"

namespace solitonlab {

// --- binary artifact formats -------------------------------------------------
// One JSON header line, '\n', then raw little-endian float64 payload.

void save_field(const ScalarField& field, double t, const ProblemParams& params,
                const std::filesystem::path& path);
struct LoadedField {
    ScalarField field;
    double t = 0.0;
    ProblemParams params;
};
LoadedField load_field(const std::filesystem::path& path);

void save_profile(const RadialProfile& profile, const std::filesystem::path& path);
RadialProfile load_profile(const std::filesystem::path& path);

// --- CSV writers --------------------------------------------------------------

void write_massmap_csv(const std::vector<MassFrequencySample>& map,
                       const std::filesystem::path& path);
void write_spectral_csv(const std::vector<SpectralReport>& reports,
                        const std::filesystem::path& path);
void write_trace_csv(const EvolutionTrace& trace, const std::filesystem::path& path);

// --- experiment configuration ---------------------------------------------
// Flat key = value text with [section] headers; unknown keys are rejected.

enum class ExperimentKind {
    Groundstate,
    CriticalQ,
    MassMap,
    Minimize,
    MinimizePohozaev,
    Spectrum,
    Evolve,
    Stability,
    MultiSoliton,
};

std::string kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Groundstate;
    ProblemParams params{2, 5.0};

    // solver knobs (validated ranges; defaults per experiment)
    double omega = 0.1;
    std::vector<double> omega_list;
    double omega_min = 0.02, omega_max = 0.15;
    int omega_steps = 8;
    double mass = 0.0, mass_cap = 0.0;
    double r_max = 0.0; // 0 = auto (20/sqrt(omega))
    int n_nodes = 20000;
    double grid_L = 24.0;
    int grid_N = 256;
    double dt = 1e-3;
    double T = 10.0;
    double eps = 0.0;
    double probe_dt = 0.25;
    int snapshot_stride = 0;
    std::uint64_t seed = 20240817;
    bool backward = false;
    double cutoff_width = 4.0;
    std::vector<SolitonSpec> solitons;

    std::filesystem::path out_dir = "out";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// --- run orchestration ------------------------------------------------------

struct ArtifactEntry {
    std::string path; // relative to out_dir
    std::uint64_t bytes = 0;
    std::string fnv64; // content hash, hex
};

struct RunManifest {
    std::string status; // "ok" or "error"
    std::string error_kind;
    std::string error_message;
    std::vector<ArtifactEntry> artifacts;
    std::vector<std::string> notes; // per-entry failures of partial sweeps
    double wall_time_s = 0.0;
};

// Dispatch one experiment, write artifacts and out_dir/manifest.json (also on
// failure). Returns the manifest; the CLI maps it to exit codes.
RunManifest run(const ExperimentConfig& config);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// Profile cache keyed by (d, p, omega, r_max, n_nodes) under SOLITON_LAB_CACHE.
RadialProfile cached_profile(const ProblemParams& params, double omega, double r_max,
                             int n_nodes);

} // namespace solitonlab
