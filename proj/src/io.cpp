#include "solitonlab/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace solitonlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_doubles(std::ofstream& out, const double* data, std::size_t n) {
    static_assert(std::endian::native == std::endian::little,
                  "payloads are written little-endian");
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 8));
}

std::string read_header_line(std::ifstream& in, const fs::path& path) {
    std::string line;
    if (!std::getline(in, line)) throw CorruptFile("missing header in " + path.string());
    return line;
}

json parse_header(const std::string& line, const fs::path& path) {
    json h = json::parse(line, nullptr, false);
    if (h.is_discarded() || !h.is_object())
        throw SchemaError("malformed JSON header in " + path.string());
    return h;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

void save_field(const ScalarField& field, double t, const ProblemParams& params,
                const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    json h{{"schema", "field-v1"},
           {"N", field.grid.points_per_axis},
           {"L", field.grid.box_half_length},
           {"t", t},
           {"d", params.d},
           {"p", params.p}};
    out << h.dump() << '\n';
    std::vector<double> buf(field.v.size() * 2);
    for (std::size_t i = 0; i < field.v.size(); ++i) {
        buf[2 * i] = field.v[i].real();
        buf[2 * i + 1] = field.v[i].imag();
    }
    write_doubles(out, buf.data(), buf.size());
}

LoadedField load_field(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    const json h = parse_header(read_header_line(in, path), path);
    if (h.value("schema", "") != "field-v1")
        throw SchemaError("expected schema field-v1 in " + path.string());
    LoadedField lf;
    lf.field = ScalarField(make_grid(h.at("L").get<double>(), h.at("N").get<int>()));
    lf.t = h.at("t").get<double>();
    lf.params = ProblemParams{h.at("d").get<int>(), h.at("p").get<double>()};
    std::vector<double> buf(lf.field.v.size() * 2);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
    if (static_cast<std::size_t>(in.gcount()) != buf.size() * 8)
        throw CorruptFile("truncated field payload in " + path.string());
    for (std::size_t i = 0; i < lf.field.v.size(); ++i)
        lf.field.v[i] = cplx(buf[2 * i], buf[2 * i + 1]);
    return lf;
}

void save_profile(const RadialProfile& profile, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    json h{{"schema", "profile-v1"}, {"d", profile.params.d},
           {"p", profile.params.p},  {"omega", profile.omega},
           {"r_max", profile.r_max}, {"n_nodes", profile.n_nodes},
           {"center_value", profile.center_value}, {"mass", profile.mass}};
    out << h.dump() << '\n';
    write_doubles(out, profile.values.data(), profile.values.size());
}

RadialProfile load_profile(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    const json h = parse_header(read_header_line(in, path), path);
    if (h.value("schema", "") != "profile-v1")
        throw SchemaError("expected schema profile-v1 in " + path.string());
    RadialProfile prof;
    prof.params = ProblemParams{h.at("d").get<int>(), h.at("p").get<double>()};
    prof.omega = h.at("omega").get<double>();
    prof.r_max = h.at("r_max").get<double>();
    prof.n_nodes = h.at("n_nodes").get<int>();
    prof.center_value = h.at("center_value").get<double>();
    prof.mass = h.at("mass").get<double>();
    prof.values.resize(static_cast<std::size_t>(prof.n_nodes) + 1);
    in.read(reinterpret_cast<char*>(prof.values.data()),
            static_cast<std::streamsize>(prof.values.size() * 8));
    if (static_cast<std::size_t>(in.gcount()) != prof.values.size() * 8)
        throw CorruptFile("truncated profile payload in " + path.string());
    const double recomputed = profile_mass(prof);
    if (std::abs(recomputed - prof.mass) > 1e-8 * std::max(1.0, std::abs(prof.mass)))
        throw CorruptFile("header mass inconsistent with payload in " + path.string());
    return prof;
}

void write_massmap_csv(const std::vector<MassFrequencySample>& map, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    out << "omega,mass,energy,d_value,converged\n";
    for (const auto& s : map) {
        out << fmt(s.omega) << ',' << fmt(s.mass) << ',' << fmt(s.energy) << ','
            << fmt(s.d_value) << ',' << (s.converged ? 1 : 0) << '\n';
    }
}

void write_spectral_csv(const std::vector<SpectralReport>& reports, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    out << "omega,eig_plus_0,eig_plus_1,eig_minus_0,n_negative_plus,"
           "kernel_residual_minus,vk_slope,verdict\n";
    for (const auto& r : reports) {
        out << fmt(r.omega) << ',' << fmt(r.lowest_eigs_plus.at(0)) << ','
            << fmt(r.lowest_eigs_plus.at(1)) << ',' << fmt(r.lowest_eigs_minus.at(0)) << ','
            << r.n_negative_plus << ',' << fmt(r.kernel_residual_minus) << ','
            << fmt(r.vk_slope) << ',' << r.verdict << '\n';
    }
}

void write_trace_csv(const EvolutionTrace& trace, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
    const std::size_t K =
        trace.localized_mass_series.empty() ? 0 : trace.localized_mass_series.front().size();
    out << "t,mass,energy,px,py,residual";
    for (std::size_t k = 1; k <= K; ++k) out << ",I_" << k;
    for (std::size_t k = 1; k <= K; ++k) out << ",M_" << k << "x,M_" << k << 'y';
    out << '\n';
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << fmt(trace.times[i]) << ',' << fmt(trace.mass_series[i]) << ','
            << fmt(trace.energy_series[i]) << ',' << fmt(trace.momentum_series[i][0]) << ','
            << fmt(trace.momentum_series[i][1]) << ',' << fmt(trace.residual_series[i]);
        if (K > 0) {
            for (std::size_t k = 0; k < K; ++k)
                out << ',' << fmt(trace.localized_mass_series[i][k]);
            for (std::size_t k = 0; k < K; ++k)
                out << ',' << fmt(trace.localized_momentum_series[i][k][0]) << ','
                    << fmt(trace.localized_momentum_series[i][k][1]);
        }
        out << '\n';
    }
}

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Groundstate: return "groundstate";
        case ExperimentKind::CriticalQ: return "q";
        case ExperimentKind::MassMap: return "massmap";
        case ExperimentKind::Minimize: return "minimize";
        case ExperimentKind::MinimizePohozaev: return "minimize_pohozaev";
        case ExperimentKind::Spectrum: return "spectrum";
        case ExperimentKind::Evolve: return "evolve";
        case ExperimentKind::Stability: return "stability";
        case ExperimentKind::MultiSoliton: return "multisoliton";
    }
    return "unknown";
}

namespace {

ExperimentKind kind_from_name(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::Groundstate, ExperimentKind::CriticalQ, ExperimentKind::MassMap,
          ExperimentKind::Minimize, ExperimentKind::MinimizePohozaev, ExperimentKind::Spectrum,
          ExperimentKind::Evolve, ExperimentKind::Stability, ExperimentKind::MultiSoliton})
        if (kind_name(k) == name) return k;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

struct KeyValue {
    std::string section;
    std::string key;
    std::string value;
};

std::vector<KeyValue> tokenize_config(const std::string& text) {
    std::vector<KeyValue> items;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            items.push_back({section, "", ""}); // section marker
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        items.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return items;
}

double to_double(const KeyValue& kv) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(kv.value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + kv.key + "'");
    }
    if (pos != kv.value.size()) throw ConfigError("bad numeric value for '" + kv.key + "'");
    return v;
}

long to_long(const KeyValue& kv) {
    const double v = to_double(kv);
    if (v != std::floor(v)) throw ConfigError("expected integer for '" + kv.key + "'");
    return static_cast<long>(v);
}

std::array<double, 2> to_vec2(const KeyValue& kv) {
    std::istringstream is(kv.value);
    std::array<double, 2> v{};
    if (!(is >> v[0] >> v[1])) throw ConfigError("expected two numbers for '" + kv.key + "'");
    std::string rest;
    if (is >> rest) throw ConfigError("expected two numbers for '" + kv.key + "'");
    return v;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    const std::vector<KeyValue> items = tokenize_config(text);
    ExperimentConfig cfg;
    bool saw_kind = false;
    SolitonSpec* soliton = nullptr;

    for (const auto& kv : items) {
        if (kv.key.empty()) { // section marker
            if (kv.section == "soliton") {
                cfg.solitons.emplace_back();
                soliton = &cfg.solitons.back();
            } else if (kv.section == "grid" || kv.section == "cutoff") {
                soliton = nullptr;
            } else {
                throw ConfigError("unknown section [" + kv.section + "]");
            }
            continue;
        }
        if (kv.section == "grid") {
            if (kv.key == "L") cfg.grid_L = to_double(kv);
            else if (kv.key == "N") cfg.grid_N = static_cast<int>(to_long(kv));
            else throw ConfigError("unknown key '" + kv.key + "' in [grid]");
            continue;
        }
        if (kv.section == "cutoff") {
            if (kv.key == "width") cfg.cutoff_width = to_double(kv);
            else throw ConfigError("unknown key '" + kv.key + "' in [cutoff]");
            continue;
        }
        if (kv.section == "soliton") {
            if (!soliton) throw ConfigError("soliton key outside [soliton]");
            if (kv.key == "omega") soliton->omega = to_double(kv);
            else if (kv.key == "x0") soliton->x0 = to_vec2(kv);
            else if (kv.key == "v") soliton->v = to_vec2(kv);
            else if (kv.key == "gamma") soliton->gamma = to_double(kv);
            else throw ConfigError("unknown key '" + kv.key + "' in [soliton]");
            continue;
        }
        // top-level keys
        if (kv.key == "kind") {
            cfg.kind = kind_from_name(kv.value);
            saw_kind = true;
        } else if (kv.key == "d") cfg.params.d = static_cast<int>(to_long(kv));
        else if (kv.key == "p") cfg.params.p = to_double(kv);
        else if (kv.key == "omega") cfg.omega = to_double(kv);
        else if (kv.key == "omega_min") cfg.omega_min = to_double(kv);
        else if (kv.key == "omega_max") cfg.omega_max = to_double(kv);
        else if (kv.key == "omega_steps") cfg.omega_steps = static_cast<int>(to_long(kv));
        else if (kv.key == "omega_list") {
            std::istringstream is(kv.value);
            double w;
            cfg.omega_list.clear();
            while (is >> w) cfg.omega_list.push_back(w);
            if (cfg.omega_list.empty()) throw ConfigError("empty omega_list");
        } else if (kv.key == "mass") cfg.mass = to_double(kv);
        else if (kv.key == "mass_cap") cfg.mass_cap = to_double(kv);
        else if (kv.key == "rmax") cfg.r_max = to_double(kv);
        else if (kv.key == "nodes") cfg.n_nodes = static_cast<int>(to_long(kv));
        else if (kv.key == "dt") cfg.dt = to_double(kv);
        else if (kv.key == "T") cfg.T = to_double(kv);
        else if (kv.key == "eps") cfg.eps = to_double(kv);
        else if (kv.key == "probe_dt") cfg.probe_dt = to_double(kv);
        else if (kv.key == "snapshot_stride") cfg.snapshot_stride = static_cast<int>(to_long(kv));
        else if (kv.key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(kv));
        else if (kv.key == "backward") cfg.backward = to_long(kv) != 0;
        else if (kv.key == "out") cfg.out_dir = kv.value;
        else throw ConfigError("unknown key '" + kv.key + "'");
    }
    if (!saw_kind) throw ConfigError("config must set 'kind'");

    // bounds
    if (cfg.params.d != 2 && cfg.params.d != 3) throw ConfigError("d must be 2 or 3");
    if (cfg.n_nodes < 16 || cfg.n_nodes > 2000000 || cfg.n_nodes % 2 != 0)
        throw ConfigError("nodes must be even and within [16, 2e6]");
    if (cfg.grid_N < 16 || cfg.grid_N > 4096 || (cfg.grid_N & (cfg.grid_N - 1)) != 0)
        throw ConfigError("grid N must be a power of two in [16, 4096]");
    if (!(cfg.grid_L > 0.0 && cfg.grid_L <= 1000.0)) throw ConfigError("grid L out of range");
    if (!(std::abs(cfg.dt) > 0.0 && std::abs(cfg.dt) <= 1.0)) throw ConfigError("dt out of range");
    if (!(cfg.probe_dt > 0.0)) throw ConfigError("probe_dt must be positive");
    if (cfg.eps < 0.0 || cfg.eps > 0.1) throw ConfigError("eps must lie in [0, 0.1]");
    return cfg;
}

ExperimentConfig parse_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::uint64_t fnv1a64_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot hash " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

RadialProfile cached_profile(const ProblemParams& params, double omega, double r_max,
                             int n_nodes) {
    const char* cache_dir = std::getenv("SOLITON_LAB_CACHE");
    fs::path dir;
    if (cache_dir && *cache_dir) {
        dir = cache_dir;
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ostringstream name;
        name.precision(17);
        name << "profile_d" << params.d << "_p" << params.p << "_w" << omega << "_r" << r_max
             << "_n" << n_nodes << ".prof";
        const fs::path path = dir / name.str();
        if (fs::exists(path)) {
            try {
                RadialProfile prof = load_profile(path);
                if (prof.params == params && prof.omega == omega && prof.r_max == r_max &&
                    prof.n_nodes == n_nodes)
                    return prof;
            } catch (const Error&) {
                // fall through to recompute
            }
        }
        RadialProfile prof = params.critical_only() ? solve_q(params.d, r_max, n_nodes)
                                                    : shoot_profile(params, omega, r_max, n_nodes);
        save_profile(prof, path);
        return prof;
    }
    return params.critical_only() ? solve_q(params.d, r_max, n_nodes)
                                  : shoot_profile(params, omega, r_max, n_nodes);
}

namespace {

double auto_rmax(const ExperimentConfig& cfg, double omega) {
    return cfg.r_max > 0.0 ? cfg.r_max : 20.0 / std::sqrt(omega);
}

void warn_boundary(const ScalarField& f) {
    const double ratio = boundary_amplitude_ratio(f);
    if (ratio > 1e-8)
        std::fprintf(stderr,
                     "warning: boundary amplitude is %.2e of peak; functionals may be "
                     "corrupted by periodic wrap-around\n",
                     ratio);
}

struct ArtifactWriter {
    fs::path dir;
    RunManifest* manifest;

    void add(const fs::path& rel) {
        ArtifactEntry e;
        e.path = rel.string();
        const fs::path full = dir / rel;
        e.bytes = static_cast<std::uint64_t>(fs::file_size(full));
        std::ostringstream hex;
        hex << std::hex << fnv1a64_file(full);
        e.fnv64 = hex.str();
        manifest->artifacts.push_back(std::move(e));
    }
};

void dispatch(const ExperimentConfig& cfg, ArtifactWriter& aw) {
    const fs::path dir = aw.dir;
    switch (cfg.kind) {
        case ExperimentKind::Groundstate: {
            const double r_max = auto_rmax(cfg, cfg.omega);
            const RadialProfile prof = shoot_profile(cfg.params, cfg.omega, r_max, cfg.n_nodes);
            save_profile(prof, dir / "profile.prof");
            aw.add("profile.prof");
            break;
        }
        case ExperimentKind::CriticalQ: {
            const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 25.0;
            const RadialProfile prof = solve_q(cfg.params.d, r_max, cfg.n_nodes);
            save_profile(prof, dir / "q.prof");
            aw.add("q.prof");
            break;
        }
        case ExperimentKind::MassMap: {
            std::vector<double> omegas = cfg.omega_list;
            if (omegas.empty()) {
                for (int i = 0; i < cfg.omega_steps; ++i)
                    omegas.push_back(cfg.omega_min +
                                     (cfg.omega_max - cfg.omega_min) * i /
                                         std::max(1, cfg.omega_steps - 1));
            }
            const auto map = mass_frequency_map(omegas, cfg.params,
                                                cfg.r_max > 0.0 ? cfg.r_max : 20.0, cfg.n_nodes);
            write_massmap_csv(map, dir / "massmap.csv");
            aw.add("massmap.csv");
            for (const auto& s : map)
                if (!s.converged)
                    aw.manifest->notes.push_back("omega=" + std::to_string(s.omega) + ": " +
                                                 s.error);
            break;
        }
        case ExperimentKind::Minimize: {
            const GridSpec grid = make_grid(cfg.grid_L, cfg.grid_N);
            const double r_maxq = cfg.r_max > 0.0 ? cfg.r_max : 25.0;
            const double q_mass = cached_profile({cfg.params.d, 0.0}, 1.0, r_maxq, cfg.n_nodes).mass;
            const FlowResult res = minimize_fixed_mass(cfg.mass, cfg.params, grid, q_mass);
            warn_boundary(res.minimizer);
            save_field(res.minimizer, 0.0, cfg.params, dir / "minimizer.field");
            aw.add("minimizer.field");
            std::ofstream sum(dir / "summary.json");
            sum << json{{"omega_m", res.lagrange_omega},
                        {"d_m", res.objective},
                        {"iterations", res.iterations},
                        {"residual", res.residual}}
                       .dump(2)
                << '\n';
            sum.close();
            aw.add("summary.json");
            break;
        }
        case ExperimentKind::MinimizePohozaev: {
            const GridSpec grid = make_grid(cfg.grid_L, cfg.grid_N);
            const double r_maxq = cfg.r_max > 0.0 ? cfg.r_max : 25.0;
            const double q_mass = cached_profile({cfg.params.d, 0.0}, 1.0, r_maxq, cfg.n_nodes).mass;
            const FlowResult res =
                minimize_pohozaev(cfg.omega, cfg.mass_cap, cfg.params, grid, q_mass);
            warn_boundary(res.minimizer);
            save_field(res.minimizer, 0.0, cfg.params, dir / "minimizer.field");
            aw.add("minimizer.field");
            std::ofstream sum(dir / "summary.json");
            sum << json{{"omega", cfg.omega},
                        {"lagrange_omega", res.lagrange_omega},
                        {"d_omega", res.objective},
                        {"iterations", res.iterations},
                        {"residual", res.residual}}
                       .dump(2)
                << '\n';
            sum.close();
            aw.add("summary.json");
            break;
        }
        case ExperimentKind::Spectrum: {
            std::vector<double> omegas = cfg.omega_list;
            if (omegas.empty()) throw ConfigError("spectrum needs omega_list");
            std::vector<RadialProfile> profiles;
            for (double om : omegas)
                profiles.push_back(
                    cached_profile(cfg.params, om, auto_rmax(cfg, om), cfg.n_nodes));
            const auto reports = vk_report(std::move(profiles));
            write_spectral_csv(reports, dir / "spectral.csv");
            aw.add("spectral.csv");
            break;
        }
        case ExperimentKind::Evolve: {
            const GridSpec grid = make_grid(cfg.grid_L, cfg.grid_N);
            const RadialProfile prof =
                cached_profile(cfg.params, cfg.omega, auto_rmax(cfg, cfg.omega), cfg.n_nodes);
            SolitonSpec spec;
            spec.omega = cfg.omega;
            const ScalarField phi0 = embed_profile(prof, grid, spec, 0.0);
            warn_boundary(phi0);
            ProbeConfig probes;
            probes.probe_dt = cfg.probe_dt;
            probes.snapshot_stride = cfg.snapshot_stride;
            const EvolutionTrace tr = evolve(phi0, 0.0, cfg.T, cfg.dt, cfg.params, probes);
            write_trace_csv(tr, dir / "trace.csv");
            aw.add("trace.csv");
            int si = 0;
            for (const auto& [t, snap] : tr.snapshots) {
                const std::string name = "snapshot_" + std::to_string(si++) + ".field";
                save_field(snap, t, cfg.params, dir / name);
                aw.add(name);
            }
            break;
        }
        case ExperimentKind::Stability: {
            const GridSpec grid = make_grid(cfg.grid_L, cfg.grid_N);
            const RadialProfile prof =
                cached_profile(cfg.params, cfg.omega, auto_rmax(cfg, cfg.omega), cfg.n_nodes);
            ExperimentOptions opts;
            opts.probe_dt = cfg.probe_dt;
            opts.seed = cfg.seed;
            opts.snapshot_stride = cfg.snapshot_stride;
            const EvolutionTrace tr =
                stability_experiment(prof, cfg.eps, cfg.T, cfg.params, grid, cfg.dt, opts);
            write_trace_csv(tr, dir / "trace.csv");
            aw.add("trace.csv");
            break;
        }
        case ExperimentKind::MultiSoliton: {
            const GridSpec grid = make_grid(cfg.grid_L, cfg.grid_N);
            MultiSolitonConfig mc;
            mc.specs = cfg.solitons;
            mc.cutoff_width = cfg.cutoff_width;
            mc.validate();
            std::vector<RadialProfile> profiles;
            for (const auto& s : mc.specs)
                profiles.push_back(
                    cached_profile(cfg.params, s.omega, auto_rmax(cfg, s.omega), cfg.n_nodes));
            ExperimentOptions opts;
            opts.probe_dt = cfg.probe_dt;
            opts.seed = cfg.seed;
            opts.snapshot_stride = cfg.snapshot_stride;
            opts.backward = cfg.backward;
            const EvolutionTrace tr = multisoliton_experiment(mc, profiles, cfg.T, cfg.params,
                                                              grid, cfg.dt, opts);
            write_trace_csv(tr, dir / "trace.csv");
            aw.add("trace.csv");
            break;
        }
    }
}

} // namespace

RunManifest run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.status = "ok";
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);

    ArtifactWriter aw{config.out_dir, &manifest};
    try {
        dispatch(config, aw);
    } catch (const Error& e) {
        manifest.status = "error";
        manifest.error_kind = e.kind();
        manifest.error_message = e.what();
    }
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json m{{"status", manifest.status},
           {"kind", kind_name(config.kind)},
           {"wall_time_s", manifest.wall_time_s},
           {"config",
            {{"d", config.params.d},
             {"p", config.params.p},
             {"omega", config.omega},
             {"grid_L", config.grid_L},
             {"grid_N", config.grid_N},
             {"dt", config.dt},
             {"T", config.T},
             {"seed", config.seed}}},
           {"artifacts", json::array()},
           {"notes", manifest.notes}};
    for (const auto& a : manifest.artifacts)
        m["artifacts"].push_back({{"path", a.path}, {"bytes", a.bytes}, {"fnv64", a.fnv64}});
    if (manifest.status == "error") {
        m["error"] = manifest.error_kind;
        m["error_message"] = manifest.error_message;
    }
    std::ofstream out(config.out_dir / "manifest.json");
    out << m.dump(2) << '\n';
    return manifest;
}

} // namespace solitonlab
