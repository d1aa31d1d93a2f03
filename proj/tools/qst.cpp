// Command-line front end: experiment orchestration and plot-ready data
// emission. Subcommands map one-to-one onto the library drivers.
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qst/qst.hpp"

namespace fs = std::filesystem;
using qst::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// config handling

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError("config: '" + path + "' must be an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + path + "." + key + "'");
}

const std::map<std::string, std::set<std::string>> kSchema = {
    {"", {"experiment", "protocol", "chain", "disorder", "numerics", "output", "sweep", "scaling"}},
    {"protocol", {"kind", "epsilon", "T", "delta0", "tau", "tau_Z", "t1", "t2", "delta", "rabi_T"}},
    {"chain", {"n_dimers", "t1", "t2", "delta"}},
    {"disorder", {"kind", "strength", "realizations", "seed"}},
    {"numerics", {"step_budget", "recording_samples", "record_sites", "bins", "threads"}},
    {"output", {"directory", "formats"}},
    {"sweep", {"family", "axis1", "axis2"}},
    {"scaling", {"rho", "sizes"}},
};

void validate_structure(const json& cfg) {
    check_keys(cfg, "config", kSchema.at(""));
    for (const auto& [block, keys] : kSchema) {
        if (block.empty() || !cfg.contains(block)) continue;
        check_keys(cfg.at(block), block, keys);
    }
    if (cfg.contains("sweep")) {
        for (const char* axis : {"axis1", "axis2"}) {
            if (!cfg["sweep"].contains(axis)) continue;
            check_keys(cfg["sweep"][axis], std::string("sweep.") + axis, {"name", "grid"});
        }
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    // a manifest embeds the effective config under "config"
    if (j.contains("config") && j.contains("version")) j = j.at("config");
    validate_structure(j);
    return j;
}

void merge_into(json& base, const json& overlay) {
    for (const auto& [key, value] : overlay.items()) {
        if (value.is_object() && base.contains(key) && base[key].is_object())
            merge_into(base[key], value);
        else
            base[key] = value;
    }
}

/// Apply a dotted-path override like "protocol.epsilon=0.2".
void apply_set(json& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    const std::string path = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (...) {
        parsed = value;  // bare strings
    }
    json* node = &cfg;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("--set: empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (or an emitted manifest)");
    cmd->add_option("--set", flags.sets, "override a config field, e.g. protocol.epsilon=0.2");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--format", flags.format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_option("--seed", flags.seed, "master RNG seed")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
    cmd->add_option("--threads", flags.threads, "worker count (default: hardware parallelism)");
}

json effective_config(const std::string& experiment, const CommonFlags& flags) {
    json cfg = {
        {"experiment", experiment},
        {"chain", {{"n_dimers", 10}}},
        {"disorder",
         {{"kind", "diagonal"}, {"strength", 0.0}, {"realizations", 1000}, {"seed", 0}}},
        {"numerics",
         {{"step_budget", 0.02},
          {"recording_samples", 500},
          {"record_sites", false},
          {"bins", 100},
          {"threads", 0}}},
        {"output", {{"directory", "out"}, {"formats", "both"}}},
    };
    if (!flags.config_path.empty()) {
        json file_cfg = load_config_file(flags.config_path);
        if (file_cfg.contains("experiment") &&
            file_cfg["experiment"].get<std::string>() != experiment)
            throw ConfigError("config: experiment '" +
                              file_cfg["experiment"].get<std::string>() +
                              "' does not match subcommand '" + experiment + "'");
        merge_into(cfg, file_cfg);
    }
    for (const auto& kv : flags.sets) apply_set(cfg, kv);
    if (!flags.out_dir.empty()) cfg["output"]["directory"] = flags.out_dir;
    if (!flags.format.empty()) cfg["output"]["formats"] = flags.format;
    if (flags.seed_given) cfg["disorder"]["seed"] = flags.seed;
    if (flags.threads > 0) cfg["numerics"]["threads"] = flags.threads;
    cfg["experiment"] = experiment;
    validate_structure(cfg);
    return cfg;
}

template <class T>
T require(const json& cfg, const std::string& block, const std::string& key) {
    if (!cfg.contains(block) || !cfg[block].contains(key))
        throw ConfigError("config: missing required field '" + block + "." + key + "'");
    try {
        return cfg[block][key].get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config: field '" + block + "." + key + "' has the wrong type");
    }
}

qst::StepControl step_control_of(const json& cfg) {
    qst::StepControl sc;
    sc.budget = cfg["numerics"]["step_budget"].get<double>();
    sc.recording_samples = cfg["numerics"]["recording_samples"].get<int>();
    sc.record_sites = cfg["numerics"]["record_sites"].get<bool>();
    if (sc.budget <= 0.0) throw ConfigError("config: numerics.step_budget must be > 0");
    if (sc.recording_samples < 2)
        throw ConfigError("config: numerics.recording_samples must be >= 2");
    return sc;
}

int threads_of(const json& cfg) {
    int t = cfg["numerics"]["threads"].get<int>();
    if (t < 0) throw ConfigError("config: numerics.threads must be >= 0");
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

qst::ProtocolSchedule protocol_of(const json& cfg) {
    if (!cfg.contains("protocol")) throw ConfigError("config: missing 'protocol' block");
    try {
        return qst::schedule_from_json(cfg["protocol"]);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid protocol block: ") + e.what());
    }
}

int n_dimers_of(const json& cfg) {
    const int n = require<int>(cfg, "chain", "n_dimers");
    if (n < 1) throw ConfigError("config: chain.n_dimers must be >= 1");
    return n;
}

// ---------------------------------------------------------------------------
// output plumbing

struct OutputWriter {
    fs::path dir;
    bool csv;
    bool jsn;
    std::vector<std::string> written;

    explicit OutputWriter(const json& cfg) {
        dir = cfg["output"]["directory"].get<std::string>();
        const std::string fmt = cfg["output"]["formats"].get<std::string>();
        if (fmt != "csv" && fmt != "json" && fmt != "both")
            throw ConfigError("config: output.formats must be csv|json|both");
        csv = fmt != "json";
        jsn = fmt != "csv";
        fs::create_directories(dir);
    }

    std::string path(const std::string& name) {
        written.push_back(name);
        return (dir / name).string();
    }

    void write_json(const std::string& name, const json& j) {
        std::ofstream out(path(name));
        out << j.dump(2) << "\n";
    }
};

void write_manifest(OutputWriter& out, const json& cfg, double wall_seconds) {
    json manifest = {{"version", kVersion},
                     {"config", cfg},
                     {"wall_clock_seconds", wall_seconds},
                     {"outputs", out.written}};
    std::ofstream f((out.dir / "manifest.json").string());
    f << manifest.dump(2) << "\n";
}

json trajectory_json(const qst::Trajectory& traj) {
    json j = {{"t", traj.times}, {"p1", traj.p_first}, {"p2N", traj.p_last}};
    if (!traj.site_occupations.empty()) j["sites"] = traj.site_occupations;
    j["final_p2N"] = qst::transfer_probability(traj);
    return j;
}

void emit_ensemble(OutputWriter& out, const std::string& prefix, const qst::EnsembleResult& r) {
    if (out.csv) {
        qst::write_samples_csv(out.path(prefix + "_samples.csv"), r.samples);
        qst::write_histogram_csv(out.path(prefix + "_histogram.csv"), r.histogram);
    }
    out.write_json(prefix + "_summary.json", qst::summary_json(r));
}

// ---------------------------------------------------------------------------
// experiment runners

void run_simulate(const json& cfg, OutputWriter& out, bool two_level) {
    const auto schedule = protocol_of(cfg);
    const int n = n_dimers_of(cfg);
    const auto sc = step_control_of(cfg);
    qst::Trajectory traj;
    if (two_level)
        traj = qst::propagate_two_level(schedule, n, qst::site_basis_state(2, 0), sc);
    else
        traj = qst::propagate_full(n, schedule, nullptr, qst::site_basis_state(2 * n), sc);
    if (out.csv) qst::write_trajectory_csv(out.path("trajectory.csv"), traj);
    if (out.jsn) out.write_json("trajectory.json", trajectory_json(traj));
    std::cout << "p2N(T) = " << qst::transfer_probability(traj) << "\n";
}

qst::EnsembleConfig ensemble_config_of(const json& cfg) {
    qst::EnsembleConfig ec;
    ec.n_dimers = n_dimers_of(cfg);
    ec.kind = qst::disorder_kind_from_string(require<std::string>(cfg, "disorder", "kind"));
    ec.strength = require<double>(cfg, "disorder", "strength");
    ec.realizations = require<int>(cfg, "disorder", "realizations");
    ec.seed = cfg["disorder"]["seed"].get<std::uint64_t>();
    ec.bins = cfg["numerics"]["bins"].get<int>();
    ec.threads = threads_of(cfg);
    ec.step = step_control_of(cfg);
    if (ec.strength < 0.0) throw ConfigError("config: disorder.strength must be >= 0");
    if (ec.realizations < 1) throw ConfigError("config: disorder.realizations must be >= 1");
    if (ec.bins < 1) throw ConfigError("config: numerics.bins must be >= 1");
    return ec;
}

void warn_if_weak_decoupling(const qst::ProtocolSchedule& schedule, int n_dimers) {
    if (schedule.kind() != qst::ProtocolKind::lz) return;
    const double ratio = qst::lz_decoupling_ratio(schedule.lz_params(), n_dimers);
    if (ratio < 1.0)
        std::cerr << "warning: delta0/kappa_max = " << ratio
                  << " < 1; edge states are not decoupled in stages I/III\n";
}

void run_ensemble_cmd(const json& cfg, OutputWriter& out) {
    const auto schedule = protocol_of(cfg);
    const auto ec = ensemble_config_of(cfg);
    warn_if_weak_decoupling(schedule, ec.n_dimers);
    const auto result = qst::run_ensemble(schedule, ec);
    emit_ensemble(out, "ensemble", result);
    std::cout << "mean p2N = " << result.summary.mean
              << ", fraction(p > 0.9) = " << result.summary.fraction_above_090 << "\n";
}

void run_compare(const json& cfg, OutputWriter& out) {
    // protocol block holds the LZ schedule; the Rabi partner is derived from
    // the same epsilon with its own T (protocol.T is the LZ total time, the
    // Rabi T must be supplied via chain of overrides or defaults to 86)
    if (!cfg.contains("protocol") || cfg["protocol"].value("kind", "") != "lz")
        throw ConfigError("compare: protocol block must describe the LZ schedule");
    const auto lz_schedule = protocol_of(cfg);
    json rabi_j = {{"kind", "rabi"},
                   {"epsilon", cfg["protocol"]["epsilon"]},
                   {"T", cfg["protocol"].value("rabi_T", 86.0)}};
    const auto rabi_schedule = qst::schedule_from_json(rabi_j);
    const auto ec = ensemble_config_of(cfg);
    warn_if_weak_decoupling(lz_schedule, ec.n_dimers);
    const auto [rabi_result, lz_result] = qst::compare_protocols(rabi_schedule, lz_schedule, ec);
    emit_ensemble(out, "rabi", rabi_result);
    emit_ensemble(out, "lz", lz_result);
    json comparison = {{"rabi", qst::summary_json(rabi_result)},
                       {"lz", qst::summary_json(lz_result)},
                       {"rabi_protocol", qst::to_json(rabi_schedule)},
                       {"lz_protocol", qst::to_json(lz_schedule)}};
    out.write_json("comparison.json", comparison);
    std::cout << "rabi median = " << rabi_result.summary.median
              << ", lz median = " << lz_result.summary.median << "\n";
}

void run_sweep(const json& cfg, OutputWriter& out) {
    if (!cfg.contains("sweep")) throw ConfigError("sweep2d: missing 'sweep' block");
    const json& sw = cfg["sweep"];
    const std::string family_name = sw.value("family", "lz");
    qst::ProtocolFamily family;
    if (family_name == "rabi")
        family = qst::ProtocolFamily::rabi;
    else if (family_name == "lz")
        family = qst::ProtocolFamily::lz;
    else
        throw ConfigError("sweep2d: unknown family '" + family_name + "'");
    auto axis_of = [&](const char* key) {
        if (!sw.contains(key)) throw ConfigError(std::string("sweep2d: missing sweep.") + key);
        qst::SweepAxis axis;
        axis.name = sw[key].at("name").get<std::string>();
        axis.grid = sw[key].at("grid").get<std::vector<double>>();
        return axis;
    };
    std::map<std::string, double> fixed;
    if (cfg.contains("protocol"))
        for (const auto& [key, value] : cfg["protocol"].items())
            if (value.is_number() && key != "kind") fixed[key] = value.get<double>();
    try {
        const auto result = qst::sweep2d(family, axis_of("axis1"), axis_of("axis2"), fixed,
                                         n_dimers_of(cfg), step_control_of(cfg), threads_of(cfg));
        if (out.csv) qst::write_sweep_csv(out.path("sweep.csv"), result);
        json meta = qst::sweep_metadata_json(result);
        meta["family"] = family_name;
        meta["fixed"] = fixed;
        meta["n_dimers"] = n_dimers_of(cfg);
        if (out.jsn) {
            json data = meta;
            data["p2N"] = result.p;
            out.write_json("sweep.json", data);
        }
        out.write_json("sweep_meta.json", meta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void run_scaling(const json& cfg, OutputWriter& out) {
    if (!cfg.contains("scaling")) throw ConfigError("scaling: missing 'scaling' block");
    const double rho = cfg["scaling"].value("rho", 1.3);
    const auto sizes = cfg["scaling"].value("sizes", std::vector<int>{10, 20, 30, 40});
    std::vector<qst::ScalingPoint> table;
    try {
        table = qst::scaling_study(rho, sizes, step_control_of(cfg), threads_of(cfg));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (out.csv) qst::write_scaling_csv(out.path("scaling.csv"), table);
    if (out.jsn) {
        json rows = json::array();
        for (const auto& row : table)
            rows.push_back({{"sites", 2 * row.n_dimers}, {"p2N", row.p_transfer}});
        out.write_json("scaling.json", {{"rho", rho}, {"rows", rows}});
    }
    for (const auto& row : table)
        std::cout << "2N = " << 2 * row.n_dimers << "  p2N = " << row.p_transfer << "\n";
}

void run_area_time(const json& cfg, OutputWriter& out) {
    const double epsilon = require<double>(cfg, "protocol", "epsilon");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("area-time: protocol.epsilon must lie in (0,1)");
    const int n = n_dimers_of(cfg);
    const double t_star = qst::solve_rabi_area_time(epsilon, n);
    const double area = qst::area_integral(qst::ProtocolSchedule::rabi({epsilon, t_star}), n);
    out.write_json("area_time.json",
                   {{"epsilon", epsilon}, {"n_dimers", n}, {"T_star", t_star}, {"area", area}});
    std::cout << "T* = " << t_star << " (area " << area << ")\n";
}

void run_spectrum(const json& cfg, OutputWriter& out) {
    qst::ChainSpec spec;
    spec.n_dimers = n_dimers_of(cfg);
    spec.t1 = cfg["chain"].value("t1", 1.0);
    spec.t2 = require<double>(cfg, "chain", "t2");
    spec.delta = cfg["chain"].value("delta", 0.0);
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const auto h = qst::build_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    const double splitting = qst::midgap_splitting(h);
    if (out.csv) {
        auto f = qst::detail::open_out(out.path("spectrum.csv"));
        f << "index,eigenvalue\n";
        for (int i = 0; i < solver.eigenvalues().size(); ++i)
            f << i << "," << solver.eigenvalues()(i) << "\n";
    }
    json j = {{"midgap_splitting", splitting},
              {"t1", spec.t1},
              {"t2", spec.t2},
              {"delta", spec.delta},
              {"n_dimers", spec.n_dimers}};
    if (spec.ratio() < 1.0 && spec.ratio() >= 0.0)
        j["kappa"] = qst::coupling_kappa(spec);
    out.write_json("spectrum.json", j);
    std::cout << "midgap splitting = " << splitting << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological quantum-state-transfer simulations on dimerized chains"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    struct Sub {
        std::string name;
        std::string help;
    };
    const std::vector<Sub> subs = {
        {"simulate", "propagate the full chain under a protocol schedule"},
        {"two-level", "propagate the reduced two-level model"},
        {"sweep2d", "disorder-free transfer probability on a 2-D parameter grid"},
        {"ensemble", "disorder Monte Carlo with histogram output"},
        {"compare", "paired-seed Rabi vs LZ disorder comparison"},
        {"scaling", "chain-length scaling study of the LZ protocol"},
        {"area-time", "solve the area theorem for the Rabi duration T*"},
        {"spectrum", "eigenvalues and mid-gap splitting of a static chain"},
    };
    std::map<std::string, CommonFlags> flags;
    for (const auto& s : subs) add_common_flags(app.add_subcommand(s.name, s.help), flags[s.name]);

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const json cfg = effective_config(cmd, flags[cmd]);
        OutputWriter out(cfg);
        if (cmd == "simulate")
            run_simulate(cfg, out, false);
        else if (cmd == "two-level")
            run_simulate(cfg, out, true);
        else if (cmd == "sweep2d")
            run_sweep(cfg, out);
        else if (cmd == "ensemble")
            run_ensemble_cmd(cfg, out);
        else if (cmd == "compare")
            run_compare(cfg, out);
        else if (cmd == "scaling")
            run_scaling(cfg, out);
        else if (cmd == "area-time")
            run_area_time(cfg, out);
        else if (cmd == "spectrum")
            run_spectrum(cfg, out);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(out, cfg, wall);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
