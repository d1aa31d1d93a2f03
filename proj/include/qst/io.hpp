// CSV / JSON export and serialization of schedules and disorder
// realizations.
#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qst/dynamics.hpp"
#include "qst/ensemble.hpp"

namespace qst {

using json = nlohmann::json;

inline std::string to_string(DisorderKind kind) {
    return kind == DisorderKind::off_diagonal ? "off-diagonal" : "diagonal";
}

inline DisorderKind disorder_kind_from_string(const std::string& s) {
    if (s == "off-diagonal" || s == "offdiagonal") return DisorderKind::off_diagonal;
    if (s == "diagonal" || s == "on-diagonal") return DisorderKind::on_diagonal;
    throw std::invalid_argument("unknown disorder kind '" + s + "'");
}

inline json to_json(const ProtocolSchedule& s) {
    switch (s.kind()) {
        case ProtocolKind::rabi: {
            const auto& p = s.rabi_params();
            return {{"kind", "rabi"}, {"epsilon", p.epsilon}, {"T", p.total_time}};
        }
        case ProtocolKind::lz: {
            const auto& p = s.lz_params();
            return {{"kind", "lz"}, {"epsilon", p.epsilon}, {"delta0", p.delta0},
                    {"tau", p.tau},  {"tau_Z", p.tau_z},    {"T", p.total_time()}};
        }
        case ProtocolKind::fixed:
        default: {
            const auto& p = s.static_params();
            return {{"kind", "static"}, {"t1", p.t1}, {"t2", p.t2},
                    {"delta", p.delta}, {"T", p.total_time}};
        }
    }
}

inline ProtocolSchedule schedule_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rabi")
        return ProtocolSchedule::rabi({j.at("epsilon").get<double>(), j.at("T").get<double>()});
    if (kind == "lz") {
        const double tau = j.at("tau").get<double>();
        const double tau_z = j.contains("tau_Z") ? j.at("tau_Z").get<double>()
                                                 : j.at("T").get<double>() - 2.0 * tau;
        return ProtocolSchedule::lz(
            {j.at("epsilon").get<double>(), j.at("delta0").get<double>(), tau, tau_z});
    }
    if (kind == "static")
        return ProtocolSchedule::fixed({j.at("t1").get<double>(), j.at("t2").get<double>(),
                                        j.value("delta", 0.0), j.at("T").get<double>()});
    throw std::invalid_argument("unknown protocol kind '" + kind + "'");
}

inline json to_json(const DisorderRealization& d) {
    return {{"kind", to_string(d.kind)}, {"strength", d.strength}, {"seed", d.seed},
            {"index", d.index},          {"n_dimers", d.n_dimers}, {"values", d.values}};
}

inline DisorderRealization disorder_from_json(const json& j) {
    DisorderRealization d;
    d.kind = disorder_kind_from_string(j.at("kind").get<std::string>());
    d.strength = j.at("strength").get<double>();
    d.seed = j.at("seed").get<std::uint64_t>();
    d.index = j.at("index").get<std::uint64_t>();
    d.n_dimers = j.at("n_dimers").get<int>();
    d.values = j.at("values").get<std::vector<double>>();
    return d;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << std::setprecision(17);
    return out;
}

}  // namespace detail

/// Columns: t, p1, p2N, then one column per site when recorded.
inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = detail::open_out(path);
    out << "t,p1,p2N";
    if (!traj.site_occupations.empty())
        for (std::size_t i = 0; i < traj.site_occupations.front().size(); ++i)
            out << ",p" << (i + 1);
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << traj.times[k] << "," << traj.p_first[k] << "," << traj.p_last[k];
        if (!traj.site_occupations.empty())
            for (double occ : traj.site_occupations[k]) out << "," << occ;
        out << "\n";
    }
}

inline void write_samples_csv(const std::string& path, const std::vector<double>& samples) {
    auto out = detail::open_out(path);
    out << "realization,p2N\n";
    for (std::size_t k = 0; k < samples.size(); ++k) out << k << "," << samples[k] << "\n";
}

inline void write_histogram_csv(const std::string& path, const HistogramDensity& h) {
    auto out = detail::open_out(path);
    out << "bin_left,bin_right,density\n";
    for (std::size_t b = 0; b < h.density.size(); ++b)
        out << h.edges[b] << "," << h.edges[b + 1] << "," << h.density[b] << "\n";
}

inline json summary_json(const EnsembleResult& r) {
    return {{"mean", r.summary.mean},
            {"median", r.summary.median},
            {"fraction_above_0.9", r.summary.fraction_above_090},
            {"fraction_above_0.95", r.summary.fraction_above_095},
            {"realizations", r.config.realizations},
            {"seed", r.config.seed},
            {"bins", r.config.bins},
            {"n_dimers", r.config.n_dimers},
            {"disorder_kind", to_string(r.config.kind)},
            {"disorder_strength", r.config.strength},
            {"rng", "splitmix64(master seed, index) -> mt19937_64 substream per realization"}};
}

/// Matrix layout: first row carries the axis-2 grid, first column the
/// axis-1 grid; the top-left cell names both axes.
inline void write_sweep_csv(const std::string& path, const SweepResult& r) {
    auto out = detail::open_out(path);
    out << r.axis1.name << "\\" << r.axis2.name;
    for (double v : r.axis2.grid) out << "," << v;
    out << "\n";
    for (std::size_t i = 0; i < r.axis1.grid.size(); ++i) {
        out << r.axis1.grid[i];
        for (double p : r.p[i]) out << "," << p;
        out << "\n";
    }
}

inline json sweep_metadata_json(const SweepResult& r) {
    return {{"axis1", {{"name", r.axis1.name}, {"grid", r.axis1.grid}}},
            {"axis2", {{"name", r.axis2.name}, {"grid", r.axis2.grid}}}};
}

inline void write_scaling_csv(const std::string& path, const std::vector<ScalingPoint>& table) {
    auto out = detail::open_out(path);
    out << "sites,p2N,epsilon,delta0,tau,tau_Z,T\n";
    for (const auto& row : table)
        out << 2 * row.n_dimers << "," << row.p_transfer << "," << row.params.epsilon << ","
            << row.params.delta0 << "," << row.params.tau << "," << row.params.tau_z << ","
            << row.params.total_time() << "\n";
}

}  // namespace qst
