#pragma once

/**
 * @brief Command-line front end: pauli, measure, evolve, distinguish,
 * nosignal, lindblad, scan.
 *
 * Exit codes: 0 success, 1 invalid input, 2 numerical failure (including a
 * failed distinguish/nosignal check). Tabular output is CSV whose first line
 * is "# " followed by a JSON header echoing the resolved configuration;
 * matrix and report output is JSON with the same header under "config".
 * With --out the result is written to a temporary file and renamed into place.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ptqm/ptqm.hpp"

namespace ptqm::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr double kNoSignallingTol = 1e-9;
inline constexpr double kDistinguishTol = 1e-10;
inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, "config '" + path + "' is not valid JSON: " + e.what());
    }
}

inline void require_keys(const json& j, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, where + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : required) known = known || item.key() == k;
        for (const char* k : optional) known = known || item.key() == k;
        if (!known) throw Error(ErrorCode::InvalidArgument, where + ": unknown key '" + item.key() + "'");
    }
    for (const char* k : required) {
        if (!j.contains(k)) throw Error(ErrorCode::InvalidArgument, where + ": missing key '" + std::string(k) + "'");
    }
}

inline double get_number(const json& j, const char* key, const std::string& where) {
    if (!j.at(key).is_number()) throw Error(ErrorCode::InvalidArgument, where + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline std::vector<double> get_reals(const json& j, const char* key, const std::string& where) {
    const json& a = j.at(key);
    if (!a.is_array()) throw Error(ErrorCode::InvalidArgument, where + ": '" + key + "' must be an array");
    std::vector<double> out;
    for (const json& x : a) {
        if (!x.is_number()) throw Error(ErrorCode::InvalidArgument, where + ": '" + key + "' must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

/**
 * Frame specification:
 *   {"type": "two_level", "xi": <rad>, "eta": <rad>}
 *   {"type": "orthonormal", "n": N}
 *   {"type": "matrix", "n": N, "u": [...], "v": [...]}   (serialized frame; "v" optional)
 */
inline FramePtr frame_from_spec(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw Error(ErrorCode::InvalidArgument, "frame: expected an object with a string 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "two_level") {
        require_keys(j, {"type", "xi", "eta"}, {}, "frame");
        return two_level::two_level_frame({get_number(j, "xi", "frame"), get_number(j, "eta", "frame")});
    }
    if (type == "orthonormal") {
        require_keys(j, {"type", "n"}, {}, "frame");
        if (!j.at("n").is_number_integer() || j.at("n").get<long long>() <= 0) {
            throw Error(ErrorCode::InvalidArgument, "frame: 'n' must be a positive integer");
        }
        return BiorthogonalFrame::orthonormal(static_cast<Eigen::Index>(j.at("n").get<long long>()));
    }
    if (type == "matrix") {
        json body = j;
        body.erase("type");
        return io::frame_from_json(body);
    }
    throw Error(ErrorCode::InvalidArgument, "frame: unknown type '" + type + "'");
}

inline json header(const std::string& command, const json& config) {
    return json{{"tool", "ptqm"}, {"version", kToolVersion}, {"command", command}, {"config", config}};
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    const std::filesystem::path target(out_path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
        f << text;
        f.flush();
        if (!f) throw Error(ErrorCode::InvalidArgument, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::InvalidArgument, "cannot rename output into '" + out_path + "': " + ec.message());
    }
}

inline std::string csv_with_header(const json& head, const std::string& body) {
    return "# " + head.dump() + "\n" + body;
}

}  // namespace detail

struct Options {
    std::string out;
    // pauli
    double xi = 0.0;
    double eta = 0.0;
    std::string axis;
    // config-driven commands
    std::string config;
    std::uint64_t seed = 0;
    std::uint64_t samples = 1000000;
    // lindblad / scan
    double kappa = 1.0;
    double gamma = 0.0;
    double tmax = 0.0;
    double dt = 0.0;
    std::size_t stride = 1;
    double gamma_min = 0.0;
    double gamma_max = 0.0;
    int steps = 0;
};

inline int cmd_pauli(const Options& o, std::ostream& out) {
    two_level::Axis axis = two_level::Axis::X;
    if (o.axis == "x") axis = two_level::Axis::X;
    else if (o.axis == "y") axis = two_level::Axis::Y;
    else if (o.axis == "z") axis = two_level::Axis::Z;
    else throw Error(ErrorCode::InvalidArgument, "pauli: axis must be x, y or z");

    const CMatrix m = two_level::pauli(axis, {o.xi, o.eta});
    json doc = detail::header("pauli", json{{"xi", o.xi}, {"eta", o.eta}, {"axis", o.axis}});
    doc["matrix"] = io::matrix_to_json(m);
    detail::emit(doc.dump(2) + "\n", o.out, out);
    return kExitOk;
}

inline int cmd_measure(const Options& o, std::ostream& out) {
    const json cfg = detail::read_json_file(o.config);
    detail::require_keys(cfg, {"frame", "f_array", "state"}, {"n_samples", "seed"}, "measure config");
    const FramePtr frame = detail::frame_from_spec(cfg.at("frame"));
    const ObservableRep obs(frame, io::matrix_from_json(cfg.at("f_array")));
    const StateCoeffs state(frame, io::vector_from_json(cfg.at("state")));

    json resolved = cfg;
    const std::uint64_t n = cfg.contains("n_samples") ? cfg.at("n_samples").get<std::uint64_t>() : o.samples;
    const std::uint64_t seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : o.seed;
    resolved["n_samples"] = n;
    resolved["seed"] = seed;

    const Outcomes outcomes = outcome_probabilities(obs, state);
    const auto counts = sample_counts(outcomes.probabilities, n, seed);
    std::string body = "eigenvalue,probability,count\n";
    for (std::size_t k = 0; k < counts.size(); ++k) {
        body += detail::num(outcomes.eigenvalues[k]) + "," + detail::num(outcomes.probabilities.p[k]) + "," +
                std::to_string(counts[k]) + "\n";
    }
    detail::emit(detail::csv_with_header(detail::header("measure", resolved), body), o.out, out);
    return kExitOk;
}

inline int cmd_evolve(const Options& o, std::ostream& out) {
    const json cfg = detail::read_json_file(o.config);
    detail::require_keys(cfg, {"frame", "energies", "state", "t_max", "steps"}, {}, "evolve config");
    const FramePtr frame = detail::frame_from_spec(cfg.at("frame"));
    const HamiltonianSpec h(frame, detail::get_reals(cfg, "energies", "evolve config"));
    const StateCoeffs s0(frame, io::vector_from_json(cfg.at("state")));
    const double t_max = detail::get_number(cfg, "t_max", "evolve config");
    if (!cfg.at("steps").is_number_integer() || cfg.at("steps").get<long long>() <= 0) {
        throw Error(ErrorCode::InvalidArgument, "evolve config: 'steps' must be a positive integer");
    }
    const auto steps = cfg.at("steps").get<long long>();

    std::string body = "t";
    for (Eigen::Index k = 1; k <= frame->dim(); ++k) {
        body += ",re_c" + std::to_string(k) + ",im_c" + std::to_string(k);
    }
    body += ",physical_norm\n";
    for (long long i = 0; i <= steps; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(steps);
        const StateCoeffs st = evolve(h, s0, t);
        body += detail::num(t);
        for (Eigen::Index k = 0; k < st.dim(); ++k) {
            body += "," + detail::num(st.coeffs()(k).real()) + "," + detail::num(st.coeffs()(k).imag());
        }
        body += "," + detail::num(physical_inner(st, st).real()) + "\n";
    }
    detail::emit(detail::csv_with_header(detail::header("evolve", cfg), body), o.out, out);
    return kExitOk;
}

inline int cmd_distinguish(const Options& o, std::ostream& out, std::ostream& err) {
    const json cfg = detail::read_json_file(o.config);
    detail::require_keys(cfg, {"frames", "f_array", "state"}, {}, "distinguish config");
    if (!cfg.at("frames").is_array() || cfg.at("frames").size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "distinguish config: 'frames' needs at least two entries");
    }
    const CMatrix f = io::matrix_from_json(cfg.at("f_array"));
    const CVector c = io::vector_from_json(cfg.at("state"));

    json resolved = cfg;
    resolved["seed"] = o.seed;
    resolved["n_samples"] = o.samples;
    json doc = detail::header("distinguish", resolved);
    doc["frames"] = json::array();

    std::vector<std::uint64_t> first_counts;
    std::vector<double> first_probs;
    bool identical = true;
    double spread = 0.0;
    for (const json& spec : cfg.at("frames")) {
        const FramePtr frame = detail::frame_from_spec(spec);
        const ObservableRep obs(frame, f);
        const Outcomes outcomes = outcome_probabilities(obs, StateCoeffs(frame, c));
        const auto counts = sample_counts(outcomes.probabilities, o.samples, o.seed);
        if (first_counts.empty()) {
            first_counts = counts;
            first_probs = outcomes.probabilities.p;
        } else if (counts.size() != first_counts.size()) {
            identical = false;
            spread = std::numeric_limits<double>::infinity();
        } else {
            identical = identical && counts == first_counts;
            for (std::size_t k = 0; k < counts.size(); ++k) {
                spread = std::max(spread, std::abs(outcomes.probabilities.p[k] - first_probs[k]));
            }
        }
        doc["frames"].push_back(json{{"frame", spec},
                                     {"eigenvalues", outcomes.eigenvalues},
                                     {"probabilities", outcomes.probabilities.p},
                                     {"counts", counts}});
    }
    const bool pass = identical && spread <= kDistinguishTol;
    doc["identical_counts"] = identical;
    doc["max_probability_spread"] = spread;
    doc["result"] = pass ? "PASS" : "FAIL";
    detail::emit(doc.dump(2) + "\n", o.out, out);
    err << (pass ? "PASS" : "FAIL") << " distinguish: identical_counts=" << (identical ? "true" : "false")
        << " max_probability_spread=" << detail::num(spread) << "\n";
    return pass ? kExitOk : kExitNumerical;
}

inline int cmd_nosignal(const Options& o, std::ostream& out, std::ostream& err) {
    const json cfg = detail::read_json_file(o.config);
    detail::require_keys(cfg, {"frame_a", "frame_b", "energies_a", "f_b", "state", "times"}, {}, "nosignal config");
    const CompositeFrame cf =
        tensor_frame(detail::frame_from_spec(cfg.at("frame_a")), detail::frame_from_spec(cfg.at("frame_b")));
    const HamiltonianSpec h_a(cf.a, detail::get_reals(cfg, "energies_a", "nosignal config"));
    const StateCoeffs joint(cf.joint, io::vector_from_json(cfg.at("state")));
    const CMatrix f_b = io::matrix_from_json(cfg.at("f_b"));
    const std::vector<double> times = detail::get_reals(cfg, "times", "nosignal config");

    const NoSignallingReport report = no_signalling_report(cf, joint, h_a, f_b, times);
    std::string body = "t,max_deviation\n";
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        body += detail::num(report.times[k]) + "," + detail::num(report.deviations[k]) + "\n";
    }
    detail::emit(detail::csv_with_header(detail::header("nosignal", cfg), body), o.out, out);
    const bool pass = report.max_deviation <= kNoSignallingTol;
    err << (pass ? "PASS" : "FAIL") << " nosignal: max_deviation=" << detail::num(report.max_deviation)
        << " tolerance=" << detail::num(kNoSignallingTol) << "\n";
    return pass ? kExitOk : kExitNumerical;
}

inline int cmd_lindblad(const Options& o, std::ostream& out) {
    using namespace open_system;
    const LindbladModel model = LindbladModel::balanced(o.kappa, o.gamma);
    const DensityMatrix rho0 = DensityMatrix::pure(Eigen::Vector2cd(1.0, 0.0));
    const Trajectory traj = evolve_density(model, rho0, o.tmax, o.dt, o.stride);

    const json cfg{{"kappa", o.kappa}, {"gamma", o.gamma}, {"tmax", o.tmax}, {"dt", o.dt},
                   {"stride", o.stride}, {"rho0", "|e1><e1|"}};
    std::string body = "t,x,y,z,purity\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const Eigen::Vector3d r = traj.rho[k].bloch();
        body += detail::num(traj.t[k]) + "," + detail::num(r.x()) + "," + detail::num(r.y()) + "," +
                detail::num(r.z()) + "," + detail::num(traj.rho[k].purity()) + "\n";
    }
    detail::emit(detail::csv_with_header(detail::header("lindblad", cfg), body), o.out, out);
    return kExitOk;
}

inline std::vector<double> gamma_grid(double lo, double hi, int steps) {
    if (steps < 2) throw Error(ErrorCode::InvalidArgument, "scan: steps must be at least 2");
    if (!(lo >= 0.0) || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "scan: need 0 <= gamma-min < gamma-max");
    std::vector<double> grid;
    for (int k = 0; k < steps; ++k) grid.push_back(lo + (hi - lo) * k / (steps - 1));
    return grid;
}

/// Integration time that lets the slowest mode of every grid point decay by e^-20.
inline double default_scan_tmax(double kappa, const std::vector<double>& grid) {
    double slowest = std::numeric_limits<double>::infinity();
    for (double g : grid) {
        const double gap = open_system::classify_regime(open_system::LindbladModel::balanced(kappa, g)).spectral_gap;
        if (gap > 0.0) slowest = std::min(slowest, gap);
    }
    return std::isfinite(slowest) ? std::max(20.0, 20.0 / slowest) : 20.0;
}

inline int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
    using namespace open_system;
    const std::vector<double> grid = gamma_grid(o.gamma_min, o.gamma_max, o.steps);
    const double dt = o.dt > 0.0 ? o.dt : 0.01 / std::max({o.kappa, o.gamma_max, 1.0});
    const double tmax = o.tmax > 0.0 ? o.tmax : default_scan_tmax(o.kappa, grid);
    const DensityMatrix rho0 = DensityMatrix::pure(Eigen::Vector2cd(1.0, 0.0));
    const std::vector<ScanRow> rows = regime_scan(o.kappa, grid, rho0, tmax, dt);

    const json cfg{{"kappa", o.kappa},   {"gamma_min", o.gamma_min}, {"gamma_max", o.gamma_max},
                   {"steps", o.steps},   {"tmax", tmax},             {"dt", dt},
                   {"rho0", "|e1><e1|"},
                   {"reference_lines", {{"classical_dimer_exceptional_point", o.kappa},
                                        {"lindblad_spectral_transition", 4.0 * o.kappa}}}};
    std::string body = "gamma,label,max_im_eig,osc_flag\n";
    for (const ScanRow& r : rows) {
        body += detail::num(r.gamma) + "," + std::string(to_string(r.regime.label)) + "," +
                detail::num(r.regime.max_im_eig) + "," + (r.osc_flag ? "1" : "0") + "\n";
    }
    detail::emit(detail::csv_with_header(detail::header("scan", cfg), body), o.out, out);

    const int idx = single_transition_index(rows);
    if (idx > 0) {
        err << "transition between gamma=" << detail::num(rows[static_cast<std::size_t>(idx) - 1].gamma)
            << " and gamma=" << detail::num(rows[static_cast<std::size_t>(idx)].gamma) << "\n";
    } else {
        err << "no single oscillatory->overdamped transition on this grid\n";
    }
    return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Biorthogonal quantum mechanics toolkit", "ptqm"};
    app.require_subcommand(1);
    Options o;

    auto* pauli = app.add_subcommand("pauli", "Extended Pauli matrix of a two-level frame (JSON)");
    pauli->add_option("--xi", o.xi, "Frame angle xi in radians")->required();
    pauli->add_option("--eta", o.eta, "Frame phase eta in radians")->required();
    pauli->add_option("--axis", o.axis, "x, y or z")->required();
    pauli->add_option("--out", o.out, "Output file");

    auto* measure = app.add_subcommand("measure", "Outcome probabilities and sampled counts (CSV)");
    measure->add_option("--config", o.config, "JSON config")->required();
    measure->add_option("--seed", o.seed, "Seed used when the config has none");
    measure->add_option("--samples", o.samples, "Sample count used when the config has none");
    measure->add_option("--out", o.out, "Output file");

    auto* evolve_cmd = app.add_subcommand("evolve", "Coefficient trajectory and physical norm (CSV)");
    evolve_cmd->add_option("--config", o.config, "JSON config")->required();
    evolve_cmd->add_option("--out", o.out, "Output file");

    auto* distinguish = app.add_subcommand("distinguish", "Sample one observable in several frames (JSON)");
    distinguish->add_option("--config", o.config, "JSON config")->required();
    distinguish->add_option("--seed", o.seed, "Sampler seed");
    distinguish->add_option("--samples", o.samples, "Samples per frame");
    distinguish->add_option("--out", o.out, "Output file");

    auto* nosignal = app.add_subcommand("nosignal", "B-side statistics under local evolution on A (CSV)");
    nosignal->add_option("--config", o.config, "JSON config")->required();
    nosignal->add_option("--out", o.out, "Output file");

    auto* lindblad = app.add_subcommand("lindblad", "Balanced gain/loss qubit trajectory (CSV)");
    lindblad->add_option("--kappa", o.kappa, "Drive strength")->required();
    lindblad->add_option("--gamma", o.gamma, "Gain and loss rate")->required();
    lindblad->add_option("--tmax", o.tmax, "Final time")->required();
    lindblad->add_option("--dt", o.dt, "Step size, at most 0.01/max(kappa, gamma, 1)")->required();
    lindblad->add_option("--stride", o.stride, "Write every n-th step");
    lindblad->add_option("--out", o.out, "Output file");

    auto* scan = app.add_subcommand("scan", "Regime classification over a gamma grid (CSV)");
    scan->add_option("--kappa", o.kappa, "Drive strength")->required();
    scan->add_option("--gamma-min", o.gamma_min, "Smallest gamma")->required();
    scan->add_option("--gamma-max", o.gamma_max, "Largest gamma")->required();
    scan->add_option("--steps", o.steps, "Number of grid points")->required();
    scan->add_option("--tmax", o.tmax, "Trajectory length (default: slowest mode decays by e^-20)");
    scan->add_option("--dt", o.dt, "Step size (default: 0.01/max(kappa, gamma-max, 1))");
    scan->add_option("--out", o.out, "Output file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        if (pauli->parsed()) return cmd_pauli(o, out);
        if (measure->parsed()) return cmd_measure(o, out);
        if (evolve_cmd->parsed()) return cmd_evolve(o, out);
        if (distinguish->parsed()) return cmd_distinguish(o, out, err);
        if (nosignal->parsed()) return cmd_nosignal(o, out, err);
        if (lindblad->parsed()) return cmd_lindblad(o, out);
        if (scan->parsed()) return cmd_scan(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e.code()) ? kExitInvalid : kExitNumerical;
    } catch (const json::exception& e) {
        err << "error: malformed config: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitInvalid;
}

}  // namespace ptqm::cli
