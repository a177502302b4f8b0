// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Every CSV starts with a '#'-prefixed JSON
// manifest holding the fully resolved parameters; JSON outputs carry
// schema_version. Exit codes: 0 ok, 2 usage, 3 numerical failure.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wgqed/wgqed.hpp"

namespace wgqed::cli {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

/// Accepts plain radians or multiples of pi: "1.2", "0.5pi", "-pi", "pi/2".
inline double parse_angle(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    auto number = [&](const std::string& part, double empty_value) {
        if (part.empty()) return empty_value;
        if (part == "-") return -empty_value;
        if (part == "+") return empty_value;
        std::size_t used = 0;
        const double v = std::stod(part, &used);
        if (used != part.size()) throw std::invalid_argument(text);
        return v;
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double value = nan;
    try {
        const auto at = s.find("pi");
        if (at == std::string::npos) {
            value = number(s, nan);
        } else {
            const double factor = number(s.substr(0, at), 1.0);
            const std::string rest = s.substr(at + 2);
            double divisor = 1.0;
            if (!rest.empty()) {
                if (rest[0] != '/') throw std::invalid_argument(text);
                divisor = number(rest.substr(1), nan);
            }
            value = factor * pi / divisor;
        }
    } catch (const std::logic_error&) {
        value = nan;
    }
    if (!std::isfinite(value)) {
        throw Error(ErrorKind::invalid_argument, "cannot parse angle '" + text + "'");
    }
    return value;
}

/// Worker count from WGQED_THREADS, default 1.
inline unsigned thread_count() {
    const char* env = std::getenv("WGQED_THREADS");
    if (!env || !*env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v <= 0) return std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(v);
}

/// Evaluates fn(0..count-1) on worker threads; results land in index order,
/// so output does not depend on the thread count.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline json manifest(const std::string& command, json params) {
    json m;
    m["schema_version"] = schema_version;
    m["command"] = command;
    m["params"] = std::move(params);
    m["seedless"] = true;
    return m;
}

struct Csv {
    json manifest;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os) const {
        os << "# " << manifest.dump() << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
            os << "\n";
        }
    }
};

inline Csv spectrum_csv(const TrapGeometry& geom, double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) {
        throw Error(ErrorKind::invalid_argument, "need points >= 2 and delta-max > delta-min");
    }
    const ConfigurationSet cfg = configurations(geom);
    Csv c;
    c.manifest = manifest("spectrum", {{"n", geom.n},
                                       {"klt", geom.klt},
                                       {"epsilon", geom.epsilon},
                                       {"delta_min", lo},
                                       {"delta_max", hi},
                                       {"points", points},
                                       {"theta_d0", cfg.theta_d0},
                                       {"theta_dplus", cfg.theta_dplus},
                                       {"theta_dminus", cfg.theta_dminus}});
    c.columns = {"delta", "t2_d0", "t2_dplus", "t2_dminus"};
    const std::vector<double> deltas = linspace(lo, hi, points);
    for (const SpectrumRow& r : spectrum(cfg, deltas)) {
        c.rows.push_back({r.delta, r.t2_d0, r.t2_dplus, r.t2_dminus});
    }
    return c;
}

inline Csv resolution_csv(double lo, double hi, int points) {
    Csv c;
    c.manifest = manifest("resolution", {{"delta_min", lo}, {"delta_max", hi}, {"points", points},
                                         {"klt", pi / 2.0}});
    c.columns = {"delta", "resolution"};
    const std::vector<double> deltas = linspace(lo, hi, points);
    for (const auto& [d, r] : resolution_curve(deltas)) c.rows.push_back({d, r});
    return c;
}

inline Csv pulse_csv(double ratio, double delta, double theta, bool oracle) {
    const PulseSpec p = make_pulse(ratio);
    AtomicOptions opt;
    opt.sample_dt = std::max(opt.sample_dt, p.duration() / 2000.0);
    const DynamicsResult d = solve_atomic(p, delta, theta, opt);
    json params = {{"ratio", ratio}, {"delta", delta}, {"theta", theta},
                   {"t2", d.t2},     {"t_end", d.t_end}};
    if (oracle) {
        const FieldGridResult g = solve_grid(p, delta, {0.0, theta});
        // Same horizon on both sides: the grid stops at its own t_final.
        const double atomic = ModalSolution(p, delta, theta).reflected(g.t_final);
        const double grid = g.n_ref / g.initial_norm;
        params["oracle"] = {{"t_final", g.t_final},
                            {"n_ref_atomic", atomic},
                            {"n_ref_grid", grid},
                            {"relative_difference", (grid - atomic) / atomic},
                            {"max_norm_drift", g.max_norm_drift},
                            {"initial_norm", g.initial_norm},
                            {"grid_points", g.omegas.size()}};
    }
    Csv c;
    c.manifest = manifest("pulse", std::move(params));
    c.columns = {"t", "re_ceg", "im_ceg", "re_cge", "im_cge", "n_ref"};
    for (std::size_t i = 0; i < d.times.size(); ++i) {
        c.rows.push_back({d.times[i], d.c_eg[i].real(), d.c_eg[i].imag(), d.c_ge[i].real(),
                          d.c_ge[i].imag(), d.n_ref[i]});
    }
    return c;
}

inline Csv herald_csv(const HeraldPlan& p, double cl_abs, double cl_phase,
                      const std::vector<double>& ratios, const HeraldOptions& opt) {
    const SuperpositionState s = superposition_from_polar(cl_abs, cl_phase);
    const TwoAtomState state = coherent_state(s.cL, s.cR);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] > 0.0) || (i > 0 && ratios[i] < ratios[i - 1])) {
            throw Error(ErrorKind::invalid_argument, "bandwidth ratios must be positive and sorted");
        }
    }
    const auto rows = parallel_map<FidelityRow>(ratios.size(), [&](std::size_t i) {
        const double r = ratios[i];
        const std::vector<double> one{r};
        return fidelity_vs_bandwidth(state, p, one, opt).front();
    });
    Csv c;
    c.manifest = manifest(
        "herald", {{"delta", p.delta},
                   {"n", p.n},
                   {"branch", p.branch},
                   {"klt", p.klt},
                   {"leak", p.leak},
                   {"cl_abs", cl_abs},
                   {"cl_phase", cl_phase},
                   {"route", opt.route == HeraldRoute::atomic ? "atomic" : "grid"},
                   {"frame", opt.reference == PhaseReference::first_atom ? "first-atom" : "lab"},
                   {"target", "(|LR>+|RL>)/sqrt2"},
                   {"fidelity", "root"}});
    c.columns = {"omega_ratio", "fidelity", "fidelity_initial", "p_reflect"};
    for (const FidelityRow& r : rows) {
        c.rows.push_back({r.omega_ratio, r.fidelity, r.fidelity_initial, r.p_reflect});
    }
    return c;
}

inline Csv bandwidth_csv(const HeraldPlan& p, const std::vector<double>& ratios) {
    const ConfigurationSet cfg = p.configurations();
    const auto rows = parallel_map<BandwidthRow>(ratios.size(), [&](std::size_t i) {
        const std::vector<double> one{ratios[i]};
        return transmission_vs_bandwidth(cfg, p.delta, one).front();
    });
    Csv c;
    c.manifest = manifest("bandwidth", {{"delta", p.delta}, {"n", p.n}, {"branch", p.branch},
                                        {"klt", p.klt}});
    c.columns = {"omega_ratio", "t2_d0", "t2_dplus", "t2_dminus"};
    for (const BandwidthRow& r : rows) c.rows.push_back({r.omega_ratio, r.t2_d0, r.t2_dplus, r.t2_dminus});
    return c;
}

inline Csv sensitivity_csv(int n, double eps_max, int steps, int p_steps, double delta) {
    if (steps < 1 || p_steps < 2) {
        throw Error(ErrorKind::invalid_argument, "need steps >= 1 and p-steps >= 2");
    }
    if (!(eps_max >= 0.0 && eps_max < pi / 4.0)) {
        throw Error(ErrorKind::invalid_argument, "eps-max must lie in [0, pi/4)");
    }
    const std::vector<double> eps =
        steps == 1 ? std::vector<double>{0.0} : linspace(-eps_max, eps_max, steps);
    const std::vector<double> ps = linspace(0.0, 0.25, p_steps);
    const auto rows = parallel_map<std::vector<double>>(eps.size(), [&](std::size_t i) {
        std::vector<double> row;
        for (double p : ps) row.push_back(inferred_product(p, eps[i], n, delta));
        return row;
    });
    Csv c;
    c.manifest = manifest("sensitivity", {{"n", n}, {"eps_max", eps_max}, {"steps", steps},
                                          {"p_steps", p_steps}, {"delta", delta}});
    c.columns = {"epsilon", "true_product", "inferred_product"};
    for (std::size_t i = 0; i < eps.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) c.rows.push_back({eps[i], ps[j], rows[i][j]});
    return c;
}

inline std::vector<double> log_ratios(double lo, double hi, int points) {
    std::vector<double> r;
    for (double e : linspace(std::log10(lo), std::log10(hi), points)) r.push_back(std::pow(10.0, e));
    return r;
}

/// Canonical figure data: file name -> table.
inline std::vector<std::pair<std::string, Csv>> reproduce(const std::string& figure) {
    std::vector<std::pair<std::string, Csv>> out;
    const HeraldPlan fig3_plan = plan(0.25, 1, 1);
    if (figure == "2") {
        out.emplace_back("fig2_resolution.csv", resolution_csv(-5.0, 5.0, 1001));
        out.emplace_back("fig2_spectrum.csv",
                         spectrum_csv(TrapGeometry{1, pi / 2.0, 0.0, 0.0}, -5.0, 5.0, 1001));
    } else if (figure == "3") {
        out.emplace_back("fig3_spectrum.csv",
                         spectrum_csv(TrapGeometry{1, fig3_plan.klt, 0.0, 0.0}, -2.0, 2.0, 401));
    } else if (figure == "4") {
        out.emplace_back("fig4_fidelity.csv",
                         herald_csv(fig3_plan, 1.0 / std::sqrt(2.0), 0.0, log_ratios(0.01, 10.0, 31),
                                    HeraldOptions{}));
    } else if (figure == "sm1") {
        for (int n : {1, 2, 5}) {
            out.emplace_back("sm1_n" + std::to_string(n) + ".csv",
                             sensitivity_csv(n, 0.2, 81, 51, default_sensitivity_delta));
        }
    } else if (figure == "sm2") {
        out.emplace_back("sm2_bandwidth.csv", bandwidth_csv(fig3_plan, log_ratios(0.01, 100.0, 41)));
    } else {
        throw Error(ErrorKind::invalid_argument, "unknown figure '" + figure + "'");
    }
    return out;
}

inline int fail(std::ostream& err, int code, const std::string& kind, const std::string& message) {
    json e = {{"schema_version", schema_version},
              {"error", kind},
              {"message", message},
              {"exit_code", code}};
    err << e.dump() << "\n";
    return code;
}

/// Runs one CLI invocation; argv[0] is the program name.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-photon scattering off two atoms in spatial superposition"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("-o,--out", out_path, "Write the result here instead of stdout");

    auto angle_option = [](CLI::App* sub, const std::string& name, std::string& target,
                           const std::string& help) {
        return sub->add_option(name, target, help + " (radians, or e.g. 0.5pi)")->capture_default_str();
    };

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "Transmission spectra of the three configurations");
    int sp_n = 1;
    std::string sp_klt = "0.5pi", sp_eps = "0";
    double sp_lo = -5.0, sp_hi = 5.0;
    int sp_points = 201;
    sp->add_option("--n", sp_n, "Initial well separation index")->capture_default_str();
    angle_option(sp, "--klt", sp_klt, "k l_t");
    angle_option(sp, "--eps", sp_eps, "Miscalibration epsilon");
    sp->add_option("--delta-min", sp_lo)->capture_default_str();
    sp->add_option("--delta-max", sp_hi)->capture_default_str();
    sp->add_option("--points", sp_points)->capture_default_str();

    // probe
    auto* pr = app.add_subcommand("probe", "Invert a transmission probability into weights");
    double pr_p = 0.0;
    int pr_n = 1;
    std::string pr_klt = "0.5pi", pr_eps = "0";
    double pr_delta = 2.2;
    pr->add_option("--p-trans", pr_p, "Measured transmission probability")->required();
    pr->add_option("--n", pr_n)->capture_default_str();
    angle_option(pr, "--klt", pr_klt, "k l_t");
    angle_option(pr, "--eps", pr_eps, "Miscalibration epsilon");
    pr->add_option("--delta", pr_delta)->capture_default_str();

    // phase
    auto* ph = app.add_subcommand("phase", "Relative phase from the two weight products");
    double ph_before = 0.0, ph_after = 0.0;
    ph->add_option("--product-before", ph_before)->required();
    ph->add_option("--product-after", ph_after)->required();

    // pulse
    auto* pu = app.add_subcommand("pulse", "Atomic dynamics under a square pulse");
    double pu_ratio = 1.0, pu_delta = 0.25;
    std::string pu_theta = "0.5pi";
    bool pu_oracle = false;
    pu->add_option("--ratio", pu_ratio, "Omega / gamma")->capture_default_str();
    pu->add_option("--delta", pu_delta)->capture_default_str();
    angle_option(pu, "--theta", pu_theta, "Configuration phase");
    pu->add_flag("--oracle", pu_oracle, "Cross-check against the field-grid solver");

    // herald
    auto* he = app.add_subcommand("herald", "Heralded fidelity versus bandwidth");
    double he_delta = 0.25;
    int he_n = 1;
    std::optional<int> he_branch;
    double he_cl = 1.0 / std::sqrt(2.0);
    std::string he_phase = "0";
    std::vector<double> he_ratios;
    std::string he_route = "atomic", he_frame = "first-atom";
    he->add_option("--delta", he_delta)->capture_default_str();
    he->add_option("--n", he_n)->capture_default_str();
    he->add_option("--branch", he_branch, "Default: branch with the smallest leak");
    he->add_option("--cl-abs", he_cl)->capture_default_str();
    angle_option(he, "--cl-phase", he_phase, "Relative phase of cR");
    he->add_option("--ratios", he_ratios, "Omega / gamma values (default 31 log-spaced in [0.01, 10])");
    he->add_option("--route", he_route)->check(CLI::IsMember({"atomic", "grid"}))->capture_default_str();
    he->add_option("--frame", he_frame)->check(CLI::IsMember({"first-atom", "lab"}))->capture_default_str();

    // sensitivity
    auto* se = app.add_subcommand("sensitivity", "Inferred weights under trap miscalibration");
    int se_n = 1, se_steps = 41, se_p_steps = 26;
    std::string se_eps = "0.1";
    double se_delta = default_sensitivity_delta;
    se->add_option("--n", se_n)->capture_default_str();
    angle_option(se, "--eps-max", se_eps, "Largest |epsilon|");
    se->add_option("--steps", se_steps, "Epsilon samples")->capture_default_str();
    se->add_option("--p-steps", se_p_steps, "True-product samples")->capture_default_str();
    se->add_option("--delta", se_delta)->capture_default_str();

    // reproduce
    auto* re = app.add_subcommand("reproduce", "Canonical figure data");
    std::string re_figure;
    std::string re_dir = ".";
    re->add_option("--figure", re_figure)->required()->check(CLI::IsMember({"2", "3", "4", "sm1", "sm2"}));
    re->add_option("--out-dir", re_dir)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) return fail(err, exit_usage, "io", "cannot open " + out_path);
        }
        std::ostream& os = out_path.empty() ? out : file;

        if (*sp) {
            spectrum_csv(TrapGeometry{sp_n, parse_angle(sp_klt), parse_angle(sp_eps), 0.0}, sp_lo,
                         sp_hi, sp_points)
                .write(os);
        } else if (*pr) {
            const ConfigurationSet cfg =
                configurations(TrapGeometry{pr_n, parse_angle(pr_klt), parse_angle(pr_eps), 0.0});
            const WeightInference w = invert_weights(pr_p, cfg, pr_delta);
            json j = manifest("probe", {{"p_trans", pr_p},
                                        {"n", pr_n},
                                        {"klt", parse_angle(pr_klt)},
                                        {"epsilon", parse_angle(pr_eps)},
                                        {"delta", pr_delta}});
            j["product"] = w.product;
            j["weights"] = {w.weights.first, w.weights.second};
            j["ambiguity"] = "|cL|^2 is either value; swapping cL and cR leaves the probe unchanged";
            os << j.dump(2) << "\n";
        } else if (*ph) {
            const PhaseInference r = extract_phase(ph_before, ph_after);
            json j = manifest("phase", {{"product_before", ph_before}, {"product_after", ph_after}});
            j["abs_cos"] = r.abs_cos;
            j["candidates"] = r.candidates;
            os << j.dump(2) << "\n";
        } else if (*pu) {
            pulse_csv(pu_ratio, pu_delta, parse_angle(pu_theta), pu_oracle).write(os);
        } else if (*he) {
            const HeraldPlan p = he_branch ? plan(he_delta, he_n, *he_branch) : best_plan(he_delta, he_n);
            HeraldOptions opt;
            opt.route = he_route == "grid" ? HeraldRoute::grid : HeraldRoute::atomic;
            opt.reference = he_frame == "lab" ? PhaseReference::lab : PhaseReference::first_atom;
            const std::vector<double> ratios = he_ratios.empty() ? log_ratios(0.01, 10.0, 31) : he_ratios;
            herald_csv(p, he_cl, parse_angle(he_phase), ratios, opt).write(os);
        } else if (*se) {
            sensitivity_csv(se_n, parse_angle(se_eps), se_steps, se_p_steps, se_delta).write(os);
        } else if (*re) {
            const auto files = reproduce(re_figure);
            std::filesystem::create_directories(re_dir);
            json j = manifest("reproduce", {{"figure", re_figure}, {"out_dir", re_dir}});
            j["files"] = json::array();
            for (const auto& [name, csv] : files) {
                const std::filesystem::path path = std::filesystem::path(re_dir) / name;
                std::ofstream f(path);
                if (!f) return fail(err, exit_usage, "io", "cannot write " + path.string());
                csv.write(f);
                j["files"].push_back(path.string());
            }
            os << j.dump(2) << "\n";
        }
        return exit_ok;
    } catch (const Error& e) {
        const int code = e.kind() == ErrorKind::invalid_argument ? exit_usage : exit_numerical;
        return fail(err, code, std::string(to_string(e.kind())), e.what());
    } catch (const std::exception& e) {
        return fail(err, exit_numerical, "internal", e.what());
    }
}

}  // namespace wgqed::cli
