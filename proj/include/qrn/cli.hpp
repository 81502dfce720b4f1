// Copyright 2026 The qrn Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrn/hybrid.hpp"
#include "qrn/link.hpp"
#include "qrn/pipeline.hpp"
#include "qrn/purification.hpp"
#include "qrn/topo/threshold.hpp"

namespace qrn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;

/// Thrown for infeasible plans; carries the explanation.
struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string fmt_g(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

/// "lo:hi:step" (inclusive) or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
        return v;
    };
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<std::string> parts;
            std::stringstream ss(text);
            for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
            if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:step");
            const double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
            if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range must have lo <= hi and step > 0");
            const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
            for (long i = 0; i < n; ++i) {
                // Round to 12 significant digits so 0.005 + 2 * 0.001 prints as 0.007.
                out.push_back(std::stod(fmt_g(lo + static_cast<double>(i) * step)));
            }
        } else {
            std::stringstream ss(text);
            for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
        }
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("cannot parse grid '" + text + "': " + e.what());
    }
    if (out.empty()) throw std::invalid_argument("empty grid '" + text + "'");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        if (v != std::floor(v)) throw std::invalid_argument("expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

/// Single-qubit input label: 0, 1, +, -, +i, -i.
inline std::array<hybrid::cd, 2> parse_qubit_label(const std::string& s) {
    const double r = 1.0 / std::sqrt(2.0);
    if (s == "0") return {1.0, 0.0};
    if (s == "1") return {0.0, 1.0};
    if (s == "+") return {r, r};
    if (s == "-") return {r, -r};
    if (s == "+i") return {r, hybrid::cd(0.0, r)};
    if (s == "-i") return {r, hybrid::cd(0.0, -r)};
    throw std::invalid_argument("qubit label must be one of 0, 1, +, -, +i, -i");
}

/// Where a subcommand writes its data, and in which format.
struct Output {
    std::string path;
    std::string format = "csv";
};

inline std::ostream& open_output(const Output& out, std::ofstream& file, std::ostream& fallback) {
    if (out.path.empty()) return fallback;
    file.open(out.path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + out.path + " for writing");
    return file;
}

inline nlohmann::json to_json(const purify::PurificationResult& r) {
    return {{"F_out", r.fidelity()},
            {"F_out_stderr", r.fidelity_stderr},
            {"acceptance", r.acceptance},
            {"acceptance_stderr", r.acceptance_stderr},
            {"trials", r.trials},
            {"accepted", r.accepted},
            {"bell", {r.output.p_i, r.output.p_x, r.output.p_y, r.output.p_z}}};
}

inline nlohmann::json to_json(const topo::ThresholdEstimate& est) {
    nlohmann::json j;
    j["l_prime"] = est.model.l_prime;
    j["p_prep"] = est.model.p_prep;
    j["p_meas"] = est.model.p_meas;
    j["d"] = est.d_list;
    j["p_grid"] = est.p_grid;
    j["trials"] = est.trials;
    j["seed"] = est.seed;
    j["threshold"] = est.threshold ? nlohmann::json(*est.threshold) : nlohmann::json(nullptr);
    j["ci"] = {est.ci.low, est.ci.high};
    j["crossings"] = est.crossings;
    j["bootstrap_samples"] = est.bootstrap_samples;
    j["bootstrap_defined"] = est.bootstrap_defined;
    for (const auto& [d, c] : est.fits) j["fits"][std::to_string(d)] = {c[0], c[1], c[2]};
    for (const auto& p : est.points) {
        j["points"].push_back({{"d", p.d}, {"p_cz", p.model.p_cz}, {"trials", p.trials}, {"failures", p.failures},
                               {"rate", p.rate()}, {"ci", {p.ci.low, p.ci.high}}});
    }
    return j;
}

inline nlohmann::json to_json(const pipeline::PlanResult& p) {
    nlohmann::json j{{"feasible", p.feasible}, {"strategy", p.plan.label()}, {"rounds", p.plan.rounds},
                     {"code", p.plan.code}, {"target_F", p.target_F}, {"min_qubits", p.plan.min_qubits()}};
    for (const auto& r : p.rounds) j["per_round"].push_back({{"F_out", r.fidelity}, {"acceptance", r.acceptance}});
    if (!p.reason.empty()) j["reason"] = p.reason;
    return j;
}

namespace detail {

inline void add_output_options(CLI::App* sub, Output& out, std::vector<std::string> formats = {"csv", "json"}) {
    sub->add_option("--out", out.path, "Output file (stdout when omitted)");
    sub->add_option("--format", out.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
}

/// Summary goes to stdout when the data went to a file, else to stderr.
inline std::ostream& summary_stream(const Output& out, std::ostream& os, std::ostream& es) {
    return out.path.empty() ? es : os;
}

inline void require_trials(std::uint64_t trials, std::uint64_t minimum, const char* what) {
    if (trials < minimum) {
        throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(minimum) + " trials");
    }
}

}  // namespace detail

struct LinkOptions {
    link::LinkParams params;
    std::string mode = "dual";
    std::uint64_t q_tx = 16;
    std::uint64_t q_rx = 1;
    bool bidirectional = false;
    double windows = 1.0;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    Output out;
};

inline void run_link(const LinkOptions& o, std::ostream& os, std::ostream& es) {
    const auto mode = o.mode == "single" ? link::HeraldMode::Single : link::HeraldMode::Dual;
    if (mode == link::HeraldMode::Dual && std::abs(o.params.theta_rad - std::numbers::pi) > 1e-12) {
        throw std::invalid_argument("dual-herald mode needs theta = pi; use --herald single");
    }
    const double p_link = link::success_probability(o.params, mode);
    const link::MultiplexConfig mux{o.q_tx, o.q_rx, o.bidirectional};
    mux.validate();
    struct Acc {
        std::uint64_t pairs = 0;
        std::uint64_t empty = 0;
    };
    const auto acc = run_trials(
        o.trials, Acc{},
        [&](Acc& a, std::uint64_t t) {
            Rng rng(o.seed, t);
            const auto n = link::sample_round_trip(mux, p_link, rng);
            a.pairs += n;
            a.empty += n == 0;
        },
        [](Acc& total, const Acc& part) {
            total.pairs += part.pairs;
            total.empty += part.empty;
        });
    const double mean = static_cast<double>(acc.pairs) / static_cast<double>(o.trials);
    const double dark = link::dark_count_acceptance_error(o.params.dark_count_prob, p_link, o.windows);
    const auto branches = link::simulate_herald_protocol(o.params.theta_rad);

    const Output& out = o.out;
    std::ofstream file;
    std::ostream& data = open_output(out, file, os);
    if (out.format == "json") {
        nlohmann::json j;
        j["params"] = {{"p_single", o.params.p_single}, {"p_coupling", o.params.p_coupling},
                       {"p_detector", o.params.p_detector}, {"length_km", o.params.length_km},
                       {"attenuation_km", o.params.attenuation_km}, {"theta_rad", o.params.theta_rad},
                       {"dark_count_prob", o.params.dark_count_prob}, {"herald", o.mode}};
        j["success_probability"] = p_link;
        j["herald_factor"] = link::herald_factor(o.params.theta_rad, mode);
        for (const auto& b : branches) {
            j["branches"].push_back({{"outcome", static_cast<int>(b.outcome)}, {"probability", b.probability},
                                     {"bell_fidelity", b.bell_fidelity}, {"phi_plus_fidelity", b.phi_plus_fidelity},
                                     {"psi_plus_fidelity", b.psi_plus_fidelity}});
        }
        j["dark_count_error"] = dark;
        j["fidelity_ceiling"] = link::dark_count_fidelity_ceiling(dark);
        j["multiplex"] = {{"q_tx", o.q_tx}, {"q_rx", o.q_rx}, {"bidirectional", o.bidirectional},
                          {"trials", o.trials}, {"seed", o.seed}, {"mean_pairs", mean},
                          {"p_no_pair", static_cast<double>(acc.empty) / static_cast<double>(o.trials)}};
        data << j.dump(2) << '\n';
    } else {
        data << "quantity,value\n";
        data << "success_probability," << fmt_g(p_link) << '\n';
        data << "herald_factor," << fmt_g(link::herald_factor(o.params.theta_rad, mode)) << '\n';
        for (std::size_t i = 0; i < branches.size(); ++i) {
            data << "branch" << i << "_probability," << fmt_g(branches[i].probability) << '\n';
            data << "branch" << i << "_bell_fidelity," << fmt_g(branches[i].bell_fidelity) << '\n';
        }
        data << "dark_count_error," << fmt_g(dark) << '\n';
        data << "mean_pairs_per_round_trip," << fmt_g(mean) << '\n';
        data << "p_no_pair," << fmt_g(static_cast<double>(acc.empty) / static_cast<double>(o.trials)) << '\n';
    }
    detail::summary_stream(out, os, es) << "link: p_link=" << fmt_g(p_link, 6) << " mean pairs/round trip="
                                        << fmt_g(mean, 6) << " dark-count error=" << fmt_g(dark, 6) << '\n';
}

struct PurifyOptions {
    std::string code = "513";
    std::string mode = "ed";
    std::string F = "0.9";
    double p_local = 0.001;
    std::optional<double> p_prep;
    std::optional<double> p_meas;
    int rounds = 1;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    Output out;
};

inline void run_purify(const PurifyOptions& o, std::ostream& os, std::ostream& es) {
    detail::require_trials(o.trials, purify::kMinMonteCarloTrials, "purify");
    const purify::PurificationProtocol proto{StabilizerCode::by_name(o.code), purify::parse_mode(o.mode), o.rounds};
    proto.validate();
    const purify::NoiseModel noise{o.p_local, o.p_prep.value_or(o.p_local), o.p_meas.value_or(o.p_local)};
    noise.validate();
    const auto grid = parse_grid(o.F);
    for (double F : grid) require_probability(F, "F");
    const Output& out = o.out;
    std::ofstream file;
    std::ostream& data = open_output(out, file, os);
    nlohmann::json j;
    if (out.format == "csv") purify::write_csv_header(data);
    std::string last;
    for (double F : grid) {
        const auto reports = purify::iterate_rounds(proto, F, noise, o.trials, o.seed);
        for (const auto& rep : reports) {
            auto shown = proto;
            shown.rounds = rep.round;
            if (out.format == "csv") {
                purify::write_csv_row(data, F, rep.result, shown, o.p_local, o.seed);
            } else {
                auto row = to_json(rep.result);
                row["F_in"] = F;
                row["round"] = rep.round;
                row["cumulative_acceptance"] = rep.cumulative_acceptance;
                j["results"].push_back(row);
            }
        }
        const auto& r = reports.back().result;
        last = "F=" + fmt_g(F, 6) + " -> F'=" + fmt_g(r.fidelity(), 6) + " +- " + fmt_g(r.fidelity_stderr, 2) +
               ", acceptance " + fmt_g(r.acceptance, 6);
    }
    if (out.format == "json") {
        j["code"] = o.code;
        j["mode"] = o.mode;
        j["rounds"] = o.rounds;
        j["noise"] = {{"p_local", noise.p_local}, {"p_prep", noise.p_prep}, {"p_meas", noise.p_meas}};
        j["trials"] = o.trials;
        j["seed"] = o.seed;
        data << j.dump(2) << '\n';
    }
    detail::summary_stream(out, os, es) << "purify " << o.code << ' ' << o.mode << " x" << o.rounds << ": " << last
                                        << '\n';
}

struct ThresholdOptions {
    std::string d = "3,5,7";
    std::string p_cz = "0.005:0.010:0.001";
    double p_prep = 0.001;
    double p_meas = 0.001;
    double l_prime = 0.0;
    std::uint64_t trials = 20'000;
    std::uint64_t seed = 7;
    std::string json_path;
    bool quiet = false;
    Output out;
};

inline void run_threshold(const ThresholdOptions& o, std::ostream& os, std::ostream& es) {
    detail::require_trials(o.trials, topo::kMinTopoTrials, "threshold");
    topo::TopoErrorModel family;
    family.p_prep = o.p_prep;
    family.p_meas = o.p_meas;
    family.l_prime = o.l_prime;
    family.validate();
    const auto d_list = parse_int_list(o.d);
    const auto grid = parse_grid(o.p_cz);
    const auto est = topo::estimate_threshold(family, d_list, grid, o.trials, o.seed, [&](const topo::RateEstimate& r) {
        if (!o.quiet) es << "  d=" << r.d << " p_cz=" << fmt_g(r.model.p_cz, 6) << " rate=" << fmt_g(r.rate(), 6) << '\n';
    });
    const Output& out = o.out;
    std::ofstream file;
    std::ostream& data = open_output(out, file, os);
    const auto report = to_json(est);
    if (out.format == "json") {
        data << report.dump(2) << '\n';
    } else {
        topo::write_rate_csv_header(data);
        for (const auto& p : est.points) topo::write_rate_csv_row(data, p);
    }
    if (!o.json_path.empty()) {
        std::ofstream f(o.json_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + o.json_path + " for writing");
        f << report.dump(2) << '\n';
    }
    auto& s = detail::summary_stream(out, os, es);
    if (est.threshold) {
        s << "threshold (l'=" << fmt_g(o.l_prime, 4) << "): " << fmt_g(*est.threshold, 5) << " [" << fmt_g(est.ci.low, 5)
          << ", " << fmt_g(est.ci.high, 5) << "]\n";
    } else {
        s << "threshold (l'=" << fmt_g(o.l_prime, 4) << "): no crossing inside the grid\n";
    }
}

/// Threshold source shared by plan and table1: a constant or JSON reports.
struct ThresholdSource {
    std::optional<double> constant;
    std::vector<std::string> files;

    std::optional<pipeline::ThresholdCurve> curve() const {
        if (constant && !files.empty()) throw std::invalid_argument("give either --threshold or --threshold-file");
        if (constant) return pipeline::ThresholdCurve::constant(*constant);
        if (files.empty()) return std::nullopt;
        std::vector<std::pair<double, double>> pts;
        for (const auto& path : files) {
            std::ifstream f(path);
            if (!f) throw std::invalid_argument("cannot read threshold file " + path);
            const auto c = pipeline::ThresholdCurve::from_json(nlohmann::json::parse(f));
            pts.insert(pts.end(), c.points().begin(), c.points().end());
        }
        return pipeline::ThresholdCurve(std::move(pts));
    }
};

struct PlanOptions {
    double F = 0.907;
    pipeline::NodeConfig node{16, 0.0008, 0.0, std::nullopt};
    std::string strategy;
    pipeline::NetworkConfig net;
    ThresholdSource threshold;
    double default_threshold = 0.0083;
    std::optional<double> target_F;
    double safety = pipeline::kDefaultSafetyFactor;
    bool no_local = false;
    double percentile = 99.0;
    std::uint64_t purify_trials = 200'000;
    std::uint64_t schedule_trials = 20'000;
    std::uint64_t seed = 1;
    Output out;
};

/// "1x513", "2x412" or "raw".
inline pipeline::Plan parse_strategy(const std::string& s) {
    if (s == "raw") return {"412", 0};
    const auto x = s.find('x');
    if (x == std::string::npos) throw std::invalid_argument("strategy must look like 2x412 or 1x513");
    const std::string code = s.substr(x + 1);
    if (code != "412" && code != "513") throw std::invalid_argument("strategy code must be 412 or 513");
    const int rounds = std::stoi(s.substr(0, x));
    if (rounds < 1) throw std::invalid_argument("strategy needs at least one round");
    return {code, rounds};
}

inline void run_plan(const PlanOptions& o, std::ostream& os, std::ostream& es) {
    require_probability(o.F, "F");
    pipeline::NodeConfig node = o.node;
    if (!o.strategy.empty()) node.strategy = parse_strategy(o.strategy);
    double target = 0.0;
    if (o.target_F) {
        target = *o.target_F;
    } else {
        auto curve = o.threshold.curve();
        if (!curve) curve = pipeline::ThresholdCurve::constant(o.default_threshold);
        target = pipeline::node_target_fidelity(node, *curve, o.safety, !o.no_local);
    }
    pipeline::EvaluateOptions eo;
    eo.purify_trials = o.purify_trials;
    eo.schedule_trials = o.schedule_trials;
    eo.seed = o.seed;
    eo.percentile = o.percentile;
    const auto rep = pipeline::evaluate(node, o.net, o.F, target, eo);

    const Output& out = o.out;
    std::ofstream file;
    std::ostream& data = open_output(out, file, os);
    if (out.format == "json") {
        nlohmann::json j;
        j["F_in"] = o.F;
        j["q"] = node.q;
        j["p_local"] = node.p_local;
        j["l_prime"] = node.l_prime_budget;
        j["plan"] = to_json(rep.plan);
        j["target_F"] = rep.target_F;
        j["budget_rule"] = {{"safety", o.safety}, {"local_contribution", o.no_local ? 0.0 : pipeline::teleported_gate_local_error(node.p_local)}};
        if (rep.plan.feasible) {
            j["N_R"] = rep.N_R;
            j["N_R_percentile"] = o.percentile;
            j["N_R_mean"] = rep.schedule.mean_NR;
            j["R_hz"] = rep.R_hz;
            j["memory_budget_ms"] = rep.memory_budget_ms;
            j["schedule_trials"] = rep.schedule.trials;
            j["N_R_counts_classical_round_trips"] = true;
        }
        data << j.dump(2) << '\n';
    } else {
        data << "F_in,q,p_local,l_prime,target_F,strategy,F_out,feasible,N_R,R_hz,memory_budget_ms\n";
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.6g,%d,%.6g,%.6g,%.8f,%s,%.8f,%d,", o.F, node.q, node.p_local,
                      node.l_prime_budget, rep.target_F, rep.plan.plan.label().c_str(),
                      rep.plan.output_fidelity(o.F), rep.plan.feasible ? 1 : 0);
        data << buf;
        if (rep.plan.feasible) {
            std::snprintf(buf, sizeof buf, "%.0f,%.3f,%.3f\n", rep.N_R, rep.R_hz, rep.memory_budget_ms);
        } else {
            std::snprintf(buf, sizeof buf, ",,\n");
        }
        data << buf;
    }
    if (!rep.plan.feasible) throw Infeasible("plan infeasible: " + rep.plan.reason);
    detail::summary_stream(out, os, es) << "plan: " << rep.plan.plan.label() << " F'=" << fmt_g(rep.plan.output_fidelity(o.F), 6)
                                        << " >= " << fmt_g(rep.target_F, 6) << ", N_R=" << rep.N_R
                                        << ", R=" << fmt_g(rep.R_hz, 5) << " Hz\n";
}

struct HybridOptions {
    double g_e = 7.0;
    double mu_B = 14e9;  // Hz/T
    double I_p = 1e-6;
    double R = 0.5e-6;
    double N = 62'500;
    double g_qb_res_hz = 50e6;
    double delta_hz = 500e6;
    std::string mode = "effective";
    std::string switching = "adiabatic";
    std::string a = "+";
    std::string b = "+";
    bool cnot = false;
    int ensemble_levels = 2;
    int resonator_levels = 2;
    Output out{"", "json"};
};

inline void run_hybrid(const HybridOptions& o, std::ostream& os, std::ostream& es) {
    const auto c = hybrid::estimate_couplings(o.g_e, o.mu_B, o.I_p, o.R, o.N, o.g_qb_res_hz, o.delta_hz);
    hybrid::CzParams p;
    p.g_ens = hybrid::kTwoPi * c.g_ens_hz;
    p.g_qb_res = hybrid::kTwoPi * o.g_qb_res_hz;
    p.delta = hybrid::kTwoPi * o.delta_hz;
    p.cnot = o.cnot;
    p.ensemble_levels = o.ensemble_levels;
    p.resonator_levels = o.resonator_levels;
    const auto mode = o.mode == "full" ? hybrid::EvolveMode::Full : hybrid::EvolveMode::Effective;
    if (mode == hybrid::EvolveMode::Full && p.resonator_levels < 3) p.resonator_levels = 3;
    const hybrid::EvolveOptions eo{o.switching == "sudden" ? hybrid::Switching::Sudden : hybrid::Switching::Adiabatic, 0.0};
    const auto a = parse_qubit_label(o.a), b = parse_qubit_label(o.b);
    const auto r = hybrid::cz_sequence(a[0], a[1], b[0], b[1], p, mode, eo);
    const auto cal_ens = hybrid::iswap_calibration(p.g_ens);
    const auto cal_qr = hybrid::iswap_calibration(p.g_qb_res);

    const Output& out = o.out;
    std::ofstream file;
    std::ostream& data = open_output(out, file, os);
    nlohmann::json j;
    j["inputs"] = {{"a", o.a}, {"b", o.b}, {"gate", o.cnot ? "cnot" : "cz"}, {"mode", o.mode}, {"switching", o.switching},
                   {"g_e", o.g_e}, {"mu_B_hz_per_tesla", o.mu_B}, {"I_p_amp", o.I_p}, {"R_m", o.R}, {"N", o.N},
                   {"g_qb_res_hz", o.g_qb_res_hz}, {"delta_hz", o.delta_hz},
                   {"ensemble_levels", p.ensemble_levels}, {"resonator_levels", p.resonator_levels}};
    j["couplings"] = {{"B_tesla", c.B_tesla}, {"g_single_hz", c.g_single_hz}, {"g_ens_hz", c.g_ens_hz},
                      {"chi_hz", o.g_qb_res_hz * o.g_qb_res_hz / o.delta_hz}};
    j["timings"] = {{"t_swap_s", c.t_swap_s}, {"t_sw_s", c.t_sw_s}, {"t_disp_s", c.t_disp_s},
                    {"t_swap_calibrated_s", cal_ens.calibrated_s}, {"t_sw_calibrated_s", cal_qr.calibrated_s},
                    {"gate_s", 2.0 * cal_ens.calibrated_s + 2.0 * cal_qr.calibrated_s + c.t_disp_s}};
    j["fidelity"] = r.fidelity;
    j["ancilla_populations"] = {{"ground", r.ancilla_ground}, {"fq1_excited", r.ancilla_excited[0]},
                                {"res_excited", r.ancilla_excited[1]}, {"fq2_excited", r.ancilla_excited[2]}};
    if (out.format == "json") {
        data << j.dump(2) << '\n';
    } else {
        data << "quantity,value\n";
        for (const char* sec : {"couplings", "timings", "ancilla_populations"}) {
            for (const auto& [k, v] : j[sec].items()) data << k << ',' << fmt_g(v.get<double>()) << '\n';
        }
        data << "fidelity," << fmt_g(r.fidelity) << '\n';
    }
    detail::summary_stream(out, os, es) << "hybrid " << (o.cnot ? "cnot" : "cz") << " (" << o.mode
                                        << "): fidelity=" << fmt_g(r.fidelity, 10) << " g/2pi=" << fmt_g(c.g_single_hz, 4)
                                        << " Hz g_ens/2pi=" << fmt_g(c.g_ens_hz, 4) << " Hz\n";
}

struct Table1Options {
    pipeline::TableOptions table;
    pipeline::NetworkConfig net;
    ThresholdSource threshold;
    bool no_local = false;
    std::string qs = "5,16,32,64";
    Output out;
};

inline void run_table1(Table1Options o, std::ostream& os, std::ostream& es) {
    o.table.curve = o.threshold.curve();
    o.table.include_local_contribution = !o.no_local;
    const auto table = pipeline::table_report(pipeline::reference_table_columns(), parse_int_list(o.qs), o.net, o.table);
    const Output& out = o.out;
    std::ofstream file;
    std::ostream& data = open_output(out, file, os);
    if (out.format == "csv") {
        pipeline::write_table_csv(data, table, o.net);
    } else if (out.format == "text") {
        pipeline::write_table_text(data, table);
    } else {
        nlohmann::json j;
        for (const auto& col : table) {
            nlohmann::json jc{{"F", col.column.F}, {"p_local", col.column.p_local}, {"l_prime", col.column.l_prime},
                              {"plan", to_json(col.plan)}};
            for (const auto& cell : col.cells) {
                jc["cells"].push_back({{"q", cell.q}, {"feasible", cell.feasible}, {"N_R", cell.N_R},
                                       {"text", cell.text()}, {"percentile", cell.percentile}});
            }
            j["columns"].push_back(jc);
        }
        j["round_trip_ms"] = o.net.round_trip_ms;
        j["p_raw"] = o.net.p_raw;
        data << j.dump(2) << '\n';
    }
    if (out.format != "text" || !out.path.empty()) {
        auto& s = detail::summary_stream(out, os, es);
        s << "table1: " << table.size() << " columns x " << (table.empty() ? 0 : table.front().cells.size()) << " rows";
        for (const auto& col : table) {
            if (std::abs(col.column.F - 0.907) < 1e-9) {
                for (const auto& cell : col.cells) s << (cell.q == 16 || cell.q == 64 ? " q=" + std::to_string(cell.q) + ":" + cell.text() : "");
            }
        }
        s << '\n';
    }
}

/// Parses argv, runs one subcommand and returns the exit code. Data goes to
/// `os` (or --out); diagnostics and progress go to `es`.
inline int run(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
    CLI::App app{"Repeater-network simulations: heralded links, purification, cluster-state threshold, "
                 "round-trip planning and a hybrid node gate.",
                 "qrn"};
    app.set_config("--config", "", "INI file with one [section] per subcommand; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    LinkOptions lo;
    auto* link = app.add_subcommand(
        "link", "Heralded entanglement between neighbouring nodes: success probability, herald branches, dark counts "
                "and multiplexed pairs per round trip (analog of the link-layer success formula and the multiplexing "
                "figure).");
    link->add_option("--p-single", lo.params.p_single, "Single-photon source efficiency")->capture_default_str();
    link->add_option("--p-coupling", lo.params.p_coupling, "Cavity coupling efficiency")->capture_default_str();
    link->add_option("--p-detector", lo.params.p_detector, "Detector efficiency")->capture_default_str();
    link->add_option("--length-km", lo.params.length_km, "Fiber length")->capture_default_str();
    link->add_option("--attenuation-km", lo.params.attenuation_km, "Attenuation length")->capture_default_str();
    link->add_option("--theta", lo.params.theta_rad, "Conditional phase in radians")->capture_default_str();
    link->add_option("--dark-count", lo.params.dark_count_prob, "Dark-count probability per window")->capture_default_str();
    link->add_option("--windows", lo.windows, "Detection windows per attempt")->capture_default_str();
    link->add_option("--herald", lo.mode, "Herald mode")->check(CLI::IsMember({"dual", "single"}))->capture_default_str();
    link->add_option("--q-tx", lo.q_tx, "Transmitting qubits per node")->capture_default_str();
    link->add_option("--q-rx", lo.q_rx, "Receiving qubits per node")->capture_default_str();
    link->add_flag("--bidirectional", lo.bidirectional, "Both nodes transmit");
    link->add_option("--trials", lo.trials, "Sampled round trips")->capture_default_str();
    link->add_option("--seed", lo.seed, "Master seed")->capture_default_str();
    detail::add_output_options(link, lo.out);

    PurifyOptions po;
    auto* pur = app.add_subcommand(
        "purify", "Entanglement purification with the [[4,1,2]] or [[5,1,3]] code: output fidelity and acceptance "
                  "per round (analog of the purification-curve figure and its quoted point values).");
    pur->add_option("--code", po.code, "Code")->check(CLI::IsMember({"412", "513"}))->capture_default_str();
    pur->add_option("--mode", po.mode, "ed (detect) or ec (correct)")->check(CLI::IsMember({"ed", "ec"}))->capture_default_str();
    pur->add_option("--F", po.F, "Input fidelity, list or lo:hi:step")->capture_default_str();
    pur->add_option("--plocal", po.p_local, "Local gate error")->capture_default_str();
    pur->add_option("--pprep", po.p_prep, "Preparation error (defaults to --plocal)");
    pur->add_option("--pmeas", po.p_meas, "Measurement error (defaults to --plocal)");
    pur->add_option("--rounds", po.rounds, "Purification rounds")->capture_default_str();
    pur->add_option("--trials", po.trials, "Monte Carlo trials per round")->capture_default_str();
    pur->add_option("--seed", po.seed, "Master seed")->capture_default_str();
    detail::add_output_options(pur, po.out);

    ThresholdOptions to;
    auto* thr = app.add_subcommand(
        "threshold", "Logical failure rate of the periodic cluster-state code against CZ error for several distances, "
                     "and the crossing point (analog of the threshold figure; --lprime gives one point of its "
                     "loss inset).");
    thr->add_option("--d", to.d, "Code distances")->capture_default_str();
    thr->add_option("--pcz", to.p_cz, "CZ error grid, list or lo:hi:step")->capture_default_str();
    thr->add_option("--pprep", to.p_prep, "Preparation error")->capture_default_str();
    thr->add_option("--pmeas", to.p_meas, "Measurement error")->capture_default_str();
    thr->add_option("--lprime", to.l_prime, "Fraction of abandoned CZ gates")->capture_default_str();
    thr->add_option("--trials", to.trials, "Trials per (d, p) point")->capture_default_str();
    thr->add_option("--seed", to.seed, "Master seed")->capture_default_str();
    thr->add_option("--threshold-json", to.json_path, "Also write the threshold report here");
    thr->add_flag("--quiet", to.quiet, "No per-point progress");
    detail::add_output_options(thr, to.out);

    PlanOptions plo;
    auto* plan = app.add_subcommand(
        "plan", "Target fidelity, purification strategy, round trips N_R, rate and memory time for one node pair "
                "(analog of the worked rate example).");
    plan->add_option("--F", plo.F, "Raw pair fidelity")->capture_default_str();
    plan->add_option("--q", plo.node.q, "Matter qubits per node")->capture_default_str();
    plan->add_option("--plocal", plo.node.p_local, "Local gate error")->capture_default_str();
    plan->add_option("--lprime", plo.node.l_prime_budget, "Abandoned-gate fraction")->capture_default_str();
    plan->add_option("--strategy", plo.strategy, "Fixed strategy such as 1x513 (searched when omitted)");
    plan->add_option("--threshold", plo.threshold.constant, "Constant CZ threshold (0.0083 when no threshold is given)");
    plan->add_option("--threshold-file", plo.threshold.files, "Threshold JSON reports (replace --threshold)");
    plan->add_option("--target-F", plo.target_F, "Explicit target fidelity");
    plan->add_option("--safety", plo.safety, "Fraction of the threshold usable")->capture_default_str();
    plan->add_flag("--no-local", plo.no_local, "Ignore the teleported-gate local error");
    plan->add_option("--percentile", plo.percentile, "Worst-case percentile for N_R")->capture_default_str();
    plan->add_option("--p-raw", plo.net.p_raw, "Raw pair probability per attempt")->capture_default_str();
    plan->add_option("--round-trip-ms", plo.net.round_trip_ms, "Round-trip time T_R")->capture_default_str();
    plan->add_option("--spacing-km", plo.net.node_spacing_km, "Node spacing")->capture_default_str();
    plan->add_option("--distance-km", plo.net.total_distance_km, "Total network length")->capture_default_str();
    plan->add_option("--trials", plo.purify_trials, "Purification trials")->capture_default_str();
    plan->add_option("--schedule-trials", plo.schedule_trials, "Schedule trials")->capture_default_str();
    plan->add_option("--seed", plo.seed, "Master seed")->capture_default_str();
    detail::add_output_options(plan, plo.out);

    HybridOptions ho;
    auto* hyb = app.add_subcommand(
        "hybrid", "Ensemble-flux qubit-resonator node: coupling and timing estimates and a state-vector run of the "
                  "CZ (or CNOT) pulse sequence (analog of the hybrid-node gate and its coupling numbers).");
    hyb->add_option("--ge", ho.g_e, "Electron g factor")->capture_default_str();
    hyb->add_option("--mub", ho.mu_B, "Bohr magneton in Hz/T")->capture_default_str();
    hyb->add_option("--ip", ho.I_p, "Persistent current in A")->capture_default_str();
    hyb->add_option("--r", ho.R, "Spin-qubit distance in m")->capture_default_str();
    hyb->add_option("--n", ho.N, "Spins in the ensemble")->capture_default_str();
    hyb->add_option("--g-qr", ho.g_qb_res_hz, "Flux qubit-resonator coupling g/2pi in Hz")->capture_default_str();
    hyb->add_option("--delta", ho.delta_hz, "Dispersive detuning delta/2pi in Hz")->capture_default_str();
    hyb->add_option("--mode", ho.mode, "Dynamics")->check(CLI::IsMember({"effective", "full"}))->capture_default_str();
    hyb->add_option("--switching", ho.switching, "Full-mode detuning switch")
        ->check(CLI::IsMember({"adiabatic", "sudden"}))
        ->capture_default_str();
    hyb->add_option("--a", ho.a, "First ensemble input (0, 1, +, -, +i, -i)")->capture_default_str();
    hyb->add_option("--b", ho.b, "Second ensemble input")->capture_default_str();
    hyb->add_flag("--cnot", ho.cnot, "Hadamards on the second flux qubit");
    hyb->add_option("--ensemble-levels", ho.ensemble_levels, "Ensemble truncation")->check(CLI::Range(2, 3))->capture_default_str();
    hyb->add_option("--resonator-levels", ho.resonator_levels, "Resonator truncation")->check(CLI::Range(2, 3))->capture_default_str();
    detail::add_output_options(hyb, ho.out, {"json", "csv"});

    Table1Options t1;
    t1.table.percentile_from_l_prime = false;
    auto* tab = app.add_subcommand(
        "table1", "Round trips N_R for seven (F, p_local) columns and q = 5, 16, 32, 64 qubits per node (analog of "
                  "the round-trip table). Footnote strategies are used unless a threshold is given.");
    tab->add_option("--q", t1.qs, "Rows")->capture_default_str();
    tab->add_option("--trials", t1.table.purify_trials, "Purification trials per column")->capture_default_str();
    tab->add_option("--schedule-trials", t1.table.schedule_trials, "Schedule trials per cell")->capture_default_str();
    tab->add_option("--seed", t1.table.seed, "Master seed")->capture_default_str();
    tab->add_flag("--lprime-percentile", t1.table.percentile_from_l_prime,
                  "Use the (1 - l') quantile per column instead of the 99th percentile");
    tab->add_option("--threshold", t1.threshold.constant, "Plan strategies against a constant threshold");
    tab->add_option("--threshold-file", t1.threshold.files, "Plan strategies against threshold reports");
    tab->add_option("--safety", t1.table.safety, "Fraction of the threshold usable")->capture_default_str();
    tab->add_flag("--no-local", t1.no_local, "Ignore the teleported-gate local error");
    tab->add_option("--p-raw", t1.net.p_raw, "Raw pair probability per attempt")->capture_default_str();
    tab->add_option("--round-trip-ms", t1.net.round_trip_ms, "Round-trip time T_R")->capture_default_str();
    tab->add_option("--max-round-trips", t1.table.max_round_trips, "Schedule cap")->capture_default_str();
    detail::add_output_options(tab, t1.out, {"csv", "json", "text"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e, os, es);
        es << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*link) run_link(lo, os, es);
        if (*pur) run_purify(po, os, es);
        if (*thr) run_threshold(to, os, es);
        if (*plan) run_plan(plo, os, es);
        if (*hyb) run_hybrid(ho, os, es);
        if (*tab) run_table1(t1, os, es);
    } catch (const Infeasible& e) {
        es << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        es << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        es << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
    std::vector<const char*> argv{"qrn"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), os, es);
}

}  // namespace qrn::cli
