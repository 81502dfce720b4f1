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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qrn/purification.hpp"
#include "qrn/random.hpp"
#include "qrn/stats.hpp"

namespace qrn::pipeline {

struct NetworkConfig {
    double node_spacing_km = 10.0;
    double round_trip_ms = 0.1;  ///< T_R
    double p_raw = 0.2;          ///< raw pair probability per attempt
    double total_distance_km = 1000.0;

    void validate() const {
        if (!(round_trip_ms > 0.0)) throw std::invalid_argument("round_trip_ms must be positive");
        require_probability(p_raw, "p_raw");
        if (!(node_spacing_km > 0.0)) throw std::invalid_argument("node_spacing_km must be positive");
        if (!(total_distance_km >= node_spacing_km)) {
            throw std::invalid_argument("total_distance_km must cover at least one hop");
        }
    }
};

/// Threshold of the topological code as a function of the fraction of
/// abandoned CZ gates, linear between measured points.
class ThresholdCurve {
  public:
    ThresholdCurve() = default;
    explicit ThresholdCurve(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
        if (points_.empty()) throw std::invalid_argument("threshold curve is empty");
        std::sort(points_.begin(), points_.end());
        for (const auto& [l, t] : points_) {
            require_probability(l, "l_prime");
            if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
        }
    }

    static ThresholdCurve constant(double threshold, double l_max = 1.0) {
        return ThresholdCurve({{0.0, threshold}, {l_max, threshold}});
    }

    /// Accepts either one threshold report ({"l_prime": ..., "threshold": ...})
    /// or {"curve": [report, ...]}. Reports without a crossing are skipped.
    static ThresholdCurve from_json(const nlohmann::json& j) {
        std::vector<std::pair<double, double>> pts;
        auto take = [&](const nlohmann::json& r) {
            if (!r.contains("threshold") || r.at("threshold").is_null()) return;
            pts.emplace_back(r.value("l_prime", 0.0), r.at("threshold").get<double>());
        };
        if (j.contains("curve")) {
            for (const auto& r : j.at("curve")) take(r);
        } else {
            take(j);
        }
        if (pts.empty()) throw std::invalid_argument("threshold file holds no in-range threshold");
        return ThresholdCurve(std::move(pts));
    }

    const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }
    double min_l_prime() const { return points_.front().first; }
    double max_l_prime() const { return points_.back().first; }

    double at(double l_prime) const {
        if (points_.empty()) throw std::invalid_argument("threshold curve is empty");
        constexpr double kTol = 1e-12;
        if (l_prime < min_l_prime() - kTol || l_prime > max_l_prime() + kTol) {
            throw std::out_of_range("l_prime lies outside the threshold curve");
        }
        if (points_.size() == 1) return points_[0].second;
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            const auto [l0, t0] = points_[i];
            const auto [l1, t1] = points_[i + 1];
            if (l_prime <= l1 + kTol) {
                if (l1 - l0 <= kTol) return t0;
                const double u = std::clamp((l_prime - l0) / (l1 - l0), 0.0, 1.0);
                return t0 + u * (t1 - t0);
            }
        }
        return points_.back().second;
    }

  private:
    std::vector<std::pair<double, double>> points_;
};

/// Error a teleported CZ adds beyond the pair infidelity.
inline double teleported_gate_local_error(double p_local) { return 2.0 * p_local; }

inline constexpr double kDefaultSafetyFactor = 2.0 / 3.0;

/// Required output fidelity: pair infidelity + local contribution must stay
/// below safety * threshold(l_prime).
inline double target_fidelity(const ThresholdCurve& curve, double l_prime, double local_contribution,
                              double safety = kDefaultSafetyFactor) {
    if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("safety factor must lie in (0, 1]");
    if (!(local_contribution >= 0.0)) throw std::invalid_argument("local contribution must be non-negative");
    const double budget = safety * curve.at(l_prime) - local_contribution;
    if (!(budget > 0.0)) throw std::invalid_argument("local contribution exhausts the threshold budget");
    return 1.0 - budget;
}

/// A chain of identical purification rounds. rounds == 0 uses raw pairs.
struct Plan {
    std::string code = "412";
    int rounds = 0;

    int block() const { return rounds == 0 ? 1 : static_cast<int>(StabilizerCode::by_name(code).n()); }

    /// Qubits one node needs to finish the tree: the last purification of
    /// every level below the top waits on n - 1 stored outputs of that level.
    int min_qubits() const {
        if (rounds == 0) return 1;
        const int n = block();
        return (n - 1) * (rounds - 1) + n;
    }

    std::string label() const {
        if (rounds == 0) return "raw";
        return std::to_string(rounds) + "x[[" + (code == "513" ? "5,1,3" : "4,1,2") + "]]";
    }

    /// Table footnote marks: one round of [[4,1,2]] "*", two "**", one round
    /// of [[5,1,3]] "+".
    std::string mark() const {
        if (rounds == 0) return "";
        if (code == "412") return std::string(static_cast<std::size_t>(rounds), '*');
        return std::string(static_cast<std::size_t>(rounds), '+');
    }

    friend bool operator==(const Plan&, const Plan&) = default;
};

struct RoundPrediction {
    double fidelity = 0.0;
    double acceptance = 0.0;
};

/// Per-round fidelity and acceptance of `plan` on Werner inputs of
/// fidelity F with the single-rate local noise model.
inline std::vector<RoundPrediction> predict_plan(const Plan& plan, double F, double p_local, std::uint64_t trials,
                                                 std::uint64_t seed) {
    std::vector<RoundPrediction> out;
    if (plan.rounds == 0) return out;
    const purify::PurificationProtocol proto{StabilizerCode::by_name(plan.code), purify::Mode::ED, plan.rounds};
    for (const auto& r : purify::iterate_rounds(proto, F, purify::NoiseModel::uniform(p_local), trials, seed)) {
        out.push_back({r.result.fidelity(), r.result.acceptance});
    }
    return out;
}

struct PlanResult {
    bool feasible = false;
    Plan plan;
    std::vector<RoundPrediction> rounds;
    double target_F = 1.0;
    std::string reason;

    double output_fidelity(double F_in) const { return rounds.empty() ? F_in : rounds.back().fidelity; }
};

inline constexpr int kMaxPlanRounds = 3;

/// First strategy, in the order 1x412, 1x513, 2x412, 2x513, 3x412, 3x513,
/// whose predicted output fidelity reaches `target_F` and that fits in q
/// qubits. Zero rounds when F_in already meets the target.
inline PlanResult plan_rounds(int q, double p_local, double F_in, double target_F, std::uint64_t trials = 200'000,
                              std::uint64_t seed = 1) {
    if (q < 1) throw std::invalid_argument("q must be at least 1");
    require_probability(p_local, "p_local");
    require_probability(F_in, "F_in");
    PlanResult res;
    res.target_F = target_F;
    if (F_in >= target_F) {
        res.feasible = true;
        return res;
    }
    bool any_reached = false;
    for (int r = 1; r <= kMaxPlanRounds; ++r) {
        for (const char* code : {"412", "513"}) {
            const Plan plan{code, r};
            const auto pred = predict_plan(plan, F_in, p_local, trials, seed);
            if (pred.size() != static_cast<std::size_t>(r) || pred.back().fidelity < target_F) continue;
            any_reached = true;
            if (plan.min_qubits() > q) continue;
            res.feasible = true;
            res.plan = plan;
            res.rounds = pred;
            return res;
        }
    }
    res.reason = any_reached ? "target reachable only with more than " + std::to_string(q) + " qubits per node"
                             : "target fidelity unreachable within " + std::to_string(kMaxPlanRounds) + " rounds";
    return res;
}

struct ScheduleResult {
    int percentile_NR = 0;  ///< worst-case N_R at the requested percentile
    double percentile = 99.0;
    double mean_NR = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t nonconverged = 0;
    int max_round_trips = 0;

    bool converged() const noexcept { return nonconverged == 0; }
};

/// Round trips until one node pair holds a pair at the top purification
/// level, for one schedule realization.
///
/// Each round trip: every free qubit attempts a raw pair (Binomial(free,
/// p_raw)); purifications launched in the previous round trip report, an
/// accepted output joining the next level and a rejected one freeing its
/// qubit; the run stops if a top-level pair exists; otherwise every level
/// holding n pairs launches a purification, which frees n - 1 qubits at once
/// and reports after one more round trip of classical communication.
inline int simulate_one_schedule(int q, double p_raw, const Plan& plan, const std::vector<double>& acceptance, Rng& rng,
                                 int max_round_trips) {
    const int levels = plan.rounds;
    const int n = plan.block();
    std::vector<int> stock(levels + 1, 0);
    std::vector<int> pending(levels + 1, 0);  // pending[l]: purifications producing level l
    int in_use = 0;
    for (int k = 1; k <= max_round_trips; ++k) {
        const int got = static_cast<int>(rng.binomial(static_cast<std::uint64_t>(q - in_use), p_raw));
        stock[0] += got;
        in_use += got;
        for (int l = 1; l <= levels; ++l) {
            for (int i = 0; i < pending[l]; ++i) {
                if (rng.bernoulli(acceptance[l - 1])) {
                    ++stock[l];
                } else {
                    --in_use;
                }
            }
            pending[l] = 0;
        }
        if (stock[levels] >= 1) return k;
        for (int l = 0; l < levels; ++l) {
            while (stock[l] >= n) {
                stock[l] -= n;
                in_use -= n - 1;
                ++pending[l + 1];
            }
        }
    }
    return max_round_trips + 1;
}

/// Distribution of N_R over `trials` schedules; trial t draws from
/// derive_seed(seed, t). Runs that exceed `max_round_trips` count as
/// nonconverged and enter the percentile as max_round_trips + 1.
inline ScheduleResult simulate_schedule(int q, const NetworkConfig& net, const Plan& plan,
                                        const std::vector<double>& acceptance, std::uint64_t trials,
                                        std::uint64_t seed, double percentile_rank = 99.0,
                                        int max_round_trips = 100'000) {
    net.validate();
    if (q < plan.min_qubits()) throw std::invalid_argument("q is below the plan's qubit requirement");
    if (acceptance.size() != static_cast<std::size_t>(plan.rounds)) {
        throw std::invalid_argument("need one acceptance probability per round");
    }
    for (double a : acceptance) require_probability(a, "acceptance");
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (max_round_trips < 1) throw std::invalid_argument("max_round_trips must be positive");

    struct Acc {
        std::vector<int> samples;
    };
    const auto acc = run_trials(
        trials, Acc{},
        [&](Acc& a, std::uint64_t t) {
            Rng rng(seed, t);
            a.samples.push_back(simulate_one_schedule(q, net.p_raw, plan, acceptance, rng, max_round_trips));
        },
        [](Acc& total, const Acc& part) { total.samples.insert(total.samples.end(), part.samples.begin(), part.samples.end()); });
    ScheduleResult r;
    r.trials = trials;
    r.percentile = percentile_rank;
    r.max_round_trips = max_round_trips;
    double sum = 0.0;
    for (int s : acc.samples) {
        sum += s;
        if (s > max_round_trips) ++r.nonconverged;
    }
    r.mean_NR = sum / static_cast<double>(trials);
    r.percentile_NR = percentile(acc.samples, percentile_rank);
    return r;
}

/// Pairs per second, R = 1 / (N_R * T_R).
inline double rate(double N_R, double round_trip_ms) {
    if (!(N_R >= 1.0)) throw std::invalid_argument("N_R must be at least 1");
    if (!(round_trip_ms > 0.0)) throw std::invalid_argument("round_trip_ms must be positive");
    return (1000.0 / round_trip_ms) / N_R;
}

/// Storage time a memory must survive: cluster preparation (~4 T_R) plus one
/// classical exchange per purification round. Does not depend on the total
/// network length.
inline double memory_budget_ms(const NetworkConfig& net, const Plan& plan) {
    net.validate();
    return (4.0 + plan.rounds) * net.round_trip_ms;
}

struct NodeConfig {
    int q = 16;                   ///< matter qubits per node
    double p_local = 0.001;       ///< local gate error
    double l_prime_budget = 0.0;  ///< abandoned-gate fraction the cluster must absorb
    std::optional<Plan> strategy; ///< fixed strategy; searched when empty

    void validate() const {
        if (q < 1) throw std::invalid_argument("q must be at least 1");
        require_probability(p_local, "p_local");
        require_probability(l_prime_budget, "l_prime_budget");
        if (strategy && strategy->rounds > 0 && strategy->block() > q) {
            throw std::invalid_argument("q is smaller than the strategy's code block");
        }
    }
};

/// Target fidelity for a node under the default budget rule.
inline double node_target_fidelity(const NodeConfig& node, const ThresholdCurve& curve,
                                   double safety = kDefaultSafetyFactor, bool include_local_contribution = true) {
    return target_fidelity(curve, node.l_prime_budget,
                           include_local_contribution ? teleported_gate_local_error(node.p_local) : 0.0, safety);
}

/// A fixed strategy is checked against the target; otherwise the search of
/// plan_rounds(q, ...) runs.
inline PlanResult plan_rounds(const NodeConfig& node, double F_in, double target_F, std::uint64_t trials = 200'000,
                              std::uint64_t seed = 1) {
    node.validate();
    if (!node.strategy) return plan_rounds(node.q, node.p_local, F_in, target_F, trials, seed);
    PlanResult res;
    res.target_F = target_F;
    res.plan = *node.strategy;
    res.rounds = predict_plan(res.plan, F_in, node.p_local, trials, seed);
    const double out = res.output_fidelity(F_in);
    if (out < target_F) {
        res.reason = res.plan.label() + " reaches " + std::to_string(out) + " < target " + std::to_string(target_F);
    } else if (res.plan.min_qubits() > node.q) {
        res.reason = res.plan.label() + " needs " + std::to_string(res.plan.min_qubits()) + " qubits per node";
    } else {
        res.feasible = true;
    }
    return res;
}

struct PerformanceReport {
    PlanResult plan;
    ScheduleResult schedule;
    double N_R = 0.0;
    double R_hz = 0.0;
    double target_F = 0.0;
    double memory_budget_ms = 0.0;
};

struct EvaluateOptions {
    std::uint64_t purify_trials = 200'000;
    std::uint64_t schedule_trials = 20'000;
    std::uint64_t seed = 1;
    double percentile = 99.0;
    int max_round_trips = 100'000;
};

/// Plan, schedule and rate for one node pair. An infeasible plan leaves the
/// schedule empty and N_R at zero.
inline PerformanceReport evaluate(const NodeConfig& node, const NetworkConfig& net, double F_in, double target_F,
                                  const EvaluateOptions& opt = {}) {
    net.validate();
    PerformanceReport rep;
    rep.target_F = target_F;
    rep.plan = plan_rounds(node, F_in, target_F, opt.purify_trials, derive_seed(opt.seed, 1));
    if (!rep.plan.feasible) return rep;
    std::vector<double> acceptance;
    for (const auto& r : rep.plan.rounds) acceptance.push_back(r.acceptance);
    rep.schedule = simulate_schedule(node.q, net, rep.plan.plan, acceptance, opt.schedule_trials,
                                     derive_seed(opt.seed, 2), opt.percentile, opt.max_round_trips);
    rep.N_R = rep.schedule.percentile_NR;
    rep.R_hz = rate(rep.N_R, net.round_trip_ms);
    rep.memory_budget_ms = memory_budget_ms(net, rep.plan.plan);
    return rep;
}

struct Table1Column {
    double F;
    double p_local;
    double l_prime;
    Plan strategy;  ///< footnote strategy used when no threshold curve is given
};

/// The seven columns of the reference table with their footnote strategies.
inline std::vector<Table1Column> reference_table_columns() {
    return {
        {0.835, 0.0005, 0.02, {"412", 2}},  {0.872, 0.0005, 0.008, {"513", 1}}, {0.907, 0.0008, 0.008, {"513", 1}},
        {0.919, 0.0005, 0.02, {"513", 1}},  {0.930, 0.0005, 0.008, {"412", 1}}, {0.951, 0.001, 0.008, {"412", 1}},
        {0.963, 0.0005, 0.02, {"412", 1}},
    };
}

inline std::vector<int> reference_table_rows() { return {5, 16, 32, 64}; }

struct TableCell {
    int q = 0;
    bool feasible = false;
    int N_R = 0;
    Plan plan;
    double percentile = 99.0;
    std::string reason;

    std::string text() const { return feasible ? std::to_string(N_R) + plan.mark() : "---"; }
};

struct TableOptions {
    std::uint64_t purify_trials = 200'000;
    std::uint64_t schedule_trials = 20'000;
    std::uint64_t seed = 1;
    /// When false every cell uses the 99th percentile; when true a column
    /// with budget l' uses the (1 - l') quantile.
    bool percentile_from_l_prime = true;
    /// When set, strategies come from plan_rounds against this curve.
    std::optional<ThresholdCurve> curve;
    double safety = kDefaultSafetyFactor;
    bool include_local_contribution = true;
    int max_round_trips = 100'000;
};

struct TableColumnResult {
    Table1Column column;
    PlanResult plan;
    std::vector<TableCell> cells;
};

/// Every (column, q) cell of a reference-table-style report. Column c
/// draws its purification predictions from derive_seed(seed, c) and its
/// schedules from derive_seed(seed, 1000 + c).
inline std::vector<TableColumnResult> table_report(const std::vector<Table1Column>& columns, const std::vector<int>& qs,
                                                   const NetworkConfig& net, const TableOptions& opt) {
    std::vector<TableColumnResult> out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& col = columns[c];
        TableColumnResult res{col, {}, {}};
        const std::uint64_t pseed = derive_seed(opt.seed, c);
        if (opt.curve) {
            const double local = opt.include_local_contribution ? teleported_gate_local_error(col.p_local) : 0.0;
            const double target = target_fidelity(*opt.curve, col.l_prime, local, opt.safety);
            res.plan = plan_rounds(1 << 20, col.p_local, col.F, target, opt.purify_trials, pseed);
        } else {
            res.plan.feasible = true;
            res.plan.plan = col.strategy;
            res.plan.rounds = predict_plan(col.strategy, col.F, col.p_local, opt.purify_trials, pseed);
            res.plan.target_F = res.plan.output_fidelity(col.F);
        }
        const double pct = opt.percentile_from_l_prime ? 100.0 * (1.0 - col.l_prime) : 99.0;
        std::vector<double> acceptance;
        for (const auto& r : res.plan.rounds) acceptance.push_back(r.acceptance);
        for (int q : qs) {
            TableCell cell;
            cell.q = q;
            cell.plan = res.plan.plan;
            cell.percentile = pct;
            if (!res.plan.feasible) {
                cell.reason = res.plan.reason;
            } else if (q < res.plan.plan.min_qubits()) {
                cell.reason = "needs " + std::to_string(res.plan.plan.min_qubits()) + " qubits per node";
            } else {
                const auto s = simulate_schedule(q, net, res.plan.plan, acceptance, opt.schedule_trials,
                                                 derive_seed(opt.seed, 1000 + c), pct, opt.max_round_trips);
                cell.feasible = s.converged() || s.percentile_NR <= opt.max_round_trips;
                cell.N_R = s.percentile_NR;
                if (!cell.feasible) cell.reason = "schedule did not converge";
            }
            res.cells.push_back(cell);
        }
        out.push_back(std::move(res));
    }
    return out;
}

inline void write_table_csv(std::ostream& os, const std::vector<TableColumnResult>& table, const NetworkConfig& net) {
    os << "F,p_local,l_prime,q,strategy,N_R,R_hz,percentile,feasible\n";
    char buf[256];
    for (const auto& col : table) {
        for (const auto& cell : col.cells) {
            std::snprintf(buf, sizeof buf, "%.3f,%.6g,%.6g,%d,%s,", col.column.F, col.column.p_local, col.column.l_prime,
                          cell.q, cell.plan.label().c_str());
            os << buf;
            if (cell.feasible) {
                std::snprintf(buf, sizeof buf, "%d,%.1f,%.2f,1\n", cell.N_R, rate(cell.N_R, net.round_trip_ms), cell.percentile);
            } else {
                std::snprintf(buf, sizeof buf, "---,,%.2f,0\n", cell.percentile);
            }
            os << buf;
        }
    }
}

inline void write_table_text(std::ostream& os, const std::vector<TableColumnResult>& table) {
    char buf[64];
    auto row = [&](const char* head, auto&& field) {
        std::snprintf(buf, sizeof buf, "%-10s", head);
        os << buf;
        for (const auto& col : table) {
            std::snprintf(buf, sizeof buf, "%10s", field(col).c_str());
            os << buf;
        }
        os << '\n';
    };
    auto fmt = [](const char* f, double v) {
        char b[32];
        std::snprintf(b, sizeof b, f, v);
        return std::string(b);
    };
    row("F", [&](const TableColumnResult& c) { return fmt("%.3f", c.column.F); });
    row("p_local", [&](const TableColumnResult& c) { return fmt("%.4f", c.column.p_local); });
    row("l'", [&](const TableColumnResult& c) { return fmt("%.3f", c.column.l_prime); });
    if (table.empty()) return;
    for (std::size_t r = 0; r < table.front().cells.size(); ++r) {
        const std::string head = "q=" + std::to_string(table.front().cells[r].q);
        row(head.c_str(), [&](const TableColumnResult& c) { return c.cells[r].text(); });
    }
    os << "* one round [[4,1,2]], ** two rounds [[4,1,2]], + one round [[5,1,3]]; all in error-detection mode\n";
}

}  // namespace qrn::pipeline
