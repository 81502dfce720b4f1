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


#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "qrn/pipeline.hpp"

namespace {

using namespace qrn::pipeline;

TEST(Target, BudgetRule) {
    const auto curve = ThresholdCurve::constant(0.0083, 0.05);
    EXPECT_NEAR(target_fidelity(curve, 0.0, 0.001, 2.0 / 3.0), 0.9955, 1e-4);
    EXPECT_DOUBLE_EQ(target_fidelity(curve, 0.0, 0.0, 1.0), 1.0 - 0.0083);
    EXPECT_THROW(target_fidelity(curve, 0.06, 0.0), std::out_of_range);
    EXPECT_THROW(target_fidelity(curve, 0.0, 0.01), std::invalid_argument);
    EXPECT_THROW(target_fidelity(curve, 0.0, 0.0, 0.0), std::invalid_argument);
    const NodeConfig node{16, 0.0005, 0.0, std::nullopt};
    EXPECT_NEAR(node_target_fidelity(node, curve), 1.0 - (2.0 / 3.0 * 0.0083 - 0.001), 1e-15);
}

TEST(Target, CurveInterpolatesAndReadsJson) {
    const ThresholdCurve c({{0.05, 0.0015}, {0.0, 0.0063}, {0.02, 0.0048}});
    EXPECT_DOUBLE_EQ(c.at(0.0), 0.0063);
    EXPECT_NEAR(c.at(0.01), 0.00555, 1e-15);
    EXPECT_NEAR(c.at(0.035), 0.00315, 1e-15);
    EXPECT_THROW(c.at(0.051), std::out_of_range);

    const auto one = ThresholdCurve::from_json(nlohmann::json::parse(R"({"l_prime": 0.02, "threshold": 0.005})"));
    EXPECT_DOUBLE_EQ(one.at(0.02), 0.005);
    const auto many = ThresholdCurve::from_json(nlohmann::json::parse(
        R"({"curve": [{"l_prime": 0.0, "threshold": 0.006}, {"l_prime": 0.1, "threshold": null},
                      {"l_prime": 0.02, "threshold": 0.004}]})"));
    EXPECT_EQ(many.points().size(), 2u);
    EXPECT_NEAR(many.at(0.01), 0.005, 1e-15);
    EXPECT_THROW(ThresholdCurve::from_json(nlohmann::json::parse(R"({"threshold": null})")), std::invalid_argument);
    EXPECT_THROW(ThresholdCurve({{0.0, 1.5}}), std::invalid_argument);
}

double footnote_target() { return target_fidelity(ThresholdCurve::constant(0.0083), 0.0, 0.0, 1.0); }

TEST(Plan, FootnoteStrategies) {
    const double target = footnote_target();
    const auto high = plan_rounds(64, 0.0005, 0.963, target, 100'000, 1);
    ASSERT_TRUE(high.feasible) << high.reason;
    EXPECT_EQ(high.plan, (Plan{"412", 1}));
    EXPECT_GE(high.output_fidelity(0.963), target);

    const auto low = plan_rounds(64, 0.0005, 0.835, target, 100'000, 1);
    ASSERT_TRUE(low.feasible) << low.reason;
    EXPECT_EQ(low.plan, (Plan{"412", 2}));
    EXPECT_EQ(low.rounds.size(), 2u);
}

TEST(Plan, PerfectInputNeedsNoRounds) {
    const auto r = plan_rounds(4, 0.0, 1.0, 0.999);
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.plan.rounds, 0);
    EXPECT_EQ(r.plan.label(), "raw");
    EXPECT_DOUBLE_EQ(r.output_fidelity(1.0), 1.0);
}

TEST(Plan, InfeasibleTargetsAreReported) {
    const auto r = plan_rounds(64, 0.001, 0.9, 0.99999, 20'000, 1);
    EXPECT_FALSE(r.feasible);
    EXPECT_FALSE(r.reason.empty());
    // Reachable, but not with four qubits.
    const auto small = plan_rounds(4, 0.0005, 0.835, footnote_target(), 20'000, 1);
    EXPECT_FALSE(small.feasible);
    EXPECT_NE(small.reason.find("qubits"), std::string::npos);
}

TEST(Plan, FixedStrategyIsChecked) {
    NodeConfig node{16, 0.0005, 0.0, Plan{"513", 1}};
    const auto ok = plan_rounds(node, 0.919, 0.99, 50'000, 1);
    EXPECT_TRUE(ok.feasible);
    EXPECT_EQ(ok.plan, (Plan{"513", 1}));
    const auto bad = plan_rounds(node, 0.919, 0.9999, 50'000, 1);
    EXPECT_FALSE(bad.feasible);
    node.q = 4;
    EXPECT_THROW(node.validate(), std::invalid_argument);
}

TEST(Plan, QubitRequirement) {
    EXPECT_EQ((Plan{"412", 0}).min_qubits(), 1);
    EXPECT_EQ((Plan{"412", 1}).min_qubits(), 4);
    EXPECT_EQ((Plan{"412", 2}).min_qubits(), 7);
    EXPECT_EQ((Plan{"513", 1}).min_qubits(), 5);
    EXPECT_EQ((Plan{"412", 2}).mark(), "**");
    EXPECT_EQ((Plan{"513", 1}).mark(), "+");
}

TEST(Schedule, CertainPairsTakeTwoRoundTrips) {
    NetworkConfig net;
    net.p_raw = 1.0;
    for (const Plan& plan : {Plan{"412", 1}, Plan{"513", 1}}) {
        const auto r = simulate_schedule(plan.block(), net, plan, {1.0}, 100, 3);
        EXPECT_EQ(r.percentile_NR, 2);
        EXPECT_DOUBLE_EQ(r.mean_NR, 2.0);
        EXPECT_TRUE(r.converged());
    }
    const auto raw = simulate_schedule(1, net, Plan{"412", 0}, {}, 10, 3);
    EXPECT_EQ(raw.percentile_NR, 1);
}

TEST(Schedule, NonconvergenceIsFlagged) {
    NetworkConfig net;
    net.p_raw = 0.0;
    const auto r = simulate_schedule(8, net, Plan{"412", 1}, {0.9}, 50, 1, 99.0, 20);
    EXPECT_FALSE(r.converged());
    EXPECT_EQ(r.nonconverged, 50u);
    EXPECT_EQ(r.percentile_NR, 21);
}

TEST(Schedule, ErrorsAndDeterminism) {
    const NetworkConfig net;
    EXPECT_THROW(simulate_schedule(3, net, Plan{"412", 1}, {0.9}, 10, 1), std::invalid_argument);
    EXPECT_THROW(simulate_schedule(8, net, Plan{"412", 1}, {}, 10, 1), std::invalid_argument);
    ::setenv("QRN_THREADS", "1", 1);
    const auto a = simulate_schedule(16, net, Plan{"513", 1}, {0.8}, 5000, 4);
    ::setenv("QRN_THREADS", "2", 1);
    const auto b = simulate_schedule(16, net, Plan{"513", 1}, {0.8}, 5000, 4);
    ::unsetenv("QRN_THREADS");
    EXPECT_EQ(a.percentile_NR, b.percentile_NR);
    EXPECT_DOUBLE_EQ(a.mean_NR, b.mean_NR);
}

TEST(Schedule, MoreQubitsNeverSlower) {
    const NetworkConfig net;
    int last = 1 << 30;
    for (int q : {5, 8, 16, 32, 64}) {
        const auto r = simulate_schedule(q, net, Plan{"513", 1}, {0.75}, 20'000, 6);
        EXPECT_LE(r.percentile_NR, last) << "q=" << q;
        last = r.percentile_NR;
    }
}

TEST(Rate, Values) {
    EXPECT_NEAR(rate(3, 0.1), 3333.33, 0.01);
    EXPECT_NEAR(rate(18, 0.1), 555.56, 0.01);
    EXPECT_DOUBLE_EQ(rate(1, 0.1), 1e4);
    for (int n : {1, 2, 7, 40}) EXPECT_DOUBLE_EQ(rate(n, 0.1), 1e4 / n);
    EXPECT_THROW(rate(0.5, 0.1), std::invalid_argument);
    EXPECT_THROW(rate(2, 0.0), std::invalid_argument);
}

TEST(Memory, BudgetIgnoresNetworkLength) {
    NetworkConfig a, b;
    b.total_distance_km = 20'000.0;
    const Plan p{"412", 2};
    EXPECT_DOUBLE_EQ(memory_budget_ms(a, p), memory_budget_ms(b, p));
    EXPECT_DOUBLE_EQ(memory_budget_ms(a, p), 0.6);
    EXPECT_DOUBLE_EQ(memory_budget_ms(a, Plan{"412", 0}), 0.4);
}

TEST(Evaluate, FiveQubitColumnAtSixteenQubits) {
    const NodeConfig node{16, 0.0008, 0.0, Plan{"513", 1}};
    const NetworkConfig net;
    EvaluateOptions opt;
    opt.purify_trials = 100'000;
    opt.schedule_trials = 10'000;
    const auto rep = evaluate(node, net, 0.907, 0.99, opt);
    ASSERT_TRUE(rep.plan.feasible) << rep.plan.reason;
    EXPECT_GE(rep.N_R, 9);
    EXPECT_LE(rep.N_R, 36);
    EXPECT_DOUBLE_EQ(rep.R_hz, 1e4 / rep.N_R);
    EXPECT_DOUBLE_EQ(rep.memory_budget_ms, 0.5);

    const auto none = evaluate(node, net, 0.907, 0.9999, opt);
    EXPECT_FALSE(none.plan.feasible);
    EXPECT_EQ(none.N_R, 0.0);
}

TEST(Table, ShapeMarksAndMonotonicity) {
    TableOptions opt;
    opt.purify_trials = 50'000;
    opt.schedule_trials = 5'000;
    opt.percentile_from_l_prime = false;
    const auto table = table_report(reference_table_columns(), reference_table_rows(), NetworkConfig{}, opt);
    ASSERT_EQ(table.size(), 7u);
    for (const auto& col : table) {
        ASSERT_EQ(col.cells.size(), 4u);
        int last = 1 << 30;
        for (const auto& cell : col.cells) {
            if (!cell.feasible) continue;
            EXPECT_LE(cell.N_R, last) << "F=" << col.column.F << " q=" << cell.q;
            last = cell.N_R;
        }
    }
    EXPECT_EQ(table[0].cells[0].text(), "---");
    EXPECT_EQ(table[0].cells[1].text().substr(table[0].cells[1].text().size() - 2), "**");
    EXPECT_EQ(table[2].cells[1].text().back(), '+');
    EXPECT_EQ(table[6].cells[3].text().back(), '*');

    std::ostringstream csv, text;
    write_table_csv(csv, table, NetworkConfig{});
    write_table_text(text, table);
    EXPECT_EQ(csv.str().substr(0, 2), "F,");
    EXPECT_NE(csv.str().find("0.835,0.0005,0.02,5,2x[[4,1,2]],---"), std::string::npos);
    EXPECT_NE(text.str().find("q=64"), std::string::npos);
}

TEST(Network, Validation) {
    NetworkConfig n;
    n.round_trip_ms = 0.0;
    EXPECT_THROW(n.validate(), std::invalid_argument);
    n = {};
    n.p_raw = 1.2;
    EXPECT_THROW(n.validate(), std::invalid_argument);
}

}  // namespace
