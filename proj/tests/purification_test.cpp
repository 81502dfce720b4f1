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

#include <cmath>
#include <sstream>
#include <vector>

#include "qrn/purification.hpp"

namespace {

using namespace qrn::purify;
using qrn::Logical;
using qrn::StabilizerCode;

std::vector<BellDiagonalState> werner_inputs(const StabilizerCode& code, double F) {
    return std::vector<BellDiagonalState>(code.n(), werner_from_fidelity(F));
}

PurificationResult exact(const StabilizerCode& code, Mode mode, double F, int rounds = 1) {
    const auto in = werner_inputs(code, F);
    return purify_exact({code, mode, rounds}, in);
}

TEST(Werner, Components) {
    const auto a = werner_from_fidelity(1.0);
    EXPECT_DOUBLE_EQ(a.p_i, 1.0);
    EXPECT_DOUBLE_EQ(a.p_x + a.p_y + a.p_z, 0.0);
    const auto b = werner_from_fidelity(0.25);
    for (auto l : {Logical::I, Logical::X, Logical::Y, Logical::Z}) EXPECT_DOUBLE_EQ(b[l], 0.25);
    const auto c = werner_from_fidelity(0.907);
    EXPECT_NEAR(c.p_x, 0.031, 1e-15);
    EXPECT_NEAR(c.p_z, 0.031, 1e-15);
    EXPECT_THROW(werner_from_fidelity(1.1), std::invalid_argument);
    EXPECT_THROW(werner_from_fidelity(-0.1), std::invalid_argument);
}

TEST(Exact, PerfectInputs) {
    for (const auto& code : {StabilizerCode::five_qubit(), StabilizerCode::four_qubit()}) {
        for (Mode m : {Mode::ED, Mode::EC}) {
            const auto r = exact(code, m, 1.0);
            EXPECT_DOUBLE_EQ(r.acceptance, 1.0);
            EXPECT_DOUBLE_EQ(r.fidelity(), 1.0);
        }
    }
}

TEST(Exact, CorrectionModeKeepsEverything) {
    for (double F : {0.6, 0.8, 0.95}) {
        EXPECT_NEAR(exact(StabilizerCode::five_qubit(), Mode::EC, F).acceptance, 1.0, 1e-12);
    }
}

// Closed form for one round of [[4,1,2]] detection on Werner inputs: a
// pattern passes when its Pauli product is a stabilizer or a logical.
TEST(Exact, FourQubitDetectionAgreesWithDirectSum) {
    const auto code = StabilizerCode::four_qubit();
    const double F = 0.9, q = (1 - F) / 3;
    double pass = 0.0, good = 0.0;
    for (std::uint64_t x = 0; x < 16; ++x) {
        for (std::uint64_t z = 0; z < 16; ++z) {
            const qrn::PauliOperator e(4, x, z);
            double p = 1.0;
            for (std::size_t i = 0; i < 4; ++i) p *= (e.at(i) == 'I') ? F : q;
            if (qrn::syndrome_of(code, e) != 0) continue;
            pass += p;
            if (qrn::logical_class(code, e) == Logical::I) good += p;
        }
    }
    const auto r = exact(code, Mode::ED, F);
    EXPECT_NEAR(r.acceptance, pass, 1e-14);
    EXPECT_NEAR(r.fidelity(), good / pass, 1e-14);
}

TEST(Exact, RejectsNoisyModelAndBadInputs) {
    const auto code = StabilizerCode::five_qubit();
    const auto in = werner_inputs(code, 0.9);
    EXPECT_THROW(purify_exact({code, Mode::ED, 1}, in, NoiseModel::uniform(0.001)), std::invalid_argument);
    EXPECT_NO_THROW(purify_exact({code, Mode::ED, 1}, in, NoiseModel{}));
    const std::vector<BellDiagonalState> wrong(4, werner_from_fidelity(0.9));
    EXPECT_THROW(purify_exact({code, Mode::ED, 1}, wrong), std::invalid_argument);
}

TEST(Exact, DetectionImprovesFidelityOnHighInputs) {
    for (const auto& code : {StabilizerCode::five_qubit(), StabilizerCode::four_qubit()}) {
        for (int k = 90; k <= 100; ++k) {
            const double F = k / 100.0;
            EXPECT_GE(exact(code, Mode::ED, F).fidelity(), F - 1e-12) << code.name() << " F=" << F;
        }
    }
}

TEST(Exact, MonotoneCurves) {
    for (const auto& code : {StabilizerCode::five_qubit(), StabilizerCode::four_qubit()}) {
        double last_f = 0.0;
        for (int k = 85; k <= 100; ++k) {
            const double f = exact(code, Mode::ED, k / 100.0).fidelity();
            EXPECT_GE(f, last_f - 1e-12);
            last_f = f;
        }
        double last_a = 0.0;
        for (int k = 70; k <= 100; ++k) {
            const double a = exact(code, Mode::ED, k / 100.0).acceptance;
            EXPECT_GE(a, last_a - 1e-12);
            last_a = a;
        }
    }
}

class OracleEquivalence : public ::testing::TestWithParam<std::tuple<const char*, Mode, double>> {};

TEST_P(OracleEquivalence, MonteCarloMatchesEnumeration) {
    const auto [name, mode, F] = GetParam();
    const auto code = StabilizerCode::by_name(name);
    const auto ref = exact(code, mode, F);
    const auto mc = purify_mc({code, mode, 1}, F, NoiseModel{}, 200'000, 17);
    const double sa = std::max(mc.acceptance_stderr, 1e-9);
    const double sf = std::max(mc.fidelity_stderr, 1e-9);
    EXPECT_LE(std::abs(mc.acceptance - ref.acceptance), 3 * sa);
    EXPECT_LE(std::abs(mc.fidelity() - ref.fidelity()), 3 * sf);
    EXPECT_TRUE(mc.output.valid());
}

std::string oracle_case_name(const ::testing::TestParamInfo<OracleEquivalence::ParamType>& info) {
    const auto& [name, mode, F] = info.param;
    return std::string("code") + name + "_" + to_string(mode) + "_F" + std::to_string(std::lround(F * 100));
}

INSTANTIATE_TEST_SUITE_P(AllCodesModes, OracleEquivalence,
                         ::testing::Combine(::testing::Values("513", "412"), ::testing::Values(Mode::ED, Mode::EC),
                                            ::testing::Values(0.8, 0.9, 0.95)),
                         oracle_case_name);

TEST(MonteCarlo, DeterministicAndThreadIndependent) {
    const PurificationProtocol p{StabilizerCode::five_qubit(), Mode::ED, 1};
    const auto a = purify_mc(p, 0.9, NoiseModel::uniform(0.001), 50'000, 5);
    const auto b = purify_mc(p, 0.9, NoiseModel::uniform(0.001), 50'000, 5);
    EXPECT_EQ(a.accepted, b.accepted);
    EXPECT_EQ(a.output.p_i, b.output.p_i);
    EXPECT_EQ(a.output.p_x, b.output.p_x);
    const auto c = purify_mc(p, 0.9, NoiseModel::uniform(0.001), 50'000, 6);
    EXPECT_NE(a.accepted, c.accepted);
}

TEST(MonteCarlo, TrialFloorAndZeroAcceptance) {
    const PurificationProtocol p{StabilizerCode::five_qubit(), Mode::ED, 1};
    EXPECT_THROW(purify_mc(p, 0.9, NoiseModel{}, 100, 1), std::invalid_argument);
    // Every pattern with a nonzero syndrome is rejected; all-Y inputs on the
    // five-qubit code never pass detection.
    const BellDiagonalState all_y{0.0, 0.0, 1.0, 0.0};
    const auto r = purify_mc(p.code, Mode::ED, all_y, NoiseModel{}, 10'000, 1);
    if (r.accepted == 0) {
        EXPECT_FALSE(r.fidelity_defined);
        EXPECT_EQ(r.acceptance, 0.0);
    } else {
        EXPECT_TRUE(r.fidelity_defined);
    }
}

TEST(MonteCarlo, PointValuesAtPointOnePercent) {
    const auto noise = NoiseModel::uniform(0.001);
    const auto five = iterate_rounds({StabilizerCode::five_qubit(), Mode::ED, 1}, 0.9, noise, 300'000, 1);
    EXPECT_NEAR(five.back().result.fidelity(), 0.993, 0.003);
    const auto four = iterate_rounds({StabilizerCode::four_qubit(), Mode::ED, 2}, 0.9, noise, 300'000, 1);
    ASSERT_EQ(four.size(), 2u);
    EXPECT_NEAR(four.back().result.fidelity(), 0.997, 0.003);
}

TEST(MonteCarlo, NoiseLowersFidelity) {
    const PurificationProtocol p{StabilizerCode::five_qubit(), Mode::ED, 1};
    const auto clean = purify_mc(p, 0.95, NoiseModel{}, 100'000, 2);
    const auto noisy = purify_mc(p, 0.95, NoiseModel::uniform(0.01), 100'000, 2);
    EXPECT_LT(noisy.fidelity(), clean.fidelity());
}

TEST(Rounds, FirstRoundEqualsSingleMonteCarlo) {
    const PurificationProtocol p{StabilizerCode::four_qubit(), Mode::ED, 2};
    const auto rounds = iterate_rounds(p, 0.9, NoiseModel::uniform(0.001), 50'000, 9);
    const auto one = purify_mc({p.code, Mode::ED, 1}, 0.9, NoiseModel::uniform(0.001), 50'000, 9);
    EXPECT_EQ(rounds.front().result.accepted, one.accepted);
    EXPECT_EQ(rounds.front().result.output.p_i, one.output.p_i);
    EXPECT_NEAR(rounds[1].cumulative_acceptance,
                std::pow(rounds[0].result.acceptance, 4) * rounds[1].result.acceptance, 1e-15);
}

// Round two fed by actual round-one outputs (regenerated inside each trial)
// against iterate_rounds' i.i.d. Bell-diagonal hand-off.
TEST(Rounds, SecondRoundInputMatchesFirstRoundOutput) {
    const auto code = StabilizerCode::four_qubit();
    const auto noise = NoiseModel::uniform(0.001);
    const double F = 0.88;
    const auto rounds = iterate_rounds({code, Mode::ED, 2}, F, noise, 200'000, 21);
    const PurificationSimulator sim(code, Mode::ED, noise);
    const auto input = werner_from_fidelity(F);
    OutcomeCounts counts;
    for (std::uint64_t t = 0; t < 100'000; ++t) {
        qrn::Rng rng(22, t);
        auto fresh_pair = [&](std::size_t, qrn::Rng& r) {
            for (;;) {
                const auto o = sim.run(input, r);
                if (o.accepted) return o.output;
            }
        };
        counts.add(sim.run(fresh_pair, rng));
    }
    const auto composite = counts.result();
    const auto& iid = rounds[1].result;
    const double sf = std::hypot(composite.fidelity_stderr, iid.fidelity_stderr);
    const double sa = std::hypot(composite.acceptance_stderr, iid.acceptance_stderr);
    EXPECT_LE(std::abs(composite.fidelity() - iid.fidelity()), 3 * sf);
    EXPECT_LE(std::abs(composite.acceptance - iid.acceptance), 3 * sa);
}

TEST(Rounds, TwoRoundsOfFourQubitCodeAtLowFidelity) {
    const auto rounds =
        iterate_rounds({StabilizerCode::four_qubit(), Mode::ED, 2}, 0.835, NoiseModel::uniform(0.0005), 200'000, 3);
    EXPECT_GT(rounds[1].result.fidelity(), rounds[0].result.fidelity());
    EXPECT_GT(rounds[1].result.fidelity(), 0.99);
}

TEST(Sweep, EndpointsAndCsv) {
    const PurificationProtocol p{StabilizerCode::five_qubit(), Mode::ED, 1};
    const std::vector<double> grid{0.9, 1.0};
    const auto curve = sweep_fidelity(p, grid, NoiseModel{}, 20'000, 4);
    ASSERT_EQ(curve.size(), 2u);
    EXPECT_DOUBLE_EQ(curve[1].result.fidelity(), 1.0);
    EXPECT_LE(curve[1].result.acceptance, 1.0);
    const std::vector<double> bad{0.4};
    EXPECT_THROW(sweep_fidelity(p, bad, NoiseModel{}, 20'000, 4), std::invalid_argument);
    std::ostringstream os;
    write_csv_header(os);
    write_csv_row(os, 0.9, curve[0].result, p, 0.0, 4);
    EXPECT_EQ(os.str().substr(0, 5), "F_in,");
    EXPECT_NE(os.str().find(",513,ed,1,"), std::string::npos);
}

TEST(Modes, ParseAndPrint) {
    EXPECT_EQ(parse_mode("ed"), Mode::ED);
    EXPECT_EQ(parse_mode("ec"), Mode::EC);
    EXPECT_STREQ(to_string(Mode::EC), "ec");
    EXPECT_THROW(parse_mode("xx"), std::invalid_argument);
}

}  // namespace
