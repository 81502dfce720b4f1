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
#include <numbers>

#include "qrn/link.hpp"
#include "qrn/random.hpp"

namespace {

using namespace qrn::link;
constexpr double kPi = std::numbers::pi;

TEST(SuccessProbability, IdealIsOne) {
    EXPECT_DOUBLE_EQ(success_probability(LinkParams{}), 1.0);
}

TEST(SuccessProbability, OneAttenuationLength) {
    LinkParams p;
    p.length_km = 25.0;
    EXPECT_NEAR(success_probability(p), std::exp(-1.0), 1e-15);
}

TEST(SuccessProbability, ProductOfComponents) {
    LinkParams p{0.9, 0.8, 0.7, 10.0, 25.0, kPi, 0.0};
    EXPECT_NEAR(success_probability(p), 0.9 * 0.64 * 0.7 * std::exp(-0.4), 1e-15);
}

TEST(SuccessProbability, SingleHeraldFactor) {
    LinkParams p;
    p.theta_rad = kPi / 2;
    EXPECT_NEAR(success_probability(p, HeraldMode::Single), 0.25, 1e-15);
    p.theta_rad = kPi;
    EXPECT_NEAR(success_probability(p, HeraldMode::Single), 0.5, 1e-15);
}

TEST(SuccessProbability, Monotone) {
    double last = 2.0;
    for (double L = 0.0; L <= 100.0; L += 5.0) {
        LinkParams p;
        p.length_km = L;
        const double s = success_probability(p);
        EXPECT_LE(s, last);
        last = s;
    }
    last = -1.0;
    for (double c = 0.0; c <= 1.0; c += 0.1) {
        LinkParams p;
        p.p_coupling = c;
        const double s = success_probability(p);
        EXPECT_GE(s, last);
        last = s;
    }
}

TEST(SuccessProbability, RejectsInvalidParameters) {
    LinkParams p;
    p.p_single = 1.5;
    EXPECT_THROW(success_probability(p), std::invalid_argument);
    p = LinkParams{};
    p.attenuation_km = 0.0;
    EXPECT_THROW(success_probability(p), std::invalid_argument);
    p = LinkParams{};
    p.length_km = -1.0;
    EXPECT_THROW(success_probability(p), std::invalid_argument);
}

TEST(HeraldProtocol, PiPhaseGivesBellStates) {
    const auto br = simulate_herald_protocol(kPi);
    ASSERT_EQ(br.size(), 3u);
    EXPECT_NEAR(br[0].probability, 0.5, 1e-12);
    EXPECT_NEAR(br[1].probability, 0.5, 1e-12);
    EXPECT_NEAR(br[2].probability, 0.0, 1e-12);
    EXPECT_EQ(br[0].label, BellLabel::PhiPlus);
    EXPECT_EQ(br[1].label, BellLabel::PsiPlus);
    EXPECT_NEAR(br[0].phi_plus_fidelity, 1.0, 1e-12);
    EXPECT_NEAR(br[1].psi_plus_fidelity, 1.0, 1e-12);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(br[0].state[0] - r), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(br[0].state[3] - r), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(br[1].state[1] - r), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(br[1].state[2] - r), 0.0, 1e-12);
}

TEST(HeraldProtocol, LostPhotonIsRejected) {
    const auto br = simulate_herald_protocol(kPi, 0.0);
    EXPECT_NEAR(br[2].probability, 1.0, 1e-12);
    EXPECT_EQ(br[2].outcome, HeraldOutcome::NoClick);
    EXPECT_EQ(br[2].label, BellLabel::Rejected);
    EXPECT_EQ(br[0].label, BellLabel::Rejected);
}

TEST(HeraldProtocol, ProbabilityConserved) {
    for (double theta : {0.3, kPi / 2, 2.0, kPi}) {
        for (double t : {1.0, 0.4}) {
            const auto br = simulate_herald_protocol(theta, t);
            double s = 0.0;
            for (const auto& b : br) s += b.probability;
            EXPECT_NEAR(s, 1.0, 1e-12);
            EXPECT_NEAR(br[0].probability + br[1].probability, t, 1e-12);
        }
    }
}

TEST(HeraldProtocol, SecondPortMatchesThetaFactor) {
    for (double theta : {kPi / 2, kPi, 1.0, 2.5}) {
        const auto br = simulate_herald_protocol(theta);
        EXPECT_NEAR(br[1].probability, (1.0 - std::cos(theta)) / 4.0, 1e-12) << theta;
        EXPECT_NEAR(br[1].probability, herald_factor(theta, HeraldMode::Single), 1e-12);
        EXPECT_NEAR(br[1].bell_fidelity, 1.0, 1e-12) << theta;
    }
}

TEST(HeraldProtocol, RejectsZeroPhase) {
    EXPECT_THROW(simulate_herald_protocol(0.0), std::invalid_argument);
}

TEST(RoundTrip, Extremes) {
    qrn::Rng rng(1, 0);
    const MultiplexConfig cfg{5, 1, false};
    for (int k = 0; k < 100; ++k) {
        EXPECT_EQ(sample_round_trip(cfg, 0.0, rng), 0u);
        EXPECT_EQ(sample_round_trip(cfg, 1.0, rng), 5u);
    }
}

TEST(RoundTrip, BinomialMean) {
    const MultiplexConfig cfg{64, 1, false};
    double sum = 0.0;
    constexpr int kDraws = 100'000;
    for (int k = 0; k < kDraws; ++k) {
        qrn::Rng rng(2, k);
        sum += static_cast<double>(sample_round_trip(cfg, 0.2, rng));
    }
    EXPECT_NEAR(sum / kDraws, 12.8, 0.1);
}

TEST(RoundTrip, BidirectionalIsSymmetric) {
    const MultiplexConfig cfg{16, 2, true};
    double ma = 0, mb = 0, va = 0, vb = 0;
    constexpr int kDraws = 100'000;
    for (int k = 0; k < kDraws; ++k) {
        qrn::Rng rng(3, k);
        const auto r = sample_round_trip_split(cfg, 0.3, rng);
        ma += r.a_to_b;
        mb += r.b_to_a;
        va += static_cast<double>(r.a_to_b * r.a_to_b);
        vb += static_cast<double>(r.b_to_a * r.b_to_a);
    }
    ma /= kDraws;
    mb /= kDraws;
    va = va / kDraws - ma * ma;
    vb = vb / kDraws - mb * mb;
    const double se = std::sqrt(2.0 * 16 * 0.3 * 0.7 / kDraws);
    EXPECT_NEAR(ma, mb, 5 * se);
    EXPECT_NEAR(va, vb, 0.05 * va);
    EXPECT_NEAR(ma, 4.8, 5 * se);
}

TEST(DarkCounts, Limits) {
    EXPECT_DOUBLE_EQ(dark_count_acceptance_error(0.0, 0.2), 0.0);
    EXPECT_DOUBLE_EQ(dark_count_acceptance_error(1e-3, 0.0), 1.0);
    EXPECT_NEAR(dark_count_acceptance_error(1e-4, 0.2), 5e-4, 1e-6);
}

// Retry process: attempts repeat until a click; a click with a dark count in
// its window is bogus.
TEST(DarkCounts, MatchesRetryMonteCarlo) {
    const double p_dark = 1e-3, p_link = 0.2;
    qrn::Rng rng(4, 0);
    long accepted = 0, bogus = 0;
    while (accepted < 400'000) {
        const bool real = rng.bernoulli(p_link);
        const bool dark = rng.bernoulli(p_dark);
        if (!real && !dark) continue;
        ++accepted;
        bogus += dark;
    }
    const double mc = static_cast<double>(bogus) / accepted;
    const double exact = dark_count_acceptance_error(p_dark, p_link);
    const double se = std::sqrt(exact * (1 - exact) / accepted);
    EXPECT_NEAR(mc, exact, 4 * se);
}

TEST(DarkCounts, FidelityCeiling) {
    EXPECT_DOUBLE_EQ(dark_count_fidelity_ceiling(0.0), 1.0);
    EXPECT_NEAR(dark_count_fidelity_ceiling(0.01), 0.9925, 1e-15);
}

}  // namespace
