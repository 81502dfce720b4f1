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
#include <complex>
#include <vector>

#include "qrn/hybrid.hpp"
#include "qrn/random.hpp"

namespace {

using namespace qrn::hybrid;
using cd = std::complex<double>;

SubsystemChain basis_state(std::array<int, kSites> levels, std::array<int, kSites> dims = {2, 2, 2, 2, 2}) {
    SubsystemChain c(dims);
    c.state().setZero();
    c.state()(c.index(levels)) = 1.0;
    return c;
}

std::vector<double> sector_weights(const SubsystemChain& c) {
    std::vector<double> w(16, 0.0);
    for (int i = 0; i < c.dim(); ++i) w[c.excitations(i)] += std::norm(c.state()(i));
    return w;
}

TEST(Chain, IndexingRoundTrips) {
    const SubsystemChain c({3, 2, 3, 2, 2});
    EXPECT_EQ(c.dim(), 72);
    for (int i = 0; i < c.dim(); ++i) EXPECT_EQ(c.index(c.levels(i)), i);
    EXPECT_DOUBLE_EQ(c.norm(), 1.0);
    EXPECT_THROW(SubsystemChain({2, 3, 2, 2, 2}), std::invalid_argument);
    EXPECT_THROW(SubsystemChain({4, 2, 2, 2, 2}), std::invalid_argument);
}

TEST(Evolve, EmptyScheduleIsIdentity) {
    const auto in = SubsystemChain::ensemble_product(cd(0.6), cd(0.0, 0.8), cd(1.0 / std::sqrt(2.0)),
                                                     cd(-1.0 / std::sqrt(2.0)));
    for (auto mode : {EvolveMode::Effective, EvolveMode::Full}) {
        const auto out = evolve(in, {}, mode);
        EXPECT_EQ((out.state() - in.state()).norm(), 0.0);
    }
}

TEST(Evolve, JaynesCummingsTransfer) {
    const double g = kTwoPi * 50e6;
    const double t = kPi / (2.0 * g);
    const auto in = basis_state({0, 1, 0, 0, 0});
    const auto out = evolve(in, {{{InteractionTerm::jaynes_cummings(Fq1, Res, g)}, t, "jc"}}, EvolveMode::Effective);
    const cd amp = out.state()(out.index({0, 0, 1, 0, 0}));
    EXPECT_NEAR(std::norm(amp), 1.0, 1e-12);
    EXPECT_NEAR(amp.real(), 0.0, 1e-12);
    EXPECT_NEAR(amp.imag(), -1.0, 1e-12);
    EXPECT_NEAR(transfer_probability(g, t / 2), 0.5, 1e-12);
    EXPECT_NEAR(transfer_probability(g, t), 1.0, 1e-12);
}

TEST(Evolve, CalibrationMatchesAnalyticSwapTime) {
    for (double g : {kTwoPi * 30.8e6, kTwoPi * 50e6, 1.0}) {
        const auto cal = iswap_calibration(g);
        EXPECT_GE(cal.transfer, 1.0 - 1e-10);
        EXPECT_GE(transfer_probability(g, cal.calibrated_s), 1.0 - 1e-10);
        EXPECT_NEAR(cal.calibrated_s / cal.analytic_s, 1.0, 1e-4);
        EXPECT_DOUBLE_EQ(cal.quoted_s, 2.0 * cal.analytic_s);
    }
    EXPECT_THROW(iswap_calibration(0.0), std::invalid_argument);
}

PulseSchedule mixed_schedule(double g, double delta) {
    return {
        {{InteractionTerm::jaynes_cummings(Ens1, Fq1, g), InteractionTerm::jaynes_cummings(Ens2, Fq2, 0.7 * g)}, 3.1 / g, "a"},
        {{InteractionTerm::hadamard(Fq2), InteractionTerm::z_rotation(Res, 0.4)}, 0.0, "b"},
        {{InteractionTerm::jaynes_cummings(Fq1, Res, g), InteractionTerm::detuning(Fq1, 0.3 * g)}, 1.7 / g, "c"},
        {{InteractionTerm::dispersive(Fq2, Res, g, delta)}, 2.0 * delta / (g * g), "d"},
    };
}

TEST(Evolve, NormIsConserved) {
    const double g = kTwoPi * 50e6;
    auto in = SubsystemChain::with_levels(2, 3);
    in.state().setZero();
    qrn::Rng rng(4);
    for (int i = 0; i < in.dim(); ++i) in.state()(i) = cd(rng.uniform() - 0.5, rng.uniform() - 0.5);
    in.state().normalize();
    for (auto mode : {EvolveMode::Effective, EvolveMode::Full}) {
        for (auto sw : {Switching::Adiabatic, Switching::Sudden}) {
            const auto out = evolve(in, mixed_schedule(g, 10 * g), mode, {sw, 0.0});
            EXPECT_NEAR(out.norm(), 1.0, 1e-10);
        }
    }
}

TEST(Evolve, CouplingsConserveExcitations) {
    const double g = kTwoPi * 50e6;
    auto in = SubsystemChain::with_levels(3, 3);
    in.state().setZero();
    qrn::Rng rng(5);
    for (int i = 0; i < in.dim(); ++i) in.state()(i) = cd(rng.uniform() - 0.5, rng.uniform() - 0.5);
    in.state().normalize();
    PulseSchedule s = mixed_schedule(g, 10 * g);
    s.erase(s.begin() + 1);  // the Hadamard changes excitation number
    const auto before = sector_weights(in);
    const auto eff = sector_weights(evolve(in, s, EvolveMode::Effective));
    for (std::size_t k = 0; k < before.size(); ++k) EXPECT_NEAR(eff[k], before[k], 1e-12) << "sector " << k;
    for (auto sw : {Switching::Adiabatic, Switching::Sudden}) {
        const auto full = sector_weights(evolve(in, s, EvolveMode::Full, {sw, 0.0}));
        for (std::size_t k = 0; k < before.size(); ++k) EXPECT_NEAR(full[k], before[k], 1e-8) << "sector " << k;
    }
}

TEST(Evolve, RejectsInvalidInput) {
    const double g = kTwoPi * 50e6;
    const auto ok = SubsystemChain::with_levels(2, 3);
    const PulseSchedule disp{{{InteractionTerm::dispersive(Fq2, Res, g, 10 * g)}, 10.0 / g, "d"}};
    const double limit = 1.0 / (100.0 * 10 * g);
    EXPECT_THROW(evolve(ok, disp, EvolveMode::Full, {Switching::Adiabatic, 2 * limit}), std::invalid_argument);
    EXPECT_NO_THROW(evolve(ok, disp, EvolveMode::Full, {Switching::Adiabatic, 0.5 * limit}));
    EXPECT_THROW(evolve(SubsystemChain::with_levels(2, 2), disp, EvolveMode::Full), std::invalid_argument);
    EXPECT_NO_THROW(evolve(SubsystemChain::with_levels(2, 2), disp, EvolveMode::Effective));

    const PulseSchedule far{{{InteractionTerm::jaynes_cummings(Ens1, Res, g)}, 1.0 / g, "far"}};
    EXPECT_THROW(evolve(ok, far, EvolveMode::Effective), std::invalid_argument);
    const PulseSchedule neg{{{InteractionTerm::jaynes_cummings(Fq1, Res, -g)}, 1.0 / g, "neg"}};
    EXPECT_THROW(evolve(ok, neg, EvolveMode::Effective), std::invalid_argument);
    const PulseSchedule zero{{{InteractionTerm::jaynes_cummings(Fq1, Res, g)}, 0.0, "zero"}};
    EXPECT_THROW(evolve(ok, zero, EvolveMode::Effective), std::invalid_argument);
    const PulseSchedule had{{{InteractionTerm::hadamard(Res)}, 0.0, "had"}};
    EXPECT_THROW(evolve(ok, had, EvolveMode::Effective), std::invalid_argument);
    auto bad = ok;
    bad.state() *= 2.0;
    EXPECT_THROW(evolve(bad, {}, EvolveMode::Effective), std::invalid_argument);
}

std::vector<std::array<cd, 2>> qubit_inputs() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{cd(1), cd(0)}, {cd(0), cd(1)}, {cd(s), cd(s)}, {cd(s), cd(0, s)}};
}

TEST(Gate, SixteenProductInputs) {
    for (const auto& a : qubit_inputs()) {
        for (const auto& b : qubit_inputs()) {
            const auto r = cz_sequence(a[0], a[1], b[0], b[1]);
            EXPECT_GE(r.fidelity, 1.0 - 1e-9);
            EXPECT_GE(r.ancilla_ground, 1.0 - 1e-9);
            for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(r.ensembles[k] - r.ideal[k]), 0.0, 1e-7);
        }
    }
}

TEST(Gate, ControlledZSign) {
    const double s = 1.0 / std::sqrt(2.0);
    const auto r = cz_sequence(s, s, s, s);
    EXPECT_NEAR(r.ensembles[0].real(), 0.5, 1e-9);
    EXPECT_NEAR(r.ensembles[1].real(), 0.5, 1e-9);
    EXPECT_NEAR(r.ensembles[2].real(), 0.5, 1e-9);
    EXPECT_NEAR(r.ensembles[3].real(), -0.5, 1e-9);
    const auto z = cz_sequence(1, 0, 1, 0);
    EXPECT_NEAR(z.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(std::norm(z.ensembles[0]), 1.0, 1e-12);
}

TEST(Gate, ControlledNot) {
    CzParams p;
    p.cnot = true;
    for (const auto& a : qubit_inputs()) {
        for (const auto& b : qubit_inputs()) {
            const auto r = cz_sequence(a[0], a[1], b[0], b[1], p);
            EXPECT_GE(r.fidelity, 1.0 - 1e-9);
            EXPECT_GE(r.ancilla_ground, 1.0 - 1e-9);
        }
    }
    const auto flip = cz_sequence(0, 1, 1, 0, p);
    EXPECT_NEAR(std::norm(flip.ensembles[3]), 1.0, 1e-9);
}

TEST(Gate, ThreeLevelTruncationDoesNotLeak) {
    CzParams p;
    p.ensemble_levels = 3;
    p.resonator_levels = 3;
    const double s = 1.0 / std::sqrt(2.0);
    const auto r = cz_sequence(s, s, s, cd(0, s), p);
    EXPECT_GE(r.fidelity, 1.0 - 1e-9);
    EXPECT_THROW(cz_sequence(1, 1, 1, 0), std::invalid_argument);
}

TEST(Gate, FullModeImprovesWithDetuning) {
    const double s = 1.0 / std::sqrt(2.0);
    double last = 0.0;
    for (double ratio : {5.0, 10.0, 20.0}) {
        CzParams p;
        p.resonator_levels = 3;
        p.delta = ratio * p.g_qb_res;
        const auto r = cz_sequence(s, s, s, s, p, EvolveMode::Full);
        EXPECT_GE(r.fidelity, last) << "delta/g=" << ratio;
        last = r.fidelity;
    }
    EXPECT_GT(last, 0.999);
}

TEST(Dispersive, FullAgreesWithEffective) {
    const double g = kTwoPi * 50e6;
    EXPECT_GE(dispersive_overlap(g, 10 * g), 0.99);
    EXPECT_GE(dispersive_overlap(g, 20 * g), dispersive_overlap(g, 5 * g));
}

TEST(Couplings, DeviceEstimates) {
    const auto c = estimate_couplings(7.0, 14e9, 1e-6, 0.5e-6, 62'500, 50e6, 500e6);
    EXPECT_NEAR(c.g_single_hz, 120e3, 0.05 * 120e3);
    EXPECT_NEAR(c.g_ens_hz, 30e6, 0.05 * 30e6);
    EXPECT_DOUBLE_EQ(c.g_ens_hz, std::sqrt(62'500.0) * c.g_single_hz);
    EXPECT_NEAR(c.t_swap_s, 17e-9, 0.05 * 17e-9);
    EXPECT_NEAR(c.t_sw_s, 10e-9, 1e-15);
    EXPECT_NEAR(c.t_disp_s, 50e-9, 1e-15);
    EXPECT_THROW(estimate_couplings(7.0, 14e9, 0.0, 0.5e-6, 62'500, 50e6, 500e6), std::invalid_argument);
}

TEST(Couplings, CoherenceCheck) {
    EXPECT_TRUE(coherence_sufficient(10e-3, 0.5e-3));
    EXPECT_FALSE(coherence_sufficient(0.1e-3, 0.5e-3));
    EXPECT_THROW(coherence_sufficient(0.0, 1.0), std::invalid_argument);
}

}  // namespace
