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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qrn/random.hpp"
#include "qrn/stats.hpp"

namespace qrn::link {

/// Physical parameters of one node-to-node link.
struct LinkParams {
    double p_single = 1.0;    ///< single-photon source efficiency
    double p_coupling = 1.0;  ///< cavity in/out coupling, applied twice
    double p_detector = 1.0;
    double length_km = 0.0;
    double attenuation_km = 25.0;
    double theta_rad = std::numbers::pi;  ///< conditional phase per cavity interaction
    double dark_count_prob = 0.0;         ///< per detection window

    void validate() const {
        require_probability(p_single, "p_single");
        require_probability(p_coupling, "p_coupling");
        require_probability(p_detector, "p_detector");
        require_probability(dark_count_prob, "dark_count_prob");
        if (!(length_km >= 0.0)) throw std::invalid_argument("length_km must be non-negative");
        if (!(attenuation_km > 0.0)) throw std::invalid_argument("attenuation_km must be positive");
        if (!(theta_rad >= 0.0 && theta_rad <= std::numbers::pi)) {
            throw std::invalid_argument("theta_rad must lie in [0, pi]");
        }
    }
};

/// Which detector clicks are accepted. Dual: both ports herald a Bell state
/// (requires theta = pi). Single: only the p2 port heralds.
enum class HeraldMode { Dual, Single };

/// Fraction of the lossless budget that ends in an accepted herald.
inline double herald_factor(double theta_rad, HeraldMode mode) {
    return mode == HeraldMode::Dual ? 1.0 : (1.0 - std::cos(theta_rad)) / 4.0;
}

/// p_single * p_coupling^2 * p_detector * exp(-L/L0) * herald factor.
inline double success_probability(const LinkParams& p, HeraldMode mode = HeraldMode::Dual) {
    p.validate();
    return p.p_single * p.p_coupling * p.p_coupling * p.p_detector * std::exp(-p.length_km / p.attenuation_km) *
           herald_factor(p.theta_rad, mode);
}

enum class HeraldOutcome { DetectorP1, DetectorP2, NoClick };
enum class BellLabel { PhiPlus, PsiPlus, Other, Rejected };

/// Two matter qubits, amplitudes over |q1 q2> in the order 00, 01, 10, 11.
using TwoQubitState = std::array<std::complex<double>, 4>;

struct HeraldBranch {
    HeraldOutcome outcome;
    double probability = 0.0;
    TwoQubitState state{};   ///< normalized conditional state (zero when rejected)
    double phi_plus_fidelity = 0.0;
    double psi_plus_fidelity = 0.0;
    /// Overlap with the closest maximally entangled state, (s1 + s2)^2 / 2 for
    /// Schmidt coefficients s1, s2; 1 means a Bell state up to a local phase.
    double bell_fidelity = 0.0;
    BellLabel label = BellLabel::Rejected;
};

namespace detail {

inline double max_entangled_fidelity(const TwoQubitState& s) {
    // Singular values of the 2x2 coefficient matrix.
    const double a = std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]) + std::norm(s[3]);
    const double det = std::abs(s[0] * s[3] - s[1] * s[2]);
    const double disc = std::sqrt(std::max(0.0, a * a - 4.0 * det * det));
    const double s1 = std::sqrt(std::max(0.0, (a + disc) / 2.0));
    const double s2 = std::sqrt(std::max(0.0, (a - disc) / 2.0));
    return (s1 + s2) * (s1 + s2) / 2.0;
}

}  // namespace detail

/// Exact state-vector run of the heralding protocol.
///
/// Both matter qubits start in (|0>+|1>)/sqrt2 and a single photon enters a
/// 50:50 beamsplitter. The p2 mode picks up a phase theta at the first cavity
/// when q1 = 1 and a phase -theta at the second cavity when q2 = 1 (at
/// theta = pi both are the same pi shift). `transmission` is the amplitude
/// transmission probability of the channel; lost photons go to environment
/// modes and the event is rejected. The modes are recombined on a second
/// beamsplitter and a detector reads each port.
inline std::vector<HeraldBranch> simulate_herald_protocol(double theta_rad, double transmission = 1.0) {
    if (!(theta_rad > 0.0 && theta_rad <= std::numbers::pi)) throw std::invalid_argument("theta must lie in (0, pi]");
    require_probability(transmission, "transmission");
    using C = std::complex<double>;
    // Index (q1, q2, photon) with photon in {p1, p2, lost from p1, lost from p2}.
    std::array<C, 16> psi{};
    auto idx = [](int q1, int q2, int ph) { return (q1 * 2 + q2) * 4 + ph; };
    const double r2 = 1.0 / std::sqrt(2.0);
    for (int q1 = 0; q1 < 2; ++q1) {
        for (int q2 = 0; q2 < 2; ++q2) {
            psi[idx(q1, q2, 0)] = 0.5 * r2;
            psi[idx(q1, q2, 1)] = 0.5 * r2;
        }
    }
    const C phase1 = std::polar(1.0, theta_rad);
    const C phase2 = std::polar(1.0, -theta_rad);
    for (int q2 = 0; q2 < 2; ++q2) psi[idx(1, q2, 1)] *= phase1;
    const double t = std::sqrt(transmission), l = std::sqrt(1.0 - transmission);
    for (int q = 0; q < 4; ++q) {
        for (int m = 0; m < 2; ++m) {
            psi[q * 4 + 2 + m] = l * psi[q * 4 + m];
            psi[q * 4 + m] *= t;
        }
    }
    for (int q1 = 0; q1 < 2; ++q1) psi[idx(q1, 1, 1)] *= phase2;
    for (int q = 0; q < 4; ++q) {
        const C a = psi[q * 4 + 0], b = psi[q * 4 + 1];
        psi[q * 4 + 0] = r2 * (a + b);
        psi[q * 4 + 1] = r2 * (a - b);
    }

    std::vector<HeraldBranch> out;
    for (int port = 0; port < 2; ++port) {
        HeraldBranch br{port == 0 ? HeraldOutcome::DetectorP1 : HeraldOutcome::DetectorP2};
        for (int q = 0; q < 4; ++q) br.probability += std::norm(psi[q * 4 + port]);
        if (br.probability > 0.0) {
            const double norm = std::sqrt(br.probability);
            for (int q = 0; q < 4; ++q) br.state[q] = psi[q * 4 + port] / norm;
            br.phi_plus_fidelity = std::norm((br.state[0] + br.state[3]) * r2);
            br.psi_plus_fidelity = std::norm((br.state[1] + br.state[2]) * r2);
            br.bell_fidelity = detail::max_entangled_fidelity(br.state);
            constexpr double kTol = 1e-12;
            br.label = br.phi_plus_fidelity > 1.0 - kTol   ? BellLabel::PhiPlus
                       : br.psi_plus_fidelity > 1.0 - kTol ? BellLabel::PsiPlus
                                                           : BellLabel::Other;
        }
        out.push_back(br);
    }
    HeraldBranch lost{HeraldOutcome::NoClick};
    for (int q = 0; q < 4; ++q) lost.probability += std::norm(psi[q * 4 + 2]) + std::norm(psi[q * 4 + 3]);
    out.push_back(lost);
    return out;
}

/// Transmitter/receiver qubit counts per node.
struct MultiplexConfig {
    std::uint64_t q_tx = 1;
    std::uint64_t q_rx = 1;
    bool bidirectional = false;

    void validate() const {
        if (q_tx < 1 || q_rx < 1) throw std::invalid_argument("q_tx and q_rx must be at least 1");
    }
};

struct RoundTripPairs {
    std::uint64_t a_to_b = 0;
    std::uint64_t b_to_a = 0;
    std::uint64_t total() const noexcept { return a_to_b + b_to_a; }
};

/// Raw pairs created in one round-trip window, split by sending node. Each
/// transmitter qubit emits one photon per window; receivers are re-prepared
/// between photons of the train.
inline RoundTripPairs sample_round_trip_split(const MultiplexConfig& cfg, double p_link, Rng& rng) {
    cfg.validate();
    require_probability(p_link, "p_link");
    RoundTripPairs r;
    r.a_to_b = rng.binomial(cfg.q_tx, p_link);
    if (cfg.bidirectional) r.b_to_a = rng.binomial(cfg.q_tx, p_link);
    return r;
}

inline std::uint64_t sample_round_trip(const MultiplexConfig& cfg, double p_link, Rng& rng) {
    return sample_round_trip_split(cfg, p_link, rng).total();
}

/// Probability that an accepted pair was heralded in a window containing a
/// dark count.
///
/// Each attempt has `windows` detection windows with independent dark counts;
/// a real herald arrives with probability p_link. Attempts repeat until one is
/// accepted, so the answer is the conditional probability
/// P(dark) / (p_link + (1 - p_link) P(dark)). A click coinciding with a real
/// photon makes the herald port ambiguous, so those count as bogus too.
inline double dark_count_acceptance_error(double dark_count_prob, double p_link, double windows = 1.0) {
    require_probability(dark_count_prob, "dark_count_prob");
    require_probability(p_link, "p_link");
    if (!(windows >= 0.0)) throw std::invalid_argument("windows must be non-negative");
    const double p_dark = 1.0 - std::pow(1.0 - dark_count_prob, windows);
    const double accept = p_link + (1.0 - p_link) * p_dark;
    if (accept <= 0.0) return 0.0;
    return p_dark / accept;
}

/// Fidelity ceiling when a fraction `error` of accepted pairs are bogus and
/// bogus pairs are maximally mixed.
inline double dark_count_fidelity_ceiling(double error) { return 1.0 - 0.75 * error; }

}  // namespace qrn::link
