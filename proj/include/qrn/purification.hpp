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
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrn/clifford.hpp"
#include "qrn/random.hpp"
#include "qrn/stabilizer_code.hpp"
#include "qrn/stats.hpp"

namespace qrn::purify {

/// Noisy Bell pair as a distribution over the Pauli acting on one half of
/// |Phi+>: identity, X (Psi+), Y (Psi-), Z (Phi-).
struct BellDiagonalState {
    double p_i = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;

    double fidelity() const noexcept { return p_i; }
    double total() const noexcept { return p_i + p_x + p_y + p_z; }

    double operator[](Logical l) const noexcept {
        switch (l) {
            case Logical::I: return p_i;
            case Logical::X: return p_x;
            case Logical::Y: return p_y;
            case Logical::Z: return p_z;
        }
        return 0.0;
    }
    double& operator[](Logical l) noexcept {
        switch (l) {
            case Logical::X: return p_x;
            case Logical::Y: return p_y;
            case Logical::Z: return p_z;
            default: return p_i;
        }
    }

    bool valid(double tol = 1e-9) const noexcept {
        return p_i >= -tol && p_x >= -tol && p_y >= -tol && p_z >= -tol && std::abs(total() - 1.0) <= tol;
    }

    void validate() const {
        if (!valid()) throw std::invalid_argument("Bell-diagonal weights must be non-negative and sum to 1");
    }

    /// Draws the Pauli frame of one pair.
    Logical sample(Rng& rng) const noexcept {
        const double u = rng.uniform();
        if (u < p_i) return Logical::I;
        if (u < p_i + p_x) return Logical::X;
        if (u < p_i + p_x + p_y) return Logical::Y;
        return Logical::Z;
    }
};

/// Isotropic pair: weight F on Phi+, (1-F)/3 on each other Bell state.
inline BellDiagonalState werner_from_fidelity(double F) {
    if (!(F >= 0.0 && F <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
    const double q = (1.0 - F) / 3.0;
    return {F, q, q, q};
}

struct NoiseModel {
    double p_local = 0.0;  ///< two-qubit depolarizing probability after each two-qubit gate
    double p_prep = 0.0;   ///< single-qubit depolarizing probability on each qubit before the circuit
    double p_meas = 0.0;   ///< outcome flip probability per measurement

    /// The single-rate model: preparation and measurement share the gate rate.
    static NoiseModel uniform(double p) { return {p, p, p}; }

    bool noiseless() const noexcept { return p_local == 0.0 && p_prep == 0.0 && p_meas == 0.0; }

    void validate() const {
        require_probability(p_local, "p_local");
        require_probability(p_prep, "p_prep");
        require_probability(p_meas, "p_meas");
    }
};

/// ED keeps a pair only on the trivial syndrome; EC applies the
/// minimum-weight correction for every syndrome and keeps everything.
enum class Mode { ED, EC };

inline const char* to_string(Mode m) { return m == Mode::ED ? "ed" : "ec"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "ed" || s == "ED") return Mode::ED;
    if (s == "ec" || s == "EC") return Mode::EC;
    throw std::invalid_argument("mode must be 'ed' or 'ec'");
}

struct PurificationProtocol {
    StabilizerCode code;
    Mode mode = Mode::ED;
    int rounds = 1;

    void validate() const {
        if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    }
};

struct PurificationResult {
    BellDiagonalState output;
    double acceptance = 0.0;
    double acceptance_stderr = 0.0;
    double fidelity_stderr = 0.0;
    std::uint64_t trials = 0;    ///< 0 for exact results
    std::uint64_t accepted = 0;
    bool fidelity_defined = true;  ///< false when nothing was accepted

    double fidelity() const noexcept { return output.fidelity(); }
    double rejection() const noexcept { return 1.0 - acceptance; }
};

/// One round, exactly, by enumerating all 4^n Pauli patterns on the inputs.
/// Local operations are taken as perfect.
inline PurificationResult purify_exact_round(const StabilizerCode& code, Mode mode,
                                             std::span<const BellDiagonalState> inputs) {
    const std::size_t n = code.n();
    if (inputs.size() != n) throw std::invalid_argument("need exactly n input pairs");
    if (n > 6) throw std::invalid_argument("exact enumeration is limited to n <= 6");
    for (const auto& in : inputs) in.validate();

    std::vector<Logical> correction(std::size_t{1} << code.generators().size());
    for (Syndrome s = 0; s < correction.size(); ++s) correction[s] = logical_class(code, code.min_weight_correction(s));

    static constexpr std::array<Logical, 4> kPaulis{Logical::I, Logical::X, Logical::Y, Logical::Z};
    std::array<double, 4> out{};
    double accepted = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << (2 * n);
    for (std::uint64_t v = 0; v < patterns; ++v) {
        PauliOperator e(n);
        double prob = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Logical l = kPaulis[(v >> (2 * i)) & 3U];
            prob *= inputs[i][l];
            e.set(i, l == Logical::X || l == Logical::Y, l == Logical::Z || l == Logical::Y);
        }
        if (prob == 0.0) continue;
        const Syndrome s = syndrome_of(code, e);
        Logical cls = logical_class(code, e);
        if (mode == Mode::ED) {
            if (s != 0) continue;
        } else {
            cls = compose(cls, correction[s]);
        }
        out[static_cast<int>(cls)] += prob;
        accepted += prob;
    }
    PurificationResult r;
    r.acceptance = accepted;
    if (accepted > 0.0) {
        r.output = {out[0] / accepted, out[1] / accepted, out[2] / accepted, out[3] / accepted};
    } else {
        r.fidelity_defined = false;
        r.output = {0.0, 0.0, 0.0, 0.0};
    }
    return r;
}

/// Exact result of `protocol.rounds` rounds, each round fed i.i.d. copies of
/// the previous round's output. Reported acceptance is that of the last round.
inline PurificationResult purify_exact(const PurificationProtocol& protocol, std::span<const BellDiagonalState> inputs) {
    protocol.validate();
    PurificationResult r = purify_exact_round(protocol.code, protocol.mode, inputs);
    for (int k = 1; k < protocol.rounds && r.fidelity_defined; ++k) {
        std::vector<BellDiagonalState> next(protocol.code.n(), r.output);
        r = purify_exact_round(protocol.code, protocol.mode, next);
    }
    return r;
}

inline PurificationResult purify_exact(const PurificationProtocol& protocol, std::span<const BellDiagonalState> inputs,
                                       const NoiseModel& noise) {
    if (!noise.noiseless()) throw std::invalid_argument("purify_exact needs noiseless local operations; use purify_mc");
    return purify_exact(protocol, inputs);
}

struct TrialOutcome {
    bool accepted = false;
    Logical output = Logical::I;
};

/// Pauli-frame simulation of one purification round at two nodes.
///
/// Both nodes run purification_circuit(code). The frame is the Pauli on node
/// B's halves relative to the ideal state; a Pauli on node A's halves moves
/// to B unchanged up to sign, so noise from either node is folded into the
/// same frame at the moment it occurs.
class PurificationSimulator {
  public:
    PurificationSimulator(StabilizerCode code, Mode mode, NoiseModel noise)
        : code_(std::move(code)), mode_(mode), noise_(noise), circuit_(purification_circuit(code_)) {
        noise_.validate();
        correction_.resize(std::size_t{1} << code_.generators().size());
        for (Syndrome s = 0; s < correction_.size(); ++s) {
            correction_[s] = logical_class(code_, code_.min_weight_correction(s));
        }
    }

    const StabilizerCode& code() const noexcept { return code_; }
    const CliffordCircuit& circuit() const noexcept { return circuit_; }
    Mode mode() const noexcept { return mode_; }

    /// `input_frame(i, rng)` supplies the Pauli frame of input pair i.
    template <class InputFrame>
    TrialOutcome run(InputFrame&& input_frame, Rng& rng) const {
        const std::size_t n = code_.n();
        PauliOperator frame(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Logical l = input_frame(i, rng);
            frame.set(i, l == Logical::X || l == Logical::Y, l == Logical::Z || l == Logical::Y);
        }
        if (noise_.p_prep > 0.0) {
            for (int node = 0; node < 2; ++node) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (rng.bernoulli(noise_.p_prep)) {
                        const auto k = 1 + rng.below(3);
                        frame.set(i, frame.x(i) != bool(k & 1U), frame.z(i) != bool(k & 2U));
                    }
                }
            }
        }
        for (const auto& g : circuit_.gates()) {
            conjugate_in_place(g, frame);
            if (!g.two_qubit() || noise_.p_local == 0.0) continue;
            for (int node = 0; node < 2; ++node) {
                if (!rng.bernoulli(noise_.p_local)) continue;
                const auto k = 1 + rng.below(15);
                frame.set(g.a, frame.x(g.a) != bool(k & 1U), frame.z(g.a) != bool(k & 2U));
                frame.set(g.b, frame.x(g.b) != bool(k & 4U), frame.z(g.b) != bool(k & 8U));
            }
        }
        Syndrome s = 0;
        const auto& basis = circuit_.measurements();
        for (std::size_t q = 0; q + 1 < n; ++q) {
            bool bit = basis[q] == MeasureBasis::Z ? frame.x(q) : frame.z(q);
            if (noise_.p_meas > 0.0) {
                bit ^= rng.bernoulli(noise_.p_meas);
                bit ^= rng.bernoulli(noise_.p_meas);
            }
            s |= Syndrome{bit} << q;
        }
        const std::size_t out = n - 1;
        Logical cls = frame.x(out) ? (frame.z(out) ? Logical::Y : Logical::X) : (frame.z(out) ? Logical::Z : Logical::I);
        if (mode_ == Mode::ED) return {s == 0, cls};
        return {true, compose(cls, correction_[s])};
    }

    TrialOutcome run(const BellDiagonalState& input, Rng& rng) const {
        return run([&](std::size_t, Rng& r) { return input.sample(r); }, rng);
    }

  private:
    StabilizerCode code_;
    Mode mode_;
    NoiseModel noise_;
    CliffordCircuit circuit_;
    std::vector<Logical> correction_;
};

struct OutcomeCounts {
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    std::array<std::uint64_t, 4> by_class{};

    void add(const TrialOutcome& o) {
        ++trials;
        if (!o.accepted) return;
        ++accepted;
        ++by_class[static_cast<int>(o.output)];
    }
    void merge(const OutcomeCounts& o) {
        trials += o.trials;
        accepted += o.accepted;
        for (int i = 0; i < 4; ++i) by_class[i] += o.by_class[i];
    }

    PurificationResult result() const {
        PurificationResult r;
        r.trials = trials;
        r.accepted = accepted;
        r.acceptance = trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0;
        r.acceptance_stderr = binomial_stderr(accepted, trials);
        if (accepted == 0) {
            r.fidelity_defined = false;
            r.output = {0.0, 0.0, 0.0, 0.0};
            return r;
        }
        const double a = static_cast<double>(accepted);
        r.output = {by_class[0] / a, by_class[1] / a, by_class[2] / a, by_class[3] / a};
        r.fidelity_stderr = binomial_stderr(by_class[0], accepted);
        return r;
    }
};

inline constexpr std::uint64_t kMinMonteCarloTrials = 10'000;

/// Monte Carlo estimate of one round on i.i.d. inputs drawn from `input`.
/// Trial t uses the random stream derive_seed(seed, t).
inline PurificationResult purify_mc(const StabilizerCode& code, Mode mode, const BellDiagonalState& input,
                                    const NoiseModel& noise, std::uint64_t trials, std::uint64_t seed) {
    if (trials < kMinMonteCarloTrials) throw std::invalid_argument("purify_mc needs at least 10^4 trials");
    input.validate();
    const PurificationSimulator sim(code, mode, noise);
    const auto counts = run_trials(
        trials, OutcomeCounts{},
        [&](OutcomeCounts& acc, std::uint64_t t) {
            Rng rng(seed, t);
            acc.add(sim.run(input, rng));
        },
        [](OutcomeCounts& total, const OutcomeCounts& part) { total.merge(part); });
    return counts.result();
}

inline PurificationResult purify_mc(const PurificationProtocol& protocol, double F, const NoiseModel& noise,
                                    std::uint64_t trials, std::uint64_t seed) {
    protocol.validate();
    return purify_mc(protocol.code, protocol.mode, werner_from_fidelity(F), noise, trials, seed);
}

struct RoundReport {
    int round = 1;
    PurificationResult result;
    /// Probability that every purification in a full round-k tree accepts on
    /// the first attempt.
    double cumulative_acceptance = 0.0;
};

/// Successive rounds from Werner inputs of fidelity F; round k+1 consumes
/// i.i.d. copies of round k's output distribution. Round k draws from the
/// master seed derive_seed(seed, k - 1).
inline std::vector<RoundReport> iterate_rounds(const PurificationProtocol& protocol, double F, const NoiseModel& noise,
                                               std::uint64_t trials, std::uint64_t seed) {
    protocol.validate();
    std::vector<RoundReport> reports;
    BellDiagonalState input = werner_from_fidelity(F);
    double cumulative = 1.0;
    for (int k = 1; k <= protocol.rounds; ++k) {
        const std::uint64_t round_seed = k == 1 ? seed : derive_seed(seed, static_cast<std::uint64_t>(k - 1));
        RoundReport rep{k, purify_mc(protocol.code, protocol.mode, input, noise, trials, round_seed)};
        cumulative = std::pow(cumulative, static_cast<double>(protocol.code.n())) * rep.result.acceptance;
        rep.cumulative_acceptance = cumulative;
        reports.push_back(rep);
        if (!rep.result.fidelity_defined) break;
        input = rep.result.output;
    }
    return reports;
}

struct CurvePoint {
    double F_in = 0.0;
    PurificationResult result;
};

/// Final-round (F', A) over a grid of input fidelities in [0.5, 1]. Every
/// grid point uses the same seed.
inline std::vector<CurvePoint> sweep_fidelity(const PurificationProtocol& protocol, std::span<const double> F_grid,
                                              const NoiseModel& noise, std::uint64_t trials, std::uint64_t seed) {
    std::vector<CurvePoint> curve;
    for (double F : F_grid) {
        if (!(F >= 0.5 && F <= 1.0)) throw std::invalid_argument("fidelity grid must lie within [0.5, 1]");
        curve.push_back({F, iterate_rounds(protocol, F, noise, trials, seed).back().result});
    }
    return curve;
}

inline void write_csv_header(std::ostream& os) {
    os << "F_in,F_out,F_out_stderr,acceptance,acceptance_stderr,code,mode,rounds,p_local,trials,seed\n";
}

inline void write_csv_row(std::ostream& os, double F_in, const PurificationResult& r, const PurificationProtocol& protocol,
                          double p_local, std::uint64_t seed) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6f,%.8f,%.8f,%.8f,%.8f,", F_in, r.fidelity(), r.fidelity_stderr, r.acceptance,
                  r.acceptance_stderr);
    os << buf << protocol.code.name() << ',' << to_string(protocol.mode) << ',' << protocol.rounds << ',';
    std::snprintf(buf, sizeof buf, "%.6g,", p_local);
    os << buf << r.trials << ',' << seed << '\n';
}

}  // namespace qrn::purify
