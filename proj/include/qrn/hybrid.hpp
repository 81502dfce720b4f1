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

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrn::hybrid {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Position in the chain ensemble - flux qubit - resonator - flux qubit - ensemble.
enum Site : int { Ens1 = 0, Fq1 = 1, Res = 2, Fq2 = 3, Ens2 = 4 };
inline constexpr int kSites = 5;

inline const char* site_name(int s) {
    static constexpr const char* kNames[] = {"ens1", "fq1", "res", "fq2", "ens2"};
    return kNames[s];
}

/// Joint state of the five subsystems. Basis index is mixed-radix with ens1
/// as the most significant digit.
class SubsystemChain {
  public:
    static constexpr int kMaxDim = 3;

    explicit SubsystemChain(std::array<int, kSites> dims = {2, 2, 2, 2, 2}) : dims_(dims) {
        if (dims_[Fq1] != 2 || dims_[Fq2] != 2) throw std::invalid_argument("flux qubits are two-level");
        int total = 1;
        for (int d : dims_) {
            if (d < 2 || d > kMaxDim) throw std::invalid_argument("subsystem dimension must lie in [2, 3]");
            total *= d;
        }
        psi_ = Vector::Zero(total);
        psi_(0) = 1.0;
    }

    static SubsystemChain with_levels(int ensemble_levels, int resonator_levels) {
        return SubsystemChain({ensemble_levels, 2, resonator_levels, 2, ensemble_levels});
    }

    const std::array<int, kSites>& dims() const noexcept { return dims_; }
    int dim() const noexcept { return static_cast<int>(psi_.size()); }
    const Vector& state() const noexcept { return psi_; }
    Vector& state() noexcept { return psi_; }

    void set_state(const Vector& v) {
        if (v.size() != psi_.size()) throw std::invalid_argument("state has the wrong dimension");
        psi_ = v;
    }

    int index(const std::array<int, kSites>& levels) const {
        int idx = 0;
        for (int s = 0; s < kSites; ++s) {
            if (levels[s] < 0 || levels[s] >= dims_[s]) throw std::out_of_range("level outside subsystem");
            idx = idx * dims_[s] + levels[s];
        }
        return idx;
    }

    std::array<int, kSites> levels(int idx) const {
        std::array<int, kSites> out{};
        for (int s = kSites - 1; s >= 0; --s) {
            out[s] = idx % dims_[s];
            idx /= dims_[s];
        }
        return out;
    }

    double norm() const { return psi_.norm(); }

    double population(int site, int level) const {
        double p = 0.0;
        for (int i = 0; i < dim(); ++i) {
            if (levels(i)[site] == level) p += std::norm(psi_(i));
        }
        return p;
    }

    int excitations(int idx) const {
        int n = 0;
        for (int l : levels(idx)) n += l;
        return n;
    }

    double mean_excitations() const {
        double n = 0.0;
        for (int i = 0; i < dim(); ++i) n += excitations(i) * std::norm(psi_(i));
        return n;
    }

    /// Product state with the two ensembles in the given qubit states and
    /// every other subsystem in its ground state.
    static SubsystemChain ensemble_product(cd a0, cd a1, cd b0, cd b1, std::array<int, kSites> dims = {2, 2, 2, 2, 2}) {
        SubsystemChain c(dims);
        c.psi_.setZero();
        const cd a[2] = {a0, a1}, b[2] = {b0, b1};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) c.psi_(c.index({i, 0, 0, 0, j})) = a[i] * b[j];
        }
        return c;
    }

  private:
    std::array<int, kSites> dims_;
    Vector psi_;
};

enum class TermKind { JaynesCummings, Dispersive, ZRotation, Hadamard, Detuning };

/// One term of a segment. Rates are angular frequencies (rad/s).
struct InteractionTerm {
    TermKind kind;
    int a = 0;           ///< first site (qubit for a dispersive term)
    int b = 0;           ///< second site (resonator for a dispersive term)
    double g = 0.0;      ///< coupling
    double delta = 0.0;  ///< qubit-resonator detuning (dispersive) or level shift (detuning)
    double angle = 0.0;  ///< z-rotation angle

    /// H = g (A^dag B + A B^dag)
    static InteractionTerm jaynes_cummings(int a, int b, double g) { return {TermKind::JaynesCummings, a, b, g}; }
    /// Effective H = chi b^dag b sigma_z with chi = g^2 / delta.
    static InteractionTerm dispersive(int qubit, int resonator, double g, double delta) {
        return {TermKind::Dispersive, qubit, resonator, g, delta};
    }
    /// Instantaneous; level n picks up exp(-i n angle).
    static InteractionTerm z_rotation(int site, double angle) { return {TermKind::ZRotation, site, site, 0, 0, angle}; }
    static InteractionTerm hadamard(int site) { return {TermKind::Hadamard, site, site}; }
    /// H = delta * n on one site.
    static InteractionTerm detuning(int site, double delta) { return {TermKind::Detuning, site, site, 0, delta}; }

    bool instantaneous() const noexcept { return kind == TermKind::ZRotation || kind == TermKind::Hadamard; }
    double chi() const { return g * g / delta; }

    void validate() const {
        auto site_ok = [](int s) { return s >= 0 && s < kSites; };
        if (!site_ok(a) || !site_ok(b)) throw std::invalid_argument("site index out of range");
        if (kind == TermKind::JaynesCummings || kind == TermKind::Dispersive) {
            if (std::abs(a - b) != 1) throw std::invalid_argument("couplings act on neighbouring sites only");
            if (!(g >= 0.0)) throw std::invalid_argument("coupling must be non-negative");
        }
        if (kind == TermKind::Dispersive) {
            if (!(a == Fq1 || a == Fq2) || b != Res) {
                throw std::invalid_argument("dispersive term couples a flux qubit to the resonator");
            }
            if (!(delta > 0.0)) throw std::invalid_argument("dispersive detuning must be positive");
        }
        if (kind == TermKind::Hadamard && !(a == Fq1 || a == Fq2)) {
            throw std::invalid_argument("Hadamard acts on a flux qubit");
        }
    }
};

struct Segment {
    std::vector<InteractionTerm> terms;
    double duration = 0.0;  ///< seconds; zero only for instantaneous segments
    std::string label;

    bool instantaneous() const {
        return std::all_of(terms.begin(), terms.end(), [](const InteractionTerm& t) { return t.instantaneous(); });
    }

    void validate() const {
        if (terms.empty()) throw std::invalid_argument("segment without terms");
        bool any_inst = false, any_timed = false;
        for (const auto& t : terms) {
            t.validate();
            (t.instantaneous() ? any_inst : any_timed) = true;
        }
        if (any_inst && any_timed) throw std::invalid_argument("segment mixes instantaneous and timed terms");
        if (any_timed && !(duration > 0.0)) throw std::invalid_argument("segment duration must be positive");
    }
};

using PulseSchedule = std::vector<Segment>;

enum class EvolveMode { Effective, Full };

/// How the flux qubit is moved into and out of the dispersive regime in
/// full mode. Sudden: the coupling is switched on in the bare basis.
/// Adiabatic: bare states enter and leave as the dressed eigenstates of the
/// segment Hamiltonian.
enum class Switching { Adiabatic, Sudden };

struct EvolveOptions {
    Switching switching = Switching::Adiabatic;
    /// Integrator step in full mode; zero picks the largest allowed step,
    /// 1 / (100 * max rate).
    double max_step = 0.0;
};

namespace detail {

/// Builds H for the timed terms of a segment on the joint space.
inline Matrix segment_hamiltonian(const SubsystemChain& chain, const std::vector<InteractionTerm>& terms,
                                  EvolveMode mode) {
    const int D = chain.dim();
    Matrix H = Matrix::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        const auto lv = chain.levels(i);
        for (const auto& t : terms) {
            switch (t.kind) {
                case TermKind::JaynesCummings: {
                    // A^dag B |.. n_a .. n_b ..> and its conjugate.
                    if (lv[t.b] > 0 && lv[t.a] + 1 < chain.dims()[t.a]) {
                        auto up = lv;
                        ++up[t.a];
                        --up[t.b];
                        const double amp = t.g * std::sqrt(static_cast<double>(lv[t.a] + 1) * lv[t.b]);
                        const int j = chain.index(up);
                        H(j, i) += amp;
                        H(i, j) += amp;
                    }
                    break;
                }
                case TermKind::Dispersive: {
                    const double sz = 2.0 * lv[t.a] - 1.0;
                    if (mode == EvolveMode::Effective) {
                        H(i, i) += t.chi() * lv[t.b] * sz;
                    } else {
                        H(i, i) += 0.5 * t.delta * sz;
                        if (lv[t.b] > 0 && lv[t.a] == 0) {
                            auto up = lv;
                            up[t.a] = 1;
                            --up[t.b];
                            const double amp = t.g * std::sqrt(static_cast<double>(lv[t.b]));
                            const int j = chain.index(up);
                            H(j, i) += amp;
                            H(i, j) += amp;
                        }
                    }
                    break;
                }
                case TermKind::Detuning: H(i, i) += t.delta * lv[t.a]; break;
                default: break;
            }
        }
    }
    return H;
}

inline Matrix expm_hermitian(const Matrix& H, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Vector phases = (es.eigenvalues().cast<cd>() * cd(0.0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Columns: dressed eigenvector continuously connected to each bare state,
/// chosen by largest overlap, phase fixed so the bare component is real.
inline Matrix dressing(const Matrix& H) {
    const int D = static_cast<int>(H.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    Matrix V = Matrix::Zero(D, D);
    std::vector<bool> used(D, false);
    for (int k = 0; k < D; ++k) {
        int best = -1;
        double best_w = -1.0;
        for (int bare = 0; bare < D; ++bare) {
            if (used[bare]) continue;
            const double w = std::norm(es.eigenvectors()(bare, k));
            if (w > best_w) {
                best_w = w;
                best = bare;
            }
        }
        used[best] = true;
        const cd c = es.eigenvectors()(best, k);
        V.col(best) = es.eigenvectors().col(k) * (std::abs(c) > 0 ? std::conj(c) / std::abs(c) : cd(1.0));
    }
    return V;
}

inline double max_rate(const std::vector<InteractionTerm>& terms) {
    double r = 0.0;
    for (const auto& t : terms) r = std::max({r, std::abs(t.g), std::abs(t.delta)});
    return r;
}

inline void apply_instantaneous(SubsystemChain& chain, const InteractionTerm& t) {
    Vector& psi = chain.state();
    if (t.kind == TermKind::ZRotation) {
        for (int i = 0; i < chain.dim(); ++i) psi(i) *= std::polar(1.0, -t.angle * chain.levels(i)[t.a]);
        return;
    }
    // Hadamard on a two-level site.
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < chain.dim(); ++i) {
        auto lv = chain.levels(i);
        if (lv[t.a] != 0) continue;
        lv[t.a] = 1;
        const int j = chain.index(lv);
        const cd x = psi(i), y = psi(j);
        psi(i) = r * (x + y);
        psi(j) = r * (x - y);
    }
}

}  // namespace detail

/// Applies every segment of `schedule` in order.
///
/// Effective mode multiplies exact segment propagators with dispersive terms
/// replaced by chi n sigma_z. Full mode integrates the detuned
/// Jaynes-Cummings Hamiltonian with a fixed step (exact propagator per step)
/// and then removes the qubit's bare and Lamb-shifted precession,
/// exp(+i (delta + chi) t sigma_z / 2), which is a frame choice.
inline SubsystemChain evolve(SubsystemChain chain, const PulseSchedule& schedule, EvolveMode mode,
                             const EvolveOptions& opt = {}) {
    if (std::abs(chain.norm() - 1.0) > 1e-10) throw std::invalid_argument("input state is not normalized");
    for (const auto& seg : schedule) {
        seg.validate();
        if (seg.instantaneous()) {
            for (const auto& t : seg.terms) detail::apply_instantaneous(chain, t);
            continue;
        }
        const bool has_dispersive = std::any_of(seg.terms.begin(), seg.terms.end(),
                                                [](const InteractionTerm& t) { return t.kind == TermKind::Dispersive; });
        if (mode == EvolveMode::Effective || !has_dispersive) {
            chain.state() = detail::expm_hermitian(detail::segment_hamiltonian(chain, seg.terms, mode), seg.duration) *
                            chain.state();
            continue;
        }
        if (chain.dims()[Res] < 3) {
            throw std::invalid_argument("full-mode dispersive segments need a resonator of dimension 3");
        }
        const Matrix H = detail::segment_hamiltonian(chain, seg.terms, mode);
        const double limit = 1.0 / (100.0 * detail::max_rate(seg.terms));
        double step = opt.max_step > 0.0 ? opt.max_step : limit;
        if (step > limit * (1.0 + 1e-12)) throw std::invalid_argument("integrator step exceeds 1/(100 max rate)");
        const auto steps = static_cast<long>(std::ceil(seg.duration / step - 1e-9));
        step = seg.duration / static_cast<double>(steps);
        const Matrix U = detail::expm_hermitian(H, step);
        Matrix V;
        if (opt.switching == Switching::Adiabatic) {
            V = detail::dressing(H);
            chain.state() = V * chain.state();
        }
        for (long k = 0; k < steps; ++k) chain.state() = U * chain.state();
        if (opt.switching == Switching::Adiabatic) chain.state() = V.adjoint() * chain.state();
        for (const auto& t : seg.terms) {
            if (t.kind != TermKind::Dispersive) continue;
            const double phi = (t.delta + t.chi()) * seg.duration / 2.0;
            for (int i = 0; i < chain.dim(); ++i) {
                const double sz = 2.0 * chain.levels(i)[t.a] - 1.0;
                chain.state()(i) *= std::polar(1.0, phi * sz);
            }
        }
    }
    return chain;
}

struct IswapCalibration {
    double calibrated_s = 0.0;  ///< maximizes transfer for H = g (A^dag B + A B^dag)
    double analytic_s = 0.0;    ///< pi / (2 g)
    double quoted_s = 0.0;      ///< pi / g, the swap-time formula quoted for the device
    double transfer = 0.0;      ///< transfer probability at calibrated_s
};

/// Excitation transfer |10> -> |01> between two neighbouring sites after t.
inline double transfer_probability(double g, double t, EvolveMode mode = EvolveMode::Effective) {
    SubsystemChain c;
    c.state().setZero();
    c.state()(c.index({0, 1, 0, 0, 0})) = 1.0;
    const auto out = evolve(c, {{{InteractionTerm::jaynes_cummings(Fq1, Res, g)}, t, "jc"}}, mode);
    return std::norm(out.state()(out.index({0, 0, 1, 0, 0})));
}

/// Finds the first full-transfer time in (0, 2 pi / g] by a coarse scan and
/// golden-section refinement.
inline IswapCalibration iswap_calibration(double g, EvolveMode mode = EvolveMode::Effective) {
    if (!(g > 0.0)) throw std::invalid_argument("coupling must be positive");
    const double T = kTwoPi / g;
    constexpr int kGrid = 64;
    int best = 1;
    double best_p = -1.0;
    for (int k = 1; k <= kGrid; ++k) {
        const double p = transfer_probability(g, T * k / kGrid, mode);
        if (p > best_p + 1e-12) {
            best_p = p;
            best = k;
        }
    }
    double lo = T * (best - 1) / kGrid, hi = T * std::min(best + 1, kGrid) / kGrid;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = transfer_probability(g, x1, mode), f2 = transfer_probability(g, x2, mode);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * T; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = transfer_probability(g, x2, mode);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = transfer_probability(g, x1, mode);
        }
    }
    IswapCalibration c;
    c.calibrated_s = 0.5 * (lo + hi);
    c.analytic_s = kPi / (2.0 * g);
    c.quoted_s = kPi / g;
    c.transfer = transfer_probability(g, c.calibrated_s, mode);
    return c;
}

struct CouplingEstimate {
    double B_tesla = 0.0;
    double g_single_hz = 0.0;  ///< g / 2 pi
    double g_ens_hz = 0.0;     ///< sqrt(N) g / 2 pi
    double t_swap_s = 0.0;     ///< pi / g_ens
    double t_sw_s = 0.0;       ///< pi / g_qb_res
    double t_disp_s = 0.0;     ///< pi delta / (2 g_qb_res^2)
    double N = 0.0;
};

inline constexpr double kMu0 = 4e-7 * kPi;  // T m / A

/// Coupling and timing estimates. `mu_B_hz_per_tesla` is the Bohr magneton
/// over h; `g_qb_res_hz` and `delta_hz` are ordinary frequencies (x 2 pi for
/// angular rates). The field is that of a current loop of radius R at its
/// center.
inline CouplingEstimate estimate_couplings(double g_e, double mu_B_hz_per_tesla, double I_p_amp, double R_m, double N,
                                           double g_qb_res_hz, double delta_hz) {
    for (double v : {g_e, mu_B_hz_per_tesla, I_p_amp, R_m, N, g_qb_res_hz, delta_hz}) {
        if (!(v > 0.0)) throw std::invalid_argument("coupling inputs must be positive");
    }
    CouplingEstimate c;
    c.N = N;
    c.B_tesla = kMu0 * I_p_amp / (2.0 * R_m);
    c.g_single_hz = g_e * mu_B_hz_per_tesla * c.B_tesla;
    c.g_ens_hz = std::sqrt(N) * c.g_single_hz;
    c.t_swap_s = kPi / (kTwoPi * c.g_ens_hz);
    const double g_qr = kTwoPi * g_qb_res_hz, delta = kTwoPi * delta_hz;
    c.t_sw_s = kPi / g_qr;
    c.t_disp_s = kPi * delta / (2.0 * g_qr * g_qr);
    return c;
}

/// Parameters of the gate; angular rates in rad/s.
struct CzParams {
    double g_ens = kTwoPi * 30.8e6;
    double g_qb_res = kTwoPi * 50e6;
    double delta = kTwoPi * 500e6;
    int ensemble_levels = 2;
    int resonator_levels = 2;
    bool cnot = false;  ///< Hadamards around the dispersive step on fq2

    void validate() const {
        if (!(g_ens > 0.0 && g_qb_res > 0.0 && delta > 0.0)) throw std::invalid_argument("rates must be positive");
    }
};

/// The gate sequence: ensemble excitations are swapped onto the flux
/// qubits, fq1 is swapped into the resonator, fq2 and the resonator pick up
/// a conditional phase in the dispersive regime, and everything is swapped
/// back. Single-site z rotations cancel the phases of the swaps.
inline PulseSchedule cz_schedule(const CzParams& p) {
    p.validate();
    const double t_ens = iswap_calibration(p.g_ens).calibrated_s;
    const double t_qr = iswap_calibration(p.g_qb_res).calibrated_s;
    const double chi = p.g_qb_res * p.g_qb_res / p.delta;
    const double t_disp = kPi / (2.0 * chi);
    PulseSchedule s;
    s.push_back({{InteractionTerm::jaynes_cummings(Ens1, Fq1, p.g_ens), InteractionTerm::jaynes_cummings(Ens2, Fq2, p.g_ens)},
                 t_ens, "ensembles to flux qubits"});
    s.push_back({{InteractionTerm::z_rotation(Fq2, -kPi / 2)}, 0.0, "fq2 phase"});
    if (p.cnot) s.push_back({{InteractionTerm::hadamard(Fq2)}, 0.0, "fq2 Hadamard"});
    s.push_back({{InteractionTerm::jaynes_cummings(Fq1, Res, p.g_qb_res)}, t_qr, "fq1 to resonator"});
    s.push_back({{InteractionTerm::dispersive(Fq2, Res, p.g_qb_res, p.delta)}, t_disp, "dispersive fq2-resonator"});
    s.push_back({{InteractionTerm::z_rotation(Res, kPi / 2)}, 0.0, "resonator pi/2 rotation"});
    if (p.cnot) s.push_back({{InteractionTerm::hadamard(Fq2)}, 0.0, "fq2 Hadamard"});
    s.push_back({{InteractionTerm::z_rotation(Fq2, -kPi / 2)}, 0.0, "fq2 phase"});
    s.push_back({{InteractionTerm::jaynes_cummings(Res, Fq1, p.g_qb_res)}, t_qr, "resonator to fq1"});
    s.push_back({{InteractionTerm::jaynes_cummings(Ens1, Fq1, p.g_ens), InteractionTerm::jaynes_cummings(Ens2, Fq2, p.g_ens)},
                 t_ens, "flux qubits to ensembles"});
    return s;
}

struct CzResult {
    std::array<cd, 4> ideal{};     ///< target amplitudes on |00>, |01>, |10>, |11>
    std::array<cd, 4> ensembles{};  ///< final amplitudes with every ancilla in its ground state
    double fidelity = 0.0;          ///< <ideal| rho_ensembles |ideal>
    double ancilla_ground = 0.0;    ///< probability that fq1, res and fq2 are all in the ground state
    std::array<double, 3> ancilla_excited{};  ///< excited population of fq1, res, fq2
    SubsystemChain final_state;
};

/// Runs the gate on ensemble inputs a0|0> + a1|1> and b0|0> + b1|1>.
inline CzResult cz_sequence(cd a0, cd a1, cd b0, cd b1, const CzParams& p = {},
                            EvolveMode mode = EvolveMode::Effective, const EvolveOptions& opt = {}) {
    if (std::abs(std::norm(a0) + std::norm(a1) - 1.0) > 1e-10 || std::abs(std::norm(b0) + std::norm(b1) - 1.0) > 1e-10) {
        throw std::invalid_argument("ensemble inputs must be normalized");
    }
    const std::array<int, kSites> dims{p.ensemble_levels, 2, p.resonator_levels, 2, p.ensemble_levels};
    auto chain = SubsystemChain::ensemble_product(a0, a1, b0, b1, dims);
    CzResult r{{}, {}, 0.0, 0.0, {}, chain};
    r.final_state = evolve(chain, cz_schedule(p), mode, opt);
    if (p.cnot) {
        r.ideal = {a0 * b0, a0 * b1, a1 * b1, a1 * b0};
    } else {
        r.ideal = {a0 * b0, a0 * b1, a1 * b0, -a1 * b1};
    }
    const auto& fs = r.final_state;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) r.ensembles[2 * i + j] = fs.state()(fs.index({i, 0, 0, 0, j}));
    }
    // Fidelity of the reduced ensemble state: sum over ancilla configurations.
    double fid = 0.0;
    for (int f1 = 0; f1 < 2; ++f1) {
        for (int n = 0; n < dims[Res]; ++n) {
            for (int f2 = 0; f2 < 2; ++f2) {
                cd overlap = 0.0;
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) overlap += std::conj(r.ideal[2 * i + j]) * fs.state()(fs.index({i, f1, n, f2, j}));
                }
                fid += std::norm(overlap);
            }
        }
    }
    r.fidelity = fid;
    r.ancilla_ground = 0.0;
    for (int i = 0; i < fs.dim(); ++i) {
        const auto lv = fs.levels(i);
        if (lv[Fq1] == 0 && lv[Res] == 0 && lv[Fq2] == 0) r.ancilla_ground += std::norm(fs.state()(i));
    }
    r.ancilla_excited = {1.0 - fs.population(Fq1, 0), 1.0 - fs.population(Res, 0), 1.0 - fs.population(Fq2, 0)};
    return r;
}

/// Whether ensemble coherence covers the time a qubit waits in memory.
inline bool coherence_sufficient(double t2_s, double memory_budget_s) {
    if (!(t2_s > 0.0) || !(memory_budget_s >= 0.0)) throw std::invalid_argument("times must be positive");
    return t2_s > memory_budget_s;
}

/// |<effective|full>|^2 after one dispersive segment of length pi/(2 chi)
/// on the flux-qubit/resonator input (|0>+|1>)(|0>+|1>)/2.
inline double dispersive_overlap(double g, double delta, Switching switching = Switching::Adiabatic) {
    auto chain = SubsystemChain::with_levels(2, 3);
    chain.state().setZero();
    for (int q = 0; q < 2; ++q) {
        for (int n = 0; n < 2; ++n) chain.state()(chain.index({0, 0, n, q, 0})) = 0.5;
    }
    const auto term = InteractionTerm::dispersive(Fq2, Res, g, delta);
    const PulseSchedule s{{{term}, kPi / (2.0 * term.chi()), "dispersive"}};
    const auto eff = evolve(chain, s, EvolveMode::Effective);
    const auto full = evolve(chain, s, EvolveMode::Full, {switching, 0.0});
    return std::norm(eff.state().dot(full.state()));
}

}  // namespace qrn::hybrid
