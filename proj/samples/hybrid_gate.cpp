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


// Controlled-Z between two spin ensembles through the flux-qubit and
// resonator chain, in both dynamics modes.

#include <cmath>
#include <cstdio>

#include "qrn/hybrid.hpp"

int main() {
    using namespace qrn::hybrid;
    const double s = 1.0 / std::sqrt(2.0);
    const auto eff = cz_sequence(s, s, s, s);
    std::printf("effective: fidelity %.15f, ancillas in ground %.15f\n", eff.fidelity, eff.ancilla_ground);
    for (int k = 0; k < 4; ++k) {
        std::printf("  |%d%d>  %+.6f %+.6fi\n", k / 2, k % 2, eff.ensembles[k].real(), eff.ensembles[k].imag());
    }
    for (double ratio : {5.0, 10.0, 20.0}) {
        CzParams p;
        p.resonator_levels = 3;
        p.delta = ratio * p.g_qb_res;
        const auto full = cz_sequence(s, s, s, s, p, EvolveMode::Full);
        std::printf("full, delta/g=%4.1f: fidelity %.6f\n", ratio, full.fidelity);
    }
    const auto c = estimate_couplings(7.0, 14e9, 1e-6, 0.5e-6, 62'500, 50e6, 500e6);
    std::printf("g/2pi=%.1f kHz  g_ens/2pi=%.2f MHz  t_swap=%.2f ns  t_sw=%.1f ns  t_disp=%.1f ns\n", c.g_single_hz / 1e3,
                c.g_ens_hz / 1e6, c.t_swap_s * 1e9, c.t_sw_s * 1e9, c.t_disp_s * 1e9);
}
