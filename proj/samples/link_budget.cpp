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


// Success probability of one heralded link against fiber length, and the
// pairs a multiplexed node pair collects per round trip.

#include <cstdio>

#include "qrn/link.hpp"

int main() {
    qrn::link::LinkParams p;
    p.p_single = 0.9;
    p.p_coupling = 0.9;
    p.p_detector = 0.8;
    std::printf("%8s %12s %14s\n", "L_km", "P_dual", "pairs/16 tx");
    for (double L : {0.0, 5.0, 10.0, 20.0, 40.0}) {
        p.length_km = L;
        const double s = qrn::link::success_probability(p);
        qrn::link::MultiplexConfig mux;
        mux.q_tx = 16;
        mux.q_rx = 16;
        qrn::Rng rng(1, static_cast<std::uint64_t>(L));
        double sum = 0.0;
        const int n = 10'000;
        for (int k = 0; k < n; ++k) sum += static_cast<double>(qrn::link::sample_round_trip(mux, s, rng));
        std::printf("%8.1f %12.5f %14.3f\n", L, s, sum / n);
    }
}
