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


// Output fidelity and acceptance of one detection round against input
// fidelity, for both codes, at 0.1% local error.

#include <cstdio>

#include "qrn/purification.hpp"

int main() {
    using namespace qrn::purify;
    const auto noise = NoiseModel::uniform(0.001);
    std::printf("%6s %10s %10s %10s %10s\n", "F", "F'(513)", "A(513)", "F'(412)", "A(412)");
    for (int k = 80; k <= 100; k += 2) {
        const double F = k / 100.0;
        const auto a = purify_mc({qrn::StabilizerCode::five_qubit(), Mode::ED, 1}, F, noise, 100'000, 1);
        const auto b = purify_mc({qrn::StabilizerCode::four_qubit(), Mode::ED, 1}, F, noise, 100'000, 1);
        std::printf("%6.2f %10.5f %10.4f %10.5f %10.4f\n", F, a.fidelity(), a.acceptance, b.fidelity(), b.acceptance);
    }
}
