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


// Logical failure rate of the cluster-state lattice around the threshold.
// Small trial counts; the qrn tool's threshold command does the full fit.

#include <cstdio>
#include <vector>

#include "qrn/topo/threshold.hpp"

int main() {
    using namespace qrn::topo;
    const std::vector<int> ds{3, 5};
    const std::vector<double> ps{0.004, 0.006, 0.008, 0.010};
    std::printf("%6s", "p_cz");
    for (int d : ds) std::printf("      d=%d", d);
    std::printf("\n");
    for (double p : ps) {
        std::printf("%6.3f", p);
        for (int d : ds) {
            const auto r = estimate_logical_rate(d, TopoErrorModel{p, 0.001, 0.001, 0.0}, 4000, 7);
            std::printf(" %9.4f", r.rate());
        }
        std::printf("\n");
    }
}
