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

#include "qrn/clifford.hpp"
#include "qrn/hybrid.hpp"
#include "qrn/link.hpp"
#include "qrn/matching.hpp"
#include "qrn/pauli.hpp"
#include "qrn/pipeline.hpp"
#include "qrn/purification.hpp"
#include "qrn/random.hpp"
#include "qrn/stabilizer_code.hpp"
#include "qrn/stats.hpp"
#include "qrn/topo/decoder.hpp"
#include "qrn/topo/errors.hpp"
#include "qrn/topo/lattice.hpp"
#include "qrn/topo/syndrome.hpp"
#include "qrn/topo/threshold.hpp"
