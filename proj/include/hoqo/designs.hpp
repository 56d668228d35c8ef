// Copyright 2026 The HOQO Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "hoqo/labeled_matrix.hpp"

namespace hoqo {

// A finite set of unitaries whose t-th moments match the Haar measure
// exactly, for every t up to `strength`.
struct UnitaryDesign {
  int dim = 0;
  int strength = 0;
  std::vector<Mat> elements;
};

// The registered exact designs:
//   d = 2: the 24 single-qubit Clifford unitaries (a 3-design),
//   d = 3: the 216 single-qutrit Cliffords modulo phase (a 2-design).
// Both are generated once by closing {Fourier, phase} under multiplication
// with a canonical global phase, then cached. Throws NoExactDesign for any
// other dimension.
const UnitaryDesign& unitary_design(int d);

// True when a registered design averages moment order `t` exactly, i.e.
// expressions of degree at most (t, t) in (U, conj U).
bool design_covers(int d, int t);

// Frame potential (1/|G|^2) sum_{g,h} |tr(g^dag h)|^(2t); equals the Haar
// value exactly when the set is a t-design, and exceeds it otherwise.
double frame_potential(const std::vector<Mat>& elements, int t);

}  // namespace hoqo
