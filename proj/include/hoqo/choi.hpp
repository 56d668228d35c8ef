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

#include <string>
#include <vector>

#include "hoqo/tensor_ops.hpp"

namespace hoqo {

// A Kraus representation of a (sub-normalised) CP map in -> out.
struct KrausSet {
  std::vector<Mat> kraus;
  std::string in_label;
  std::string out_label;

  long d_in() const { return kraus.empty() ? 0 : kraus.front().cols(); }
  long d_out() const { return kraus.empty() ? 0 : kraus.front().rows(); }
};

// Throws unless all members share dimensions and sum K^dag K <= 1 within tol.
void validate_kraus(const KrausSet& k, double tol = kValidityTol);

// True iff sum K^dag K = 1 within tol (the trace-preserving equality flag).
bool is_trace_preserving(const KrausSet& k, double tol = kValidityTol);

// A Choi matrix together with the partition of its wires into the
// represented map's inputs and outputs.
struct ChoiOperator {
  LabeledMatrix mat;
  std::vector<std::string> map_inputs;
  std::vector<std::string> map_outputs;
};

// Validates that map_inputs/map_outputs partition the wire labels.
ChoiOperator make_choi(LabeledMatrix mat, std::vector<std::string> map_inputs,
                       std::vector<std::string> map_outputs);

// Choi matrix sum_k |K_k>><<K_k| on wires (out_label, in_label).
ChoiOperator choi_of_kraus(const KrausSet& k);

// Rank-one grouped Choi |K>><<K| of a single operator between wire groups,
// the multi-wire generalisation of vectorize: component (a, i) = K(a, i)
// with both composites row-major in the listed wire order. The carrier
// holds out_wires followed by in_wires.
LabeledMatrix choi_of_operator(const Mat& k, const std::vector<Wire>& out_wires,
                               const std::vector<Wire>& in_wires);

// Action on a state: tr_in[ C (1_out x rho^T) ] on the output wires.
LabeledMatrix apply_choi(const ChoiOperator& c, const LabeledMatrix& rho);

}  // namespace hoqo
