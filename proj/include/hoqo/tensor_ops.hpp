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

#include <map>
#include <string>
#include <vector>

#include "hoqo/labeled_matrix.hpp"

namespace hoqo {

// Kernel dispatch: `serial` runs the plain reference loops, `parallel` the
// OpenMP variants, `auto_select` picks by problem size. The serial kernels
// are retained as the in-tree reference the parallel ones are tested against.
enum class KernelMode { serial, parallel, auto_select };
KernelMode& kernel_mode();

// Numerical tolerances used across the toolkit unless overridden per call.
inline constexpr double kValidityTol = 1e-8;
inline constexpr double kHermitianTol = 1e-10;

// Tensor product; result carries a's wires followed by b's wires.
// Vector carriers combine with vector carriers (and scalars) only.
LabeledMatrix kron(const LabeledMatrix& a, const LabeledMatrix& b);

// Trace over the named wires; remaining wire order preserved.
LabeledMatrix partial_trace(const LabeledMatrix& x,
                            const std::vector<std::string>& labels);

// Transpose of the named tensor factors only; involutive.
LabeledMatrix partial_transpose(const LabeledMatrix& x,
                                const std::vector<std::string>& labels);

// Unnormalised maximally entangled state sum_ij |ii><jj| on two fresh
// d-dimensional wires (label_a first).
LabeledMatrix max_entangled(const std::string& label_a,
                            const std::string& label_b, int d);

// Column-vector form of phi_plus, sum_i |i>|i>, on (label_a, label_b).
LabeledMatrix max_entangled_vec(const std::string& label_a,
                                const std::string& label_b, int d);

// Vectorisation |K>> = (K x 1)|phi+> of a d_out x d_in operator, carried on
// wires (out_label, in_label).
LabeledMatrix vectorize(const Mat& k, const std::string& in_label,
                        const std::string& out_label);

// Inverse of vectorize: recovers the d_out x d_in operator.
Mat unvectorize(const LabeledMatrix& v, const std::string& in_label,
                const std::string& out_label);

// Hilbert-Schmidt inner product <<K|L>> of two column carriers with the same
// wire set (wires matched by label, not position).
Cplx vec_inner(const LabeledMatrix& a, const LabeledMatrix& b);

// Rank-one square matrix |v><v| from a column carrier.
LabeledMatrix outer(const LabeledMatrix& v);

struct PsdReport {
  bool ok = false;
  double min_eigenvalue = 0.0;
  double hermitian_deviation = 0.0;
};

// Reports (never throws): Hermiticity deviation and minimum eigenvalue of
// the symmetrised matrix; ok iff both pass `tol`.
PsdReport check_psd(const LabeledMatrix& x, double tol = kValidityTol);

// Reorders the wire list to `order` (a permutation of the labels), exactly
// re-indexing the data.
LabeledMatrix permute_wires(const LabeledMatrix& x,
                            const std::vector<std::string>& order);

// Wires sorted lexicographically by label: the canonical layout tests use.
LabeledMatrix canonical_sort(const LabeledMatrix& x);

// Renames wires (old label -> new label) without touching the data. Labels
// absent from the map are kept; the result must remain collision-free.
LabeledMatrix relabel(const LabeledMatrix& x,
                      const std::map<std::string, std::string>& renames);

// Identity matrix on the given wires.
LabeledMatrix identity_on(const std::vector<Wire>& wires);

// max-abs entry difference after permuting b's wires to a's order; the
// standard "same object" comparison used across the test suites.
double max_abs_diff(const LabeledMatrix& a, const LabeledMatrix& b);

// 1/d_x * (identity on `labels`) tensor tr_labels(x), reinserted so the wire
// order of x is preserved. The trace-and-rescale primitive every projector
// is built from.
LabeledMatrix trace_rescale(const LabeledMatrix& x,
                            const std::vector<std::string>& labels);

}  // namespace hoqo
