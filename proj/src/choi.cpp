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

#include "hoqo/choi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <set>

#include "hoqo/link.hpp"

namespace hoqo {

void validate_kraus(const KrausSet& k, double tol) {
  if (k.kraus.empty()) throw BadStructure("empty Kraus set");
  const long dout = k.kraus.front().rows(), din = k.kraus.front().cols();
  for (const Mat& m : k.kraus)
    if (m.rows() != dout || m.cols() != din)
      throw DimensionMismatch("Kraus members have unequal dimensions");
  Mat acc = Mat::Zero(din, din);
  for (const Mat& m : k.kraus) acc += m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es((acc + acc.adjoint()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1.0 + tol)
    throw BadStructure("Kraus set exceeds trace preservation: max eig of "
                       "sum K^dag K is " +
                       std::to_string(es.eigenvalues().maxCoeff()));
}

bool is_trace_preserving(const KrausSet& k, double tol) {
  const long din = k.kraus.front().cols();
  Mat acc = Mat::Zero(din, din);
  for (const Mat& m : k.kraus) acc += m.adjoint() * m;
  return (acc - Mat::Identity(din, din)).cwiseAbs().maxCoeff() <= tol;
}

ChoiOperator make_choi(LabeledMatrix mat, std::vector<std::string> map_inputs,
                       std::vector<std::string> map_outputs) {
  std::set<std::string> all;
  for (const std::string& l : map_inputs)
    if (!all.insert(l).second)
      throw DuplicateLabel("choi input label '" + l + "' repeated");
  for (const std::string& l : map_outputs)
    if (!all.insert(l).second)
      throw DuplicateLabel("choi output label '" + l + "' repeated");
  std::set<std::string> carried;
  for (const Wire& w : mat.wires()) carried.insert(w.label);
  if (carried != all)
    throw LabelMismatch(
        "choi input/output labels must partition the carried wires");
  return ChoiOperator{std::move(mat), std::move(map_inputs),
                      std::move(map_outputs)};
}

ChoiOperator choi_of_kraus(const KrausSet& k) {
  validate_kraus(k);
  const long dout = k.d_out(), din = k.d_in();
  Mat c = Mat::Zero(dout * din, dout * din);
  for (const Mat& m : k.kraus) {
    const LabeledMatrix v = vectorize(m, k.in_label, k.out_label);
    c += v.data().col(0) * v.data().col(0).adjoint();
  }
  LabeledMatrix lm({out_wire(k.out_label, static_cast<int>(dout)),
                    in_wire(k.in_label, static_cast<int>(din))},
                   std::move(c), true);
  return make_choi(std::move(lm), {k.in_label}, {k.out_label});
}

LabeledMatrix choi_of_operator(const Mat& k, const std::vector<Wire>& out_wires,
                               const std::vector<Wire>& in_wires) {
  long dout = 1, din = 1;
  for (const Wire& w : out_wires) dout *= w.dim;
  for (const Wire& w : in_wires) din *= w.dim;
  if (k.rows() != dout || k.cols() != din)
    throw DimensionMismatch("operator shape does not match the wire groups");
  Vec v(dout * din);
  for (long a = 0; a < dout; ++a)
    for (long i = 0; i < din; ++i) v(a * din + i) = k(a, i);
  std::vector<Wire> wires = out_wires;
  wires.insert(wires.end(), in_wires.begin(), in_wires.end());
  return LabeledMatrix(std::move(wires), v * v.adjoint(), true);
}

LabeledMatrix apply_choi(const ChoiOperator& c, const LabeledMatrix& rho) {
  std::vector<std::string> have = rho.labels(), want = c.map_inputs;
  std::sort(have.begin(), have.end());
  std::sort(want.begin(), want.end());
  if (have != want)
    throw LabelMismatch("state wires do not match the map inputs");
  // tr_in[C (1_out x rho^T)] is the link product with the transpose falling
  // on the first operand.
  return link(rho, c.mat);
}

}  // namespace hoqo
