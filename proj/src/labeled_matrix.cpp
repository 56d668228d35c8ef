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

#include "hoqo/labeled_matrix.hpp"

#include <set>

namespace hoqo {

void check_unique_labels(const std::vector<Wire>& wires) {
  std::set<std::string> seen;
  for (const Wire& w : wires)
    if (!seen.insert(w.label).second)
      throw DuplicateLabel("wire label '" + w.label + "' repeated");
}

LabeledMatrix::LabeledMatrix(std::vector<Wire> wires, Mat data,
                             bool hermitian_hint)
    : wires_(std::move(wires)), data_(std::move(data)),
      hermitian_hint_(hermitian_hint) {
  check_unique_labels(wires_);
  long side = 1;
  for (const Wire& w : wires_) {
    if (w.dim < 1) throw BadDimension("wire '" + w.label + "' has dim < 1");
    side *= w.dim;
  }
  if (data_.rows() != side)
    throw DimensionMismatch("matrix rows " + std::to_string(data_.rows()) +
                            " != product of wire dims " + std::to_string(side));
  if (data_.cols() != side && data_.cols() != 1)
    throw DimensionMismatch("matrix must be square or a column carrier");
  if (hermitian_hint_) set_hermitian_hint(true);
}

void LabeledMatrix::set_hermitian_hint(bool h) {
  if (h) {
    if (is_vector())
      throw BadStructure("hermitian hint on a column carrier");
    const double dev = hermitian_deviation();
    if (dev > 1e-10)
      throw BadStructure("hermitian hint set but deviation " +
                         std::to_string(dev) + " exceeds 1e-10");
  }
  hermitian_hint_ = h;
}

LabeledMatrix LabeledMatrix::identity(std::vector<Wire> wires) {
  long side = 1;
  for (const Wire& w : wires) side *= w.dim;
  return LabeledMatrix(std::move(wires), Mat::Identity(side, side), true);
}

int LabeledMatrix::wire_pos(const std::string& label) const {
  for (std::size_t k = 0; k < wires_.size(); ++k)
    if (wires_[k].label == label) return static_cast<int>(k);
  return -1;
}

const Wire& LabeledMatrix::wire(const std::string& label) const {
  const int p = wire_pos(label);
  if (p < 0) throw UnknownLabel("no wire labeled '" + label + "'");
  return wires_[p];
}

std::vector<std::string> LabeledMatrix::labels() const {
  std::vector<std::string> out;
  out.reserve(wires_.size());
  for (const Wire& w : wires_) out.push_back(w.label);
  return out;
}

Cplx LabeledMatrix::trace() const {
  if (is_vector()) throw BadStructure("trace of a column carrier");
  return data_.trace();
}

double LabeledMatrix::hermitian_deviation() const {
  if (is_vector()) return 0.0;
  return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace hoqo
