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

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "hoqo/errors.hpp"
#include "hoqo/wire.hpp"

namespace hoqo {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Composite indices are row-major with the FIRST wire in the list as the
// most significant digit; every operation relies on this convention.
struct WireIndexer {
  std::vector<int> dims;
  std::vector<long> strides;
  long total = 1;

  WireIndexer() = default;
  explicit WireIndexer(const std::vector<Wire>& wires) {
    dims.reserve(wires.size());
    for (const Wire& w : wires) dims.push_back(w.dim);
    strides.assign(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (k + 1 < dims.size()) strides[k] = strides[k + 1] * dims[k + 1];
      total *= dims[k];
    }
  }

  long index(const std::vector<int>& digits) const {
    long idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
      idx += digits[k] * strides[k];
    return idx;
  }

  std::vector<int> digits(long idx) const {
    std::vector<int> d(dims.size(), 0);
    for (std::size_t k = dims.size(); k-- > 0;) {
      d[k] = static_cast<int>(idx % dims[k]);
      idx /= dims[k];
    }
    return d;
  }
};

// The universal carrier of every Choi object: a complex square matrix over
// an ordered list of wires. A column carrier (side x 1) represents a
// vectorised operator; square-only operations reject it.
class LabeledMatrix {
 public:
  LabeledMatrix() : data_(Mat::Ones(1, 1)) {}

  LabeledMatrix(std::vector<Wire> wires, Mat data, bool hermitian_hint = false);

  static LabeledMatrix scalar(Cplx value) {
    LabeledMatrix s;
    s.data_(0, 0) = value;
    s.hermitian_hint_ = std::abs(value.imag()) <= 1e-10;
    return s;
  }

  static LabeledMatrix identity(std::vector<Wire> wires);

  const std::vector<Wire>& wires() const { return wires_; }
  const Mat& data() const { return data_; }
  Mat& mutable_data() { return data_; }
  bool hermitian_hint() const { return hermitian_hint_; }
  void set_hermitian_hint(bool h);

  long side() const { return data_.rows(); }
  bool is_vector() const { return data_.cols() == 1 && data_.rows() > 1; }
  bool is_scalar() const { return wires_.empty(); }

  bool has_wire(const std::string& label) const { return wire_pos(label) >= 0; }
  int wire_pos(const std::string& label) const;
  const Wire& wire(const std::string& label) const;

  std::vector<std::string> labels() const;
  WireIndexer indexer() const { return WireIndexer(wires_); }

  Cplx trace() const;
  double hermitian_deviation() const;

 private:
  std::vector<Wire> wires_;
  Mat data_;
  bool hermitian_hint_ = false;
};

// Throws DuplicateLabel if the wire list repeats a label.
void check_unique_labels(const std::vector<Wire>& wires);

}  // namespace hoqo
