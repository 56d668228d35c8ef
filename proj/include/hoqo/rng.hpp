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

#include <cstdint>
#include <string>

#include "hoqo/choi.hpp"
#include "hoqo/labeled_matrix.hpp"

namespace hoqo {

// Philox4x32-10 counter-based generator. Chosen over the stdlib engines so
// that every sampled value is bit-identical across platforms and standard
// library versions; seeded results are frozen into tests and reports.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller (hand-rolled: stdlib distributions are
  // not bit-stable across implementations). Generates pairs, caches one.
  double normal();

  // Complex normal with i.i.d. N(0, 1/2) real and imaginary parts, so
  // E[|z|^2] = 1 (the Ginibre convention).
  Cplx cnormal();

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t ctr_[4];
  std::uint32_t out_[4];
  int pos_ = 4;  // consumed entries of out_
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Ginibre matrix: i.i.d. complex normal entries.
Mat ginibre(int rows, int cols, Philox& gen);

// Haar-random d x d unitary (QR of a Ginibre matrix with the R-diagonal
// phase fix).
Mat haar_unitary(int d, Philox& gen);

// Haar-random isometry V: C^{cols} -> C^{rows}, rows >= cols.
Mat haar_isometry(int rows, int cols, Philox& gen);

// Random density matrix GG^dag / tr(GG^dag) on one wire.
LabeledMatrix random_state(const std::string& label, int d, Philox& gen);

// Random CPTP map as a Choi operator on wires (out_label, in_label),
// sampled through a Haar isometry into an environment of dimension
// d_in * d_out (full Kraus rank almost surely).
ChoiOperator random_cptp_choi(const std::string& in_label, int d_in,
                              const std::string& out_label, int d_out,
                              Philox& gen);

// Random Hermitian matrix (GUE-like: (G + G^dag)/2) on the given wires.
LabeledMatrix random_hermitian(const std::vector<Wire>& wires, Philox& gen);

}  // namespace hoqo
