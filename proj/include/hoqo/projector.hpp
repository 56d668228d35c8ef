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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hoqo/labeled_matrix.hpp"
#include "hoqo/wire.hpp"

namespace hoqo {

// Exact rational coefficient for projector sums; kept exact so that sector
// eigenvalues evaluate to true 0/1 rather than floats near them.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);  // normalises, gcd-reduces

  Rational operator+(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  double value() const { return static_cast<double>(num) / den; }
};

// A symbolic linear map on labeled matrices, built from wire-local
// primitives: the identity, the trace-rescale term
// _X[Z] = 1_X/d_X (x) tr_X(Z) on a label set X, rational-coefficient sums,
// and composition. Every primitive acts locally on its labels and as the
// identity elsewhere, so maps with disjoint scopes commute and "tensoring"
// two maps is simply composing them.
//
// A ProjectorSpec may additionally carry a class trace constant: the trace
// shared by all members of the convex set it characterises (e.g. d_in for
// channels). Composition of characterised classes propagates it.
class ProjectorSpec {
 public:
  // The identity map (empty scope).
  static ProjectorSpec identity();

  // The trace-rescale primitive on `labels` (empty set = identity).
  static ProjectorSpec trace_rescale(std::vector<std::string> labels);

  // Linear combination with exact rational coefficients.
  static ProjectorSpec sum(
      std::vector<std::pair<Rational, ProjectorSpec>> terms);

  // Functional composition; factors apply right to left.
  static ProjectorSpec compose(std::vector<ProjectorSpec> factors);

  // Applies the map. Square carriers only.
  LabeledMatrix apply(const LabeledMatrix& x) const;

  // Eigenvalue on a sector: each wire decomposes into 1/sqrt(d) plus a
  // traceless block, and a sector is the set of labels carrying traceless
  // factors. Every primitive is diagonal in that decomposition with
  // eigenvalue 1 (identity) or [sector disjoint from its labels]
  // (trace-rescale), so any expression tree evaluates to an exact rational.
  Rational sector_eigenvalue(const std::set<std::string>& sector) const;

  // All labels the map acts on non-trivially.
  std::set<std::string> scope() const;

  // True iff every sector eigenvalue over subsets of the scope is exactly
  // 0 or 1 (maps built from these primitives are always self-adjoint,
  // unital, and transpose-commuting; idempotence is the one property that
  // needs checking).
  bool is_projector() const;

  // Class trace constant, if this spec characterises a set of HOQOs.
  std::optional<double> trace_constant() const { return trace_constant_; }
  ProjectorSpec with_trace_constant(double gamma) const;

  struct Node;  // expression-tree node; opaque outside the implementation

 private:
  std::shared_ptr<const Node> root_;
  std::optional<double> trace_constant_;
};

// Projector onto (the span of) channel Chois on in/out wires:
// C - _out C + _inout C, trace constant d_in.
ProjectorSpec projector_channel(const std::vector<Wire>& in,
                                const std::vector<Wire>& out);

// Projector for unital channels: C - _in C - _out C + 2 _inout C, trace
// constant d_in (requires d_in == d_out).
ProjectorSpec projector_unital(const std::vector<Wire>& in,
                               const std::vector<Wire>& out);

// Projector onto states sigma_in (x) 1_out (one-slot combs without global
// past and future): _out, trace constant d_out.
ProjectorSpec projector_one_slot_comb(const std::vector<Wire>& in,
                                      const std::vector<Wire>& out);

// The trivial class on an empty (scalar) space: identity, trace constant 1.
ProjectorSpec projector_trivial();

// Projector + trace constant for maps sending the input class to the
// output class:
//   P_io[Z] = Z - P_i[Z] + (P_i o P_o)[Z] - P_i[_o Z] + _io Z,
// with trace constant (gamma_o / gamma_i) * d_i. Both arguments must carry
// trace constants and act within their declared label sets, which must be
// disjoint; otherwise IncompatibleLabels.
ProjectorSpec compose_projector(const ProjectorSpec& p_in,
                                const ProjectorSpec& p_out,
                                const std::vector<Wire>& in_labels,
                                const std::vector<Wire>& out_labels);

// The bipartite process-matrix projector on wires (Ai, Ao, Bi, Bo), built
// by composing the channel class on A with the one-slot-comb class on B;
// trace constant d_Ao * d_Bo.
ProjectorSpec projector_process_matrix(const Wire& ai, const Wire& ao,
                                       const Wire& bi, const Wire& bo);

// Applies p to x. Alias for p.apply(x) matching the operation vocabulary.
LabeledMatrix project(const ProjectorSpec& p, const LabeledMatrix& x);

}  // namespace hoqo
