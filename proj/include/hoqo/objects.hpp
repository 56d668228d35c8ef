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

#include "hoqo/comb.hpp"
#include "hoqo/labeled_matrix.hpp"
#include "hoqo/projector.hpp"
#include "hoqo/tensor_ops.hpp"

namespace hoqo {

// Outcome of a validity check: all evaluated conditions in a fixed order
// (positivity first, then the trace hierarchy top-down, then the total
// trace), plus the first violated one for deterministic diagnostics.
struct Verdict {
  bool pass = false;
  std::string kind;
  std::string first_violation;  // empty when pass
  double magnitude = 0.0;       // of the first violation
  std::vector<Condition> conditions;
};

// Bipartite process matrix: a Choi operator over the four wires of two
// parties, each with an input and an output side.
struct ProcessMatrixObject {
  LabeledMatrix mat;
  std::string ai = "Ai", ao = "Ao", bi = "Bi", bo = "Bo";

  ProjectorSpec projector() const;  // the process-matrix projector
};

// A superinstrument (tester): PSD elements on a common wire set whose sum
// satisfies the comb hierarchy of `structure`. The structure stored here is
// already the role-reversed one (see reverse_structure); it is what the
// element sum is validated against.
struct SuperinstrumentObject {
  std::vector<LabeledMatrix> elements;
  CombStructure structure;
};

Verdict validate_state(const LabeledMatrix& x, double tol = kValidityTol);

Verdict validate_povm(const std::vector<LabeledMatrix>& effects,
                      double tol = kValidityTol);

// x is the Choi of a map from `in` wires to `out` wires.
Verdict validate_channel(const LabeledMatrix& x,
                         const std::vector<std::string>& in,
                         const std::vector<std::string>& out,
                         double tol = kValidityTol);

// CP elements summing to a CPTP map.
Verdict validate_instrument(const std::vector<LabeledMatrix>& elements,
                            const std::vector<std::string>& in,
                            const std::vector<std::string>& out,
                            double tol = kValidityTol);

// T >= 0 plus the full trace hierarchy of the structure: tracing the top
// tooth's input wire must leave identity on its output wire tensor the
// next-lower comb, down to a unit scalar.
Verdict validate_comb(const LabeledMatrix& x, const CombStructure& s,
                      double tol = kValidityTol);

Verdict validate_superinstrument(const SuperinstrumentObject& si,
                                 double tol = kValidityTol);

// W >= 0, fixed point of the process-matrix projector, trace d_Ao * d_Bo.
Verdict validate_process_matrix(const ProcessMatrixObject& w,
                                double tol = kValidityTol);

// Spatiotemporal Born rule: tr(G^T T) for a comb T and a tester element G
// on the same wires (reversed roles). A tester element is assembled as the
// tensor product of its instrument Chois (plain) and, when the comb has a
// final emission, the closing POVM effect TRANSPOSED — with that convention
// this reduces exactly to tr(F E(rho)) on a prepare-evolve-measure comb.
// Throws LabelMismatch when the wire sets differ.
double born_probability(const LabeledMatrix& t, const LabeledMatrix& g);

// Links a tester element acting on a subset of t's wires into t, leaving
// the conditional process on the remaining wires. Throws LabelMismatch when
// g carries a wire t does not.
LabeledMatrix conditional_process(const LabeledMatrix& t,
                                  const LabeledMatrix& g);

// One directed signalling probe: CPTP maps were inserted at `from` and the
// reduced object at `to` compared across map choices.
struct SignallingEntry {
  std::string from;
  std::string to;
  bool signalling = false;
  double magnitude = 0.0;  // max observed deviation
};

struct SignallingReport {
  std::vector<SignallingEntry> entries;

  bool any(const std::string& from, const std::string& to) const;
};

// For each ordered pair of slots (j earlier than k), inserts pairs of
// random CPTP maps at slot k and compares the reduced object on the wires
// temporally before slot k; a valid comb never signals backwards.
// Deterministic: probes use a fixed internal seed.
SignallingReport signalling_report(const LabeledMatrix& t,
                                   const CombStructure& s,
                                   double tol = kValidityTol);

// A->B and B->A signalling for a process matrix: insert CPTP maps on one
// party's wires, compare the reduced object on the other party's.
SignallingReport signalling_report(const ProcessMatrixObject& w,
                                   double tol = kValidityTol);

}  // namespace hoqo
