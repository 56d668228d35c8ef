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
#include <optional>
#include <string>
#include <vector>

#include "hoqo/labeled_matrix.hpp"

namespace hoqo {

// One tooth of a comb, earliest first in CombStructure::teeth. The labels
// are named from the perspective of the agent acting on the comb:
// `output_label` is the wire the comb absorbs (the agent's output of the
// previous round), `input_label` the wire the comb emits (the agent's input
// of this round). The first tooth may lack an output (trivial global past),
// the last may lack an input (trivial global future).
struct Tooth {
  std::optional<std::string> output_label;
  std::optional<std::string> input_label;
};

// Ordering data for a comb: its teeth plus a registered dimension per label.
struct CombStructure {
  std::vector<Tooth> teeth;
  std::map<std::string, int> dims;

  // All labels in temporal order (outputs before inputs within a tooth).
  std::vector<std::string> all_labels() const;

  int dim_of(const std::string& label) const;  // throws UnknownLabel
};

// Convenience builder: teeth as ("" = absent) label pairs; dims looked up
// from the registered map passed alongside.
CombStructure make_comb_structure(
    const std::vector<std::pair<std::string, std::string>>& teeth,
    const std::map<std::string, int>& dims);

// Throws BadStructure / BadDimension / DuplicateLabel if the structure
// violates its invariants (labels distinct, dims registered and positive,
// output absent only on the first tooth, input absent only on the last,
// no empty tooth).
void validate_structure(const CombStructure& s);

// The dual ordering: the structure satisfied by testers of combs with
// structure `s`. Every label keeps its identity but swaps role (absorbed
// wires become emitted and vice versa), which re-brackets the teeth: comb
// teeth (a1,e1),...,(an,en) become (-,a1), (e1,a2), ..., (e_{n-1},a_n),
// (en,-), with absent a1 / en dropping the edge teeth.
CombStructure reverse_structure(const CombStructure& s);

// A hierarchy tooth with grouped wires, the form the validator consumes.
// `absorb` are the wires traced out by deeper levels as identity factors,
// `emit` the wires traced at this level.
struct GroupedTooth {
  std::vector<std::string> absorb;
  std::vector<std::string> emit;
};

// Singleton-group view of a CombStructure.
std::vector<GroupedTooth> grouped_teeth(const CombStructure& s);

// One evaluated validity condition; `magnitude` is the violation size on
// the same scale as `tolerance` (<= passes).
struct Condition {
  std::string name;
  bool ok = false;
  double magnitude = 0.0;
  double tolerance = 0.0;
};

// Evaluates the trace hierarchy of `x` against grouped teeth, top tooth
// first: at each level the emitted wires are traced out and the result must
// factor as identity on the absorbed wires tensor the next-lower comb; the
// fully peeled scalar must equal 1. Appends one Condition per level plus a
// final "total trace" condition. Throws LabelMismatch when the teeth do not
// cover exactly the wires of x.
void check_hierarchy(const LabeledMatrix& x,
                     const std::vector<GroupedTooth>& teeth, double tol,
                     std::vector<Condition>& out);

}  // namespace hoqo
