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

// Link product A * B = tr_shared[(1 x A^T_shared)(B x 1)]: shared labels are
// contracted (partial transpose applied to the FIRST operand), the result
// lives on the symmetric difference, with wires ordered (b-exclusive,
// a-exclusive) and then canonically sorted by label. Fully contracted links
// return a 1x1 scalar carrier with an empty wire list.
LabeledMatrix link(const LabeledMatrix& a, const LabeledMatrix& b);

// Left fold of pairwise link. Requires every label to occur in at most two
// operands; throws TripleLabel otherwise.
LabeledMatrix link_many(const std::vector<LabeledMatrix>& xs);

}  // namespace hoqo
