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

#include <stdexcept>
#include <string>

namespace hoqo {

// Base class for every error thrown by the toolkit.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define HOQO_DEFINE_ERROR(NAME)                                     \
  struct NAME : Error {                                             \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

HOQO_DEFINE_ERROR(DuplicateLabel);
HOQO_DEFINE_ERROR(UnknownLabel);
HOQO_DEFINE_ERROR(BadDimension);
HOQO_DEFINE_ERROR(DimensionMismatch);
HOQO_DEFINE_ERROR(LabelMismatch);
HOQO_DEFINE_ERROR(IncompatibleLabels);
HOQO_DEFINE_ERROR(InvalidChannel);
HOQO_DEFINE_ERROR(TripleLabel);
HOQO_DEFINE_ERROR(BadStructure);
HOQO_DEFINE_ERROR(NumericalRankFailure);
HOQO_DEFINE_ERROR(ConventionViolation);
HOQO_DEFINE_ERROR(OddPartition);
HOQO_DEFINE_ERROR(OutOfDomain);
HOQO_DEFINE_ERROR(NoExactDesign);
HOQO_DEFINE_ERROR(SolverFailure);
HOQO_DEFINE_ERROR(DimensionTooLarge);

#undef HOQO_DEFINE_ERROR

}  // namespace hoqo
