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

#include <optional>
#include <string>
#include <vector>

#include "hoqo/errors.hpp"

namespace hoqo {

// Functional role of a tensor factor. Roles are bookkeeping only: no
// operation changes its numerical behaviour based on the role tag.
enum class Role { input, output, auxiliary, control };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::input: return "input";
    case Role::output: return "output";
    case Role::auxiliary: return "auxiliary";
    case Role::control: return "control";
  }
  return "auxiliary";
}

inline Role role_from_name(const std::string& s) {
  if (s == "input") return Role::input;
  if (s == "output") return Role::output;
  if (s == "auxiliary") return Role::auxiliary;
  if (s == "control") return Role::control;
  throw BadStructure("unknown wire role '" + s + "'");
}

// A labeled finite-dimensional tensor factor: the bookkeeping unit for all
// link-product contractions.
struct Wire {
  std::string label;
  int dim = 1;
  Role role = Role::auxiliary;
  std::optional<int> time_index{};

  Wire() = default;
  Wire(std::string label_, int dim_, Role role_ = Role::auxiliary,
       std::optional<int> time_index_ = std::nullopt)
      : label(std::move(label_)), dim(dim_), role(role_),
        time_index(time_index_) {
    if (dim < 1) throw BadDimension("wire '" + label + "' has dim < 1");
  }
};

inline bool same_wire(const Wire& a, const Wire& b) {
  return a.label == b.label && a.dim == b.dim;
}

// Convenience constructors for the common roles.
inline Wire in_wire(std::string label, int dim,
                    std::optional<int> t = std::nullopt) {
  return Wire(std::move(label), dim, Role::input, t);
}
inline Wire out_wire(std::string label, int dim,
                     std::optional<int> t = std::nullopt) {
  return Wire(std::move(label), dim, Role::output, t);
}
inline Wire aux_wire(std::string label, int dim) {
  return Wire(std::move(label), dim, Role::auxiliary);
}
inline Wire ctrl_wire(std::string label, int dim) {
  return Wire(std::move(label), dim, Role::control);
}

}  // namespace hoqo
