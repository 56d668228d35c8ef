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

#include "hoqo/comb.hpp"

#include <algorithm>
#include <set>

#include "hoqo/errors.hpp"
#include "hoqo/tensor_ops.hpp"

namespace hoqo {

std::vector<std::string> CombStructure::all_labels() const {
  std::vector<std::string> out;
  for (const auto& t : teeth) {
    if (t.output_label) out.push_back(*t.output_label);
    if (t.input_label) out.push_back(*t.input_label);
  }
  return out;
}

int CombStructure::dim_of(const std::string& label) const {
  const auto it = dims.find(label);
  if (it == dims.end()) throw UnknownLabel("no dimension for '" + label + "'");
  return it->second;
}

CombStructure make_comb_structure(
    const std::vector<std::pair<std::string, std::string>>& teeth,
    const std::map<std::string, int>& dims) {
  CombStructure s;
  s.dims = dims;
  for (const auto& [o, i] : teeth) {
    Tooth t;
    if (!o.empty()) t.output_label = o;
    if (!i.empty()) t.input_label = i;
    s.teeth.push_back(std::move(t));
  }
  validate_structure(s);
  return s;
}

void validate_structure(const CombStructure& s) {
  if (s.teeth.empty()) throw BadStructure("comb structure has no teeth");
  std::set<std::string> seen;
  for (std::size_t k = 0; k < s.teeth.size(); ++k) {
    const Tooth& t = s.teeth[k];
    if (!t.output_label && !t.input_label)
      throw BadStructure("empty tooth at position " + std::to_string(k));
    if (!t.output_label && k != 0)
      throw BadStructure("only the first tooth may lack an output label");
    if (!t.input_label && k + 1 != s.teeth.size())
      throw BadStructure("only the last tooth may lack an input label");
    for (const auto* lbl : {&t.output_label, &t.input_label}) {
      if (!*lbl) continue;
      if (!seen.insert(**lbl).second)
        throw DuplicateLabel("label '" + **lbl + "' repeats in comb teeth");
      if (s.dim_of(**lbl) < 1)
        throw BadDimension("dimension of '" + **lbl + "' must be positive");
    }
  }
}

CombStructure reverse_structure(const CombStructure& s) {
  validate_structure(s);
  CombStructure r;
  r.dims = s.dims;
  const std::size_t n = s.teeth.size();
  if (s.teeth.front().output_label)
    r.teeth.push_back(Tooth{std::nullopt, s.teeth.front().output_label});
  for (std::size_t k = 0; k + 1 < n; ++k)
    r.teeth.push_back(
        Tooth{s.teeth[k].input_label, s.teeth[k + 1].output_label});
  if (s.teeth.back().input_label)
    r.teeth.push_back(Tooth{s.teeth.back().input_label, std::nullopt});
  validate_structure(r);
  return r;
}

std::vector<GroupedTooth> grouped_teeth(const CombStructure& s) {
  std::vector<GroupedTooth> out;
  for (const auto& t : s.teeth) {
    GroupedTooth g;
    if (t.output_label) g.absorb.push_back(*t.output_label);
    if (t.input_label) g.emit.push_back(*t.input_label);
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

// Violation size of x == identity_on(idw) (x) rest, scaled as
// tol * max(1, max-abs of the right-hand side).
double factorisation_gap(const LabeledMatrix& x, const LabeledMatrix& rhs) {
  return max_abs_diff(x, rhs);
}

}  // namespace

void check_hierarchy(const LabeledMatrix& x,
                     const std::vector<GroupedTooth>& teeth, double tol,
                     std::vector<Condition>& out) {
  // The teeth must partition exactly the wires of x.
  std::set<std::string> in_teeth;
  for (const auto& t : teeth) {
    for (const auto& l : t.absorb)
      if (!in_teeth.insert(l).second)
        throw DuplicateLabel("label '" + l + "' repeats in teeth");
    for (const auto& l : t.emit)
      if (!in_teeth.insert(l).second)
        throw DuplicateLabel("label '" + l + "' repeats in teeth");
  }
  std::set<std::string> in_x;
  for (const auto& l : x.labels()) in_x.insert(l);
  if (in_teeth != in_x)
    throw LabelMismatch("comb structure labels do not match matrix wires");

  LabeledMatrix current = x;
  const std::size_t n = teeth.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const GroupedTooth& tooth = teeth[n - 1 - idx];  // top (latest) first
    const std::string name = "hierarchy[" + std::to_string(n - idx) + "]";
    LabeledMatrix traced =
        tooth.emit.empty() ? current : partial_trace(current, tooth.emit);
    if (tooth.absorb.empty()) {
      current = std::move(traced);
      continue;  // nothing to factor at this level
    }
    double d_abs = 1.0;
    std::vector<Wire> abs_wires;
    for (const auto& l : tooth.absorb) {
      abs_wires.push_back(traced.wire(l));
      d_abs *= abs_wires.back().dim;
    }
    LabeledMatrix rest = partial_trace(traced, tooth.absorb);
    rest.mutable_data() /= d_abs;
    LabeledMatrix rhs = kron(identity_on(abs_wires), rest);
    const double gap = factorisation_gap(traced, rhs);
    const double scale = std::max(1.0, rhs.data().cwiseAbs().maxCoeff());
    out.push_back(Condition{name, gap <= tol * scale, gap, tol * scale});
    current = std::move(rest);
  }
  if (!current.is_scalar())
    throw LabelMismatch("hierarchy did not reduce to a scalar");
  const double gap = std::abs(current.data()(0, 0) - Cplx(1.0, 0.0));
  out.push_back(Condition{"total trace", gap <= tol, gap, tol});
}

}  // namespace hoqo
