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

#include "hoqo/projector.hpp"

#include <algorithm>
#include <numeric>

#include "hoqo/errors.hpp"
#include "hoqo/tensor_ops.hpp"

namespace hoqo {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw OutOfDomain("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}

struct ProjectorSpec::Node {
  enum class Kind { identity, trace_rescale, sum, compose } kind;
  std::vector<std::string> labels;                  // trace_rescale
  std::vector<std::pair<Rational, std::shared_ptr<const Node>>> terms;  // sum
  std::vector<std::shared_ptr<const Node>> factors;  // compose
};

namespace {

using NodePtr = std::shared_ptr<const ProjectorSpec::Node>;

LabeledMatrix apply_node(const ProjectorSpec::Node& n, const LabeledMatrix& x);

LabeledMatrix scaled(double c, LabeledMatrix m) {
  m.mutable_data() *= c;
  return m;
}

// b permuted to a's wire order, then entrywise sum.
LabeledMatrix add_into(LabeledMatrix a, const LabeledMatrix& b) {
  const LabeledMatrix bp = permute_wires(b, a.labels());
  a.mutable_data() += bp.data();
  if (!bp.hermitian_hint()) a.set_hermitian_hint(false);
  return a;
}

LabeledMatrix apply_node(const ProjectorSpec::Node& n,
                         const LabeledMatrix& x) {
  using Kind = ProjectorSpec::Node::Kind;
  switch (n.kind) {
    case Kind::identity:
      return x;
    case Kind::trace_rescale:
      return n.labels.empty() ? x : trace_rescale(x, n.labels);
    case Kind::sum: {
      LabeledMatrix acc = x;
      acc.mutable_data().setZero();
      for (const auto& [coeff, term] : n.terms)
        acc = add_into(std::move(acc),
                       scaled(coeff.value(), apply_node(*term, x)));
      return acc;
    }
    case Kind::compose: {
      LabeledMatrix acc = x;
      for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it)
        acc = apply_node(**it, acc);
      return acc;
    }
  }
  throw BadStructure("unreachable projector node kind");
}

Rational node_sector_eigenvalue(const ProjectorSpec::Node& n,
                                const std::set<std::string>& sector) {
  using Kind = ProjectorSpec::Node::Kind;
  switch (n.kind) {
    case Kind::identity:
      return Rational(1);
    case Kind::trace_rescale: {
      for (const auto& l : n.labels)
        if (sector.count(l)) return Rational(0);
      return Rational(1);
    }
    case Kind::sum: {
      Rational acc(0);
      for (const auto& [coeff, term] : n.terms)
        acc = acc + coeff * node_sector_eigenvalue(*term, sector);
      return acc;
    }
    case Kind::compose: {
      Rational acc(1);
      for (const auto& f : n.factors)
        acc = acc * node_sector_eigenvalue(*f, sector);
      return acc;
    }
  }
  throw BadStructure("unreachable projector node kind");
}

void collect_scope(const ProjectorSpec::Node& n, std::set<std::string>& out) {
  using Kind = ProjectorSpec::Node::Kind;
  switch (n.kind) {
    case Kind::identity:
      return;
    case Kind::trace_rescale:
      out.insert(n.labels.begin(), n.labels.end());
      return;
    case Kind::sum:
      for (const auto& [c, t] : n.terms) collect_scope(*t, out);
      return;
    case Kind::compose:
      for (const auto& f : n.factors) collect_scope(*f, out);
      return;
  }
}

}  // namespace

ProjectorSpec ProjectorSpec::identity() {
  ProjectorSpec p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::identity;
  p.root_ = std::move(n);
  return p;
}

ProjectorSpec ProjectorSpec::trace_rescale(std::vector<std::string> labels) {
  if (labels.empty()) return identity();
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw DuplicateLabel("repeated label in trace-rescale term");
  ProjectorSpec p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::trace_rescale;
  n->labels = std::move(labels);
  p.root_ = std::move(n);
  return p;
}

ProjectorSpec ProjectorSpec::sum(
    std::vector<std::pair<Rational, ProjectorSpec>> terms) {
  if (terms.empty()) throw BadStructure("projector sum with no terms");
  ProjectorSpec p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::sum;
  for (auto& [c, t] : terms) n->terms.emplace_back(c, t.root_);
  p.root_ = std::move(n);
  return p;
}

ProjectorSpec ProjectorSpec::compose(std::vector<ProjectorSpec> factors) {
  if (factors.empty()) return identity();
  ProjectorSpec p;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::compose;
  for (auto& f : factors) n->factors.push_back(f.root_);
  p.root_ = std::move(n);
  return p;
}

LabeledMatrix ProjectorSpec::apply(const LabeledMatrix& x) const {
  if (x.is_vector())
    throw BadStructure("projectors act on square carriers only");
  if (!root_) throw BadStructure("empty projector");
  return apply_node(*root_, x);
}

Rational ProjectorSpec::sector_eigenvalue(
    const std::set<std::string>& sector) const {
  if (!root_) throw BadStructure("empty projector");
  return node_sector_eigenvalue(*root_, sector);
}

std::set<std::string> ProjectorSpec::scope() const {
  std::set<std::string> out;
  if (root_) collect_scope(*root_, out);
  return out;
}

bool ProjectorSpec::is_projector() const {
  const std::set<std::string> sc = scope();
  const std::vector<std::string> labels(sc.begin(), sc.end());
  if (labels.size() > 30)
    throw DimensionTooLarge("sector enumeration over > 30 labels");
  const std::uint64_t count = std::uint64_t{1} << labels.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::set<std::string> sector;
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (mask & (std::uint64_t{1} << k)) sector.insert(labels[k]);
    const Rational e = sector_eigenvalue(sector);
    if (!(e == Rational(0) || e == Rational(1))) return false;
  }
  return true;
}

ProjectorSpec ProjectorSpec::with_trace_constant(double gamma) const {
  ProjectorSpec p = *this;
  p.trace_constant_ = gamma;
  return p;
}

namespace {

std::vector<std::string> wire_labels(const std::vector<Wire>& ws) {
  std::vector<std::string> out;
  out.reserve(ws.size());
  for (const auto& w : ws) out.push_back(w.label);
  return out;
}

double wire_dim_product(const std::vector<Wire>& ws) {
  double d = 1;
  for (const auto& w : ws) d *= w.dim;
  return d;
}

std::vector<std::string> concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

ProjectorSpec projector_channel(const std::vector<Wire>& in,
                                const std::vector<Wire>& out) {
  const auto li = wire_labels(in);
  const auto lo = wire_labels(out);
  return ProjectorSpec::sum(
             {{Rational(1), ProjectorSpec::identity()},
              {Rational(-1), ProjectorSpec::trace_rescale(lo)},
              {Rational(1), ProjectorSpec::trace_rescale(concat(li, lo))}})
      .with_trace_constant(wire_dim_product(in));
}

ProjectorSpec projector_unital(const std::vector<Wire>& in,
                               const std::vector<Wire>& out) {
  if (wire_dim_product(in) != wire_dim_product(out))
    throw IncompatibleLabels("unital class needs equal in/out dimensions");
  const auto li = wire_labels(in);
  const auto lo = wire_labels(out);
  return ProjectorSpec::sum(
             {{Rational(1), ProjectorSpec::identity()},
              {Rational(-1), ProjectorSpec::trace_rescale(li)},
              {Rational(-1), ProjectorSpec::trace_rescale(lo)},
              {Rational(2), ProjectorSpec::trace_rescale(concat(li, lo))}})
      .with_trace_constant(wire_dim_product(in));
}

ProjectorSpec projector_one_slot_comb(const std::vector<Wire>& in,
                                      const std::vector<Wire>& out) {
  (void)in;  // the class constrains only the output marginal
  return ProjectorSpec::trace_rescale(wire_labels(out))
      .with_trace_constant(wire_dim_product(out));
}

ProjectorSpec projector_trivial() {
  return ProjectorSpec::identity().with_trace_constant(1.0);
}

ProjectorSpec compose_projector(const ProjectorSpec& p_in,
                                const ProjectorSpec& p_out,
                                const std::vector<Wire>& in_labels,
                                const std::vector<Wire>& out_labels) {
  if (!p_in.trace_constant() || !p_out.trace_constant())
    throw IncompatibleLabels(
        "both classes need trace constants to compose");
  std::set<std::string> in_set, out_set;
  for (const auto& w : in_labels)
    if (!in_set.insert(w.label).second)
      throw IncompatibleLabels("repeated input label '" + w.label + "'");
  for (const auto& w : out_labels) {
    if (!out_set.insert(w.label).second)
      throw IncompatibleLabels("repeated output label '" + w.label + "'");
    if (in_set.count(w.label))
      throw IncompatibleLabels("label '" + w.label +
                               "' appears on both sides");
  }
  for (const auto& l : p_in.scope())
    if (!in_set.count(l))
      throw IncompatibleLabels("input projector acts outside in_labels");
  for (const auto& l : p_out.scope())
    if (!out_set.count(l))
      throw IncompatibleLabels("output projector acts outside out_labels");

  const std::vector<std::string> lo = wire_labels(out_labels);
  const std::vector<std::string> lio =
      concat(wire_labels(in_labels), wire_labels(out_labels));
  // P_io[Z] = Z - P_i[Z] + (P_i o P_o)[Z] - P_i[_o Z] + _io Z. The middle
  // term is plain composition: the two scopes are disjoint, so applying
  // both maps is their tensor product.
  ProjectorSpec composed = ProjectorSpec::sum(
      {{Rational(1), ProjectorSpec::identity()},
       {Rational(-1), p_in},
       {Rational(1), ProjectorSpec::compose({p_in, p_out})},
       {Rational(-1),
        ProjectorSpec::compose({p_in, ProjectorSpec::trace_rescale(lo)})},
       {Rational(1), ProjectorSpec::trace_rescale(lio)}});
  const double gamma = (*p_out.trace_constant() / *p_in.trace_constant()) *
                       wire_dim_product(in_labels);
  return composed.with_trace_constant(gamma);
}

ProjectorSpec projector_process_matrix(const Wire& ai, const Wire& ao,
                                       const Wire& bi, const Wire& bo) {
  return compose_projector(projector_channel({ai}, {ao}),
                           projector_one_slot_comb({bi}, {bo}), {ai, ao},
                           {bi, bo});
}

LabeledMatrix project(const ProjectorSpec& p, const LabeledMatrix& x) {
  return p.apply(x);
}

}  // namespace hoqo
