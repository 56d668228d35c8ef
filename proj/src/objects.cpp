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

#include "hoqo/objects.hpp"

#include <algorithm>
#include <set>

#include "hoqo/errors.hpp"
#include "hoqo/link.hpp"
#include "hoqo/rng.hpp"

namespace hoqo {

namespace {

// PSD condition with the dimension-scaled acceptance used everywhere: the
// most negative eigenvalue may not exceed tol * max(1, largest entry).
Condition psd_condition(const std::string& name, const LabeledMatrix& x,
                        double tol) {
  const double scale =
      std::max(1.0, x.data().cwiseAbs().maxCoeff());
  const PsdReport r = check_psd(x, tol * scale);
  const double magnitude =
      std::max(-r.min_eigenvalue, r.hermitian_deviation);
  return Condition{name, r.ok, std::max(magnitude, 0.0), tol * scale};
}

Condition equality_condition(const std::string& name, const LabeledMatrix& lhs,
                             const LabeledMatrix& rhs, double tol) {
  const double gap = max_abs_diff(lhs, rhs);
  const double scale = std::max(1.0, rhs.data().cwiseAbs().maxCoeff());
  return Condition{name, gap <= tol * scale, gap, tol * scale};
}

Verdict finish(std::string kind, std::vector<Condition> conditions) {
  Verdict v;
  v.kind = std::move(kind);
  v.conditions = std::move(conditions);
  v.pass = true;
  for (const Condition& c : v.conditions) {
    if (!c.ok) {
      v.pass = false;
      v.first_violation = c.name;
      v.magnitude = c.magnitude;
      break;
    }
  }
  return v;
}

LabeledMatrix sum_elements(const std::vector<LabeledMatrix>& xs) {
  if (xs.empty()) throw BadStructure("empty element list");
  LabeledMatrix acc = xs.front();
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const LabeledMatrix p = permute_wires(xs[k], acc.labels());
    acc.mutable_data() += p.data();
    if (!p.hermitian_hint()) acc.set_hermitian_hint(false);
  }
  return acc;
}

}  // namespace

ProjectorSpec ProcessMatrixObject::projector() const {
  return projector_process_matrix(mat.wire(ai), mat.wire(ao), mat.wire(bi),
                                  mat.wire(bo));
}

Verdict validate_state(const LabeledMatrix& x, double tol) {
  std::vector<Condition> cs;
  cs.push_back(psd_condition("psd", x, tol));
  const double gap = std::abs(x.trace() - Cplx(1.0, 0.0));
  cs.push_back(Condition{"total trace", gap <= tol, gap, tol});
  return finish("state", std::move(cs));
}

Verdict validate_povm(const std::vector<LabeledMatrix>& effects, double tol) {
  if (effects.empty()) throw BadStructure("POVM with no effects");
  std::vector<Condition> cs;
  for (std::size_t k = 0; k < effects.size(); ++k)
    cs.push_back(
        psd_condition("psd[" + std::to_string(k) + "]", effects[k], tol));
  const LabeledMatrix sum = sum_elements(effects);
  cs.push_back(equality_condition("completeness", sum,
                                  identity_on(sum.wires()), tol));
  return finish("povm", std::move(cs));
}

Verdict validate_channel(const LabeledMatrix& x,
                         const std::vector<std::string>& in,
                         const std::vector<std::string>& out, double tol) {
  std::vector<Condition> cs;
  cs.push_back(psd_condition("psd", x, tol));
  check_hierarchy(x, {GroupedTooth{in, out}}, tol, cs);
  return finish("channel", std::move(cs));
}

Verdict validate_instrument(const std::vector<LabeledMatrix>& elements,
                            const std::vector<std::string>& in,
                            const std::vector<std::string>& out, double tol) {
  if (elements.empty()) throw BadStructure("instrument with no elements");
  std::vector<Condition> cs;
  for (std::size_t k = 0; k < elements.size(); ++k)
    cs.push_back(
        psd_condition("psd[" + std::to_string(k) + "]", elements[k], tol));
  check_hierarchy(sum_elements(elements), {GroupedTooth{in, out}}, tol, cs);
  return finish("instrument", std::move(cs));
}

Verdict validate_comb(const LabeledMatrix& x, const CombStructure& s,
                      double tol) {
  validate_structure(s);
  for (const auto& l : s.all_labels())
    if (!x.has_wire(l) || x.wire(l).dim != s.dim_of(l))
      throw LabelMismatch("structure wire '" + l +
                          "' missing or of wrong dimension");
  std::vector<Condition> cs;
  cs.push_back(psd_condition("psd", x, tol));
  check_hierarchy(x, grouped_teeth(s), tol, cs);
  return finish("comb", std::move(cs));
}

Verdict validate_superinstrument(const SuperinstrumentObject& si, double tol) {
  if (si.elements.empty())
    throw BadStructure("superinstrument with no elements");
  std::vector<Condition> cs;
  for (std::size_t k = 0; k < si.elements.size(); ++k)
    cs.push_back(
        psd_condition("psd[" + std::to_string(k) + "]", si.elements[k], tol));
  const LabeledMatrix sum = sum_elements(si.elements);
  validate_structure(si.structure);
  for (const auto& l : si.structure.all_labels())
    if (!sum.has_wire(l) || sum.wire(l).dim != si.structure.dim_of(l))
      throw LabelMismatch("structure wire '" + l +
                          "' missing or of wrong dimension");
  check_hierarchy(sum, grouped_teeth(si.structure), tol, cs);
  return finish("superinstrument", std::move(cs));
}

Verdict validate_process_matrix(const ProcessMatrixObject& w, double tol) {
  for (const auto& l : {w.ai, w.ao, w.bi, w.bo})
    if (!w.mat.has_wire(l))
      throw LabelMismatch("process matrix lacks wire '" + l + "'");
  if (w.mat.wires().size() != 4)
    throw LabelMismatch("process matrix must carry exactly four wires");
  std::vector<Condition> cs;
  cs.push_back(psd_condition("psd", w.mat, tol));
  const ProjectorSpec p = w.projector();
  cs.push_back(
      equality_condition("projector fixed point", p.apply(w.mat), w.mat, tol));
  const double want = *p.trace_constant();
  const double gap = std::abs(w.mat.trace() - Cplx(want, 0.0));
  const double scale = std::max(1.0, want);
  cs.push_back(
      Condition{"total trace", gap <= tol * scale, gap, tol * scale});
  return finish("process_matrix", std::move(cs));
}

double born_probability(const LabeledMatrix& t, const LabeledMatrix& g) {
  const auto tl = t.labels();
  const auto gl = g.labels();
  const std::set<std::string> ts(tl.begin(), tl.end());
  const std::set<std::string> gs(gl.begin(), gl.end());
  if (ts != gs)
    throw LabelMismatch("tester element and comb must share all wires");
  // link puts the transpose on its first operand: tr(G^T T).
  const LabeledMatrix p = link(g, t);
  return p.data()(0, 0).real();
}

LabeledMatrix conditional_process(const LabeledMatrix& t,
                                  const LabeledMatrix& g) {
  for (const auto& l : g.labels())
    if (!t.has_wire(l))
      throw LabelMismatch("tester element wire '" + l + "' not in the comb");
  return link(g, t);
}

bool SignallingReport::any(const std::string& from,
                           const std::string& to) const {
  for (const auto& e : entries)
    if (e.from == from && e.to == to && e.signalling) return true;
  return false;
}

namespace {

// Wires of the comb that lie temporally before agent slot `slot` (slots are
// 1-based; slot k sits between teeth[k-1].input and teeth[k].output).
std::vector<std::string> wires_before_slot(const CombStructure& s, int slot) {
  std::vector<std::string> out;
  for (int k = 0; k < slot; ++k) {
    const Tooth& t = s.teeth[k];
    if (t.output_label) out.push_back(*t.output_label);
    if (k + 1 < slot && t.input_label) out.push_back(*t.input_label);
  }
  return out;
}

double max_reduced_deviation(const LabeledMatrix& t,
                             const std::string& map_in,
                             const std::string& map_out,
                             const std::vector<std::string>& keep,
                             int probes, Philox& gen) {
  const int d_in = t.wire(map_in).dim;
  const int d_out = t.wire(map_out).dim;
  std::vector<LabeledMatrix> reduced;
  for (int p = 0; p < probes; ++p) {
    const ChoiOperator m = random_cptp_choi(map_in, d_in, map_out, d_out, gen);
    LabeledMatrix linked = link(m.mat, t);
    std::vector<std::string> drop;
    for (const auto& l : linked.labels())
      if (std::find(keep.begin(), keep.end(), l) == keep.end())
        drop.push_back(l);
    reduced.push_back(drop.empty() ? linked : partial_trace(linked, drop));
  }
  double dev = 0.0;
  for (std::size_t a = 0; a < reduced.size(); ++a)
    for (std::size_t b = a + 1; b < reduced.size(); ++b)
      dev = std::max(dev, max_abs_diff(reduced[a], reduced[b]));
  return dev;
}

constexpr int kSignallingProbes = 5;
constexpr std::uint64_t kSignallingSeed = 0x5157u;  // fixed: reports are
                                                    // deterministic

}  // namespace

SignallingReport signalling_report(const LabeledMatrix& t,
                                   const CombStructure& s, double tol) {
  validate_structure(s);
  // Agent slot k (1-based) exists when tooth k emits and tooth k+1 absorbs.
  std::vector<std::pair<std::string, std::string>> slots;  // (in, out) wires
  for (std::size_t k = 0; k + 1 < s.teeth.size(); ++k)
    if (s.teeth[k].input_label && s.teeth[k + 1].output_label)
      slots.emplace_back(*s.teeth[k].input_label,
                         *s.teeth[k + 1].output_label);
  SignallingReport report;
  Philox gen(kSignallingSeed);
  for (std::size_t later = 0; later < slots.size(); ++later) {
    for (std::size_t earlier = 0; earlier < later; ++earlier) {
      // The inserted map reads the comb's emission and writes the wire the
      // comb absorbs next; compare the marginal on the wires up to and
      // including the earlier slot's interface.
      const auto keep =
          wires_before_slot(s, static_cast<int>(earlier) + 2);
      const double dev =
          max_reduced_deviation(t, slots[later].first, slots[later].second,
                                keep, kSignallingProbes, gen);
      SignallingEntry e;
      e.from = "slot" + std::to_string(later + 1);
      e.to = "slot" + std::to_string(earlier + 1);
      e.signalling = dev > tol;
      e.magnitude = dev;
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

SignallingReport signalling_report(const ProcessMatrixObject& w, double tol) {
  SignallingReport report;
  Philox gen(kSignallingSeed);
  const double dev_ab = max_reduced_deviation(w.mat, w.ai, w.ao,
                                              {w.bi, w.bo},
                                              kSignallingProbes, gen);
  report.entries.push_back(SignallingEntry{"A", "B", dev_ab > tol, dev_ab});
  const double dev_ba = max_reduced_deviation(w.mat, w.bi, w.bo,
                                              {w.ai, w.ao},
                                              kSignallingProbes, gen);
  report.entries.push_back(SignallingEntry{"B", "A", dev_ba > tol, dev_ba});
  return report;
}

}  // namespace hoqo
