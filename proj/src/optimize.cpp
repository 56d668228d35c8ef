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

#include "hoqo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hoqo/choi.hpp"
#include "hoqo/comb.hpp"
#include "hoqo/designs.hpp"
#include "hoqo/embed.hpp"
#include "hoqo/errors.hpp"
#include "hoqo/link.hpp"
#include "hoqo/projector.hpp"
#include "hoqo/rng.hpp"
#include "hoqo/sdp.hpp"
#include "hoqo/tensor_ops.hpp"

namespace hoqo {
namespace {

// ---------------------------------------------------------------------------
// Orthonormal Hermitian basis machinery.
//
// Every wire of dimension q carries the orthonormal Hermitian basis
// {1/sqrt(q)} + {traceless elements}: the symmetric and antisymmetric
// off-diagonal pairs and the diagonal Helmert ladder. Tensor products of
// per-wire elements give an orthonormal basis of the full operator space,
// graded by the "sector": the set of wires carrying a traceless factor.
// All affine classes in this module are diagonal in that grading, so class
// membership reduces to linear equality rows indexed by sectors.

struct BasisEntry {
  int r = 0;
  int c = 0;
  Cplx v;
};
using BasisElement = std::vector<BasisEntry>;

const std::vector<BasisElement>& herm_basis(int q) {
  static std::map<int, std::vector<BasisElement>> cache;
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  std::vector<BasisElement> basis;
  BasisElement id;
  const double inv = 1.0 / std::sqrt(static_cast<double>(q));
  for (int i = 0; i < q; ++i) id.push_back({i, i, Cplx(inv, 0.0)});
  basis.push_back(std::move(id));
  const double h = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < q; ++r) {
    for (int c = r + 1; c < q; ++c) {
      basis.push_back({{r, c, Cplx(h, 0.0)}, {c, r, Cplx(h, 0.0)}});
      basis.push_back({{r, c, Cplx(0.0, -h)}, {c, r, Cplx(0.0, h)}});
    }
  }
  for (int m = 1; m < q; ++m) {
    BasisElement el;
    const double s = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
    for (int i = 0; i < m; ++i) el.push_back({i, i, Cplx(s, 0.0)});
    el.push_back({m, m, Cplx(-m * s, 0.0)});
    basis.push_back(std::move(el));
  }
  return cache.emplace(q, std::move(basis)).first->second;
}

// One term of a tensor-basis element on the full carrier.
struct CTrip {
  int r = 0;
  int c = 0;
  Cplx v;
};

std::set<std::string> sector_labels(const std::vector<Wire>& ws,
                                    unsigned mask) {
  std::set<std::string> out;
  for (std::size_t w = 0; w < ws.size(); ++w)
    if (mask & (1u << w)) out.insert(ws[w].label);
  return out;
}

// Visits every orthonormal Hermitian tensor-basis element whose traceless
// factors sit exactly on the wires flagged in `mask` (identity factors
// elsewhere), as a list of matrix entries on the full carrier.
void for_each_sector_element(
    const std::vector<Wire>& ws, unsigned mask,
    const std::function<void(const std::vector<CTrip>&)>& visit) {
  const int nw = static_cast<int>(ws.size());
  WireIndexer ix(ws);
  std::vector<int> choice(nw), hi(nw);
  for (int w = 0; w < nw; ++w) {
    const bool in_sector = (mask & (1u << w)) != 0;
    choice[w] = in_sector ? 1 : 0;
    hi[w] = in_sector ? ws[w].dim * ws[w].dim - 1 : 0;
  }
  std::vector<CTrip> acc, next;
  for (;;) {
    acc.assign(1, CTrip{0, 0, Cplx(1.0, 0.0)});
    for (int w = 0; w < nw; ++w) {
      const BasisElement& el = herm_basis(ws[w].dim)[choice[w]];
      next.clear();
      next.reserve(acc.size() * el.size());
      const long str = ix.strides[w];
      for (const CTrip& t : acc) {
        for (const BasisEntry& e : el) {
          next.push_back({t.r + static_cast<int>(e.r * str),
                          t.c + static_cast<int>(e.c * str), t.v * e.v});
        }
      }
      acc.swap(next);
    }
    visit(acc);
    int w = nw - 1;
    while (w >= 0) {
      const bool in_sector = (mask & (1u << w)) != 0;
      if (in_sector && choice[w] < hi[w]) {
        ++choice[w];
        break;
      }
      choice[w] = in_sector ? 1 : 0;
      --w;
    }
    if (w < 0) break;
  }
}

// Appends coef * embed(E) on `block` (complex side n) to `entries`. The
// element's entry list already contains both triangles, so the embedded
// matrix comes out complete and symmetric.
void push_embedded(int block, int n, double coef,
                   const std::vector<CTrip>& trips,
                   std::vector<SdpEntry>* entries) {
  for (const CTrip& t : trips) {
    const double re = coef * t.v.real();
    const double im = coef * t.v.imag();
    if (re != 0.0) {
      entries->push_back({block, t.r, t.c, re});
      entries->push_back({block, t.r + n, t.c + n, re});
    }
    if (im != 0.0) {
      entries->push_back({block, t.r, t.c + n, -im});
      entries->push_back({block, t.r + n, t.c, im});
    }
  }
}

// Hilbert-Schmidt pairing <E, Y> of a basis element with a Hermitian Y.
double herm_inner(const std::vector<CTrip>& trips, const Mat& y) {
  Cplx s(0.0, 0.0);
  for (const CTrip& t : trips) s += std::conj(t.v) * y(t.r, t.c);
  return s.real();
}

// ---------------------------------------------------------------------------
// Comb classes as projector specs.
//
// For teeth [(A_1, E_1), ..., (A_n, E_n)] (absorbed and emitted wire
// groups), the affine span of the comb class is the joint fixed space of
// one channel-class projector per tooth, sending the absorbed group into
// everything later in the causal order; the class trace constant is the
// product of the absorbed dimensions.

ProjectorSpec comb_class(const std::vector<GroupedTooth>& teeth,
                         const std::map<std::string, int>& dim_of) {
  std::vector<ProjectorSpec> factors;
  double gamma = 1.0;
  for (std::size_t j = 0; j < teeth.size(); ++j) {
    for (const std::string& lbl : teeth[j].absorb)
      gamma *= static_cast<double>(dim_of.at(lbl));
    if (teeth[j].absorb.empty()) continue;
    std::vector<Wire> in, out;
    for (const std::string& lbl : teeth[j].absorb)
      in.emplace_back(lbl, dim_of.at(lbl));
    for (const std::string& lbl : teeth[j].emit)
      out.emplace_back(lbl, dim_of.at(lbl));
    for (std::size_t l = j + 1; l < teeth.size(); ++l) {
      for (const std::string& lbl : teeth[l].absorb)
        out.emplace_back(lbl, dim_of.at(lbl));
      for (const std::string& lbl : teeth[l].emit)
        out.emplace_back(lbl, dim_of.at(lbl));
    }
    factors.push_back(projector_channel(in, out));
  }
  ProjectorSpec spec = factors.empty() ? ProjectorSpec::identity()
                                       : ProjectorSpec::compose(factors);
  return spec.with_trace_constant(gamma);
}

std::map<std::string, int> dims_of(const std::vector<Wire>& ws) {
  std::map<std::string, int> out;
  for (const Wire& w : ws) out[w.label] = w.dim;
  return out;
}

// ---------------------------------------------------------------------------
// Solver plumbing.

OptStatus to_opt_status(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return OptStatus::optimal;
    case SdpStatus::near_optimal: return OptStatus::near_optimal;
    default: return OptStatus::failed;
  }
}

void require_solved(const SdpSolution& sol, const std::string& who) {
  if (sol.status != SdpStatus::failed) return;
  std::ostringstream os;
  os << who << ": solver failed after " << sol.iterations
     << " iterations (primal residual " << sol.primal_residual
     << ", dual residual " << sol.dual_residual << ", gap " << sol.gap
     << ")";
  throw SolverFailure(os.str());
}

// Appends one equality row per basis element of the sector, on one block,
// with right-hand side 0.
void append_span_rows(const std::vector<Wire>& ws, unsigned mask, int block,
                      int n, SdpProblem* prob) {
  for_each_sector_element(ws, mask, [&](const std::vector<CTrip>& trips) {
    SdpConstraint row;
    push_embedded(block, n, 1.0, trips, &row.entries);
    row.rhs = 0.0;
    prob->constraints.push_back(std::move(row));
  });
}

// Appends the trace row <1, X_block> = gamma (complex convention) to the
// problem; the embedded right-hand side carries the factor 2.
void append_trace_row(const std::vector<Wire>& ws, int block, int n,
                      double gamma, SdpProblem* prob) {
  for_each_sector_element(ws, 0u, [&](const std::vector<CTrip>& trips) {
    SdpConstraint row;
    push_embedded(block, n, 1.0, trips, &row.entries);
    row.rhs = 2.0 * gamma / std::sqrt(static_cast<double>(n));
    prob->constraints.push_back(std::move(row));
  });
}

// ---------------------------------------------------------------------------
// Witness core: random-robustness dual shared by the witness front ends.
//
// Minimises <N0, M> subject to T1 + T2 - M matching the class component of
// W on every sector, with T1 and T2 PSD inside the two order cones and M
// PSD inside the class span; N0 is the white-noise member of the class.
// The witness is recovered from the multipliers of the matching rows: it
// is the class projection of their weighted basis sum, scaled so that
// tr(W D) equals minus the optimum, and is non-negative on both cones by
// dual feasibility.

struct WitnessProblem {
  LabeledMatrix w;      // canonical carrier
  ProjectorSpec cone1;  // span of the first order cone
  ProjectorSpec cone2;  // span of the second order cone
  ProjectorSpec cls;    // affine class, with trace constant
};

OptResult solve_witness(const WitnessProblem& wp, const std::string& who,
                        const SdpOptions& opts) {
  const std::vector<Wire>& ws = wp.w.wires();
  const int nw = static_cast<int>(ws.size());
  const int n = static_cast<int>(wp.w.data().rows());
  const LabeledMatrix pw = project(wp.cls, wp.w);
  const double gamma = wp.cls.trace_constant().value();

  SdpProblem prob;
  prob.block_dims = {2 * n, 2 * n, 2 * n};
  const Mat n0 = (gamma / n) * Mat::Identity(n, n);
  prob.objective.assign(3, Eigen::MatrixXd::Zero(2 * n, 2 * n));
  prob.objective[2] = embed(n0) * 0.5;

  struct LinkRow {
    std::vector<CTrip> trips;
    int index;
  };
  std::vector<LinkRow> linking;
  const Rational one(1);
  for (unsigned mask = 0; mask < (1u << nw); ++mask) {
    const std::set<std::string> sec = sector_labels(ws, mask);
    const bool z1 = !(wp.cone1.sector_eigenvalue(sec) == one);
    const bool z2 = !(wp.cone2.sector_eigenvalue(sec) == one);
    const bool zp = !(wp.cls.sector_eigenvalue(sec) == one);
    for_each_sector_element(ws, mask, [&](const std::vector<CTrip>& trips) {
      if (z1) {
        SdpConstraint row;
        push_embedded(0, n, 1.0, trips, &row.entries);
        row.rhs = 0.0;
        prob.constraints.push_back(std::move(row));
      }
      if (z2) {
        SdpConstraint row;
        push_embedded(1, n, 1.0, trips, &row.entries);
        row.rhs = 0.0;
        prob.constraints.push_back(std::move(row));
      }
      if (zp) {
        SdpConstraint row;
        push_embedded(2, n, 1.0, trips, &row.entries);
        row.rhs = 0.0;
        prob.constraints.push_back(std::move(row));
      }
      // The matching row is linearly dependent on the three span rows
      // exactly when the sector is annihilated by all three classes.
      if (!(z1 && z2 && zp)) {
        SdpConstraint row;
        push_embedded(0, n, 1.0, trips, &row.entries);
        push_embedded(1, n, 1.0, trips, &row.entries);
        push_embedded(2, n, -1.0, trips, &row.entries);
        row.rhs = 2.0 * herm_inner(trips, pw.data());
        linking.push_back({trips, static_cast<int>(prob.constraints.size())});
        prob.constraints.push_back(std::move(row));
      }
    });
  }

  const SdpSolution sol = solve_sdp(prob, opts);
  require_solved(sol, who);

  Mat lam = Mat::Zero(n, n);
  for (const LinkRow& lr : linking) {
    const double y = sol.y[lr.index];
    for (const CTrip& t : lr.trips) lam(t.r, t.c) += y * t.v;
  }
  const LabeledMatrix d_raw = project(wp.cls, LabeledMatrix(ws, lam, true));

  OptResult res;
  res.value = -sol.primal_objective;
  res.optimiser = LabeledMatrix(ws, Mat(-2.0 * d_raw.data()), true);
  res.status = to_opt_status(sol.status);
  res.gap = sol.gap;
  return res;
}

// GYNI wires (qubits throughout).
const Wire kGyniAi("Ai", 2, Role::input);
const Wire kGyniAo("Ao", 2, Role::output);
const Wire kGyniBi("Bi", 2, Role::input);
const Wire kGyniBo("Bo", 2, Role::output);

}  // namespace

// ---------------------------------------------------------------------------
// Performance operator.

PerformanceOperator performance_operator(UnitaryTask task, int d, int k,
                                         AverageMethod method, int samples,
                                         std::uint64_t seed) {
  if (d < 2)
    throw OutOfDomain("performance_operator: need d >= 2, got " +
                      std::to_string(d));
  if (k < 1 || k > 2)
    throw OutOfDomain("performance_operator: need k in {1, 2}, got " +
                      std::to_string(k));
  const Wire p("P", d, Role::input);
  const Wire f("F", d, Role::output);
  std::vector<Wire> slot_in, slot_out;
  for (int j = 1; j <= k; ++j) {
    slot_in.emplace_back(std::to_string(j) + "i", d, Role::input);
    slot_out.emplace_back(std::to_string(j) + "o", d, Role::output);
  }

  std::vector<Wire> carrier;
  auto term = [&](const Mat& u) -> Mat {
    Mat v = u;
    if (task == UnitaryTask::conjugation) v = u.conjugate();
    if (task == UnitaryTask::transposition) v = u.transpose();
    LabeledMatrix out =
        partial_transpose(choi_of_operator(v, {f}, {p}), {"P", "F"});
    for (int j = 0; j < k; ++j)
      out = kron(out, choi_of_operator(u, {slot_out[j]}, {slot_in[j]}));
    if (carrier.empty()) carrier = out.wires();
    return out.data();
  };

  Mat acc;
  double sumsq = 0.0;
  int count = 0;
  std::optional<double> se;
  if (method == AverageMethod::design) {
    if (!design_covers(d, k + 1))
      throw NoExactDesign("performance_operator: no registered design covers d=" +
                          std::to_string(d) + ", k=" + std::to_string(k));
    const UnitaryDesign& des = unitary_design(d);
    for (const Mat& g : des.elements) {
      Mat t = term(g);
      if (count == 0) acc = t; else acc += t;
      ++count;
    }
  } else {
    if (samples < 1)
      throw OutOfDomain("performance_operator: need samples >= 1");
    Philox gen(seed);
    for (int i = 0; i < samples; ++i) {
      Mat t = term(haar_unitary(d, gen)) / static_cast<double>(d * d);
      if (count == 0) acc = t; else acc += t;
      sumsq += t.squaredNorm();
      ++count;
    }
  }
  Mat mean = acc / static_cast<double>(count);
  if (method == AverageMethod::design) {
    mean /= static_cast<double>(d * d);
  } else {
    const double var =
        std::max(0.0, sumsq / count - mean.squaredNorm());
    se = std::sqrt(var / count);
  }
  mean = 0.5 * (mean + Mat(mean.adjoint()));

  PerformanceOperator po;
  po.mat = canonical_sort(LabeledMatrix(carrier, std::move(mean), true));
  po.task = task;
  po.d = d;
  po.k = k;
  po.std_error = se;
  return po;
}

// ---------------------------------------------------------------------------
// Optimal fidelity SDP.

OptResult optimal_fidelity(UnitaryTask task, int d, int k,
                           Strategy strategy) {
  const AverageMethod method = design_covers(d, k + 1)
                                   ? AverageMethod::design
                                                   : AverageMethod::montecarlo;
  const PerformanceOperator po = performance_operator(task, d, k, method);
  const LabeledMatrix omega = canonical_sort(po.mat);
  const std::vector<Wire>& ws = omega.wires();
  const int nw = static_cast<int>(ws.size());
  const int n = static_cast<int>(omega.data().rows());
  const std::map<std::string, int> dm = dims_of(ws);

  ProjectorSpec cls;
  if (strategy == Strategy::sequential) {
    std::vector<GroupedTooth> teeth;
    teeth.push_back({{"P"}, {"1i"}});
    for (int j = 1; j < k; ++j)
      teeth.push_back({{std::to_string(j) + "o"},
                       {std::to_string(j + 1) + "i"}});
    teeth.push_back({{std::to_string(k) + "o"}, {"F"}});
    cls = comb_class(teeth, dm);
  } else {
    std::vector<Wire> slots, slot_in, slot_out;
    for (int j = 1; j <= k; ++j) {
      slot_in.emplace_back(std::to_string(j) + "i", d, Role::input);
      slot_out.emplace_back(std::to_string(j) + "o", d, Role::output);
    }
    slots = slot_in;
    slots.insert(slots.end(), slot_out.begin(), slot_out.end());
    const Wire p("P", d, Role::input), f("F", d, Role::output);
    cls = compose_projector(projector_channel(slot_in, slot_out),
                            projector_channel({p}, {f}), slots, {p, f});
  }
  const double gamma = cls.trace_constant().value();

  SdpProblem prob;
  prob.block_dims = {2 * n};
  prob.objective = {embed(Mat(-omega.data().transpose())) * 0.5};
  const Rational one(1);
  for (unsigned mask = 1; mask < (1u << nw); ++mask) {
    if (cls.sector_eigenvalue(sector_labels(ws, mask)) == one) continue;
    append_span_rows(ws, mask, 0, n, &prob);
  }
  append_trace_row(ws, 0, n, gamma, &prob);

  const SdpSolution sol = solve_sdp(prob);
  require_solved(sol, "optimal_fidelity");

  OptResult res;
  res.value = std::max(0.0, -sol.primal_objective);
  res.optimiser = LabeledMatrix(ws, unembed(sol.x[0]), true);
  res.status = to_opt_status(sol.status);
  res.gap = sol.gap;
  return res;
}

// ---------------------------------------------------------------------------
// Causal witnesses.

OptResult causal_witness(const ProcessMatrixObject& w) {
  const Verdict v = validate_process_matrix(w);
  if (!v.pass)
    throw BadStructure("causal_witness: input is not a valid process matrix (" +
                       v.first_violation + ")");
  WitnessProblem wp;
  wp.w = canonical_sort(w.mat);
  // The two order cones are the full comb classes: positive matrices
  // supported on the affine span of the combs with the respective order.
  // (The weaker single trace-and-replace conditions admit matrices outside
  // the process-matrix span and would under-report the witness value.)
  const std::map<std::string, int> dm = dims_of(wp.w.wires());
  wp.cone1 = comb_class({{{}, {w.ai}}, {{w.ao}, {w.bi}}, {{w.bo}, {}}}, dm);
  wp.cone2 = comb_class({{{}, {w.bi}}, {{w.bo}, {w.ai}}, {{w.ao}, {}}}, dm);
  wp.cls = w.projector();
  return solve_witness(wp, "causal_witness", SdpOptions{});
}

OptResult switch_witness(const LabeledMatrix& s, int d) {
  if (d > 2)
    throw DimensionTooLarge("switch_witness: only d <= 2 is supported, got " +
                            std::to_string(d));
  LabeledMatrix w = canonical_sort(s);

  const std::vector<std::string> party = {"Ai", "Ao", "Bi", "Bo"};
  for (const std::string& lbl : party) {
    bool found = false;
    for (const Wire& wi : w.wires()) {
      if (wi.label != lbl) continue;
      found = true;
      if (wi.dim != d)
        throw BadStructure("switch_witness: wire '" + lbl + "' has dim " +
                           std::to_string(wi.dim) + ", expected " +
                           std::to_string(d));
    }
    if (!found)
      throw BadStructure("switch_witness: missing party wire '" + lbl + "'");
  }

  // Reduce the global past: control in |+>, target input maximally mixed.
  auto dim_of_label = [&](const std::string& lbl) -> int {
    for (const Wire& wi : w.wires())
      if (wi.label == lbl) return wi.dim;
    return 0;
  };
  if (int dc = dim_of_label("C")) {
    Mat plus = Mat::Constant(dc, dc, Cplx(1.0 / dc, 0.0));
    w = link(w, LabeledMatrix({Wire("C", dc)}, std::move(plus), true));
  }
  if (int dp = dim_of_label("P")) {
    Mat mixed = Mat::Identity(dp, dp) / static_cast<double>(dp);
    w = link(w, LabeledMatrix({Wire("P", dp)}, std::move(mixed), true));
  }
  w = canonical_sort(w);

  const std::vector<Wire>& ws = w.wires();
  const std::map<std::string, int> dm = dims_of(ws);
  std::vector<std::string> future;
  for (const Wire& wi : ws)
    if (std::find(party.begin(), party.end(), wi.label) == party.end())
      future.push_back(wi.label);

  WitnessProblem wp;
  wp.w = w;
  wp.cone1 = comb_class({{{}, {"Ai"}}, {{"Ao"}, {"Bi"}}, {{"Bo"}, future}}, dm);
  wp.cone2 = comb_class({{{}, {"Bi"}}, {{"Bo"}, {"Ai"}}, {{"Ao"}, future}}, dm);

  // Class: processes sending non-signalling party channels to states on
  // the future wires.
  const Wire ai("Ai", d, Role::input), ao("Ao", d, Role::output);
  const Wire bi("Bi", d, Role::input), bo("Bo", d, Role::output);
  ProjectorSpec ns =
      ProjectorSpec::compose({projector_channel({ai}, {ao}),
                              projector_channel({bi}, {bo}),
                              projector_channel({ai, bi}, {ao, bo})})
          .with_trace_constant(static_cast<double>(d) * d);
  std::vector<Wire> future_wires;
  for (const std::string& lbl : future)
    future_wires.emplace_back(lbl, dm.at(lbl));
  wp.cls = compose_projector(ns, projector_trivial(), {ai, ao, bi, bo},
                             future_wires);

  return solve_witness(wp, "switch_witness", SdpOptions{});
}

// ---------------------------------------------------------------------------
// Closed forms.

double closed_form(ClosedFormTask task, int d, int k) {
  if (d < 2)
    throw OutOfDomain("closed_form: need d >= 2, got " + std::to_string(d));
  if (k < 1)
    throw OutOfDomain("closed_form: need k >= 1, got " + std::to_string(k));
  switch (task) {
    case ClosedFormTask::conjugation_fidelity:
      if (k >= d)
        throw OutOfDomain(
            "closed_form: conjugation fidelity needs k < d, got k=" +
            std::to_string(k) + ", d=" + std::to_string(d));
      return static_cast<double>(k + 1) / (static_cast<double>(d) * (d - k));
    case ClosedFormTask::conjugation_probability:
      return k >= d - 1 ? 1.0 : 0.0;
    case ClosedFormTask::transposition_probability:
      return 1.0 - static_cast<double>(d * d - 1) / (k + d * d - 1);
    case ClosedFormTask::sar_fidelity: {
      if (d != 2)
        throw OutOfDomain("closed_form: SAR fidelity is only known for d = 2");
      const double s = std::sin(M_PI / (k + 3));
      return 1.0 - s * s;
    }
    case ClosedFormTask::sar_probability:
      return 1.0 - static_cast<double>(d * d) / (k + d * d - 1);
  }
  throw OutOfDomain("closed_form: unknown task");
}

// ---------------------------------------------------------------------------
// GYNI.

double gyni_value(const LabeledMatrix& w,
                  const std::vector<LabeledMatrix>& alice,
                  const std::vector<LabeledMatrix>& bob) {
  if (alice.size() != 4 || bob.size() != 4)
    throw BadStructure("gyni_value: expected 4 instrument elements per party");
  double total = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const LabeledMatrix s =
          link_many({w, alice[2 * x + y], bob[2 * y + x]});
      total += s.data()(0, 0).real();
    }
  }
  return total / 4.0;
}

namespace {

// Prebuilt process-step SDP: constraint rows are fixed, the objective is
// refreshed every sweep.
struct ProcessStep {
  SdpProblem prob;
  std::vector<Wire> ws;
  int n = 0;
};

ProcessStep make_process_step(GyniClass w_class) {
  ProcessStep st;
  st.ws = {kGyniAi, kGyniAo, kGyniBi, kGyniBo};
  st.n = 16;
  ProjectorSpec cls;
  if (w_class == GyniClass::process_matrix) {
    cls = projector_process_matrix(kGyniAi, kGyniAo, kGyniBi, kGyniBo);
  } else {
    cls = comb_class({{{}, {"Ai"}}, {{"Ao"}, {"Bi"}}, {{"Bo"}, {}}},
                     dims_of(st.ws));
  }
  st.prob.block_dims = {2 * st.n};
  st.prob.objective = {Eigen::MatrixXd::Zero(2 * st.n, 2 * st.n)};
  const Rational one(1);
  for (unsigned mask = 1; mask < 16u; ++mask) {
    if (cls.sector_eigenvalue(sector_labels(st.ws, mask)) == one) continue;
    append_span_rows(st.ws, mask, 0, st.n, &st.prob);
  }
  append_trace_row(st.ws, 0, st.n, cls.trace_constant().value(), &st.prob);
  return st;
}

struct StepResult {
  LabeledMatrix mat;
  OptStatus status = OptStatus::failed;
  double gap = 0.0;
};

StepResult solve_process_step(ProcessStep* st, const Mat& pairing) {
  st->prob.objective[0] = embed(Mat(-pairing.transpose())) * 0.5;
  const SdpSolution sol = solve_sdp(st->prob);
  require_solved(sol, "gyni_seesaw");
  return {LabeledMatrix(st->ws, unembed(sol.x[0]), true),
          to_opt_status(sol.status), sol.gap};
}

// Best-response instruments for one party against fixed opponents.
std::vector<LabeledMatrix> instrument_step(
    const LabeledMatrix& w, const std::vector<LabeledMatrix>& other,
    const Wire& in, const Wire& out) {
  const std::vector<Wire> ws = {in, out};
  const int n = in.dim * out.dim;
  SdpProblem prob;
  prob.block_dims.assign(4, 2 * n);
  prob.objective.assign(4, Eigen::MatrixXd());
  for (int idx = 0; idx < 4; ++idx) {
    const int s = idx / 2, o = idx % 2;
    // Element M^{o|s} meets the opponent element with outcome s under
    // setting o in the two game terms it enters.
    const LabeledMatrix reward =
        canonical_sort(link(other[2 * o + s], w));
    prob.objective[idx] =
        embed(Mat(-0.25 * reward.data().transpose())) * 0.5;
  }
  // Per-setting trace preservation of the element sums.
  const std::vector<BasisElement>& fb = herm_basis(in.dim);
  for (int s = 0; s < 2; ++s) {
    for (std::size_t beta = 0; beta < fb.size(); ++beta) {
      std::vector<CTrip> trips;
      for (const BasisEntry& e : fb[beta]) {
        for (int q = 0; q < out.dim; ++q)
          trips.push_back({e.r * out.dim + q, e.c * out.dim + q, e.v});
      }
      SdpConstraint row;
      push_embedded(2 * s + 0, n, 1.0, trips, &row.entries);
      push_embedded(2 * s + 1, n, 1.0, trips, &row.entries);
      row.rhs = beta == 0 ? 2.0 * std::sqrt(static_cast<double>(in.dim)) : 0.0;
      prob.constraints.push_back(std::move(row));
    }
  }
  const SdpSolution sol = solve_sdp(prob);
  require_solved(sol, "gyni_seesaw");
  std::vector<LabeledMatrix> els;
  els.reserve(4);
  for (int idx = 0; idx < 4; ++idx)
    els.emplace_back(ws, unembed(sol.x[idx]), true);
  return els;
}

// Random instrument family: a Haar isometry from the input into
// output x outcome x environment, with the outcome register measured and
// the environment traced out.
std::vector<LabeledMatrix> random_instruments(const Wire& in, const Wire& out,
                                              Philox* gen) {
  std::vector<LabeledMatrix> els;
  els.reserve(4);
  const int di = in.dim, dout = out.dim;
  for (int s = 0; s < 2; ++s) {
    const Mat v = haar_isometry(dout * 2 * 2, di, *gen);
    for (int o = 0; o < 2; ++o) {
      bool first = true;
      LabeledMatrix el;
      for (int e = 0; e < 2; ++e) {
        Mat kraus(dout, di);
        for (int r = 0; r < dout; ++r)
          for (int c = 0; c < di; ++c) kraus(r, c) = v((r * 2 + o) * 2 + e, c);
        LabeledMatrix piece = choi_of_operator(kraus, {out}, {in});
        if (first) {
          el = piece;
          first = false;
        } else {
          el = LabeledMatrix(el.wires(), Mat(el.data() + piece.data()), true);
        }
      }
      els.push_back(canonical_sort(el));
    }
  }
  return els;
}

}  // namespace

GyniResult gyni_seesaw(int restarts, std::uint64_t seed, GyniClass w_class) {
  if (restarts < 1)
    throw OutOfDomain("gyni_seesaw: need restarts >= 1, got " +
                      std::to_string(restarts));
  ProcessStep step = make_process_step(w_class);

  GyniResult out;
  out.best.value = -1.0;
  for (int r = 0; r < restarts; ++r) {
    Philox gen(seed, static_cast<std::uint64_t>(r));
    try {
      std::vector<LabeledMatrix> alice =
          random_instruments(kGyniAi, kGyniAo, &gen);
      std::vector<LabeledMatrix> bob =
          random_instruments(kGyniBi, kGyniBo, &gen);
      std::vector<double> iterates;
      StepResult wres;
      double val = -1.0;
      for (int it = 0; it < 200; ++it) {
        Mat pairing = Mat::Zero(16, 16);
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            pairing += kron(alice[2 * x + y], bob[2 * y + x]).data();
        pairing /= 4.0;
        wres = solve_process_step(&step, pairing);
        alice = instrument_step(wres.mat, bob, kGyniAi, kGyniAo);
        bob = instrument_step(wres.mat, alice, kGyniBi, kGyniBo);
        const double v = gyni_value(wres.mat, alice, bob);
        iterates.push_back(v);
        const bool converged = it > 0 && v - val < 1e-7;
        val = std::max(val, v);
        if (converged) break;
      }
      out.run_values.push_back(val);
      out.run_iterates.push_back(std::move(iterates));
      if (val > out.best.value) {
        out.best.value = val;
        out.best.optimiser = wres.mat;
        out.best.status = wres.status;
        out.best.gap = wres.gap;
        out.alice = alice;
        out.bob = bob;
      }
    } catch (const SolverFailure&) {
      ++out.skipped_restarts;
    }
  }
  if (out.run_values.empty())
    throw SolverFailure("gyni_seesaw: every restart failed to solve");
  return out;
}

}  // namespace hoqo
