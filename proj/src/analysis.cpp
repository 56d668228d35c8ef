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

#include "hoqo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include <Eigen/Eigenvalues>

#include "hoqo/link.hpp"
#include "hoqo/tensor_ops.hpp"

namespace hoqo {

// ---------------------------------------------------------------- steps --

std::vector<TimeStep> time_steps(const CombStructure& s) {
  validate_structure(s);
  std::vector<TimeStep> steps;
  if (!s.teeth.empty() && s.teeth.front().output_label) {
    TimeStep lead;
    lead.absorb = s.teeth.front().output_label;
    steps.push_back(std::move(lead));
  }
  for (std::size_t k = 0; k < s.teeth.size(); ++k) {
    if (!s.teeth[k].input_label) continue;  // only the last tooth may omit it
    TimeStep step;
    step.emit = s.teeth[k].input_label;
    if (k + 1 < s.teeth.size()) step.absorb = s.teeth[k + 1].output_label;
    steps.push_back(std::move(step));
  }
  return steps;
}

// --------------------------------------------------------- markovianity --

double relative_entropy_bits(const LabeledMatrix& rho,
                             const LabeledMatrix& sigma) {
  const LabeledMatrix aligned = permute_wires(sigma, rho.labels());
  if (aligned.data().rows() != rho.data().rows())
    throw DimensionMismatch("relative entropy needs equal total dimensions");
  const Mat a = 0.5 * (rho.data() + rho.data().adjoint());
  const Mat b = 0.5 * (aligned.data() + aligned.data().adjoint());
  const Eigen::SelfAdjointEigenSolver<Mat> ea(a);
  const Eigen::SelfAdjointEigenSolver<Mat> eb(b);
  double entropy = 0.0;   // sum_i lambda_i log2 lambda_i
  double cross = 0.0;     // sum_ij lambda_i |<u_i|v_j>|^2 log2 mu_j
  double mismatch = 0.0;  // weight of rho outside sigma's support
  for (long i = 0; i < ea.eigenvalues().size(); ++i) {
    const double la = ea.eigenvalues()(i);
    if (la <= kSupportCutoff) continue;
    entropy += la * std::log2(la);
    for (long j = 0; j < eb.eigenvalues().size(); ++j) {
      const double overlap =
          std::norm(ea.eigenvectors().col(i).dot(eb.eigenvectors().col(j)));
      const double mu = eb.eigenvalues()(j);
      if (mu <= kSupportCutoff) {
        mismatch += la * overlap;
      } else {
        cross += la * overlap * std::log2(mu);
      }
    }
  }
  if (mismatch > 1e-10) return std::numeric_limits<double>::infinity();
  return entropy - cross;
}

MarkovTestResult markov_test(const CombObject& t, double tol) {
  const Verdict comb_check = validate_comb(t.mat, t.structure);
  if (!comb_check.pass)
    throw BadStructure("markov_test input fails the comb checks (" +
                       comb_check.first_violation + ")");
  const std::vector<std::string> all = t.mat.labels();
  LabeledMatrix reference = LabeledMatrix::scalar(1.0);
  double comb_trace = 1.0;  // a valid comb's trace: product of absorbed dims
  for (const Tooth& tooth : t.structure.teeth) {
    std::set<std::string> keep;
    if (tooth.output_label) keep.insert(*tooth.output_label);
    if (tooth.input_label) keep.insert(*tooth.input_label);
    std::vector<std::string> traced;
    for (const std::string& l : all)
      if (keep.count(l) == 0) traced.push_back(l);
    LabeledMatrix block = partial_trace(t.mat, traced);
    block.mutable_data() *= 1.0 / block.trace().real();
    reference = kron(reference, block);
    if (tooth.output_label)
      comb_trace *= double(t.structure.dim_of(*tooth.output_label));
  }
  LabeledMatrix that = t.mat;
  that.mutable_data() *= 1.0 / that.trace().real();
  const double distance = relative_entropy_bits(that, reference);

  MarkovTestResult res;
  res.distance_bits = distance;
  Condition c;
  c.name = "relative entropy to the product of tooth marginals";
  c.magnitude = distance;
  c.tolerance = tol;
  c.ok = distance <= tol;
  res.verdict.kind = "markov test";
  res.verdict.pass = c.ok;
  if (!c.ok) {
    res.verdict.first_violation = c.name;
    res.verdict.magnitude = distance;
  }
  res.verdict.conditions.push_back(std::move(c));
  reference.mutable_data() *= comb_trace;  // unit trace -> comb normalisation
  res.reference = CombObject{canonical_sort(reference), t.structure};
  return res;
}

// --------------------------------------------------------- markov order --

void validate_partition(const PartitionFMH& part, std::size_t n_steps) {
  const auto contiguous = [](const std::vector<std::size_t>& v,
                             const char* name) {
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k] != v[k - 1] + 1)
        throw BadStructure(std::string(name) +
                           " steps must be contiguous and ascending");
  };
  contiguous(part.history, "history");
  contiguous(part.memory, "memory");
  contiguous(part.future, "future");
  std::vector<std::size_t> seq = part.history;
  seq.insert(seq.end(), part.memory.begin(), part.memory.end());
  seq.insert(seq.end(), part.future.begin(), part.future.end());
  if (seq.size() != n_steps)
    throw BadStructure("partition must cover every time step exactly once");
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (seq[k] != k)
      throw BadStructure(
          "partition must run history < memory < future over steps 0..n-1");
}

namespace {

std::set<std::string> step_wires(const std::vector<TimeStep>& steps,
                                 const std::vector<std::size_t>& which) {
  std::set<std::string> out;
  for (const std::size_t k : which) {
    if (steps[k].emit) out.insert(*steps[k].emit);
    if (steps[k].absorb) out.insert(*steps[k].absorb);
  }
  return out;
}

}  // namespace

MarkovOrderResult markov_order_check(
    const CombObject& t, const std::vector<LabeledMatrix>& tester_on_memory,
    const PartitionFMH& part, double tol) {
  const std::vector<TimeStep> steps = time_steps(t.structure);
  validate_partition(part, steps.size());
  const std::set<std::string> memory = step_wires(steps, part.memory);
  const std::set<std::string> future = step_wires(steps, part.future);
  const std::set<std::string> history = step_wires(steps, part.history);
  if (tester_on_memory.empty())
    throw BadStructure("markov order check needs at least one tester element");
  for (const LabeledMatrix& g : tester_on_memory) {
    const auto gl = g.labels();
    if (std::set<std::string>(gl.begin(), gl.end()) != memory)
      throw LabelMismatch(
          "tester element wires must be exactly the memory-step wires");
  }

  MarkovOrderResult res;
  res.pass = true;
  bool any_retained = false;
  const std::vector<std::string> fut(future.begin(), future.end());
  const std::vector<std::string> his(history.begin(), history.end());
  for (std::size_t x = 0; x < tester_on_memory.size(); ++x) {
    MarkovOrderOutcome o;
    o.index = x;
    const LabeledMatrix cond =
        conditional_process(t.mat, tester_on_memory[x]);
    o.weight = cond.trace().real();
    if (o.weight < kOutcomeWeightFloor) {
      o.skipped = true;  // zero-probability outcome: flagged, not tested
      res.outcomes.push_back(o);
      continue;
    }
    any_retained = true;
    const LabeledMatrix t_future = partial_trace(cond, his);
    const LabeledMatrix t_history = partial_trace(cond, fut);
    LabeledMatrix product = kron(t_future, t_history);
    product.mutable_data() *= 1.0 / o.weight;
    o.distance = max_abs_diff(cond, product);
    o.pass = o.distance <= tol;
    res.pass = res.pass && o.pass;
    res.outcomes.push_back(o);
  }
  if (!any_retained) res.pass = false;
  return res;
}

// ---------------------------------------------------------- classicality --

namespace {

// Per-step tester pieces for the consistency protocols. All Chois are on
// (absorb, emit) with the absorbed wire first; the final effect is carried
// transposed, matching the Born convention for closing POVM elements.
struct StepPieces {
  LabeledMatrix identity;              // blind step, nothing happens
  LabeledMatrix dephasing;             // blind step, basis measured-and-lost
  std::vector<LabeledMatrix> breaks;   // measured step, one piece per outcome
  std::vector<LabeledMatrix> effects;  // final step, one piece per outcome
};

LabeledMatrix projector_piece(const std::vector<Wire>& wires, const Mat& m,
                              bool hermitian = true) {
  return LabeledMatrix(wires, m, hermitian);
}

}  // namespace

ClassicalityResult classicality_check(const CombObject& t,
                                      const std::vector<Mat>& bases,
                                      double tol) {
  const Verdict comb_check = validate_comb(t.mat, t.structure);
  if (!comb_check.pass)
    throw BadStructure("classicality check input fails the comb checks (" +
                       comb_check.first_violation + ")");
  const std::vector<TimeStep> steps = time_steps(t.structure);
  if (steps.empty() || !steps.front().emit)
    throw BadStructure(
        "classicality check needs a comb opening with an emitted wire");
  if (bases.size() != steps.size())
    throw DimensionMismatch("one measurement basis per time step required");

  std::vector<int> dims(steps.size(), 0);
  std::vector<std::size_t> full_steps;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const int d = t.structure.dim_of(*steps[k].emit);
    dims[k] = d;
    if (bases[k].rows() != d || bases[k].cols() != d)
      throw DimensionMismatch("basis " + std::to_string(k) +
                              " does not match the emitted wire dimension");
    const Mat gram = bases[k].adjoint() * bases[k];
    if ((gram - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
      throw ConventionViolation("basis " + std::to_string(k) +
                                " is not unitary");
    if (steps[k].absorb) {
      if (t.structure.dim_of(*steps[k].absorb) != d)
        throw DimensionMismatch(
            "full step " + std::to_string(k) +
            " needs equal emitted and absorbed dimensions");
      full_steps.push_back(k);
    }
  }
  const int n_full = int(full_steps.size());
  if (n_full > kMaxClassicalitySteps)
    throw DimensionTooLarge(
        "classicality check enumerates all 2^n subsets exactly; " +
        std::to_string(n_full) + " intermediate steps exceed the bound of " +
        std::to_string(kMaxClassicalitySteps));

  // Assemble every per-step piece up front so the subset loop below stays
  // throw-free (it may run under OpenMP).
  std::vector<StepPieces> pieces(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const int d = dims[k];
    const std::string emit = *steps[k].emit;
    std::vector<Mat> proj(d), proj_conj(d);
    for (int x = 0; x < d; ++x) {
      const Vec col = bases[k].col(x);
      proj[x] = col * col.adjoint();
      proj_conj[x] = proj[x].conjugate();
    }
    if (steps[k].absorb) {
      const std::string absorb = *steps[k].absorb;
      const std::vector<Wire> pair = {Wire(absorb, d), Wire(emit, d)};
      pieces[k].identity = max_entangled(absorb, emit, d);
      Mat deph = Mat::Zero(d * d, d * d);
      pieces[k].breaks.reserve(d);
      for (int x = 0; x < d; ++x) {
        Mat br = Mat::Zero(d * d, d * d);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c)
            for (int rr = 0; rr < d; ++rr)
              for (int cc = 0; cc < d; ++cc)
                br(r * d + rr, c * d + cc) =
                    proj[x](r, c) * proj_conj[x](rr, cc);
        deph += br;
        pieces[k].breaks.push_back(projector_piece(pair, br));
      }
      pieces[k].dephasing = projector_piece(pair, deph);
    } else {
      pieces[k].effects.reserve(d);
      for (int x = 0; x < d; ++x)
        pieces[k].effects.push_back(
            projector_piece({Wire(emit, d)}, proj_conj[x]));
    }
  }

  const std::size_t n_masks = std::size_t(1) << n_full;
  std::vector<std::vector<ClassicalityRecord>> per_mask(n_masks);
  std::vector<double> mask_max(n_masks, 0.0);

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) \
    if (kernel_mode() != KernelMode::serial)
#endif
  for (long long mask = 0; mask < (long long)(n_masks); ++mask) {
    std::vector<bool> blind(steps.size(), false);
    for (int b = 0; b < n_full; ++b)
      if ((mask >> b) & 1) blind[full_steps[std::size_t(b)]] = true;
    std::vector<std::size_t> measured;
    long n_outcomes = 1;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      if (blind[k]) continue;
      measured.push_back(k);
      n_outcomes *= dims[k];
    }
    for (long joint = 0; joint < n_outcomes; ++joint) {
      // Row-major outcome digits: first measured step most significant.
      std::vector<int> outcome(measured.size(), 0);
      long rem = joint;
      for (std::size_t q = measured.size(); q-- > 0;) {
        outcome[q] = int(rem % dims[measured[q]]);
        rem /= dims[measured[q]];
      }
      const auto probability = [&](bool dephase_blind) {
        LabeledMatrix r = t.mat;
        std::size_t q = 0;
        for (std::size_t k = 0; k < steps.size(); ++k) {
          const LabeledMatrix* piece = nullptr;
          if (blind[k]) {
            piece = dephase_blind ? &pieces[k].dephasing
                                  : &pieces[k].identity;
          } else if (steps[k].absorb) {
            piece = &pieces[k].breaks[std::size_t(outcome[q++])];
          } else {
            piece = &pieces[k].effects[std::size_t(outcome[q++])];
          }
          r = link(*piece, r);
        }
        return r.data()(0, 0).real();
      };
      ClassicalityRecord rec;
      rec.subset_mask = std::uint64_t(mask);
      rec.outcomes = outcome;
      rec.p_identity = probability(false);
      rec.p_dephased = probability(true);
      mask_max[std::size_t(mask)] =
          std::max(mask_max[std::size_t(mask)],
                   std::abs(rec.p_identity - rec.p_dephased));
      per_mask[std::size_t(mask)].push_back(std::move(rec));
    }
  }

  ClassicalityResult res;
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    res.max_difference = std::max(res.max_difference, mask_max[mask]);
    for (ClassicalityRecord& r : per_mask[mask])
      res.records.push_back(std::move(r));
  }
  Condition c;
  c.name = "identity vs dephased statistics";
  c.magnitude = res.max_difference;
  c.tolerance = tol;
  c.ok = res.max_difference <= tol;
  res.verdict.kind = "kolmogorov consistency";
  res.verdict.pass = c.ok;
  if (!c.ok) {
    res.verdict.first_violation = c.name;
    res.verdict.magnitude = res.max_difference;
  }
  res.verdict.conditions.push_back(std::move(c));
  return res;
}

// ----------------------------------------------------------------- chaos --

double otoc(const CombObject& t_otot, const LabeledMatrix& m,
            const LabeledMatrix& v, const LabeledMatrix& p) {
  const auto tl = t_otot.mat.labels();
  const std::set<std::string> comb_wires(tl.begin(), tl.end());
  std::set<std::string> seen;
  for (const LabeledMatrix* op : {&m, &v, &p}) {
    for (const std::string& l : op->labels()) {
      if (comb_wires.count(l) == 0)
        throw LabelMismatch("insertion wire '" + l + "' is not a comb wire");
      if (!seen.insert(l).second)
        throw LabelMismatch("insertion wire sets must be disjoint");
    }
  }
  if (seen != comb_wires)
    throw LabelMismatch("insertions must cover every comb wire");
  const LabeledMatrix r = link_many({t_otot.mat, m, v, p});
  const Cplx value = r.data()(0, 0);
  if (std::abs(value.imag()) > kImagTol)
    throw ConventionViolation(
        "out-and-back correlation value has a non-real part of " +
        std::to_string(value.imag()));
  return value.real();
}

double loe(const CombObject& t_otot, const LabeledMatrix& v) {
  const auto& teeth = t_otot.structure.teeth;
  const bool shape_ok =
      teeth.size() == 3 && !teeth[0].output_label && teeth[0].input_label &&
      teeth[1].output_label && teeth[1].input_label && teeth[2].output_label &&
      teeth[2].input_label;
  if (!shape_ok)
    throw BadStructure(
        "loe needs an out-and-back comb: teeth (-, e1), (a1, e2), (a2, e3)");
  const std::string prep = *teeth[0].input_label;
  const std::string emit_mid = *teeth[1].input_label;
  const std::string absorb_mid = *teeth[2].output_label;
  const int d = t_otot.structure.dim_of(emit_mid);
  if (t_otot.structure.dim_of(absorb_mid) != d)
    throw DimensionMismatch(
        "loe needs equal dimensions on the middle-slot wires");

  const auto vl = v.labels();
  if (std::set<std::string>(vl.begin(), vl.end()) !=
      std::set<std::string>{emit_mid, absorb_mid})
    throw LabelMismatch("perturbation must act on the middle-slot wires");
  const Verdict channel_check = validate_channel(v, {emit_mid}, {absorb_mid});
  if (!channel_check.pass)
    throw InvalidChannel("loe perturbation fails the channel checks (" +
                         channel_check.first_violation + ")");

  std::vector<std::string> others;
  for (const std::string& l : t_otot.mat.labels())
    if (l != prep) others.push_back(l);
  const LabeledMatrix opening = partial_trace(t_otot.mat, others);
  const int dp = t_otot.structure.dim_of(prep);
  const Mat normalised = opening.data() / opening.trace().real();
  const double mix_gap =
      (normalised - Mat::Identity(dp, dp) / double(dp)).cwiseAbs().maxCoeff();
  if (mix_gap > kMaxMixTol)
    throw ConventionViolation(
        "loe requires a maximally mixed opening marginal (deviation " +
        std::to_string(mix_gap) + ")");

  const auto conditional_purity = [&](const LabeledMatrix& mid) {
    const LabeledMatrix linked = link(t_otot.mat, mid);
    const LabeledMatrix a = partial_trace(linked, {prep});
    return (a.data() * a.data()).trace().real();
  };
  const double with_v = conditional_purity(v);
  const double baseline =
      conditional_purity(max_entangled(absorb_mid, emit_mid, d));
  return -std::log2(with_v / baseline);
}

double qde(const CombObject& t, int n) {
  if (n < 1) throw OutOfDomain("dynamical entropy needs a step count >= 1");
  const double trace = t.mat.trace().real();
  if (!(trace > 0.0)) throw OutOfDomain("comb trace must be positive");
  const Mat h = 0.5 * (t.mat.data() + t.mat.data().adjoint());
  const double purity = h.squaredNorm() / (trace * trace);
  return -std::log2(purity) / double(n);
}

double temporal_entanglement(const CombObject& t) {
  const auto& teeth = t.structure.teeth;
  if (teeth.size() % 2 != 0)
    throw OddPartition(
        "temporal entanglement splits the teeth into equal halves; got " +
        std::to_string(teeth.size()));
  const std::size_t half = teeth.size() / 2;
  std::vector<std::string> past, future;
  for (std::size_t k = 0; k < teeth.size(); ++k) {
    std::vector<std::string>& dst = (k < half) ? past : future;
    if (teeth[k].output_label) dst.push_back(*teeth[k].output_label);
    if (teeth[k].input_label) dst.push_back(*teeth[k].input_label);
  }
  std::sort(past.begin(), past.end());
  std::sort(future.begin(), future.end());
  std::vector<std::string> order = past;
  order.insert(order.end(), future.begin(), future.end());
  const LabeledMatrix permuted = permute_wires(t.mat, order);
  long dp = 1, df = 1;
  for (const std::string& l : past) dp *= t.structure.dim_of(l);
  for (const std::string& l : future) df *= t.structure.dim_of(l);

  // Coefficient matrix of the vectorised comb split at the half-time cut:
  // rows gather both copies of the past indices, columns both of the future.
  const Mat& m = permuted.data();
  Mat b(dp * dp, df * df);
  for (long pr = 0; pr < dp; ++pr)
    for (long fr = 0; fr < df; ++fr)
      for (long pc = 0; pc < dp; ++pc)
        for (long fc = 0; fc < df; ++fc)
          b(pr * dp + pc, fr * df + fc) = m(pr * df + fr, pc * df + fc);
  const double norm = b.squaredNorm();
  // Reduced late-half state up to normalisation; the smaller Gram side has
  // the same nonzero spectrum.
  const Mat gram =
      (dp <= df) ? Mat(b * b.adjoint()) : Mat(b.adjoint() * b);
  return -std::log2(gram.squaredNorm() / (norm * norm));
}

}  // namespace hoqo
