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

#include <cstdint>
#include <optional>
#include <vector>

#include "hoqo/labeled_matrix.hpp"
#include "hoqo/objects.hpp"

namespace hoqo {

// Which function of the unknown unitary a strategy must implement.
enum class UnitaryTask { conjugation, transposition, identity };

// How the k uses of the unknown unitary are arranged. `parallel` hangs all
// slots off a single joint encoder tooth; `sequential` allows the full
// k-slot hierarchy (adaptive strategies).
enum class Strategy { parallel, sequential };

// How the Haar average inside the performance operator is evaluated:
// exactly over a registered unitary design, or by Monte-Carlo sampling.
enum class AverageMethod { design, montecarlo };

// Solver outcome classification carried by OptResult.
enum class OptStatus { optimal, near_optimal, failed };

// Closed-form reference quantities for unitary-transformation strategies
// and store-and-retrieve (SAR) protocols.
enum class ClosedFormTask {
  conjugation_fidelity,
  conjugation_probability,
  transposition_probability,
  sar_fidelity,
  sar_probability,
};

// Haar-averaged performance operator Omega_f(d, k). Its link with a
// strategy's Choi matrix T gives the average fidelity of the channel the
// strategy implements against the target f(U). Wires: P (global input),
// F (global output) and slot pairs "1i"/"1o" ... "ki"/"ko", all of
// dimension d; the slot channel of use j maps "ji" to "jo".
struct PerformanceOperator {
  LabeledMatrix mat;
  UnitaryTask task = UnitaryTask::identity;
  int d = 2;
  int k = 1;
  // Standard error of the Monte-Carlo mean (Frobenius aggregate); absent
  // for exact design averages.
  std::optional<double> std_error;
};

// Result of one optimisation: the optimal value, the optimising matrix
// (the strategy Choi for fidelity problems, the witness for witness
// problems, the process for the seesaw), the solver classification and the
// primal-dual gap. status == optimal implies gap <= 1e-6 * (1 + |value|).
struct OptResult {
  double value = 0.0;
  LabeledMatrix optimiser;
  OptStatus status = OptStatus::failed;
  double gap = 0.0;
};

// Which set the seesaw's process step optimises over: general process
// matrices, or processes restricted to a fixed causal order (a comb with
// A before B), which caps the game value at 1/2.
enum class GyniClass { process_matrix, ordered_comb };

// Outcome of the GYNI seesaw. `best.optimiser` is the best process found.
// Instruments are Choi matrices on wires Ai/Ao (Alice) and Bi/Bo (Bob),
// indexed 2*x + a for setting x and outcome a (same for y, b).
struct GyniResult {
  OptResult best;
  std::vector<LabeledMatrix> alice;
  std::vector<LabeledMatrix> bob;
  // Final value of every completed restart, and the per-iteration value
  // sequence of each (non-decreasing up to solver noise).
  std::vector<double> run_values;
  std::vector<std::vector<double>> run_iterates;
  int skipped_restarts = 0;
};

// Builds the performance operator for `task` with k uses in dimension d.
// The design method averages exactly over a registered unitary design (for
// d = 2 the 24-element single-qubit Clifford group, exact up to k = 2);
// the montecarlo method averages `samples` Haar draws seeded by `seed` and
// reports the standard error of the mean.
// Throws OutOfDomain for d < 2 or k outside {1, 2}; NoExactDesign when
// method == design and no registered design covers (d, k).
PerformanceOperator performance_operator(UnitaryTask task, int d, int k,
                                         AverageMethod method,
                                         int samples = 100000,
                                         std::uint64_t seed = 0);

// Maximises the average fidelity of implementing f(U) from k uses of the
// unknown U over all strategies of the given shape: the strategy Choi T is
// PSD and constrained to the comb class of the strategy (projector fixed
// point plus trace constant), and the value is the link of T with the
// performance operator. Uses the exact design average when one covers
// (d, k) and Monte-Carlo averaging otherwise.
// Throws SolverFailure (with a residual report) when the solver fails.
OptResult optimal_fidelity(UnitaryTask task, int d, int k,
                           Strategy strategy);

// Minimises tr(W D) over the witness set for bipartite causal models:
// witnesses D that are non-negative on every causally ordered process and
// normalised against white noise. A strictly negative value certifies that
// w is causally non-separable; value >= 0 means no certificate exists. The
// optimiser is the witness D itself.
// Throws BadStructure when w fails process-matrix validation and
// SolverFailure when the solver fails.
OptResult causal_witness(const ProcessMatrixObject& w);

// Causal witness for switch-type processes: party wires Ai/Ao/Bi/Bo of
// dimension d, an optional global past (wires P and C, contracted with the
// maximally mixed state and the |+> control state respectively) and any
// remaining wires treated as the global future. The separable set is the
// convex hull of the two fixed-order combs (A before B before the future,
// and the mirror image), inside the class of processes that send
// non-signalling party channels to states on the future wires. A negative
// value certifies causal non-separability.
// Throws BadStructure for a wire layout missing party wires,
// DimensionTooLarge for d > 2, SolverFailure when the solver fails.
OptResult switch_witness(const LabeledMatrix& s, int d = 2);

// Exact closed-form reference values: conjugation fidelity
// (k+1)/(d(d-k)) for k < d; conjugation success probability (1 exactly
// when k >= d-1, else 0); transposition success probability
// 1 - (d^2-1)/(k+d^2-1); SAR fidelity 1 - sin^2(pi/(k+3)) for d = 2; SAR
// success probability 1 - d^2/(k+d^2-1).
// Throws OutOfDomain outside a formula's domain.
double closed_form(ClosedFormTask task, int d, int k);

// Average success probability of the GYNI game for the given process and
// instrument families (both indexed 2*setting + outcome).
double gyni_value(const LabeledMatrix& w,
                  const std::vector<LabeledMatrix>& alice,
                  const std::vector<LabeledMatrix>& bob);

// Seesaw maximisation of the GYNI game value over qubit process matrices
// and local instruments: alternates an SDP over the process W (PSD,
// process-matrix class, trace 4), one over Alice's instruments (CP
// elements, per-setting sums trace preserving) and one over Bob's, until
// the improvement drops below 1e-7; restarts from fresh random instruments
// `restarts` times and returns the best run. Restarts whose subproblems
// fail to solve are skipped and counted.
GyniResult gyni_seesaw(int restarts, std::uint64_t seed,
                       GyniClass w_class = GyniClass::process_matrix);

}  // namespace hoqo
