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
//
// Memory and classicality diagnostics on combs: a Markovianity test with a
// relative-entropy distance, quantum Markov order checks against memory
// testers, Kolmogorov-consistency (classicality) enumeration, and the chaos
// diagnostics OTOC, LOE, finite-n dynamical entropy, and temporal
// entanglement.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hoqo/constructors.hpp"
#include "hoqo/objects.hpp"

namespace hoqo {

// ---------------------------------------------------------------- steps --

// One agent round of a comb in temporal order: the comb emits `emit` to the
// agent, then takes `absorb` back. A comb with a nontrivial global past
// opens with an absorb-only step; one with a final emission closes with an
// emit-only step.
struct TimeStep {
  std::optional<std::string> emit;
  std::optional<std::string> absorb;

  bool full() const { return emit.has_value() && absorb.has_value(); }
};

// The agent-side view of a comb's structure: step k pairs tooth k's emitted
// wire with tooth (k+1)'s absorbed wire.
std::vector<TimeStep> time_steps(const CombStructure& s);

// --------------------------------------------------------- markovianity --

// Quantum relative entropy S(rho || sigma) in bits between two Hermitian PSD
// matrices over the same wire set (matched by label, any order). Eigenvalues
// at or below the support cutoff are projected out; weight of rho outside
// sigma's support is a support mismatch and yields +infinity.
inline constexpr double kSupportCutoff = 1e-12;
double relative_entropy_bits(const LabeledMatrix& rho,
                             const LabeledMatrix& sigma);

struct MarkovTestResult {
  Verdict verdict;  // kind "markov test", one relative-entropy condition
  double distance_bits = 0.0;
  CombObject reference;  // product of per-tooth marginals, comb-normalised
};

// Distance of t from the tensor product of its per-tooth marginals (the
// initial-state block and one step-channel block per later tooth): the
// relative entropy between the unit-trace normalisations, in bits. That
// product is the closest memoryless reference of t and is itself a valid
// comb for t's structure; it is returned comb-normalised. Verdict passes
// iff the distance is <= tol.
MarkovTestResult markov_test(const CombObject& t, double tol = kValidityTol);

// --------------------------------------------------------- markov order --

// Time-step indices of a comb grouped into history, memory, and future.
// Each set must be contiguous, the three must be disjoint, ordered
// history < memory < future, and together cover every step.
struct PartitionFMH {
  std::vector<std::size_t> future;
  std::vector<std::size_t> memory;
  std::vector<std::size_t> history;
};

// Throws BadStructure unless the partition covers 0..n_steps-1 with the
// invariants above.
void validate_partition(const PartitionFMH& part, std::size_t n_steps);

// Outcomes whose conditional weight falls below this floor are flagged as
// zero-probability and skipped rather than tested.
inline constexpr double kOutcomeWeightFloor = 1e-12;

struct MarkovOrderOutcome {
  std::size_t index = 0;
  double weight = 0.0;    // trace of the conditional future-history object
  double distance = 0.0;  // max-abs gap to the product of its marginals
  bool skipped = false;   // weight below kOutcomeWeightFloor
  bool pass = false;
};

struct MarkovOrderResult {
  bool pass = false;  // every retained outcome passes
  std::vector<MarkovOrderOutcome> outcomes;
};

// Conditions t on each element of a superinstrument acting on exactly the
// memory steps' wires and checks that the conditional object factorises
// between future and history: distance = max-abs difference between the
// conditional and the product of its two marginals divided by the outcome
// weight. Throws LabelMismatch when an element's wires are not the memory
// wires.
MarkovOrderResult markov_order_check(
    const CombObject& t, const std::vector<LabeledMatrix>& tester_on_memory,
    const PartitionFMH& part, double tol = kValidityTol);

// ---------------------------------------------------------- classicality --

struct ClassicalityRecord {
  std::uint64_t subset_mask = 0;  // bit b set = b-th full step runs blind
  std::vector<int> outcomes;      // one basis index per measured step, in order
  double p_identity = 0.0;        // blind steps carry identity channels
  double p_dephased = 0.0;        // blind steps carry dephasing channels
};

struct ClassicalityResult {
  Verdict verdict;  // kind "kolmogorov consistency"
  double max_difference = 0.0;
  std::vector<ClassicalityRecord> records;
};

// Full steps beyond this bound are refused: the check enumerates all 2^n
// subsets exactly instead of sampling.
inline constexpr int kMaxClassicalitySteps = 6;

// Kolmogorov-consistency check of a comb against projective statistics in
// the declared per-step bases (`bases` holds one unitary per time step whose
// columns are that step's measurement basis). For every subset of the full
// steps and every joint outcome of projective causal breaks on the remaining
// steps, the probability with identity channels on the subset is compared
// to the one with dephasing channels there; the verdict passes iff every
// difference is <= tol. The comb must open with an emitted wire.
ClassicalityResult classicality_check(const CombObject& t,
                                      const std::vector<Mat>& bases,
                                      double tol = kValidityTol);

// ----------------------------------------------------------------- chaos --

// Residual imaginary parts at or below this are discarded; anything larger
// means malformed inputs and throws ConventionViolation.
inline constexpr double kImagTol = 1e-10;

// Back-and-forth correlation value T * M * V * P of an out-and-back comb:
// m is the closing effect on the final emitted wire, v the perturbation
// Choi on the middle slot, p the preparation Choi on the opening slot. The
// three wire sets must be disjoint and cover t's wires exactly
// (LabelMismatch otherwise).
double otoc(const CombObject& t_otot, const LabeledMatrix& m,
            const LabeledMatrix& v, const LabeledMatrix& p);

// Opening marginals farther than this from maximally mixed violate the
// local-operator-entanglement convention.
inline constexpr double kMaxMixTol = 1e-8;

// Local operator entanglement of an out-and-back comb under the
// perturbation v: the comb is contracted with v on its middle slot and with
// the unit effect on its opening emission, the purity of the remaining
// conditional object is divided by its value at v = identity, and -log2 of
// the ratio is returned (so the identity perturbation scores 0). Requires
// the opening marginal to be maximally mixed (ConventionViolation) and v to
// be a valid channel on the middle slot (InvalidChannel).
double loe(const CombObject& t_otot, const LabeledMatrix& v);

// Finite-n dynamical entropy: the Renyi-2 entropy rate -log2(tr(That^2))/n
// of the unit-trace-normalised comb. n >= 1 (OutOfDomain otherwise).
double qde(const CombObject& t, int n);

// Temporal entanglement: the comb is vectorised and normalised, the teeth
// are split in half by time order (OddPartition when the tooth count is
// odd), the early half is traced out of |T>><<T|, and the Renyi-2 entropy
// -log2 tr(reduced^2) of the remainder is returned.
double temporal_entanglement(const CombObject& t);

}  // namespace hoqo
