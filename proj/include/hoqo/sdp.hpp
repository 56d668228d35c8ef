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

#include <Eigen/Dense>
#include <vector>

namespace hoqo {

// A sparse entry of one constraint matrix: entry `value` at (row, col) of
// the symmetric matrix acting on PSD block `block`. Off-diagonal entries
// are literal, so a symmetric matrix must list both (r, c) and (c, r).
struct SdpEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// One linear equality  sum_b <A_b, X_b> = rhs  over the block variables.
struct SdpConstraint {
  std::vector<SdpEntry> entries;
  double rhs = 0.0;
};

// Standard-form semidefinite program over real symmetric blocks:
//
//   minimise    sum_b <C_b, X_b>
//   subject to  <A_i, X> = b_i   (i = 1..m),   X_b >= 0.
//
// Constraint matrices are sparse; objectives are dense. Hermitian problems
// enter through the real embedding (see embed.hpp); callers own the factor
// of two that the embedding introduces in pairings.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<Eigen::MatrixXd> objective;  // one dense symmetric C_b per block
  std::vector<SdpConstraint> constraints;
};

enum class SdpStatus { optimal, near_optimal, failed };

struct SdpOptions {
  int max_iterations = 100;
  // All three convergence measures (relative complementarity gap, primal and
  // dual residuals) below tol_optimal classifies the solve as optimal; below
  // tol_near as near_optimal; anything else as failed.
  double tol_optimal = 1e-9;
  double tol_near = 1e-6;
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::failed;
  double primal_objective = 0.0;  // <C, X>
  double dual_objective = 0.0;    // b' y
  double gap = 0.0;               // max(|pobj - dobj|, <X, S>), absolute
  double primal_residual = 0.0;   // ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0.0;     // ||C - S - A*(y)||_F / (1 + ||C||_F)
  int iterations = 0;
  std::vector<Eigen::MatrixXd> x;  // primal blocks
  std::vector<Eigen::MatrixXd> s;  // dual slack blocks
  Eigen::VectorXd y;               // equality multipliers
};

// Infeasible-start primal-dual interior-point solver (Mehrotra predictor-
// corrector with the HKM search direction). Deterministic; single-threaded.
// Never throws on convergence trouble: inspect `status`.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

}  // namespace hoqo
