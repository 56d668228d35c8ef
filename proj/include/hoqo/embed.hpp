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

#include "hoqo/labeled_matrix.hpp"

namespace hoqo {

// Real-symmetric embedding of a complex Hermitian matrix,
//
//   embed(H) = [[Re H, -Im H], [Im H, Re H]],
//
// used by the semidefinite solver, which works over real symmetric blocks
// only. The embedding is a *-homomorphism (embed(AB) = embed(A)embed(B)),
// doubles every eigenvalue's multiplicity without moving it, and doubles
// traces and Frobenius pairings:
//
//   eigenvalues(embed(H)) = eigenvalues(H), each twice,
//   tr(embed(A) embed(B)) = 2 Re tr(A B).
//
// Consequently H >= 0 iff embed(H) >= 0, and a semidefinite program posed
// over embed(-) solves the Hermitian original once objectives and right-hand
// sides absorb the factor of two.
inline Eigen::MatrixXd embed(const Mat& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.real();
  e.bottomRightCorner(n, n) = h.real();
  e.topRightCorner(n, n) = -h.imag();
  e.bottomLeftCorner(n, n) = h.imag();
  return e;
}

// Inverse of embed on its image, made exact for any real symmetric input by
// averaging the two copies: the result is the unique Hermitian H with
// embed(H) equal to the J-symmetrised part of x (J = [[0,-1],[1,0]]).
// Symmetrising first keeps round-trips through the solver Hermitian even
// when iterates pick up asymmetric floating-point noise.
inline Mat unembed(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows() / 2;
  Mat h(n, n);
  h.real() = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  h.imag() = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  return 0.5 * (h + h.adjoint());
}

}  // namespace hoqo
