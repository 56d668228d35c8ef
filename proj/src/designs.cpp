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

#include "hoqo/designs.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hoqo/errors.hpp"

namespace hoqo {
namespace {

// Fixes the free global phase: the first entry (row-major) of magnitude
// above threshold is rotated onto the positive real axis. Two unitaries
// equal up to phase canonicalise to the same matrix.
Mat canonical_phase(const Mat& u) {
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      const Cplx v = u(r, c);
      if (std::abs(v) > 1e-9) return (std::conj(v) / std::abs(v)) * u;
    }
  return u;
}

// Quantised fingerprint; group elements are separated by O(1) in any entry,
// so eight digits of both parts identify them unambiguously.
std::vector<std::pair<std::int64_t, std::int64_t>> key_of(const Mat& u) {
  std::vector<std::pair<std::int64_t, std::int64_t>> key;
  key.reserve(static_cast<std::size_t>(u.size()));
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c)
      key.emplace_back(std::llround(u(r, c).real() * 1e8),
                       std::llround(u(r, c).imag() * 1e8));
  return key;
}

// Breadth-first closure of the generator set under left multiplication,
// modulo global phase.
std::vector<Mat> close_group(const std::vector<Mat>& generators,
                             std::size_t cap) {
  std::map<std::vector<std::pair<std::int64_t, std::int64_t>>, Mat> seen;
  std::deque<Mat> frontier;
  const Eigen::Index d = generators.front().rows();
  const Mat id = canonical_phase(Mat::Identity(d, d));
  seen.emplace(key_of(id), id);
  frontier.push_back(id);
  while (!frontier.empty()) {
    const Mat u = frontier.front();
    frontier.pop_front();
    for (const Mat& g : generators) {
      const Mat next = canonical_phase(g * u);
      auto [it, inserted] = seen.emplace(key_of(next), next);
      if (inserted) {
        if (seen.size() > cap)
          throw NoExactDesign("group closure exceeded the element cap");
        frontier.push_back(next);
      }
    }
  }
  std::vector<Mat> out;
  out.reserve(seen.size());
  for (auto& [k, u] : seen) out.push_back(std::move(u));
  return out;
}

UnitaryDesign build_clifford(int d) {
  UnitaryDesign design;
  design.dim = d;
  if (d == 2) {
    Mat h(2, 2), s(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    s << 1.0, 0.0, 0.0, Cplx(0.0, 1.0);
    design.elements = close_group({h, s}, 64);
    design.strength = 3;
  } else if (d == 3) {
    const Cplx omega = std::exp(Cplx(0.0, 2.0 * M_PI / 3.0));
    Mat f(3, 3), s = Mat::Identity(3, 3);
    const double r = 1.0 / std::sqrt(3.0);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) f(j, k) = r * std::pow(omega, j * k);
    s(2, 2) = omega;
    design.elements = close_group({f, s}, 512);
    design.strength = 2;
  } else {
    throw NoExactDesign("no registered design for dimension " +
                        std::to_string(d));
  }
  return design;
}

}  // namespace

const UnitaryDesign& unitary_design(int d) {
  if (d == 2) {
    static const UnitaryDesign qubit = build_clifford(2);
    return qubit;
  }
  if (d == 3) {
    static const UnitaryDesign qutrit = build_clifford(3);
    return qutrit;
  }
  throw NoExactDesign("no registered design for dimension " +
                      std::to_string(d));
}

bool design_covers(int d, int t) {
  if (d == 2) return t >= 1 && t <= 3;
  if (d == 3) return t >= 1 && t <= 2;
  return false;
}

double frame_potential(const std::vector<Mat>& elements, int t) {
  double acc = 0.0;
  for (const Mat& g : elements)
    for (const Mat& h : elements) {
      const double a = std::abs((g.adjoint() * h).trace());
      acc += std::pow(a, 2 * t);
    }
  const double n = static_cast<double>(elements.size());
  return acc / (n * n);
}

}  // namespace hoqo
