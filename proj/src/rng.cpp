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

#include "hoqo/rng.hpp"

#include <cmath>

#include "hoqo/errors.hpp"
#include "hoqo/tensor_ops.hpp"

namespace hoqo {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(a) * b) >> 32);
}

inline std::uint32_t mullo(std::uint32_t a, std::uint32_t b) {
  return a * b;
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
  ctr_[0] = 0;
  ctr_[1] = 0;
  ctr_[2] = static_cast<std::uint32_t>(stream);
  ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
}

void Philox::refill() {
  std::uint32_t x0 = ctr_[0], x1 = ctr_[1], x2 = ctr_[2], x3 = ctr_[3];
  std::uint32_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint32_t hi0 = mulhi(kPhiloxM0, x0);
    const std::uint32_t lo0 = mullo(kPhiloxM0, x0);
    const std::uint32_t hi1 = mulhi(kPhiloxM1, x2);
    const std::uint32_t lo1 = mullo(kPhiloxM1, x2);
    const std::uint32_t y0 = hi1 ^ x1 ^ k0;
    const std::uint32_t y1 = lo1;
    const std::uint32_t y2 = hi0 ^ x3 ^ k1;
    const std::uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  out_[0] = x0;
  out_[1] = x1;
  out_[2] = x2;
  out_[3] = x3;
  // 128-bit counter increment.
  if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
  pos_ = 0;
}

std::uint32_t Philox::next_u32() {
  if (pos_ >= 4) refill();
  return out_[pos_++];
}

std::uint64_t Philox::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Philox::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller; reject u1 == 0 so the log is finite.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_normal_ = true;
  return r * std::cos(theta);
}

Cplx Philox::cnormal() {
  const double re = normal();
  const double im = normal();
  return Cplx(re * M_SQRT1_2, im * M_SQRT1_2);
}

Mat ginibre(int rows, int cols, Philox& gen) {
  Mat g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = gen.cnormal();
  return g;
}

Mat haar_unitary(int d, Philox& gen) { return haar_isometry(d, d, gen); }

Mat haar_isometry(int rows, int cols, Philox& gen) {
  if (rows < cols) throw BadDimension("isometry needs rows >= cols");
  const Mat g = ginibre(rows, cols, gen);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(rows, cols);
  const Mat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is exactly Haar.
  for (int c = 0; c < cols; ++c) {
    const Cplx rc = r(c, c);
    const double a = std::abs(rc);
    if (a > 0) q.col(c) *= rc / a;
  }
  return q;
}

LabeledMatrix random_state(const std::string& label, int d, Philox& gen) {
  const Mat g = ginibre(d, d, gen);
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  LabeledMatrix out({in_wire(label, d)}, rho);
  out.set_hermitian_hint(true);
  return out;
}

ChoiOperator random_cptp_choi(const std::string& in_label, int d_in,
                              const std::string& out_label, int d_out,
                              Philox& gen) {
  const int d_env = d_in * d_out;
  const Mat v = haar_isometry(d_out * d_env, d_in, gen);
  KrausSet ks;
  ks.in_label = in_label;
  ks.out_label = out_label;
  ks.kraus.reserve(d_env);
  for (int e = 0; e < d_env; ++e) {
    Mat k(d_out, d_in);
    for (int a = 0; a < d_out; ++a)
      for (int i = 0; i < d_in; ++i) k(a, i) = v(a * d_env + e, i);
    ks.kraus.push_back(std::move(k));
  }
  return choi_of_kraus(ks);
}

LabeledMatrix random_hermitian(const std::vector<Wire>& wires, Philox& gen) {
  long d = 1;
  for (const auto& w : wires) d *= w.dim;
  const Mat g = ginibre(static_cast<int>(d), static_cast<int>(d), gen);
  LabeledMatrix out(wires, (g + g.adjoint()) / 2.0);
  out.set_hermitian_hint(true);
  return out;
}

}  // namespace hoqo
