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

#include <doctest.h>

#include <random>

#include "hoqo/tensor_ops.hpp"
#include "oracles/oracles.hpp"

using namespace hoqo;

namespace {

Mat random_complex(long r, long c, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) m(i, j) = Cplx(n(gen), n(gen));
  return m;
}

Mat random_hermitian(long d, std::mt19937_64& gen) {
  Mat m = random_complex(d, d, gen);
  return (m + m.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("kron: scalar identity, trace, and element formula") {
  std::mt19937_64 gen(11);
  const LabeledMatrix one = LabeledMatrix::scalar(1.0);
  const LabeledMatrix x(
      {aux_wire("x", 3)}, random_hermitian(3, gen), true);
  CHECK(max_abs_diff(kron(one, x), x) == 0.0);

  const LabeledMatrix p1 = max_entangled("a1", "b1", 2);
  const LabeledMatrix p2 = max_entangled("a2", "b2", 2);
  CHECK(std::abs(kron(p1, p2).trace() - Cplx(4.0)) < 1e-12);

  const Mat a = random_complex(2, 2, gen);
  const Mat b = random_complex(3, 3, gen);
  const LabeledMatrix la({aux_wire("p", 2)}, a);
  const LabeledMatrix lb({aux_wire("q", 3)}, b);
  const LabeledMatrix k = kron(la, lb);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int kk = 0; kk < 2; ++kk)
        for (int l = 0; l < 3; ++l)
          CHECK(std::abs(k.data()(i * 3 + j, kk * 3 + l) -
                         a(i, kk) * b(j, l)) == 0.0);

  CHECK(max_abs_diff(k, LabeledMatrix({aux_wire("p", 2), aux_wire("q", 3)},
                                      oracle::kron(a, b))) == 0.0);
  CHECK_THROWS_AS(kron(la, la), DuplicateLabel);
}

TEST_CASE("partial_trace: phi+ marginal, full trace, and index-sum oracle") {
  const LabeledMatrix phi = max_entangled("a", "b", 3);
  const LabeledMatrix marg = partial_trace(phi, {"a"});
  CHECK(max_abs_diff(marg, LabeledMatrix::identity({in_wire("b", 3)})) <
        1e-15);

  const LabeledMatrix mixed({aux_wire("s", 2)}, Mat::Identity(2, 2) / 2.0,
                            true);
  const LabeledMatrix full = partial_trace(mixed, {"s"});
  CHECK(full.wires().empty());
  CHECK(std::abs(full.data()(0, 0) - Cplx(1.0)) < 1e-15);

  std::mt19937_64 gen(5);
  const Mat h = random_hermitian(4, gen);
  const LabeledMatrix lm({aux_wire("A", 2), aux_wire("B", 2)}, h, true);
  const LabeledMatrix tb = partial_trace(lm, {"B"});
  const Mat want = oracle::partial_trace(h, {2, 2}, {false, true});
  CHECK((tb.data() - want).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(partial_trace(lm, {"C"}), UnknownLabel);
}

TEST_CASE("partial_trace preserves the order of remaining wires") {
  std::mt19937_64 gen(7);
  const Mat h = random_hermitian(12, gen);
  const LabeledMatrix lm(
      {aux_wire("z", 2), aux_wire("m", 3), aux_wire("a", 2)}, h, true);
  const LabeledMatrix t = partial_trace(lm, {"m"});
  REQUIRE(t.wires().size() == 2);
  CHECK(t.wires()[0].label == "z");
  CHECK(t.wires()[1].label == "a");
  const Mat want = oracle::partial_trace(h, {2, 3, 2}, {false, true, false});
  CHECK((t.data() - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial_transpose: full transpose, involution, swap identity") {
  std::mt19937_64 gen(13);
  const Mat m = random_complex(6, 6, gen);
  const LabeledMatrix lm({aux_wire("u", 2), aux_wire("v", 3)}, m);
  const LabeledMatrix tall = partial_transpose(lm, {"u", "v"});
  CHECK((tall.data() - m.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const LabeledMatrix twice =
      partial_transpose(partial_transpose(lm, {"v"}), {"v"});
  CHECK((twice.data() - m).cwiseAbs().maxCoeff() == 0.0);

  // Partial transpose of phi+ on one leg is the SWAP operator.
  const LabeledMatrix phi = max_entangled("x", "y", 2);
  const LabeledMatrix swp = partial_transpose(phi, {"y"});
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = want(1, 2) = want(2, 1) = want(3, 3) = 1.0;
  CHECK((swp.data() - want).cwiseAbs().maxCoeff() < 1e-15);

  const Mat h = random_complex(4, 4, gen);
  const LabeledMatrix lh({aux_wire("p", 2), aux_wire("q", 2)}, h);
  const Mat want_pt = oracle::partial_transpose(h, {2, 2}, {true, false});
  CHECK((partial_transpose(lh, {"p"}).data() - want_pt).cwiseAbs().maxCoeff()
        == 0.0);

  CHECK_THROWS_AS(partial_transpose(lm, {"nope"}), UnknownLabel);
}

TEST_CASE("max_entangled: d=1 scalar, explicit qubit entries, spectrum") {
  const LabeledMatrix triv = max_entangled("a", "b", 1);
  CHECK(triv.side() == 1);
  CHECK(std::abs(triv.data()(0, 0) - Cplx(1.0)) == 0.0);

  const LabeledMatrix phi = max_entangled("a", "b", 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool on = (r == 0 || r == 3) && (c == 0 || c == 3);
      CHECK(std::abs(phi.data()(r, c) - Cplx(on ? 1.0 : 0.0)) == 0.0);
    }

  for (int d : {2, 3, 5}) {
    const Eigen::VectorXd ev =
        oracle::spectrum(max_entangled("a", "b", d).data());
    CHECK(std::abs(ev(ev.size() - 1) - d) < 1e-12);
    for (long i = 0; i + 1 < ev.size(); ++i) CHECK(std::abs(ev(i)) < 1e-12);
  }

  CHECK_THROWS_AS(max_entangled("a", "b", 0), BadDimension);
}

TEST_CASE("vectorize: identity gives phi+, basis case, trace inner product") {
  const LabeledMatrix vid = vectorize(Mat::Identity(3, 3), "i", "o");
  const LabeledMatrix phi = max_entangled_vec("o", "i", 3);
  CHECK(max_abs_diff(outer(vid), outer(phi)) == 0.0);
  CHECK((vid.data() - phi.data()).cwiseAbs().maxCoeff() == 0.0);

  Mat ket01 = Mat::Zero(2, 2);
  ket01(0, 1) = 1.0;
  const LabeledMatrix v01 = vectorize(ket01, "i", "o");
  for (int r = 0; r < 4; ++r)
    CHECK(std::abs(v01.data()(r, 0) - Cplx(r == 1 ? 1.0 : 0.0)) == 0.0);

  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat k = Mat::Random(3, 2), l = Mat::Random(3, 2);
    const Cplx lhs = vec_inner(vectorize(k, "i", "o"), vectorize(l, "i", "o"));
    CHECK(std::abs(lhs - (k.adjoint() * l).trace()) < 1e-12);
    CHECK((unvectorize(vectorize(k, "i", "o"), "i", "o") - k)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("vectorize is linear") {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat k = random_complex(3, 3, gen), l = random_complex(3, 3, gen);
    const Cplx alpha(0.3, -1.1), beta(-0.7, 0.2);
    const LabeledMatrix lhs = vectorize(alpha * k + beta * l, "i", "o");
    const Mat rhs = alpha * vectorize(k, "i", "o").data() +
                    beta * vectorize(l, "i", "o").data();
    CHECK((lhs.data() - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("check_psd: identity, small negative eigenvalue, phi+") {
  const PsdReport r1 = check_psd(LabeledMatrix::identity({aux_wire("a", 3)}));
  CHECK(r1.ok);
  CHECK(std::abs(r1.min_eigenvalue - 1.0) < 1e-12);

  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -1e-3;
  const PsdReport r2 = check_psd(LabeledMatrix({aux_wire("a", 2)}, neg, true),
                                 1e-8);
  CHECK(!r2.ok);
  CHECK(std::abs(r2.min_eigenvalue + 1e-3) < 1e-12);

  const PsdReport r3 = check_psd(max_entangled("a", "b", 2));
  CHECK(r3.ok);
  CHECK(std::abs(r3.min_eigenvalue) < 1e-12);
}

TEST_CASE("trace multiplicativity under kron") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat a = random_complex(3, 3, gen), b = random_complex(4, 4, gen);
    const LabeledMatrix la({aux_wire("a", 3)}, a), lb({aux_wire("b", 4)}, b);
    const Cplx lhs = kron(la, lb).trace();
    const Cplx rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("partial_trace commutes with permutation of untouched wires") {
  std::mt19937_64 gen(29);
  const Mat h = random_hermitian(12, gen);
  const LabeledMatrix lm(
      {aux_wire("a", 2), aux_wire("b", 3), aux_wire("c", 2)}, h, true);
  const LabeledMatrix direct = partial_trace(lm, {"b"});
  const LabeledMatrix perm =
      partial_trace(permute_wires(lm, {"c", "b", "a"}), {"b"});
  CHECK(max_abs_diff(direct, perm) == 0.0);
}

TEST_CASE("partial_transpose is trace preserving and spectrum-safe on full") {
  std::mt19937_64 gen(31);
  const Mat h = random_hermitian(6, gen);
  const LabeledMatrix lm({aux_wire("a", 2), aux_wire("b", 3)}, h, true);
  const LabeledMatrix pt = partial_trace(partial_transpose(lm, {"a"}), {});
  CHECK(std::abs(partial_transpose(lm, {"a"}).trace() - h.trace()) < 1e-12);
  const Eigen::VectorXd s1 = oracle::spectrum(h);
  const Eigen::VectorXd s2 =
      oracle::spectrum(partial_transpose(lm, {"a", "b"}).data());
  CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("permute_wires round trip and composition") {
  std::mt19937_64 gen(37);
  const Mat h = random_complex(8, 8, gen);
  const LabeledMatrix lm(
      {aux_wire("a", 2), aux_wire("b", 2), aux_wire("c", 2)}, h);
  const LabeledMatrix p = permute_wires(lm, {"c", "a", "b"});
  const LabeledMatrix back = permute_wires(p, {"a", "b", "c"});
  CHECK((back.data() - h).cwiseAbs().maxCoeff() == 0.0);
  // Explicit spot check of the digit mapping: entry (a,b,c)=(1,0,1) row.
  const WireIndexer ix = lm.indexer();
  const WireIndexer ixp = p.indexer();
  CHECK(p.data()(ixp.index({1, 1, 0}), 0) == h(ix.index({1, 0, 1}), 0));
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 gen(41);
  const Mat a = random_complex(8, 8, gen);
  const Mat b = random_complex(16, 16, gen);
  const LabeledMatrix la({aux_wire("a1", 2), aux_wire("a2", 4)}, a);
  const LabeledMatrix lb({aux_wire("b1", 4), aux_wire("b2", 4)}, b);

  kernel_mode() = KernelMode::serial;
  const LabeledMatrix k_s = kron(la, lb);
  const LabeledMatrix t_s = partial_trace(kron(la, lb), {"a2", "b1"});
  const LabeledMatrix pt_s = partial_transpose(kron(la, lb), {"b2"});

  kernel_mode() = KernelMode::parallel;
  const LabeledMatrix k_p = kron(la, lb);
  const LabeledMatrix t_p = partial_trace(kron(la, lb), {"a2", "b1"});
  const LabeledMatrix pt_p = partial_transpose(kron(la, lb), {"b2"});
  kernel_mode() = KernelMode::auto_select;

  CHECK(max_abs_diff(k_s, k_p) == 0.0);
  CHECK(max_abs_diff(t_s, t_p) == 0.0);
  CHECK(max_abs_diff(pt_s, pt_p) == 0.0);
}

TEST_CASE("trace_rescale acts as the 1/d identity-replacement primitive") {
  std::mt19937_64 gen(43);
  const Mat h = random_hermitian(8, gen);
  const LabeledMatrix lm(
      {aux_wire("a", 2), aux_wire("b", 2), aux_wire("c", 2)}, h, true);
  const LabeledMatrix r = trace_rescale(lm, {"b"});
  REQUIRE(r.labels() == lm.labels());
  // Oracle: 1_b/2 x tr_b by hand.
  const Mat tb = oracle::partial_trace(h, {2, 2, 2}, {false, true, false});
  const Mat grown = oracle::kron(tb, Mat::Identity(2, 2)) / 2.0;  // (a,c,b)
  const LabeledMatrix want = permute_wires(
      LabeledMatrix({aux_wire("a", 2), aux_wire("c", 2), aux_wire("b", 2)},
                    grown, true),
      {"a", "b", "c"});
  CHECK(max_abs_diff(r, want) < 1e-14);
  // Idempotent and trace preserving.
  CHECK(max_abs_diff(trace_rescale(r, {"b"}), r) < 1e-14);
  CHECK(std::abs(r.trace() - h.trace()) < 1e-12);
}
