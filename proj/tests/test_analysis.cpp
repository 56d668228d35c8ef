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

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hoqo/analysis.hpp"
#include "hoqo/choi.hpp"
#include "hoqo/comb.hpp"
#include "hoqo/constructors.hpp"
#include "hoqo/link.hpp"
#include "hoqo/objects.hpp"
#include "hoqo/rng.hpp"
#include "hoqo/tensor_ops.hpp"
#include "oracles/oracles.hpp"

using namespace hoqo;

namespace {

Mat pauli_x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Mat pauli_z() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Mat hadamard() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Mat proj2(int j) {
  Mat m = Mat::Zero(2, 2);
  m(j, j) = 1.0;
  return m;
}

Mat plus_proj() {
  Mat m(2, 2);
  m.setConstant(0.5);
  return m;
}

// SWAP on the composite (system, environment) index s * 2 + e.
Mat swap_gate() {
  Mat m = Mat::Zero(4, 4);
  for (int s = 0; s < 2; ++s)
    for (int e = 0; e < 2; ++e) m(e * 2 + s, s * 2 + e) = 1.0;
  return m;
}

// CNOT with the system as control and the environment as target.
Mat cnot_se() {
  Mat m = Mat::Zero(4, 4);
  for (int s = 0; s < 2; ++s)
    for (int e = 0; e < 2; ++e) m(s * 2 + (e ^ s), s * 2 + e) = 1.0;
  return m;
}

Mat random_density(int side, std::mt19937_64& gen) {
  return oracle::random_state(side, gen);
}

SECircuit circuit(int ds, int de, const Mat& eta,
                  const std::vector<Mat>& unitaries) {
  SECircuit c;
  c.system_dim = ds;
  c.env_dim = de;
  c.initial_state = LabeledMatrix({Wire("S", ds), Wire("E", de)}, eta, true);
  c.unitaries = unitaries;
  return c;
}

// Choi of a single-qubit unitary as a labeled insertion on (out, in).
LabeledMatrix unitary_slot(const Mat& u, const std::string& out,
                           const std::string& in) {
  return choi_of_operator(u, {out_wire(out, int(u.rows()))},
                          {in_wire(in, int(u.cols()))});
}

// ChoiOperator of a Kraus list between throwaway labels; markov_comb
// relabels the wires to its own slot names anyway.
ChoiOperator bridge(const std::vector<Mat>& kraus) {
  KrausSet k;
  k.kraus = kraus;
  k.in_label = "in";
  k.out_label = "out";
  return choi_of_kraus(k);
}

// The perfect-memory comb: a SWAP circuit comb with the first emitted wire
// traced out, leaving two full teeth (1o, 2i), (2o, 3i) on 16 dimensions.
// The environment state rides to the second slot while the slot-1 input is
// delivered intact to the third, so the comb is maximally non-Markovian.
CombObject swap_memory_comb(const Mat& rho_e) {
  const Mat eta = oracle::kron(proj2(0), rho_e);
  const CombObject full =
      comb_from_circuit(circuit(2, 2, eta, {swap_gate(), swap_gate()}));
  const LabeledMatrix traced = partial_trace(full.mat, {"1i"});
  const CombStructure s = make_comb_structure(
      {{"1o", "2i"}, {"2o", "3i"}},
      {{"1o", 2}, {"2i", 2}, {"2o", 2}, {"3i", 2}});
  return CombObject{traced, s};
}

CombStructure relabel_structure(const CombStructure& s,
                                const std::map<std::string, std::string>& mp) {
  const auto rename = [&](const std::string& l) {
    const auto it = mp.find(l);
    return it == mp.end() ? l : it->second;
  };
  CombStructure out;
  for (const Tooth& tooth : s.teeth) {
    Tooth t;
    if (tooth.output_label) t.output_label = rename(*tooth.output_label);
    if (tooth.input_label) t.input_label = rename(*tooth.input_label);
    out.teeth.push_back(std::move(t));
  }
  for (const auto& [l, d] : s.dims) out.dims[rename(l)] = d;
  return out;
}

// relabel() rejects map entries whose source wire is absent, so trim the
// shared renaming down to the wires each object actually carries.
LabeledMatrix relabel_some(const LabeledMatrix& x,
                           const std::map<std::string, std::string>& mp) {
  std::map<std::string, std::string> trimmed;
  for (const auto& [from, to] : mp)
    if (x.has_wire(from)) trimmed[from] = to;
  return relabel(x, trimmed);
}

CombObject relabel_comb(const CombObject& t,
                        const std::map<std::string, std::string>& mp) {
  return CombObject{relabel_some(t.mat, mp),
                    relabel_structure(t.structure, mp)};
}

// A renaming that reverses the lexicographic order of the slot wires, so
// canonical layouts really change under it.
std::map<std::string, std::string> scrambled_names() {
  return {{"1i", "z1"}, {"1o", "a9"}, {"2i", "y2"}, {"2o", "b8"},
          {"3i", "x3"}, {"3o", "c7"}, {"4i", "w4"}};
}

}  // namespace

TEST_CASE("time steps pair emissions with the following absorption") {
  const CombObject t = comb_from_circuit(
      circuit(2, 2, Mat::Identity(4, 4) / 4.0, {swap_gate(), swap_gate()}));
  const auto steps = time_steps(t.structure);
  REQUIRE(steps.size() == 3);
  CHECK(*steps[0].emit == "1i");
  CHECK(*steps[0].absorb == "1o");
  CHECK(*steps[1].emit == "2i");
  CHECK(*steps[1].absorb == "2o");
  CHECK(*steps[2].emit == "3i");
  CHECK(!steps[2].absorb.has_value());
  CHECK(steps[0].full());
  CHECK(!steps[2].full());

  // A comb opening with an absorbed wire gets a leading absorb-only step.
  const CombStructure s = make_comb_structure(
      {{"1o", "2i"}, {"2o", "3i"}},
      {{"1o", 2}, {"2i", 2}, {"2o", 2}, {"3i", 2}});
  const auto lead = time_steps(s);
  REQUIRE(lead.size() == 3);
  CHECK(!lead[0].emit.has_value());
  CHECK(*lead[0].absorb == "1o");
  CHECK(*lead[1].emit == "2i");
  CHECK(*lead[1].absorb == "2o");
  CHECK(*lead[2].emit == "3i");
  CHECK(!lead[2].absorb.has_value());
}

TEST_CASE("relative entropy: direct properties and oracle agreement") {
  // Orthogonal pure states have no common support.
  const LabeledMatrix p0({Wire("a", 2)}, proj2(0), true);
  const LabeledMatrix p1({Wire("a", 2)}, proj2(1), true);
  CHECK(std::isinf(relative_entropy_bits(p0, p1)));

  std::mt19937_64 gen(71);
  const Mat rho = random_density(4, gen);
  const Mat sig = random_density(4, gen);
  const std::vector<Wire> ab = {Wire("a", 2), Wire("b", 2)};
  const LabeledMatrix lr(ab, rho, true);
  const LabeledMatrix ls(ab, sig, true);
  CHECK(relative_entropy_bits(lr, lr) == doctest::Approx(0.0).epsilon(1e-10));
  const double direct = oracle::relative_entropy_bits(rho, sig);
  CHECK(relative_entropy_bits(lr, ls) ==
        doctest::Approx(direct).epsilon(1e-9));

  // Wire bookkeeping: sigma may arrive with its wires in any order.
  const LabeledMatrix swapped = permute_wires(ls, {"b", "a"});
  CHECK(relative_entropy_bits(lr, swapped) ==
        doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("markov test: memoryless combs score zero") {
  std::mt19937_64 gen(11);
  const auto k1 = oracle::random_cptp_kraus(2, 2, gen);
  const auto k2 = oracle::random_cptp_kraus(2, 3, gen);
  const LabeledMatrix init({Wire("r", 2)}, random_density(2, gen), true);
  const CombObject t = markov_comb({bridge(k1), bridge(k2)}, init);

  const MarkovTestResult res = markov_test(t);
  CHECK(res.verdict.pass);
  CHECK(res.distance_bits <= 1e-9);
  CHECK(res.distance_bits >= -1e-12);
  // The closest memoryless comb of a memoryless comb is the comb itself.
  CHECK(max_abs_diff(res.reference.mat, t.mat) <= 1e-8);
}

TEST_CASE("markov test: perfect memory scores exactly two bits") {
  Mat rho_e = Mat::Zero(2, 2);
  rho_e(0, 0) = 0.7;
  rho_e(1, 1) = 0.3;
  const CombObject t = swap_memory_comb(rho_e);
  CHECK(validate_comb(t.mat, t.structure).pass);

  const MarkovTestResult res = markov_test(t);
  CHECK(!res.verdict.pass);
  CHECK(res.distance_bits > 0.5);
  CHECK(res.distance_bits == doctest::Approx(2.0).epsilon(1e-8));

  // Against the oracle: normalise, take the two tooth blocks, rebuild the
  // product, and evaluate the entropy with raw index arithmetic.
  const LabeledMatrix sorted = canonical_sort(t.mat);  // 1o, 2i, 2o, 3i
  const std::vector<int> dims = {2, 2, 2, 2};
  const Mat that = sorted.data() / sorted.data().trace();
  Mat b1 = oracle::partial_trace(sorted.data(), dims, {0, 0, 1, 1});
  Mat b2 = oracle::partial_trace(sorted.data(), dims, {1, 1, 0, 0});
  b1 /= b1.trace();
  b2 /= b2.trace();
  const double expected =
      oracle::relative_entropy_bits(that, oracle::kron(b1, b2));
  CHECK(res.distance_bits == doctest::Approx(expected).epsilon(1e-9));

  // The reference is the valid memoryless comb (1_1o x rho_E x 1_2o3i) / 2.
  CHECK(validate_comb(res.reference.mat, t.structure).pass);
  const LabeledMatrix hand =
      kron(kron(identity_on({Wire("1o", 2)}),
                LabeledMatrix({Wire("2i", 2)}, 0.5 * rho_e, true)),
           identity_on({Wire("2o", 2), Wire("3i", 2)}));
  CHECK(max_abs_diff(res.reference.mat, hand) <= 1e-10);
}

TEST_CASE("markov test: fresh-environment circuits stay memoryless") {
  // Four-dimensional environment split as E1 x E2; the first unitary only
  // touches (S, E1), the second (S, E2), so no step-to-step memory exists.
  std::mt19937_64 gen(5);
  const Mat g1 = oracle::haar_unitary(4, gen);
  const Mat g2 = oracle::haar_unitary(4, gen);
  Mat u1 = Mat::Zero(8, 8);
  Mat u2 = Mat::Zero(8, 8);
  for (int s = 0; s < 2; ++s)
    for (int e1 = 0; e1 < 2; ++e1)
      for (int e2 = 0; e2 < 2; ++e2)
        for (int sp = 0; sp < 2; ++sp)
          for (int e1p = 0; e1p < 2; ++e1p)
            for (int e2p = 0; e2p < 2; ++e2p) {
              const long r = s * 4 + e1 * 2 + e2;
              const long c = sp * 4 + e1p * 2 + e2p;
              if (e2 == e2p)
                u1(r, c) += g1(s * 2 + e1, sp * 2 + e1p);
              if (e1 == e1p)
                u2(r, c) += g2(s * 2 + e2, sp * 2 + e2p);
            }
  const Mat eta =
      oracle::kron(Mat::Identity(2, 2) / 2.0,
                   oracle::kron(proj2(0), proj2(0)));
  const CombObject t = comb_from_circuit(circuit(2, 4, eta, {u1, u2}));
  const MarkovTestResult res = markov_test(t);
  CHECK(res.verdict.pass);
  CHECK(res.distance_bits <= 1e-8);
}

TEST_CASE("markov test: the distance is additive over parallel combs") {
  Mat rho_e = Mat::Zero(2, 2);
  rho_e(0, 0) = 0.7;
  rho_e(1, 1) = 0.3;
  const CombObject a = swap_memory_comb(rho_e);

  std::mt19937_64 gen(29);
  const CombObject full = comb_from_circuit(
      circuit(2, 2, random_density(4, gen),
              {oracle::haar_unitary(4, gen), oracle::haar_unitary(4, gen)}));
  const std::map<std::string, std::string> names = {
      {"1o", "q1"}, {"2i", "q2"}, {"2o", "q3"}, {"3i", "q4"}};
  CombObject b{relabel(partial_trace(full.mat, {"1i"}), names),
               make_comb_structure({{"q1", "q2"}, {"q3", "q4"}},
                                   {{"q1", 2}, {"q2", 2}, {"q3", 2},
                                    {"q4", 2}})};

  CombStructure joint;
  joint.teeth = a.structure.teeth;
  joint.teeth.insert(joint.teeth.end(), b.structure.teeth.begin(),
                     b.structure.teeth.end());
  joint.dims = a.structure.dims;
  joint.dims.insert(b.structure.dims.begin(), b.structure.dims.end());
  const CombObject c{kron(a.mat, b.mat), joint};

  const double da = markov_test(a).distance_bits;
  const double db = markov_test(b).distance_bits;
  const double dc = markov_test(c).distance_bits;
  CHECK(db > 1e-3);  // a generic circuit does carry memory
  CHECK(dc == doctest::Approx(da + db).epsilon(1e-8));
}

TEST_CASE("markov order: a memoryless comb passes every causal break") {
  std::mt19937_64 gen(13);
  const auto k1 = oracle::random_cptp_kraus(2, 2, gen);
  const auto k2 = oracle::random_cptp_kraus(2, 2, gen);
  const LabeledMatrix init({Wire("r", 2)}, random_density(2, gen), true);
  const CombObject t = markov_comb({bridge(k1), bridge(k2)}, init);

  PartitionFMH part;
  part.history = {0};
  part.memory = {1};
  part.future = {2};

  SUBCASE("computational break") {
    std::vector<LabeledMatrix> tester;
    for (int x = 0; x < 2; ++x)
      tester.push_back(
          LabeledMatrix({out_wire("2o", 2), in_wire("2i", 2)},
                        oracle::kron(proj2(x), proj2(x)), true));
    const MarkovOrderResult res = markov_order_check(t, tester, part);
    CHECK(res.pass);
    REQUIRE(res.outcomes.size() == 2);
    for (const auto& o : res.outcomes) {
      CHECK(!o.skipped);
      CHECK(o.pass);
      CHECK(o.weight > 1e-3);
      CHECK(o.distance <= 1e-10);
    }
  }

  SUBCASE("biased measure-and-reprepare instrument") {
    // A causal break with an unsharp POVM and arbitrary repreparations:
    // still product elements, so a memoryless comb must factorise.
    const Mat frame = oracle::haar_unitary(2, gen);
    Mat w0 = Mat::Zero(2, 2);
    w0(0, 0) = 0.7;
    w0(1, 1) = 0.2;
    const Mat e0 = frame * w0 * frame.adjoint();
    const Mat e1 = Mat::Identity(2, 2) - e0;
    std::vector<LabeledMatrix> tester;
    for (const Mat& effect : {e0, e1})
      tester.push_back(
          LabeledMatrix({out_wire("2o", 2), in_wire("2i", 2)},
                        oracle::kron(random_density(2, gen),
                                     effect.conjugate()),
                        true));
    const MarkovOrderResult res = markov_order_check(t, tester, part);
    CHECK(res.pass);
    for (const auto& o : res.outcomes) CHECK(o.distance <= 1e-10);
  }

  SUBCASE("informationally complete break set") {
    // Six repreparations (all Pauli eigenstates, weight 1/6) against the
    // three mutually unbiased qubit bases (weight 1/3): 36 elements summing
    // to a measure-and-reprepare CPTP Choi.
    std::vector<Mat> states;
    const Cplx im(0.0, 1.0);
    for (int b = 0; b < 2; ++b) states.push_back(proj2(b));
    Mat plus = plus_proj();
    Mat minus = Mat(2, 2);
    minus << 0.5, -0.5, -0.5, 0.5;
    states.push_back(plus);
    states.push_back(minus);
    Mat yp(2, 2), ym(2, 2);
    yp << 0.5, -0.5 * im, 0.5 * im, 0.5;
    ym << 0.5, 0.5 * im, -0.5 * im, 0.5;
    states.push_back(yp);
    states.push_back(ym);
    std::vector<LabeledMatrix> tester;
    for (const Mat& prep : states)
      for (const Mat& meas : states)
        tester.push_back(LabeledMatrix(
            {out_wire("2o", 2), in_wire("2i", 2)},
            oracle::kron(prep / 6.0, meas.conjugate() / 3.0), true));
    const MarkovOrderResult res = markov_order_check(t, tester, part);
    CHECK(res.pass);
    CHECK(res.outcomes.size() == 36);
    for (const auto& o : res.outcomes) {
      CHECK(!o.skipped);
      CHECK(o.distance <= 1e-10);
    }
  }
}

TEST_CASE("markov order: coherent memory defeats a computational break") {
  // The first unitary copies the slot input into the environment and then
  // scrambles the system with a Hadamard; the SWAP delivers the copy to the
  // third slot. A computational measurement on the scrambled second slot
  // cannot screen the copied value, so no outcome factorises.
  const Mat u1 = oracle::kron(hadamard(), Mat::Identity(2, 2)) * cnot_se();
  const Mat eta = oracle::kron(Mat::Identity(2, 2) / 2.0, proj2(0));
  const CombObject t = comb_from_circuit(
      circuit(2, 2, eta, {u1, swap_gate(), Mat::Identity(4, 4)}));

  PartitionFMH part;
  part.history = {0};
  part.memory = {1};
  part.future = {2, 3};

  std::vector<LabeledMatrix> tester;
  std::vector<Mat> raw;  // the same elements for the oracle, on (2i, 2o)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      tester.push_back(
          LabeledMatrix({out_wire("2o", 2), in_wire("2i", 2)},
                        oracle::kron(proj2(a), proj2(b)), true));
      raw.push_back(oracle::kron(proj2(b), proj2(a)));
    }

  const MarkovOrderResult res = markov_order_check(t, tester, part);
  CHECK(!res.pass);
  REQUIRE(res.outcomes.size() == 4);

  const LabeledMatrix sorted = canonical_sort(t.mat);
  const std::vector<int> dims(7, 2);           // 1i 1o 2i 2o 3i 3o 4i
  const std::vector<int> mem = {0, 0, 1, 1, 0, 0, 0};
  for (std::size_t x = 0; x < res.outcomes.size(); ++x) {
    const auto& o = res.outcomes[x];
    CHECK(!o.skipped);
    CHECK(!o.pass);
    CHECK(o.distance > 0.02);

    // Conditioning agreement with the raw-index oracle.
    const Mat cond_oracle =
        oracle::conditional_block(sorted.data(), dims, mem, raw[x]);
    const LabeledMatrix cond_lib =
        canonical_sort(conditional_process(t.mat, tester[x]));
    CHECK((cond_lib.data() - cond_oracle).cwiseAbs().maxCoeff() <= 1e-9);

    // Distance agreement: kept factor order is 1i 1o | 3i 3o 4i.
    const std::vector<int> kd = {2, 2, 2, 2, 2};
    const double w = cond_oracle.trace().real();
    CHECK(o.weight == doctest::Approx(w).epsilon(1e-9));
    const Mat th = oracle::partial_trace(cond_oracle, kd, {0, 0, 1, 1, 1});
    const Mat tf = oracle::partial_trace(cond_oracle, kd, {1, 1, 0, 0, 0});
    const double dist =
        (cond_oracle - oracle::kron(th, tf) / w).cwiseAbs().maxCoeff();
    CHECK(o.distance == doctest::Approx(dist).epsilon(1e-9));
  }
}

TEST_CASE("markov order: zero-probability outcomes are flagged, not tested") {
  std::mt19937_64 gen(17);
  // The first bridge erases everything into |0>, so a break that measures
  // |1> on the second emission never fires.
  Mat erase0 = proj2(0);
  Mat erase1 = Mat::Zero(2, 2);
  erase1(0, 1) = 1.0;
  const auto k2 = oracle::random_cptp_kraus(2, 2, gen);
  const LabeledMatrix init({Wire("r", 2)}, random_density(2, gen), true);
  const CombObject t =
      markov_comb({bridge({erase0, erase1}), bridge(k2)}, init);

  PartitionFMH part;
  part.history = {0};
  part.memory = {1};
  part.future = {2};
  std::vector<LabeledMatrix> tester;
  for (int x = 0; x < 2; ++x)
    tester.push_back(
        LabeledMatrix({out_wire("2o", 2), in_wire("2i", 2)},
                      oracle::kron(proj2(0), proj2(x)), true));

  const MarkovOrderResult res = markov_order_check(t, tester, part);
  REQUIRE(res.outcomes.size() == 2);
  CHECK(!res.outcomes[0].skipped);
  CHECK(res.outcomes[0].pass);
  CHECK(res.outcomes[1].skipped);
  CHECK(res.outcomes[1].weight < kOutcomeWeightFloor);
  CHECK(!res.outcomes[1].pass);
  CHECK(res.pass);  // skipped outcomes are excluded from the overall verdict
}

TEST_CASE("markov order: partitions and testers are validated") {
  std::mt19937_64 gen(19);
  const auto k1 = oracle::random_cptp_kraus(2, 2, gen);
  const auto k2 = oracle::random_cptp_kraus(2, 2, gen);
  const LabeledMatrix init({Wire("r", 2)}, random_density(2, gen), true);
  const CombObject t = markov_comb({bridge(k1), bridge(k2)}, init);
  std::vector<LabeledMatrix> tester = {
      LabeledMatrix({out_wire("2o", 2), in_wire("2i", 2)},
                    Mat::Identity(4, 4), true)};

  PartitionFMH bad;
  bad.history = {0};
  bad.memory = {2};
  bad.future = {1};
  CHECK_THROWS_AS(markov_order_check(t, tester, bad), BadStructure);

  PartitionFMH gap;
  gap.history = {0};
  gap.memory = {1};
  gap.future = {};
  CHECK_THROWS_AS(markov_order_check(t, tester, gap), BadStructure);

  PartitionFMH split;
  split.history = {0, 2};
  split.memory = {1};
  split.future = {};
  CHECK_THROWS_AS(markov_order_check(t, tester, split), BadStructure);

  PartitionFMH part;
  part.history = {0};
  part.memory = {1};
  part.future = {2};
  std::vector<LabeledMatrix> wrong = {
      LabeledMatrix({out_wire("1o", 2), in_wire("1i", 2)},
                    Mat::Identity(4, 4), true)};
  CHECK_THROWS_AS(markov_order_check(t, wrong, part), LabelMismatch);
  CHECK_THROWS_AS(markov_order_check(t, {}, part), BadStructure);
}

TEST_CASE("classicality: computational stochastic combs are consistent") {
  // A classical Markov chain embedded in the computational basis.
  std::mt19937_64 gen(23);
  const auto stochastic_choi = [&]() {
    std::uniform_real_distribution<double> u(0.1, 0.9);
    Mat c = Mat::Zero(4, 4);
    for (int x = 0; x < 2; ++x) {
      const double p = u(gen);
      for (int y = 0; y < 2; ++y) {
        const double s = (y == 0) ? p : 1.0 - p;
        c += s * oracle::kron(proj2(y), proj2(x));
      }
    }
    return make_choi(
        LabeledMatrix({out_wire("o", 2), in_wire("i", 2)}, c, true), {"i"},
        {"o"});
  };
  Mat init = Mat::Zero(2, 2);
  init(0, 0) = 0.6;
  init(1, 1) = 0.4;
  const CombObject t =
      markov_comb({stochastic_choi(), stochastic_choi()},
                  LabeledMatrix({Wire("r", 2)}, init, true));

  const std::vector<Mat> bases(3, Mat::Identity(2, 2));
  const ClassicalityResult res = classicality_check(t, bases);
  CHECK(res.verdict.pass);
  CHECK(res.max_difference <= 1e-10);
  // Mask 00 measures all three steps (8 outcomes), masks 01 and 10 measure
  // two (4 each), mask 11 only the final one (2).
  CHECK(res.records.size() == 8 + 4 + 4 + 2);

  // Fully measured statistics are a probability distribution.
  double total = 0.0;
  for (const auto& r : res.records)
    if (r.subset_mask == 0) total += r.p_identity;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classicality: the spin-chain protocol shows quantum statistics") {
  // Spin through three magnets: prepare |+>, measure Z, X, Z. Skipping the
  // middle magnet keeps the coherence, inserting a dephasing there kills
  // half of the final down-down weight.
  const Mat eta = plus_proj();  // one-dimensional environment
  const CombObject t = comb_from_circuit(
      circuit(2, 1, eta, {Mat::Identity(2, 2), Mat::Identity(2, 2)}));
  const std::vector<Mat> bases = {Mat::Identity(2, 2), hadamard(),
                                  Mat::Identity(2, 2)};
  const ClassicalityResult res = classicality_check(t, bases);
  CHECK(!res.verdict.pass);
  CHECK(res.max_difference == doctest::Approx(0.25).epsilon(1e-10));

  bool found = false;
  for (const auto& r : res.records) {
    if (r.subset_mask == 0) {
      // All three outcomes recorded: every joint probability is 1/8 and the
      // dephased run agrees exactly (no blind step).
      CHECK(r.p_identity == doctest::Approx(0.125).epsilon(1e-12));
      CHECK(r.p_dephased == doctest::Approx(r.p_identity).epsilon(1e-12));
    }
    if (r.subset_mask == 2 && r.outcomes == std::vector<int>{1, 1}) {
      found = true;
      CHECK(r.p_identity == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(r.p_dephased == doctest::Approx(0.25).epsilon(1e-12));
    }
  }
  CHECK(found);
}

TEST_CASE("classicality: a lone preparation is vacuously consistent") {
  std::mt19937_64 gen(31);
  const LabeledMatrix rho({Wire("1i", 2)}, random_density(2, gen), true);
  const CombObject t{
      rho, make_comb_structure({{"", "1i"}}, {{"1i", 2}})};
  const ClassicalityResult res =
      classicality_check(t, {Mat::Identity(2, 2)});
  CHECK(res.verdict.pass);
  CHECK(res.max_difference == 0.0);
  CHECK(res.records.size() == 2);
}

TEST_CASE("classicality: combs dephased in every step basis always pass") {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Mat> bases = {oracle::haar_unitary(2, gen),
                                    oracle::haar_unitary(2, gen),
                                    oracle::haar_unitary(2, gen)};
    // Initial state diagonal in basis 0.
    const double p = u(gen);
    Mat init = Mat::Zero(2, 2);
    for (int x = 0; x < 2; ++x) {
      const Vec col = bases[0].col(x);
      init += ((x == 0) ? p : 1.0 - p) * (col * col.adjoint());
    }
    // Channel k (k = 0, 1): classical stochastic transfer from basis k
    // diagonals to basis k+1 diagonals.
    std::vector<ChoiOperator> chain;
    for (int k = 0; k < 2; ++k) {
      Mat c = Mat::Zero(4, 4);
      for (int x = 0; x < 2; ++x) {
        const double q = u(gen);
        const Vec in_col = bases[std::size_t(k)].col(x);
        const Mat in_proj = (in_col * in_col.adjoint()).conjugate();
        for (int y = 0; y < 2; ++y) {
          const Vec out_col = bases[std::size_t(k) + 1].col(y);
          const Mat out_proj = out_col * out_col.adjoint();
          c += ((y == 0) ? q : 1.0 - q) * oracle::kron(out_proj, in_proj);
        }
      }
      chain.push_back(make_choi(
          LabeledMatrix({out_wire("o", 2), in_wire("i", 2)}, c, true),
          {"i"}, {"o"}));
    }
    const CombObject t =
        markov_comb(chain, LabeledMatrix({Wire("r", 2)}, init, true));
    const ClassicalityResult res = classicality_check(t, bases);
    CHECK(res.verdict.pass);
    CHECK(res.max_difference <= 1e-9);
  }
}

TEST_CASE("classicality: the exact enumeration refuses too many steps") {
  // Seven trivial steps on one-dimensional wires: the refusal fires before
  // any work happens.
  const Mat one = Mat::Ones(1, 1);
  std::vector<ChoiOperator> chain;
  for (int k = 0; k < 7; ++k)
    chain.push_back(make_choi(
        LabeledMatrix({out_wire("o", 1), in_wire("i", 1)}, one, true), {"i"},
        {"o"}));
  const CombObject t =
      markov_comb(chain, LabeledMatrix({Wire("r", 1)}, one, true));
  const std::vector<Mat> bases(8, one);
  CHECK_THROWS_AS(classicality_check(t, bases), DimensionTooLarge);
}

TEST_CASE("otoc: identity insertions read off the comb normalisation") {
  std::mt19937_64 gen(41);
  const Mat eta = oracle::kron(random_density(2, gen), random_density(2, gen));
  const CombObject t =
      otot(oracle::haar_unitary(4, gen),
           LabeledMatrix({Wire("S", 2), Wire("E", 2)}, eta, true));
  const double val = otoc(t, identity_on({Wire("3i", 2)}),
                          unitary_slot(Mat::Identity(2, 2), "2o", "2i"),
                          unitary_slot(Mat::Identity(2, 2), "1o", "1i"));
  CHECK(val == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("otoc: a complete measurement conserves probability") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 3; ++trial) {
    const Mat eta = random_density(4, gen);
    const CombObject t =
        otot(oracle::haar_unitary(4, gen),
             LabeledMatrix({Wire("S", 2), Wire("E", 2)}, eta, true));
    const LabeledMatrix v =
        unitary_slot(oracle::haar_unitary(2, gen), "2o", "2i");
    KrausSet pk;
    pk.kraus = oracle::random_cptp_kraus(2, 2, gen);
    pk.in_label = "1i";
    pk.out_label = "1o";
    const LabeledMatrix p = choi_of_kraus(pk).mat;
    const Mat um = oracle::haar_unitary(2, gen);
    double total = 0.0;
    for (int b = 0; b < 2; ++b) {
      const Mat effect = um * proj2(b) * um.adjoint();
      total += otoc(t, LabeledMatrix({Wire("3i", 2)}, effect, true), v, p);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("otoc: swap dynamics separate the perturbation from the probe") {
  std::mt19937_64 gen(47);
  const Mat rho_s = random_density(2, gen);
  const Mat rho_e = random_density(2, gen);
  const Mat eta = oracle::kron(rho_s, rho_e);
  const CombObject t =
      otot(swap_gate(), LabeledMatrix({Wire("S", 2), Wire("E", 2)}, eta, true));

  const LabeledMatrix m({Wire("3i", 2)}, pauli_z(), true);
  const LabeledMatrix v = unitary_slot(pauli_z(), "2o", "2i");
  const LabeledMatrix p = unitary_slot(hadamard(), "1o", "1i");
  const double val = otoc(t, m, v, p);

  // The swap carries the perturbed factor away, so the value reduces to the
  // probe expectation on the prepared system alone.
  const Mat hrho = hadamard() * rho_s * hadamard().adjoint();
  const double direct = (pauli_z() * hrho).trace().real();
  CHECK(val == doctest::Approx(direct).epsilon(1e-12));

  const Cplx circuit_val = oracle::circuit_value(
      eta, 2, 2, {swap_gate(), swap_gate().adjoint()},
      {{hadamard()}, {pauli_z()}}, pauli_z());
  CHECK(val == doctest::Approx(circuit_val.real()).epsilon(1e-12));
}

TEST_CASE("otoc: trivial dynamics make the value environment-free") {
  std::mt19937_64 gen(53);
  const Mat vm = oracle::haar_unitary(2, gen);
  const Mat pm = oracle::haar_unitary(2, gen);
  const Mat obs = pauli_z() + 0.3 * pauli_x();
  const Mat rho_s = random_density(2, gen);
  std::vector<double> values;
  for (const int de : {1, 2, 3}) {
    const Mat eta = oracle::kron(rho_s, Mat::Identity(de, de) / double(de));
    const CombObject t =
        otot(Mat::Identity(2 * de, 2 * de),
             LabeledMatrix({Wire("S", 2), Wire("E", de)}, eta, true));
    values.push_back(otoc(t, LabeledMatrix({Wire("3i", 2)}, obs, true),
                          unitary_slot(vm, "2o", "2i"),
                          unitary_slot(pm, "1o", "1i")));
  }
  const double direct =
      (obs * vm * pm * rho_s * pm.adjoint() * vm.adjoint()).trace().real();
  for (const double v : values)
    CHECK(v == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("otoc: the insertions must tile the comb wires") {
  std::mt19937_64 gen(59);
  const Mat eta = random_density(4, gen);
  const CombObject t =
      otot(oracle::haar_unitary(4, gen),
           LabeledMatrix({Wire("S", 2), Wire("E", 2)}, eta, true));
  const LabeledMatrix m({Wire("3i", 2)}, pauli_z(), true);
  const LabeledMatrix v = unitary_slot(Mat::Identity(2, 2), "2o", "2i");
  const LabeledMatrix p = unitary_slot(Mat::Identity(2, 2), "1o", "1i");
  // Foreign wire.
  CHECK_THROWS_AS(
      otoc(t, LabeledMatrix({Wire("9z", 2)}, pauli_z(), true), v, p),
      LabelMismatch);
  // Overlap between insertions.
  CHECK_THROWS_AS(otoc(t, m, v, unitary_slot(Mat::Identity(2, 2), "2o", "1i")),
                  LabelMismatch);
  // Missing cover (1o, 1i untouched).
  CHECK_THROWS_AS(otoc(t, m, v, LabeledMatrix::scalar(1.0)), LabelMismatch);
}

TEST_CASE("loe: commuting perturbations create no operator entanglement") {
  const Mat eta = Mat::Identity(4, 4) / 4.0;
  const LabeledMatrix st({Wire("S", 2), Wire("E", 2)}, eta, true);

  const CombObject trivial = otot(Mat::Identity(4, 4), st);
  CHECK(loe(trivial, unitary_slot(Mat::Identity(2, 2), "2o", "2i")) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(loe(trivial, unitary_slot(pauli_z(), "2o", "2i")) ==
        doctest::Approx(0.0).epsilon(1e-9));

  // exp(-i theta ZZ) commutes with Z on the system.
  const double theta = std::acos(-1.0) / 8.0;
  const Cplx im(0.0, 1.0);
  Mat zz = Mat::Zero(4, 4);
  zz(0, 0) = std::exp(-im * theta);
  zz(1, 1) = std::exp(im * theta);
  zz(2, 2) = std::exp(im * theta);
  zz(3, 3) = std::exp(-im * theta);
  const CombObject t = otot(zz, st);
  CHECK(loe(t, unitary_slot(pauli_z(), "2o", "2i")) ==
        doctest::Approx(0.0).epsilon(1e-9));

  // X anticommutes through: at theta = pi/8 the conjugated operator spreads
  // to an equal two-term Pauli sum worth exactly one bit.
  const double bits = loe(t, unitary_slot(pauli_x(), "2o", "2i"));
  CHECK(bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bits == doctest::Approx(oracle::loe_bits(zz, pauli_x(), 2, 2))
                    .epsilon(1e-9));
}

TEST_CASE("loe: kicked heisenberg interaction entangles monotonically") {
  const double pi = std::acos(-1.0);
  const Cplx im(0.0, 1.0);
  const Mat eta = Mat::Identity(4, 4) / 4.0;
  const LabeledMatrix st({Wire("S", 2), Wire("E", 2)}, eta, true);
  std::vector<double> values;
  for (int t_step = 0; t_step <= 5; ++t_step) {
    const double theta = double(t_step) * pi / 20.0;
    const Mat u = std::cos(theta) * Mat::Identity(4, 4) -
                  im * std::sin(theta) * swap_gate();
    const CombObject t = otot(u, st);
    const double bits = loe(t, unitary_slot(pauli_z(), "2o", "2i"));
    const double closed = -2.0 * std::log2(1.0 - 0.5 * std::pow(
                                                       std::sin(2.0 * theta),
                                                       2.0));
    CHECK(bits == doctest::Approx(closed).epsilon(1e-9));
    CHECK(bits ==
          doctest::Approx(oracle::loe_bits(u, pauli_z(), 2, 2)).epsilon(1e-9));
    values.push_back(bits);
  }
  for (std::size_t k = 1; k < values.size(); ++k)
    CHECK(values[k] >= values[k - 1] - 1e-12);
  CHECK(values.back() > values.front() + 1.0);
  CHECK(values.back() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("loe: inputs are validated") {
  std::mt19937_64 gen(61);
  const Mat eta = Mat::Identity(4, 4) / 4.0;
  const LabeledMatrix st({Wire("S", 2), Wire("E", 2)}, eta, true);
  const CombObject t = otot(oracle::haar_unitary(4, gen), st);

  // Not a channel: double the identity Choi.
  LabeledMatrix heavy = max_entangled("2o", "2i", 2);
  heavy.mutable_data() *= 2.0;
  CHECK_THROWS_AS(loe(t, heavy), InvalidChannel);
  // Wrong wires.
  CHECK_THROWS_AS(loe(t, unitary_slot(pauli_z(), "1o", "1i")), LabelMismatch);
  // Not an out-and-back comb.
  std::mt19937_64 gen2(67);
  const auto k1 = oracle::random_cptp_kraus(2, 2, gen2);
  const CombObject plain = markov_comb(
      {bridge(k1)},
      LabeledMatrix({Wire("r", 2)}, random_density(2, gen2), true));
  CHECK_THROWS_AS(loe(plain, unitary_slot(pauli_z(), "2o", "2i")),
                  BadStructure);
  // Biased initial state.
  const Mat biased = oracle::kron(proj2(0), Mat::Identity(2, 2) / 2.0);
  const CombObject off =
      otot(oracle::haar_unitary(4, gen),
           LabeledMatrix({Wire("S", 2), Wire("E", 2)}, biased, true));
  CHECK_THROWS_AS(loe(off, unitary_slot(pauli_z(), "2o", "2i")),
                  ConventionViolation);
}

TEST_CASE("qde: fully depolarising dynamics saturate the entropy rate") {
  const Mat depol = oracle::kron(Mat::Identity(2, 2) / 2.0,
                                 Mat::Identity(2, 2));
  const auto ch = [&]() {
    return make_choi(
        LabeledMatrix({out_wire("o", 2), in_wire("i", 2)}, depol, true),
        {"i"}, {"o"});
  };
  const CombObject t = markov_comb(
      {ch(), ch()},
      LabeledMatrix({Wire("r", 2)}, Mat::Identity(2, 2) / 2.0, true));
  // The normalised comb is 1/32: purity 2^-5 over two steps.
  CHECK(qde(t, 2) == doctest::Approx(2.5).epsilon(1e-12));

  const Mat that = t.mat.data() / t.mat.data().trace();
  CHECK(qde(t, 2) ==
        doctest::Approx(-std::log2(oracle::purity(that)) / 2.0)
            .epsilon(1e-12));
  CHECK(qde(t, 1) == doctest::Approx(2.0 * qde(t, 2)).epsilon(1e-12));
  CHECK_THROWS_AS(qde(t, 0), OutOfDomain);
}

TEST_CASE("qde: generic combs match the raw purity formula") {
  std::mt19937_64 gen(73);
  const CombObject t = comb_from_circuit(
      circuit(2, 2, random_density(4, gen),
              {oracle::haar_unitary(4, gen), oracle::haar_unitary(4, gen)}));
  const Mat that = t.mat.data() / t.mat.data().trace();
  CHECK(qde(t, 1) ==
        doctest::Approx(-std::log2(oracle::purity(that))).epsilon(1e-12));
}

TEST_CASE("temporal entanglement: memory across the half-time cut") {
  std::mt19937_64 gen(79);
  const std::vector<Mat> id_kraus = {Mat::Identity(2, 2)};
  const LabeledMatrix init({Wire("r", 2)}, random_density(2, gen), true);

  // A memoryless comb factors tooth by tooth, so nothing straddles the cut;
  // the brute-force vectorise-and-trace oracle fixes the same value.
  const CombObject four = markov_comb(
      {bridge(id_kraus), bridge(id_kraus), bridge(id_kraus)}, init);
  const double te_markov = temporal_entanglement(four);
  const LabeledMatrix sorted = canonical_sort(four.mat);
  const std::vector<int> dims(7, 2);
  const double pur = oracle::vectorised_half_purity(sorted.data(), dims, 3);
  CHECK(te_markov == doctest::Approx(-std::log2(pur)).epsilon(1e-9));
  CHECK(te_markov == doctest::Approx(0.0).epsilon(1e-9));

  // Swap dynamics ferry the second slot input across the cut: the comb
  // carries a maximally entangled pair between wires 1o and 3i, worth two
  // bits of Renyi-2 entropy after vectorisation.
  const Mat eta = oracle::kron(random_density(2, gen), random_density(2, gen));
  const CombObject ferry = comb_from_circuit(circuit(
      2, 2, eta, {swap_gate(), swap_gate(), swap_gate()}));
  const double te_ferry = temporal_entanglement(ferry);
  CHECK(te_ferry == doctest::Approx(2.0).epsilon(1e-9));
  const LabeledMatrix fsorted = canonical_sort(ferry.mat);
  const double fpur =
      oracle::vectorised_half_purity(fsorted.data(), dims, 3);
  CHECK(te_ferry == doctest::Approx(-std::log2(fpur)).epsilon(1e-9));

  // A two-tooth memoryless comb has nothing across the cut.
  const CombObject two = markov_comb({bridge(id_kraus)}, init);
  CHECK(temporal_entanglement(two) == doctest::Approx(0.0).epsilon(1e-9));

  // The perfect-memory comb straddles the cut with a maximally entangled
  // pair.
  Mat rho_e = Mat::Zero(2, 2);
  rho_e(0, 0) = 0.7;
  rho_e(1, 1) = 0.3;
  CHECK(temporal_entanglement(swap_memory_comb(rho_e)) ==
        doctest::Approx(2.0).epsilon(1e-9));

  // Odd tooth counts have no half-time cut.
  const CombObject three =
      markov_comb({bridge(id_kraus), bridge(id_kraus)}, init);
  CHECK_THROWS_AS(temporal_entanglement(three), OddPartition);
}

TEST_CASE("analysis scalars are invariant under wire relabelling") {
  const auto names = scrambled_names();

  Mat rho_e = Mat::Zero(2, 2);
  rho_e(0, 0) = 0.7;
  rho_e(1, 1) = 0.3;
  const CombObject swap_mem = swap_memory_comb(rho_e);
  const CombObject swap_renamed = relabel_comb(swap_mem, names);
  CHECK(markov_test(swap_renamed).distance_bits ==
        doctest::Approx(markov_test(swap_mem).distance_bits).epsilon(1e-10));
  CHECK(temporal_entanglement(swap_renamed) ==
        doctest::Approx(temporal_entanglement(swap_mem)).epsilon(1e-10));
  CHECK(qde(swap_renamed, 2) ==
        doctest::Approx(qde(swap_mem, 2)).epsilon(1e-10));

  // Markov order distances, outcome by outcome.
  const Mat u1 = oracle::kron(hadamard(), Mat::Identity(2, 2)) * cnot_se();
  const Mat eta = oracle::kron(Mat::Identity(2, 2) / 2.0, proj2(0));
  const CombObject mem = comb_from_circuit(
      circuit(2, 2, eta, {u1, swap_gate(), Mat::Identity(4, 4)}));
  const CombObject mem_renamed = relabel_comb(mem, names);
  PartitionFMH part;
  part.history = {0};
  part.memory = {1};
  part.future = {2, 3};
  std::vector<LabeledMatrix> tester, tester_renamed;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const LabeledMatrix g({out_wire("2o", 2), in_wire("2i", 2)},
                            oracle::kron(proj2(a), proj2(b)), true);
      tester.push_back(g);
      tester_renamed.push_back(relabel_some(g, names));
    }
  const auto before = markov_order_check(mem, tester, part);
  const auto after = markov_order_check(mem_renamed, tester_renamed, part);
  REQUIRE(before.outcomes.size() == after.outcomes.size());
  for (std::size_t k = 0; k < before.outcomes.size(); ++k)
    CHECK(after.outcomes[k].distance ==
          doctest::Approx(before.outcomes[k].distance).epsilon(1e-10));

  // Classicality difference for the spin-chain protocol.
  const CombObject sg = comb_from_circuit(circuit(
      2, 1, plus_proj(), {Mat::Identity(2, 2), Mat::Identity(2, 2)}));
  const std::vector<Mat> bases = {Mat::Identity(2, 2), hadamard(),
                                  Mat::Identity(2, 2)};
  CHECK(classicality_check(relabel_comb(sg, names), bases).max_difference ==
        doctest::Approx(classicality_check(sg, bases).max_difference)
            .epsilon(1e-10));

  // Out-and-back scalars.
  std::mt19937_64 gen(83);
  const Mat rho_s = random_density(2, gen);
  const Mat joint = oracle::kron(rho_s, random_density(2, gen));
  const CombObject ot =
      otot(swap_gate(),
           LabeledMatrix({Wire("S", 2), Wire("E", 2)}, joint, true));
  const LabeledMatrix m({Wire("3i", 2)}, pauli_z(), true);
  const LabeledMatrix v = unitary_slot(pauli_z(), "2o", "2i");
  const LabeledMatrix p = unitary_slot(hadamard(), "1o", "1i");
  const double val = otoc(ot, m, v, p);
  const double val_renamed =
      otoc(relabel_comb(ot, names), relabel_some(m, names), relabel_some(v, names),
           relabel_some(p, names));
  CHECK(val_renamed == doctest::Approx(val).epsilon(1e-10));

  const Mat eta_mix = Mat::Identity(4, 4) / 4.0;
  const double theta = std::acos(-1.0) / 8.0;
  const Cplx im(0.0, 1.0);
  Mat zz = Mat::Zero(4, 4);
  zz(0, 0) = std::exp(-im * theta);
  zz(1, 1) = std::exp(im * theta);
  zz(2, 2) = std::exp(im * theta);
  zz(3, 3) = std::exp(-im * theta);
  const CombObject lt =
      otot(zz, LabeledMatrix({Wire("S", 2), Wire("E", 2)}, eta_mix, true));
  const LabeledMatrix vx = unitary_slot(pauli_x(), "2o", "2i");
  CHECK(loe(relabel_comb(lt, names), relabel_some(vx, names)) ==
        doctest::Approx(loe(lt, vx)).epsilon(1e-10));
}
