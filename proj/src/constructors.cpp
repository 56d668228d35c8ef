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

#include "hoqo/constructors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hoqo/link.hpp"

namespace hoqo {

namespace {

constexpr double kUnitaryTol = 1e-10;     // circuit unitarity requirement
constexpr double kRankCutoffRel = 1e-10;  // eigenvalue cutoff, x largest
constexpr double kRankGapFactor = 10.0;   // minimum spectral gap, x cutoff

// Replaces the wires of x positionally (dims must agree), keeping the data.
LabeledMatrix rewire(const LabeledMatrix& x, std::vector<Wire> wires) {
  if (wires.size() != x.wires().size())
    throw DimensionMismatch("rewire must keep the wire count");
  for (std::size_t k = 0; k < wires.size(); ++k)
    if (wires[k].dim != x.wires()[k].dim)
      throw DimensionMismatch("rewire must keep the wire dimensions");
  return LabeledMatrix(std::move(wires), x.data(), x.hermitian_hint());
}

// Column carrier |j> on a single wire.
LabeledMatrix basis_ket(const Wire& w, int j) {
  Mat v = Mat::Zero(w.dim, 1);
  v(j, 0) = 1.0;
  return LabeledMatrix({w}, std::move(v));
}

// Kept spectral data of a Hermitian PSD matrix: square roots of the
// eigenvalues above kRankCutoffRel x the largest (floored at zero),
// descending, with the matching eigenvectors as columns. With gap_check,
// throws NumericalRankFailure when the spectrum does not separate cleanly
// at the cut.
struct KeptEigs {
  std::vector<double> sq;
  Mat vecs;
};

KeptEigs kept_eigs(const Mat& m, bool gap_check) {
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const long n = ev.size();
  const double lmax = ev(n - 1);
  if (lmax <= 0.0)
    throw BadStructure("positive-semidefinite factor has no positive part");
  const double cutoff = kRankCutoffRel * lmax;
  long r = 0;
  for (long i = 0; i < n; ++i)
    if (ev(i) > cutoff) ++r;
  if (gap_check) {
    const double smallest_kept = ev(n - r);
    const double largest_cut = r < n ? std::max(0.0, ev(n - r - 1)) : 0.0;
    if (smallest_kept - largest_cut < kRankGapFactor * cutoff)
      throw NumericalRankFailure(
          "ambiguous numerical rank: spectral gap " +
          std::to_string(smallest_kept - largest_cut) + " at cutoff " +
          std::to_string(cutoff));
  }
  KeptEigs out;
  out.sq.resize(r);
  out.vecs = Mat(n, r);
  for (long b = 0; b < r; ++b) {
    out.sq[b] = std::sqrt(std::max(0.0, ev(n - 1 - b)));
    out.vecs.col(b) = es.eigenvectors().col(n - 1 - b);
  }
  return out;
}

// Wire labels of the reduced comb on teeth 1..k, latest wire first:
// (e_k, a_k, ..., e_1, a_1) with absent wires skipped. This is the fixed
// matrix ordering all dilation formulas below are written in.
std::vector<std::string> reduced_order(const CombStructure& s, int k) {
  std::vector<std::string> order;
  for (int j = k - 1; j >= 0; --j) {
    if (s.teeth[j].input_label) order.push_back(*s.teeth[j].input_label);
    if (s.teeth[j].output_label) order.push_back(*s.teeth[j].output_label);
  }
  return order;
}

// Canonical auxiliary-space label for the k-th dilation step: "aux<k>",
// extended with '~' until it avoids the comb's own labels. Deterministic,
// so comb_from_dilation regenerates the names comb_dilation implies.
std::string aux_label(const CombStructure& s, int k) {
  std::set<std::string> taken;
  for (const std::string& l : s.all_labels()) taken.insert(l);
  std::string label = "aux" + std::to_string(k);
  while (taken.count(label)) label += "~";
  return label;
}

// The reduced combs T_1 .. T_n of a validated comb, each as a plain matrix
// in its reduced_order wire ordering. T_n is the comb itself; peeling one
// tooth traces its emitted wire and divides out the identity on its
// absorbed wire.
std::vector<Mat> reduced_combs(const CombObject& t) {
  const int n = static_cast<int>(t.structure.teeth.size());
  std::vector<Mat> reduced(n);
  LabeledMatrix cur = permute_wires(t.mat, reduced_order(t.structure, n));
  for (int k = n; k >= 1; --k) {
    reduced[k - 1] = cur.data();
    if (k == 1) break;
    const Tooth& tooth = t.structure.teeth[k - 1];
    std::vector<std::string> drop;
    double d_abs = 1.0;
    if (tooth.input_label) drop.push_back(*tooth.input_label);
    if (tooth.output_label) {
      drop.push_back(*tooth.output_label);
      d_abs = t.structure.dim_of(*tooth.output_label);
    }
    cur = partial_trace(cur, drop);
    cur.mutable_data() /= d_abs;
  }
  return reduced;
}

}  // namespace

void validate_circuit(const SECircuit& c) {
  if (c.system_dim < 1 || c.env_dim < 1)
    throw BadDimension("circuit dimensions must be positive");
  if (c.initial_state.wires().size() != 2)
    throw DimensionMismatch(
        "circuit initial state must carry (system, environment) wires");
  if (c.initial_state.wires()[0].dim != c.system_dim ||
      c.initial_state.wires()[1].dim != c.env_dim)
    throw DimensionMismatch(
        "circuit initial state dimensions must be (system, environment)");
  const Verdict v = validate_state(c.initial_state);
  if (!v.pass)
    throw BadStructure("circuit initial state invalid: " + v.first_violation);
  const long dse = static_cast<long>(c.system_dim) * c.env_dim;
  for (const Mat& u : c.unitaries) {
    if (u.rows() != dse || u.cols() != dse)
      throw DimensionMismatch("circuit unitary must act on system x env");
    const double dev =
        (u.adjoint() * u - Mat::Identity(dse, dse)).cwiseAbs().maxCoeff();
    if (dev > kUnitaryTol)
      throw BadStructure("circuit matrix is not unitary (deviation " +
                         std::to_string(dev) + ")");
  }
}

CombObject comb_from_circuit(const SECircuit& c) {
  validate_circuit(c);
  const int m = static_cast<int>(c.unitaries.size());
  std::vector<LabeledMatrix> pieces;
  pieces.push_back(rewire(
      c.initial_state, {in_wire("1i", c.system_dim), aux_wire("E1", c.env_dim)}));
  std::vector<std::pair<std::string, std::string>> teeth = {{"", "1i"}};
  std::map<std::string, int> dims = {{"1i", c.system_dim}};
  for (int k = 1; k <= m; ++k) {
    const std::string absorb = std::to_string(k) + "o";
    const std::string emit = std::to_string(k + 1) + "i";
    pieces.push_back(choi_of_operator(
        c.unitaries[k - 1],
        {in_wire(emit, c.system_dim), aux_wire("E" + std::to_string(k + 1), c.env_dim)},
        {out_wire(absorb, c.system_dim), aux_wire("E" + std::to_string(k), c.env_dim)}));
    teeth.push_back({absorb, emit});
    dims[absorb] = c.system_dim;
    dims[emit] = c.system_dim;
  }
  const LabeledMatrix linked = link_many(pieces);
  LabeledMatrix mat =
      partial_trace(linked, {"E" + std::to_string(m + 1)});
  return CombObject{canonical_sort(mat), make_comb_structure(teeth, dims)};
}

CombObject markov_comb(const std::vector<ChoiOperator>& channels,
                       const LabeledMatrix& initial) {
  if (initial.wires().size() != 1)
    throw DimensionMismatch("markov initial state must carry a single wire");
  const int d1 = initial.wires()[0].dim;
  LabeledMatrix acc = rewire(initial, {in_wire("1i", d1)});
  std::vector<std::pair<std::string, std::string>> teeth = {{"", "1i"}};
  std::map<std::string, int> dims = {{"1i", d1}};
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const ChoiOperator& ch = channels[k];
    if (ch.map_inputs.size() != 1 || ch.map_outputs.size() != 1)
      throw DimensionMismatch(
          "markov channels must map a single wire to a single wire");
    const std::string absorb = std::to_string(k + 1) + "o";
    const std::string emit = std::to_string(k + 2) + "i";
    const int din = ch.mat.wire(ch.map_inputs[0]).dim;
    const int dout = ch.mat.wire(ch.map_outputs[0]).dim;
    LabeledMatrix piece =
        permute_wires(ch.mat, {ch.map_outputs[0], ch.map_inputs[0]});
    piece = rewire(piece, {in_wire(emit, dout), out_wire(absorb, din)});
    acc = kron(acc, piece);
    teeth.push_back({absorb, emit});
    dims[absorb] = din;
    dims[emit] = dout;
  }
  return CombObject{canonical_sort(acc), make_comb_structure(teeth, dims)};
}

std::vector<Mat> kraus_from_choi(const ChoiOperator& c, double cutoff_rel) {
  std::vector<std::string> order = c.map_outputs;
  order.insert(order.end(), c.map_inputs.begin(), c.map_inputs.end());
  const LabeledMatrix p = permute_wires(c.mat, order);
  long dout = 1, din = 1;
  for (const std::string& l : c.map_outputs) dout *= c.mat.wire(l).dim;
  for (const std::string& l : c.map_inputs) din *= c.mat.wire(l).dim;
  Eigen::SelfAdjointEigenSolver<Mat> es((p.data() + p.data().adjoint()) / 2.0);
  const Eigen::VectorXd ev = es.eigenvalues();
  const long n = ev.size();
  const double cutoff = cutoff_rel * std::max(0.0, ev(n - 1));
  std::vector<Mat> kraus;
  for (long b = n - 1; b >= 0; --b) {
    if (ev(b) <= cutoff || ev(b) <= 0.0) break;
    const double scale = std::sqrt(ev(b));
    Mat k(dout, din);
    for (long a = 0; a < dout; ++a)
      for (long i = 0; i < din; ++i)
        k(a, i) = scale * es.eigenvectors()(a * din + i, b);
    kraus.push_back(std::move(k));
  }
  return kraus;
}

ChannelDilation stinespring_channel(const ChoiOperator& c) {
  const Verdict v = validate_channel(c.mat, c.map_inputs, c.map_outputs);
  if (!v.pass)
    throw InvalidChannel("stinespring input: " + v.first_violation);
  ChannelDilation out;
  out.kraus = kraus_from_choi(c);
  out.aux_dim = static_cast<int>(out.kraus.size());
  const long dout = out.kraus.front().rows(), din = out.kraus.front().cols();
  out.isometry = Mat::Zero(dout * out.aux_dim, din);
  for (int b = 0; b < out.aux_dim; ++b)
    for (long a = 0; a < dout; ++a)
      for (long i = 0; i < din; ++i)
        out.isometry(a * out.aux_dim + b, i) = out.kraus[b](a, i);
  // Rebuild the Choi from the Kraus set and compare entrywise.
  std::vector<std::string> order = c.map_outputs;
  order.insert(order.end(), c.map_inputs.begin(), c.map_inputs.end());
  const Mat ref = permute_wires(c.mat, order).data();
  Mat acc = Mat::Zero(ref.rows(), ref.cols());
  for (const Mat& k : out.kraus) {
    Vec vk(dout * din);
    for (long a = 0; a < dout; ++a)
      for (long i = 0; i < din; ++i) vk(a * din + i) = k(a, i);
    acc += vk * vk.adjoint();
  }
  out.reconstruction_error = (acc - ref).cwiseAbs().maxCoeff();
  return out;
}

DilationResult comb_dilation(const CombObject& t) {
  const Verdict v = validate_comb(t.mat, t.structure);
  if (!v.pass)
    throw BadStructure("comb_dilation requires a valid comb; failed: " +
                       v.first_violation);
  const int n = static_cast<int>(t.structure.teeth.size());
  const std::vector<Mat> reduced = reduced_combs(t);

  // One isometry per tooth: tooth k maps (absorbed wire x previous
  // auxiliary) to (emitted wire x next auxiliary). The k-th auxiliary space
  // is the support of the k-th reduced comb; its basis vector beta is the
  // eigenvector of T_k with the beta-th largest eigenvalue, taken in the
  // reduced_order wire ordering. In that basis the isometry entries close
  // over the spectral data of T_k and T_{k-1} alone:
  //   V_k[(x, beta), (a, gamma)] =
  //     sqrt(l_beta / l_gamma) * sum_j v_beta[(x, a, j)] conj(u_gamma[j])
  // with v (resp. u) the kept eigenvectors of T_k (resp. T_{k-1}).
  DilationResult out;
  KeptEigs prev;
  prev.sq = {1.0};
  prev.vecs = Mat::Ones(1, 1);
  long d_prev = 1;
  for (int k = 1; k <= n; ++k) {
    const KeptEigs cur = kept_eigs(reduced[k - 1], /*gap_check=*/true);
    const Tooth& tooth = t.structure.teeth[k - 1];
    const long de =
        tooth.input_label ? t.structure.dim_of(*tooth.input_label) : 1;
    const long da =
        tooth.output_label ? t.structure.dim_of(*tooth.output_label) : 1;
    const long rk = static_cast<long>(cur.sq.size());
    const long rp = static_cast<long>(prev.sq.size());
    Mat vk = Mat::Zero(de * rk, da * rp);
    for (long b = 0; b < rk; ++b)
      for (long x = 0; x < de; ++x)
        for (long a = 0; a < da; ++a)
          for (long g = 0; g < rp; ++g) {
            Cplx acc = 0.0;
            for (long j = 0; j < d_prev; ++j)
              acc += cur.vecs((x * da + a) * d_prev + j, b) *
                     std::conj(prev.vecs(j, g));
            vk(x * rk + b, a * rp + g) = cur.sq[b] / prev.sq[g] * acc;
          }
    out.isometries.push_back(std::move(vk));
    out.aux_dims.push_back(static_cast<int>(rk));
    prev = cur;
    d_prev = reduced[k - 1].rows();
  }
  return out;
}

CombObject comb_from_dilation(const DilationResult& d,
                              const CombStructure& s) {
  validate_structure(s);
  const int n = static_cast<int>(s.teeth.size());
  if (static_cast<int>(d.isometries.size()) != n ||
      static_cast<int>(d.aux_dims.size()) != n)
    throw DimensionMismatch("dilation does not match the comb structure");
  std::vector<LabeledMatrix> pieces;
  int r_prev = 1;
  for (int k = 1; k <= n; ++k) {
    const Tooth& tooth = s.teeth[k - 1];
    std::vector<Wire> outw, inw;
    if (tooth.input_label)
      outw.push_back(in_wire(*tooth.input_label, s.dim_of(*tooth.input_label)));
    outw.push_back(aux_wire(aux_label(s, k), d.aux_dims[k - 1]));
    if (tooth.output_label)
      inw.push_back(
          out_wire(*tooth.output_label, s.dim_of(*tooth.output_label)));
    if (k > 1) inw.push_back(aux_wire(aux_label(s, k - 1), r_prev));
    pieces.push_back(choi_of_operator(d.isometries[k - 1], outw, inw));
    r_prev = d.aux_dims[k - 1];
  }
  const LabeledMatrix linked = link_many(pieces);
  LabeledMatrix mat = partial_trace(linked, {aux_label(s, n)});
  return CombObject{canonical_sort(mat), s};
}

EncoderDecoder encoder_decoder(const CombObject& t) {
  const Verdict v = validate_comb(t.mat, t.structure);
  if (!v.pass)
    throw BadStructure("encoder_decoder requires a valid comb; failed: " +
                       v.first_violation);
  if (t.structure.teeth.size() != 2)
    throw BadStructure("encoder_decoder requires a two-tooth comb");
  const Tooth& first = t.structure.teeth[0];
  const Tooth& second = t.structure.teeth[1];
  const std::string e1 = *first.input_label;  // present: not the last tooth
  const std::string a2 = *second.output_label;  // present: not the first
  const long de1 = t.structure.dim_of(e1);
  const long da1 =
      first.output_label ? t.structure.dim_of(*first.output_label) : 1;
  const std::vector<Mat> reduced = reduced_combs(t);
  const KeptEigs eig = kept_eigs(reduced[0], /*gap_check=*/true);
  const long r = static_cast<long>(eig.sq.size());
  const std::string aux = aux_label(t.structure, 1);

  // Encoder: the isometry channel a_1 -> (e_1, aux) purifying T_1, with
  // V[(x, beta), a] = sqrt(l_beta) v_beta[(x, a)].
  Mat ve = Mat::Zero(de1 * r, da1);
  for (long b = 0; b < r; ++b)
    for (long x = 0; x < de1; ++x)
      for (long a = 0; a < da1; ++a)
        ve(x * r + b, a) = eig.sq[b] * eig.vecs(x * da1 + a, b);
  std::vector<Wire> enc_out = {in_wire(e1, static_cast<int>(de1)),
                               aux_wire(aux, static_cast<int>(r))};
  std::vector<Wire> enc_in;
  std::vector<std::string> enc_in_labels;
  if (first.output_label) {
    enc_in.push_back(out_wire(*first.output_label, static_cast<int>(da1)));
    enc_in_labels.push_back(*first.output_label);
  }
  ChoiOperator encoder = make_choi(choi_of_operator(ve, enc_out, enc_in),
                                   enc_in_labels, {e1, aux});

  // Decoder: the comb with its first-tooth block compressed onto the
  // auxiliary basis through the inverse square root of T_1,
  //   D[(z, beta), (z', beta')] =
  //     sum_{u, u'} A(beta, u) T[(z, u), (z', u')] conj(A(beta', u'))
  // with A = diag(1 / sqrt(l)) V^dag (no conjugation: the link pairs the
  // encoder's auxiliary index directly against the decoder's).
  const long d1 = reduced[0].rows();
  Mat a_op(r, d1);
  for (long b = 0; b < r; ++b)
    a_op.row(b) = eig.vecs.col(b).adjoint() / eig.sq[b];
  const Mat& full = reduced[1];  // ordered (e_2, a_2, e_1, a_1)
  const long dz = full.rows() / d1;
  Mat dm = Mat::Zero(dz * r, dz * r);
  for (long z = 0; z < dz; ++z)
    for (long zp = 0; zp < dz; ++zp)
      dm.block(z * r, zp * r, r, r) =
          a_op * full.block(z * d1, zp * d1, d1, d1) * a_op.adjoint();
  std::vector<Wire> dec_wires;
  std::vector<std::string> dec_out_labels;
  if (second.input_label) {
    dec_wires.push_back(in_wire(*second.input_label,
                                t.structure.dim_of(*second.input_label)));
    dec_out_labels.push_back(*second.input_label);
  }
  dec_wires.push_back(out_wire(a2, t.structure.dim_of(a2)));
  dec_wires.push_back(aux_wire(aux, static_cast<int>(r)));
  ChoiOperator decoder =
      make_choi(LabeledMatrix(dec_wires, std::move(dm), true), {aux, a2},
                dec_out_labels);

  EncoderDecoder out;
  out.encoder = std::move(encoder);
  out.decoder = std::move(decoder);
  out.aux_dim = static_cast<int>(r);
  out.aux_label = aux;
  return out;
}

LabeledMatrix quantum_switch(int d) {
  if (d < 1) throw BadDimension("switch target dimension must be positive");
  const Wire c = ctrl_wire("C", 2), cp = ctrl_wire("C'", 2);
  const LabeledMatrix b0 =
      kron(kron(kron(kron(basis_ket(c, 0), max_entangled_vec("P", "Ai", d)),
                     max_entangled_vec("Ao", "Bi", d)),
                max_entangled_vec("Bo", "F", d)),
           basis_ket(cp, 0));
  LabeledMatrix b1 =
      kron(kron(kron(kron(basis_ket(c, 1), max_entangled_vec("P", "Bi", d)),
                     max_entangled_vec("Bo", "Ai", d)),
                max_entangled_vec("Ao", "F", d)),
           basis_ket(cp, 1));
  b1 = permute_wires(b1, b0.labels());
  LabeledMatrix vec(b0.wires(), b0.data() + b1.data());
  return canonical_sort(outer(vec));
}

ProcessMatrixObject w_ocb() {
  Mat sz(2, 2), sx(2, 2), id = Mat::Identity(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  const std::vector<Wire> wires = {in_wire("Ai", 2), out_wire("Ao", 2),
                                   in_wire("Bi", 2), out_wire("Bo", 2)};
  auto term = [&](const Mat& mai, const Mat& mao, const Mat& mbi,
                  const Mat& mbo) {
    return kron(kron(kron(LabeledMatrix({wires[0]}, mai, true),
                          LabeledMatrix({wires[1]}, mao, true)),
                     LabeledMatrix({wires[2]}, mbi, true)),
                LabeledMatrix({wires[3]}, mbo, true));
  };
  const LabeledMatrix t1 = term(id, sz, sz, id);
  const LabeledMatrix t2 = term(sz, id, sx, sz);
  Mat w = (Mat::Identity(16, 16) + (t1.data() + t2.data()) / std::sqrt(2.0)) /
          4.0;
  ProcessMatrixObject out;
  out.mat = LabeledMatrix(wires, std::move(w), true);
  return out;
}

LabeledMatrix time_flip_hoqo(int d) {
  if (d < 1) throw BadDimension("time-flip dimension must be positive");
  const Wire c = ctrl_wire("C", 2), cp = ctrl_wire("C'", 2);
  const LabeledMatrix b0 =
      kron(kron(kron(basis_ket(c, 0), max_entangled_vec("Bi", "Ai", d)),
                max_entangled_vec("Bo", "Ao", d)),
           basis_ket(cp, 0));
  LabeledMatrix b1 =
      kron(kron(kron(basis_ket(c, 1), max_entangled_vec("Bi", "Ao", d)),
                max_entangled_vec("Bo", "Ai", d)),
           basis_ket(cp, 1));
  b1 = permute_wires(b1, b0.labels());
  LabeledMatrix vec(b0.wires(), b0.data() + b1.data());
  return canonical_sort(outer(vec));
}

TimeFlipResult time_flip(const ChoiOperator& c, const LabeledMatrix& control) {
  if (c.map_inputs.size() != 1 || c.map_outputs.size() != 1)
    throw DimensionMismatch("time flip expects a single-wire channel");
  const std::string in_l = c.map_inputs[0], out_l = c.map_outputs[0];
  const int d = c.mat.wire(in_l).dim;
  if (c.mat.wire(out_l).dim != d)
    throw DimensionMismatch(
        "time flip requires equal input and output dimensions");
  const Verdict cv = validate_channel(c.mat, {in_l}, {out_l});
  if (!cv.pass) throw InvalidChannel("time flip input: " + cv.first_violation);
  if (control.wires().size() != 1 || control.wires()[0].dim != 2)
    throw BadDimension("time-flip control must be a single qubit wire");
  const Verdict sv = validate_state(control);
  if (!sv.pass)
    throw BadStructure("time-flip control state: " + sv.first_violation);

  // Blocks of the flip Choi over the control: the diagonal ones are the
  // channel and its input/output swap, the off-diagonal ones carry the
  // coherence between the two time directions. S swaps the two composite
  // factors of the channel's (out, in)-ordered Choi.
  const Mat ch = permute_wires(c.mat, {out_l, in_l}).data();
  Mat s = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a) s(i * d + a, a * d + i) = 1.0;
  const Mat blocks[2][2] = {{ch, ch * s}, {s * ch, s * ch * s}};

  const Wire wcp = ctrl_wire("C'", 2), wc = ctrl_wire("C", 2);
  const Wire wai = out_wire("Ai", d), wao = in_wire("Ao", d);
  Mat acc;
  std::vector<Wire> flip_wires;
  bool started = false;
  for (int j = 0; j < 2; ++j)
    for (int jp = 0; jp < 2; ++jp) {
      Mat b = Mat::Zero(4, 4);
      b(j * 2 + j, jp * 2 + jp) = 1.0;
      const LabeledMatrix piece = kron(LabeledMatrix({wcp, wc}, std::move(b)),
                                       LabeledMatrix({wai, wao}, blocks[j][jp]));
      if (!started) {
        acc = piece.data();
        flip_wires = piece.wires();
        started = true;
      } else {
        acc += piece.data();
      }
    }
  LabeledMatrix flip_lm(flip_wires, std::move(acc), true);

  TimeFlipResult out;
  out.flip = make_choi(flip_lm, {"C", "Ao"}, {"Ai", "C'"});
  const LabeledMatrix ctrl = rewire(control, {ctrl_wire("C", 2)});
  out.controlled = make_choi(link(ctrl, flip_lm), {"Ao"}, {"Ai", "C'"});
  const LabeledMatrix unital_marginal = partial_trace(c.mat, {in_l});
  const double dev =
      max_abs_diff(unital_marginal, identity_on({c.mat.wire(out_l)}));
  Verdict unitality;
  unitality.kind = "unital channel";
  unitality.pass = dev <= kValidityTol;
  unitality.magnitude = dev;
  unitality.first_violation = unitality.pass ? "" : "unital marginal";
  unitality.conditions = {
      Condition{"unital marginal", unitality.pass, dev, kValidityTol}};
  out.unitality = std::move(unitality);
  out.validity = validate_channel(flip_lm, {"C", "Ao"}, {"Ai", "C'"});
  return out;
}

CombObject otot(const Mat& u_t, const LabeledMatrix& eta) {
  if (eta.wires().size() != 2)
    throw DimensionMismatch(
        "otot state must carry (system, environment) wires");
  SECircuit c;
  c.system_dim = eta.wires()[0].dim;
  c.env_dim = eta.wires()[1].dim;
  c.initial_state = eta;
  c.unitaries = {u_t, u_t.adjoint()};
  return comb_from_circuit(c);
}

}  // namespace hoqo
