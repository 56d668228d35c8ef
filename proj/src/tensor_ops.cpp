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

#include "hoqo/tensor_ops.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <set>

namespace hoqo {

KernelMode& kernel_mode() {
  static KernelMode mode = KernelMode::auto_select;
  return mode;
}

namespace {

constexpr long kMaxSide = 1L << 15;

bool use_parallel(long work) {
  switch (kernel_mode()) {
    case KernelMode::serial: return false;
    case KernelMode::parallel: return true;
    case KernelMode::auto_select: return work >= (1L << 16);
  }
  return false;
}

// Offsets of every sub-index combination of the wires at `positions`,
// measured in the source indexer's strides.
std::vector<long> sub_offsets(const WireIndexer& ix,
                              const std::vector<int>& positions) {
  long count = 1;
  for (int p : positions) count *= ix.dims[p];
  std::vector<long> offs(count, 0);
  for (long m = 0; m < count; ++m) {
    long rem = m, off = 0;
    for (std::size_t k = positions.size(); k-- > 0;) {
      const int p = positions[k];
      off += (rem % ix.dims[p]) * ix.strides[p];
      rem /= ix.dims[p];
    }
    offs[m] = off;
  }
  return offs;
}

std::vector<int> positions_of(const LabeledMatrix& x,
                              const std::vector<std::string>& labels) {
  std::set<std::string> want(labels.begin(), labels.end());
  if (want.size() != labels.size())
    throw DuplicateLabel("label list repeats an entry");
  std::vector<int> pos;
  for (const std::string& l : labels) {
    const int p = x.wire_pos(l);
    if (p < 0) throw UnknownLabel("no wire labeled '" + l + "'");
    pos.push_back(p);
  }
  return pos;
}

void kron_kernel(const Mat& a, const Mat& b, Mat& out, bool par) {
  const long ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
#pragma omp parallel for if (par) schedule(static)
  for (long i = 0; i < ar; ++i)
    for (long k = 0; k < ac; ++k) {
      const Cplx aik = a(i, k);
      for (long j = 0; j < br; ++j)
        for (long l = 0; l < bc; ++l)
          out(i * br + j, k * bc + l) = aik * b(j, l);
    }
}

void partial_trace_kernel(const Mat& in, const std::vector<long>& kept,
                          const std::vector<long>& traced, Mat& out,
                          bool par) {
  const long dk = static_cast<long>(kept.size());
  const long dt = static_cast<long>(traced.size());
#pragma omp parallel for if (par) schedule(static)
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      Cplx acc = 0.0;
      for (long t = 0; t < dt; ++t)
        acc += in(kept[r] + traced[t], kept[c] + traced[t]);
      out(r, c) = acc;
    }
}

// out(r,c) = in(keep[r]+swap[c], keep[c]+swap[r]) for partial transpose;
// generic two-part gather also used by wire permutation.
void gather_kernel(const Mat& in, const std::vector<long>& row_map,
                   const std::vector<long>& col_map, Mat& out, bool par) {
  const long n = static_cast<long>(row_map.size());
  const long m = static_cast<long>(col_map.size());
#pragma omp parallel for if (par) schedule(static)
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < m; ++c) out(r, c) = in(row_map[r], col_map[c]);
}

}  // namespace

LabeledMatrix kron(const LabeledMatrix& a, const LabeledMatrix& b) {
  std::set<std::string> seen;
  for (const Wire& w : a.wires()) seen.insert(w.label);
  for (const Wire& w : b.wires())
    if (seen.count(w.label))
      throw DuplicateLabel("wire label '" + w.label + "' on both operands");
  if (a.is_vector() != b.is_vector() && !a.is_scalar() && !b.is_scalar())
    throw DimensionMismatch("cannot kron a column carrier with a square matrix");
  const long side = a.side() * b.side();
  if (side > kMaxSide)
    throw DimensionTooLarge("kron result side " + std::to_string(side) +
                            " exceeds the dense-storage cap");
  std::vector<Wire> wires = a.wires();
  wires.insert(wires.end(), b.wires().begin(), b.wires().end());
  Mat out(side, a.data().cols() * b.data().cols());
  kron_kernel(a.data(), b.data(), out, use_parallel(side * side));
  const bool hint = a.hermitian_hint() && b.hermitian_hint();
  return LabeledMatrix(std::move(wires), std::move(out), hint);
}

LabeledMatrix partial_trace(const LabeledMatrix& x,
                            const std::vector<std::string>& labels) {
  if (x.is_vector()) throw BadStructure("partial trace of a column carrier");
  const std::vector<int> tpos = positions_of(x, labels);
  std::set<int> tset(tpos.begin(), tpos.end());
  std::vector<int> kpos;
  std::vector<Wire> kept_wires;
  for (int k = 0; k < static_cast<int>(x.wires().size()); ++k)
    if (!tset.count(k)) {
      kpos.push_back(k);
      kept_wires.push_back(x.wires()[k]);
    }
  const WireIndexer ix = x.indexer();
  const std::vector<long> kept = sub_offsets(ix, kpos);
  const std::vector<long> traced = sub_offsets(ix, tpos);
  Mat out(static_cast<long>(kept.size()), static_cast<long>(kept.size()));
  partial_trace_kernel(x.data(), kept, traced, out,
                       use_parallel(static_cast<long>(kept.size()) *
                                    static_cast<long>(kept.size()) *
                                    static_cast<long>(traced.size())));
  return LabeledMatrix(std::move(kept_wires), std::move(out),
                       x.hermitian_hint());
}

LabeledMatrix partial_transpose(const LabeledMatrix& x,
                                const std::vector<std::string>& labels) {
  if (x.is_vector())
    throw BadStructure("partial transpose of a column carrier");
  const std::vector<int> fpos = positions_of(x, labels);
  std::set<int> fset(fpos.begin(), fpos.end());
  const WireIndexer ix = x.indexer();
  // Split every composite index into flipped-part and kept-part offsets.
  std::vector<long> flip(ix.total, 0);
  for (long i = 0; i < ix.total; ++i) {
    long off = 0;
    for (std::size_t k = 0; k < ix.dims.size(); ++k) {
      const long digit = (i / ix.strides[k]) % ix.dims[k];
      if (fset.count(static_cast<int>(k))) off += digit * ix.strides[k];
    }
    flip[i] = off;
  }
  Mat out(ix.total, ix.total);
  const bool par = use_parallel(ix.total * ix.total);
  const Mat& in = x.data();
#pragma omp parallel for if (par) schedule(static)
  for (long r = 0; r < ix.total; ++r) {
    const long keep_r = r - flip[r];
    for (long c = 0; c < ix.total; ++c)
      out(r, c) = in(keep_r + flip[c], (c - flip[c]) + flip[r]);
  }
  return LabeledMatrix(x.wires(), std::move(out), x.hermitian_hint());
}

LabeledMatrix max_entangled(const std::string& label_a,
                            const std::string& label_b, int d) {
  if (d < 1) throw BadDimension("max_entangled requires d >= 1");
  const LabeledMatrix v = max_entangled_vec(label_a, label_b, d);
  return outer(v);
}

LabeledMatrix max_entangled_vec(const std::string& label_a,
                                const std::string& label_b, int d) {
  if (d < 1) throw BadDimension("max_entangled requires d >= 1");
  Mat v = Mat::Zero(static_cast<long>(d) * d, 1);
  for (int i = 0; i < d; ++i) v(static_cast<long>(i) * d + i, 0) = 1.0;
  std::vector<Wire> wires{out_wire(label_a, d), in_wire(label_b, d)};
  return LabeledMatrix(std::move(wires), std::move(v));
}

LabeledMatrix vectorize(const Mat& k, const std::string& in_label,
                        const std::string& out_label) {
  const long dout = k.rows(), din = k.cols();
  // (K x 1)|phi+> = sum_i K|i> x |i>: component (a, i) = K(a, i), which is
  // exactly the row-major flattening under the first-wire-most-significant
  // convention.
  Mat v(dout * din, 1);
  for (long a = 0; a < dout; ++a)
    for (long i = 0; i < din; ++i) v(a * din + i, 0) = k(a, i);
  std::vector<Wire> wires{out_wire(out_label, static_cast<int>(dout)),
                          in_wire(in_label, static_cast<int>(din))};
  return LabeledMatrix(std::move(wires), std::move(v));
}

Mat unvectorize(const LabeledMatrix& v, const std::string& in_label,
                const std::string& out_label) {
  if (!v.is_vector() && v.side() != 1)
    throw BadStructure("unvectorize expects a column carrier");
  const LabeledMatrix p = permute_wires(v, {out_label, in_label});
  const long dout = p.wires()[0].dim, din = p.wires()[1].dim;
  Mat k(dout, din);
  for (long a = 0; a < dout; ++a)
    for (long i = 0; i < din; ++i) k(a, i) = p.data()(a * din + i, 0);
  return k;
}

Cplx vec_inner(const LabeledMatrix& a, const LabeledMatrix& b) {
  const LabeledMatrix bp = permute_wires(b, a.labels());
  if (a.side() != bp.side())
    throw DimensionMismatch("inner product of carriers of unequal side");
  return (a.data().col(0).adjoint() * bp.data().col(0))(0, 0);
}

LabeledMatrix outer(const LabeledMatrix& v) {
  if (!v.is_vector() && v.side() != 1)
    throw BadStructure("outer expects a column carrier");
  Mat m = v.data().col(0) * v.data().col(0).adjoint();
  return LabeledMatrix(v.wires(), std::move(m), true);
}

PsdReport check_psd(const LabeledMatrix& x, double tol) {
  if (x.is_vector()) throw BadStructure("check_psd of a column carrier");
  PsdReport rep;
  rep.hermitian_deviation = x.hermitian_deviation();
  Eigen::SelfAdjointEigenSolver<Mat> es((x.data() + x.data().adjoint()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.ok = rep.hermitian_deviation <= tol && rep.min_eigenvalue >= -tol;
  return rep;
}

LabeledMatrix permute_wires(const LabeledMatrix& x,
                            const std::vector<std::string>& order) {
  if (order.size() != x.wires().size())
    throw LabelMismatch("permutation must list every wire exactly once");
  const std::vector<int> pos = positions_of(x, order);
  std::vector<Wire> wires;
  for (int p : pos) wires.push_back(x.wires()[p]);
  bool already = true;
  for (std::size_t k = 0; k < pos.size(); ++k)
    if (pos[k] != static_cast<int>(k)) already = false;
  if (already) return x;
  const WireIndexer ix = x.indexer();
  // map[new index] = old index
  const std::vector<long> map = sub_offsets(ix, pos);
  Mat out(x.side(), x.data().cols());
  if (x.data().cols() == 1) {
    for (long r = 0; r < x.side(); ++r) out(r, 0) = x.data()(map[r], 0);
  } else {
    gather_kernel(x.data(), map, map, out, use_parallel(x.side() * x.side()));
  }
  return LabeledMatrix(std::move(wires), std::move(out), x.hermitian_hint());
}

LabeledMatrix canonical_sort(const LabeledMatrix& x) {
  std::vector<std::string> order = x.labels();
  std::sort(order.begin(), order.end());
  return permute_wires(x, order);
}

LabeledMatrix relabel(const LabeledMatrix& x,
                      const std::map<std::string, std::string>& renames) {
  for (const auto& [from, to] : renames)
    if (!x.has_wire(from))
      throw UnknownLabel("relabel source '" + from + "' not carried");
  std::vector<Wire> wires = x.wires();
  std::set<std::string> seen;
  for (Wire& w : wires) {
    auto it = renames.find(w.label);
    if (it != renames.end()) w.label = it->second;
    if (!seen.insert(w.label).second)
      throw DuplicateLabel("relabel collides on '" + w.label + "'");
  }
  return LabeledMatrix(std::move(wires), x.data(), x.hermitian_hint());
}

LabeledMatrix identity_on(const std::vector<Wire>& wires) {
  return LabeledMatrix::identity(wires);
}

double max_abs_diff(const LabeledMatrix& a, const LabeledMatrix& b) {
  std::vector<std::string> la = a.labels(), lb = b.labels();
  std::vector<std::string> sa = la, sb = lb;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) throw LabelMismatch("operands carry different wire sets");
  const LabeledMatrix bp = permute_wires(b, la);
  return (a.data() - bp.data()).cwiseAbs().maxCoeff();
}

LabeledMatrix trace_rescale(const LabeledMatrix& x,
                            const std::vector<std::string>& labels) {
  if (labels.empty()) return x;
  const std::vector<int> pos = positions_of(x, labels);
  std::vector<Wire> rescaled;
  long dx = 1;
  for (int p : pos) {
    rescaled.push_back(x.wires()[p]);
    dx *= x.wires()[p].dim;
  }
  LabeledMatrix traced = partial_trace(x, labels);
  traced.mutable_data() /= static_cast<double>(dx);
  LabeledMatrix grown = kron(traced, identity_on(rescaled));
  return permute_wires(grown, x.labels());
}

}  // namespace hoqo
