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

#include "hoqo/link.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hoqo/tensor_ops.hpp"

namespace hoqo {

namespace {

constexpr long kMaxSide = 1L << 15;
constexpr long kMaxWorkspace = 1L << 26;  // complex entries per gather buffer

// Offsets of all sub-index combinations of the wires at `positions` within
// the indexer of the owning matrix (first wire most significant).
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

struct LinkPlan {
  std::vector<std::string> shared;        // sorted shared labels
  std::vector<int> a_shared, a_excl;      // wire positions within a
  std::vector<int> b_shared, b_excl;      // wire positions within b
  long ds = 1, da = 1, db = 1;
};

LinkPlan plan_link(const LabeledMatrix& a, const LabeledMatrix& b) {
  LinkPlan plan;
  std::set<std::string> labels_b;
  for (const Wire& w : b.wires()) labels_b.insert(w.label);
  for (const Wire& w : a.wires())
    if (labels_b.count(w.label)) plan.shared.push_back(w.label);
  std::sort(plan.shared.begin(), plan.shared.end());
  std::set<std::string> shared_set(plan.shared.begin(), plan.shared.end());
  for (const std::string& l : plan.shared) {
    const int pa = a.wire_pos(l), pb = b.wire_pos(l);
    if (a.wires()[pa].dim != b.wires()[pb].dim)
      throw DimensionMismatch("shared label '" + l + "' has dims " +
                              std::to_string(a.wires()[pa].dim) + " and " +
                              std::to_string(b.wires()[pb].dim));
    plan.a_shared.push_back(pa);
    plan.b_shared.push_back(pb);
    plan.ds *= a.wires()[pa].dim;
  }
  for (int k = 0; k < static_cast<int>(a.wires().size()); ++k)
    if (!shared_set.count(a.wires()[k].label)) {
      plan.a_excl.push_back(k);
      plan.da *= a.wires()[k].dim;
    }
  for (int k = 0; k < static_cast<int>(b.wires().size()); ++k)
    if (!shared_set.count(b.wires()[k].label)) {
      plan.b_excl.push_back(k);
      plan.db *= b.wires()[k].dim;
    }
  return plan;
}

// Direct evaluation of the defining four-index sum; the serial reference.
Mat link_reference(const LabeledMatrix& a, const LabeledMatrix& b,
                   const LinkPlan& p, const std::vector<long>& a_ex,
                   const std::vector<long>& a_sh, const std::vector<long>& b_ex,
                   const std::vector<long>& b_sh) {
  Mat out = Mat::Zero(p.db * p.da, p.db * p.da);
  for (long ar = 0; ar < p.da; ++ar)
    for (long ac = 0; ac < p.da; ++ac)
      for (long br = 0; br < p.db; ++br)
        for (long bc = 0; bc < p.db; ++bc) {
          Cplx acc = 0.0;
          for (long u = 0; u < p.ds; ++u)
            for (long v = 0; v < p.ds; ++v)
              acc += a.data()(a_ex[ar] + a_sh[u], a_ex[ac] + a_sh[v]) *
                     b.data()(b_sh[u] + b_ex[br], b_sh[v] + b_ex[bc]);
          out(br * p.da + ar, bc * p.da + ac) = acc;
        }
  return out;
}

// Gather -> GEMM -> scatter evaluation of the same sum.
Mat link_gemm(const LabeledMatrix& a, const LabeledMatrix& b,
              const LinkPlan& p, const std::vector<long>& a_ex,
              const std::vector<long>& a_sh, const std::vector<long>& b_ex,
              const std::vector<long>& b_sh) {
  if (p.da * p.da * p.ds * p.ds > kMaxWorkspace ||
      p.db * p.db * p.ds * p.ds > kMaxWorkspace)
    throw DimensionTooLarge("link workspace exceeds the dense-storage cap");
  Mat ap(p.da * p.da, p.ds * p.ds);
  const Mat& adata = a.data();
  const Mat& bdata = b.data();
#pragma omp parallel for schedule(static)
  for (long ar = 0; ar < p.da; ++ar)
    for (long ac = 0; ac < p.da; ++ac)
      for (long u = 0; u < p.ds; ++u)
        for (long v = 0; v < p.ds; ++v)
          ap(ar * p.da + ac, u * p.ds + v) =
              adata(a_ex[ar] + a_sh[u], a_ex[ac] + a_sh[v]);
  Mat bp(p.ds * p.ds, p.db * p.db);
#pragma omp parallel for schedule(static)
  for (long u = 0; u < p.ds; ++u)
    for (long v = 0; v < p.ds; ++v)
      for (long br = 0; br < p.db; ++br)
        for (long bc = 0; bc < p.db; ++bc)
          bp(u * p.ds + v, br * p.db + bc) =
              bdata(b_sh[u] + b_ex[br], b_sh[v] + b_ex[bc]);
  const Mat cp = ap * bp;
  Mat out(p.db * p.da, p.db * p.da);
#pragma omp parallel for schedule(static)
  for (long ar = 0; ar < p.da; ++ar)
    for (long ac = 0; ac < p.da; ++ac)
      for (long br = 0; br < p.db; ++br)
        for (long bc = 0; bc < p.db; ++bc)
          out(br * p.da + ar, bc * p.da + ac) =
              cp(ar * p.da + ac, br * p.db + bc);
  return out;
}

}  // namespace

LabeledMatrix link(const LabeledMatrix& a, const LabeledMatrix& b) {
  if (a.is_vector() || b.is_vector())
    throw BadStructure("link expects square operands; use outer() first");
  const LinkPlan p = plan_link(a, b);
  if (p.db * p.da > kMaxSide)
    throw DimensionTooLarge("link result side " + std::to_string(p.db * p.da) +
                            " exceeds the dense-storage cap");
  const WireIndexer ixa = a.indexer(), ixb = b.indexer();
  const std::vector<long> a_ex = sub_offsets(ixa, p.a_excl);
  const std::vector<long> a_sh = sub_offsets(ixa, p.a_shared);
  const std::vector<long> b_ex = sub_offsets(ixb, p.b_excl);
  const std::vector<long> b_sh = sub_offsets(ixb, p.b_shared);

  const long work = p.da * p.da * p.db * p.db * p.ds * p.ds;
  Mat out;
  if (kernel_mode() == KernelMode::serial ||
      (kernel_mode() == KernelMode::auto_select && work < (1L << 12))) {
    out = link_reference(a, b, p, a_ex, a_sh, b_ex, b_sh);
  } else {
    out = link_gemm(a, b, p, a_ex, a_sh, b_ex, b_sh);
  }

  // Result wires: b-exclusive then a-exclusive, in (b,a) significance order.
  std::vector<Wire> wires;
  for (int k : p.b_excl) wires.push_back(b.wires()[k]);
  for (int k : p.a_excl) wires.push_back(a.wires()[k]);
  const bool hint = a.hermitian_hint() && b.hermitian_hint();
  if (hint) out = (out + out.adjoint().eval()) / 2.0;
  LabeledMatrix res(std::move(wires), std::move(out), hint);
  return canonical_sort(res);
}

LabeledMatrix link_many(const std::vector<LabeledMatrix>& xs) {
  if (xs.empty()) return LabeledMatrix::scalar(1.0);
  std::map<std::string, int> counts;
  for (const LabeledMatrix& x : xs)
    for (const Wire& w : x.wires()) ++counts[w.label];
  for (const auto& [label, n] : counts)
    if (n >= 3)
      throw TripleLabel("label '" + label + "' appears in " +
                        std::to_string(n) + " operands");
  LabeledMatrix acc = xs.front();
  for (std::size_t k = 1; k < xs.size(); ++k) acc = link(acc, xs[k]);
  return acc;
}

}  // namespace hoqo
