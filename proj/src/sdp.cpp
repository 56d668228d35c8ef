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

#include "hoqo/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace hoqo {
namespace {

// Constraint data regrouped per PSD block for cache-friendly sweeps.
struct BlockRow {
  std::vector<int> r, c;
  std::vector<double> v;
  std::vector<int> ucols;  // sorted unique column indices
  double norm2 = 0.0;      // sum of squared entries on this block
};

struct Assembled {
  // rows[i][b] lists constraint i's entries on block b (possibly empty).
  std::vector<std::vector<BlockRow>> rows;
  // touching[b] lists the constraints with entries on block b.
  std::vector<std::vector<int>> touching;
  Eigen::VectorXd b;
  double max_row_norm = 1.0;
};

Assembled regroup(const SdpProblem& p) {
  const int m = static_cast<int>(p.constraints.size());
  const int nb = static_cast<int>(p.block_dims.size());
  Assembled a;
  a.rows.assign(m, std::vector<BlockRow>(nb));
  a.touching.assign(nb, {});
  a.b.resize(m);
  for (int i = 0; i < m; ++i) {
    a.b[i] = p.constraints[i].rhs;
    for (const SdpEntry& e : p.constraints[i].entries) {
      BlockRow& br = a.rows[i][e.block];
      br.r.push_back(e.row);
      br.c.push_back(e.col);
      br.v.push_back(e.value);
      br.norm2 += e.value * e.value;
    }
    double n2 = 0.0;
    for (int b = 0; b < nb; ++b) {
      BlockRow& br = a.rows[i][b];
      if (br.v.empty()) continue;
      br.ucols = br.c;
      std::sort(br.ucols.begin(), br.ucols.end());
      br.ucols.erase(std::unique(br.ucols.begin(), br.ucols.end()),
                     br.ucols.end());
      a.touching[b].push_back(i);
      n2 += br.norm2;
    }
    a.max_row_norm = std::max(a.max_row_norm, std::sqrt(n2));
  }
  return a;
}

// tr(A_i Z) summed over blocks, for one dense symmetric Z per block.
double pair_row(const std::vector<BlockRow>& row,
                const std::vector<Eigen::MatrixXd>& z) {
  double acc = 0.0;
  for (std::size_t b = 0; b < row.size(); ++b) {
    const BlockRow& br = row[b];
    const Eigen::MatrixXd& zb = z[b];
    for (std::size_t t = 0; t < br.v.size(); ++t)
      acc += br.v[t] * zb(br.c[t], br.r[t]);
  }
  return acc;
}

Eigen::VectorXd apply_A(const Assembled& a,
                        const std::vector<Eigen::MatrixXd>& z) {
  Eigen::VectorXd out(a.b.size());
  for (int i = 0; i < a.b.size(); ++i) out[i] = pair_row(a.rows[i], z);
  return out;
}

// z_b -= sum_i y_i A_i^b, scattered over sparse entries.
void subtract_At(const Assembled& a, const Eigen::VectorXd& y,
                 std::vector<Eigen::MatrixXd>* z) {
  for (int i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    for (std::size_t b = 0; b < a.rows[i].size(); ++b) {
      const BlockRow& br = a.rows[i][b];
      Eigen::MatrixXd& zb = (*z)[b];
      for (std::size_t t = 0; t < br.v.size(); ++t)
        zb(br.r[t], br.c[t]) -= y[i] * br.v[t];
    }
  }
}

// Schur complement M_ij = sum_b tr(A_i X_b A_j Sinv_b). Symmetric positive
// definite for independent rows and X, Sinv > 0. Per outer row the cheaper
// of two routes is taken: a dense rank-k panel product U = X A_j Sinv, or
// direct pairwise contraction over both sparsity patterns.
void build_schur(const Assembled& a, const std::vector<Eigen::MatrixXd>& x,
                 const std::vector<Eigen::MatrixXd>& sinv,
                 Eigen::MatrixXd* m_out) {
  Eigen::MatrixXd& m = *m_out;
  m.setZero();
  const int nb = static_cast<int>(a.touching.size());
  for (int b = 0; b < nb; ++b) {
    const std::vector<int>& tb = a.touching[b];
    if (tb.empty()) continue;
    const Eigen::MatrixXd& xb = x[b];
    const Eigen::MatrixXd& sb = sinv[b];
    const int n = static_cast<int>(xb.rows());
    Eigen::MatrixXd panel, srows, u;
    // Entries of earlier rows on this block, amortised for the inner loop.
    std::size_t prefix_nnz = 0;
    for (std::size_t jj = 0; jj < tb.size(); ++jj) {
      const int j = tb[jj];
      const BlockRow& aj = a.rows[j][b];
      const std::size_t kj = aj.ucols.size();
      const double cost_panel = 2.0 * double(n) * double(n) * double(kj);
      const double cost_pair = double(aj.v.size()) * double(prefix_nnz);
      if (cost_panel <= cost_pair) {
        // U = (X A_j) Sinv through the kj nonzero columns of X A_j.
        panel.setZero(n, kj);
        for (std::size_t t = 0; t < aj.v.size(); ++t) {
          const int idx = static_cast<int>(
              std::lower_bound(aj.ucols.begin(), aj.ucols.end(), aj.c[t]) -
              aj.ucols.begin());
          panel.col(idx) += aj.v[t] * xb.col(aj.r[t]);
        }
        srows.resize(kj, n);
        for (std::size_t t = 0; t < kj; ++t) srows.row(t) = sb.row(aj.ucols[t]);
        u.noalias() = panel * srows;
        for (std::size_t ii = 0; ii <= jj; ++ii) {
          const int i = tb[ii];
          const BlockRow& ai = a.rows[i][b];
          double acc = 0.0;
          for (std::size_t t = 0; t < ai.v.size(); ++t)
            acc += ai.v[t] * u(ai.c[t], ai.r[t]);
          m(i, j) += acc;
        }
      } else {
        for (std::size_t ii = 0; ii <= jj; ++ii) {
          const int i = tb[ii];
          const BlockRow& ai = a.rows[i][b];
          double acc = 0.0;
          for (std::size_t t = 0; t < ai.v.size(); ++t) {
            const double w = ai.v[t];
            const int rt = ai.r[t], ct = ai.c[t];
            double inner = 0.0;
            for (std::size_t u2 = 0; u2 < aj.v.size(); ++u2)
              inner += aj.v[u2] * xb(ct, aj.r[u2]) * sb(aj.c[u2], rt);
            acc += w * inner;
          }
          m(i, j) += acc;
        }
      }
      prefix_nnz += aj.v.size();
    }
  }
  m = m.selfadjointView<Eigen::Upper>();
}

// Largest t with X + t D >= 0, through L^{-1} D L^{-T} of the Cholesky
// factor of X. Returns a large sentinel when D pushes inward everywhere.
double max_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& d) {
  Eigen::LLT<Eigen::MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) {
    Eigen::MatrixXd xr = x;
    xr.diagonal().array() += 1e-14 * (1.0 + x.trace() / x.rows());
    llt.compute(xr);
    if (llt.info() != Eigen::Success) return 0.0;
  }
  Eigen::MatrixXd t = llt.matrixL().solve(d);
  t = llt.matrixL().solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (t + t.transpose()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1e30;
  return -1.0 / lmin;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
  const int nb = static_cast<int>(p.block_dims.size());
  const int m = static_cast<int>(p.constraints.size());
  const Assembled a = regroup(p);

  int ntot = 0;
  for (int d : p.block_dims) ntot += d;
  double norm_c = 0.0;
  for (const auto& cb : p.objective) norm_c = std::max(norm_c, cb.norm());
  const double norm_b = m ? a.b.cwiseAbs().maxCoeff() : 0.0;

  // Infeasible start on the central ray, scaled to the data (SDPT3-style).
  const double xi_p = std::min(
      1e6, std::max({10.0, std::sqrt(double(ntot)),
                     double(ntot) * (1.0 + norm_b) / (1.0 + a.max_row_norm)}));
  const double xi_d =
      std::max({10.0, std::sqrt(double(ntot)), 1.0 + norm_c, a.max_row_norm});

  std::vector<Eigen::MatrixXd> x(nb), s(nb), sinv(nb);
  for (int b = 0; b < nb; ++b) {
    x[b] = xi_p * Eigen::MatrixXd::Identity(p.block_dims[b], p.block_dims[b]);
    s[b] = xi_d * Eigen::MatrixXd::Identity(p.block_dims[b], p.block_dims[b]);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  SdpSolution sol;
  sol.y = y;
  Eigen::MatrixXd schur(m, m);
  std::vector<Eigen::MatrixXd> rd(nb), z1(nb), w2(nb), dxa(nb), dsa(nb),
      dx(nb), ds(nb);
  Eigen::VectorXd rp(m), q(m), dy(m), dya(m), a_sinv(m), a_x(m);

  int small_steps = 0;
  double phi = std::numeric_limits<double>::infinity();
  auto measure = [&](double* pobj, double* dobj) {
    double po = 0.0, mu_sum = 0.0;
    for (int b = 0; b < nb; ++b) {
      po += p.objective[b].cwiseProduct(x[b]).sum();
      mu_sum += x[b].cwiseProduct(s[b]).sum();
    }
    const double dual = m ? a.b.dot(y) : 0.0;
    *pobj = po;
    *dobj = dual;
    const double denom = 1.0 + std::abs(po) + std::abs(dual);
    double rd_norm = 0.0;
    for (int b = 0; b < nb; ++b) rd_norm += rd[b].squaredNorm();
    const double rel_rp = m ? rp.norm() / (1.0 + a.b.norm()) : 0.0;
    const double rel_rd = std::sqrt(rd_norm) / (1.0 + norm_c);
    sol.primal_residual = rel_rp;
    sol.dual_residual = rel_rd;
    sol.gap = std::max(std::abs(po - dual), mu_sum);
    return std::max({mu_sum / denom, std::abs(po - dual) / denom, rel_rp,
                     rel_rd});
  };

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    // Residuals.
    rp = a.b - apply_A(a, x);
    for (int b = 0; b < nb; ++b) rd[b] = p.objective[b] - s[b];
    subtract_At(a, y, &rd);

    double mu = 0.0;
    for (int b = 0; b < nb; ++b) mu += x[b].cwiseProduct(s[b]).sum();
    mu /= std::max(1, ntot);

    double pobj, dobj;
    phi = measure(&pobj, &dobj);
    if (opt.verbose)
      std::fprintf(stderr,
                   "sdp it %2d  mu %9.2e  pobj %+.9e  dobj %+.9e  "
                   "rp %8.1e  rd %8.1e\n",
                   it, mu, pobj, dobj, sol.primal_residual, sol.dual_residual);
    if (phi <= opt.tol_optimal) break;
    if (!std::isfinite(mu) || !std::isfinite(phi) || std::abs(pobj) > 1e13)
      break;

    // Factor the slacks and the Schur complement.
    bool ok = true;
    for (int b = 0; b < nb; ++b) {
      Eigen::LLT<Eigen::MatrixXd> llt(s[b]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      sinv[b] = llt.solve(
          Eigen::MatrixXd::Identity(p.block_dims[b], p.block_dims[b]));
    }
    if (!ok) break;
    build_schur(a, x, sinv, &schur);
    Eigen::LLT<Eigen::MatrixXd> mllt(schur);
    for (double ridge = 1e-13 * (1.0 + schur.trace() / std::max(1, m));
         mllt.info() != Eigen::Success && ridge < 1.0; ridge *= 1e3) {
      Eigen::MatrixXd reg = schur;
      reg.diagonal().array() += ridge;
      mllt.compute(reg);
    }
    if (m > 0 && mllt.info() != Eigen::Success) break;

    // Predictor (affine scaling direction, sigma = 0).
    for (int b = 0; b < nb; ++b)
      z1[b].noalias() = x[b] * rd[b] * sinv[b];
    const Eigen::VectorXd a_z1 = apply_A(a, z1);
    if (m > 0) {
      q = a.b + a_z1;
      dya = mllt.solve(q);
    } else {
      dya.resize(0);
    }
    for (int b = 0; b < nb; ++b) dsa[b] = rd[b];
    subtract_At(a, dya, &dsa);
    for (int b = 0; b < nb; ++b) {
      Eigen::MatrixXd t = x[b] * dsa[b] * sinv[b];
      dxa[b] = -x[b] - 0.5 * (t + t.transpose());
    }

    double ap = 1e30, ad = 1e30;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(x[b], dxa[b]));
      ad = std::min(ad, max_step(s[b], dsa[b]));
    }
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b)
      mu_aff += (x[b] + ap * dxa[b]).cwiseProduct(s[b] + ad * dsa[b]).sum();
    mu_aff /= std::max(1, ntot);
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::min(1.0, std::max(1e-8, sigma));

    // Corrector.
    for (int b = 0; b < nb; ++b) w2[b].noalias() = dxa[b] * (dsa[b] * sinv[b]);
    a_sinv = apply_A(a, sinv);
    if (m > 0) {
      q = a.b + a_z1 + apply_A(a, w2) - sigma * mu * a_sinv;
      dy = mllt.solve(q);
    } else {
      dy.resize(0);
    }
    for (int b = 0; b < nb; ++b) ds[b] = rd[b];
    subtract_At(a, dy, &ds);
    for (int b = 0; b < nb; ++b) {
      Eigen::MatrixXd rc =
          sigma * mu * sinv[b] - x[b] - 0.5 * (w2[b] + w2[b].transpose());
      Eigen::MatrixXd t = x[b] * ds[b] * sinv[b];
      dx[b] = rc - 0.5 * (t + t.transpose());
      dx[b] = 0.5 * (dx[b] + dx[b].transpose()).eval();
    }

    double alpha = 1e30, beta = 1e30;
    for (int b = 0; b < nb; ++b) {
      alpha = std::min(alpha, max_step(x[b], dx[b]));
      beta = std::min(beta, max_step(s[b], ds[b]));
    }
    const double damp = 0.98;
    alpha = std::min(1.0, damp * alpha);
    beta = std::min(1.0, damp * beta);

    for (int b = 0; b < nb; ++b) {
      x[b] += alpha * dx[b];
      s[b] += beta * ds[b];
      x[b] = 0.5 * (x[b] + x[b].transpose()).eval();
      s[b] = 0.5 * (s[b] + s[b].transpose()).eval();
    }
    y += beta * dy;

    small_steps = (std::min(alpha, beta) < 1e-4) ? small_steps + 1 : 0;
    if (small_steps >= 3) {
      ++it;
      break;
    }
  }

  // Final classification.
  rp = a.b - apply_A(a, x);
  for (int b = 0; b < nb; ++b) rd[b] = p.objective[b] - s[b];
  subtract_At(a, y, &rd);
  phi = measure(&sol.primal_objective, &sol.dual_objective);
  sol.iterations = it;
  sol.x = x;
  sol.s = s;
  sol.y = y;
  if (std::isfinite(phi) && phi <= opt.tol_optimal)
    sol.status = SdpStatus::optimal;
  else if (std::isfinite(phi) && phi <= opt.tol_near)
    sol.status = SdpStatus::near_optimal;
  else
    sol.status = SdpStatus::failed;
  return sol;
}

}  // namespace hoqo
