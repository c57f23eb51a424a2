#include <cmath>
#include <cstdio>

#include "qit/sdp.hpp"

namespace qit {

namespace {

using esolver = Eigen::SelfAdjointEigenSolver<rmat>;

rmat sym(const rmat& m) { return 0.5 * (m + m.transpose()); }

rmat spectral_power(const rmat& m, double p, double floor_eig = 0.0) {
  esolver es(sym(m));
  rvec d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) d(i) = std::pow(std::max(d(i), floor_eig), p);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Largest t <= 1 such that M + t dM stays psd.
double max_step(const rmat& m, const rmat& dm) {
  Eigen::LLT<rmat> llt(sym(m));
  if (llt.info() != Eigen::Success) return 0.0;
  const rmat l = llt.matrixL();
  rmat inner = l.triangularView<Eigen::Lower>().solve(sym(dm));
  inner = l.triangularView<Eigen::Lower>().solve(inner.transpose()).transpose();
  esolver es(sym(inner));
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1.0;
  return std::min(1.0, -1.0 / lmin);
}

}  // namespace

long long RealSdp::total_params() const {
  long long n = 0;
  for (int d : block_dims) n += static_cast<long long>(d) * (d + 1) / 2;
  return n;
}

RealSdpSolution solve_real_sdp(const RealSdp& prob, const SdpOptions& opts) {
  const int nb = static_cast<int>(prob.block_dims.size());
  const int m = static_cast<int>(prob.rows.size());
  RealSdpSolution sol;
  sol.y = rvec::Zero(m);

  double n_total = 0.0;
  for (int d : prob.block_dims) n_total += d;

  // Data norms for scaling and the starting point.
  double norm_b = 0.0, norm_c = 0.0;
  for (const auto& row : prob.rows) norm_b = std::max(norm_b, std::abs(row.rhs));
  std::vector<double> a_norm_max(nb, 0.0);
  std::vector<double> init_x(nb, 10.0), init_s(nb, 10.0);
  for (int b = 0; b < nb; ++b) {
    norm_c = std::max(norm_c, prob.objective[b].norm());
    init_x[b] = std::max(init_x[b], std::sqrt(static_cast<double>(prob.block_dims[b])));
  }
  for (const auto& row : prob.rows)
    for (const auto& [b, a] : row.terms) {
      a_norm_max[b] = std::max(a_norm_max[b], a.norm());
      init_x[b] = std::max(init_x[b], static_cast<double>(prob.block_dims[b]) *
                                          (1.0 + std::abs(row.rhs)) / (1.0 + a.norm()));
    }
  for (int b = 0; b < nb; ++b)
    init_s[b] = std::max({10.0, std::sqrt(static_cast<double>(prob.block_dims[b])),
                          prob.objective[b].norm(), a_norm_max[b]});

  std::vector<rmat> x(nb), s(nb);
  for (int b = 0; b < nb; ++b) {
    x[b] = init_x[b] * rmat::Identity(prob.block_dims[b], prob.block_dims[b]);
    s[b] = init_s[b] * rmat::Identity(prob.block_dims[b], prob.block_dims[b]);
  }

  auto inner = [](const rmat& a, const rmat& b) { return (a.array() * b.array()).sum(); };

  auto apply_a = [&](const std::vector<rmat>& xs) {
    rvec out(m);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (const auto& [b, a] : prob.rows[i].terms) acc += inner(a, xs[b]);
      out(i) = acc;
    }
    return out;
  };

  auto apply_at = [&](const rvec& y) {
    std::vector<rmat> out(nb);
    for (int b = 0; b < nb; ++b) out[b] = rmat::Zero(prob.block_dims[b], prob.block_dims[b]);
    for (int i = 0; i < m; ++i)
      for (const auto& [b, a] : prob.rows[i].terms) out[b] += y(i) * a;
    return out;
  };

  rvec b_vec(m);
  for (int i = 0; i < m; ++i) b_vec(i) = prob.rows[i].rhs;

  const double tau = 0.98;
  Eigen::LDLT<rmat> schur_factor;

  // Best-so-far snapshot scored by the worst of the three exit measures.
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<rmat> best_x = x, best_s = s;
  rvec best_y = sol.y;
  double best_p = 0, best_d = 0, best_gap = 0, best_rp = 0, best_rd = 0;

  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    sol.iterations = iter;
    rvec rp = b_vec - apply_a(x);
    std::vector<rmat> aty = apply_at(sol.y);
    std::vector<rmat> rd(nb);
    double gap = 0.0, pobj = 0.0;
    for (int b = 0; b < nb; ++b) {
      rd[b] = prob.objective[b] - s[b] - aty[b];
      gap += inner(x[b], s[b]);
      pobj += inner(prob.objective[b], x[b]);
    }
    const double dobj = b_vec.dot(sol.y);
    const double mu = gap / n_total;
    double rd_norm = 0.0;
    for (int b = 0; b < nb; ++b) rd_norm = std::max(rd_norm, rd[b].cwiseAbs().maxCoeff());
    const double rp_norm = m ? rp.cwiseAbs().maxCoeff() : 0.0;

    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.duality_gap = gap;
    sol.primal_residual = rp_norm / (1.0 + norm_b);
    sol.dual_residual = rd_norm / (1.0 + norm_c);

    if (opts.verbose) {
      std::printf("it %3d  gap %.3e  rp %.3e  rd %.3e  pobj %.8e  dobj %.8e\n", iter, gap,
                  sol.primal_residual, sol.dual_residual, pobj, dobj);
    }
    const double gap_scale = std::max(1.0, std::abs(pobj) + std::abs(dobj));
    const double score = std::max({gap / (opts.gap_tol * gap_scale),
                                   sol.primal_residual / opts.feas_tol,
                                   sol.dual_residual / opts.feas_tol});
    if (score < best_score) {
      best_score = score;
      best_x = x;
      best_s = s;
      best_y = sol.y;
      best_p = pobj;
      best_d = dobj;
      best_gap = gap;
      best_rp = sol.primal_residual;
      best_rd = sol.dual_residual;
    }
    if (score <= 1.0) {
      sol.status = SdpStatus::optimal;
      break;
    }
    if (iter == opts.max_iter) {
      sol.status = SdpStatus::max_iter;
      break;
    }
    // Divergence heuristic: dual objective runs away while staying feasible,
    // certifying primal infeasibility.
    if (std::abs(dobj) > 1e12 * (1.0 + norm_b + norm_c) && sol.dual_residual < 1e-6) {
      sol.status = SdpStatus::infeasible;
      break;
    }

    // Nesterov-Todd scaling point per block.
    std::vector<rmat> w(nb), g(nb), ginv(nb), v(nb);
    std::vector<esolver> v_eig(nb);
    bool scaling_ok = true;
    for (int b = 0; b < nb; ++b) {
      const rmat s_half = spectral_power(s[b], 0.5, 1e-300);
      const rmat s_half_inv = spectral_power(s[b], -0.5, 1e-300);
      const rmat t = sym(s_half * x[b] * s_half);
      const rmat t_half = spectral_power(t, 0.5, 1e-300);
      w[b] = sym(s_half_inv * t_half * s_half_inv);
      g[b] = spectral_power(w[b], 0.5, 1e-300);
      ginv[b] = spectral_power(w[b], -0.5, 1e-300);
      v[b] = sym(ginv[b] * x[b] * ginv[b]);
      v_eig[b].compute(v[b]);
      if (v_eig[b].eigenvalues().minCoeff() <= 0) scaling_ok = false;
    }
    if (!scaling_ok) {
      sol.status = SdpStatus::max_iter;
      break;
    }

    auto lyapunov_solve = [&](int b, const rmat& rhs) {
      const rmat& q = v_eig[b].eigenvectors();
      const rvec& lam = v_eig[b].eigenvalues();
      rmat t = q.transpose() * rhs * q;
      for (int i = 0; i < lam.size(); ++i)
        for (int j = 0; j < lam.size(); ++j) t(i, j) *= 2.0 / (lam(i) + lam(j));
      return rmat(q * t * q.transpose());
    };

    // Schur complement M_ij = sum_b <A_i, W A_j W>.
    std::vector<std::vector<rmat>> waw(m);
    for (int i = 0; i < m; ++i)
      for (const auto& [b, a] : prob.rows[i].terms) waw[i].push_back(sym(w[b] * a * w[b]));
    rmat schur = rmat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double acc = 0.0;
        size_t ti = 0;
        for (const auto& [bi, ai] : prob.rows[i].terms) {
          (void)ai;
          for (const auto& [bj, aj] : prob.rows[j].terms)
            if (bi == bj) acc += inner(waw[i][ti], aj);
          ++ti;
        }
        schur(i, j) = schur(j, i) = acc;
      }
    }
    if (m > 0)
      schur.diagonal().array() += 1e-13 * (1.0 + schur.diagonal().cwiseAbs().maxCoeff());
    schur_factor.compute(schur);
    if (schur_factor.info() != Eigen::Success) {
      sol.status = SdpStatus::max_iter;
      break;
    }

    auto newton_step = [&](const std::vector<rmat>& rc, rvec& dy, std::vector<rmat>& dx,
                           std::vector<rmat>& ds) {
      rvec rhs = rp;
      for (int i = 0; i < m; ++i)
        for (const auto& [b, a] : prob.rows[i].terms)
          rhs(i) -= inner(a, rmat(rc[b] - sym(w[b] * rd[b] * w[b])));
      dy = schur_factor.solve(rhs);
      dy += schur_factor.solve(rvec(rhs - schur * dy));  // one refinement step
      std::vector<rmat> atdy = apply_at(dy);
      dx.resize(nb);
      ds.resize(nb);
      for (int b = 0; b < nb; ++b) {
        ds[b] = sym(rd[b] - atdy[b]);
        dx[b] = sym(rc[b] - w[b] * ds[b] * w[b]);
      }
    };

    // Predictor: affine scaling direction.
    std::vector<rmat> rc(nb);
    for (int b = 0; b < nb; ++b) rc[b] = -x[b];
    rvec dy_aff;
    std::vector<rmat> dx_aff, ds_aff;
    newton_step(rc, dy_aff, dx_aff, ds_aff);

    double ap_aff = 1.0, ad_aff = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap_aff = std::min(ap_aff, max_step(x[b], dx_aff[b]));
      ad_aff = std::min(ad_aff, max_step(s[b], ds_aff[b]));
    }
    double gap_aff = 0.0;
    for (int b = 0; b < nb; ++b)
      gap_aff +=
          inner(rmat(x[b] + tau * ap_aff * dx_aff[b]), rmat(s[b] + tau * ad_aff * ds_aff[b]));
    double sigma = std::pow(std::max(0.0, gap_aff / gap), 3.0);
    sigma = std::min(1.0 - 1e-8, std::max(1e-8, sigma));
    // Keep mu above a fraction of the target gap: pushing far below the exit
    // tolerance only erodes feasibility through the Schur conditioning.
    const double mu_floor = 0.02 * opts.gap_tol * gap_scale / n_total;
    if (mu > 0) sigma = std::max(sigma, std::min(1.0 - 1e-8, mu_floor / mu));

    // Corrector with Mehrotra's second-order term in the scaled space.
    for (int b = 0; b < nb; ++b) {
      const rmat dxh = sym(ginv[b] * dx_aff[b] * ginv[b]);
      const rmat dsh = sym(g[b] * ds_aff[b] * g[b]);
      const rmat second = 0.5 * (dxh * dsh + dsh * dxh);
      const rmat target = sigma * mu * rmat::Identity(prob.block_dims[b], prob.block_dims[b]) -
                          v[b] * v[b] - second;
      rc[b] = sym(g[b] * lyapunov_solve(b, target) * g[b]);
    }
    rvec dy;
    std::vector<rmat> dx, ds;
    newton_step(rc, dy, dx, ds);

    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(x[b], dx[b]));
      ad = std::min(ad, max_step(s[b], ds[b]));
    }
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);

    for (int b = 0; b < nb; ++b) {
      x[b] = sym(x[b] + ap * dx[b]);
      s[b] = sym(s[b] + ad * ds[b]);
    }
    sol.y += ad * dy;
  }

  if (sol.status != SdpStatus::infeasible && best_score < std::numeric_limits<double>::infinity()) {
    sol.x = std::move(best_x);
    sol.s = std::move(best_s);
    sol.y = best_y;
    sol.primal_value = best_p;
    sol.dual_value = best_d;
    sol.duality_gap = best_gap;
    sol.primal_residual = best_rp;
    sol.dual_residual = best_rd;
    if (best_score <= 1.0) sol.status = SdpStatus::optimal;
  } else {
    sol.x = std::move(x);
    sol.s = std::move(s);
  }
  return sol;
}

}  // namespace qit
