#include "qit/smooth.hpp"

#include <cmath>

#include "qit/metrics.hpp"
#include "qit/probit.hpp"

namespace qit {

namespace {

double lb_of(double base) { return base == 2.0 ? M_LN2 : std::log(base); }

struct Purified {
  cvec psi;   // purifying vector on system ⊗ ancilla
  int rank = 0;
};

Purified purified(const cmat& rho) {
  Purified p;
  p.psi = purification_vector(rho);
  p.rank = static_cast<int>(p.psi.size() / rho.rows());
  return p;
}

}  // namespace

double smoothing_g(double eps, double base, bool loose) {
  if (!(eps > 0.0) || eps >= 1.0) throw RangeError("smoothing_g: eps must lie in (0,1)");
  const double lb = lb_of(base);
  if (loose) return std::log(2.0 / (eps * eps)) / lb;
  return -std::log1p(-std::sqrt(1.0 - eps * eps)) / lb;
}

SmoothEntropyResult smooth_min_entropy(const cmat& rho_ab, int dim_a, int dim_b, double eps,
                                       double base, const SdpOptions& opts) {
  require_hermitian(rho_ab, "smooth_min_entropy");
  const int n = dim_a * dim_b;
  if (rho_ab.rows() != n) throw DimensionMismatch("smooth_min_entropy: dims mismatch");
  const double tr = rho_ab.trace().real();
  if (!(tr > 0)) throw RangeError("smooth_min_entropy: zero state");
  if (!(eps >= 0.0) || eps * eps >= tr - Tol::ttol)
    throw EpsTooLarge("smooth_min_entropy: need eps < sqrt(tr rho)");
  const double lb = lb_of(base);
  // Sub-normalized inputs are rescaled to a normalized state first.
  const double shift = -std::log(tr) / lb;  // H(rho) = H(rho/tr) - log tr
  const cmat rho = rho_ab / tr;

  SmoothEntropyResult out;
  out.eps = eps;
  out.base = base;
  if (eps <= 1e-9) {
    EntropyResult h = min_entropy(rho, dim_a, dim_b, base, opts);
    out.value = h.value + shift;
    out.bracket_lo = h.sdp_primal + shift;
    out.bracket_hi = h.sdp_dual + shift;
    out.sdp_gap = h.sdp_gap;
    out.witness.rho_smoothed = rho;
    out.witness.achieved_distance = 0.0;
    return out;
  }

  Purified pur = purified(rho);
  const int r = pur.rank;
  const long long big = static_cast<long long>(n) * r;
  const cmat psi_proj = pur.psi * pur.psi.adjoint();

  SdpProblem p;
  const int tilde = p.add_block("rho_tilde", static_cast<int>(big));
  const int sig = p.add_block("sigma_B", dim_b);
  const int slack = p.add_block("slack_AB", n);
  const int s1 = p.add_block("slack_tr", 1);
  const int s2 = p.add_block("slack_fid", 1);
  p.set_objective(sig, cmat::Identity(dim_b, dim_b));
  p.add_matrix_equality(
      {{sig, [dim_a, dim_b](const cmat& e) { return partial_trace(e, {dim_a, dim_b}, {1}); }},
       {tilde, [r](const cmat& e) { return cmat(-tensor(e, cmat::Identity(r, r))); }},
       {slack, [](const cmat& e) { return cmat(-e); }}},
      cmat::Zero(n, n));
  p.add_scalar_equality(
      {{tilde, cmat::Identity(static_cast<int>(big), static_cast<int>(big))},
       {s1, cmat::Identity(1, 1)}},
      1.0);
  p.add_scalar_equality({{tilde, psi_proj}, {s2, cmat(-cmat::Identity(1, 1))}},
                        1.0 - eps * eps);
  auto sol = p.solve(opts);
  if (sol.status != SdpStatus::optimal)
    throw NonConvergence("smooth_min_entropy: SDP did not converge");

  out.sdp_gap = sol.duality_gap;
  out.bracket_lo = -std::log(std::max(sol.primal_value, 1e-300)) / lb + shift;
  out.bracket_hi = -std::log(std::max(sol.dual_value, 1e-300)) / lb + shift;
  out.value = -std::log(std::max(0.5 * (sol.primal_value + sol.dual_value), 1e-300)) / lb + shift;

  // Witness: marginal of the smoothed extension, projected onto the support
  // of rho_A ⊗ rho_B (the projection keeps sigma_B feasible).
  cmat rho_tilde = partial_trace(sol.x[tilde], {dim_a, dim_b, r}, {0, 1});
  const cmat pi =
      tensor(support_projector(partial_trace(rho, {dim_a, dim_b}, {0})),
             support_projector(partial_trace(rho, {dim_a, dim_b}, {1})));
  const cmat projected = pi * rho_tilde * pi;
  const double d_raw = purified_distance(rho_tilde, rho);
  const double d_proj = purified_distance(projected, rho);
  out.witness.construction = SmoothConstruction::sdp;
  if (d_proj <= eps + 1e-6) {
    out.witness.rho_smoothed = projected;
    out.witness.achieved_distance = d_proj;
    out.witness.support_ok = true;
  } else {
    out.witness.rho_smoothed = rho_tilde;
    out.witness.achieved_distance = d_raw;
    out.witness.support_ok = false;
  }
  return out;
}

SmoothEntropyResult smooth_max_entropy(const cmat& rho_ab, int dim_a, int dim_b, double eps,
                                       double base, const SdpOptions& opts) {
  require_hermitian(rho_ab, "smooth_max_entropy");
  const int n = dim_a * dim_b;
  if (rho_ab.rows() != n) throw DimensionMismatch("smooth_max_entropy: dims mismatch");
  const double tr = rho_ab.trace().real();
  const double lb = lb_of(base);
  const double shift = std::log(tr) / lb;  // H_max(rho) = H_max(rho/tr) + log tr
  const cmat rho = rho_ab / tr;

  SmoothEntropyResult out;
  out.eps = eps;
  out.base = base;
  if (eps <= 1e-9) {
    EntropyResult h = max_entropy(rho, dim_a, dim_b, base, opts);
    out.value = h.value + shift;
    out.bracket_lo = h.sdp_primal + shift;
    out.bracket_hi = h.sdp_dual + shift;
    out.sdp_gap = h.sdp_gap;
    out.witness.rho_smoothed = rho;
    return out;
  }

  // Duality through a purification: H_max^eps(A|B) = -H_min^eps(A|C).
  Purified pur = purified(rho);
  const int r = pur.rank;
  const cmat full = pur.psi * pur.psi.adjoint();  // on (A B) ⊗ C with C = rank
  const cmat rho_ac = partial_trace(full, {dim_a, dim_b, r}, {0, 2});
  SmoothEntropyResult hmin = smooth_min_entropy(rho_ac, dim_a, r, eps, base, opts);
  out.value = -hmin.value;
  out.bracket_lo = -hmin.bracket_hi;
  out.bracket_hi = -hmin.bracket_lo;
  out.sdp_gap = hmin.sdp_gap;

  // Map the witness back through the purification: align a purification of
  // the smoothed rho~_AC with the reference one and trace out C.
  const cmat rho_tilde_ac = hmin.witness.rho_smoothed;
  const cvec ref = purification_vector(rho_ac);  // on (A C) ⊗ D
  const int dd = static_cast<int>(ref.size()) / (dim_a * r);
  // Uhlmann partner: (sqrt(rho~) U sqrt(rho_ac)^+ ⊗ id_D) |ref>, with U from
  // the polar decomposition of sqrt(rho_ac) sqrt(rho~).
  const cmat s_ref = sqrt_psd(rho_ac);
  const cmat s_til = sqrt_psd(rho_tilde_ac);
  Eigen::JacobiSVD<cmat> svd(cmat(s_ref * s_til), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const cmat u = svd.matrixV() * svd.matrixU().adjoint();
  const cmat mover = s_til * u * generalized_inverse(s_ref);
  const cvec theta = tensor(mover, cmat::Identity(dd, dd)) * ref;
  const cmat theta_m = theta * theta.adjoint();
  out.witness.rho_smoothed = partial_trace(theta_m, {dim_a, r, dd}, {0, 2});
  out.witness.achieved_distance = purified_distance(theta_m, cmat(ref * ref.adjoint()));
  out.witness.construction = SmoothConstruction::sdp;
  out.witness.support_ok = hmin.witness.support_ok;
  return out;
}

SmoothDivergenceResult smooth_max_divergence(const cmat& rho, const cmat& sigma, double eps,
                                             double base, const SdpOptions& opts) {
  require_hermitian(rho, "smooth_max_divergence");
  require_hermitian(sigma, "smooth_max_divergence");
  if (rho.rows() != sigma.rows()) throw DimensionMismatch("smooth_max_divergence: size mismatch");
  const int d = static_cast<int>(rho.rows());
  const double lb = lb_of(base);
  if (std::abs(rho.trace().real() - 1.0) > Tol::ttol)
    throw RangeError("smooth_max_divergence: rho must be normalized");

  SmoothDivergenceResult out;
  const double dmax = max_divergence(rho, sigma, base);
  if (eps <= 1e-9) {
    out.value = dmax;
    out.lemma_g_value = dmax;
    out.witness.rho_smoothed = rho;
    return out;
  }
  if (!(eps < 1.0)) throw EpsTooLarge("smooth_max_divergence: eps must lie in [0,1)");

  Purified pur = purified(rho);
  const int r = pur.rank;
  const cmat psi_proj = pur.psi * pur.psi.adjoint();
  SdpProblem p;
  const int omega = p.add_block("omega", d * r);
  const int mu = p.add_block("mu", 1);
  const int slack = p.add_block("slack_A", d);
  const int s1 = p.add_block("slack_tr", 1);
  const int s2 = p.add_block("slack_fid", 1);
  p.set_objective(mu, cmat::Identity(1, 1));
  // mu sigma - tr_C omega - Z = 0.
  p.add_matrix_equality(
      {{mu,
        [&sigma](const cmat& e) {
          cmat c(1, 1);
          c(0, 0) = (e * sigma).trace().real();
          return c;
        }},
       {omega, [r](const cmat& e) { return cmat(-tensor(e, cmat::Identity(r, r))); }},
       {slack, [](const cmat& e) { return cmat(-e); }}},
      cmat::Zero(d, d));
  p.add_scalar_equality(
      {{omega, cmat::Identity(d * r, d * r)}, {s1, cmat::Identity(1, 1)}}, 1.0);
  p.add_scalar_equality({{omega, psi_proj}, {s2, cmat(-cmat::Identity(1, 1))}}, 1.0 - eps * eps);
  auto sol = p.solve(opts);
  if (sol.status != SdpStatus::optimal)
    throw NonConvergence("smooth_max_divergence: SDP did not converge");
  out.sdp_gap = sol.duality_gap;
  out.value = std::log(std::max(0.5 * (sol.primal_value + sol.dual_value), 1e-300)) / lb;
  out.witness.rho_smoothed = partial_trace(sol.x[omega], {d, r}, {0});
  out.witness.achieved_distance = purified_distance(out.witness.rho_smoothed, rho);
  out.witness.construction = SmoothConstruction::sdp;

  // Lemma-G feasible value for the same eps: smallest lambda whose removal
  // construction stays within the ball.
  auto eps_of = [&](double lambda) {
    const cmat gap = rho - std::pow(base, lambda) * sigma;
    const cmat pos = apply_matrix_function_hermitian(gap, [](double t) { return std::max(t, 0.0); });
    const double ts = std::min(1.0, pos.trace().real());
    return std::sqrt(std::max(0.0, 2.0 * ts - ts * ts));
  };
  double hi = std::isfinite(dmax) ? dmax : 60.0;
  double lo = hi - 1.0;
  while (eps_of(lo) < eps && hi - lo < 200.0) lo -= 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eps_of(mid) <= eps ? hi : lo) = mid;
  }
  out.lemma_g_value = hi;
  return out;
}

SmoothingOperatorResult smoothing_operator(const cmat& rho, const cmat& sigma, double lambda,
                                           double base) {
  require_hermitian(rho, "smoothing_operator");
  require_hermitian(sigma, "smoothing_operator");
  const double dmax = max_divergence(rho, sigma, base);
  if (std::isfinite(dmax) && lambda > dmax + 1e-9)
    throw LambdaTooLarge("smoothing_operator: lambda exceeds D_max");
  const cmat lam = std::pow(base, lambda) * sigma;
  const cmat gap = rho - lam;
  const cmat pos = apply_matrix_function_hermitian(gap, [](double t) { return std::max(t, 0.0); });
  const cmat g = sqrt_psd(lam) * invsqrt_psd(cmat(lam + pos));
  SmoothingOperatorResult out;
  out.witness.rho_smoothed = g * rho * g.adjoint();
  out.witness.construction = SmoothConstruction::lemma_g;
  out.witness.achieved_distance = purified_distance(out.witness.rho_smoothed, rho);
  out.trace_sigma_plus = pos.trace().real();
  const double ts = out.trace_sigma_plus;
  out.distance_bound = std::sqrt(std::max(0.0, 2.0 * ts - ts * ts));
  return out;
}

namespace {

double renyi_lower_bound(const std::function<double(double)>& h_alpha, double g_eps, int n,
                         int grid) {
  double best = -kInf;
  for (int k = 0; k < grid; ++k) {
    // alpha - 1 log-spaced in [1e-4, 60].
    const double t = std::pow(10.0, -4.0 + (k + 0.5) * (std::log10(60.0) + 4.0) / grid);
    best = std::max(best, h_alpha(1.0 + t) - g_eps / (n * t));
  }
  return best;
}

double renyi_upper_bound(const std::function<double(double)>& h_beta, double g_eps,
                         double log_pen, int n, int grid) {
  double best = kInf;
  for (int k = 0; k < grid; ++k) {
    const double t = std::pow(10.0, -4.0 + (k + 0.5) * (std::log10(60.0) + 4.0) / grid);
    // beta = alpha/(2 alpha - 1) < 1 pairs with alpha = 1 + t by duality.
    const double beta = (1.0 + t) / (1.0 + 2.0 * t);
    best = std::min(best, h_beta(beta) + g_eps / (n * t) + log_pen / n);
  }
  return best;
}

}  // namespace

std::vector<AepRow> aep_rates_classical(const rvec& pmf, double eps,
                                        const std::vector<int>& n_list, const AepOptions& opts) {
  if (!(eps > 0.0) || eps >= 1.0) throw RangeError("aep_rates_classical: eps range");
  const double base = opts.base;
  const double lb = lb_of(base);
  const double epsp = opts.converse_eps;
  if (eps + epsp >= 1.0) throw RangeError("aep_rates_classical: eps + converse_eps must be < 1");
  TypeClasses single = TypeClasses::from_pmf(pmf);
  const double h = classical_renyi_entropy(single, 1.0, base);
  double v = 0.0;
  for (int i = 0; i < pmf.size(); ++i) {
    if (pmf(i) <= 0) continue;
    const double z = -std::log(pmf(i)) / lb - h;
    v += pmf(i) * z * z;
  }
  const double g_eps = smoothing_g(eps, base);
  const double log_pen = -std::log1p(-(eps + epsp) * (eps + epsp)) / lb;
  auto h_alpha = [&](double a) { return classical_renyi_entropy(single, a, base); };

  std::vector<AepRow> rows;
  for (int n : n_list) {
    AepRow row;
    row.n = n;
    TypeClasses tc = TypeClasses::iid_pmf(pmf, n);
    row.exact = classical_smooth_min_entropy(tc, eps, base) / n;
    row.lower = renyi_lower_bound(h_alpha, g_eps, n, opts.alpha_grid);
    row.upper = (classical_smooth_max_entropy(tc, epsp, base) + log_pen) / n;
    row.second_order = h + std::sqrt(v / n) * normal_quantile(eps * eps);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AepRow> aep_rates_quantum(const cmat& rho_ab, int dim_a, int dim_b, double eps,
                                      const std::vector<int>& n_list, const AepOptions& opts) {
  if (!(eps > 0.0) || eps >= 1.0) throw RangeError("aep_rates_quantum: eps range");
  const double base = opts.base;
  const double lb = lb_of(base);
  const double epsp = opts.converse_eps;
  if (eps + epsp >= 1.0) throw RangeError("aep_rates_quantum: eps + converse_eps must be < 1");
  const double h = von_neumann_conditional(rho_ab, dim_a, dim_b, base);
  const double v =
      divergence_variance(rho_ab, tensor(cmat::Identity(dim_a, dim_a),
                                         partial_trace(rho_ab, {dim_a, dim_b}, {1})),
                          base);
  const double g_eps = smoothing_g(eps, base);
  const double g_epsp = smoothing_g(epsp, base);
  const double log_pen = -std::log1p(-(eps + epsp) * (eps + epsp)) / lb;
  auto h_alpha = [&](double a) {
    return conditional_renyi(rho_ab, dim_a, dim_b, EntropyFamily::sandwiched, Arrow::up, a, base)
        .value;
  };

  const int rank = eig_hermitian(rho_ab).rank();
  std::vector<AepRow> rows;
  for (int n : n_list) {
    AepRow row;
    row.n = n;
    row.lower = renyi_lower_bound(h_alpha, g_eps, n, opts.alpha_grid);
    row.upper = renyi_upper_bound(h_alpha, g_epsp, log_pen, n, opts.alpha_grid);
    row.second_order = h + std::sqrt(std::max(v, 0.0) / n) * normal_quantile(eps * eps);
    // Exact smoothing SDP when the n-fold problem fits the cap.
    double total_params = 1.0;
    for (int t = 0; t < n; ++t) total_params *= dim_a * dim_b * rank;
    if (total_params * total_params <= 4096.0) {
      // Regroup (A B)^n into A^n ⊗ B^n.
      std::vector<int> dims(2 * n);
      std::vector<int> perm(2 * n);
      cmat big = cmat::Identity(1, 1);
      for (int t = 0; t < n; ++t) big = tensor(big, rho_ab);
      for (int t = 0; t < n; ++t) {
        dims[2 * t] = dim_a;
        dims[2 * t + 1] = dim_b;
        perm[t] = 2 * t;
        perm[n + t] = 2 * t + 1;
      }
      const cmat grouped = permute_subsystems(big, dims, perm);
      int da_n = 1, db_n = 1;
      for (int t = 0; t < n; ++t) {
        da_n *= dim_a;
        db_n *= dim_b;
      }
      row.exact = smooth_min_entropy(grouped, da_n, db_n, eps, base).value / n;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qit
