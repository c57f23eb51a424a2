#include "qit/entropies.hpp"

#include <cmath>

#include "qit/metrics.hpp"
#include "qit/rng.hpp"

namespace qit {

namespace {

constexpr double kAlphaGuard = 1e-4;

double lb_of(double base) { return base == 2.0 ? M_LN2 : std::log(base); }

cmat id_tensor(int dim_a, const cmat& sigma_b) {
  return tensor(cmat::Identity(dim_a, dim_a), sigma_b);
}

// Restrict the B factor to the support of rho_B; V maps support coordinates
// back into B so the optimization runs on a full-rank space.
struct SupportFrame {
  cmat v;  // dim_b x rank, orthonormal columns
  int rank = 0;
};

SupportFrame support_frame(const cmat& rho_b) {
  EigenSystem es = eig_hermitian(rho_b);
  SupportFrame fr;
  std::vector<int> kept;
  for (int i = 0; i < es.eigenvalues.size(); ++i)
    if (es.support[i] && es.eigenvalues[i] > 0) kept.push_back(i);
  fr.rank = static_cast<int>(kept.size());
  fr.v = cmat(rho_b.rows(), fr.rank);
  for (size_t k = 0; k < kept.size(); ++k) fr.v.col(k) = es.eigenvectors.col(kept[k]);
  return fr;
}

// ln Q_alpha(rho_AB || id ⊗ sigma) and its gradient in sigma (natural log).
struct QEval {
  double ln_q = 0.0;
  cmat grad;
};

QEval sandwiched_q(const cmat& rho_ab, int dim_a, const cmat& sigma, double alpha,
                   bool with_grad) {
  const double c = (1.0 - alpha) / (2.0 * alpha);
  EigenSystem ss = eig_hermitian(sigma);
  const int db = static_cast<int>(sigma.rows());
  rvec mu = ss.eigenvalues;
  rvec mu_c(db);
  for (int i = 0; i < db; ++i) mu_c(i) = std::pow(std::max(mu(i), 1e-300), c);
  const cmat sigma_c = ss.eigenvectors * mu_c.asDiagonal() * ss.eigenvectors.adjoint();
  const cmat sc_big = id_tensor(dim_a, sigma_c);
  const cmat m = sc_big * rho_ab * sc_big;
  EigenSystem ms = eig_hermitian(0.5 * (m + m.adjoint()));
  double q = 0.0;
  for (int i = 0; i < ms.eigenvalues.size(); ++i)
    if (ms.support[i] && ms.eigenvalues[i] > 0) q += std::pow(ms.eigenvalues[i], alpha);
  QEval out;
  out.ln_q = std::log(std::max(q, 1e-300));
  if (!with_grad) return out;

  const int n = static_cast<int>(ms.eigenvalues.size());
  cmat m_pow = cmat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (!ms.support[i] || ms.eigenvalues[i] <= 0) continue;
    m_pow += std::pow(ms.eigenvalues[i], alpha - 1.0) *
             (ms.eigenvectors.col(i) * ms.eigenvectors.col(i).adjoint());
  }
  // T = tr_A[ rho (id ⊗ sigma^c) M^{alpha-1} ], then the divided-difference
  // lift of t -> t^c applied to T in sigma's eigenbasis.
  const cmat big = rho_ab * sc_big * m_pow;
  const cmat t_b = partial_trace(big, {dim_a, db}, {1});
  const cmat t_eig = ss.eigenvectors.adjoint() * t_b * ss.eigenvectors;
  cmat l(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j) {
      const double a = std::max(mu(i), 1e-300), b = std::max(mu(j), 1e-300);
      double phi;
      if (std::abs(a - b) > 1e-12 * std::max(a, b)) {
        phi = (std::pow(a, c) - std::pow(b, c)) / (a - b);
      } else {
        phi = c * std::pow(0.5 * (a + b), c - 1.0);
      }
      l(i, j) = phi * t_eig(i, j);
    }
  const cmat lifted = ss.eigenvectors * l * ss.eigenvectors.adjoint();
  const cmat grad_q = alpha * (lifted + lifted.adjoint());
  out.grad = grad_q / std::max(q, 1e-300);
  return out;
}

struct MirrorResult {
  double value_nats = 0.0;  // optimal ln Q
  cmat sigma;
  double stationarity = 0.0;
  bool converged = false;
};

// Entropic mirror descent with Armijo backtracking; minimizes ln Q for
// alpha > 1 and maximizes it for alpha < 1 over density matrices.
MirrorResult mirror_descent(const cmat& rho_ab, int dim_a, double alpha, const cmat& sigma0,
                            const IterativeOptions& opts) {
  const double dir = alpha > 1.0 ? 1.0 : -1.0;
  const int db = static_cast<int>(sigma0.rows());
  cmat sigma = 0.5 * (sigma0 + sigma0.adjoint());
  sigma += 1e-12 * cmat::Identity(db, db);
  sigma /= sigma.trace().real();

  QEval cur = sandwiched_q(rho_ab, dim_a, sigma, alpha, true);
  double eta = 1.0;
  MirrorResult res;
  for (int it = 0; it < opts.max_iters; ++it) {
    const cmat grad = dir * cur.grad;
    const double shift = (sigma * grad).trace().real();
    const cmat proj_grad = grad - shift * cmat::Identity(db, db);
    const cmat half = sqrt_psd(sigma);
    const double stat = (half * proj_grad * half).norm();
    res.stationarity = stat;
    if (stat <= opts.stationarity_tol) {
      res.converged = true;
      break;
    }
    const cmat log_sigma = apply_matrix_function(sigma, [](double t) { return std::log(t); });
    bool stepped = false;
    for (int bt = 0; bt < 40 && !stepped; ++bt) {
      const cmat arg = log_sigma - eta * grad;
      EigenSystem es = eig_hermitian(cmat(0.5 * (arg + arg.adjoint())));
      const double top = es.eigenvalues.maxCoeff();
      cmat cand = cmat::Zero(db, db);
      for (int i = 0; i < db; ++i)
        cand += std::exp(es.eigenvalues(i) - top) *
                (es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint());
      cand /= cand.trace().real();
      // Keep the support full so the next mirror step's log stays finite.
      cand += 1e-17 * cmat::Identity(db, db);
      cand /= cand.trace().real();
      QEval trial = sandwiched_q(rho_ab, dim_a, cand, alpha, true);
      const double decrease = dir * cur.ln_q - dir * trial.ln_q;
      const double predicted = eta * (half * proj_grad * half).squaredNorm();
      if (decrease >= 1e-4 * std::min(predicted, 1.0) - 1e-15) {
        sigma = cand;
        cur = trial;
        eta = std::min(eta * 1.3, 1e4);
        stepped = true;
      } else {
        eta *= 0.5;
      }
    }
    if (!stepped) break;
  }
  res.value_nats = cur.ln_q;
  res.sigma = sigma;
  return res;
}

}  // namespace

double von_neumann_entropy(const cmat& rho, double base) {
  EigenSystem es = eig_hermitian(rho);
  double h = 0.0;
  for (int i = 0; i < es.eigenvalues.size(); ++i) {
    const double p = es.eigenvalues(i);
    if (p > 0 && es.support[i]) h -= p * std::log(p);
  }
  return h / lb_of(base);
}

double von_neumann_conditional(const cmat& rho_ab, int dim_a, int dim_b, double base) {
  const cmat rho_b = partial_trace(rho_ab, {dim_a, dim_b}, {1});
  return von_neumann_entropy(rho_ab, base) - von_neumann_entropy(rho_b, base);
}

double von_neumann_conditional(const DensityOperator& rho,
                               const std::vector<std::string>& a_labels, double base) {
  DensityOperator r = rho.reorder_front(a_labels);
  const int da = r.dim_of(a_labels);
  return von_neumann_conditional(r.matrix(), da, r.dim() / da, base);
}

EntropyResult min_entropy(const cmat& rho_ab, int dim_a, int dim_b, double base,
                          const SdpOptions& opts) {
  require_hermitian(rho_ab, "min_entropy");
  const int n = dim_a * dim_b;
  if (rho_ab.rows() != n) throw DimensionMismatch("min_entropy: dims mismatch");
  SdpProblem p;
  const int sig = p.add_block("sigma_B", dim_b);
  const int slack = p.add_block("slack_AB", n);
  p.set_objective(sig, cmat::Identity(dim_b, dim_b));
  p.add_matrix_equality(
      {{sig, [dim_a, dim_b](const cmat& e) { return partial_trace(e, {dim_a, dim_b}, {1}); }},
       {slack, [](const cmat& e) { return cmat(-e); }}},
      rho_ab);
  auto sol = p.solve(opts);
  if (sol.status == SdpStatus::infeasible) throw SolverError("min_entropy: SDP infeasible");
  if (sol.status == SdpStatus::max_iter)
    throw NonConvergence("min_entropy: SDP did not reach the requested tolerance");
  EntropyResult res;
  res.family = EntropyFamily::sandwiched;
  res.arrow = Arrow::up;
  res.alpha = std::numeric_limits<double>::infinity();
  res.base = base;
  res.method = EntropyMethod::sdp;
  res.sigma_witness = sol.x[0];
  res.dual_witness = SdpProblem::assemble_dual_block(sol.y, 0, n);
  res.sdp_gap = sol.duality_gap;
  const double lb = lb_of(base);
  // The optimum lies in [dual, primal]; report the midpoint and the bracket.
  res.sdp_primal = -std::log(std::max(sol.primal_value, 1e-300)) / lb;
  res.sdp_dual = -std::log(std::max(sol.dual_value, 1e-300)) / lb;
  res.value = -std::log(std::max(0.5 * (sol.primal_value + sol.dual_value), 1e-300)) / lb;
  return res;
}

EntropyResult max_entropy(const cmat& rho_ab, int dim_a, int dim_b, double base,
                          const SdpOptions& opts) {
  require_hermitian(rho_ab, "max_entropy");
  const int n = dim_a * dim_b;
  if (rho_ab.rows() != n) throw DimensionMismatch("max_entropy: dims mismatch");
  // Root-fidelity SDP: maximize Re tr X_12 over [[X11, X12],[X21, X22]] >= 0
  // with X11 <= rho_AB, X22 <= id ⊗ sigma_B, tr sigma_B <= 1. The X11 corner
  // is compressed onto supp(rho) so the slack rho - X11 has interior points.
  SupportFrame fr = support_frame(rho_ab);
  const int r = fr.rank;
  const cmat rho_small = fr.v.adjoint() * rho_ab * fr.v;
  SdpProblem p(SdpProblem::Sense::maximize);
  const int big = p.add_block("P", r + n);
  const int sig = p.add_block("sigma_B", dim_b);
  const int z1 = p.add_block("slack1", r);
  const int z2 = p.add_block("slack2", n);
  const int sc = p.add_block("slack_tr", 1);
  cmat obj = cmat::Zero(r + n, r + n);
  obj.topRightCorner(r, n) = 0.5 * fr.v.adjoint();
  obj.bottomLeftCorner(n, r) = 0.5 * fr.v;
  p.set_objective(big, obj);
  p.add_matrix_equality(
      {{big,
        [r, n](const cmat& e) {
          cmat out = cmat::Zero(r + n, r + n);
          out.topLeftCorner(r, r) = e;
          return out;
        }},
       {z1, [](const cmat& e) { return e; }}},
      rho_small);
  p.add_matrix_equality(
      {{big,
        [r, n](const cmat& e) {
          cmat out = cmat::Zero(r + n, r + n);
          out.bottomRightCorner(n, n) = e;
          return out;
        }},
       {sig,
        [dim_a, dim_b](const cmat& e) { return cmat(-partial_trace(e, {dim_a, dim_b}, {1})); }},
       {z2, [](const cmat& e) { return e; }}},
      cmat::Zero(n, n));
  p.add_scalar_equality({{sig, cmat::Identity(dim_b, dim_b)}, {sc, cmat::Identity(1, 1)}}, 1.0);
  auto sol = p.solve(opts);
  if (sol.status == SdpStatus::infeasible) throw SolverError("max_entropy: SDP infeasible");
  if (sol.status == SdpStatus::max_iter)
    throw NonConvergence("max_entropy: SDP did not reach the requested tolerance");
  EntropyResult res;
  res.family = EntropyFamily::sandwiched;
  res.arrow = Arrow::up;
  res.alpha = 0.5;
  res.base = base;
  res.method = EntropyMethod::sdp;
  res.sigma_witness = sol.x[1];
  res.sdp_gap = sol.duality_gap;
  const double lb = lb_of(base);
  // Maximization: the optimum lies in [primal, dual]; report the midpoint.
  res.sdp_primal = 2.0 * std::log(std::max(sol.primal_value, 1e-300)) / lb;
  res.sdp_dual = 2.0 * std::log(std::max(sol.dual_value, 1e-300)) / lb;
  res.value = 2.0 * std::log(std::max(0.5 * (sol.primal_value + sol.dual_value), 1e-300)) / lb;
  return res;
}

EntropyResult conditional_renyi(const cmat& rho_ab, int dim_a, int dim_b, EntropyFamily family,
                                Arrow arrow, double alpha, double base,
                                const IterativeOptions& iter_opts, const SdpOptions& sdp_opts) {
  require_hermitian(rho_ab, "conditional_renyi");
  if (rho_ab.rows() != static_cast<long long>(dim_a) * dim_b)
    throw DimensionMismatch("conditional_renyi: dims mismatch");
  const double lb = lb_of(base);
  EntropyResult res;
  res.family = family;
  res.arrow = arrow;
  res.alpha = alpha;
  res.base = base;

  const cmat rho_b = partial_trace(rho_ab, {dim_a, dim_b}, {1});

  // Trivial B reduces every variant to the Renyi entropy of the spectrum.
  if (dim_b == 1) {
    RenyiOrder ord{alpha, family == EntropyFamily::petz ? DivFamily::petz : DivFamily::minimal};
    if (std::isinf(alpha)) ord = RenyiOrder::max();
    if (std::abs(alpha - 1.0) < kAlphaGuard) ord = RenyiOrder::umegaki();
    res.value = -renyi_divergence(rho_ab, cmat::Identity(dim_a, dim_a), ord, base).value;
    res.sigma_witness = cmat::Identity(1, 1);
    res.method = EntropyMethod::closed_form;
    return res;
  }

  if (arrow == Arrow::down) {
    RenyiOrder ord{alpha, family == EntropyFamily::petz ? DivFamily::petz : DivFamily::minimal};
    if (std::isinf(alpha)) {
      if (family == EntropyFamily::petz)
        throw RangeError("conditional_renyi: petz-down not defined at alpha = inf");
      ord = RenyiOrder::max();
    }
    res.value = -renyi_divergence(rho_ab, id_tensor(dim_a, rho_b), ord, base).value;
    res.sigma_witness = rho_b;
    res.method = EntropyMethod::closed_form;
    return res;
  }

  // Up arrows.
  if (std::abs(alpha - 1.0) < kAlphaGuard) {
    res.value = von_neumann_conditional(rho_ab, dim_a, dim_b, base);
    res.sigma_witness = rho_b;
    res.method = EntropyMethod::closed_form;
    return res;
  }

  if (family == EntropyFamily::petz) {
    if (std::isinf(alpha))
      throw RangeError("conditional_renyi: petz-up not defined at alpha = inf");
    if (alpha == 0.0) {
      // H0-up: log max_sigma tr({rho > 0} id ⊗ sigma) = log ||tr_A Pi||_inf.
      const cmat pi = support_projector(rho_ab);
      const cmat ta = partial_trace(pi, {dim_a, dim_b}, {1});
      res.value = std::log(schatten_norm_inf(ta)) / lb;
      EigenSystem es = eig_hermitian(ta);
      res.sigma_witness =
          es.eigenvectors.col(dim_b - 1) * es.eigenvectors.col(dim_b - 1).adjoint();
      res.method = EntropyMethod::closed_form;
      return res;
    }
    // Closed form (alpha/(1-alpha)) log tr( (tr_A rho^alpha)^{1/alpha} ).
    const cmat rho_pow = pow_psd(rho_ab, alpha);
    const cmat ta = partial_trace(rho_pow, {dim_a, dim_b}, {1});
    const cmat inner = pow_psd(ta, 1.0 / alpha);
    const double tr_inner = inner.trace().real();
    res.value = alpha / (1.0 - alpha) * std::log(std::max(tr_inner, 1e-300)) / lb;
    res.sigma_witness = inner / std::max(tr_inner, 1e-300);
    res.method = EntropyMethod::closed_form;
    return res;
  }

  // Sandwiched-up.
  if (std::isinf(alpha)) return min_entropy(rho_ab, dim_a, dim_b, base, sdp_opts);
  if (alpha == 0.5 && std::abs(rho_ab.trace().real() - 1.0) <= Tol::ttol)
    return max_entropy(rho_ab, dim_a, dim_b, base, sdp_opts);
  if (alpha <= 0.0) throw RangeError("conditional_renyi: sandwiched-up needs alpha > 0");

  // Iterative convex/concave optimization over sigma_B on supp(rho_B).
  SupportFrame fr = support_frame(rho_b);
  const cmat vb = tensor(cmat::Identity(dim_a, dim_a), fr.v);
  const cmat rho_small = vb.adjoint() * rho_ab * vb;
  const cmat rho_b_small = fr.v.adjoint() * rho_b * fr.v;

  Rng rng(iter_opts.seed);
  std::vector<cmat> starts;
  starts.push_back(rho_b_small / rho_b_small.trace().real());
  starts.push_back(cmat::Identity(fr.rank, fr.rank) / static_cast<double>(fr.rank));
  {
    // Petz-up optimizer as a warm start.
    const cmat ta = partial_trace(pow_psd(rho_small, alpha), {dim_a, fr.rank}, {1});
    const cmat opt = pow_psd(ta, 1.0 / alpha);
    starts.push_back(opt / std::max(opt.trace().real(), 1e-300));
  }
  while (static_cast<int>(starts.size()) < iter_opts.restarts)
    starts.push_back(rng.density(fr.rank, fr.rank));

  double best = alpha > 1.0 ? kInf : -kInf;
  MirrorResult best_run;
  double lo = kInf, hi = -kInf;
  for (const cmat& s0 : starts) {
    MirrorResult run = mirror_descent(rho_small, dim_a, alpha, s0, iter_opts);
    lo = std::min(lo, run.value_nats);
    hi = std::max(hi, run.value_nats);
    const bool better = alpha > 1.0 ? run.value_nats < best : run.value_nats > best;
    if (better) {
      best = run.value_nats;
      best_run = run;
    }
  }
  const double tr = rho_ab.trace().real();
  const double d_nats = (best - std::log(tr)) / (alpha - 1.0);
  res.value = -d_nats / lb;
  res.method = EntropyMethod::iterative;
  res.sigma_witness = fr.v * best_run.sigma * fr.v.adjoint();
  res.stationarity_residual = best_run.stationarity;
  res.restart_spread = std::abs(hi - lo) / std::abs(alpha - 1.0) / lb;
  return res;
}

EntropyResult conditional_renyi(const DensityOperator& rho,
                                const std::vector<std::string>& a_labels, EntropyFamily family,
                                Arrow arrow, double alpha, double base,
                                const IterativeOptions& iter_opts, const SdpOptions& sdp_opts) {
  DensityOperator r = rho.reorder_front(a_labels);
  const int da = r.dim_of(a_labels);
  return conditional_renyi(r.matrix(), da, r.dim() / da, family, arrow, alpha, base, iter_opts,
                           sdp_opts);
}

GuessingResult guessing_probability(const DensityOperator& rho_xb,
                                    const std::string& classical_label, const SdpOptions& opts) {
  DensityOperator r = rho_xb.reorder_front({classical_label});
  const int nx = r.dims()[0];
  const int db = r.dim() / nx;
  cq_split(r, classical_label);  // validates the classical structure
  EntropyResult hm = min_entropy(r.matrix(), nx, db, 2.0, opts);
  GuessingResult out;
  out.p_guess = std::exp2(-hm.value);
  out.sdp_gap = hm.sdp_gap;
  // Optimal POVM from the block diagonal of the dual witness.
  const cmat x_dual = *hm.dual_witness;
  std::vector<cmat> povm(nx);
  cmat total = cmat::Zero(db, db);
  for (int x = 0; x < nx; ++x) {
    cmat block =
        x_dual.block(static_cast<long long>(x) * db, static_cast<long long>(x) * db, db, db);
    povm[x] = apply_matrix_function_hermitian(block, [](double t) { return std::max(t, 0.0); });
    total += povm[x];
  }
  EigenSystem es = eig_hermitian(total);
  const double top = es.eigenvalues.maxCoeff();
  if (top > 1.0) {
    for (auto& m : povm) m /= top;
    total /= top;
  }
  povm[0] += cmat::Identity(db, db) - total;
  out.povm = std::move(povm);
  return out;
}

}  // namespace qit
