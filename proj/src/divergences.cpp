#include "qit/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qit {

namespace {

constexpr double kAlphaGuard = 1e-4;  // width of the alpha = 1 guard band

double ln_of_base(double base) {
  if (base == 2.0) return M_LN2;
  if (!(base > 0) || base == 1.0) throw RangeError("log base must be positive and != 1");
  return std::log(base);
}

struct SpectralPair {
  EigenSystem rho;
  EigenSystem sigma;
  cmat overlap;  // |<e_x|f_y>|^2 as real part storage
  rmat weights;
};

SpectralPair spectral_pair(const cmat& rho, const cmat& sigma) {
  SpectralPair sp;
  sp.rho = eig_hermitian(rho);
  sp.sigma = eig_hermitian(sigma);
  const cmat cross = sp.rho.eigenvectors.adjoint() * sp.sigma.eigenvectors;
  sp.weights = cross.cwiseAbs2();
  return sp;
}

// tr(rho ln rho) - tr(rho ln sigma) in nats, assuming rho << sigma.
double umegaki_nats(const SpectralPair& sp) {
  double acc = 0.0;
  const auto& lr = sp.rho.eigenvalues;
  const auto& ls = sp.sigma.eigenvalues;
  for (int x = 0; x < lr.size(); ++x) {
    if (!sp.rho.support[x] || lr[x] <= 0) continue;
    acc += lr[x] * std::log(lr[x]);
    for (int y = 0; y < ls.size(); ++y) {
      if (!sp.sigma.support[y] || ls[y] <= 0) continue;
      acc -= lr[x] * sp.weights(x, y) * std::log(ls[y]);
    }
  }
  return acc;
}

// Variance of the log-likelihood ratio in nats^2 (normalized by tr rho).
double variance_nats(const SpectralPair& sp, double tr_rho) {
  double mean = 0.0, second = 0.0;
  const auto& lr = sp.rho.eigenvalues;
  const auto& ls = sp.sigma.eigenvalues;
  for (int x = 0; x < lr.size(); ++x) {
    if (!sp.rho.support[x] || lr[x] <= 0) continue;
    for (int y = 0; y < ls.size(); ++y) {
      if (!sp.sigma.support[y] || ls[y] <= 0) continue;
      const double w = lr[x] * sp.weights(x, y) / tr_rho;
      if (w <= 0) continue;
      const double z = std::log(lr[x]) - std::log(ls[y]);
      mean += w * z;
      second += w * z * z;
    }
  }
  return second - mean * mean;
}

double petz_q(const SpectralPair& sp, double alpha) {
  double q = 0.0;
  const auto& lr = sp.rho.eigenvalues;
  const auto& ls = sp.sigma.eigenvalues;
  for (int x = 0; x < lr.size(); ++x) {
    if (!sp.rho.support[x] || lr[x] <= 0) continue;
    const double la = std::pow(lr[x], alpha);
    for (int y = 0; y < ls.size(); ++y) {
      if (!sp.sigma.support[y] || ls[y] <= 0) continue;
      q += la * std::pow(ls[y], 1.0 - alpha) * sp.weights(x, y);
    }
  }
  return q;
}

double minimal_q(const cmat& rho, const cmat& sigma, double alpha) {
  const double c = (1.0 - alpha) / (2.0 * alpha);
  const cmat sc = pow_psd(sigma, c);
  const cmat a = sc * rho * sc;
  EigenSystem es = eig_hermitian(0.5 * (a + a.adjoint()));
  double q = 0.0;
  for (int i = 0; i < es.eigenvalues.size(); ++i)
    if (es.support[i] && es.eigenvalues[i] > 0) q += std::pow(es.eigenvalues[i], alpha);
  return q;
}

double maximal_q(const cmat& rho, const cmat& sigma, double alpha) {
  const cmat isq = invsqrt_psd(sigma);
  const cmat delta = isq * rho * isq;
  const cmat da = pow_psd(0.5 * (delta + delta.adjoint()), alpha);
  return (sigma * da).trace().real();
}

// Simultaneous eigenvalues of a commuting Hermitian pair.
std::pair<rvec, rvec> commuting_eigenvalues(const cmat& rho, const cmat& sigma) {
  const double scale = std::max(1.0, max_abs(rho) * max_abs(sigma));
  if (max_abs(rho * sigma - sigma * rho) > 1e-8 * scale)
    throw RangeError("classical divergence family requires commuting inputs");
  const int d = static_cast<int>(rho.rows());
  rvec p(d), q(d);
  int pos = 0;
  EigenSystem ss = eig_hermitian(sigma);
  for (const cmat& proj : distinct_spectrum(sigma)) {
    // Eigenbasis of rho inside this sigma-eigenspace.
    EigenSystem rs = eig_hermitian(proj * rho * proj);
    const double sval = (proj * sigma).trace().real() / std::max(1.0, proj.trace().real());
    for (int i = 0; i < rs.eigenvalues.size(); ++i) {
      const cvec v = rs.eigenvectors.col(i);
      const double in_sector = std::abs((v.adjoint() * proj * v)(0, 0));
      if (in_sector < 0.5) continue;  // basis vector outside the eigenspace
      p(pos) = rs.eigenvalues[i];
      q(pos) = sval;
      ++pos;
    }
  }
  if (pos != d) throw Error("commuting_eigenvalues: basis bookkeeping failed");
  return {p, q};
}

}  // namespace

bool RenyiOrder::dpi_valid() const {
  switch (family) {
    case DivFamily::minimal:
      return alpha >= 0.5;
    case DivFamily::petz:
      return alpha > 0.0 && alpha <= 2.0;
    case DivFamily::classical:
      return alpha > 0.0;
    case DivFamily::max:
    case DivFamily::umegaki:
      return true;
    case DivFamily::maximal:
      return alpha > 0.0 && alpha <= 2.0;
  }
  return false;
}

double classical_renyi(const rvec& p, const rvec& q, double alpha, double base, double zero_tol) {
  if (p.size() != q.size()) throw DimensionMismatch("classical_renyi: length mismatch");
  const double pmax = p.size() ? p.cwiseAbs().maxCoeff() : 0.0;
  const double qmax = q.size() ? q.cwiseAbs().maxCoeff() : 0.0;
  const double pcut = zero_tol * std::max(pmax, 1e-300);
  const double qcut = zero_tol * std::max(qmax, 1e-300);
  const double lb = ln_of_base(base);
  double tr_p = 0.0;
  for (int i = 0; i < p.size(); ++i)
    if (p(i) > pcut) tr_p += p(i);
  if (tr_p <= 0) throw RangeError("classical_renyi: rho must be nonzero");

  if (alpha == 1.0) return classical_kl(p, q, base, zero_tol);
  if (std::isinf(alpha)) {
    double worst = -kInf;
    for (int i = 0; i < p.size(); ++i) {
      if (p(i) <= pcut) continue;
      if (q(i) <= qcut) return kInf;
      worst = std::max(worst, std::log(p(i) / q(i)));
    }
    return worst / lb;
  }
  if (alpha == 0.0) {
    double covered = 0.0;
    for (int i = 0; i < p.size(); ++i)
      if (p(i) > pcut && q(i) > qcut) covered += q(i);
    if (covered <= 0) return kInf;
    return (std::log(tr_p) - std::log(covered)) / lb;
  }
  if (alpha < 0) throw RangeError("classical_renyi: alpha must be >= 0");
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) <= pcut) continue;
    if (q(i) <= qcut) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    acc += std::pow(p(i), alpha) * std::pow(q(i), 1.0 - alpha);
  }
  if (acc <= 0) return kInf;
  return (std::log(acc) - std::log(tr_p)) / ((alpha - 1.0) * lb);
}

double classical_kl(const rvec& p, const rvec& q, double base, double zero_tol) {
  if (p.size() != q.size()) throw DimensionMismatch("classical_kl: length mismatch");
  const double pmax = p.size() ? p.cwiseAbs().maxCoeff() : 0.0;
  const double qmax = q.size() ? q.cwiseAbs().maxCoeff() : 0.0;
  const double pcut = zero_tol * std::max(pmax, 1e-300);
  const double qcut = zero_tol * std::max(qmax, 1e-300);
  double acc = 0.0, tr_p = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) <= pcut) continue;
    if (q(i) <= qcut) return kInf;
    acc += p(i) * (std::log(p(i)) - std::log(q(i)));
    tr_p += p(i);
  }
  if (tr_p <= 0) throw RangeError("classical_kl: rho must be nonzero");
  return acc / tr_p / ln_of_base(base);
}

double umegaki_divergence(const cmat& rho, const cmat& sigma, double base) {
  require_hermitian(rho, "umegaki_divergence");
  require_hermitian(sigma, "umegaki_divergence");
  if (!dominated(rho, sigma)) return kInf;
  SpectralPair sp = spectral_pair(rho, sigma);
  const double tr = rho.trace().real();
  if (tr <= 0) throw RangeError("umegaki_divergence: rho must be nonzero");
  return umegaki_nats(sp) / tr / ln_of_base(base);
}

double max_divergence(const cmat& rho, const cmat& sigma, double base) {
  require_hermitian(rho, "max_divergence");
  require_hermitian(sigma, "max_divergence");
  if (!dominated(rho, sigma)) return kInf;
  const cmat isq = invsqrt_psd(sigma);
  const cmat b = isq * rho * isq;
  EigenSystem es = eig_hermitian(0.5 * (b + b.adjoint()));
  const double lmax = es.eigenvalues.size() ? es.eigenvalues.maxCoeff() : 0.0;
  if (lmax <= 0) return -kInf;
  return std::log(lmax) / ln_of_base(base);
}

double divergence_variance(const cmat& rho, const cmat& sigma, double base) {
  require_hermitian(rho, "divergence_variance");
  require_hermitian(sigma, "divergence_variance");
  if (!dominated(rho, sigma)) return kInf;
  const double tr = rho.trace().real();
  if (tr <= 0) throw RangeError("divergence_variance: rho must be nonzero");
  SpectralPair sp = spectral_pair(rho, sigma);
  const double lb = ln_of_base(base);
  return variance_nats(sp, tr) / (lb * lb);
}

DivergenceResult renyi_divergence(const cmat& rho, const cmat& sigma, const RenyiOrder& order,
                                  double base) {
  require_hermitian(rho, "renyi_divergence");
  require_hermitian(sigma, "renyi_divergence");
  if (rho.rows() != sigma.rows()) throw DimensionMismatch("renyi_divergence: size mismatch");
  const double tr = rho.trace().real();
  if (tr <= 0) throw RangeError("renyi_divergence: rho must be nonzero");
  const double lb = ln_of_base(base);
  const double alpha = order.alpha;

  DivergenceResult res;
  res.base = base;

  auto infinite = [&](SupportCondition why) {
    res.value = kInf;
    res.q_functional = kInf;
    res.support_condition = why;
    return res;
  };

  // Support preconditions shared by the Renyi families.
  auto support_gate = [&](double a) -> bool {
    if (a > 1.0 || std::isinf(a)) return dominated(rho, sigma);
    return !orthogonal(rho, sigma);
  };

  switch (order.family) {
    case DivFamily::umegaki: {
      res.value = umegaki_divergence(rho, sigma, base);
      res.q_functional = 1.0;
      if (!std::isfinite(res.value)) res.support_condition = SupportCondition::infinite;
      return res;
    }
    case DivFamily::max: {
      res.value = max_divergence(rho, sigma, base);
      res.q_functional = std::isfinite(res.value) ? std::exp(res.value * lb) : kInf;
      if (!std::isfinite(res.value) && res.value > 0)
        res.support_condition = SupportCondition::infinite;
      return res;
    }
    case DivFamily::classical: {
      auto [p, q] = commuting_eigenvalues(rho, sigma);
      res.value = classical_renyi(p, q, alpha, base);
      res.q_functional = std::isfinite(res.value) && !std::isinf(alpha) && alpha != 1.0
                             ? std::exp((alpha - 1.0) * res.value * lb) * tr
                             : kInf;
      if (!std::isfinite(res.value)) res.support_condition = SupportCondition::infinite;
      return res;
    }
    case DivFamily::minimal:
    case DivFamily::petz:
    case DivFamily::maximal:
      break;
  }

  if (alpha < 0) throw RangeError("renyi_divergence: alpha must be >= 0");
  if (!support_gate(alpha)) return infinite(SupportCondition::infinite);
  if (alpha < 1.0 && !dominated(rho, sigma))
    res.support_condition = SupportCondition::alpha_lt1_not_perp;

  if (std::isinf(alpha)) {
    if (order.family == DivFamily::petz)
      throw RangeError("petz divergence: alpha = inf not defined");
    res.value = max_divergence(rho, sigma, base);
    res.q_functional = kInf;
    return res;
  }

  if (alpha == 0.0) {
    if (order.family == DivFamily::petz) {
      // -log tr({rho > 0} sigma), the documented (discontinuous) limit.
      const double q0 = (support_projector(rho) * sigma).trace().real();
      res.q_functional = q0;
      res.value = q0 > 0 ? (std::log(tr) - std::log(q0)) / lb : kInf;
      return res;
    }
    throw RangeError("renyi_divergence: alpha = 0 limit implemented for the petz family only");
  }

  const bool near_one = std::abs(alpha - 1.0) < kAlphaGuard;
  if (near_one && order.family != DivFamily::maximal) {
    // Taylor step around alpha = 1 avoids the unstable quotient.
    SpectralPair sp = spectral_pair(rho, sigma);
    const double d1 = umegaki_nats(sp) / tr;
    const double v = variance_nats(sp, tr);
    res.value = (d1 + (alpha - 1.0) * 0.5 * v) / lb;
    res.q_functional = tr * std::exp((alpha - 1.0) * (d1 + (alpha - 1.0) * 0.5 * v));
    return res;
  }
  if (near_one && order.family == DivFamily::maximal) {
    // Belavkin-Staszewski limit tr(sigma Delta ln Delta) / tr rho.
    const cmat isq = invsqrt_psd(sigma);
    const cmat delta = isq * rho * isq;
    const cmat tlogt = apply_matrix_function(0.5 * (delta + delta.adjoint()),
                                             [](double t) { return t * std::log(t); });
    res.value = (sigma * tlogt).trace().real() / tr / lb;
    res.q_functional = 1.0;
    return res;
  }

  double q = 0.0;
  switch (order.family) {
    case DivFamily::minimal:
      q = minimal_q(rho, sigma, alpha);
      break;
    case DivFamily::petz: {
      SpectralPair sp = spectral_pair(rho, sigma);
      q = petz_q(sp, alpha);
      break;
    }
    case DivFamily::maximal:
      q = maximal_q(rho, sigma, alpha);
      break;
    default:
      break;
  }
  res.q_functional = q;
  if (q <= 0) return infinite(SupportCondition::infinite);
  res.value = (std::log(q) - std::log(tr)) / ((alpha - 1.0) * lb);
  return res;
}

std::pair<rvec, rvec> nussbaum_szkola(const cmat& rho, const cmat& sigma) {
  require_hermitian(rho, "nussbaum_szkola");
  require_hermitian(sigma, "nussbaum_szkola");
  if (rho.rows() != sigma.rows()) throw DimensionMismatch("nussbaum_szkola: size mismatch");
  SpectralPair sp = spectral_pair(rho, sigma);
  const int d = static_cast<int>(rho.rows());
  rvec p(d * d), q(d * d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      const double w = sp.weights(x, y);
      p(x * d + y) = std::max(0.0, sp.rho.eigenvalues[x]) * w;
      q(x * d + y) = std::max(0.0, sp.sigma.eigenvalues[y]) * w;
    }
  return {p, q};
}

double pinched_divergence(const cmat& rho, const cmat& sigma, double alpha, int n, double base,
                          long long dim_cap) {
  require_hermitian(rho, "pinched_divergence");
  require_hermitian(sigma, "pinched_divergence");
  if (n <= 0) throw RangeError("pinched_divergence: n must be positive");
  const int d = static_cast<int>(rho.rows());
  long long total = 1;
  for (int t = 0; t < n; ++t) {
    total *= d;
    if (total > dim_cap) throw TooLarge("pinched_divergence: d^n exceeds the dense cap");
  }

  EigenSystem ss = eig_hermitian(sigma);
  const cmat r = ss.eigenvectors.adjoint() * rho * ss.eigenvectors;

  // Log-eigenvalue products of sigma^(n); kernel flagged with -inf.
  std::vector<double> ls(d);
  for (int i = 0; i < d; ++i)
    ls[i] = (ss.support[i] && ss.eigenvalues[i] > 0) ? std::log(ss.eigenvalues[i]) : -kInf;

  std::vector<long long> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key(total);
  std::vector<int> digits(n);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    double s = 0.0;
    for (int t = n - 1; t >= 0; --t) {
      const int dig = static_cast<int>(rem % d);
      rem /= d;
      digits[t] = dig;
      s += ls[dig];
    }
    key[idx] = s;
  }
  std::sort(order.begin(), order.end(),
            [&](long long a, long long b) { return key[a] < key[b]; });

  std::vector<double> pvals, qvals;
  const double gap = 1e-10 * std::max(1, n);
  size_t start = 0;
  auto digits_of = [&](long long idx, std::vector<int>& out) {
    for (int t = n - 1; t >= 0; --t) {
      out[t] = static_cast<int>(idx % d);
      idx /= d;
    }
  };
  std::vector<int> da(n), db(n);
  for (size_t i = 1; i <= order.size(); ++i) {
    const bool boundary =
        i == order.size() || !(std::abs(key[order[i]] - key[order[start]]) <= gap ||
                               (std::isinf(key[order[i]]) && std::isinf(key[order[start]])));
    if (!boundary) continue;
    const size_t m = i - start;
    cmat block(m, m);
    for (size_t a = 0; a < m; ++a) {
      digits_of(order[start + a], da);
      for (size_t b = 0; b < m; ++b) {
        digits_of(order[start + b], db);
        cplx prod = 1.0;
        for (int t = 0; t < n; ++t) prod *= r(da[t], db[t]);
        block(a, b) = prod;
      }
    }
    EigenSystem bs = eig_hermitian(0.5 * (block + block.adjoint()));
    const double qsec = std::isinf(key[order[start]]) ? 0.0 : std::exp(key[order[start]]);
    for (int k = 0; k < bs.eigenvalues.size(); ++k) {
      pvals.push_back(std::max(0.0, bs.eigenvalues[k]));
      qvals.push_back(qsec);
    }
    start = i;
  }
  rvec p = Eigen::Map<rvec>(pvals.data(), pvals.size());
  rvec q = Eigen::Map<rvec>(qvals.data(), qvals.size());
  return classical_renyi(p, q, alpha, base) / n;
}

}  // namespace qit
