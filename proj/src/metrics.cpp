#include "qit/metrics.hpp"

#include <cmath>

namespace qit {

namespace {

double clamp_unit(double x) { return std::min(1.0, std::max(0.0, x)); }

// Tiny negatives from rounding are clamped before square roots.
double clamp_nonneg(double x) {
  if (x < 0 && x > -1e-12) return 0.0;
  return x;
}

void require_same_size(const cmat& a, const cmat& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(who) + ": size mismatch");
}

}  // namespace

rvec singular_values(const cmat& l) {
  Eigen::JacobiSVD<cmat> svd(l);
  return svd.singularValues();
}

double schatten_norm_inf(const cmat& l) {
  const rvec s = singular_values(l);
  return s.size() ? s.maxCoeff() : 0.0;
}

double schatten_norm(const cmat& l, double p) {
  if (!(p > 0)) throw RangeError("schatten_norm: p must be positive (use schatten_norm_inf)");
  if (std::isinf(p)) return schatten_norm_inf(l);
  const rvec s = singular_values(l);
  double acc = 0.0;
  for (int i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc, 1.0 / p);
}

double dual_norm_plus(const cmat& xi) {
  require_hermitian(xi, "dual_norm_plus");
  EigenSystem es = eig_hermitian(xi);
  double one = 0.0;
  for (int i = 0; i < es.eigenvalues.size(); ++i) one += std::abs(es.eigenvalues[i]);
  return 0.5 * (one + std::abs(xi.trace().real()));
}

double trace_distance(const cmat& rho, const cmat& tau) {
  require_same_size(rho, tau, "trace_distance");
  return dual_norm_plus(rho - tau);
}

double root_fidelity(const cmat& rho, const cmat& tau) {
  require_same_size(rho, tau, "fidelity");
  // Singular values of sqrt(rho) * sqrt(tau), stable near rank deficiency.
  const cmat prod = sqrt_psd(rho) * sqrt_psd(tau);
  return singular_values(prod).sum();
}

double fidelity(const cmat& rho, const cmat& tau) {
  const double r = root_fidelity(rho, tau);
  return r * r;
}

double gen_fidelity(const cmat& rho, const cmat& tau) {
  const double tr_r = clamp_unit(rho.trace().real());
  const double tr_t = clamp_unit(tau.trace().real());
  const double extra = std::sqrt(clamp_nonneg(1.0 - tr_r) * clamp_nonneg(1.0 - tr_t));
  const double r = root_fidelity(rho, tau) + extra;
  return r * r;
}

double purified_distance(const cmat& rho, const cmat& tau) {
  const double f = std::min(1.0, gen_fidelity(rho, tau));
  return std::sqrt(clamp_nonneg(1.0 - f));
}

}  // namespace qit
