#pragma once

// The divergence zoo: classical, Umegaki, minimal (sandwiched), Petz,
// maximal, max-divergence; divergence variance; Nussbaum-Szkola reduction;
// pinched divergence.

#include <limits>
#include <utility>

#include "qit/linalg.hpp"

namespace qit {

enum class DivFamily { classical, minimal, petz, maximal, max, umegaki };

struct RenyiOrder {
  double alpha = 1.0;  // may be +infinity
  DivFamily family = DivFamily::minimal;

  // Ranges where the data-processing inequality is established.
  bool dpi_valid() const;
  static RenyiOrder minimal(double a) { return {a, DivFamily::minimal}; }
  static RenyiOrder petz(double a) { return {a, DivFamily::petz}; }
  static RenyiOrder maximal(double a) { return {a, DivFamily::maximal}; }
  static RenyiOrder classical(double a) { return {a, DivFamily::classical}; }
  static RenyiOrder max() { return {std::numeric_limits<double>::infinity(), DivFamily::max}; }
  static RenyiOrder umegaki() { return {1.0, DivFamily::umegaki}; }
};

enum class SupportCondition { ok, alpha_lt1_not_perp, infinite };

struct DivergenceResult {
  double value = 0.0;         // in the requested log base; +inf on support violation
  double q_functional = 0.0;  // underlying Q_alpha (not normalized by tr rho)
  SupportCondition support_condition = SupportCondition::ok;
  double base = 2.0;

  bool finite() const { return std::isfinite(value); }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Quantum Renyi divergence of sigma with rho. Support conventions follow the
// definitions: +inf is a value, not an error.
DivergenceResult renyi_divergence(const cmat& rho, const cmat& sigma, const RenyiOrder& order,
                                  double base = 2.0);

// Umegaki divergence tr(rho (log rho - log sigma)) / tr rho.
double umegaki_divergence(const cmat& rho, const cmat& sigma, double base = 2.0);
// Max-divergence log lambda_max(sigma^{-1/2} rho sigma^{-1/2}).
double max_divergence(const cmat& rho, const cmat& sigma, double base = 2.0);

// Classical divergences on pmf vectors (entries below zero_tol * max are
// treated as exact zeros).
double classical_renyi(const rvec& p, const rvec& q, double alpha, double base = 2.0,
                       double zero_tol = 1e-14);
double classical_kl(const rvec& p, const rvec& q, double base = 2.0, double zero_tol = 1e-14);

// Divergence variance V(rho||sigma) = tr(rho (log rho - log sigma - D)^2),
// reported in (log base)^2 units; +inf when the support condition fails.
double divergence_variance(const cmat& rho, const cmat& sigma, double base = 2.0);

// Nussbaum-Szkola distributions as pmfs over eigenvalue index pairs (x, y),
// stored row-major (x major).
std::pair<rvec, rvec> nussbaum_szkola(const cmat& rho, const cmat& sigma);

// (1/n) D_alpha(P_{sigma^(n)}(rho^(n)) || sigma^(n)) via the sector-block
// reduction; matrix blocks never exceed the classical sector sizes.
double pinched_divergence(const cmat& rho, const cmat& sigma, double alpha, int n,
                          double base = 2.0, long long dim_cap = 4096);

}  // namespace qit
