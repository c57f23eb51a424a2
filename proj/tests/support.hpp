#pragma once

// Shared fixtures and oracles for the test suites.

#include <cmath>
#include <vector>

#include "qit/linalg.hpp"
#include "qit/rng.hpp"

namespace qt = qit;

inline qt::cmat pauli_x() {
  qt::cmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline qt::cmat pauli_y() {
  qt::cmat m(2, 2);
  m << qt::cplx(0, 0), qt::cplx(0, -1), qt::cplx(0, 1), qt::cplx(0, 0);
  return m;
}

inline qt::cmat pauli_z() {
  qt::cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline qt::cmat diag(std::initializer_list<double> entries) {
  const int d = static_cast<int>(entries.size());
  qt::cmat m = qt::cmat::Zero(d, d);
  int i = 0;
  for (double v : entries) m(i, i) = v, ++i;
  return m;
}

// The 3x3 pair used throughout the divergence chapter figure.
inline qt::cmat fig_rho() {
  qt::cmat m(3, 3);
  m << 5, 5, 2, 5, 5, 2, 2, 2, 2;
  return m / 12.0;
}

inline qt::cmat fig_sigma() { return diag({5.0 / 8, 2.0 / 8, 1.0 / 8}); }

inline qt::rvec rv(std::initializer_list<double> entries) {
  qt::rvec v(static_cast<int>(entries.size()));
  int i = 0;
  for (double x : entries) v(i++) = x;
  return v;
}

// Roots of the monic cubic t^3 + a t^2 + b t + c (all real), ascending.
inline std::vector<double> cubic_roots(double a, double b, double c) {
  // Depressed cubic t = s - a/3 gives s^3 + p s + q, then the trigonometric
  // solution s_k = m cos(theta/3 - 2 pi k / 3) with cos(theta) = -4q/m^3.
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
  if (m <= 0) return {-a / 3.0, -a / 3.0, -a / 3.0};
  const double arg = std::clamp(-4.0 * q / (m * m * m), -1.0, 1.0);
  const double theta = std::acos(arg);
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k)
    roots.push_back(m * std::cos((theta - 2.0 * M_PI * k) / 3.0) - a / 3.0);
  std::sort(roots.begin(), roots.end());
  return roots;
}
