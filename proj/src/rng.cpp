#include "qit/rng.hpp"

#include <cmath>

namespace qit {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Rng::uniform() {
  const std::uint64_t x = gen_();
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(kTwoPi * u2);
  return r * std::cos(kTwoPi * u2);
}

cplx Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) / std::sqrt(2.0);
}

std::uint64_t Rng::integer(std::uint64_t n) {
  if (n == 0) throw BadDims("Rng::integer: n must be positive");
  // Rejection sampling on the top bits keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

cvec Rng::gaussian_vector(int d) {
  cvec v(d);
  for (int i = 0; i < d; ++i) v(i) = cnormal();
  return v;
}

cmat Rng::gaussian_matrix(int rows, int cols) {
  cmat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cnormal();
  return m;
}

cmat Rng::haar_unitary(int d) { return haar_isometry(d, d); }

cmat Rng::haar_isometry(int d_out, int d_in) {
  if (d_out < d_in || d_in <= 0) throw BadDims("haar_isometry: need d_out >= d_in > 0");
  const cmat g = gaussian_matrix(d_out, d_in);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ() * cmat::Identity(d_out, d_in);
  const cmat r = qr.matrixQR().topRows(d_in).triangularView<Eigen::Upper>();
  for (int j = 0; j < d_in; ++j) {
    const cplx z = r(j, j);
    if (std::abs(z) > 0) q.col(j) *= z / std::abs(z);
  }
  return q;
}

cmat Rng::density(int d, int rank) {
  if (d <= 0 || rank <= 0 || rank > d) throw BadDims("density: need 0 < rank <= d");
  const cmat g = gaussian_matrix(d, rank);
  cmat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

cvec Rng::pure_state(int d) {
  cvec v = gaussian_vector(d);
  return v / v.norm();
}

std::vector<cmat> Rng::cptp_kraus(int d_in, int d_out, int d_env) {
  if (d_in <= 0 || d_out <= 0 || d_env <= 0 || d_out * d_env < d_in)
    throw BadDims("cptp_kraus: need d_out * d_env >= d_in");
  const cmat v = haar_isometry(d_out * d_env, d_in);
  std::vector<cmat> kraus;
  kraus.reserve(d_env);
  // Stinespring output ordered env ⊗ out: row (k, b) = k * d_out + b.
  for (int k = 0; k < d_env; ++k) kraus.push_back(v.middleRows(k * d_out, d_out));
  return kraus;
}

rvec Rng::pmf(int d) {
  if (d <= 0) throw BadDims("pmf: dimension must be positive");
  rvec p(d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    double u = uniform();
    if (u < 1e-300) u = 1e-300;
    p(i) = -std::log(u);
    total += p(i);
  }
  return p / total;
}

}  // namespace qit
