#pragma once

// Seed-deterministic random sampling. The generator algorithm is fixed so
// suites reproduce across platforms and language bindings:
//   - stream: std::mt19937_64 seeded directly with the 64-bit seed,
//   - uniforms: (x >> 11) * 2^-53 on successive outputs,
//   - normals: Box-Muller on uniform pairs (u clamped away from 0),
//   - complex standard normal: (n1 + i*n2) / sqrt(2).

#include <cstdint>
#include <random>
#include <vector>

#include "qit/linalg.hpp"

namespace qit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();  // [0, 1)
  double normal();
  cplx cnormal();
  // Uniform integer in [0, n).
  std::uint64_t integer(std::uint64_t n);

  cvec gaussian_vector(int d);
  cmat gaussian_matrix(int rows, int cols);

  // Haar unitary via QR of a Gaussian matrix with R-diagonal phase fixing.
  cmat haar_unitary(int d);
  // Columns of a Haar unitary on the output space: V^dag V = id_{d_in}.
  cmat haar_isometry(int d_out, int d_in);
  // Normalized GG^dag with G of shape d x rank.
  cmat density(int d, int rank);
  cvec pure_state(int d);
  // Kraus operators of a random CPTP map obtained from the Stinespring
  // isometry d_in -> d_out * d_env, requires d_out * d_env >= d_in.
  std::vector<cmat> cptp_kraus(int d_in, int d_out, int d_env);
  // Random pmf (flat Dirichlet).
  rvec pmf(int d);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qit
