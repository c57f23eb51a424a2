#pragma once

// Complex Hermitian matrix kernel: eigendecompositions, kernel-aware matrix
// functions, tensor algebra, pinching.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "qit/errors.hpp"

namespace qit {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;
using cplx = std::complex<double>;

// Numerical policy shared across the library. All thresholds relative where
// noted; see individual checks.
struct Tol {
  static constexpr double kernel_rel = 1e-12;  // kernel cut, relative to largest eigenvalue
  static constexpr double htol = 1e-10;        // hermiticity, absolute on max |M - M^dag|
  static constexpr double ptol = 1e-9;         // psd slack on smallest eigenvalue
  static constexpr double ttol = 1e-9;         // trace normalization
  static constexpr double ctol = 1e-10;        // classicality (off-diagonal mass)
  static constexpr double rtol = 1e-9;         // generic reconstruction checks
  static constexpr double cluster_rel = 1e-9;  // eigenvalue clustering for pinching
};

struct EigenSystem {
  rvec eigenvalues;           // ascending
  cmat eigenvectors;          // columns, unitary
  std::vector<bool> support;  // eigenvalue above kernel threshold
  double kernel_threshold = 0.0;

  int rank() const;
  // Support projector sum_{supported} v v^dag.
  cmat support_projector() const;
};

bool is_hermitian(const cmat& m, double htol = Tol::htol);
void require_hermitian(const cmat& m, const char* who, double htol = Tol::htol);
void require_square(const cmat& m, const char* who);

double max_abs(const cmat& m);

// Hermitian eigendecomposition with deterministic eigenvector phases (first
// component of significant modulus made real positive).
EigenSystem eig_hermitian(const cmat& m, double htol = Tol::htol);

// Spectral application of f, ignoring the kernel of a psd matrix.
// f(lambda) must be finite on retained eigenvalues, else FunctionDomainError.
cmat apply_matrix_function(const cmat& m, const std::function<double(double)>& f,
                           double ptol = Tol::ptol);
// Same but for Hermitian (possibly indefinite) input; used internally where
// the kernel convention still applies (e.g. |.| and sign decompositions).
cmat apply_matrix_function_hermitian(const cmat& m, const std::function<double(double)>& f);

cmat generalized_inverse(const cmat& m);
cmat sqrt_psd(const cmat& m);
cmat invsqrt_psd(const cmat& m);
// Real power t^p on the support.
cmat pow_psd(const cmat& m, double p);
cmat log2_psd(const cmat& m);  // base-2 logarithm on the support

// Support projector at the relative kernel threshold.
cmat support_projector(const cmat& m);

// True iff kernel(b) is contained in kernel(a): supp(a) <= supp(b).
bool dominated(const cmat& a, const cmat& b, double tol = Tol::rtol);
// True iff the supports of a and b are orthogonal.
bool orthogonal(const cmat& a, const cmat& b, double tol = Tol::rtol);

cmat tensor(const cmat& a, const cmat& b);
cmat tensor(const std::vector<cmat>& ops);
cvec tensor_vec(const cvec& a, const cvec& b);

// Index-contraction over the subsystems not listed in `keep` (ascending order
// of kept subsystem indices is preserved).
cmat partial_trace(const cmat& m, const std::vector<int>& dims, const std::vector<int>& keep);
// Transpose of one subsystem.
cmat partial_transpose(const cmat& m, const std::vector<int>& dims, int subsystem);
// Permute subsystems: perm[k] = old index of the subsystem placed at slot k.
cmat permute_subsystems(const cmat& m, const std::vector<int>& dims, const std::vector<int>& perm);

struct SchmidtDecomposition {
  rvec coefficients;  // descending, sum = <v|v>
  cmat left;          // orthonormal columns on A
  cmat right;         // orthonormal columns on B
};
SchmidtDecomposition schmidt_decompose(const cvec& v, int dim_a, int dim_b);

// Unnormalized maximally entangled vector sum_x |x>|x> on A ⊗ A'.
cvec max_entangled_vector(int d);

// Spectral projectors of H after single-linkage clustering of eigenvalues
// with gap tolerance cluster_tol * ||H||_inf.
std::vector<cmat> distinct_spectrum(const cmat& h, double cluster_tol = Tol::cluster_rel);
// P_H(M) = sum_lambda P_lambda M P_lambda.
cmat pinch(const cmat& h, const cmat& m, double cluster_tol = Tol::cluster_rel);

}  // namespace qit
