#include "qit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qit {

int EigenSystem::rank() const {
  int r = 0;
  for (bool s : support) r += s ? 1 : 0;
  return r;
}

cmat EigenSystem::support_projector() const {
  const int d = static_cast<int>(eigenvalues.size());
  cmat p = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    if (support[i]) p += eigenvectors.col(i) * eigenvectors.col(i).adjoint();
  return p;
}

double max_abs(const cmat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const cmat& m, double htol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= htol;
}

void require_square(const cmat& m, const char* who) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

void require_hermitian(const cmat& m, const char* who, double htol) {
  require_square(m, who);
  if (!m.allFinite()) throw Error(std::string(who) + ": non-finite entries");
  if (!is_hermitian(m, htol))
    throw NonHermitian(std::string(who) + ": input is not Hermitian within htol");
}

EigenSystem eig_hermitian(const cmat& m, double htol) {
  require_hermitian(m, "eig_hermitian", htol);
  const cmat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> es(h);
  if (es.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");
  EigenSystem sys;
  sys.eigenvalues = es.eigenvalues();
  sys.eigenvectors = es.eigenvectors();
  const int d = static_cast<int>(sys.eigenvalues.size());
  // Phase canonicalization: first component of significant modulus real positive.
  for (int c = 0; c < d; ++c) {
    int pivot = 0;
    double best = 0.0;
    for (int r = 0; r < d; ++r) {
      const double a = std::abs(sys.eigenvectors(r, c));
      if (a > best + 1e-12) {
        best = a;
        pivot = r;
        if (a > 0.5) break;
      }
    }
    const cplx z = sys.eigenvectors(pivot, c);
    if (std::abs(z) > 0) sys.eigenvectors.col(c) *= std::conj(z) / std::abs(z);
  }
  const double lmax = d == 0 ? 0.0 : sys.eigenvalues.cwiseAbs().maxCoeff();
  sys.kernel_threshold = Tol::kernel_rel * lmax;
  sys.support.resize(d);
  for (int i = 0; i < d; ++i) sys.support[i] = std::abs(sys.eigenvalues[i]) > sys.kernel_threshold;
  return sys;
}

cmat apply_matrix_function_hermitian(const cmat& m, const std::function<double(double)>& f) {
  EigenSystem es = eig_hermitian(m);
  const int d = static_cast<int>(es.eigenvalues.size());
  cmat out = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (!es.support[i]) continue;
    const double v = f(es.eigenvalues[i]);
    if (!std::isfinite(v))
      throw FunctionDomainError("matrix function undefined at retained eigenvalue");
    out += v * (es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint());
  }
  return out;
}

cmat apply_matrix_function(const cmat& m, const std::function<double(double)>& f, double ptol) {
  EigenSystem es = eig_hermitian(m);
  const int d = static_cast<int>(es.eigenvalues.size());
  const double scale = std::max(1.0, d == 0 ? 0.0 : es.eigenvalues.cwiseAbs().maxCoeff());
  if (d > 0 && es.eigenvalues.minCoeff() < -ptol * scale)
    throw NotPsd("apply_matrix_function: input is not positive semi-definite");
  cmat out = cmat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (!es.support[i] || es.eigenvalues[i] < 0) continue;
    const double v = f(es.eigenvalues[i]);
    if (!std::isfinite(v))
      throw FunctionDomainError("matrix function undefined at retained eigenvalue");
    out += v * (es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint());
  }
  return out;
}

cmat generalized_inverse(const cmat& m) {
  return apply_matrix_function_hermitian(m, [](double t) { return 1.0 / t; });
}

cmat sqrt_psd(const cmat& m) {
  return apply_matrix_function(m, [](double t) { return std::sqrt(t); });
}

cmat invsqrt_psd(const cmat& m) {
  return apply_matrix_function(m, [](double t) { return 1.0 / std::sqrt(t); });
}

cmat pow_psd(const cmat& m, double p) {
  return apply_matrix_function(m, [p](double t) { return std::pow(t, p); });
}

cmat log2_psd(const cmat& m) {
  return apply_matrix_function(m, [](double t) { return std::log2(t); });
}

cmat support_projector(const cmat& m) { return eig_hermitian(m).support_projector(); }

bool dominated(const cmat& a, const cmat& b, double tol) {
  require_hermitian(a, "dominated");
  require_hermitian(b, "dominated");
  if (a.rows() != b.rows()) throw DimensionMismatch("dominated: size mismatch");
  const cmat pa = support_projector(a);
  const cmat pb = support_projector(b);
  const cmat rest = (cmat::Identity(b.rows(), b.cols()) - pb);
  // supp(a) inside supp(b) iff (1 - P_b) P_a (1 - P_b) vanishes.
  return max_abs(rest * pa * rest) <= tol;
}

bool orthogonal(const cmat& a, const cmat& b, double tol) {
  require_hermitian(a, "orthogonal");
  require_hermitian(b, "orthogonal");
  if (a.rows() != b.rows()) throw DimensionMismatch("orthogonal: size mismatch");
  const cmat pa = support_projector(a);
  const cmat pb = support_projector(b);
  return std::abs((pa * pb).trace()) <= tol * a.rows();
}

cmat tensor(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cmat tensor(const std::vector<cmat>& ops) {
  if (ops.empty()) return cmat::Identity(1, 1);
  cmat out = ops[0];
  for (size_t k = 1; k < ops.size(); ++k) out = tensor(out, ops[k]);
  return out;
}

cvec tensor_vec(const cvec& a, const cvec& b) {
  cvec out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace {

long long total_dim(const std::vector<int>& dims) {
  long long n = 1;
  for (int d : dims) {
    if (d <= 0) throw BadDims("subsystem dimension must be positive");
    n *= d;
  }
  return n;
}

// Row-major multi-index helpers.
std::vector<int> unravel(long long idx, const std::vector<int>& dims) {
  std::vector<int> digits(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(idx % dims[k]);
    idx /= dims[k];
  }
  return digits;
}

long long ravel(const std::vector<int>& digits, const std::vector<int>& dims) {
  long long idx = 0;
  for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

}  // namespace

cmat partial_trace(const cmat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  const long long n = total_dim(dims);
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch("partial_trace: dims do not match matrix size");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<int> trace_idx;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), k)) trace_idx.push_back(k);
  std::vector<int> keep_dims, trace_dims;
  for (int k : keep_sorted) {
    if (k < 0 || k >= static_cast<int>(dims.size())) throw BadDims("partial_trace: bad keep index");
    keep_dims.push_back(dims[k]);
  }
  for (int k : trace_idx) trace_dims.push_back(dims[k]);
  const long long nk = total_dim(keep_dims);
  const long long nt = total_dim(trace_dims);
  cmat out = cmat::Zero(nk, nk);
  std::vector<int> full(dims.size());
  for (long long i = 0; i < nk; ++i) {
    const std::vector<int> di = unravel(i, keep_dims);
    for (long long j = 0; j < nk; ++j) {
      const std::vector<int> dj = unravel(j, keep_dims);
      cplx acc = 0.0;
      for (long long t = 0; t < nt; ++t) {
        const std::vector<int> dt = unravel(t, trace_dims);
        for (size_t k = 0; k < keep_sorted.size(); ++k) full[keep_sorted[k]] = di[k];
        for (size_t k = 0; k < trace_idx.size(); ++k) full[trace_idx[k]] = dt[k];
        const long long row = ravel(full, dims);
        for (size_t k = 0; k < keep_sorted.size(); ++k) full[keep_sorted[k]] = dj[k];
        const long long col = ravel(full, dims);
        acc += m(row, col);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

cmat partial_transpose(const cmat& m, const std::vector<int>& dims, int subsystem) {
  const long long n = total_dim(dims);
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch("partial_transpose: dims do not match matrix size");
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw BadDims("partial_transpose: bad subsystem index");
  cmat out(n, n);
  for (long long i = 0; i < n; ++i) {
    std::vector<int> di = unravel(i, dims);
    for (long long j = 0; j < n; ++j) {
      std::vector<int> dj = unravel(j, dims);
      std::swap(di[subsystem], dj[subsystem]);
      out(ravel(di, dims), ravel(dj, dims)) = m(i, j);
      std::swap(di[subsystem], dj[subsystem]);
    }
  }
  return out;
}

cmat permute_subsystems(const cmat& m, const std::vector<int>& dims, const std::vector<int>& perm) {
  const long long n = total_dim(dims);
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch("permute_subsystems: dims do not match matrix size");
  if (perm.size() != dims.size()) throw BadDims("permute_subsystems: bad permutation size");
  std::vector<int> new_dims(dims.size());
  for (size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];
  cmat out(n, n);
  std::vector<int> pi(dims.size()), pj(dims.size());
  for (long long i = 0; i < n; ++i) {
    const std::vector<int> di = unravel(i, dims);
    for (size_t k = 0; k < perm.size(); ++k) pi[k] = di[perm[k]];
    const long long r = ravel(pi, new_dims);
    for (long long j = 0; j < n; ++j) {
      const std::vector<int> dj = unravel(j, dims);
      for (size_t k = 0; k < perm.size(); ++k) pj[k] = dj[perm[k]];
      out(r, ravel(pj, new_dims)) = m(i, j);
    }
  }
  return out;
}

SchmidtDecomposition schmidt_decompose(const cvec& v, int dim_a, int dim_b) {
  if (v.size() != static_cast<long long>(dim_a) * dim_b)
    throw DimensionMismatch("schmidt_decompose: dims do not match vector size");
  cmat m(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) m(a, b) = v(a * dim_b + b);
  Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  const rvec s = svd.singularValues();
  out.coefficients = s.array().square();
  out.left = svd.matrixU();
  out.right = svd.matrixV().conjugate();
  return out;
}

cvec max_entangled_vector(int d) {
  if (d <= 0) throw BadDims("max_entangled_vector: dimension must be positive");
  cvec v = cvec::Zero(static_cast<long long>(d) * d);
  for (int x = 0; x < d; ++x) v(static_cast<long long>(x) * d + x) = 1.0;
  return v;
}

std::vector<cmat> distinct_spectrum(const cmat& h, double cluster_tol) {
  EigenSystem es = eig_hermitian(h);
  const int d = static_cast<int>(es.eigenvalues.size());
  const double scale = d == 0 ? 0.0 : es.eigenvalues.cwiseAbs().maxCoeff();
  const double gap = cluster_tol * std::max(scale, 1e-300);
  std::vector<cmat> projectors;
  int start = 0;
  for (int i = 1; i <= d; ++i) {
    if (i == d || es.eigenvalues[i] - es.eigenvalues[i - 1] > gap) {
      cmat p = cmat::Zero(d, d);
      for (int k = start; k < i; ++k)
        p += es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
      projectors.push_back(std::move(p));
      start = i;
    }
  }
  return projectors;
}

cmat pinch(const cmat& h, const cmat& m, double cluster_tol) {
  require_hermitian(h, "pinch");
  if (h.rows() != m.rows() || h.cols() != m.cols())
    throw DimensionMismatch("pinch: size mismatch");
  cmat out = cmat::Zero(m.rows(), m.cols());
  for (const cmat& p : distinct_spectrum(h, cluster_tol)) out += p * m * p;
  return out;
}

}  // namespace qit
