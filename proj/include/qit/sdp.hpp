#pragma once

// Small dense semidefinite programming with primal/dual certificates.
//
// Standard form handled by the core solver (real symmetric blocks):
//     min  sum_j <C_j, X_j>   s.t.  sum_j <A_ij, X_j> = b_i,  X_j >= 0,
// with dual
//     max  b^T y              s.t.  C_j - sum_i y_i A_ij = S_j >= 0.
//
// The public problem type uses complex Hermitian blocks; they are solved via
// the standard 2d x 2d real-symmetric realification and de-realified on
// return. Inequalities enter through explicit slack blocks.

#include <map>
#include <string>
#include <vector>

#include "qit/linalg.hpp"

namespace qit {

enum class SdpStatus { optimal, max_iter, infeasible };

struct SdpOptions {
  double gap_tol = 1e-8;   // mixed absolute/relative duality gap
  double feas_tol = 1e-8;  // primal/dual residual norms (scaled)
  int max_iter = 200;
  long long dim_cap = 4096;  // total real variable parameters
  bool verbose = false;
};

// ---------------------------------------------------------------------------
// Real standard-form core.

struct RealSdp {
  std::vector<int> block_dims;
  std::vector<rmat> objective;  // C_j per block
  // Constraint i: sparse list of (block index, coefficient matrix) plus rhs.
  struct Row {
    std::vector<std::pair<int, rmat>> terms;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  long long total_params() const;
};

struct RealSdpSolution {
  SdpStatus status = SdpStatus::max_iter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;     // <X, S>
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::vector<rmat> x;
  std::vector<rmat> s;
  rvec y;
};

RealSdpSolution solve_real_sdp(const RealSdp& problem, const SdpOptions& opts = {});

// ---------------------------------------------------------------------------
// Complex Hermitian modeling layer.

// Realification H(d) -> S(2d): [[Re, -Im], [Im, Re]].
rmat realify(const cmat& h);
cmat derealify(const rmat& s);

class SdpProblem {
 public:
  enum class Sense { minimize, maximize };

  explicit SdpProblem(Sense sense = Sense::minimize) : sense_(sense) {}

  // Hermitian psd variable block; returns the block handle.
  int add_block(const std::string& name, int dim);
  // Objective contribution <c, X_block> (c Hermitian).
  void set_objective(int block, const cmat& c);
  // One real-valued linear equality sum_b <coeff_b, X_b> = rhs.
  void add_scalar_equality(const std::map<int, cmat>& coeffs, double rhs);
  // Hermitian-valued equality sum_b L_b(X_b) = rhs, expanded over a Hermitian
  // coordinate basis of the target space. Each term maps the block variable
  // into the target space through a callback producing the coefficient matrix
  // of the adjoint map applied to a basis element.
  using TermGenerator = std::function<cmat(const cmat& basis_element)>;
  void add_matrix_equality(const std::vector<std::pair<int, TermGenerator>>& terms,
                           const cmat& rhs);

  int block_dim(int block) const { return block_dims_[block]; }
  int num_blocks() const { return static_cast<int>(block_dims_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  long long total_real_params() const;

  // JSON dump/load of the assembled problem (debugging interface).
  std::string dump_json() const;
  static SdpProblem load_json(const std::string& text);

  struct Solution {
    SdpStatus status = SdpStatus::max_iter;
    double value = 0.0;        // objective in the problem's sense
    double primal_value = 0.0; // minimization-form primal
    double dual_value = 0.0;   // minimization-form dual (lower bound)
    double duality_gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    std::vector<cmat> x;  // per block
    std::vector<cmat> s;  // dual slacks per block
    rvec y;               // equality multipliers (row order)
  };

  Solution solve(const SdpOptions& opts = {}) const;

  // Reassemble a Hermitian matrix from the multipliers of a matrix equality
  // (identified by its first row index and dimension).
  static cmat assemble_dual_block(const rvec& y, int first_row, int dim);

  // Hermitian coordinate basis of H(d): d^2 elements, ordered diagonals
  // first, then (re, im) pairs for each i < j. <E_k, M> recovers the real
  // coordinates of M.
  static std::vector<cmat> hermitian_basis(int dim);

 private:
  Sense sense_;
  std::vector<int> block_dims_;
  std::vector<std::string> block_names_;
  std::vector<cmat> objective_;
  struct Row {
    std::vector<std::pair<int, cmat>> terms;
    double rhs = 0.0;
  };
  std::vector<Row> rows_;
};

}  // namespace qit
