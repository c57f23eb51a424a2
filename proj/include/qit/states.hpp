#pragma once

// Density operators with labeled subsystems, classical-quantum structure,
// purification, channels and their representations.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qit/linalg.hpp"
#include "qit/rng.hpp"

namespace qit {

class DensityOperator {
 public:
  // Single-subsystem constructor (label "A").
  explicit DensityOperator(cmat m);
  DensityOperator(cmat m, std::vector<int> dims, std::vector<std::string> labels = {},
                  std::vector<bool> classical = {});

  const cmat& matrix() const { return m_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<bool>& classical_mask() const { return classical_; }

  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace().real(); }
  bool normalized() const { return std::abs(trace() - 1.0) <= Tol::ttol; }
  int subsystem_index(const std::string& label) const;
  int subsystem_dim(const std::string& label) const;

  // Marginal on the listed subsystems (their relative order is preserved).
  DensityOperator marginal(const std::vector<std::string>& keep) const;
  // Reorder subsystems so the listed ones come first (in the given order).
  DensityOperator reorder_front(const std::vector<std::string>& front) const;
  // Dimension product of a label set.
  int dim_of(const std::vector<std::string>& labels) const;

  static DensityOperator maximally_mixed(int d, const std::string& label = "A");
  static DensityOperator maximally_entangled(int d, const std::string& a = "A",
                                             const std::string& b = "B");
  static DensityOperator pure(const cvec& v, std::vector<int> dims,
                              std::vector<std::string> labels = {});
  static DensityOperator classical(const rvec& pmf, const std::string& label = "X");

 private:
  cmat m_;
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  std::vector<bool> classical_;
  void validate() const;
};

class Channel {
 public:
  Channel(std::vector<cmat> kraus, bool minimize_rank = true);

  const std::vector<cmat>& kraus() const { return kraus_; }
  int dim_in() const { return d_in_; }
  int dim_out() const { return d_out_; }
  bool trace_preserving() const { return tp_; }
  bool trace_non_increasing() const { return tni_; }
  bool unital() const { return unital_; }
  bool sub_unital() const { return sub_unital_; }

  cmat apply(const cmat& x) const;
  cmat apply_adjoint(const cmat& y) const;

  static Channel identity(int d);
  static Channel from_unitary(const cmat& u);
  static Channel depolarizing(int d, double p);
  static Channel sample_cptp(Rng& rng, int d_in, int d_out, int d_env);

 private:
  std::vector<cmat> kraus_;
  int d_in_ = 0, d_out_ = 0;
  bool tp_ = false, tni_ = false, unital_ = false, sub_unital_ = false;
};

struct ChoiMatrix {
  cmat matrix;  // on A' ⊗ B, unnormalized (trace = d_A for TP maps)
  int dim_in = 0;
  int dim_out = 0;
};

class Povm {
 public:
  Povm(std::vector<cmat> effects, std::vector<std::string> outcomes = {});
  const std::vector<cmat>& effects() const { return effects_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  int dim() const { return static_cast<int>(effects_.empty() ? 0 : effects_[0].rows()); }
  // Born rule weights tr(rho M_x).
  rvec outcome_weights(const cmat& rho) const;

  static Povm computational(int d);
  static Povm from_basis(const cmat& basis_columns);

 private:
  std::vector<cmat> effects_;
  std::vector<std::string> outcomes_;
};

// Rank-one extension whose partial trace over the ancilla recovers rho.
// The ancilla dimension equals rank(rho); labels gain a primed copy.
DensityOperator purify(const DensityOperator& rho);
// Purifying vector of a psd matrix (ancilla dimension = rank).
cvec purification_vector(const cmat& rho);

// Apply a channel acting on one labeled subsystem (identity elsewhere).
DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho,
                              const std::string& subsystem);
// Whole-state application.
DensityOperator apply_channel(const Channel& ch, const DensityOperator& rho);

ChoiMatrix choi_of_channel(const Channel& ch);
Channel channel_of_choi(const ChoiMatrix& choi);
// Choi matrix of an arbitrary Kraus list (no CP check needed: Kraus => CP).
ChoiMatrix choi_of_kraus(const std::vector<cmat>& kraus, int d_in, int d_out);

struct Stinespring {
  cmat isometry_or_contraction;  // d_env * d_out rows, d_in cols; row (k, b)
  int dim_env = 0;
};
Stinespring stinespring(const Channel& ch);

// Quantum -> classical measurement map of a POVM.
Channel measurement_channel(const Povm& povm);

// Classical-quantum state sum_x w_x |x><x| ⊗ rho_x.
DensityOperator cq_state(const rvec& weights, const std::vector<cmat>& conditionals,
                         const std::string& classical_label = "X",
                         const std::string& quantum_label = "A");
// Inverse of cq_state for a designated classical subsystem.
std::pair<rvec, std::vector<cmat>> cq_split(const DensityOperator& rho,
                                            const std::string& classical_subsystem);

}  // namespace qit
