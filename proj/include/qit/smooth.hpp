#pragma once

// Epsilon-balls, smooth min/max entropies, smooth max-divergence, explicit
// smoothing constructions and AEP bounds.

#include <optional>

#include "qit/entropies.hpp"

namespace qit {

enum class SmoothConstruction { sdp, lemma_g, diagonal };

struct SmoothingWitness {
  cmat rho_smoothed;         // sub-normalized, on the stated support
  double achieved_distance = 0.0;
  SmoothConstruction construction = SmoothConstruction::sdp;
  bool support_ok = true;    // witness passes the supp(rho_A ⊗ rho_B) check
};

struct SmoothEntropyResult {
  double value = 0.0;
  double eps = 0.0;
  double base = 2.0;
  SmoothingWitness witness;
  double sdp_gap = 0.0;
  double bracket_lo = 0.0;  // certified interval around the value
  double bracket_hi = 0.0;
};

SmoothEntropyResult smooth_min_entropy(const cmat& rho_ab, int dim_a, int dim_b, double eps,
                                       double base = 2.0, const SdpOptions& opts = {});
SmoothEntropyResult smooth_max_entropy(const cmat& rho_ab, int dim_a, int dim_b, double eps,
                                       double base = 2.0, const SdpOptions& opts = {});

struct SmoothDivergenceResult {
  double value = 0.0;  // D_max^eps
  double lemma_g_value = 0.0;  // feasible upper bound from the G construction
  SmoothingWitness witness;
  double sdp_gap = 0.0;
};
SmoothDivergenceResult smooth_max_divergence(const cmat& rho, const cmat& sigma, double eps,
                                             double base = 2.0, const SdpOptions& opts = {});

// G = Lambda^{1/2} (Lambda + Sigma)^{-1/2} with Lambda = base^lambda sigma;
// returns rho~ = G rho G^dag and the guaranteed distance bound.
struct SmoothingOperatorResult {
  SmoothingWitness witness;
  double trace_sigma_plus = 0.0;   // tr of the positive part
  double distance_bound = 0.0;     // sqrt(2 tr Sigma - (tr Sigma)^2)
};
SmoothingOperatorResult smoothing_operator(const cmat& rho, const cmat& sigma, double lambda,
                                           double base = 2.0);

// g(eps) = -log(1 - sqrt(1 - eps^2)); optional loose variant log(2/eps^2).
double smoothing_g(double eps, double base = 2.0, bool loose = false);

// ------------------------------------------------------------------
// Exact diagonal (classical) smoothing over weighted probability classes.
// Classes carry log-probability and log-multiplicity so iid powers at large n
// stay representable.

struct TypeClasses {
  rvec log_prob;   // natural log of the per-outcome probability
  rvec log_count;  // natural log of the multiplicity
  static TypeClasses from_pmf(const rvec& p);
  static TypeClasses iid_bernoulli(double p, int n);
  static TypeClasses iid_pmf(const rvec& p, int n);  // small alphabets
  double total_mass() const;
};

// Smooth min-entropy of a classical source with trivial side information,
// solved exactly through the KKT water-filling of the diagonal program.
double classical_smooth_min_entropy(const TypeClasses& tc, double eps, double base = 2.0);
// Smooth max-entropy counterpart (active-set KKT enumeration).
double classical_smooth_max_entropy(const TypeClasses& tc, double eps, double base = 2.0);

// Unsmoothed classical Renyi entropy of the classes.
double classical_renyi_entropy(const TypeClasses& tc, double alpha, double base = 2.0);

// ------------------------------------------------------------------
// AEP table.

struct AepRow {
  int n = 0;
  double lower = 0.0;           // per-copy Renyi lower bound on H_min^eps / n
  std::optional<double> exact;  // per-copy smooth min-entropy when computable
  double upper = 0.0;           // per-copy min<=max converse bound
  double second_order = 0.0;    // H + sqrt(V/n) Phi^{-1}(eps^2)
};

struct AepOptions {
  double converse_eps = 0.4;  // smoothing parameter of the max-entropy side
  int alpha_grid = 60;        // log-spaced alpha grid size for the lower bound
  double base = 2.0;
};

// Classical source with trivial side information (exact at any listed n).
std::vector<AepRow> aep_rates_classical(const rvec& pmf, double eps, const std::vector<int>& n_list,
                                        const AepOptions& opts = {});
// Quantum states: exact entries only while the smoothing SDP fits the cap.
std::vector<AepRow> aep_rates_quantum(const cmat& rho_ab, int dim_a, int dim_b, double eps,
                                      const std::vector<int>& n_list, const AepOptions& opts = {});

}  // namespace qit
