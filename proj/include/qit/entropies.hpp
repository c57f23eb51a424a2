#pragma once

// Conditional Renyi entropies (four families), von Neumann conditional
// entropy, min-/max-entropy SDPs, guessing probability.

#include <optional>

#include "qit/divergences.hpp"
#include "qit/sdp.hpp"
#include "qit/states.hpp"

namespace qit {

enum class EntropyFamily { petz, sandwiched };
enum class Arrow { up, down };
enum class EntropyMethod { closed_form, sdp, iterative };

struct EntropyResult {
  double value = 0.0;  // in the requested log base (+-inf possible)
  EntropyFamily family = EntropyFamily::sandwiched;
  Arrow arrow = Arrow::up;
  double alpha = 1.0;
  double base = 2.0;
  EntropyMethod method = EntropyMethod::closed_form;
  cmat sigma_witness;                 // optimal (or chosen) sigma_B
  double stationarity_residual = 0.0; // iterative path only
  double restart_spread = 0.0;        // spread of converged restart values
  double sdp_gap = 0.0;               // duality gap when method == sdp
  double sdp_primal = 0.0;            // certified bracket in the value domain
  double sdp_dual = 0.0;
  std::optional<cmat> dual_witness;   // SDP dual block (X_AB)
};

struct IterativeOptions {
  double stationarity_tol = 1e-9;
  int max_iters = 800;
  int restarts = 5;
  std::uint64_t seed = 20240901;
};

// Low-level interface on an A ⊗ B ordered matrix.
EntropyResult conditional_renyi(const cmat& rho_ab, int dim_a, int dim_b, EntropyFamily family,
                                Arrow arrow, double alpha, double base = 2.0,
                                const IterativeOptions& iter_opts = {},
                                const SdpOptions& sdp_opts = {});

// Label-partition interface: `a_labels` names the A side, the rest is B.
EntropyResult conditional_renyi(const DensityOperator& rho, const std::vector<std::string>& a_labels,
                                EntropyFamily family, Arrow arrow, double alpha, double base = 2.0,
                                const IterativeOptions& iter_opts = {},
                                const SdpOptions& sdp_opts = {});

double von_neumann_entropy(const cmat& rho, double base = 2.0);
double von_neumann_conditional(const cmat& rho_ab, int dim_a, int dim_b, double base = 2.0);
double von_neumann_conditional(const DensityOperator& rho, const std::vector<std::string>& a_labels,
                               double base = 2.0);

// exp(-H_min) SDP with primal witness sigma_B and dual witness X_AB.
EntropyResult min_entropy(const cmat& rho_ab, int dim_a, int dim_b, double base = 2.0,
                          const SdpOptions& opts = {});
// exp(H_max) via the root-fidelity SDP.
EntropyResult max_entropy(const cmat& rho_ab, int dim_a, int dim_b, double base = 2.0,
                          const SdpOptions& opts = {});

struct GuessingResult {
  double p_guess = 0.0;
  std::vector<cmat> povm;  // one effect per classical symbol
  double sdp_gap = 0.0;
};
// rho must be classical on its first subsystem (X), quantum on the rest.
GuessingResult guessing_probability(const DensityOperator& rho_xb,
                                    const std::string& classical_label = "X",
                                    const SdpOptions& opts = {});

}  // namespace qit
