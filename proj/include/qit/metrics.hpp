#pragma once

// Norms and distances on operators and sub-normalized states.

#include "qit/linalg.hpp"

namespace qit {

// Schatten p-norm of the singular values; p = inf via p <= 0 sentinel or
// schatten_norm_inf. Values p in (0,1) are computed but are not norms.
double schatten_norm(const cmat& l, double p);
double schatten_norm_inf(const cmat& l);
rvec singular_values(const cmat& l);

// Positive cone dual norm (||xi||_1 + |tr xi|) / 2 for Hermitian xi.
double dual_norm_plus(const cmat& xi);

// Generalized trace distance ||rho - tau||_+ between sub-normalized states.
double trace_distance(const cmat& rho, const cmat& tau);

// Uhlmann fidelity (tr |sqrt(rho) sqrt(tau)|)^2.
double fidelity(const cmat& rho, const cmat& tau);
double root_fidelity(const cmat& rho, const cmat& tau);
// Trace-deficit corrected fidelity for sub-normalized states.
double gen_fidelity(const cmat& rho, const cmat& tau);
// sqrt(1 - gen_fidelity), a metric on sub-normalized states.
double purified_distance(const cmat& rho, const cmat& tau);

}  // namespace qit
