#include <algorithm>
#include <cmath>
#include <functional>

#include "qit/smooth.hpp"

namespace qit {

namespace {

double lb_of(double base) { return base == 2.0 ? M_LN2 : std::log(base); }

double xexp(double l) { return l < -745.0 ? 0.0 : std::exp(l); }

}  // namespace

TypeClasses TypeClasses::from_pmf(const rvec& p) {
  TypeClasses tc;
  std::vector<double> lp;
  for (int i = 0; i < p.size(); ++i)
    if (p(i) > 0) lp.push_back(std::log(p(i)));
  tc.log_prob = Eigen::Map<rvec>(lp.data(), lp.size());
  tc.log_count = rvec::Zero(tc.log_prob.size());
  return tc;
}

TypeClasses TypeClasses::iid_bernoulli(double p, int n) {
  if (!(p > 0.0) || !(p < 1.0)) throw RangeError("iid_bernoulli: p must lie in (0,1)");
  TypeClasses tc;
  tc.log_prob = rvec(n + 1);
  tc.log_count = rvec(n + 1);
  for (int k = 0; k <= n; ++k) {
    tc.log_prob(k) = k * std::log(p) + (n - k) * std::log1p(-p);
    tc.log_count(k) = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  }
  return tc;
}

TypeClasses TypeClasses::iid_pmf(const rvec& p, int n) {
  const int d = static_cast<int>(p.size());
  if (d == 2) return iid_bernoulli(p(1), n);
  if (d > 4 || (d > 2 && n > 400)) throw TooLarge("iid_pmf: alphabet too large for type classes");
  TypeClasses tc;
  std::vector<double> lp, lc;
  std::vector<int> counts(d, 0);
  std::function<void(int, int)> rec = [&](int slot, int rest) {
    if (slot == d - 1) {
      counts[slot] = rest;
      double l = 0.0, c = std::lgamma(n + 1.0);
      bool dead = false;
      for (int i = 0; i < d; ++i) {
        if (counts[i] > 0 && p(i) <= 0) dead = true;
        l += counts[i] * (p(i) > 0 ? std::log(p(i)) : 0.0);
        c -= std::lgamma(counts[i] + 1.0);
      }
      if (!dead) {
        lp.push_back(l);
        lc.push_back(c);
      }
      return;
    }
    for (int k = 0; k <= rest; ++k) {
      counts[slot] = k;
      rec(slot + 1, rest - k);
    }
  };
  rec(0, n);
  tc.log_prob = Eigen::Map<rvec>(lp.data(), lp.size());
  tc.log_count = Eigen::Map<rvec>(lc.data(), lc.size());
  return tc;
}

double TypeClasses::total_mass() const {
  double m = 0.0;
  for (int k = 0; k < log_prob.size(); ++k) m += xexp(log_count(k) + log_prob(k));
  return m;
}

double classical_renyi_entropy(const TypeClasses& tc, double alpha, double base) {
  const double lb = lb_of(base);
  if (std::isinf(alpha)) return -tc.log_prob.maxCoeff() / lb;
  if (std::abs(alpha - 1.0) < 1e-9) {
    double h = 0.0;
    for (int k = 0; k < tc.log_prob.size(); ++k)
      h -= xexp(tc.log_count(k) + tc.log_prob(k)) * tc.log_prob(k);
    return h / lb;
  }
  double top = -kInf;
  for (int k = 0; k < tc.log_prob.size(); ++k)
    top = std::max(top, tc.log_count(k) + alpha * tc.log_prob(k));
  double acc = 0.0;
  for (int k = 0; k < tc.log_prob.size(); ++k)
    acc += xexp(tc.log_count(k) + alpha * tc.log_prob(k) - top);
  const double lse = top + std::log(acc);
  return lse / (1.0 - alpha) / lb;
}

namespace {

// sum_k m_k min(t, c p_k): the filled mass of the min-entropy water-filling.
double filled_mass(const TypeClasses& tc, double lt, double lc) {
  double m = 0.0;
  for (int k = 0; k < tc.log_prob.size(); ++k)
    m += xexp(tc.log_count(k) + std::min(lt, lc + tc.log_prob(k)));
  return m;
}

double filled_bhatt(const TypeClasses& tc, double lt, double lc) {
  double b = 0.0;
  for (int k = 0; k < tc.log_prob.size(); ++k)
    b += xexp(tc.log_count(k) + 0.5 * (std::min(lt, lc + tc.log_prob(k)) + tc.log_prob(k)));
  return b;
}

// Best Bhattacharyya coefficient achievable under the cap exp(lt).
double best_bhatt(const TypeClasses& tc, double lt) {
  if (filled_mass(tc, lt, 4000.0) <= 1.0) return filled_bhatt(tc, lt, 4000.0);
  double lo = -4000.0, hi = 4000.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (filled_mass(tc, lt, mid) > 1.0 ? hi : lo) = mid;
  }
  return filled_bhatt(tc, lt, lo);
}

}  // namespace

double classical_smooth_min_entropy(const TypeClasses& tc, double eps, double base) {
  if (!(eps >= 0.0) || eps >= 1.0) throw EpsTooLarge("classical_smooth_min_entropy: eps range");
  const double lp_max = tc.log_prob.maxCoeff();
  if (eps == 0.0) return -lp_max / lb_of(base);
  const double target = std::sqrt(std::max(0.0, 1.0 - eps * eps));
  // The optimal smoothed state is a capped water-filling p~ = min(t, c p);
  // best_bhatt(t) is nondecreasing, so bisect the cap level.
  double lo = lp_max - 1400.0, hi = lp_max;
  if (best_bhatt(tc, lo) >= target) return -lo / lb_of(base);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (best_bhatt(tc, mid) >= target ? hi : lo) = mid;
  }
  return -hi / lb_of(base);
}

namespace {

// Max-entropy KKT point in amplitude coordinates: x_k ∝ (a_k - t)_+ with
// a_k = sqrt(p_k). All three accumulators run over combined logs.
struct MaxEval {
  double ratio = 0.0;  // <a, u>_m / ||u||_m, the optimizer's Bhattacharyya
  double objective = 0.0;  // sum m u / ||u||_m, its amplitude sum
};

MaxEval max_eval(const TypeClasses& tc, double log_t) {
  double top_au = -kInf, top_uu = -kInf, top_u = -kInf;
  const int nk = static_cast<int>(tc.log_prob.size());
  std::vector<double> e_au(nk, -kInf), e_uu(nk, -kInf), e_u(nk, -kInf);
  for (int k = 0; k < nk; ++k) {
    const double la = 0.5 * tc.log_prob(k);
    if (la <= log_t) continue;
    const double lu = la + std::log1p(-std::exp(log_t - la));  // log(a - t)
    e_au[k] = tc.log_count(k) + la + lu;
    e_uu[k] = tc.log_count(k) + 2.0 * lu;
    e_u[k] = tc.log_count(k) + lu;
    top_au = std::max(top_au, e_au[k]);
    top_uu = std::max(top_uu, e_uu[k]);
    top_u = std::max(top_u, e_u[k]);
  }
  MaxEval out;
  if (std::isinf(top_uu)) return out;
  double s_au = 0.0, s_uu = 0.0, s_u = 0.0;
  for (int k = 0; k < nk; ++k) {
    s_au += xexp(e_au[k] - top_au);
    s_uu += xexp(e_uu[k] - top_uu);
    s_u += xexp(e_u[k] - top_u);
  }
  const double l_norm = 0.5 * (top_uu + std::log(s_uu));
  out.ratio = xexp(top_au + std::log(s_au) - l_norm);
  out.objective = xexp(top_u + std::log(s_u) - l_norm);
  return out;
}

}  // namespace

double classical_smooth_max_entropy(const TypeClasses& tc, double eps, double base) {
  if (!(eps >= 0.0) || eps >= 1.0) throw EpsTooLarge("classical_smooth_max_entropy: eps range");
  const double lb = lb_of(base);
  if (eps == 0.0) return classical_renyi_entropy(tc, 0.5, base);
  const double target = std::sqrt(std::max(0.0, 1.0 - eps * eps));

  // Corner: mass can concentrate on the most likely class alone.
  int top_class = 0;
  tc.log_prob.maxCoeff(&top_class);
  const double lp_max = tc.log_prob(top_class);
  if (tc.log_count(top_class) + lp_max >= 2.0 * std::log(target))
    return 2.0 * (std::log(target) - 0.5 * lp_max) / lb;

  // ratio(t) decreases from 1 (t -> 0) to the single-class corner as the
  // threshold t grows; bisect for ratio = target.
  double hi = 0.5 * lp_max;       // t just below a_max: only the top class
  double lo = 0.5 * lp_max - 1400.0;  // effectively t -> 0
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (max_eval(tc, mid).ratio >= target ? lo : hi) = mid;
  }
  const MaxEval at = max_eval(tc, lo);
  return 2.0 * std::log(std::max(at.objective, 1e-300)) / lb;
}

}  // namespace qit
