#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qit/entropies.hpp"
#include "qit/metrics.hpp"
#include "support.hpp"

using namespace qit;

namespace {

double centropy(const cmat& rho_ab, int da, int db, EntropyFamily fam, Arrow arrow, double a) {
  return conditional_renyi(rho_ab, da, db, fam, arrow, a).value;
}

cmat random_pure_tripartite(Rng& rng, int da, int db, int dc) {
  const cvec v = rng.pure_state(da * db * dc);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("trivial B: fully mixed gives log d for every variant") {
  const cmat pi3 = cmat::Identity(3, 3) / 3.0;
  for (EntropyFamily fam : {EntropyFamily::petz, EntropyFamily::sandwiched}) {
    for (Arrow arrow : {Arrow::up, Arrow::down}) {
      for (double a : {0.3, 0.5, 1.0, 1.7, 2.0}) {
        CHECK(centropy(pi3, 3, 1, fam, arrow, a) == doctest::Approx(std::log2(3)).epsilon(1e-10));
      }
    }
  }
  CHECK(centropy(pi3, 3, 1, EntropyFamily::sandwiched, Arrow::up,
                 std::numeric_limits<double>::infinity()) ==
        doctest::Approx(std::log2(3)).epsilon(1e-10));
}

TEST_CASE("min-entropy SDP examples") {
  // pi_A ⊗ sigma_B -> log d_A.
  Rng rng(1);
  const cmat prod = tensor(cmat::Identity(2, 2) / 2.0, rng.density(3, 3));
  auto r1 = min_entropy(prod, 2, 3);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-7));

  // Maximally entangled 2-qubit: -1 bit with certificates sigma = id, X = 2 psi.
  const cmat psi = DensityOperator::maximally_entangled(2).matrix();
  auto r2 = min_entropy(psi, 2, 2);
  CHECK(r2.value == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r2.sdp_gap <= 1e-7);
  CHECK(max_abs(r2.sigma_witness - cmat::Identity(2, 2)) <= 1e-5);
  CHECK(max_abs(*r2.dual_witness - 2.0 * psi) <= 1e-5);

  // Classical (1/2, 1/4, 1/4) with trivial B: 1 bit.
  auto r3 = min_entropy(diag({0.5, 0.25, 0.25}), 3, 1);
  CHECK(r3.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("max-entropy SDP examples and duality with min-entropy") {
  // pi_A with trivial B: log d.
  auto r1 = max_entropy(cmat::Identity(3, 3) / 3.0, 3, 1);
  CHECK(r1.value == doctest::Approx(std::log2(3)).epsilon(1e-6));

  // Pure product state: 0.
  Rng rng(2);
  const cvec a = rng.pure_state(2), b = rng.pure_state(3);
  const cvec ab = tensor_vec(a, b);
  auto r2 = max_entropy(cmat(ab * ab.adjoint()), 2, 3);
  CHECK(r2.value == doctest::Approx(0.0).epsilon(1e-6));

  // Maximally entangled 2-qubit: -1 bit (dual to H_min(A) = 1 on trivial C).
  const cmat psi = DensityOperator::maximally_entangled(2).matrix();
  auto r3 = max_entropy(psi, 2, 2);
  CHECK(r3.value == doctest::Approx(-1.0).epsilon(1e-6));

  // Purification duality H_max(A|B) = -H_min(A|C) on random mixed states.
  for (int t = 0; t < 5; ++t) {
    DensityOperator rho(rng.density(4, 3), {2, 2}, {"A", "B"});
    DensityOperator pur = purify(rho);  // adds B'
    auto hmax = max_entropy(rho.matrix(), 2, 2);
    DensityOperator rho_ac = pur.marginal({"A", "B'"});
    auto hmin = min_entropy(rho_ac.matrix(), 2, rho_ac.dim() / 2);
    CHECK(hmax.value == doctest::Approx(-hmin.value).epsilon(1e-6));
  }

  // Alberti-form feasible point upper bounds the max-entropy: Y near the
  // support projector gives H0-up >= H_max.
  DensityOperator rho(rng.density(4, 2), {2, 2});
  const cmat y = support_projector(rho.matrix()) + 1e-6 * cmat::Identity(4, 4);
  const double alberti = (rho.matrix() * generalized_inverse(y)).trace().real() *
                         schatten_norm_inf(partial_trace(y, {2, 2}, {1}));
  auto hm = max_entropy(rho.matrix(), 2, 2);
  CHECK(std::log2(alberti) >= hm.value - 1e-6);
}

TEST_CASE("von Neumann conditional entropy") {
  const cmat psi = DensityOperator::maximally_entangled(2).matrix();
  CHECK(von_neumann_conditional(psi, 2, 2) == doctest::Approx(-1.0).epsilon(1e-10));

  Rng rng(3);
  const cmat prod = tensor(cmat::Identity(2, 2) / 2.0, rng.density(3, 3));
  CHECK(von_neumann_conditional(prod, 2, 3) == doctest::Approx(1.0).epsilon(1e-10));

  // All four families coincide at alpha = 1.
  const cmat rho = rng.density(6, 6);
  const double vn = von_neumann_conditional(rho, 2, 3);
  for (EntropyFamily fam : {EntropyFamily::petz, EntropyFamily::sandwiched})
    for (Arrow arrow : {Arrow::up, Arrow::down})
      CHECK(centropy(rho, 2, 3, fam, arrow, 1.0) == doctest::Approx(vn).epsilon(1e-9));
}

TEST_CASE("petz-up closed form matches a direct optimization") {
  Rng rng(4);
  const cmat rho = rng.density(6, 6);
  for (double a : {0.4, 0.7, 1.5, 2.0}) {
    auto res = conditional_renyi(rho, 2, 3, EntropyFamily::petz, Arrow::up, a);
    // The witness sigma attains the claimed value through the divergence.
    const double via_witness =
        -renyi_divergence(rho, tensor(cmat::Identity(2, 2), res.sigma_witness),
                          RenyiOrder::petz(a))
             .value;
    CHECK(res.value == doctest::Approx(via_witness).epsilon(1e-9));
    // And beats a few random candidates.
    for (int t = 0; t < 5; ++t) {
      const double other =
          -renyi_divergence(rho, tensor(cmat::Identity(2, 2), rng.density(3, 3)),
                            RenyiOrder::petz(a))
               .value;
      CHECK(res.value >= other - 1e-9);
    }
  }
}

TEST_CASE("sandwiched-up iterative path agrees with SDP anchors") {
  Rng rng(5);
  for (int t = 0; t < 3; ++t) {
    const cmat rho = rng.density(4, 4);
    // Large alpha approaches the min-entropy.
    auto hmin = min_entropy(rho, 2, 2);
    IterativeOptions io;
    auto h64 = conditional_renyi(rho, 2, 2, EntropyFamily::sandwiched, Arrow::up, 64.0);
    CHECK(std::abs(h64.value - hmin.value) <= 0.05);
    CHECK(h64.value >= hmin.value - 1e-7);  // monotone in alpha
    // Near 1/2 approaches the max-entropy.
    auto hmax = max_entropy(rho, 2, 2);
    auto h051 = conditional_renyi(rho, 2, 2, EntropyFamily::sandwiched, Arrow::up, 0.52);
    CHECK(std::abs(h051.value - hmax.value) <= 0.1);
    CHECK(h051.value <= hmax.value + 1e-7);
  }
}

TEST_CASE("Arimoto form for classical-classical states") {
  Rng rng(6);
  const int nx = 3, ny = 2;
  rvec joint(nx * ny);
  double tot = 0.0;
  for (int i = 0; i < joint.size(); ++i) tot += joint(i) = rng.uniform() + 0.05;
  joint /= tot;
  cmat rho = cmat::Zero(nx * ny, nx * ny);
  for (int i = 0; i < joint.size(); ++i) rho(i, i) = joint(i);
  for (double a : {0.4, 0.8, 1.6, 3.0}) {
    // Arimoto: (a/(1-a)) log sum_y p(y) (sum_x p(x|y)^a)^{1/a}.
    double outer = 0.0;
    for (int y = 0; y < ny; ++y) {
      double py = 0.0;
      for (int x = 0; x < nx; ++x) py += joint(x * ny + y);
      double inner = 0.0;
      for (int x = 0; x < nx; ++x) inner += std::pow(joint(x * ny + y) / py, a);
      outer += py * std::pow(inner, 1.0 / a);
    }
    const double arimoto = a / (1.0 - a) * std::log2(outer);
    CHECK(centropy(rho, nx, ny, EntropyFamily::petz, Arrow::up, a) ==
          doctest::Approx(arimoto).epsilon(1e-9));
  }
}

TEST_CASE("duality triple on random pure tripartite states") {
  Rng rng(7);
  IterativeOptions io;
  for (int t = 0; t < 3; ++t) {
    const cmat rho_abc = random_pure_tripartite(rng, 2, 2, 2);
    const cmat rho_ab = partial_trace(rho_abc, {2, 2, 2}, {0, 1});
    const cmat rho_ac = partial_trace(rho_abc, {2, 2, 2}, {0, 2});

    // (a) petz-down: alpha + beta = 2.
    for (double a : {0.6, 1.5, 2.0}) {
      const double lhs = centropy(rho_ab, 2, 2, EntropyFamily::petz, Arrow::down, a);
      const double rhs = centropy(rho_ac, 2, 2, EntropyFamily::petz, Arrow::down, 2.0 - a);
      CHECK(std::abs(lhs + rhs) <= 1e-8);
    }
    // (b) sandwiched-up: 1/alpha + 1/beta = 2.
    for (double a : {0.75, 1.5, 2.0}) {
      const double beta = 1.0 / (2.0 - 1.0 / a);
      const double lhs = centropy(rho_ab, 2, 2, EntropyFamily::sandwiched, Arrow::up, a);
      const double rhs = centropy(rho_ac, 2, 2, EntropyFamily::sandwiched, Arrow::up, beta);
      CHECK(std::abs(lhs + rhs) <= 1e-6);
    }
    {  // alpha = inf pairs with beta = 1/2 through the two SDPs.
      const double lhs = min_entropy(rho_ab, 2, 2).value;
      const double rhs = max_entropy(rho_ac, 2, 2).value;
      CHECK(std::abs(lhs + rhs) <= 1e-6);
    }
    // (c) petz-up with sandwiched-down: alpha * beta = 1.
    for (double a : {0.6, 0.75, 1.5, 2.0}) {
      const double lhs = centropy(rho_ab, 2, 2, EntropyFamily::petz, Arrow::up, a);
      const double rhs = centropy(rho_ac, 2, 2, EntropyFamily::sandwiched, Arrow::down, 1.0 / a);
      CHECK(std::abs(lhs + rhs) <= 1e-8);
    }
  }
}

TEST_CASE("family ordering and dual inequalities on random states") {
  Rng rng(8);
  for (int t = 0; t < 3; ++t) {
    const cmat rho = rng.density(4, 4);
    for (double a : {0.6, 0.8, 1.3, 2.0}) {
      const double su = centropy(rho, 2, 2, EntropyFamily::sandwiched, Arrow::up, a);
      const double sd = centropy(rho, 2, 2, EntropyFamily::sandwiched, Arrow::down, a);
      const double pu = centropy(rho, 2, 2, EntropyFamily::petz, Arrow::up, a);
      const double pd = centropy(rho, 2, 2, EntropyFamily::petz, Arrow::down, a);
      CHECK(su >= sd - 1e-7);
      CHECK(sd >= pd - 1e-9);
      CHECK(su >= pu - 1e-7);
      CHECK(pu >= pd - 1e-9);
    }
    // Corollary chain: H-sand-up_alpha <= H-petz-up_{2-1/alpha}.
    for (double a : {0.6, 1.5, 2.0}) {
      const double lhs = centropy(rho, 2, 2, EntropyFamily::sandwiched, Arrow::up, a);
      CHECK(lhs <= centropy(rho, 2, 2, EntropyFamily::petz, Arrow::up, 2.0 - 1.0 / a) + 1e-6);
      CHECK(lhs <= centropy(rho, 2, 2, EntropyFamily::sandwiched, Arrow::down, 2.0 - 1.0 / a) + 1e-6);
      const double sd = centropy(rho, 2, 2, EntropyFamily::sandwiched, Arrow::down, a);
      CHECK(sd <= centropy(rho, 2, 2, EntropyFamily::petz, Arrow::down, 2.0 - 1.0 / a) + 1e-9);
    }
  }
}

TEST_CASE("value range bounds and separability") {
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    const cmat rho = rng.density(6, 6);
    const cmat rho_a = partial_trace(rho, {2, 3}, {0});
    const cmat rho_b = partial_trace(rho, {2, 3}, {1});
    const double lo = -std::log2(std::min(eig_hermitian(rho_a).rank(), eig_hermitian(rho_b).rank()));
    const double hi = std::log2(eig_hermitian(rho_a).rank());
    for (double a : {0.6, 1.4, 2.0}) {
      const double v = centropy(rho, 2, 3, EntropyFamily::sandwiched, Arrow::up, a);
      CHECK(v >= lo - 1e-6);
      CHECK(v <= hi + 1e-6);
    }
  }
  // Separable states keep H-infinity-down nonnegative.
  for (int t = 0; t < 5; ++t) {
    rvec w = rng.pmf(3);
    cmat rho = cmat::Zero(6, 6);
    for (int k = 0; k < 3; ++k) rho += w(k) * tensor(rng.density(2, 2), rng.density(3, 3));
    const double h = centropy(rho, 2, 3, EntropyFamily::sandwiched, Arrow::down,
                              std::numeric_limits<double>::infinity());
    CHECK(h >= -1e-9);
  }
}

TEST_CASE("data processing and additivity") {
  Rng rng(10);
  for (int t = 0; t < 3; ++t) {
    const cmat rho = rng.density(4, 4);
    Channel ch = Channel::sample_cptp(rng, 2, 2, 2);
    // Apply on B.
    cmat mapped = cmat::Zero(4, 4);
    for (const auto& e : ch.kraus()) {
      const cmat big = tensor(cmat::Identity(2, 2), e);
      mapped += big * rho * big.adjoint();
    }
    for (double a : {0.6, 1.5, 2.0}) {
      CHECK(centropy(mapped, 2, 2, EntropyFamily::sandwiched, Arrow::up, a) >=
            centropy(rho, 2, 2, EntropyFamily::sandwiched, Arrow::up, a) - 1e-6);
      CHECK(centropy(mapped, 2, 2, EntropyFamily::petz, Arrow::up, a) >=
            centropy(rho, 2, 2, EntropyFamily::petz, Arrow::up, a) - 1e-8);
    }
    // Sub-unital CPTP map on A: isometric embedding into a qutrit followed by
    // computational dephasing (adjoint maps id to a projector <= id).
    const cmat viso = rng.haar_isometry(3, 2);
    cmat embedded;
    {
      const cmat big = tensor(viso, cmat::Identity(2, 2));
      embedded = big * rho * big.adjoint();
      cmat deph = cmat::Zero(6, 6);
      for (int k = 0; k < 3; ++k) {
        cmat pk = cmat::Zero(3, 3);
        pk(k, k) = 1.0;
        const cmat pkb = tensor(pk, cmat::Identity(2, 2));
        deph += pkb * embedded * pkb;
      }
      embedded = deph;
    }
    for (double a : {0.7, 1.5}) {
      CHECK(centropy(embedded, 3, 2, EntropyFamily::petz, Arrow::up, a) >=
            centropy(rho, 2, 2, EntropyFamily::petz, Arrow::up, a) - 1e-6);
    }
  }

  // Additivity of sandwiched-up on product states.
  const cmat r1 = rng.density(4, 3);
  const cmat r2 = rng.density(4, 2);
  const cmat prod = permute_subsystems(tensor(r1, r2), {2, 2, 2, 2}, {0, 2, 1, 3});
  for (double a : {0.75, 1.5, 2.0}) {
    const double joint = centropy(prod, 4, 4, EntropyFamily::sandwiched, Arrow::up, a);
    const double sum = centropy(r1, 2, 2, EntropyFamily::sandwiched, Arrow::up, a) +
                       centropy(r2, 2, 2, EntropyFamily::sandwiched, Arrow::up, a);
    CHECK(joint == doctest::Approx(sum).epsilon(5e-6));
  }
}

TEST_CASE("chain rules on both sign branches") {
  Rng rng(11);
  auto h_up = [&](const cmat& rho, int da, int db, double a) {
    return centropy(rho, da, db, EntropyFamily::sandwiched, Arrow::up, a);
  };
  for (int t = 0; t < 3; ++t) {
    const cvec v = rng.pure_state(8);
    cmat rho = cmat(v * v.adjoint());
    rho = 0.9 * rho + 0.1 * tensor(rng.density(2, 2), rng.density(4, 4));
    // (alpha-1)(beta-1)(gamma-1) > 0: alpha from beta, gamma > 1.
    {
      // alpha solves alpha/(alpha-1) = beta/(beta-1) + gamma/(gamma-1) = 5.
      const double beta = 1.5, gamma = 2.0;
      const double lhs = h_up(rho, 4, 2, 5.0 / 4.0);           // H(AB|C)
      const double rhs1 = h_up(rho, 2, 4, beta);               // H(A|BC)
      const cmat rho_bc = partial_trace(rho, {2, 2, 2}, {1, 2});
      const double rhs2 = h_up(rho_bc, 2, 2, gamma);           // H(B|C)
      CHECK(lhs >= rhs1 + rhs2 - 1e-6);
    }
    // Negative branch: beta, gamma < 1 makes the inequality flip.
    {
      const double beta = 0.8, gamma = 0.9;
      const double s = beta / (beta - 1) + gamma / (gamma - 1);  // negative
      const double alpha = s / (s - 1.0);
      const double lhs = h_up(rho, 4, 2, alpha);
      const double rhs1 = h_up(rho, 2, 4, beta);
      const cmat rho_bc = partial_trace(rho, {2, 2, 2}, {1, 2});
      const double rhs2 = h_up(rho_bc, 2, 2, gamma);
      CHECK(lhs <= rhs1 + rhs2 + 1e-6);
    }
  }
}

TEST_CASE("classical register bounds") {
  Rng rng(12);
  for (int t = 0; t < 3; ++t) {
    // rho_XAB classical on X.
    const int nx = 2;
    rvec w = rng.pmf(nx);
    std::vector<cmat> conds;
    for (int x = 0; x < nx; ++x) conds.push_back(rng.density(4, 4));
    DensityOperator rho = cq_state(w, conds, "X", "AB");
    // Treat the quantum part as A ⊗ B (2 x 2).
    cmat m = rho.matrix();  // X ⊗ (A ⊗ B), dims {2, 4}
    for (double a : {0.7, 1.6}) {
      // H(XA|B) in [H(A|B), H(A|B) + log dX].
      cmat xab = permute_subsystems(m, {2, 2, 2}, {0, 1, 2});
      const double h_xab = centropy(xab, 4, 2, EntropyFamily::sandwiched, Arrow::up, a);
      cmat ab = partial_trace(m, {2, 2, 2}, {1, 2});
      const double h_ab = centropy(ab, 2, 2, EntropyFamily::sandwiched, Arrow::up, a);
      CHECK(h_xab >= h_ab - 1e-6);
      CHECK(h_xab <= h_ab + 1.0 + 1e-6);
      // H(A|XB) >= H(A|B) - log dX.
      cmat a_xb = permute_subsystems(m, {2, 2, 2}, {1, 0, 2});
      const double h_axb = centropy(a_xb, 2, 4, EntropyFamily::sandwiched, Arrow::up, a);
      CHECK(h_axb >= h_ab - 1.0 - 1e-6);
    }
  }
}

TEST_CASE("guessing probability") {
  Rng rng(13);
  // Uniform X uncorrelated with B.
  {
    rvec w = rvec::Constant(4, 0.25);
    std::vector<cmat> conds(4, rng.density(2, 2));
    auto res = guessing_probability(cq_state(w, conds));
    CHECK(res.p_guess == doctest::Approx(0.25).epsilon(1e-6));
  }
  // Classical joint pmf: exhaustive scan oracle.
  {
    const int nx = 3, ny = 4;
    rvec w = rng.pmf(nx);
    std::vector<cmat> conds;
    for (int x = 0; x < nx; ++x) {
      rvec py = rng.pmf(ny);
      cmat c = cmat::Zero(ny, ny);
      for (int y = 0; y < ny; ++y) c(y, y) = py(y);
      conds.push_back(c);
    }
    auto res = guessing_probability(cq_state(w, conds));
    double oracle = 0.0;
    for (int y = 0; y < ny; ++y) {
      double best = 0.0;
      for (int x = 0; x < nx; ++x) best = std::max(best, w(x) * conds[x](y, y).real());
      oracle += best;
    }
    CHECK(res.p_guess == doctest::Approx(oracle).epsilon(1e-7));
  }
  // BB84 pair {|0>, |+>}: Helstrom value cos^2(pi/8).
  {
    cmat zero = cmat::Zero(2, 2);
    zero(0, 0) = 1.0;
    cmat plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    auto res = guessing_probability(cq_state(rv({0.5, 0.5}), {zero, plus}));
    const double expected = std::cos(M_PI / 8) * std::cos(M_PI / 8);
    CHECK(res.p_guess == doctest::Approx(expected).epsilon(1e-7));
    // POVM witness reproduces the optimum through the Born rule.
    double via_povm = 0.0;
    via_povm += 0.5 * (res.povm[0] * zero).trace().real();
    via_povm += 0.5 * (res.povm[1] * plus).trace().real();
    CHECK(via_povm == doctest::Approx(expected).epsilon(1e-5));
  }
}
