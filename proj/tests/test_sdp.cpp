#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qit/sdp.hpp"
#include "qit/states.hpp"
#include "support.hpp"

using namespace qit;

namespace {

// min tr(sigma) s.t. sigma >= lower, sigma psd.
SdpProblem dominate_problem(const cmat& lower) {
  const int d = static_cast<int>(lower.rows());
  SdpProblem p;
  const int sig = p.add_block("sigma", d);
  const int slack = p.add_block("slack", d);
  p.set_objective(sig, cmat::Identity(d, d));
  p.add_matrix_equality(
      {{sig, [](const cmat& e) { return e; }},
       {slack, [](const cmat& e) { return cmat(-e); }}},
      lower);
  return p;
}

}  // namespace

TEST_CASE("domination toy problem") {
  const cmat target = diag({0.7, 0.3});
  SdpProblem p = dominate_problem(target);
  auto sol = p.solve();
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(max_abs(sol.x[0] - target) <= 1e-5);
  CHECK(sol.duality_gap <= 1e-6);
}

TEST_CASE("classical min-entropy program has primal value max p") {
  // min s  s.t.  s id - Z = diag(p), Z >= 0, s >= 0  (trivial B system).
  const cmat rho = diag({0.5, 0.25, 0.25});
  SdpProblem p;
  const int s = p.add_block("s", 1);
  const int z = p.add_block("z", 3);
  p.set_objective(s, cmat::Identity(1, 1));
  p.add_matrix_equality(
      {{s, [](const cmat& e) { return cmat((cmat(1, 1) << e.trace()).finished()); }},
       {z, [](const cmat& e) { return cmat(-e); }}},
      rho);
  auto sol = p.solve();
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-7));  // so H_min = 1 bit
}

TEST_CASE("weak duality, feasibility and complementary slackness on random problems") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    SdpProblem p(trial % 3 == 0 ? SdpProblem::Sense::maximize : SdpProblem::Sense::minimize);
    const int nb = 1 + static_cast<int>(rng.integer(2));
    std::vector<int> blocks, dims;
    for (int b = 0; b < nb; ++b) {
      const int d = 2 + static_cast<int>(rng.integer(3));
      blocks.push_back(p.add_block("b" + std::to_string(b), d));
      dims.push_back(d);
    }
    const int m = 2 + static_cast<int>(rng.integer(4));
    // Strictly feasible primal/dual pair by construction.
    std::vector<cmat> x0, s0, a_store;
    for (int b = 0; b < nb; ++b) {
      const cmat g = rng.gaussian_matrix(dims[b], dims[b]);
      x0.push_back(cmat(g * g.adjoint() + 0.3 * cmat::Identity(dims[b], dims[b])));
      const cmat h = rng.gaussian_matrix(dims[b], dims[b]);
      s0.push_back(cmat(h * h.adjoint() + 0.3 * cmat::Identity(dims[b], dims[b])));
    }
    rvec y0(m);
    std::vector<cmat> c(nb);
    for (int b = 0; b < nb; ++b) c[b] = s0[b];
    for (int i = 0; i < m; ++i) {
      y0(i) = rng.normal();
      std::map<int, cmat> coeffs;
      double rhs = 0.0;
      for (int b = 0; b < nb; ++b) {
        cmat g = rng.gaussian_matrix(dims[b], dims[b]);
        cmat a = 0.5 * (g + g.adjoint());
        coeffs[blocks[b]] = a;
        rhs += (a * x0[b]).trace().real();
        c[b] += y0(i) * a;
      }
      p.add_scalar_equality(coeffs, rhs);
    }
    const double sense_sign = trial % 3 == 0 ? -1.0 : 1.0;
    for (int b = 0; b < nb; ++b) p.set_objective(blocks[b], cmat(sense_sign * c[b]));

    auto sol = p.solve();
    REQUIRE(sol.status == SdpStatus::optimal);
    const double scale = 1.0 + std::abs(sol.primal_value) + std::abs(sol.dual_value);
    // Weak duality (in minimization form dual <= primal).
    if (trial % 3 == 0) {
      CHECK(sol.dual_value >= sol.primal_value - 1e-8 * scale);
    } else {
      CHECK(sol.dual_value <= sol.primal_value + 1e-8 * scale);
    }
    CHECK(sol.primal_residual <= 1e-7);
    CHECK(sol.dual_residual <= 1e-7);
    // Complementary slackness at the optimum.
    double comp = 0.0;
    for (int b = 0; b < nb; ++b) comp += std::abs((sol.x[b] * sol.s[b]).trace().real());
    CHECK(comp <= 10.0 * 1e-8 * scale * 10);
    // Primal witness psd.
    for (int b = 0; b < nb; ++b)
      CHECK(eig_hermitian(sol.x[b]).eigenvalues.minCoeff() >= -1e-7);
  }
}

TEST_CASE("realification round trip is exact") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const cmat g = rng.gaussian_matrix(4, 4);
    const cmat h = 0.5 * (g + g.adjoint());
    CHECK(max_abs(derealify(realify(h)) - h) <= 1e-15);
    // Spectra double up and psd-ness is preserved.
    auto eh = eig_hermitian(h);
    Eigen::SelfAdjointEigenSolver<rmat> er(realify(h));
    for (int i = 0; i < 4; ++i) {
      CHECK(er.eigenvalues()(2 * i) == doctest::Approx(eh.eigenvalues(i)).epsilon(1e-10));
      CHECK(er.eigenvalues()(2 * i + 1) == doctest::Approx(eh.eigenvalues(i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("complex blocks agree with the spectral answer") {
  Rng rng(9);
  const cmat g = rng.gaussian_matrix(3, 3);
  const cmat h = 0.5 * (g + g.adjoint());
  SdpProblem p = dominate_problem(h);
  auto sol = p.solve();
  REQUIRE(sol.status == SdpStatus::optimal);
  double positive_part = 0.0;
  auto es = eig_hermitian(h);
  for (int i = 0; i < 3; ++i) positive_part += std::max(0.0, es.eigenvalues(i));
  CHECK(sol.value == doctest::Approx(positive_part).epsilon(1e-7));
}

TEST_CASE("min-entropy SDP of the maximally entangled state, both directions") {
  const cmat psi = DensityOperator::maximally_entangled(2).matrix();

  // Primal: min tr sigma_B s.t. id ⊗ sigma_B >= psi.
  SdpProblem p;
  const int sig = p.add_block("sigma", 2);
  const int slack = p.add_block("slack", 4);
  p.set_objective(sig, cmat::Identity(2, 2));
  p.add_matrix_equality(
      {{sig, [](const cmat& e) { return partial_trace(e, {2, 2}, {1}); }},
       {slack, [](const cmat& e) { return cmat(-e); }}},
      psi);
  auto sol = p.solve();
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(max_abs(sol.x[0] - cmat::Identity(2, 2)) <= 1e-5);
  CHECK(sol.duality_gap <= 1e-7);

  // The dual multipliers of the matrix equality reassemble to X_AB with
  // tr_A X <= id and tr(rho X) = the same value (here X = 2 psi).
  const cmat x_dual = SdpProblem::assemble_dual_block(sol.y, 0, 4);
  CHECK((x_dual * psi).trace().real() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(max_abs(x_dual - 2.0 * psi) <= 1e-5);

  // Same value through an explicit maximization problem.
  SdpProblem dual(SdpProblem::Sense::maximize);
  const int xb = dual.add_block("X", 4);
  const int zb = dual.add_block("Z", 2);
  dual.set_objective(xb, psi);
  dual.add_matrix_equality(
      {{xb, [](const cmat& e) { return tensor(cmat::Identity(2, 2), e); }},
       {zb, [](const cmat& e) { return e; }}},
      cmat::Identity(2, 2));
  auto dsol = dual.solve();
  REQUIRE(dsol.status == SdpStatus::optimal);
  CHECK(dsol.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("sdp json dump/load") {
  SdpProblem p = dominate_problem(diag({0.4, 0.1}));
  SdpProblem q = SdpProblem::load_json(p.dump_json());
  auto s1 = p.solve();
  auto s2 = q.solve();
  CHECK(s1.value == doctest::Approx(s2.value).epsilon(1e-10));
}

TEST_CASE("deterministic given identical inputs") {
  SdpProblem p = dominate_problem(diag({0.7, 0.3}));
  auto a = p.solve();
  auto b = p.solve();
  CHECK(a.value == b.value);
  CHECK(max_abs(a.x[0] - b.x[0]) == 0.0);
}
