#include <doctest.h>

#include <cmath>

#include "qclab/beltrami.hpp"
#include "qclab/fft.hpp"
#include "qclab/masks.hpp"
#include "qclab/singular_ops.hpp"
#include "test_util.hpp"

using namespace qclab;

namespace {

LipschitzDomain disk(double r = 0.5) { return LipschitzDomain::parametric("circle", {{"radius", r}}); }

BeltramiProblem mollified(double a, int n = 256, double collar = 0.0) {
  const LipschitzDomain d = disk();
  const GridSpec g = make_grid(0.0, 2.0, n);
  return make_problem(
      mu_field({{"family", "mollified_indicator"}, {"params", {{"amplitude", a}, {"collar", collar}}}}, d, g), d);
}

ComplexField nyquist_part(const ComplexField& f) {
  return fft::apply_symbol(f, [](const fft::Mode& m) { return cplx(m.nyq_x || m.nyq_y ? 1.0 : 0.0); });
}

// Smooth complex coefficient with |mu| <= 0.6 supported in the domain.
BeltramiProblem random_problem(std::uint64_t seed, const LipschitzDomain& d, const GridSpec& g) {
  const ComplexField wave = qtest::band_limited(g, 3, seed);
  const double s = max_abs(wave);
  return make_problem(domain_mask(d, g, MaskKind::mollified) * wave * cplx(0.6 / s), d);
}

}  // namespace

TEST_CASE("beltrami problems") {
  const LipschitzDomain d = disk();
  const GridSpec g = make_grid(0.0, 2.0, 64);
  const BeltramiProblem p = make_problem(mu_field({{"family", "constant"}, {"params", {{"amplitude", 0.5}}}}, d, g), d);
  CHECK(p.k == 0.5);
  CHECK(p.K == doctest::Approx(3.0));
  try {
    make_problem(mu_field({{"family", "constant"}, {"params", {{"amplitude", 1.0}}}}, d, g), d);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_contractive);
  }
  CHECK_THROWS_AS(make_problem(ComplexField::constant(g, 0.2), d), Error);
  CHECK_THROWS_AS(mu_field({{"family", "spiral"}}, d, g), Error);

  const ComplexField b = mu_field({{"family", "bump"}, {"params", {{"amplitude", 0.4}, {"radius", 0.3}}}}, d, g);
  CHECK(max_abs(b) == doctest::Approx(0.4));
  const ComplexField jmp =
      mu_field({{"family", "jump"}, {"params", {{"amplitude", 0.4}, {"radius", 0.3}, {"cut", 0.0}}}}, d, g);
  CHECK(jmp(g.nearest_j(0.05), g.nearest_k(0.0)).real() == doctest::Approx(0.2));
  CHECK(jmp(g.nearest_j(-0.05), g.nearest_k(0.0)).real() == doctest::Approx(0.4));
}

TEST_CASE("neumann series") {
  const BeltramiProblem zero = make_problem(ComplexField::zeros(make_grid(0.0, 2.0, 64)), disk());
  const NeumannResult z = neumann_solve(zero);
  CHECK(z.trace.size() == 1);
  CHECK(max_abs(z.h) == 0.0);
  const PrincipalSolution pz = principal_solution(zero, z);
  CHECK(max_abs(pz.f - coordinate_field(pz.f.spec())) == 0.0);

  const BeltramiProblem p = mollified(0.5);
  const NeumannResult s = neumann_solve(p, 1e-11);
  CHECK(s.converged);
  CHECK(s.leakage == 0.0);
  CHECK(observed_ratio(s.trace) <= 0.55);
  // The defining equation.
  CHECK(l2_norm(s.h - p.mu * beurling(s.h) - p.mu) <= 1e-10);

  {
    QuietWarnings quiet;
    const NeumannResult cut = neumann_solve(p, 1e-14, 3);
    CHECK(!cut.converged);
    CHECK(cut.trace.size() == 3);
  }
}

TEST_CASE("principal solution") {
  // The spectral derivatives of C h drop the Nyquist modes of h, and only those.
  // A wide collar keeps that content small enough for pointwise checks.
  for (double a : {0.3, 0.7}) {
    const BeltramiProblem p = mollified(a, 256, 0.25);
    const NeumannResult s = neumann_solve(p, 1e-12);
    const PrincipalSolution ps = principal_solution(p, s);
    const GridSpec& g = ps.f.spec();
    const double nyq = l2_norm(nyquist_part(s.h));
    CHECK(ps.beltrami_residual <= 5e-3 * ps.d_norm);
    CHECK(l2_norm(ps.dbar_f - s.h) <= nyq + 1e-12);
    CHECK(l2_norm(ps.d_f - beurling(s.h) - cplx(1.0)) <= 2 * nyq + 1e-12);
    CHECK(ps.far_field < 1.0);
    int bad_qr = 0, bad_conformal = 0;
    for (int j = 0; j < g.resolution; ++j)
      for (int k = 0; k < g.resolution; ++k) {
        const double df = std::abs(ps.d_f(j, k)), dbf = std::abs(ps.dbar_f(j, k));
        if (df > 0.1 && dbf > (p.k + 1e-6) * df) ++bad_qr;
        if (std::abs(g.point(j, k)) > 1.0 && dbf > 1e-6) ++bad_conformal;
      }
    CHECK(bad_qr == 0);
    CHECK(bad_conformal == 0);
  }

  // Default 4h collar.
  for (double a : {0.3, 0.7}) {
    const BeltramiProblem p = mollified(a);
    const NeumannResult s = neumann_solve(p, 1e-12);
    const PrincipalSolution ps = principal_solution(p, s);
    const double nyq = l2_norm(nyquist_part(s.h));
    CHECK(ps.beltrami_residual <= 5e-3 * ps.d_norm);
    CHECK(l2_norm(ps.dbar_f - s.h) <= nyq + 1e-12);
    CHECK(l2_norm(ps.d_f - beurling(s.h) - cplx(1.0)) <= 2 * nyq + 1e-12);
  }
  const BeltramiProblem other = mollified(0.3, 128);
  CHECK_THROWS_AS(principal_solution(mollified(0.3), neumann_solve(other)), Error);
}

TEST_CASE("P_m identities") {
  const LipschitzDomain d = LipschitzDomain::parametric("perturbed_circle", {{"radius", 0.6}, {"amplitude", 0.2}});
  const GridSpec g = make_grid(0.0, 2.0, 128);
  const ComplexField chi = domain_mask(d, g);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const BeltramiProblem p = random_problem(seed, d, g);
    const ComplexField data = chi * qtest::white_noise(g, seed + 7);
    CHECK(pm_identity_defect(p, 1, data) == 0.0);
    for (int m = 2; m <= 6; ++m) {
      CHECK(pm_identity_defect(p, m, data) <= 1e-10);
      CHECK(factorization_terms(p, m, data).defect <= 1e-10);
    }
    const Factorization f1 = factorization_terms(p, 1, data);
    CHECK(max_abs(f1.a2) == 0.0);
    CHECK(max_abs(f1.a3) == 0.0);
  }
  const BeltramiProblem zero = make_problem(ComplexField::zeros(g), d);
  CHECK(pm_identity_defect(zero, 4, qtest::white_noise(g, 1)) == 0.0);

  const BeltramiProblem flat = make_problem(cplx(0.4, 0.2) * chi, d);
  const ComplexField data = chi * qtest::white_noise(g, 3);
  for (int m = 2; m <= 4; ++m) CHECK(l2_norm(factorization_terms(flat, m, data).a3) <= 1e-10);
  CHECK_THROWS_AS(pm_identity_defect(flat, 0, data), Error);
}

TEST_CASE("contraction estimates") {
  const LipschitzDomain sq = LipschitzDomain::parametric("smoothed_square", {});
  const GridSpec g = make_grid(0.0, 1.5, 128);
  const BeltramiProblem zero = make_problem(ComplexField::zeros(g), sq, {1, 4.0});
  CHECK(contraction_estimate(zero, 2).l2 == 0.0);
  CHECK_THROWS_AS(contraction_estimate(zero, 2, 3), Error);

  const BeltramiProblem p =
      make_problem(mu_field({{"family", "mollified_indicator"}, {"params", {{"amplitude", 0.3}}}}, sq, g), sq, {1, 4.0});
  double prev = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const ContractionEstimate e = contraction_estimate(p, m, 10);
    MESSAGE("m = " << m << ": L2 " << e.l2 << ", W^{1,4} " << e.sobolev);
    CHECK(e.l2 <= std::pow(0.3, m) * (1 + 1e-9));
    CHECK(e.sobolev > 0);
    if (m >= 2) CHECK(e.l2 < 1.0);
    if (prev > 0) CHECK(e.l2 <= prev * 0.4);
    prev = e.l2;
  }
}

TEST_CASE("regularity table") {
  const LipschitzDomain sq = LipschitzDomain::parametric("smoothed_square", {});
  CHECK_THROWS_AS(regularity_table({{"family", "bump"}}, sq, {1, 4.0}, {64, 128}, 1.0), Error);

  const RegularityTable flat =
      regularity_table({{"family", "bump"}, {"params", {{"amplitude", 0.0}}}}, sq, {1, 4.0}, {64, 128, 256}, 1.0);
  for (const auto& r : flat.rows) {
    CHECK(r.h.value == 0.0);
    CHECK(r.f.derivative <= 1e-10);
    CHECK(r.iterations == 1);
  }

  const nlohmann::json bump = {{"family", "bump"}, {"params", {{"amplitude", 0.4}, {"radius", 0.4}}}};
  const RegularityTable smooth = regularity_table(bump, sq, {1, 4.0}, {128, 256, 512}, 1.0, 1e-10, 500, 3);
  for (double r : smooth.h_ratios()) CHECK(r <= 1.25);
  nlohmann::json rough = bump;
  rough["family"] = "jump";
  const RegularityTable jump = regularity_table(rough, sq, {1, 4.0}, {128, 256, 512}, 1.0);
  for (double r : jump.h_ratios()) CHECK(r >= 1.5);
  const nlohmann::json j = to_json(smooth);
  CHECK(j.at("rows").size() == 3);
  CHECK(j.at("h_ratios").size() == 2);
}
