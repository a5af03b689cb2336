#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qclab/masks.hpp"
#include "qclab/maximal.hpp"
#include "qclab/rng.hpp"
#include "qclab/whitney.hpp"
#include "test_util.hpp"

using namespace qclab;

namespace {

LipschitzDomain unit_square() { return LipschitzDomain::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

LipschitzDomain flower() { return LipschitzDomain::parametric("perturbed_circle", {{"amplitude", 0.3}}); }

// Nonnegative smooth data supported in the domain.
ComplexField bumps(const GridSpec& g, const LipschitzDomain& d, std::uint64_t seed) {
  Rng rng(seed, "bumps");
  const Box b = d.bbox();
  std::vector<cplx> c;
  std::vector<double> w, s;
  for (int i = 0; i < 6; ++i) {
    c.emplace_back(rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax));
    w.push_back(rng.uniform(0.2, 1.0));
    s.push_back(rng.uniform(0.05, 0.3));
  }
  return domain_mask(d, g) * sample([&](cplx z) {
           double v = 0.0;
           for (int i = 0; i < 6; ++i) v += w[i] * std::exp(-std::norm(z - c[i]) / (s[i] * s[i]));
           return cplx(v);
         }, g);
}

}  // namespace

TEST_CASE("long distance") {
  const Square a{{0, 0}, 1}, b{{2, 0}, 1}, p{{0.5, 0.5}, 0}, q{{3.5, 4.5}, 0};
  CHECK(std::abs(long_distance(a, a) - 2 * std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(long_distance(a, b) - (2 * std::sqrt(2.0) + 1)) < 1e-15);
  CHECK(std::abs(long_distance(p, q) - 5.0) < 1e-15);
  CHECK(long_distance(a, b) == long_distance(b, a));
}

TEST_CASE("whitney covering of the unit square") {
  const WhitneyCovering cov = whitney(unit_square(), 1.0 / 64);
  const CoveringAudit a = cov.audit();
  // Dyadic squares aligned with the boundary sit at integer multiples of their side.
  CHECK(a.min_dist_ratio == 1.0);
  CHECK(a.max_dist_ratio == 1.0);
  CHECK(a.distance_ok());
  CHECK(a.neighbor_ok());
  CHECK(a.disjoint);
  CHECK(a.connected);
  CHECK(a.partition_defect < 1e-3);
  CHECK(a.collar_constant < 2.0);
  for (const auto& c : cov.cubes()) CHECK(std::abs(c.dist - unit_square().square_distance(c.sq.corner, c.sq.side)) == 0.0);
  CHECK(cov.side(cov.q0()) == 0.25);

  std::ostringstream os;
  cov.write_csv(os);
  const std::string csv = os.str();
  CHECK(csv.rfind("corner_x,corner_y,side,dist_to_boundary\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == cov.size() + 1);

  CHECK(cov.locate({0.5, 0.5}) >= 0);
  CHECK(cov.locate({0.001, 0.5}) == -1);
  CHECK(cov.locate({2.0, 0.5}) == -1);
}

TEST_CASE("whitney covering of curved domains") {
  for (const LipschitzDomain& d : {flower(), LipschitzDomain::parametric("circle", {{"radius", 1.0}})}) {
    const WhitneyCovering cov = whitney(d, 1.0 / 32);
    const CoveringAudit a = cov.audit();
    CHECK(a.distance_ok());
    CHECK(a.neighbor_ok());
    CHECK(a.disjoint);
    CHECK(a.partition_defect < 1e-3);
  }
  // Generation census of the disk is monotone and roughly doubles.
  const WhitneyCovering disk = whitney(LipschitzDomain::parametric("circle", {{"radius", 1.0}}), 1.0 / 64);
  const auto census = disk.census();
  int prev = 0;
  for (auto [gen, count] : census) {
    CHECK(count > prev);
    prev = count;
  }
  CHECK(census.rbegin()->second < 4 * std::next(census.rbegin())->second);

  // A larger Whitney constant needs no balancing.
  const WhitneyCovering wide = whitney(unit_square(), 1.0 / 64, 2.0);
  CHECK(wide.audit().distance_ok());
  CHECK(wide.audit().neighbor_ok());
}

TEST_CASE("whitney errors") {
  try {
    whitney(unit_square(), 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_cover);
  }
  CHECK_THROWS_AS(whitney(unit_square(), 0.0), Error);
  CHECK_THROWS_AS(whitney(unit_square(), 0.1, 0.5), Error);
}

TEST_CASE("chains") {
  const WhitneyCovering cov = whitney(unit_square(), 1.0 / 32);
  const int q = cov.locate({0.04, 0.04});
  REQUIRE(q >= 0);
  CHECK(cov.chain(q, q).cubes == std::vector<int>{q});
  const int s = cov.neighbors(q).front();
  const Chain c = cov.chain(q, s);
  CHECK(c.cubes == std::vector<int>{q, s});
  CHECK(cov.chain_length(c) == cov.side(q) + cov.side(s));

  // Opposite corners: the chain passes through Q0.
  const int far = cov.locate({0.96, 0.96});
  const Chain long_chain = cov.chain(q, far);
  CHECK(std::find(long_chain.cubes.begin(), long_chain.cubes.end(), cov.q0()) != long_chain.cubes.end());
  CHECK(cov.chain_length(long_chain) / cov.D(q, far) <= 10.0);

  for (const LipschitzDomain& d : {unit_square(), flower()}) {
    const ChainAudit a = audit_chains(whitney(d, 1.0 / 32));
    CHECK(a.neighbors_ok);
    CHECK(a.max_length_ratio <= 10.0);
    MESSAGE("chain length / D <= " << a.max_length_ratio << ", D(P,S)/D(Q,S) in [" << a.far_min << ", "
                                   << a.far_max << "], D(P,Q)/l(P) in [" << a.close_min << ", " << a.close_max << "]");
  }
}

TEST_CASE("shadows") {
  const WhitneyCovering cov = whitney(unit_square(), 1.0 / 32);
  for (int q = 0; q < cov.size(); ++q) {
    const auto sh = cov.shadow(q, 2 * std::sqrt(2.0));
    CHECK(std::find(sh.begin(), sh.end(), q) != sh.end());
  }
  CHECK_THROWS_AS(cov.shadow(0, 0.5), Error);
  for (const LipschitzDomain& d : {unit_square(), flower()}) {
    const WhitneyCovering c = whitney(d, 1.0 / 32);
    const ShadowAudit a = audit_shadows(c);
    CHECK(a.containment);
    // Every S in SH(P) lies in the disk of radius rho l(P) about P's center.
    CHECK(a.max_area_ratio <= 3.14159 * a.rho0 * a.rho0);
    MESSAGE("rho0 = " << a.rho0 << ", shadow area ratio " << a.max_area_ratio);
  }
}

TEST_CASE("maximal function") {
  const GridSpec g = make_grid(0.0, 1.0, 64);
  const ComplexField one = ComplexField::constant(g, 1.0);
  CHECK(max_abs(maximal(one) - one) < 1e-12);

  // Point mass: the smallest dyadic square reaching the mass sets Mf.
  std::vector<cplx> v(g.size(), 0.0);
  const double h = g.spacing();
  v[g.index(32, 32)] = 1.0 / (h * h);
  const ComplexField m = maximal(ComplexField(g, v));
  for (int j = 0; j < 64; ++j)
    for (int k = 0; k < 64; ++k) {
      const int cheb = std::max(std::abs(j - 32), std::abs(k - 32));
      if (cheb == 0) continue;
      const double envelope = 1.0 / (4 * std::pow(cheb * h, 2));
      const double r = m(j, k).real() / envelope;
      CHECK(r >= 0.25);
      CHECK(r <= 4.0);
    }

  const ComplexField noise = qtest::white_noise(g, 9);
  CHECK(l2_norm(maximal(noise)) <= 8.0 * l2_norm(noise.map([](cplx z) { return cplx(std::abs(z)); })));
  const ComplexField mn = maximal(noise);
  for (std::size_t i = 0; i < noise.size(); ++i) CHECK(mn[i].real() >= std::abs(noise[i]) * (1 - 1e-12));
}

TEST_CASE("maximal lemma inequalities") {
  // Annulus bounds: the squares with D in (t, 2t] fit in a dyadic square of side 8t about
  // any point of Q, giving 128 (far) and 64 (close) for eta = 1.
  for (const LipschitzDomain& d : {unit_square(), flower()}) {
    const GridSpec g = make_grid(d.centroid(), 2.0, 512);
    const WhitneyCovering cov = whitney(d, 1.0 / 32);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const MaximalLemma m = maximal_lemma(cov, bumps(g, d, seed), 1.0);
      CHECK(m.far <= 128.0);
      CHECK(m.close <= 64.0);
    }
  }
}

TEST_CASE("chain double sum") {
  const LipschitzDomain sq = unit_square();
  const WhitneyCovering cov = whitney(sq, 1.0 / 32);
  const GridSpec g = make_grid(cplx(0.5, 0.5), 2.0, 256);
  const ComplexField zero = ComplexField::zeros(g);
  const ComplexField chi = domain_mask(sq, g);
  CHECK(chain_sum_ratio(cov, zero, chi, 1.0, 2.0) == 0.0);
  CHECK(chain_sum_ratio(cov, chi, zero, 1.0, 2.0) == 0.0);
  CHECK_THROWS_AS(chain_sum_ratio(cov, chi, chi, 0.5, 2.0), Error);
  CHECK_THROWS_AS(chain_sum_ratio(cov, chi, chi, 1.0, 1.0), Error);

  const GridSpec fine = make_grid(cplx(0.5, 0.5), 2.0, 512);
  const double coarse_ratio = chain_sum_ratio(cov, chi, chi, 1.0, 2.0);
  const double fine_ratio = chain_sum_ratio(cov, domain_mask(sq, fine), domain_mask(sq, fine), 1.0, 2.0);
  CHECK(std::isfinite(coarse_ratio));
  CHECK(std::abs(fine_ratio / coarse_ratio - 1.0) <= 0.2);
}
