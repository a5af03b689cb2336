#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qclab/identities.hpp"
#include "qclab/rng.hpp"

using namespace qclab;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I2PI(0, 2 * pi);

LipschitzDomain unit_disk(int samples = 4096) {
  return LipschitzDomain::parametric("circle", {{"radius", 1.0}}, samples);
}
LipschitzDomain flower() { return LipschitzDomain::parametric("perturbed_circle", {{"radius", 1.0}, {"amplitude", 0.3}}); }

// Residues of conj(w - xi)^3 / ((z - w)^3 (w - xi)) on the unit circle, where conj w = 1/w:
// the integrand is -(1 - conj(xi) w) / (w (w - z)^3 (w - xi)) with poles 0, z (triple) and xi.
cplx disk_kernel_311(cplx z, cplx xi) {
  const double s = 1.0 - std::norm(xi);
  const cplx at0 = -1.0 / (z * z * z * xi);
  const cplx at_xi = -s / (xi * (xi - z) * (xi - z) * (xi - z));
  // Partial fractions (1 - conj(xi) w) / (w (w - xi)) = A / w + B / (w - xi).
  const cplx A = -1.0 / xi, B = s / xi;
  const cplx at_z = -(A / (z * z * z) + B / ((z - xi) * (z - xi) * (z - xi)));
  return I2PI * (at0 + at_xi + at_z);
}

// |w - c|^s: d^a dbar^b = prod (s/2 - i) prod (s/2 - i) |w - c|^s (w - c)^-a conj(w - c)^-b.
DerivativeOracle radial_power(cplx c, double s) {
  return [=](int a, int b, cplx w) -> cplx {
    const cplx d = w - c;
    if (d == 0.0) return a + b < s ? 0.0 : std::nan("");
    double k = 1.0;
    for (int i = 0; i < a; ++i) k *= s / 2 - i;
    for (int i = 0; i < b; ++i) k *= s / 2 - i;
    return k * std::pow(std::abs(d), s) / (std::pow(d, a) * std::pow(std::conj(d), b));
  };
}

}  // namespace

TEST_CASE("contour quadrature") {
  const ContourQuadrature q(unit_disk(), 512);
  CHECK(q.size() == 512);
  cplx sum = 0.0;
  for (cplx w : q.weights()) sum += w;
  CHECK(std::abs(sum) <= 1e-10);
  CHECK(std::abs(q.integrate([](cplx t) { return 1.0 / (t - 0.3); }) - I2PI) <= 1e-10);
  CHECK(std::abs(q.integrate_conj([](cplx t) { return t; }) + I2PI) <= 1e-10);
  CHECK_THROWS_AS(ContourQuadrature(unit_disk(), 128), Error);

  // Corners of a polygon get half of each edge.
  const LipschitzDomain sq = LipschitzDomain::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const ContourQuadrature qs(sq, 400);
  CHECK(std::abs(qs.weights()[0] - cplx(0.5, -0.5) * 0.01) <= 1e-12);
  // Area from the boundary: (1/2i) contour conj(z) dz.
  CHECK(std::abs(qs.integrate([](cplx t) { return std::conj(t); }) / cplx(0, 2) - 1.0) <= 1e-12);
}

TEST_CASE("binomial identity") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(0, 2) == 0);
  CHECK(binomial(-1, 0) == 0);
  CHECK(binomial(64, 32) == BigInt("1832624140942590534"));
  const BinomialPair a = binomial_identity(1, 1, 0);
  CHECK(a.lhs == 1);
  CHECK(a.rhs == 1);
  const BinomialPair b = binomial_identity(3, 2, 1);
  CHECK(b.lhs == 2);
  CHECK(b.rhs == 2);
  const BinomialPair c = binomial_identity(4, 3, 5);
  CHECK(c.lhs == 0);
  CHECK(c.rhs == 0);
  CHECK_THROWS_AS(binomial_identity(-1, 2, 0), Error);
  CHECK_THROWS_AS(binomial_identity(1, 65, 0), Error);

  // The identity holds whenever a1 <= m1 + m2 - 2 or one index is 0; beyond that the
  // zero convention breaks it.
  int holds = 0, fails = 0;
  for (int m1 = 0; m1 <= 12; ++m1)
    for (int m2 = 0; m2 <= 12; ++m2)
      for (int a1 = 0; a1 <= 12; ++a1) {
        const BinomialPair p = binomial_identity(m1, m2, a1);
        if (a1 <= m1 + m2 - 2 || m1 == 0 || m2 == 0) CHECK(p.lhs == p.rhs);
        (p.lhs == p.rhs ? holds : fails)++;
      }
  CHECK(holds + fails == 2197);
  CHECK(fails == 364);
  // Large arguments stay exact.
  const BinomialPair big = binomial_identity(60, 60, 40);
  CHECK(big.lhs == big.rhs);
}

TEST_CASE("h function on the disk") {
  const ContourQuadrature q(unit_disk(), 4096);
  const cplx z(0.3, 0.2);
  CHECK(std::abs(h_function(q, 1, z) + I2PI * std::conj(z)) <= 1e-8);
  CHECK(std::abs(h_function(q, 1, 0.0)) <= 1e-12);
  CHECK(std::abs(h_function(q, 0, z) - I2PI) <= 1e-10);
  CHECK(std::abs(h_derivative(q, 1, 0, 0, z) - h_function(q, 1, z)) == 0.0);
  CHECK(std::abs(h_derivative(q, 1, 0, 1, z) + I2PI) <= 1e-10);
  CHECK(h_derivative(q, 2, 1, 3, z) == 0.0);
  // h_2 = 2 pi i (conj z)^2 on the disk, so d h_2 = 0 and dbar^2 h_2 = 4 pi i.
  CHECK(std::abs(h_function(q, 2, z) - I2PI * std::conj(z) * std::conj(z)) <= 1e-8);
  CHECK(std::abs(h_derivative(q, 2, 1, 0, z)) <= 1e-8);
  CHECK(std::abs(h_derivative(q, 2, 0, 2, z) - 2.0 * I2PI) <= 1e-8);

  try {
    h_function(q, 1, cplx(0.999, 0.0));
    FAIL("expected an accuracy error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::accuracy);
  }
  CHECK_THROWS_AS(h_function(q, 1, 2.0), Error);
}

TEST_CASE("h function convergence") {
  // Spectral on an analytic boundary.
  const LipschitzDomain d = flower();
  const cplx z(0.2, -0.1);
  double prev = 0.0;
  for (int m : {256, 512, 1024}) {
    const double err = std::abs(h_function(ContourQuadrature(d, m), 2, z) - h_function(ContourQuadrature(d, 4096), 2, z));
    if (prev > 0) CHECK(err <= 0.25 * prev + 1e-12);
    prev = err;
  }
  CHECK(prev <= 1e-10);
}

TEST_CASE("kernel K") {
  const ContourQuadrature q(unit_disk(), 4096);
  const cplx z = 0.5, xi = -0.3;
  const cplx oracle = disk_kernel_311(z, xi);
  CHECK(std::abs(oracle) <= 1e-12);
  CHECK(std::abs(kernel_K(q, {3, 1, 1}, z, xi) - oracle) <= 1e-8);
  // A non-vanishing member: contour conj(w - xi) / (z - w) dw = 2 pi i conj(xi).
  const cplx xi2(0.1, -0.4);
  CHECK(std::abs(kernel_K(q, {1, 0, 1}, z, xi2) - I2PI * std::conj(xi2)) <= 1e-8);
  CHECK_THROWS_AS(kernel_K(q, {3, 1, 1}, z, z), Error);

  // Reflection: the flower is symmetric about the real axis.
  const LipschitzDomain d = flower();
  const ContourQuadrature qf(d, 4096);
  const cplx a(0.2, 0.15), b(-0.25, 0.3);
  for (MultiIndexM m : {MultiIndexM{3, 1, 1}, MultiIndexM{4, 2, 2}, MultiIndexM{3, 2, 1}}) {
    const cplx k = kernel_K(qf, m, a, b);
    const cplx kr = kernel_K(qf, m, std::conj(a), std::conj(b));
    CHECK(std::abs(kr + std::conj(k)) <= 1e-8 * std::max(1.0, std::abs(k)));
    // Refinement.
    CHECK(std::abs(kernel_K(ContourQuadrature(d, 2048), m, a, b) - k) <= 1e-9);
  }
}

TEST_CASE("kernel expansion") {
  const ContourQuadrature q(flower(), 8192);
  Rng rng(5, "pairs");
  for (MultiIndexM m : {MultiIndexM{3, 1, 1}, MultiIndexM{3, 2, 1}, MultiIndexM{4, 1, 2}, MultiIndexM{3, 1, 2}}) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const cplx z = std::polar(rng.uniform(0.2, 0.5), rng.uniform(0, 2 * pi));
      cplx xi;
      do xi = std::polar(rng.uniform(0.2, 0.5), rng.uniform(0, 2 * pi));
      while (std::abs(z - xi) < 0.1);
      worst = std::max(worst, kernel_expansion_defect(q, m, z, xi).defect);
    }
    CHECK(worst <= 1e-5);
  }

  // When m3 >= m2 + 2 the closed form E misses terms; the full bracket still matches.
  const cplx z(0.3, 0.1), xi(-0.2, 0.25);
  for (MultiIndexM m : {MultiIndexM{3, 1, 3}, MultiIndexM{4, 1, 3}, MultiIndexM{3, 2, 2}}) {
    const KernelExpansion e = kernel_expansion_defect(q, m, z, xi);
    const cplx full = kernel_expansion_bracket(q, m, z, xi);
    CHECK(std::abs(e.D - full) <= 1e-8 * (std::abs(e.D) + std::abs(full)));
    if (m.m3 >= m.m2 + 2) CHECK(e.defect > 1e-2);
  }

  // On the disk both D and E vanish.
  const ContourQuadrature qd(unit_disk(), 4096);
  const KernelExpansion e = kernel_expansion_defect(qd, {3, 1, 1}, 0.2, cplx(-0.1, 0.3));
  CHECK(std::abs(e.D) <= 1e-9);
  CHECK(std::abs(e.E) <= 1e-9);

  CHECK_THROWS_AS(kernel_expansion_defect(q, {2, 1, 1}, z, xi), Error);
  try {
    kernel_expansion_defect(q, {6, 1, 6}, z, xi);
    FAIL("expected overflow");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::overflow);
  }
}

TEST_CASE("derivative identity") {
  const LipschitzDomain d = flower();
  const ContourQuadrature q(d, 8192);
  const GridSpec g = make_grid(0.0, 4.0, 1024);
  const std::vector<cplx> probes = interior_probes(d, g, 40, 0.3, 0);
  const DerivativeIdentity zero = derivative_identity_defect(q, 2, 0, probes, g);
  CHECK(zero.defect <= 1e-6);
  CHECK(std::abs(zero.constant - 2.0 * I2PI) <= 1e-6);

  // The FFT transform of a cut-off indicator carries an O(h) error, so the defect is
  // checked for first-order decay rather than at a fixed 1e-3.
  const DerivativeIdentity one = derivative_identity_defect(q, 2, 1, probes, g);
  const DerivativeIdentity area = derivative_identity_defect(q, 2, 1, probes, g, MaskKind::area_weighted);
  MESSAGE("m3 = 2, j = 1: c = " << one.constant << ", held-out defect " << one.defect << ", area-weighted "
                                << area.defect);
  CHECK(one.held_out == 20);
  CHECK(area.defect <= 1e-2);
  const GridSpec coarse = make_grid(0.0, 4.0, 512);
  const DerivativeIdentity half =
      derivative_identity_defect(q, 2, 1, interior_probes(d, coarse, 40, 0.3, 0), coarse, MaskKind::area_weighted);
  MESSAGE("N = 512 area-weighted defect " << half.defect);
  CHECK(area.defect <= 0.75 * half.defect);
  const std::vector<cplx> deep = interior_probes(d, g, 40, 0.3, 2);
  for (int m3 = 1; m3 <= 3; ++m3)
    for (int j = 1; j <= m3; ++j) {
      const DerivativeIdentity r = derivative_identity_defect(q, m3, j, deep, g, MaskKind::area_weighted);
      MESSAGE("m3 = " << m3 << ", j = " << j << ": " << r.defect);
      CHECK(r.defect <= 1e-2);
    }

  const LipschitzDomain disk = unit_disk();
  const ContourQuadrature qd(disk, 4096);
  try {
    derivative_identity_defect(qd, 2, 1, interior_probes(disk, g, 10, 0.2, 1), g);
    FAIL("expected a degenerate probe");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_probe);
  }
}

TEST_CASE("plemelj jump") {
  const ContourQuadrature q(unit_disk(), 8192);
  const PlemeljJump a = plemelj_jump(q, 1, 0.0, 0.0, 1e-3);
  CHECK(std::abs(a.target - 1.0) <= 1e-12);
  CHECK(a.error() <= 1e-2);
  const PlemeljJump b = plemelj_jump(q, 1, 0.0, pi / 2, 1e-3);
  CHECK(std::abs(b.target - cplx(0, -1)) <= 1e-12);
  CHECK(b.error() <= 1e-2);
  const PlemeljJump c = plemelj_jump(q, 0, 0.3, 1.0, 1e-3);
  CHECK(std::abs(c.target - 1.0) == 0.0);
  CHECK(c.error() <= 1e-2);
  MESSAGE("disk jump errors " << a.error() << " " << b.error() << " " << c.error());

  // Joint refinement.
  double prev = 1e300;
  for (int k = 0; k < 3; ++k) {
    const double eps = 4e-3 / (1 << k);
    const PlemeljJump p = plemelj_jump(ContourQuadrature(unit_disk(), 4096 << k), 2, cplx(0.1, 0.2), 2.0, eps);
    CHECK(p.error() <= prev);
    prev = p.error();
  }
  try {
    plemelj_jump(ContourQuadrature(unit_disk(), 1024), 1, 0.0, 0.0, 1e-3);
    FAIL("expected an accuracy error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::accuracy);
  }
  CHECK_THROWS_AS(plemelj_jump(q, 1, 0.0, 0.0, 0.5), Error);
}

TEST_CASE("taylor remainder exponent") {
  const std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
  const cplx z(0.3, -0.2);
  // A polynomial of degree 3 is reproduced.
  const DerivativeOracle poly = [](int a, int b, cplx w) -> cplx {
    // f = w^2 conj(w) + 3 conj(w)^2 - w
    const cplx wb = std::conj(w);
    if (a == 0 && b == 0) return w * w * wb + 3.0 * wb * wb - w;
    if (a == 1 && b == 0) return 2.0 * w * wb - 1.0;
    if (a == 0 && b == 1) return w * w + 6.0 * wb;
    if (a == 1 && b == 1) return 2.0 * w;
    if (a == 2 && b == 0) return 2.0 * wb;
    if (a == 0 && b == 2) return 6.0;
    if (a == 2 && b == 1) return 2.0;
    if (a == 3 && b == 0) return 0.0;
    if (a == 1 && b == 2) return 0.0;
    if (a == 0 && b == 3) return 0.0;
    return 0.0;
  };
  for (int j : {0, 1}) {
    const ExponentFit fit =
        remainder_exponent([&](cplx xi) { return taylor_remainder(poly, 3, j, z, xi); }, z, radii, 16, 1e-12);
    CHECK(fit.vanishing);
    CHECK(std::isinf(fit.slope));
  }

  // |w - z|^(M + sigma) has a flat Taylor polynomial at z.
  for (double sigma : {0.3, 0.5}) {
    const DerivativeOracle f = radial_power(z, 3 + sigma);
    const ExponentFit fit = remainder_exponent([&](cplx xi) { return taylor_remainder(f, 3, 0, z, xi); }, z, radii);
    CHECK(fit.slope == doctest::Approx(3 + sigma).epsilon(0.05 / (3 + sigma)));
  }

  // h_3 on the flower with M = 3, j = 1.
  const ContourQuadrature q(flower(), 8192);
  const ExponentFit h = taylor_remainder_exponent(q, 3, 3, 1, cplx(0.1, 0.05), radii);
  MESSAGE("h_3 remainder slope " << h.slope);
  CHECK(h.slope >= 2.3);
  CHECK_THROWS_AS(remainder_exponent([](cplx) { return 1.0; }, z, {0.1, 0.05}), Error);
  CHECK_THROWS_AS(remainder_exponent([](cplx) { return 1.0; }, z, {0.1, 0.2, 0.05}), Error);
}

TEST_CASE("radial vanishing") {
  const GridSpec g = make_grid(0.0, 4.0, 1024);
  auto disk = [](double r) { return r < 1.0 ? 1.0 : 0.0; };
  auto wide = [](double r) { return r < 2.0 ? 1.0 : 0.0; };
  auto taper = [](double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 1.9) return 0.0;
    const double s = (r - 1.0) / 0.9;
    return 1.0 - smooth_step(s);
  };
  for (int m = 1; m <= 4; ++m) {
    const double a = radial_vanish(disk, m, g), b = radial_vanish(wide, m, g), c = radial_vanish(taper, m, g);
    MESSAGE("m = " << m << ": " << a << " " << b << " " << c);
    CHECK(a <= 5e-2);
    CHECK(b <= 5e-2);
    CHECK(c <= 1e-3);
  }
  CHECK_THROWS_AS(radial_vanish([](double r) { return r < 0.5 ? 1.0 : 0.0; }, 1, g), Error);
  CHECK_THROWS_AS(radial_vanish([](double r) { return r < 3.0 ? 1.0 : 0.0; }, 1, g), Error);
}

TEST_CASE("green formula") {
  const WirtingerFunction zf{[](cplx z) { return z; }, [](cplx) { return cplx(1.0); }, [](cplx) { return cplx(0.0); }};
  const WirtingerFunction none{[](cplx) { return cplx(0.0); }, [](cplx) { return cplx(0.0); },
                               [](cplx) { return cplx(0.0); }};
  const WirtingerFunction one{[](cplx) { return cplx(2.5, -1.0); }, [](cplx) { return cplx(0.0); },
                              [](cplx) { return cplx(0.0); }};

  const LipschitzDomain disk = unit_disk(65536);
  const ContourQuadrature q(disk, 4096);
  const GridSpec g = make_grid(0.0, 1.25, 512);
  CHECK(std::abs(q.integrate_conj([](cplx z) { return z; }) + I2PI) <= 1e-10);
  const double d = green_defect(zf, none, q, g);
  MESSAGE("disk, f = z: " << d);
  CHECK(d <= 1e-6);
  CHECK(green_defect(one, one, q, g) <= 1e-10);

  const LipschitzDomain sq = LipschitzDomain::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const WirtingerFunction z2{[](cplx z) { return z * z; }, [](cplx z) { return 2.0 * z; }, [](cplx) { return cplx(0.0); }};
  const WirtingerFunction zbar{[](cplx z) { return std::conj(z); }, [](cplx) { return cplx(0.0); },
                               [](cplx) { return cplx(1.0); }};
  const double ds = green_defect(z2, zbar, ContourQuadrature(sq, 4096), make_grid(cplx(0.5, 0.5), 0.75, 1024));
  MESSAGE("square, f = z^2, g = conj z: " << ds);
  CHECK(ds <= 1e-5);
}
