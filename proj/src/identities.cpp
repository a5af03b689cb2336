#include "qclab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "qclab/rng.hpp"
#include "qclab/singular_ops.hpp"

namespace qclab {

namespace {

constexpr double pi = std::numbers::pi;

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// sum conj(tau - z)^a / (tau - z)^b w
cplx moment(const ContourQuadrature& q, int a, int b, cplx z) {
  const auto& t = q.nodes();
  const auto& w = q.weights();
  cplx s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const cplx d = t[i] - z;
    s += ipow(std::conj(d), a) / ipow(d, b) * w[i];
  }
  return s;
}

void guard_order(const MultiIndexM& m) {
  if (!m.admissible()) fail(Errc::invalid_argument, "multi-index needs m1 >= 3, m2, m3 >= 1, m2 <= m1 + m3 - 2");
  if (m.order() > 12) fail(Errc::overflow, "multi-index order above 12");
}

// Derivatives of h_m3 at one point, cached.
class HDerivatives {
 public:
  HDerivatives(const ContourQuadrature& q, int m3, cplx z) : q_(q), m3_(m3), z_(z) {}
  cplx operator()(int a, int b) {
    if (b > m3_) return 0.0;
    const auto key = std::make_pair(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const cplx v = h_derivative(q_, m3_, a, b, z_);
    cache_.emplace(key, v);
    return v;
  }

 private:
  const ContourQuadrature& q_;
  int m3_;
  cplx z_;
  std::map<std::pair<int, int>, cplx> cache_;
};

struct Clip {
  double area = 0.0;
  cplx centroid;
};

// Sutherland-Hodgman of a closed polygon against an axis-parallel square.
Clip clip_square(const std::vector<cplx>& poly, double x0, double y0, double side) {
  std::vector<cplx> cur = poly, out;
  const double x1 = x0 + side, y1 = y0 + side;
  auto pass = [&](auto inside, auto cross) {
    out.clear();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const cplx a = cur[i], b = cur[(i + 1) % cur.size()];
      const bool ia = inside(a), ib = inside(b);
      if (ia != ib) out.push_back(cross(a, b));
      if (ib) out.push_back(b);
    }
    cur.swap(out);
  };
  auto at_x = [](double x) {
    return [x](cplx a, cplx b) { return cplx(x, a.imag() + (x - a.real()) / (b.real() - a.real()) * (b.imag() - a.imag())); };
  };
  auto at_y = [](double y) {
    return [y](cplx a, cplx b) { return cplx(a.real() + (y - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real()), y); };
  };
  pass([&](cplx p) { return p.real() >= x0; }, at_x(x0));
  if (!cur.empty()) pass([&](cplx p) { return p.real() <= x1; }, at_x(x1));
  if (!cur.empty()) pass([&](cplx p) { return p.imag() >= y0; }, at_y(y0));
  if (!cur.empty()) pass([&](cplx p) { return p.imag() <= y1; }, at_y(y1));
  Clip c;
  if (cur.size() < 3) return c;
  // Shoelace relative to the square corner keeps cancellation small.
  const cplx o(x0, y0);
  double a2 = 0.0;
  cplx m = 0.0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    const cplx p = cur[i] - o, r = cur[(i + 1) % cur.size()] - o;
    const double cr = p.real() * r.imag() - r.real() * p.imag();
    a2 += cr;
    m += cr * (p + r);
  }
  c.area = 0.5 * a2;
  c.centroid = std::abs(a2) > 0 ? o + m / (3.0 * a2) : o;
  return c;
}

// Subtracts annular bumps r^(2k) b(r), k < K, supported in inner < |z - c| < outer, so the
// first K radial moments of the data vanish. Any radial function that is constant on the
// disk of radius `inner` has B^m = 0 there in the plane, so the subtraction leaves plane
// values inside unchanged while cancelling the periodic images the FFT adds.
void cancel_radial_moments(std::vector<cplx>& v, const GridSpec& g, cplx c, double inner, double outer, int K) {
  const std::size_t n = g.size();
  std::vector<double> r2(n), base(n);
  for (int j = 0; j < g.resolution; ++j)
    for (int k = 0; k < g.resolution; ++k) {
      const std::size_t i = g.index(j, k);
      r2[i] = std::norm(g.point(j, k) - c);
      const double s = (std::sqrt(r2[i]) - inner) / (outer - inner);
      base[i] = s > 0 && s < 1 ? std::exp(-1.0 / (s * (1 - s))) : 0.0;
    }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(K);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0.0 && base[i] == 0.0) continue;
    double w = 1.0;
    for (int row = 0; row < K; ++row, w *= r2[i]) {
      b(row) += v[i] * w;
      double p = 1.0;
      for (int col = 0; col < K; ++col, p *= r2[i]) A(row, col) += base[i] * p * w;
    }
  }
  const Eigen::VectorXcd coef = A.cast<cplx>().colPivHouseholderQr().solve(b);
  for (std::size_t i = 0; i < n; ++i) {
    if (base[i] == 0.0) continue;
    cplx corr = 0.0;
    double p = 1.0;
    for (int col = 0; col < K; ++col, p *= r2[i]) corr += coef(col) * p;
    v[i] -= base[i] * corr;
  }
}

}  // namespace

BigInt binomial(long a, long g) {
  if (g < 0 || a < 0 || g > a) return 0;
  g = std::min(g, a - g);
  BigInt r = 1;
  for (long i = 1; i <= g; ++i) {
    r *= a - g + i;
    r /= i;
  }
  return r;
}

BinomialPair binomial_identity(int m1, int m2, int a1) {
  for (int v : {m1, m2, a1})
    if (v < 0 || v > 64) fail(Errc::invalid_argument, "binomial identity inputs must lie in [0, 64]");
  BinomialPair out;
  out.lhs = binomial(m1 + m2 - 2 - a1, m2 - 1);
  out.rhs = 0;
  for (int j = 0; j <= a1; ++j) {
    const BigInt term = binomial(a1, j) * binomial(m2 + m1 - 2 - j, m1 - 1);
    if (j % 2) out.rhs -= term;
    else out.rhs += term;
  }
  return out;
}

cplx h_function(const ContourQuadrature& q, int m3, cplx z) { return h_derivative(q, m3, 0, 0, z); }

cplx h_derivative(const ContourQuadrature& q, int m3, int j1, int j2, cplx z) {
  if (m3 < 0 || j1 < 0 || j2 < 0) fail(Errc::invalid_argument, "negative derivative order");
  if (j2 > m3) return 0.0;
  q.require_clearance(z);
  const double c = factorial(m3) * factorial(j1) / factorial(m3 - j2) * (j2 % 2 ? -1.0 : 1.0);
  return c * moment(q, m3 - j2, 1 + j1, z);
}

std::vector<cplx> interior_probes(const LipschitzDomain& dom, const GridSpec& g, int count, double depth,
                                  std::uint64_t seed) {
  Rng rng(seed, "probes");
  std::set<std::size_t> seen;
  std::vector<cplx> out;
  for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
    if (tries > 1000 * count) fail(Errc::insufficient_data, "not enough grid points deep inside the domain");
    const int j = rng.uniform_int(0, g.resolution - 1), k = rng.uniform_int(0, g.resolution - 1);
    const cplx z = g.point(j, k);
    if (!dom.contains(z) || dom.boundary_distance(z) < depth) continue;
    if (seen.insert(g.index(j, k)).second) out.push_back(z);
  }
  return out;
}

DerivativeIdentity derivative_identity_defect(const ContourQuadrature& q, int m3, int j, const std::vector<cplx>& probes,
                                              const GridSpec& g, MaskKind mask) {
  if (j < 0 || j > m3) fail(Errc::invalid_argument, "derivative identity needs 0 <= j <= m3");
  if (probes.size() < 4) fail(Errc::insufficient_data, "derivative identity needs at least 4 probes");
  std::vector<cplx> lhs, rhs;
  const LipschitzDomain& dom = q.domain();
  ComplexField field = domain_mask(dom, g, mask);
  if (j > 0) {
    const cplx c = dom.centroid();
    double reach = 0.0;
    for (cplx p : dom.polygon()) reach = std::max(reach, std::abs(p - c));
    const double quarter = 0.5 * g.half_width - std::max(std::abs((c - g.center).real()), std::abs((c - g.center).imag()));
    if (quarter <= 1.2 * reach) fail(Errc::invalid_argument, "grid too small to cancel the periodic images");
    std::vector<cplx> v = field.values();
    cancel_radial_moments(v, g, c, 1.1 * reach, quarter, std::max(j, 2));
    field = beurling_power(ComplexField(g, std::move(v)), j);
  }
  double peak = 0.0;
  for (cplx z : probes) {
    lhs.push_back(h_derivative(q, m3, j, m3 - j, z));
    rhs.push_back(field[grid_point_index(g, z)]);
    peak = std::max(peak, std::abs(lhs.back()));
  }
  if (peak <= 1e-9 * 2 * pi * factorial(m3) * factorial(j))
    fail(Errc::degenerate_probe, "d^j dbar^(m3-j) h vanishes at every probe; use a domain other than a disk");

  DerivativeIdentity out;
  const std::size_t half = probes.size() / 2;
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    num += std::conj(rhs[i]) * lhs[i];
    den += std::norm(rhs[i]);
  }
  if (den == 0.0) fail(Errc::degenerate_probe, "B^j chi vanishes at every fitting probe");
  out.constant = num / den;
  out.fitted = static_cast<int>(half);
  out.held_out = static_cast<int>(probes.size() - half);
  double err = 0.0, top = 0.0;
  for (std::size_t i = half; i < probes.size(); ++i) {
    err = std::max(err, std::abs(lhs[i] - out.constant * rhs[i]));
    top = std::max(top, std::abs(lhs[i]));
  }
  out.defect = top > 0 ? err / top : std::numeric_limits<double>::infinity();
  return out;
}

cplx kernel_K(const ContourQuadrature& q, const MultiIndexM& m, cplx z, cplx xi) {
  if (m.m1 < 0 || m.m2 < 0 || m.m3 < 0) fail(Errc::invalid_argument, "negative kernel index");
  if (z == xi) fail(Errc::invalid_argument, "kernel needs z != xi");
  q.require_clearance(z);
  q.require_clearance(xi);
  const auto& t = q.nodes();
  const auto& w = q.weights();
  cplx s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    s += ipow(std::conj(t[i] - xi), m.m3) / (ipow(z - t[i], m.m1) * ipow(t[i] - xi, m.m2)) * w[i];
  return s;
}

cplx taylor_remainder(const DerivativeOracle& f, int M, int j, cplx z, cplx xi) {
  if (j < 0 || M < j) fail(Errc::invalid_argument, "Taylor remainder needs 0 <= j <= M");
  const cplx d = xi - z;
  cplx p = 0.0;
  for (int i1 = 0; i1 <= M - j; ++i1)
    for (int i2 = 0; i1 + i2 <= M - j; ++i2) {
      const cplx c = f(i1 + j, i2, z);
      if (c != 0.0) p += c / (factorial(i1) * factorial(i2)) * ipow(d, i1) * ipow(std::conj(d), i2);
    }
  return f(j, 0, xi) - p;
}

cplx h_taylor_remainder(const ContourQuadrature& q, int m3, int M, int j, cplx z, cplx xi) {
  HDerivatives at_z(q, m3, z);
  return taylor_remainder(
      [&](int a, int b, cplx w) { return w == z ? at_z(a, b) : h_derivative(q, m3, a, b, w); }, M, j, z, xi);
}

KernelExpansion kernel_expansion_defect(const ContourQuadrature& q, const MultiIndexM& m, cplx z, cplx xi) {
  guard_order(m);
  const int M = m.m1 + m.m3 - 3;
  const cplx d = xi - z;
  HDerivatives at_z(q, m.m3, z);
  auto oracle = [&](int a, int b, cplx w) { return w == z ? at_z(a, b) : h_derivative(q, m.m3, a, b, w); };
  KernelExpansion out;
  out.D = -kernel_K(q, m, z, xi) * ipow(z - xi, m.m1 + m.m2 - 1);
  for (int j = 0; j < m.m2; ++j) {
    const double c = binomial(m.m1 + m.m2 - 2 - j, m.m1 - 1).convert_to<double>();
    if (c == 0.0) continue;
    out.D += c * (j % 2 ? -1.0 : 1.0) / factorial(j) * ipow(d, j) * taylor_remainder(oracle, M, j, z, xi);
  }
  out.E = at_z(m.m1 - 1, m.m3 - 1) / (factorial(m.m1 - 1) * factorial(m.m3 - 1)) * ipow(d, m.m1 - 1) *
          ipow(std::conj(d), m.m3 - 1);
  out.defect = std::abs(out.D - out.E) / (std::abs(out.D) + std::abs(out.E) + 1e-300);
  return out;
}

cplx kernel_expansion_bracket(const ContourQuadrature& q, const MultiIndexM& m, cplx z, cplx xi) {
  guard_order(m);
  const int M = m.m1 + m.m3 - 3;
  const cplx d = xi - z;
  HDerivatives at_z(q, m.m3, z);
  cplx s = 0.0;
  for (int a1 = 0; a1 <= M + 1; ++a1)
    for (int a2 = 0; a1 + a2 <= M + 1; ++a2) {
      BigInt gap = binomial(m.m1 + m.m2 - 2 - a1, m.m2 - 1);
      if (a1 + a2 <= M) gap -= binomial_identity(m.m1, m.m2, a1).rhs;
      if (gap == 0) continue;
      s += at_z(a1, a2) / (factorial(a1) * factorial(a2)) * ipow(d, a1) * ipow(std::conj(d), a2) *
           gap.convert_to<double>();
    }
  return s;
}

PlemeljJump plemelj_jump(const ContourQuadrature& q, int m3, cplx xi, double t, double eps) {
  const double scale = q.domain().diameter();
  if (!(eps >= 1e-4 * scale && eps <= 1e-2 * scale))
    fail(Errc::invalid_argument, "eps must lie in [1e-4, 1e-2] times the domain diameter");
  if (q.spacing() > eps) fail(Errc::accuracy, "node spacing exceeds eps; refine the contour");
  q.require_clearance(xi);
  const cplx w = q.domain().point(t), n = q.domain().normal(t);
  auto H = [&](cplx zeta) {
    return q.integrate([&](cplx tau) { return ipow(std::conj(tau - xi), m3) / (tau - zeta); }) / cplx(0, 2 * pi);
  };
  return {H(w - eps * n) - H(w + eps * n), ipow(std::conj(w - xi), m3)};
}

ExponentFit remainder_exponent(const std::function<cplx(cplx)>& remainder, cplx z, const std::vector<double>& radii,
                               int angles, double floor) {
  if (radii.size() < 3) fail(Errc::invalid_argument, "exponent fit needs at least 3 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]) || radii[i] <= 0) fail(Errc::invalid_argument, "radii must decrease");
  if (angles < 1) fail(Errc::invalid_argument, "exponent fit needs angles");
  ExponentFit out;
  bool all_zero = true;
  for (double r : radii) {
    double s = 0.0;
    for (int a = 0; a < angles; ++a) s += std::abs(remainder(z + std::polar(r, 2 * pi * (a + 0.5) / angles)));
    out.mean_abs.push_back(s / angles);
    if (s / angles > floor) all_zero = false;
  }
  if (all_zero) {
    out.vanishing = true;
    out.slope = std::numeric_limits<double>::infinity();
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (out.mean_abs[i] <= floor) fail(Errc::invalid_argument, "remainder vanishes at some radii only");
    const double x = std::log(radii[i]), y = std::log(out.mean_abs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

ExponentFit taylor_remainder_exponent(const ContourQuadrature& q, int m3, int M, int j, cplx z,
                                      const std::vector<double>& radii, int angles) {
  HDerivatives at_z(q, m3, z);
  auto oracle = [&](int a, int b, cplx w) { return w == z ? at_z(a, b) : h_derivative(q, m3, a, b, w); };
  return remainder_exponent([&](cplx xi) { return taylor_remainder(oracle, M, j, z, xi); }, z, radii, angles);
}

double radial_vanish(const std::function<double(double)>& profile, int m, const GridSpec& g) {
  if (m < 1) fail(Errc::invalid_argument, "radial vanishing needs m >= 1");
  for (int i = 0; i < 64; ++i)
    if (profile(i / 64.0) != 1.0) fail(Errc::invalid_argument, "profile must equal 1 on the unit disk");
  const double quarter = 0.5 * g.half_width;
  if (quarter <= 1.5) fail(Errc::invalid_argument, "grid too small for the unit disk");
  const std::size_t n = g.size();
  std::vector<double> f(n), r2(n);
  for (int j = 0; j < g.resolution; ++j)
    for (int k = 0; k < g.resolution; ++k) {
      const cplx z = g.point(j, k) - g.center;
      const std::size_t i = g.index(j, k);
      r2[i] = std::norm(z);
      f[i] = profile(std::abs(z));
      if (!std::isfinite(f[i])) fail(Errc::invalid_argument, "profile is not finite");
      if (f[i] != 0.0 && std::max(std::abs(z.real()), std::abs(z.imag())) > quarter)
        fail(Errc::invalid_argument, "profile must vanish outside the central quarter");
    }

  std::vector<cplx> v(f.begin(), f.end());
  cancel_radial_moments(v, g, g.center, 1.0, quarter, m);
  const ComplexField bm = beurling_power(ComplexField(g, std::move(v)), m);
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (r2[i] <= 0.49) sup = std::max(sup, std::abs(bm[i]));
  return sup;
}

double green_defect(const WirtingerFunction& f, const WirtingerFunction& g, const ContourQuadrature& q,
                    const GridSpec& grid) {
  const LipschitzDomain& dom = q.domain();
  const double h = grid.spacing();
  auto F = [&](cplx z) { return f.d(z) + g.dbar(z); };
  cplx area = 0.0;
  for (int j = 0; j < grid.resolution; ++j)
    for (int k = 0; k < grid.resolution; ++k) {
      const cplx c = grid.point(j, k);
      if (dom.boundary_distance_capped(c, h) > 0.75 * h) {
        if (dom.contains(c)) area += F(c) * (h * h);
        continue;
      }
      const Clip piece = clip_square(dom.polygon(), c.real() - 0.5 * h, c.imag() - 0.5 * h, h);
      if (piece.area > 0) area += F(piece.centroid) * piece.area;
    }
  const cplx boundary = cplx(0, 0.5) * (q.integrate_conj(f.value) - q.integrate(g.value));
  return std::abs(area - boundary);
}

}  // namespace qclab
