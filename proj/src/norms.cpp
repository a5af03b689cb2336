#include "qclab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "qclab/masks.hpp"
#include "qclab/rng.hpp"

namespace qclab {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Stencil weights without the 1/h^k factor.
std::vector<double> raw_stencil(int k) {
  std::vector<double> w{1.0};
  const std::vector<double> second{1.0, -2.0, 1.0};
  for (int i = 0; i < k / 2; ++i) w = convolve(w, second);
  if (k % 2) w = convolve(w, {-0.5, 0.0, 0.5});
  return w;
}

int stencil_radius(int k) { return (k + 1) / 2; }

const std::vector<double>& cached_stencil(int k) {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t;
    for (int i = 0; i <= 16; ++i) t.push_back(raw_stencil(i));
    return t;
  }();
  if (k < 0 || k > 16) fail(Errc::invalid_argument, "derivative order out of range");
  return table[k];
}

template <class F>
cplx partial_at(F&& value, int a, int b, int j, int k, double h) {
  const std::vector<double>& wa = cached_stencil(a);
  const std::vector<double>& wb = cached_stencil(b);
  const int ra = stencil_radius(a), rb = stencil_radius(b);
  cplx s = 0.0;
  for (int u = -ra; u <= ra; ++u) {
    if (wa[u + ra] == 0.0) continue;
    for (int v = -rb; v <= rb; ++v)
      if (wb[v + rb] != 0.0) s += wa[u + ra] * wb[v + rb] * value(j + u, k + v);
  }
  return s / std::pow(h, a + b);
}

template <class F>
double grad_norm_at(F&& value, int n, int j, int k, double h) {
  double s = 0.0;
  for (int a = 0; a <= n; ++a) s += binom(n, a) * std::norm(partial_at(value, a, n - a, j, k, h));
  return std::sqrt(s);
}

double power_sum(double acc, double v, double p) {
  return std::isinf(p) ? std::max(acc, v) : acc + std::pow(v, p);
}

double finish(double acc, double p, double area) {
  return std::isinf(p) ? acc : std::pow(acc * area, 1.0 / p);
}

void check_p(double p) {
  if (!(p >= 1.0)) fail(Errc::invalid_argument, "p must be >= 1");
}

// Samples whose points lie in the half-open square; the range may be empty.
void sample_range(const GridSpec& g, const Square& q, int& j0, int& j1, int& k0, int& k1) {
  const double h = g.spacing();
  const int n = g.resolution;
  auto lo = [&](double x, double c) { return static_cast<int>(std::ceil((x - c) / h - 1e-9)) + n / 2; };
  j0 = lo(q.corner.real(), g.center.real());
  j1 = lo(q.corner.real() + q.side, g.center.real());
  k0 = lo(q.corner.imag(), g.center.imag());
  k1 = lo(q.corner.imag() + q.side, g.center.imag());
}

Square triple(const Square& q) { return Square{q.corner - cplx(q.side, q.side), 3 * q.side}; }

// Monomial exponents (a, b) with a + b <= d, ordered by total degree.
std::vector<std::pair<int, int>> exponents(int d) {
  std::vector<std::pair<int, int>> e;
  for (int t = 0; t <= d; ++t)
    for (int a = t; a >= 0; --a) e.emplace_back(a, t - a);
  return e;
}

// C-infinity step, 0 for s <= 0 and 1 for s >= 1.
double smooth_switch(double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace

Stencil centered_stencil(int k, double h) {
  Stencil s{stencil_radius(k), cached_stencil(k)};
  for (auto& w : s.w) w /= std::pow(h, k);
  return s;
}

cplx partial(const ComplexField& f, int a, int b, int j, int k) {
  const int ra = stencil_radius(a), rb = stencil_radius(b);
  if (!f.spec().contains_index(j - ra, k - rb) || !f.spec().contains_index(j + ra, k + rb))
    fail(Errc::invalid_argument, "stencil leaves the grid");
  return partial_at([&](int u, int v) { return f(u, v); }, a, b, j, k, f.spec().spacing());
}

double grad_norm(const ComplexField& f, int n, int j, int k) {
  const int r = stencil_radius(n);
  if (!f.spec().contains_index(j - r, k - r) || !f.spec().contains_index(j + r, k + r))
    fail(Errc::invalid_argument, "stencil leaves the grid");
  return grad_norm_at([&](int u, int v) { return f(u, v); }, n, j, k, f.spec().spacing());
}

double lp_norm(const ComplexField& f, double p) {
  check_p(p);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc = power_sum(acc, std::abs(f[i]), p);
  return finish(acc, p, f.spec().cell_area());
}

double lp_norm(const ComplexField& f, const LipschitzDomain& dom, double p) {
  check_p(p);
  const std::vector<char> in = membership(dom, f.spec());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (in[i]) acc = power_sum(acc, std::abs(f[i]), p);
  return finish(acc, p, f.spec().cell_area());
}

SobolevNorm sobolev_norm(const ComplexField& f, const LipschitzDomain& dom, const SobolevParams& prm,
                         SobolevForm form) {
  if (prm.n < 0) fail(Errc::invalid_argument, "sobolev order must be >= 0");
  check_p(prm.p);
  SobolevNorm out;
  out.lp = lp_norm(f, dom, prm.p);
  if (prm.n == 0) {
    out.value = out.lp;
    return out;
  }
  const GridSpec& g = f.spec();
  const int N = g.resolution, n = prm.n, r = stencil_radius(n);
  const double h = g.spacing(), collar = (n + 1) * h;
  const std::vector<char> in = membership(dom, g);
  auto value = [&](int u, int v) { return f(u, v); };
  double full = 0.0, ax = 0.0, ay = 0.0;
  long admissible = 0, inside = 0;
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      if (!in[g.index(j, k)]) continue;
      ++inside;
      if (j < r || k < r || j >= N - r || k >= N - r) continue;
      if (dom.boundary_distance_capped(g.point(j, k), 2 * collar) <= collar) continue;
      ++admissible;
      if (form == SobolevForm::full) {
        full = power_sum(full, grad_norm_at(value, n, j, k, h), prm.p);
      } else {
        ax = power_sum(ax, std::abs(partial_at(value, n, 0, j, k, h)), prm.p);
        ay = power_sum(ay, std::abs(partial_at(value, 0, n, j, k, h)), prm.p);
      }
    }
  if (admissible == 0) fail(Errc::undefined_norm, "domain thinner than the difference stencil");
  out.collar_measure = static_cast<double>(inside - admissible) * g.cell_area();
  out.derivative = form == SobolevForm::full ? finish(full, prm.p, g.cell_area())
                                             : finish(ax, prm.p, g.cell_area()) + finish(ay, prm.p, g.cell_area());
  out.value = out.lp + out.derivative;
  return out;
}

double holder_norm(const ComplexField& f, const LipschitzDomain& dom, double s, std::uint64_t seed, int pairs) {
  if (!(s > 0 && s <= 1)) fail(Errc::invalid_argument, "holder exponent must lie in (0, 1]");
  const GridSpec& g = f.spec();
  const std::vector<char> in = membership(dom, g);
  std::vector<cplx> pts, vals;
  for (int j = 0; j < g.resolution; ++j)
    for (int k = 0; k < g.resolution; ++k)
      if (in[g.index(j, k)]) {
        pts.push_back(g.point(j, k));
        vals.push_back(f(j, k));
      }
  if (pts.empty()) fail(Errc::undefined_norm, "no samples inside the domain");
  double sup = 0.0, semi = 0.0;
  for (cplx v : vals) sup = std::max(sup, std::abs(v));
  auto quotient = [&](std::size_t a, std::size_t b) {
    return std::abs(vals[a] - vals[b]) / std::pow(std::abs(pts[a] - pts[b]), s);
  };
  const std::size_t m = pts.size();
  if (m < 10000) {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) semi = std::max(semi, quotient(a, b));
  } else {
    Rng rng(seed, "holder_pairs");
    for (int i = 0; i < pairs; ++i) {
      const auto a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(m) - 1));
      const auto b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(m) - 1));
      if (a != b) semi = std::max(semi, quotient(a, b));
    }
  }
  return sup + semi;
}

double besov_boundary_seminorm(const NormalField& nf, double s, double p) {
  if (!(s > 0)) fail(Errc::invalid_argument, "besov smoothness must be positive");
  if (std::abs(s - std::round(s)) < 1e-12) fail(Errc::invalid_argument, "integer smoothness is not supported");
  check_p(p);
  const int m = static_cast<int>(nf.samples.size());
  if (m < 8) fail(Errc::insufficient_data, "too few boundary nodes");
  const int M = static_cast<int>(std::floor(s)) + 1;
  std::vector<double> c(M + 1);
  for (int r = 0; r <= M; ++r) c[r] = ((M - r) % 2 ? -1.0 : 1.0) * binom(M, r);
  const double dt = nf.spacing();
  double acc = 0.0;
  for (int k = 2; k <= m / 2; ++k) {
    double row = 0.0;
    for (int i = 0; i < m; ++i) {
      cplx d = 0.0;
      for (int r = 0; r <= M; ++r) d += c[r] * nf.samples[(i + static_cast<long>(r) * k) % m];
      row += std::pow(std::abs(d), p);
    }
    // Both signs of the step give the same sum over a full period.
    acc += 2.0 * row / std::pow(k * dt, 1.0 + s * p);
  }
  return std::pow(acc * dt * dt, 1.0 / p);
}

cplx ApproxPolynomial::operator()(cplx z) const {
  const cplx d = z - center;
  cplx s = 0.0;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) s += coeff[a][b] * std::pow(d.real(), a) * std::pow(d.imag(), b);
  return s;
}

namespace {

// With `bound`, 3Q must fit on the grid and the coefficient bound is evaluated there;
// otherwise only Q and its stencils must fit.
ApproxPolynomial fit_poly(const ComplexField& f, const Square& q, int n, bool bound) {
  if (n < 1) fail(Errc::invalid_argument, "approx_poly needs n >= 1");
  const GridSpec& g = f.spec();
  const double h = g.spacing();
  const int d = n - 1, r = stencil_radius(d);
  int j0, j1, k0, k1, t0, t1, u0, u1;
  sample_range(g, q, j0, j1, k0, k1);
  sample_range(g, bound ? triple(q) : q, t0, t1, u0, u1);
  if (t0 - r < 0 || u0 - r < 0 || t1 + r > g.resolution || u1 + r > g.resolution)
    fail(Errc::invalid_argument, bound ? "3Q leaves the grid" : "cube leaves the grid");
  const long cells = static_cast<long>(std::max(0, j1 - j0)) * std::max(0, k1 - k0);
  if (cells < static_cast<long>(n + 1) * (n + 1)) fail(Errc::singular_system, "cube holds too few samples");

  ApproxPolynomial out;
  out.degree = d;
  out.center = q.center();
  out.side = q.side;
  const auto ex = exponents(d);
  const int K = static_cast<int>(ex.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(K, K);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(K);
  for (int row = 0; row < K; ++row) {
    const auto [a, b] = ex[row];
    for (int j = j0; j < j1; ++j)
      for (int k = k0; k < k1; ++k) {
        rhs(row) += partial_at([&](int u, int v) { return f(u, v); }, a, b, j, k, h);
        for (int col = 0; col < K; ++col) {
          const auto [ga, gb] = ex[col];
          auto mono = [&](int u, int v) {
            const cplx w = (g.point(u, v) - out.center) / q.side;
            return cplx(std::pow(w.real(), ga) * std::pow(w.imag(), gb));
          };
          A(row, col) += partial_at(mono, a, b, j, k, h);
        }
      }
  }
  const auto qr = A.colPivHouseholderQr();
  if (qr.rank() < K) fail(Errc::singular_system, "degenerate moment system");
  const Eigen::VectorXcd c = qr.solve(rhs);

  out.coeff.assign(d + 1, std::vector<cplx>(d + 1, 0.0));
  double cmax = 0.0;
  for (int i = 0; i < K; ++i) {
    const auto [a, b] = ex[i];
    out.coeff[a][b] = c(i) / std::pow(q.side, a + b);
    cmax = std::max(cmax, std::abs(out.coeff[a][b]));
  }
  if (!bound) return out;
  // ||f||_{W^{n-1,inf}(3Q)}: sum over orders of the sup of each partial.
  double w = 0.0;
  for (const auto& [a, b] : ex) {
    double sup = 0.0;
    for (int j = std::max(t0, 0); j < t1; ++j)
      for (int k = std::max(u0, 0); k < u1; ++k)
        sup = std::max(sup, std::abs(partial_at([&](int u, int v) { return f(u, v); }, a, b, j, k, h)));
    w += sup;
  }
  out.coefficient_ratio = w > 0 ? cmax / (w * (1.0 + std::pow(q.side, d))) : 0.0;
  return out;
}

}  // namespace

ApproxPolynomial approx_poly(const ComplexField& f, const Square& q, int n) { return fit_poly(f, q, n, true); }

PoincareRatio poincare_ratio(const ComplexField& f, const Square& q, int n, int j, double p) {
  if (n < 1 || j < 0 || j > n) fail(Errc::invalid_argument, "poincare needs 0 <= j <= n, n >= 1");
  check_p(p);
  const GridSpec& g = f.spec();
  const double h = g.spacing();
  const Square big = triple(q);
  const ApproxPolynomial P = fit_poly(f, big, n, false);
  const int r = stencil_radius(n);
  int j0, j1, k0, k1;
  sample_range(g, big, j0, j1, k0, k1);
  if (j0 - r < 0 || k0 - r < 0 || j1 + r > g.resolution || k1 + r > g.resolution)
    fail(Errc::invalid_argument, "3Q leaves the grid");

  const cplx c = q.center();
  const double half = 1.5 * q.side;
  auto bump = [&](cplx z) {
    const double tx = std::abs(z.real() - c.real()) / half, ty = std::abs(z.imag() - c.imag()) / half;
    return smooth_switch(1.5 * (1.0 - tx)) * smooth_switch(1.5 * (1.0 - ty));
  };
  auto u = [&](int a, int b) {
    const cplx z = g.point(a, b);
    const double phi = bump(z);
    return phi == 0.0 ? cplx(0.0) : (f(a, b) - P(z)) * phi;
  };
  auto fv = [&](int a, int b) { return f(a, b); };
  double num = 0.0, den = 0.0, ref = 0.0;
  for (int a = j0; a < j1; ++a)
    for (int b = k0; b < k1; ++b) {
      num += std::pow(grad_norm_at(u, j, a, b, h), p);
      den += std::pow(grad_norm_at(fv, n, a, b, h), p);
      ref += std::pow(std::abs(f(a, b)), p);
    }
  const double area = g.cell_area();
  num = std::pow(num * area, 1.0 / p);
  den = std::pow(den * area, 1.0 / p) * std::pow(q.side, n - j);
  ref = std::pow(ref * area, 1.0 / p) * std::pow(q.side, -j);
  PoincareRatio out;
  if (den <= 1e-7 * ref) {
    out.exact = true;
    return out;
  }
  out.value = num / den;
  return out;
}

double algebra_ratio(const ComplexField& f, const ComplexField& g, const LipschitzDomain& dom,
                     const SobolevParams& prm) {
  if (!(prm.n * prm.p > 2)) fail(Errc::invalid_argument, "algebra property needs n p > 2");
  require_same_grid(f, g);
  const double fg = sobolev_norm(f * g, dom, prm).value;
  const double den = sobolev_norm(f, dom, prm).value * sobolev_norm(g, dom, prm).value;
  if (den == 0) fail(Errc::undefined_norm, "zero factor");
  return fg / den;
}

double algebra_ratio(const ComplexField& f, int m, const LipschitzDomain& dom, const SobolevParams& prm) {
  if (!(prm.n * prm.p > 2)) fail(Errc::invalid_argument, "algebra property needs n p > 2");
  if (m < prm.n || m < 1) fail(Errc::invalid_argument, "power form needs m >= n");
  const double top = sobolev_norm(pow(f, m), dom, prm).value;
  const double fn = sobolev_norm(f, dom, prm).value;
  const double sup = lp_norm(f, dom, std::numeric_limits<double>::infinity());
  const double den = std::pow(m, prm.n) * std::pow(sup, m - prm.n) * std::pow(fn, prm.n);
  if (den == 0) fail(Errc::undefined_norm, "zero factor");
  return top / den;
}

void to_json(nlohmann::json& j, const NormRecord& r) {
  j = nlohmann::json{{"norm", r.norm},
                     {"params", r.params},
                     {"domain", r.domain},
                     {"resolution", r.resolution},
                     {"collar_measure", r.collar_measure},
                     {"value", r.value}};
}

}  // namespace qclab
