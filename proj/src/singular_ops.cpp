#include "qclab/singular_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qclab/gauss.hpp"

namespace qclab {

namespace {

cplx ipow(cplx u, int e) {
  cplx r = 1.0;
  cplx b = e >= 0 ? u : 1.0 / u;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return r;
}

}  // namespace

cplx kernel_value(KernelIndex gamma, cplx u) { return ipow(u, gamma.g1) * ipow(std::conj(u), gamma.g2); }

cplx beurling_symbol(const fft::Mode& m) {
  const cplx sb = m.dbar_symbol();
  if (sb != 0.0) return m.d_symbol() / sb;
  if (m.zero()) return 0.0;
  const cplx xi(m.kx, m.ky);
  return std::conj(xi) / xi;
}

cplx cauchy_symbol(const fft::Mode& m) {
  const cplx sb = m.dbar_symbol();
  return sb != 0.0 ? 1.0 / sb : cplx(0.0);
}

void check_support(const ComplexField& f, const char* who, double threshold) {
  const GridSpec& g = f.spec();
  const int n = g.resolution;
  const int lo = n / 4, hi = n - n / 4;
  double inside = 0.0, outside = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double a = std::abs(f(j, k));
      if (j >= lo && j <= hi && k >= lo && k <= hi)
        inside += a;
      else
        outside += a;
    }
  const double total = inside + outside;
  if (total > 0.0 && outside > threshold * total) {
    std::ostringstream os;
    os << who << ": " << outside / total << " of the input mass lies outside the central quarter";
    warn(os.str());
  }
}

ComplexField beurling(const ComplexField& f) { return beurling_power(f, 1); }

ComplexField beurling_power_unchecked(const ComplexField& f, int m) {
  return fft::apply_symbol(f, [m](const fft::Mode& mode) {
    const cplx s = beurling_symbol(mode);
    if (s == 0.0) return cplx(0.0);
    cplx r = 1.0;
    const cplx b = m >= 0 ? s : std::conj(s);
    for (int i = 0; i < std::abs(m); ++i) r *= b;
    return r;
  });
}

ComplexField beurling_power(const ComplexField& f, int m) {
  if (m == 0) fail(Errc::invalid_argument, "beurling_power needs m != 0");
  check_support(f, "beurling");
  return beurling_power_unchecked(f, m);
}

ComplexField cauchy(const ComplexField& f) {
  check_support(f, "cauchy");
  return fft::apply_symbol(f, [](const fft::Mode& m) { return cauchy_symbol(m); });
}

ComplexField cauchy_adjoint(const ComplexField& f) {
  return fft::apply_symbol(f, [](const fft::Mode& m) { return std::conj(cauchy_symbol(m)); });
}

cplx diagonal_cell_integral(KernelIndex gamma, double h) {
  const int s = gamma.homogeneity();
  const int n = gamma.g1 - gamma.g2;
  if (s < -2) fail(Errc::unsupported_homogeneity, "kernel homogeneity below -2");
  if (s == -2 && n == 0) fail(Errc::unsupported_homogeneity, "kernel 1/|z|^2 has no principal value");
  // The centered square is invariant under quarter turns, which kill every
  // angular frequency that is not a multiple of 4.
  if (n % 4 != 0) return 0.0;
  // Polar form: integral over theta of e^{i n theta} F(r_max(theta)), where
  // F(R) = R^{s+2}/(s+2), or log R in the principal-value case (the log of the
  // excised radius integrates to zero against e^{i n theta}, n != 0).
  static const GaussRule rule = gauss_legendre(24);
  const double pi = std::numbers::pi;
  cplx total = 0.0;
  for (int oct = 0; oct < 4; ++oct) {
    // On [c - pi/4, c + pi/4] with c = oct*pi/2, r_max = (h/2)/cos(theta - c).
    const double c = oct * pi / 2;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double th = c + (pi / 4) * rule.x[i];
      const double rmax = 0.5 * h / std::cos(th - c);
      const double F = s == -2 ? std::log(rmax) : std::pow(rmax, s + 2) / (s + 2);
      total += (pi / 4) * rule.w[i] * F * std::polar(1.0, n * th);
    }
  }
  return total;
}

cplx lattice_sum(KernelIndex gamma) {
  if (gamma.homogeneity() != -2) fail(Errc::unsupported_homogeneity, "lattice sums need homogeneity -2");
  if ((gamma.g1 - gamma.g2) % 4 != 0) return 0.0;
  static std::mutex mutex;
  static std::map<std::pair<int, int>, cplx> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(gamma.g1, gamma.g2);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  // Square shells contribute O(r^-2) beyond the (vanishing) shell integral,
  // so truncating at R leaves an O(1/R) tail; two radii remove its leading term.
  auto partial = [&](int R) {
    cplx s = 0.0;
    for (int r = 1; r <= R; ++r) {
      cplx shell = 0.0;
      for (int t = -r; t < r; ++t) {
        // The four sides of the shell, each visited once.
        shell += kernel_value(gamma, cplx(r, t)) + kernel_value(gamma, cplx(-t, r)) +
                 kernel_value(gamma, cplx(-r, -t)) + kernel_value(gamma, cplx(t, -r));
      }
      s += shell;
    }
    return s;
  };
  const int R = 1024;
  const cplx s1 = partial(R), s2 = partial(2 * R);
  const cplx value = 2.0 * s2 - s1;
  cache.emplace(key, value);
  return value;
}

cplx diagonal_weight(KernelIndex gamma, double h) {
  const cplx cell = diagonal_cell_integral(gamma, h);
  if (gamma.homogeneity() != -2) return cell;
  return cell - lattice_sum(gamma);
}

std::size_t grid_point_index(const GridSpec& g, cplx z) {
  const int j = g.nearest_j(z), k = g.nearest_k(z);
  if (!g.contains_index(j, k) || std::abs(g.point(j, k) - z) > 1e-9 * g.spacing()) {
    std::ostringstream os;
    os << "point (" << z.real() << ", " << z.imag() << ") is not a grid point";
    fail(Errc::invalid_argument, os.str());
  }
  return g.index(j, k);
}

std::vector<cplx> tgamma_pv(KernelIndex gamma, const ComplexField& f, const std::vector<cplx>& pts) {
  const GridSpec& g = f.spec();
  const cplx diag = diagonal_weight(gamma, g.spacing());
  const double area = g.cell_area();
  const int n = g.resolution;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) support.push_back(i);
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (const cplx& z : pts) {
    const std::size_t iz = grid_point_index(g, z);
    const cplx zg = g.point(static_cast<int>(iz / n), static_cast<int>(iz % n));
    cplx acc = 0.0;
    for (std::size_t i : support) {
      if (i == iz) continue;
      const cplx w = g.point(static_cast<int>(i / n), static_cast<int>(i % n));
      acc += kernel_value(gamma, zg - w) * f[i];
    }
    out.push_back(acc * area + diag * f[iz]);
  }
  return out;
}

ComplexField tgamma_apply(KernelIndex gamma, const ComplexField& f) {
  const GridSpec& g = f.spec();
  const int n = g.resolution, m = 2 * n;
  const double h = g.spacing();
  const cplx diag = diagonal_weight(gamma, h);
  std::vector<cplx> ker(static_cast<std::size_t>(m) * m, 0.0), pad(ker.size(), 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const int da = a < n ? a : a - m, db = b < n ? b : b - m;
      const std::size_t i = static_cast<std::size_t>(a) * m + b;
      ker[i] = (da == 0 && db == 0) ? diag : kernel_value(gamma, cplx(h * da, h * db)) * h * h;
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) pad[static_cast<std::size_t>(j) * m + k] = f(j, k);
  fft::forward(ker, m);
  fft::forward(pad, m);
  for (std::size_t i = 0; i < pad.size(); ++i) pad[i] *= ker[i];
  fft::inverse(pad, m);
  std::vector<cplx> out(g.size());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out[g.index(j, k)] = pad[static_cast<std::size_t>(j) * m + k];
  return ComplexField(g, std::move(out));
}

}  // namespace qclab
