#include "qclab/masks.hpp"

#include <algorithm>
#include <cmath>

namespace qclab {

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

std::vector<char> membership(const LipschitzDomain& dom, const GridSpec& g) {
  const int n = g.resolution;
  std::vector<char> in(g.size(), 0);
  const auto& poly = dom.polygon();
  // Scanline fill: for each row of constant y, toggle at the sorted crossings.
  for (int k = 0; k < n; ++k) {
    const double y = g.point(0, k).imag();
    std::vector<double> xs;
    for (std::size_t s = 0; s < poly.size(); ++s) {
      const cplx a = poly[s], b = poly[(s + 1) % poly.size()];
      if ((a.imag() > y) != (b.imag() > y))
        xs.push_back(a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag()));
    }
    std::sort(xs.begin(), xs.end());
    std::size_t c = 0;
    for (int j = 0; j < n; ++j) {
      const double x = g.point(j, k).real();
      while (c < xs.size() && xs[c] <= x) ++c;
      in[g.index(j, k)] = static_cast<char>(c % 2);
    }
  }
  return in;
}

ComplexField domain_mask(const LipschitzDomain& dom, const GridSpec& g, MaskKind kind, double collar) {
  const std::vector<char> in = membership(dom, g);
  std::vector<cplx> v(g.size(), 0.0);
  const double h = g.spacing();
  const int n = g.resolution;
  switch (kind) {
    case MaskKind::sharp:
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = in[i] ? 1.0 : 0.0;
      break;
    case MaskKind::mollified: {
      const double w = collar > 0.0 ? collar : 4.0 * h;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const std::size_t i = g.index(j, k);
          if (!in[i]) continue;
          const double d = dom.boundary_distance_capped(g.point(j, k), w);
          v[i] = smooth_step(d / w);
        }
      break;
    }
    case MaskKind::area_weighted: {
      const int sub = 16;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const std::size_t i = g.index(j, k);
          const cplx z = g.point(j, k);
          const double d = dom.boundary_distance_capped(z, h);
          if (d >= 0.75 * h) {
            v[i] = in[i] ? 1.0 : 0.0;
            continue;
          }
          int count = 0;
          for (int a = 0; a < sub; ++a)
            for (int b = 0; b < sub; ++b)
              count += dom.contains(z + cplx(h * ((a + 0.5) / sub - 0.5), h * ((b + 0.5) / sub - 0.5)));
          v[i] = static_cast<double>(count) / (sub * sub);
        }
      break;
    }
  }
  return ComplexField(g, std::move(v));
}

bool inside_central_quarter(const LipschitzDomain& dom, const GridSpec& g) {
  const Box b = dom.bbox();
  const double q = g.half_width / 2.0;
  const cplx c = g.center;
  return b.xmin >= c.real() - q && b.xmax <= c.real() + q && b.ymin >= c.imag() - q && b.ymax <= c.imag() + q;
}

}  // namespace qclab
