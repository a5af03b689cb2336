#pragma once

#include <cmath>
#include <vector>

#include "qclab/fft.hpp"
#include "qclab/grid.hpp"
#include "qclab/rng.hpp"

namespace qtest {

using qclab::cplx;

// Random trigonometric polynomial with |frequency| <= kmax on each axis.
inline qclab::ComplexField band_limited(const qclab::GridSpec& g, int kmax, std::uint64_t seed) {
  const int n = g.resolution;
  qclab::Rng rng(seed, "band_limited");
  std::vector<cplx> c(g.size(), 0.0);
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b) {
      const int ia = (a + n) % n, ib = (b + n) % n;
      c[static_cast<std::size_t>(ia) * n + ib] = cplx(rng.normal(), rng.normal());
    }
  qclab::fft::inverse(c, n);
  return qclab::ComplexField(g, std::move(c));
}

inline qclab::ComplexField white_noise(const qclab::GridSpec& g, std::uint64_t seed) {
  qclab::Rng rng(seed, "white_noise");
  std::vector<cplx> v(g.size());
  for (auto& x : v) x = cplx(rng.normal(), rng.normal());
  return qclab::ComplexField(g, std::move(v));
}

inline cplx gaussian(cplx z, cplx c, double s) { return std::exp(-std::norm(z - c) / (s * s)); }

inline double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace qtest
