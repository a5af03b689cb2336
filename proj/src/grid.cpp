#include "qclab/grid.hpp"

#include <cmath>
#include <sstream>

#include "qclab/fft.hpp"

namespace qclab {

int GridSpec::nearest_j(cplx z) const {
  return static_cast<int>(std::lround((z.real() - center.real()) / spacing())) + resolution / 2;
}

int GridSpec::nearest_k(cplx z) const {
  return static_cast<int>(std::lround((z.imag() - center.imag()) / spacing())) + resolution / 2;
}

GridSpec make_grid(cplx center, double half_width, int resolution) {
  if (resolution < 16 || (resolution & (resolution - 1)) != 0)
    fail(Errc::invalid_argument, "resolution must be a power of two >= 16, got " + std::to_string(resolution));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    fail(Errc::invalid_argument, "half_width must be positive");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
    fail(Errc::invalid_argument, "grid center must be finite");
  return GridSpec{center, half_width, resolution};
}

ComplexField::ComplexField(GridSpec spec, std::vector<cplx> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size())
    fail(Errc::invalid_argument, "field has " + std::to_string(values_.size()) + " samples, grid needs " +
                                     std::to_string(spec_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      const int j = static_cast<int>(i / spec_.resolution), k = static_cast<int>(i % spec_.resolution);
      std::ostringstream os;
      os << "non-finite sample at (" << j << ", " << k << ")";
      fail(Errc::sampling, os.str());
    }
  }
}

ComplexField ComplexField::zeros(const GridSpec& spec) { return constant(spec, 0.0); }

ComplexField ComplexField::constant(const GridSpec& spec, cplx c) {
  return ComplexField(spec, std::vector<cplx>(spec.size(), c));
}

void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!(a.spec() == b.spec())) fail(Errc::invalid_argument, "fields live on different grids");
}

namespace {

template <class Op>
ComplexField zip(const ComplexField& a, const ComplexField& b, Op op) {
  require_same_grid(a, b);
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return ComplexField(a.spec(), std::move(out));
}

}  // namespace

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, [](cplx x, cplx y) { return x + y; });
}
ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, [](cplx x, cplx y) { return x - y; });
}
ComplexField operator*(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, [](cplx x, cplx y) { return x * y; });
}
ComplexField operator*(cplx c, const ComplexField& a) {
  return a.map([c](cplx x) { return c * x; });
}
ComplexField operator*(const ComplexField& a, cplx c) { return c * a; }
ComplexField operator+(const ComplexField& a, cplx c) {
  return a.map([c](cplx x) { return x + c; });
}
ComplexField operator-(const ComplexField& a, cplx c) {
  return a.map([c](cplx x) { return x - c; });
}
ComplexField conj(const ComplexField& a) {
  return a.map([](cplx x) { return std::conj(x); });
}
ComplexField pow(const ComplexField& a, int m) {
  return a.map([m](cplx x) {
    cplx r = 1.0;
    for (int i = 0; i < m; ++i) r *= x;
    return r;
  });
}

cplx integral(const ComplexField& f) {
  cplx s = 0.0;
  for (cplx v : f.values()) s += v;
  return s * f.spec().cell_area();
}

cplx mean(const ComplexField& f) {
  cplx s = 0.0;
  for (cplx v : f.values()) s += v;
  return s / static_cast<double>(f.size());
}

double l2_norm(const ComplexField& f) {
  double s = 0.0;
  for (cplx v : f.values()) s += std::norm(v);
  return std::sqrt(s * f.spec().cell_area());
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (cplx v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

ComplexField sample(const std::function<cplx(cplx)>& fn, const GridSpec& spec) {
  const int n = spec.resolution;
  std::vector<cplx> out(spec.size());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const cplx z = spec.point(j, k);
      const cplx v = fn(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "function is not finite at z = (" << z.real() << ", " << z.imag() << ")";
        fail(Errc::sampling, os.str());
      }
      out[spec.index(j, k)] = v;
    }
  }
  return ComplexField(spec, std::move(out));
}

ComplexField coordinate_field(const GridSpec& spec) {
  return sample([](cplx z) { return z; }, spec);
}

Wirtinger wirtinger(const ComplexField& f) {
  return Wirtinger{fft::apply_symbol(f, [](const fft::Mode& m) { return m.d_symbol(); }),
                   fft::apply_symbol(f, [](const fft::Mode& m) { return m.dbar_symbol(); })};
}

}  // namespace qclab
