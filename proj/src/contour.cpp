#include "qclab/contour.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qclab {

ContourQuadrature::ContourQuadrature(const LipschitzDomain& dom, int m) : dom_(dom) {
  if (m < 256) fail(Errc::invalid_argument, "contour quadrature needs at least 256 nodes");
  const double len = dom.length();
  spacing_ = len / m;
  const double eps = 1e-7 * spacing_;
  nodes_.resize(m);
  weights_.resize(m);
  cplx total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double t = spacing_ * i;
    nodes_[i] = dom.point(t);
    weights_[i] = 0.5 * (dom.tangent(t - eps) + dom.tangent(t + eps)) * spacing_;
    total += weights_[i];
  }
  if (std::abs(total) > 1e-10 * std::max(1.0, len))
    fail(Errc::accuracy, "contour does not close: |sum of weights| = " + std::to_string(std::abs(total)));

  // Winding number about an interior point. Polygons converge only algebraically, so
  // this guards orientation rather than accuracy.
  cplx z0 = dom.centroid();
  if (!dom.contains(z0) || dom.boundary_distance(z0) < 2 * spacing_) {
    const double step = 0.5 * dom.inradius_estimate();
    z0 = dom.point(0.0) - step * dom.normal(0.0);
  }
  const cplx wind = integrate([&](cplx tau) { return 1.0 / (tau - z0); });
  if (std::abs(wind - cplx(0, 2 * std::numbers::pi)) > 1e-3) {
    std::ostringstream os;
    os << "contour winding integral is " << wind << ", expected 2 pi i";
    fail(Errc::invalid_domain, os.str());
  }
}

cplx ContourQuadrature::integrate(const std::function<cplx(cplx)>& f) const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += f(nodes_[i]) * weights_[i];
  return s;
}

cplx ContourQuadrature::integrate_conj(const std::function<cplx(cplx)>& f) const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += f(nodes_[i]) * std::conj(weights_[i]);
  return s;
}

void ContourQuadrature::require_clearance(cplx z, double spacings) const {
  if (!dom_.contains(z)) fail(Errc::invalid_argument, "point is not inside the domain");
  if (dom_.boundary_distance(z) < spacings * spacing_)
    fail(Errc::accuracy, "point is within " + std::to_string(spacings) + " node spacings of the boundary");
}

}  // namespace qclab
