#pragma once

#include <functional>
#include <vector>

#include "qclab/domain.hpp"

namespace qclab {

// Trapezoidal rule on the boundary at M uniform arc-length nodes, counterclockwise.
// Weights are z'(t_i) dt, with z' averaged across the node so polygon corners get
// half of each edge. Construction checks closure and orientation.
class ContourQuadrature {
 public:
  ContourQuadrature(const LipschitzDomain& dom, int m);

  const LipschitzDomain& domain() const { return dom_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<cplx>& nodes() const { return nodes_; }
  const std::vector<cplx>& weights() const { return weights_; }
  double spacing() const { return spacing_; }

  // sum f(tau_i) w_i
  cplx integrate(const std::function<cplx(cplx)>& f) const;
  // sum f(tau_i) conj(w_i), the integral against d(conj tau)
  cplx integrate_conj(const std::function<cplx(cplx)>& f) const;

  // Throws accuracy when z sits closer than `spacings` node spacings to the boundary.
  void require_clearance(cplx z, double spacings = 10.0) const;

 private:
  LipschitzDomain dom_;
  std::vector<cplx> nodes_, weights_;
  double spacing_ = 0.0;
};

}  // namespace qclab
