#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "qclab/error.hpp"

namespace qclab {

struct Box {
  double xmin, xmax, ymin, ymax;
};

// Outward unit normals sampled at M uniform arc-length nodes t_i = offset + i*T/M.
struct NormalField {
  std::vector<cplx> samples;
  double length = 0.0;
  double offset = 0.0;

  double spacing() const { return length / static_cast<double>(samples.size()); }
  // Total turning of N over one loop, in radians.
  double winding() const;
};

class SegmentIndex;

// Simple closed curve oriented counterclockwise, reparameterized by arc length.
// Membership and boundary distance work on a dense polygonization.
class LipschitzDomain {
 public:
  static LipschitzDomain polyline(std::vector<cplx> vertices);
  // Named families: circle, ellipse, perturbed_circle, smoothed_square. Every family
  // accepts center_re, center_im and rotation on top of its shape parameters.
  static LipschitzDomain parametric(const std::string& family, const nlohmann::json& params, int samples = 4096);
  static LipschitzDomain from_json(const nlohmann::json& spec);

  nlohmann::json to_json() const { return spec_; }
  const std::string& name() const;

  double length() const;
  double area() const;
  double diameter() const;
  Box bbox() const;
  cplx centroid() const;
  double inradius_estimate() const;
  double delta() const { return delta_; }  // Lipschitz constant estimate
  double window() const { return window_; }

  bool contains(cplx z) const;
  double boundary_distance(cplx z) const;
  // Distance to the boundary, or `cap` if it exceeds `cap` (cheaper).
  double boundary_distance_capped(cplx z, double cap) const;
  double signed_distance(cplx z) const;  // positive inside
  double square_distance(cplx corner, double side) const;  // dist(square, boundary)
  // Area of the part of the domain inside the axis-parallel square.
  double clipped_area(cplx corner, double side) const;

  cplx point(double t) const;
  cplx tangent(double t) const;  // unit, counterclockwise
  cplx normal(double t) const;   // unit, outward
  NormalField normals(int m, double offset = 0.0) const;

  const std::vector<cplx>& polygon() const;

  // Same shape rotated about the origin by phi and shifted by b.
  LipschitzDomain transformed(double phi, cplx b) const;

  struct Curve;

 private:
  LipschitzDomain() = default;
  void finish(std::vector<cplx> poly);

  nlohmann::json spec_;
  std::shared_ptr<const Curve> curve_;
  std::shared_ptr<const SegmentIndex> index_;
  double area_ = 0.0;
  double delta_ = 0.0;
  double window_ = 0.0;
};

}  // namespace qclab
