#include "qclab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qclab/gauss.hpp"

namespace qclab {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](cplx p, cplx q, cplx r) {  // r on segment pq, given collinear
    return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
           std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
  };
  if (d1 == 0 && on(a, b, c)) return true;
  if (d2 == 0 && on(a, b, d)) return true;
  if (d3 == 0 && on(c, d, a)) return true;
  if (d4 == 0 && on(c, d, b)) return true;
  return false;
}

double point_rect_distance(cplx p, double x0, double y0, double x1, double y1) {
  const double dx = std::max({x0 - p.real(), 0.0, p.real() - x1});
  const double dy = std::max({y0 - p.imag(), 0.0, p.imag() - y1});
  return std::hypot(dx, dy);
}

double segment_rect_distance(cplx a, cplx b, double x0, double y0, double x1, double y1) {
  auto inside = [&](cplx p) { return p.real() >= x0 && p.real() <= x1 && p.imag() >= y0 && p.imag() <= y1; };
  if (inside(a) || inside(b)) return 0.0;
  const cplx c[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (int e = 0; e < 4; ++e)
    if (segments_intersect(a, b, c[e], c[(e + 1) % 4])) return 0.0;
  double d = std::min(point_rect_distance(a, x0, y0, x1, y1), point_rect_distance(b, x0, y0, x1, y1));
  for (const cplx& q : c) d = std::min(d, point_segment_distance(q, a, b));
  return d;
}

double shoelace(const std::vector<cplx>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * s;
}

}  // namespace

// Uniform bucket grid over the polygon's segments, plus horizontal bands for ray casting.
class SegmentIndex {
 public:
  explicit SegmentIndex(const std::vector<cplx>& poly) : poly_(poly) {
    box_ = {poly[0].real(), poly[0].real(), poly[0].imag(), poly[0].imag()};
    double total = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      box_.xmin = std::min(box_.xmin, poly[i].real());
      box_.xmax = std::max(box_.xmax, poly[i].real());
      box_.ymin = std::min(box_.ymin, poly[i].imag());
      box_.ymax = std::max(box_.ymax, poly[i].imag());
      total += std::abs(poly[(i + 1) % poly.size()] - poly[i]);
    }
    const double w = box_.xmax - box_.xmin, h = box_.ymax - box_.ymin;
    cell_ = std::max(2.0 * total / poly.size(), std::max(w, h) / 256.0);
    nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)) + 1);
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    bands_.assign(ny_, {});
    for (int s = 0; s < static_cast<int>(poly.size()); ++s) {
      const cplx a = seg_a(s), b = seg_b(s);
      const int i0 = bx(std::min(a.real(), b.real())), i1 = bx(std::max(a.real(), b.real()));
      const int j0 = by(std::min(a.imag(), b.imag())), j1 = by(std::max(a.imag(), b.imag()));
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(i) * ny_ + j].push_back(s);
      for (int j = j0; j <= j1; ++j) bands_[j].push_back(s);
    }
  }

  int segments() const { return static_cast<int>(poly_.size()); }
  cplx seg_a(int s) const { return poly_[s]; }
  cplx seg_b(int s) const { return poly_[(s + 1) % poly_.size()]; }
  const Box& box() const { return box_; }

  // Crossing-number membership (half-open rule in y).
  bool contains(cplx p) const {
    if (p.imag() < box_.ymin || p.imag() > box_.ymax || p.real() < box_.xmin || p.real() > box_.xmax) return false;
    bool in = false;
    for (int s : bands_[by(p.imag())]) {
      const cplx a = seg_a(s), b = seg_b(s);
      if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
        const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        if (x > p.real()) in = !in;
      }
    }
    return in;
  }

  // x-coordinates where the horizontal line at y crosses the boundary, sorted.
  std::vector<double> crossings(double y) const {
    std::vector<double> xs;
    if (y < box_.ymin || y > box_.ymax) return xs;
    for (int s : bands_[by(y)]) {
      const cplx a = seg_a(s), b = seg_b(s);
      if ((a.imag() > y) != (b.imag() > y))
        xs.push_back(a.real() + (y - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag()));
    }
    std::sort(xs.begin(), xs.end());
    return xs;
  }

  double distance(cplx p, double cap) const {
    double best = cap;
    const int ci = bx_raw(p.real()), cj = by_raw(p.imag());
    // Distance from p to the bucket grid itself bounds how far the search must go.
    const double to_box = point_rect_distance(p, box_.xmin, box_.ymin, box_.xmin + nx_ * cell_,
                                              box_.ymin + ny_ * cell_);
    if (to_box >= best) return best;
    const int rmax = std::max({std::abs(ci), std::abs(ci - nx_), std::abs(cj), std::abs(cj - ny_)}) + 1;
    for (int r = 0; r <= rmax; ++r) {
      if ((r - 1) * cell_ > best) break;
      for (int i = ci - r; i <= ci + r; ++i) {
        if (i < 0 || i >= nx_) continue;
        for (int j = cj - r; j <= cj + r; ++j) {
          if (j < 0 || j >= ny_) continue;
          if (std::max(std::abs(i - ci), std::abs(j - cj)) != r) continue;
          for (int s : buckets_[static_cast<std::size_t>(i) * ny_ + j])
            best = std::min(best, point_segment_distance(p, seg_a(s), seg_b(s)));
        }
      }
    }
    return best;
  }

  template <class F>
  void for_segments_near(double x0, double y0, double x1, double y1, F&& fn) const {
    const int i0 = bx(x0), i1 = bx(x1), j0 = by(y0), j1 = by(y1);
    std::vector<char> seen(poly_.size(), 0);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j)
        for (int s : buckets_[static_cast<std::size_t>(i) * ny_ + j])
          if (!seen[s]) {
            seen[s] = 1;
            fn(s);
          }
  }

  bool self_intersects() const {
    const int n = segments();
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      const auto& list = buckets_[b];
      for (std::size_t u = 0; u < list.size(); ++u)
        for (std::size_t v = u + 1; v < list.size(); ++v) {
          const int s = list[u], t = list[v];
          const int gap = std::abs(s - t);
          if (gap == 1 || gap == n - 1) continue;  // adjacent edges share a vertex
          if (segments_intersect(seg_a(s), seg_b(s), seg_a(t), seg_b(t))) return true;
        }
    }
    return false;
  }

 private:
  int bx_raw(double x) const { return static_cast<int>(std::floor((x - box_.xmin) / cell_)); }
  int by_raw(double y) const { return static_cast<int>(std::floor((y - box_.ymin) / cell_)); }
  int bx(double x) const { return std::clamp(bx_raw(x), 0, nx_ - 1); }
  int by(double y) const { return std::clamp(by_raw(y), 0, ny_ - 1); }

  std::vector<cplx> poly_;
  Box box_{};
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
  std::vector<std::vector<int>> bands_;
};

struct LipschitzDomain::Curve {
  std::string name;
  bool is_poly = false;
  double total = 0.0;

  // polyline
  std::vector<cplx> verts;
  std::vector<double> cum;

  // smooth parameterization on [0, 2pi)
  std::function<cplx(double)> z, dz;
  bool reversed = false;
  std::vector<double> theta_edges, s_edges;
  GaussRule rule;

  // Polygonization used for membership and distances.
  std::vector<cplx> poly;

  double arc(double a, double b) const {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * std::abs(dz(c + r * rule.x[i]));
    return s * r;
  }

  double theta_of(double t) const {
    const auto it = std::upper_bound(s_edges.begin(), s_edges.end(), t);
    std::size_t p = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - s_edges.begin() - 1));
    p = std::min(p, theta_edges.size() - 2);
    const double s0 = s_edges[p], s1 = s_edges[p + 1];
    const double a = theta_edges[p], b = theta_edges[p + 1];
    double th = a + (b - a) * (t - s0) / (s1 - s0);
    for (int it2 = 0; it2 < 30; ++it2) {
      const double f = s0 + arc(a, th) - t;
      const double step = f / std::abs(dz(th));
      th -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return th;
  }

  double wrap(double t) const {
    t = std::fmod(t, total);
    if (t < 0) t += total;
    return t;
  }

  cplx eval(double t, cplx* tangent) const {
    t = wrap(t);
    if (is_poly) {
      auto it = std::upper_bound(cum.begin(), cum.end(), t);
      std::size_t i = static_cast<std::size_t>(it - cum.begin()) - 1;
      i = std::min(i, verts.size() - 1);
      const cplx a = verts[i], b = verts[(i + 1) % verts.size()];
      const double len = cum[i + 1] - cum[i];
      const cplx u = (b - a) / len;
      if (tangent) {
        // Exactly at a vertex: bisect the two edge directions.
        if (t - cum[i] == 0.0) {
          const std::size_t ip = (i + verts.size() - 1) % verts.size();
          const cplx prev = verts[i] - verts[ip];
          cplx m = u + prev / std::abs(prev);
          *tangent = std::abs(m) > 0 ? m / std::abs(m) : u;
        } else {
          *tangent = u;
        }
      }
      return a + (t - cum[i]) * u;
    }
    const double s = reversed ? wrap(total - t) : t;
    const double th = theta_of(s);
    if (tangent) {
      const cplx d = dz(th);
      *tangent = (reversed ? -d : d) / std::abs(d);
    }
    return z(th);
  }
};

double NormalField::winding() const {
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    total += std::arg(samples[(i + 1) % samples.size()] / samples[i]);
  return total;
}

namespace {

double param(const nlohmann::json& p, const char* key, double dflt) {
  return p.contains(key) ? p.at(key).get<double>() : dflt;
}

}  // namespace

void LipschitzDomain::finish(std::vector<cplx> poly) {
  auto* curve = const_cast<Curve*>(curve_.get());
  curve->poly = std::move(poly);
  auto index = std::make_shared<SegmentIndex>(curve->poly);
  if (index->self_intersects()) fail(Errc::invalid_domain, "boundary of '" + curve->name + "' self-intersects");
  index_ = index;
  area_ = shoelace(curve->poly);

  // Lipschitz estimate: tangent-angle spread over arc windows of length R.
  window_ = curve->total / 8.0;
  const int m = 512;
  std::vector<double> ang(m);
  cplx t0;
  curve->eval(0.0, &t0);
  double prev = std::arg(t0);
  for (int i = 0; i < m; ++i) {
    cplx t;
    curve->eval(curve->total * i / m, &t);
    double a = std::arg(t);
    while (a - prev > kPi) a -= 2 * kPi;
    while (a - prev < -kPi) a += 2 * kPi;
    ang[i] = a;
    prev = a;
  }
  const int half = std::max(1, static_cast<int>(m * window_ / curve->total / 2));
  delta_ = 0.0;
  for (int i = 0; i < m; ++i) {
    double lo = 1e300, hi = -1e300;
    for (int d = -half; d <= half; ++d) {
      int k = i + d;
      double shift = 0.0;
      if (k < 0) {
        k += m;
        shift = -2 * kPi;
      } else if (k >= m) {
        k -= m;
        shift = 2 * kPi;
      }
      lo = std::min(lo, ang[k] + shift);
      hi = std::max(hi, ang[k] + shift);
    }
    const double spread = hi - lo;
    delta_ = std::max(delta_, spread < kPi ? std::tan(spread / 2) : std::numeric_limits<double>::infinity());
  }
}

LipschitzDomain LipschitzDomain::polyline(std::vector<cplx> vertices) {
  if (vertices.size() < 3) fail(Errc::invalid_domain, "polyline needs at least 3 vertices");
  if (vertices.front() == vertices.back()) vertices.pop_back();
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == vertices[(i + 1) % vertices.size()]) fail(Errc::invalid_domain, "repeated polyline vertex");
  LipschitzDomain d;
  nlohmann::json vj = nlohmann::json::array();
  for (const cplx& v : vertices) vj.push_back({v.real(), v.imag()});
  d.spec_ = {{"type", "polyline"}, {"vertices", vj}};
  if (shoelace(vertices) < 0) std::reverse(vertices.begin(), vertices.end());
  auto c = std::make_shared<Curve>();
  c->name = "polyline";
  c->is_poly = true;
  c->verts = vertices;
  c->cum.assign(vertices.size() + 1, 0.0);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    c->cum[i + 1] = c->cum[i] + std::abs(vertices[(i + 1) % vertices.size()] - vertices[i]);
  c->total = c->cum.back();
  d.curve_ = c;
  d.finish(vertices);
  return d;
}

LipschitzDomain LipschitzDomain::parametric(const std::string& family, const nlohmann::json& params, int samples) {
  if (samples < 64) fail(Errc::invalid_argument, "parametric domains need at least 64 samples");
  const cplx center(param(params, "center_re", 0.0), param(params, "center_im", 0.0));
  const cplx rot = std::polar(1.0, param(params, "rotation", 0.0));
  std::function<double(double)> r, dr;
  std::function<cplx(double)> z0, dz0;
  if (family == "circle") {
    const double R = param(params, "radius", 1.0);
    if (!(R > 0)) fail(Errc::invalid_domain, "circle radius must be positive");
    r = [R](double) { return R; };
    dr = [](double) { return 0.0; };
  } else if (family == "perturbed_circle") {
    const double R = param(params, "radius", 1.0), a = param(params, "amplitude", 0.3);
    const double k = param(params, "frequency", 3.0);
    if (!(R > 0) || !(std::abs(a) < 1)) fail(Errc::invalid_domain, "perturbed_circle needs radius > 0, |amplitude| < 1");
    r = [=](double t) { return R * (1 + a * std::cos(k * t)); };
    dr = [=](double t) { return -R * a * k * std::sin(k * t); };
  } else if (family == "smoothed_square") {
    const double a = param(params, "half_side", 0.5), p = param(params, "exponent", 4.0);
    if (!(a > 0) || !(p >= 2)) fail(Errc::invalid_domain, "smoothed_square needs half_side > 0, exponent >= 2");
    auto S = [p](double t) { return std::pow(std::abs(std::cos(t)), p) + std::pow(std::abs(std::sin(t)), p); };
    auto dS = [p](double t) {
      const double c = std::cos(t), s = std::sin(t);
      const double cp = std::pow(std::abs(c), p - 1) * (c < 0 ? -1 : 1);
      const double sp = std::pow(std::abs(s), p - 1) * (s < 0 ? -1 : 1);
      return p * (-cp * s + sp * c);
    };
    r = [=](double t) { return a * std::pow(S(t), -1.0 / p); };
    dr = [=](double t) { return -a / p * std::pow(S(t), -1.0 / p - 1.0) * dS(t); };
  } else if (family == "ellipse") {
    const double a = param(params, "a", 1.0), b = param(params, "b", 0.5);
    if (!(a > 0) || !(b > 0)) fail(Errc::invalid_domain, "ellipse axes must be positive");
    z0 = [a, b](double t) { return cplx(a * std::cos(t), b * std::sin(t)); };
    dz0 = [a, b](double t) { return cplx(-a * std::sin(t), b * std::cos(t)); };
  } else {
    fail(Errc::invalid_domain, "unknown parametric family '" + family + "'");
  }
  if (!z0) {
    z0 = [r](double t) { return r(t) * std::polar(1.0, t); };
    dz0 = [r, dr](double t) { return (dr(t) + cplx(0, 1) * r(t)) * std::polar(1.0, t); };
  }

  LipschitzDomain d;
  d.spec_ = {{"type", "parametric"}, {"fn", family}, {"params", params}, {"samples", samples}};
  auto c = std::make_shared<Curve>();
  c->name = family;
  c->z = [=](double t) { return center + rot * z0(t); };
  c->dz = [=](double t) { return rot * dz0(t); };
  c->rule = gauss_legendre(12);
  const int panels = 512;
  c->theta_edges.resize(panels + 1);
  c->s_edges.assign(panels + 1, 0.0);
  for (int i = 0; i <= panels; ++i) c->theta_edges[i] = 2 * kPi * i / panels;
  for (int i = 0; i < panels; ++i) c->s_edges[i + 1] = c->s_edges[i] + c->arc(c->theta_edges[i], c->theta_edges[i + 1]);
  c->total = c->s_edges.back();
  d.curve_ = c;

  std::vector<cplx> poly(samples);
  for (int i = 0; i < samples; ++i) poly[i] = c->z(c->theta_of(c->total * i / samples));
  if (shoelace(poly) < 0) {
    c->reversed = true;
    std::reverse(poly.begin(), poly.end());
  }
  d.finish(std::move(poly));
  return d;
}

LipschitzDomain LipschitzDomain::from_json(const nlohmann::json& spec) {
  try {
    const std::string type = spec.at("type").get<std::string>();
    if (type == "polyline") {
      std::vector<cplx> v;
      for (const auto& p : spec.at("vertices")) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return polyline(std::move(v));
    }
    if (type == "parametric") {
      const nlohmann::json& body = spec.contains("parametric") ? spec.at("parametric") : spec;
      const int samples = spec.contains("samples") ? spec.at("samples").get<int>() : 4096;
      return parametric(body.at("fn").get<std::string>(),
                        body.contains("params") ? body.at("params") : nlohmann::json::object(), samples);
    }
    fail(Errc::invalid_domain, "unknown domain type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::invalid_domain, std::string("malformed domain spec: ") + e.what());
  }
}

const std::string& LipschitzDomain::name() const { return curve_->name; }
double LipschitzDomain::length() const { return curve_->total; }
double LipschitzDomain::area() const { return area_; }
const std::vector<cplx>& LipschitzDomain::polygon() const { return curve_->poly; }
Box LipschitzDomain::bbox() const { return index_->box(); }

double LipschitzDomain::diameter() const {
  // Rotating calipers would be exact for the hull; a subsampled pairwise scan is plenty here.
  const auto& p = curve_->poly;
  const std::size_t stride = std::max<std::size_t>(1, p.size() / 1024);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); i += stride)
    for (std::size_t j = i + stride; j < p.size(); j += stride) d = std::max(d, std::abs(p[i] - p[j]));
  return d;
}

cplx LipschitzDomain::centroid() const {
  const auto& p = curve_->poly;
  cplx c = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx a = p[i], b = p[(i + 1) % p.size()];
    c += (a + b) * cross(a, b);
  }
  return c / (6.0 * area_);
}

double LipschitzDomain::inradius_estimate() const {
  const Box b = bbox();
  const int m = 64;
  double best = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const cplx z(b.xmin + (b.xmax - b.xmin) * (i + 0.5) / m, b.ymin + (b.ymax - b.ymin) * (j + 0.5) / m);
      if (contains(z)) best = std::max(best, boundary_distance(z));
    }
  return best;
}

bool LipschitzDomain::contains(cplx z) const { return index_->contains(z); }

double LipschitzDomain::boundary_distance(cplx z) const {
  return index_->distance(z, std::numeric_limits<double>::infinity());
}

double LipschitzDomain::boundary_distance_capped(cplx z, double cap) const { return index_->distance(z, cap); }

double LipschitzDomain::signed_distance(cplx z) const {
  const double d = boundary_distance(z);
  return contains(z) ? d : -d;
}

double LipschitzDomain::square_distance(cplx corner, double side) const {
  const cplx c = corner + cplx(side / 2, side / 2);
  const double hd = side / std::sqrt(2.0);
  const double dc = boundary_distance(c);
  const double reach = dc + hd;
  double best = dc;
  const double x0 = corner.real(), y0 = corner.imag(), x1 = x0 + side, y1 = y0 + side;
  index_->for_segments_near(c.real() - reach, c.imag() - reach, c.real() + reach, c.imag() + reach, [&](int s) {
    best = std::min(best, segment_rect_distance(index_->seg_a(s), index_->seg_b(s), x0, y0, x1, y1));
  });
  return best;
}

double LipschitzDomain::clipped_area(cplx corner, double side) const {
  // Sutherland-Hodgman against the four half-planes of the square.
  std::vector<cplx> poly = curve_->poly;
  const double x0 = corner.real(), y0 = corner.imag(), x1 = x0 + side, y1 = y0 + side;
  auto clip = [&](auto inside, auto intersect) {
    std::vector<cplx> out;
    out.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const cplx a = poly[i], b = poly[(i + 1) % poly.size()];
      const bool ia = inside(a), ib = inside(b);
      if (ia && ib) {
        out.push_back(b);
      } else if (ia && !ib) {
        out.push_back(intersect(a, b));
      } else if (!ia && ib) {
        out.push_back(intersect(a, b));
        out.push_back(b);
      }
    }
    poly.swap(out);
  };
  auto at_x = [](double x) {
    return [x](cplx a, cplx b) {
      const double t = (x - a.real()) / (b.real() - a.real());
      return cplx(x, a.imag() + t * (b.imag() - a.imag()));
    };
  };
  auto at_y = [](double y) {
    return [y](cplx a, cplx b) {
      const double t = (y - a.imag()) / (b.imag() - a.imag());
      return cplx(a.real() + t * (b.real() - a.real()), y);
    };
  };
  clip([x0](cplx p) { return p.real() >= x0; }, at_x(x0));
  if (poly.empty()) return 0.0;
  clip([x1](cplx p) { return p.real() <= x1; }, at_x(x1));
  if (poly.empty()) return 0.0;
  clip([y0](cplx p) { return p.imag() >= y0; }, at_y(y0));
  if (poly.empty()) return 0.0;
  clip([y1](cplx p) { return p.imag() <= y1; }, at_y(y1));
  if (poly.size() < 3) return 0.0;
  return std::abs(shoelace(poly));
}

cplx LipschitzDomain::point(double t) const { return curve_->eval(t, nullptr); }

cplx LipschitzDomain::tangent(double t) const {
  cplx tan;
  curve_->eval(t, &tan);
  return tan;
}

cplx LipschitzDomain::normal(double t) const { return cplx(0, -1) * tangent(t); }

NormalField LipschitzDomain::normals(int m, double offset) const {
  if (m < 8) fail(Errc::invalid_argument, "normal field needs at least 8 nodes");
  NormalField nf;
  nf.length = length();
  nf.offset = offset;
  nf.samples.resize(m);
  for (int i = 0; i < m; ++i) nf.samples[i] = normal(offset + nf.length * i / m);
  return nf;
}

LipschitzDomain LipschitzDomain::transformed(double phi, cplx b) const {
  const cplx rot = std::polar(1.0, phi);
  if (curve_->is_poly) {
    std::vector<cplx> v;
    for (const auto& p : spec_.at("vertices")) v.push_back(rot * cplx(p.at(0).get<double>(), p.at(1).get<double>()) + b);
    return polyline(std::move(v));
  }
  nlohmann::json params = spec_.at("params");
  const cplx c0(param(params, "center_re", 0.0), param(params, "center_im", 0.0));
  const cplx c1 = rot * c0 + b;
  params["center_re"] = c1.real();
  params["center_im"] = c1.imag();
  params["rotation"] = param(params, "rotation", 0.0) + phi;
  return parametric(spec_.at("fn").get<std::string>(), params, spec_.at("samples").get<int>());
}

}  // namespace qclab
