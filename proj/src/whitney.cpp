#include "qclab/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_map>

#include "qclab/masks.hpp"
#include "qclab/maximal.hpp"

namespace qclab {

double Square::diameter() const { return side * std::sqrt(2.0); }

bool Square::contains(cplx z) const {
  return z.real() >= corner.real() && z.real() < corner.real() + side && z.imag() >= corner.imag() &&
         z.imag() < corner.imag() + side;
}

double square_gap(const Square& a, const Square& b) {
  const double dx = std::max({0.0, b.corner.real() - (a.corner.real() + a.side), a.corner.real() - (b.corner.real() + b.side)});
  const double dy = std::max({0.0, b.corner.imag() - (a.corner.imag() + a.side), a.corner.imag() - (b.corner.imag() + b.side)});
  return std::hypot(dx, dy);
}

double long_distance(const Square& a, const Square& b) { return a.diameter() + b.diameter() + square_gap(a, b); }

namespace {

// Dyadic tiling of the bounding box at the coarsest scale not exceeding its extent.
std::vector<Square> roots(const Box& b) {
  const double extent = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  const double s = std::exp2(std::floor(std::log2(extent)));
  std::vector<Square> out;
  for (double x = std::floor(b.xmin / s) * s; x <= b.xmax; x += s)
    for (double y = std::floor(b.ymin / s) * s; y <= b.ymax; y += s) out.push_back({cplx(x, y), s});
  return out;
}

}  // namespace

WhitneyCovering::WhitneyCovering(const LipschitzDomain& dom, double min_side, double cw)
    : dom_(dom), min_side_(min_side), cw_(cw) {
  if (!(min_side > 0)) fail(Errc::invalid_argument, "min_side must be positive");
  if (!(cw >= 1)) fail(Errc::invalid_argument, "Whitney constant must be >= 1");

  // A square is kept once it sits inside the domain at distance >= cw * side. Its
  // parent was rejected with dist < 2 cw side, so dist < (2 cw + sqrt 2) side.
  std::function<void(const Square&)> visit = [&](const Square& q) {
    const double dist = dom_.square_distance(q.corner, q.side);
    const bool inside = dom_.contains(q.center());
    if (dist > 0 && !inside) return;
    if (inside && dist >= cw_ * q.side) {
      cubes_.push_back({q, dist, -std::ilogb(q.side)});
      return;
    }
    const double h = q.side / 2;
    if (h < min_side_) {
      collar_ += dom_.clipped_area(q.corner, q.side);
      return;
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) visit({q.corner + cplx(a * h, b * h), h});
  };
  for (const Square& r : roots(dom_.bbox())) visit(r);
  if (cubes_.empty()) fail(Errc::empty_cover, "no Whitney cube of side >= min_side fits in the domain");

  // 2:1 balance. A cube with a neighbor of a quarter its side is within about
  // 1.35 of its side from the boundary, so its children still satisfy the bounds.
  for (bool changed = true; changed;) {
    changed = false;
    const int n = size();
    std::vector<char> split(n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (side(a) > 2 * side(b) && square_gap(cubes_[a].sq, cubes_[b].sq) == 0.0) split[a] = 1;
    std::vector<WhitneyCube> next;
    for (int a = 0; a < n; ++a) {
      if (!split[a]) {
        next.push_back(cubes_[a]);
        continue;
      }
      changed = true;
      const double h = side(a) / 2;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          const Square q{cubes_[a].sq.corner + cplx(x * h, y * h), h};
          next.push_back({q, dom_.square_distance(q.corner, h), cubes_[a].generation + 1});
        }
    }
    cubes_.swap(next);
  }

  // Neighbors: closures meet.
  const int n = size();
  adj_.assign(n, {});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (square_gap(cubes_[a].sq, cubes_[b].sq) == 0.0) {
        adj_[a].push_back(b);
        adj_[b].push_back(a);
      }

  const cplx c = dom_.centroid();
  q0_ = 0;
  for (int i = 1; i < n; ++i) {
    const double si = side(i), s0 = side(q0_);
    if (si > s0 || (si == s0 && std::abs(cubes_[i].sq.center() - c) < std::abs(cubes_[q0_].sq.center() - c))) q0_ = i;
  }

  cell_ = side(q0_);
  for (int i = 0; i < n; ++i) {
    const Square& s = cubes_[i].sq;
    const long x0 = static_cast<long>(std::floor(s.corner.real() / cell_));
    const long y0 = static_cast<long>(std::floor(s.corner.imag() / cell_));
    buckets_[{x0, y0}].push_back(i);
  }
  build_ascents();
}

bool WhitneyCovering::are_neighbors(int a, int b) const {
  return std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end();
}

int WhitneyCovering::locate(cplx z) const {
  const auto it = buckets_.find({static_cast<long>(std::floor(z.real() / cell_)), static_cast<long>(std::floor(z.imag() / cell_))});
  if (it == buckets_.end()) return -1;
  for (int i : it->second)
    if (cubes_[i].sq.contains(z)) return i;
  return -1;
}

void WhitneyCovering::build_ascents() {
  const int n = size();
  auto bfs = [&](int from, int to) {  // hop-shortest path, both ends included
    std::vector<int> prev(n, -1);
    std::deque<int> queue{from};
    prev[from] = from;
    while (!queue.empty() && prev[to] < 0) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj_[u])
        if (prev[v] < 0) {
          prev[v] = u;
          queue.push_back(v);
        }
    }
    std::vector<int> path;
    if (prev[to] < 0) return path;
    for (int v = to; v != from; v = prev[v]) path.push_back(v);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  };

  // Walk the segment from the cube's center to the center of Q0, recording the
  // cubes it crosses; gaps (collar, skipped corners) are bridged through the graph.
  double smallest = side(0);
  for (int i = 1; i < n; ++i) smallest = std::min(smallest, side(i));
  const cplx z0 = cubes_[q0_].sq.center();
  ascent_.assign(n, {});
  on_ascent_.assign(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    const cplx a = cubes_[i].sq.center();
    const int steps = std::max(1, static_cast<int>(std::ceil(4 * std::abs(z0 - a) / smallest)));
    std::vector<int> seq{i};
    for (int t = 1; t <= steps; ++t) {
      const int c = locate(a + (z0 - a) * (static_cast<double>(t) / steps));
      if (c >= 0 && c != seq.back()) seq.push_back(c);
    }
    if (seq.back() != q0_) seq.push_back(q0_);
    std::vector<int>& path = ascent_[i];
    path.push_back(seq[0]);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      if (are_neighbors(path.back(), seq[k])) {
        path.push_back(seq[k]);
        continue;
      }
      const std::vector<int> bridge = bfs(path.back(), seq[k]);
      if (bridge.empty()) {
        path.clear();
        break;
      }
      path.insert(path.end(), bridge.begin() + 1, bridge.end());
    }
    // A cube visited twice closes a loop; cut it out.
    std::vector<int> clean;
    std::vector<int> where(n, -1);
    for (int c : path) {
      if (where[c] >= 0) {
        for (std::size_t k = where[c] + 1; k < clean.size(); ++k) where[clean[k]] = -1;
        clean.resize(where[c] + 1);
        continue;
      }
      where[c] = static_cast<int>(clean.size());
      clean.push_back(c);
    }
    path.swap(clean);
    for (int p : path) on_ascent_[i][p] = 1;
  }
}

Chain WhitneyCovering::chain(int q, int s) const {
  if (q < 0 || s < 0 || q >= size() || s >= size()) fail(Errc::invalid_argument, "cube index out of range");
  const auto& a = ascent_[q];
  const auto& b = ascent_[s];
  if (a.empty() || b.empty()) fail(Errc::no_chain, "covering is disconnected");
  std::unordered_map<int, int> pos;
  for (int j = 0; j < static_cast<int>(b.size()); ++j) pos.emplace(b[j], j);

  // Splice at the first cube of Q's ascent that meets S's ascent.
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    int jbest = -1;
    bool same = false;
    if (auto it = pos.find(a[i]); it != pos.end()) {
      jbest = it->second;
      same = true;
    }
    for (int v : adj_[a[i]])
      if (auto it = pos.find(v); it != pos.end() && (jbest < 0 || it->second < jbest)) {
        jbest = it->second;
        same = false;
      }
    if (jbest < 0) continue;
    Chain c;
    c.cubes.assign(a.begin(), a.begin() + i + 1);
    c.pivot_q = i;
    if (same) {
      c.pivot_s = i;
      for (int j = jbest - 1; j >= 0; --j) c.cubes.push_back(b[j]);
    } else {
      c.pivot_s = i + 1;
      for (int j = jbest; j >= 0; --j) c.cubes.push_back(b[j]);
    }
    return c;
  }
  fail(Errc::no_chain, "ascents never meet");
}

double WhitneyCovering::chain_length(const Chain& c) const {
  double s = 0.0;
  for (int i : c.cubes) s += side(i);
  return s;
}

std::vector<int> WhitneyCovering::shadow(int q, double rho) const {
  if (rho < 1) fail(Errc::invalid_argument, "shadow needs rho >= 1");
  std::vector<int> out;
  const double r = rho * side(q);
  for (int s = 0; s < size(); ++s)
    if (D(s, q) <= r) out.push_back(s);
  return out;
}

bool WhitneyCovering::descends(int s, int q) const { return on_ascent_[s][q] != 0; }

std::map<int, int> WhitneyCovering::census() const {
  std::map<int, int> m;
  for (const auto& c : cubes_) ++m[c.generation];
  return m;
}

CoveringAudit WhitneyCovering::audit() const {
  CoveringAudit a;
  const int n = size();
  a.min_dist_ratio = 1e300;
  double area = 0.0;
  for (const auto& c : cubes_) {
    a.min_dist_ratio = std::min(a.min_dist_ratio, c.dist / (cw_ * c.sq.side));
    a.max_dist_ratio = std::max(a.max_dist_ratio, c.dist / (cw_ * c.sq.side));
    area += c.sq.side * c.sq.side;
  }
  for (int i = 0; i < n; ++i)
    for (int j : adj_[i]) a.max_neighbor_ratio = std::max(a.max_neighbor_ratio, side(i) / side(j));
  a.partition_defect = std::abs(area + collar_ - dom_.area());
  a.collar_constant = collar_ / (dom_.length() * min_side_);
  a.q0_constant = dom_.diameter() / side(q0_);

  // Open squares are disjoint iff no pair overlaps with positive area.
  for (int i = 0; i < n && a.disjoint; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Square &p = cubes_[i].sq, &q = cubes_[j].sq;
      const double ox = std::min(p.corner.real() + p.side, q.corner.real() + q.side) - std::max(p.corner.real(), q.corner.real());
      const double oy = std::min(p.corner.imag() + p.side, q.corner.imag() + q.side) - std::max(p.corner.imag(), q.corner.imag());
      if (ox > 0 && oy > 0) {
        a.disjoint = false;
        break;
      }
    }
  for (int i = 0; i < n; ++i) a.connected = a.connected && !ascent_[i].empty();

  // Overlap of the 20-fold dilates, probed at cube centers and corners.
  for (int i = 0; i < n; ++i) {
    const Square& s = cubes_[i].sq;
    for (cplx z : {s.center(), s.corner}) {
      int count = 0;
      for (int j = 0; j < n; ++j) {
        const Square& t = cubes_[j].sq;
        const cplx d = z - t.center();
        if (std::abs(d.real()) < 10 * t.side && std::abs(d.imag()) < 10 * t.side) ++count;
      }
      a.overlap20 = std::max(a.overlap20, count);
    }
  }
  return a;
}

void WhitneyCovering::write_csv(std::ostream& os) const {
  os << "corner_x,corner_y,side,dist_to_boundary\n";
  os.precision(17);
  for (const auto& c : cubes_) os << c.sq.corner.real() << ',' << c.sq.corner.imag() << ',' << c.sq.side << ',' << c.dist << '\n';
}

WhitneyCovering whitney(const LipschitzDomain& dom, double min_side, double cw) { return WhitneyCovering(dom, min_side, cw); }

ChainAudit audit_chains(const WhitneyCovering& cov) {
  ChainAudit r;
  const int n = cov.size();
  for (int q = 0; q < n; ++q)
    for (int s = 0; s < n; ++s) {
      const Chain c = cov.chain(q, s);
      ++r.pairs;
      const double dqs = cov.D(q, s);
      r.max_length_ratio = std::max(r.max_length_ratio, cov.chain_length(c) / dqs);
      for (std::size_t i = 0; i + 1 < c.cubes.size(); ++i)
        if (c.cubes[i] != c.cubes[i + 1] && !cov.are_neighbors(c.cubes[i], c.cubes[i + 1])) r.neighbors_ok = false;
      for (int i = 0; i <= c.pivot_q; ++i) {
        const int p = c.cubes[i];
        const double far = cov.D(p, s) / dqs, close = cov.D(p, q) / cov.side(p);
        r.far_min = std::min(r.far_min, far);
        r.far_max = std::max(r.far_max, far);
        r.close_min = std::min(r.close_min, close);
        r.close_max = std::max(r.close_max, close);
      }
    }
  return r;
}

ShadowAudit audit_shadows(const WhitneyCovering& cov, double rho0) {
  ShadowAudit r;
  const int n = cov.size();
  // Smallest rho that puts every descendant S of Q in SH(Q).
  double need = 1.0;
  for (int s = 0; s < n; ++s)
    for (int q : cov.ascent(s)) need = std::max(need, cov.D(s, q) / cov.side(q));
  r.rho0 = rho0;
  while (r.rho0 < need) {
    r.rho0 += 1.0;
    ++r.recalibrations;
  }
  r.containment = true;
  for (int s = 0; s < n && r.containment; ++s)
    for (int q : cov.ascent(s))
      if (cov.D(s, q) > r.rho0 * cov.side(q)) {
        r.containment = false;
        break;
      }
  for (int p = 0; p < n; ++p) {
    double a = 0.0;
    for (int s : cov.shadow(p, r.rho0)) a += cov.side(s) * cov.side(s);
    r.max_area_ratio = std::max(r.max_area_ratio, a / (cov.side(p) * cov.side(p)));
  }
  return r;
}

namespace {

double domain_lp(const ComplexField& f, const std::vector<char>& in, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (in[i]) s += std::pow(std::abs(f[i]), p);
  return std::pow(s * f.spec().cell_area(), 1.0 / p);
}

}  // namespace

double chain_sum_ratio(const WhitneyCovering& cov, const ComplexField& f, const ComplexField& g, double rho, double p) {
  require_same_grid(f, g);
  if (cov.size() == 0) fail(Errc::invalid_argument, "empty covering");
  if (rho < 1) fail(Errc::invalid_argument, "chain_sum_ratio needs rho >= 1");
  if (!(p > 1)) fail(Errc::invalid_argument, "chain_sum_ratio needs 1 < p < inf");
  const int n = cov.size();
  const BoxSums fs(f), gs(g);
  std::vector<double> f20(n), g20(n);
  for (int i = 0; i < n; ++i) {
    const Square& q = cov.cube(i).sq;
    const Square big{q.center() - cplx(10 * q.side, 10 * q.side), 20 * q.side};
    f20[i] = fs.square(big);
    g20[i] = gs.square(big);
  }
  const std::vector<char> in = membership(cov.domain(), f.spec());
  const double q = p / (p - 1);
  const double den = domain_lp(f, in, p) * domain_lp(g, in, q);
  if (den == 0.0) return 0.0;

  double total = 0.0;
  for (int qi = 0; qi < n; ++qi) {
    if (g20[qi] == 0.0) continue;
    for (int si = 0; si < n; ++si) {
      const double ls = cov.side(si), dqs = cov.D(qi, si);
      const Chain c = cov.chain(si, qi);
      double inner = 0.0;
      for (int pi : c.cubes) inner += std::pow(cov.D(pi, si), rho - 1) * f20[pi] / cov.side(pi);
      total += ls * ls * inner * g20[qi] / std::pow(dqs, rho + 2);
    }
  }
  return total / den;
}

}  // namespace qclab
