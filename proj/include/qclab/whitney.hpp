#pragma once

#include <map>
#include <ostream>
#include <vector>

#include "qclab/domain.hpp"
#include "qclab/grid.hpp"

namespace qclab {

// Axis-parallel square [x, x + side) x [y, y + side).
struct Square {
  cplx corner;
  double side = 0.0;

  cplx center() const { return corner + cplx(side / 2, side / 2); }
  double diameter() const;
  bool contains(cplx z) const;
};

double square_gap(const Square& a, const Square& b);  // Euclidean distance between closures
// diam A + diam B + dist(A, B)
double long_distance(const Square& a, const Square& b);

struct WhitneyCube {
  Square sq;
  double dist = 0.0;    // dist(Q, boundary)
  int generation = 0;   // side = 2^-generation
};

struct Chain {
  std::vector<int> cubes;
  int pivot_q = 0;  // position of Q_S in cubes
  int pivot_s = 0;  // position of S_Q in cubes
};

struct CoveringAudit {
  double min_dist_ratio = 0.0;  // min over Q of dist / (cw side)
  double max_dist_ratio = 0.0;
  double max_neighbor_ratio = 0.0;
  double partition_defect = 0.0;  // |sum side^2 + collar - area|
  double collar_constant = 0.0;   // collar / (perimeter * min_side)
  int overlap20 = 0;              // max number of 20Q over a point
  double q0_constant = 0.0;       // diam / side(Q0)
  bool disjoint = true;
  bool connected = true;

  bool distance_ok() const { return min_dist_ratio >= 1.0 && max_dist_ratio <= 4.0; }
  bool neighbor_ok() const { return max_neighbor_ratio <= 2.0; }
};

class WhitneyCovering {
 public:
  // Cubes are accepted at dist >= cw * side; cw > sqrt 2 makes the 2:1 neighbor rule
  // automatic, smaller values are balanced afterwards.
  WhitneyCovering(const LipschitzDomain& dom, double min_side, double cw = 1.0);

  const LipschitzDomain& domain() const { return dom_; }
  double min_side() const { return min_side_; }
  double c_w() const { return cw_; }
  int size() const { return static_cast<int>(cubes_.size()); }
  const WhitneyCube& cube(int i) const { return cubes_[i]; }
  const std::vector<WhitneyCube>& cubes() const { return cubes_; }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int q0() const { return q0_; }
  double collar_area() const { return collar_; }
  double side(int i) const { return cubes_[i].sq.side; }
  double D(int a, int b) const { return long_distance(cubes_[a].sq, cubes_[b].sq); }
  bool are_neighbors(int a, int b) const;

  // Index of the cube containing z, or -1 (collar or outside).
  int locate(cplx z) const;

  // [Q, ..., Q0]; throws no_chain when Q0 is unreachable.
  const std::vector<int>& ascent(int i) const { return ascent_[i]; }
  Chain chain(int q, int s) const;
  double chain_length(const Chain& c) const;

  std::vector<int> shadow(int q, double rho) const;
  // S <= Q: Q lies on the ascent of S.
  bool descends(int s, int q) const;

  std::map<int, int> census() const;  // generation -> count
  CoveringAudit audit() const;

  // corner_x, corner_y, side, dist_to_boundary
  void write_csv(std::ostream& os) const;

 private:
  void build_ascents();

  LipschitzDomain dom_;
  double min_side_;
  double cw_;
  std::vector<WhitneyCube> cubes_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> ascent_;
  std::vector<std::vector<char>> on_ascent_;
  int q0_ = 0;
  double collar_ = 0.0;
  double cell_ = 0.0;  // bucket size for locate
  std::map<std::pair<long, long>, std::vector<int>> buckets_;
};

WhitneyCovering whitney(const LipschitzDomain& dom, double min_side, double cw = 1.0);

struct ChainAudit {
  int pairs = 0;
  double max_length_ratio = 0.0;  // sum of sides over D(Q, S)
  double far_min = 1e300;         // D(P, S) / D(Q, S) over ascending P
  double far_max = 0.0;
  double close_max = 0.0;         // D(P, Q) / side(P) over ascending P
  double close_min = 1e300;
  bool neighbors_ok = true;
};

// Every ordered pair of cubes.
ChainAudit audit_chains(const WhitneyCovering& cov);

struct ShadowAudit {
  double rho0 = 0.0;
  double max_area_ratio = 0.0;  // sum over SH(P) of side^2 over side(P)^2
  bool containment = false;     // S <= Q implies S in SH(Q)
  int recalibrations = 0;
};

// Starts at rho0 and raises it in steps of 1 until descendant containment holds.
ShadowAudit audit_shadows(const WhitneyCovering& cov, double rho0 = 5.0);

// A_rho(f, g) / (||f||_p ||g||_p') for d = 2, with L^1(20P) norms taken on the grid.
double chain_sum_ratio(const WhitneyCovering& cov, const ComplexField& f, const ComplexField& g, double rho,
                       double p);

}  // namespace qclab
