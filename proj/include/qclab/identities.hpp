#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qclab/contour.hpp"
#include "qclab/grid.hpp"
#include "qclab/masks.hpp"

namespace qclab {

using BigInt = boost::multiprecision::cpp_int;

// C(a, g), zero unless 0 <= g <= a.
BigInt binomial(long a, long g);

struct BinomialPair {
  BigInt lhs, rhs;
};

// lhs = C(m1+m2-2-a1, m2-1), rhs = sum_j (-1)^j C(a1, j) C(m1+m2-2-j, m1-1).
// Inputs in [0, 64].
BinomialPair binomial_identity(int m1, int m2, int a1);

struct MultiIndexM {
  int m1 = 3, m2 = 1, m3 = 1;
  int order() const { return m1 + m2 + m3; }
  bool admissible() const { return m1 >= 3 && m2 >= 1 && m3 >= 1 && m2 <= m1 + m3 - 2; }
};

// Contour integral of conj(tau - z)^m3 / (tau - z).
cplx h_function(const ContourQuadrature& q, int m3, cplx z);

// d^j1 dbar^j2 h_m3 at z; exactly 0 for j2 > m3.
cplx h_derivative(const ContourQuadrature& q, int m3, int j1, int j2, cplx z);

struct DerivativeIdentity {
  cplx constant;       // fitted c with d^j dbar^(m3-j) h = c B^j chi
  double defect = 0.0; // held-out max |lhs - c rhs| over held-out max |lhs|
  int fitted = 0, held_out = 0;
};

// Probes must be grid points of g inside the domain. The first half fits c, the second half
// measures the defect. For j >= 1 the right side is the FFT B^j of the mask after the
// radial moments about the centroid are cancelled outside the domain (see radial_vanish).
// Throws degenerate_probe when the left side vanishes at every probe.
DerivativeIdentity derivative_identity_defect(const ContourQuadrature& q, int m3, int j, const std::vector<cplx>& probes,
                                              const GridSpec& g, MaskKind mask = MaskKind::sharp);

// `count` grid points of g at depth >= `depth` inside the domain, drawn from (seed, name).
std::vector<cplx> interior_probes(const LipschitzDomain& dom, const GridSpec& g, int count, double depth,
                                  std::uint64_t seed);

// Contour integral of conj(w - xi)^m3 / ((z - w)^m1 (w - xi)^m2).
cplx kernel_K(const ContourQuadrature& q, const MultiIndexM& m, cplx z, cplx xi);

// Wirtinger derivatives d^a dbar^b of some function at a point.
using DerivativeOracle = std::function<cplx(int a, int b, cplx z)>;

// d^j f(xi) - P_z^(M-j)(d^j f)(xi), the Taylor polynomial in the Wirtinger monomials.
cplx taylor_remainder(const DerivativeOracle& f, int M, int j, cplx z, cplx xi);

// The same for f = h_m3, with every derivative from h_derivative.
cplx h_taylor_remainder(const ContourQuadrature& q, int m3, int M, int j, cplx z, cplx xi);

struct KernelExpansion {
  cplx D, E;
  double defect = 0.0;  // |D - E| / (|D| + |E| + 1e-300)
};

// D and E of the kernel-expansion error with M = m1 + m3 - 3.
KernelExpansion kernel_expansion_defect(const ContourQuadrature& q, const MultiIndexM& m, cplx z, cplx xi);

// The full sum over (a1, a2) of D^a h / a! (xi-z)^a times the binomial mismatch
// C(m1+m2-2-a1, m2-1) - [a1 + a2 <= M] rhs(a1), which D equals whether or not the
// binomial claim holds.
cplx kernel_expansion_bracket(const ContourQuadrature& q, const MultiIndexM& m, cplx z, cplx xi);

struct PlemeljJump {
  cplx jump, target;
  double error() const { return std::abs(jump - target); }
};

// H_{m3,xi} at w -+ eps N with w = point(t); target conj(w - xi)^m3.
PlemeljJump plemelj_jump(const ContourQuadrature& q, int m3, cplx xi, double t, double eps);

struct ExponentFit {
  double slope = 0.0;
  bool vanishing = false;  // remainder identically zero; slope is +inf
  std::vector<double> mean_abs;  // per radius
};

// log-log slope of the angular mean of |R(z + r e^{i theta})| against r. Means at or
// below `floor` count as zero.
ExponentFit remainder_exponent(const std::function<cplx(cplx)>& remainder, cplx z, const std::vector<double>& radii,
                               int angles = 16, double floor = 0.0);

ExponentFit taylor_remainder_exponent(const ContourQuadrature& q, int m3, int M, int j, cplx z,
                                      const std::vector<double>& radii, int angles = 16);

// sup over |z - center| <= 0.7 of |B^m profile(|z - center|)| on the grid. The first m
// radial moments are cancelled with annular bumps vanishing on D before the transform.
double radial_vanish(const std::function<double(double)>& profile, int m, const GridSpec& g);

struct WirtingerFunction {
  std::function<cplx(cplx)> value, d, dbar;
};

// |int (d f + dbar g) dm - (i/2)(contour f dzbar - contour g dz)|. The area integral is
// the midpoint rule on cells inside, and the centroid rule on the clipped part of cells
// cut by the boundary polygon.
double green_defect(const WirtingerFunction& f, const WirtingerFunction& g, const ContourQuadrature& q,
                    const GridSpec& grid);

}  // namespace qclab
