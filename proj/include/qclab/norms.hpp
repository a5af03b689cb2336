#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qclab/domain.hpp"
#include "qclab/grid.hpp"
#include "qclab/whitney.hpp"

namespace qclab {

struct SobolevParams {
  int n = 1;
  double p = 2.0;
};

enum class SobolevForm {
  full,  // ||f||_p + || |grad^n f| ||_p, |.| the Frobenius norm of the tensor of partials
  axes,  // ||f||_p + ||dx^n f||_p + ||dy^n f||_p
};

struct SobolevNorm {
  double value = 0.0;
  double lp = 0.0;
  double derivative = 0.0;
  double collar_measure = 0.0;  // area of domain cells left out of the derivative term
};

// Centered difference weights for the k-th derivative, offsets -radius .. radius, O(h^2).
struct Stencil {
  int radius = 0;
  std::vector<double> w;
};
Stencil centered_stencil(int k, double h);

// Partial dx^a dy^b f at sample (j, k); the stencil must fit on the grid.
cplx partial(const ComplexField& f, int a, int b, int j, int k);
// Frobenius norm of the tensor of n-th partials at (j, k).
double grad_norm(const ComplexField& f, int n, int j, int k);

double lp_norm(const ComplexField& f, double p);  // whole grid; p = inf allowed
double lp_norm(const ComplexField& f, const LipschitzDomain& dom, double p);

SobolevNorm sobolev_norm(const ComplexField& f, const LipschitzDomain& dom, const SobolevParams& prm,
                         SobolevForm form = SobolevForm::full);

// ||f||_inf + sup |f(x) - f(y)| / |x - y|^s over domain cells; every pair below 10^4 cells,
// `pairs` seeded random pairs above.
double holder_norm(const ComplexField& f, const LipschitzDomain& dom, double s, std::uint64_t seed = 0,
                   int pairs = 100000);

// Difference seminorm of order floor(s) + 1 of the periodic normal samples.
double besov_boundary_seminorm(const NormalField& nf, double s, double p);

// Polynomial of degree n - 1 in (x - x_Q, y - y_Q) whose discrete derivative means over Q
// match those of f for every order below n.
struct ApproxPolynomial {
  int degree = 0;
  cplx center;
  double side = 0.0;
  // coeff[a][b] multiplies (x - x_Q)^a (y - y_Q)^b, a + b <= degree.
  std::vector<std::vector<cplx>> coeff;
  // max |m_gamma| / (||f||_{W^{n-1,inf}(3Q)} (1 + side^{n-1}))
  double coefficient_ratio = 0.0;

  cplx operator()(cplx z) const;
};

ApproxPolynomial approx_poly(const ComplexField& f, const Square& q, int n);

struct PoincareRatio {
  bool exact = false;  // numerator and denominator both vanish
  double value = 0.0;
};

// ||grad^j((f - P_{3Q} f) phi)||_{L^p(3Q)} / (side^{n-j} ||grad^n f||_{L^p(3Q)}), P of degree n - 1.
PoincareRatio poincare_ratio(const ComplexField& f, const Square& q, int n, int j, double p);

// ||fg|| / (||f|| ||g||) in W^{n,p}(dom); needs n p > 2.
double algebra_ratio(const ComplexField& f, const ComplexField& g, const LipschitzDomain& dom,
                     const SobolevParams& prm);
// ||f^m|| / (m^n ||f||_inf^{m-n} ||f||^n); needs m >= n.
double algebra_ratio(const ComplexField& f, int m, const LipschitzDomain& dom, const SobolevParams& prm);

struct NormRecord {
  std::string norm;
  nlohmann::json params;
  nlohmann::json domain;
  int resolution = 0;
  double collar_measure = 0.0;
  double value = 0.0;
};

void to_json(nlohmann::json& j, const NormRecord& r);

}  // namespace qclab
