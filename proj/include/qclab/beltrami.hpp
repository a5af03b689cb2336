#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "qclab/domain.hpp"
#include "qclab/grid.hpp"
#include "qclab/norms.hpp"

namespace qclab {

// Named coefficient families, sampled at any resolution:
//   mollified_indicator {amplitude, collar (0: 4h)}
//   bump {amplitude, center_re, center_im, radius}        C^2, compact support
//   jump {amplitude, center_re, center_im, radius, cut}   bump halved for Re z > cut
//   constant {amplitude}                                  sharp indicator of the domain
ComplexField mu_field(const nlohmann::json& spec, const LipschitzDomain& dom, const GridSpec& g);

struct BeltramiProblem {
  ComplexField mu;
  LipschitzDomain dom;
  double k = 0.0;  // ||mu||_inf
  double K = 1.0;  // (1 + k) / (1 - k)
  SobolevParams params;
};

// Throws not_contractive for ||mu||_inf >= 1 and invalid_argument when mu lives outside
// the closed domain (beyond two cells).
BeltramiProblem make_problem(ComplexField mu, const LipschitzDomain& dom, SobolevParams params = {});

struct NeumannStep {
  int k = 0;
  double increment = 0.0;  // ||(mu B)^k mu||
  double residual = 0.0;   // ||(I - mu B) h_k - mu||
};

struct NeumannResult {
  ComplexField h;
  std::vector<NeumannStep> trace;
  bool converged = false;
  double leakage = 0.0;  // L^1 mass of h where mu vanishes
};

NeumannResult neumann_solve(const BeltramiProblem& prob, double tol = 1e-10, int kmax = 500);

// Largest increment ratio over trace steps k > after.
double observed_ratio(const std::vector<NeumannStep>& trace, int after = 3);

struct PrincipalSolution {
  ComplexField h, f, dbar_f, d_f;
  std::vector<NeumannStep> trace;
  double beltrami_residual = 0.0;  // ||dbar f - mu d f||
  double d_norm = 0.0;             // ||d f||
  double far_field = 0.0;          // max |f - z| on the outer tenth of the grid over max |f - z|
};

// f = C h + z. The torus Cauchy transform drops the mean of h, which is restored in dbar f.
PrincipalSolution principal_solution(const BeltramiProblem& prob, const NeumannResult& sol);

// max of ||P_m (I - T) g - (I - T^m) g|| and ||(I - T) P_m g - (I - T^m) g||, T = mu B_Omega.
double pm_identity_defect(const BeltramiProblem& prob, int m, const ComplexField& g);

struct Factorization {
  ComplexField a1, a2, a3;
  double defect = 0.0;
};

Factorization factorization_terms(const BeltramiProblem& prob, int m, const ComplexField& g);

struct ContractionEstimate {
  double l2 = 0.0;       // power iteration on L^2(domain cells)
  double sobolev = 0.0;  // max Sobolev quotient over the smooth trial fields
};

// Norm of g -> mu^m (B^m)_Omega g.
ContractionEstimate contraction_estimate(const BeltramiProblem& prob, int m, int trials = 8, std::uint64_t seed = 0);

struct RegularityRow {
  int resolution = 0;
  int iterations = 0;
  double residual = 0.0;
  SobolevNorm h;  // order n
  SobolevNorm f;  // order n + 1
};

struct RegularityTable {
  std::vector<RegularityRow> rows;
  // Successive ratios of the derivative terms ||grad^n h||_p.
  std::vector<double> h_ratios() const;
  std::vector<double> f_ratios() const;
};

// Solves at every resolution on a grid of the given half width centered on the domain.
// Independent resolutions run on up to `threads` threads.
RegularityTable regularity_table(const nlohmann::json& mu_spec, const LipschitzDomain& dom, const SobolevParams& prm,
                                 const std::vector<int>& resolutions, double half_width, double tol = 1e-10,
                                 int kmax = 500, int threads = 1);

nlohmann::json to_json(const RegularityTable& t);

}  // namespace qclab
