#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qclab/domain.hpp"
#include "qclab/grid.hpp"
#include "qclab/singular_ops.hpp"

namespace qclab {

// Immutable, shareable operator handle. Composition reads as in mathematics:
// compose({A, B}) applies B first.
class Operator {
 public:
  static Operator identity();
  static Operator zero();
  static Operator multiply(ComplexField m, std::string name = "mu");
  static Operator beurling_power(int m);
  static Operator cauchy();
  static Operator tgamma(KernelIndex gamma);
  // Multiplication by the sharp indicator of the domain (or of its complement).
  static Operator mask(const LipschitzDomain& dom, bool exterior = false);
  static Operator localize(const Operator& inner, const LipschitzDomain& dom);
  static Operator commutator(ComplexField mu, const LipschitzDomain& dom);
  static Operator reflection(int m, const LipschitzDomain& dom);
  static Operator compose(std::vector<Operator> ops);
  static Operator sum(std::vector<std::pair<cplx, Operator>> terms);

  ComplexField apply(const ComplexField& f) const;
  // Values at grid points; kernels use the direct quadrature, everything else
  // applies on the grid and reads off the samples.
  std::vector<cplx> apply_at(const ComplexField& f, const std::vector<cplx>& pts) const;
  Operator adjoint() const;

  nlohmann::json to_json() const;
  std::string kind() const;

  struct Node;

 private:
  explicit Operator(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  Operator with_label(nlohmann::json label) const;
  std::shared_ptr<const Node> node_;
};

// Field-level shorthands.
ComplexField localize_apply(const ComplexField& mask, const ComplexField& f,
                            ComplexField (*op)(const ComplexField&));
ComplexField commutator_apply(const ComplexField& mu, const LipschitzDomain& dom, const ComplexField& f);
ComplexField reflection_apply(int m, const LipschitzDomain& dom, const ComplexField& f);

// Top-k singular values of f -> chi op(chi f) on L^2(domain cells), by a randomized
// range finder with subspace iteration.
std::vector<double> smoothing_probe(const Operator& op, const LipschitzDomain& dom, int k, const GridSpec& g,
                                    std::uint64_t seed = 0, int power_iterations = 3);

}  // namespace qclab
