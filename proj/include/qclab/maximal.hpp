#pragma once

#include <vector>

#include "qclab/grid.hpp"
#include "qclab/whitney.hpp"

namespace qclab {

// Summed-area table of |f| h^2. Squares select the samples whose points they contain.
class BoxSums {
 public:
  explicit BoxSums(const ComplexField& f);
  double square(const Square& q) const;
  // Half-open index ranges of the samples inside q, clipped to the grid.
  void index_range(const Square& q, int& j0, int& j1, int& k0, int& k1) const;
  double cells(int j0, int j1, int k0, int k1) const;

 private:
  GridSpec g_;
  int n_;
  std::vector<double> s_;
};

// Non-centered maximal function of |f| over squares of 2^i x 2^i samples, every
// position that keeps the square on the grid.
ComplexField maximal(const ComplexField& f);

struct MaximalLemma {
  double far = 0.0;    // max over Q, r of r^eta sum_{D > r} (int_S g) / D^{2+eta} / inf_Q Mg
  double close = 0.0;  // max over Q, r of sum_{D <= r} (int_S g) / D^{2-eta} / (r^eta inf_Q Mg)
};

// radii are multiples of side(Q).
MaximalLemma maximal_lemma(const WhitneyCovering& cov, const ComplexField& g, double eta,
                           const std::vector<double>& radii = {1.0, 4.0, 16.0, 64.0});

}  // namespace qclab
