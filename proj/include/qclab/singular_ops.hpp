#pragma once

#include <vector>

#include "qclab/fft.hpp"
#include "qclab/grid.hpp"

namespace qclab {

struct KernelIndex {
  int g1 = 0;
  int g2 = 0;
  int homogeneity() const { return g1 + g2; }
  bool operator==(const KernelIndex&) const = default;
};

// K(u) = u^g1 * conj(u)^g2 for u != 0.
cplx kernel_value(KernelIndex gamma, cplx u);

// Fourier symbols. The Beurling symbol is d/dbar; where dbar's symbol vanishes at a
// nonzero Nyquist mode the true wavenumbers are used, so the symbol stays unimodular.
cplx beurling_symbol(const fft::Mode& m);
cplx cauchy_symbol(const fft::Mode& m);  // 1/dbar, 0 where dbar's symbol vanishes

// Warns when more than `threshold` of the L^1 mass lies outside the central quarter.
void check_support(const ComplexField& f, const char* who, double threshold = 1e-6);

ComplexField beurling(const ComplexField& f);
// m may be negative: B^{-m} is the adjoint of B^m.
ComplexField beurling_power(const ComplexField& f, int m);
ComplexField beurling_power_unchecked(const ComplexField& f, int m);
ComplexField cauchy(const ComplexField& f);
ComplexField cauchy_adjoint(const ComplexField& f);

// Exact integral of K over the h x h cell centered at 0 (principal value when
// homogeneity is -2).
cplx diagonal_cell_integral(KernelIndex gamma, double h);

// Square-ordered sum of K over the nonzero points of Z^2 (homogeneity -2 only;
// zero unless g1 - g2 is a multiple of 4).
cplx lattice_sum(KernelIndex gamma);

// Weight given to the cell containing z. For homogeneity -2 it is the cell
// integral minus the lattice sum, so that the midpoint sum over all other cells
// reproduces the principal value taken over discs.
cplx diagonal_weight(KernelIndex gamma, double h);

// Direct quadrature of sum_w K(z - w) f(w) h^2 at grid points z, the cell of z
// contributing diagonal_weight * f(z).
std::vector<cplx> tgamma_pv(KernelIndex gamma, const ComplexField& f, const std::vector<cplx>& pts);

// Same discrete sum at every grid point, evaluated as a zero-padded FFT convolution.
ComplexField tgamma_apply(KernelIndex gamma, const ComplexField& f);

// Index of the grid sample at z; throws if z is not (within 1e-9 h) a grid point.
std::size_t grid_point_index(const GridSpec& g, cplx z);

}  // namespace qclab
