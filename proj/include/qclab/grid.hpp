#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qclab/error.hpp"

namespace qclab {

// Uniform N x N grid. Sample (j, k) sits at center + h*(j - N/2) + i*h*(k - N/2);
// j runs along x, k along y, storage is row-major in j.
struct GridSpec {
  cplx center{0.0, 0.0};
  double half_width = 1.0;
  int resolution = 16;

  double spacing() const { return 2.0 * half_width / resolution; }
  double cell_area() const { return spacing() * spacing(); }
  std::size_t size() const { return static_cast<std::size_t>(resolution) * resolution; }
  std::size_t index(int j, int k) const { return static_cast<std::size_t>(j) * resolution + k; }
  cplx point(int j, int k) const {
    const double h = spacing();
    return center + cplx(h * (j - resolution / 2), h * (k - resolution / 2));
  }
  // Nearest sample index along each axis (may fall outside [0, N)).
  int nearest_j(cplx z) const;
  int nearest_k(cplx z) const;
  bool contains_index(int j, int k) const {
    return j >= 0 && k >= 0 && j < resolution && k < resolution;
  }

  bool operator==(const GridSpec& o) const = default;
};

GridSpec make_grid(cplx center, double half_width, int resolution);

class ComplexField {
 public:
  ComplexField(GridSpec spec, std::vector<cplx> values);

  static ComplexField zeros(const GridSpec& spec);
  static ComplexField constant(const GridSpec& spec, cplx c);

  const GridSpec& spec() const { return spec_; }
  int n() const { return spec_.resolution; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx operator()(int j, int k) const { return values_[spec_.index(j, k)]; }

  template <class F>
  ComplexField map(F&& fn) const {
    std::vector<cplx> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(values_[i]);
    return ComplexField(spec_, std::move(out));
  }

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

void require_same_grid(const ComplexField& a, const ComplexField& b);

ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx c, const ComplexField& a);
ComplexField operator*(const ComplexField& a, cplx c);
ComplexField operator+(const ComplexField& a, cplx c);
ComplexField operator-(const ComplexField& a, cplx c);
ComplexField conj(const ComplexField& a);
ComplexField pow(const ComplexField& a, int m);

cplx integral(const ComplexField& f);   // sum f h^2
cplx mean(const ComplexField& f);       // average over all samples
double l2_norm(const ComplexField& f);  // (sum |f|^2 h^2)^(1/2)
double max_abs(const ComplexField& f);

ComplexField sample(const std::function<cplx(cplx)>& fn, const GridSpec& spec);
ComplexField coordinate_field(const GridSpec& spec);  // z

struct Wirtinger {
  ComplexField d;
  ComplexField dbar;
};

// Spectral d = (dx - i dy)/2 and dbar = (dx + i dy)/2 on the periodic extension.
Wirtinger wirtinger(const ComplexField& f);

}  // namespace qclab
