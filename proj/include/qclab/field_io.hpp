#pragma once

#include <iosfwd>
#include <string>

#include "qclab/grid.hpp"

namespace qclab {

// CFLD1: one JSON header line {center_re, center_im, half_width, resolution},
// then N*N (re, im) pairs as little-endian doubles, row-major.
void write_cfld1(std::ostream& os, const ComplexField& f);
ComplexField read_cfld1(std::istream& is);
void write_cfld1(const std::string& path, const ComplexField& f);
ComplexField read_cfld1(const std::string& path);

// CSV with columns j,k,x,y,re,im.
void write_field_csv(std::ostream& os, const ComplexField& f);

}  // namespace qclab
