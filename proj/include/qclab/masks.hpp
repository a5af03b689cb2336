#pragma once

#include <vector>

#include "qclab/domain.hpp"
#include "qclab/grid.hpp"

namespace qclab {

enum class MaskKind {
  sharp,          // 0/1 at cell centers
  mollified,      // C^2 ramp from 0 on the boundary to 1 at depth `collar`
  area_weighted,  // fraction of each cell inside the domain
};

// collar <= 0 selects the default of 4h.
ComplexField domain_mask(const LipschitzDomain& dom, const GridSpec& g, MaskKind kind = MaskKind::sharp,
                         double collar = 0.0);

// Cell-center membership, one byte per sample, row-major.
std::vector<char> membership(const LipschitzDomain& dom, const GridSpec& g);

// C^2 step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);

// True when the domain's bounding box sits inside the grid's central quarter.
bool inside_central_quarter(const LipschitzDomain& dom, const GridSpec& g);

}  // namespace qclab
