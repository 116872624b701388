#pragma once

#include "metaplab/core.hpp"

namespace metaplab {

// Unscaled DFT along a vector: sign -1 gives sum_n x_n e^{-2 pi i k n / N}, sign +1 the conjugate kernel.
void dft_inplace(CVec& v, int sign);
CVec dft(const CVec& v, int sign);

// Unscaled DFT of every column (axis 0) or every row (axis 1).
void dft_axis(CMat& m, int axis, int sign);

}  // namespace metaplab
