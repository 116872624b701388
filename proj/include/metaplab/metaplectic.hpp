#pragma once

#include "metaplab/signal.hpp"
#include "metaplab/symplectic.hpp"

namespace metaplab {

// mu(J) = F, mu(V_C) = chirp multiplication, mu(D_L) = rescale, mu(A_FT2) = partial Fourier.
Signal apply_generator(const Generator& g, const Signal& f, bool guard = true);
Field apply_generator(const Generator& g, const Field& F, bool guard = true);

Signal apply_chain(const GeneratorChain& chain, const Signal& f, bool guard = true);
Field apply_chain(const GeneratorChain& chain, const Field& F, bool guard = true);

// mu(A) up to a global unimodular constant.
Signal apply(const Mat& A, const Signal& f, bool guard = true);
Field apply(const Mat& A, const Field& F, bool guard = true);

// Direct quadrature of the free-matrix integral formula (oracle only).
Signal apply_free_quadrature(const Mat& A, const Signal& f);
Signal apply_free_quadrature(const Mat& A, const Signal& f, const Grid& out);
Field apply_free_quadrature(const Mat& A, const Field& F);

// mu(V_C^{-T}) f = F(Phi_C) * f, through the Fourier multiplier Phi_C(xi) ...
Signal conv_chirp(double C, const Signal& f);
// ... and through direct convolution with |C|^{-1/2} e^{i pi sgn(C)/4} Phi_{-1/C}.
Signal conv_chirp_direct(double C, const Signal& f);

// Dense matrix of mu(A) on a signal grid (columns are images of unit vectors).
CMat metaplectic_matrix(const Mat& A, const Grid& g);

}  // namespace metaplab
