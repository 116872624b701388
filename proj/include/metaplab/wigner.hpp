#pragma once

#include <limits>

#include "metaplab/metaplectic.hpp"

namespace metaplab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Phase-space fields live on (x grid, dual grid) of the signal grid.
Field wigner_cross(const Signal& f, const Signal& g);
Field tau_wigner(const Signal& f, const Signal& g, double tau);
Field stft(const Signal& f, const Signal& window);

// int f(x + (1-a11) eta) conj g(x - a11 eta) e^{i pi a21 eta^2} e^{-2 pi i xi eta} d eta
// on arbitrary output grids; R is the oversampling of the eta quadrature (0 = automatic).
Field covariant_quadrature(const Signal& f, const Signal& g, double a11, double a21, const Grid& xgrid,
                           const Grid& xigrid, int R = 0);

// Convolution in x with F(Phi_{-a13}) (multiplier e^{-i pi a13 u^2}).
Field apply_a13(const Field& W, double a13);

Field wigner_A(const Mat& A, const Signal& f, const Signal& g);
Field wigner_A_covariant(const CovariantForm& cov, const Signal& f, const Signal& g);
Field stft_reduction(const Mat& A, const Signal& f, const Signal& g);

// W * Sigma with F(Sigma)(zeta) = e^{-pi i zeta.B zeta}
Field cohen_convolve(const Mat& B, const Field& W);

double weight_vs(double x, double xi, double s);
double modulation_norm(const Signal& f, const Signal& window, double p, double q, double s);
double wiener_amalgam_norm(const Field& H, double q, double s);

}  // namespace metaplab
