#pragma once

#include <random>
#include <string>

#include "metaplab/core.hpp"

namespace metaplab {

// Centered periodic grid: x_k = -L + k h, h = 2L/N, N even.
struct Grid {
  int N = 256;
  double L = 8.0;

  static Grid make(int N, double L);
  double step() const { return 2.0 * L / N; }
  double x(int k) const { return -L + k * step(); }
  Vec points() const;
  Grid dual() const { return {N, N / (4.0 * L)}; }
  double nyquist() const { return N / (4.0 * L); }
  bool same(const Grid& o, double tol = 1e-12) const;
  static Grid self_dual(int N);
};

struct Signal {
  Grid grid;
  CVec v;
  bool interpolated = false;  // set when an off-grid operation went through interpolation

  double norm() const;
};

// Function on a 2-D grid; rows follow axis 0, columns axis 1. Used for
// phase-space fields (x, xi), kernels (x, y) and 2-D signals alike.
struct Field {
  Grid g0, g1;
  CMat v;
  bool interpolated = false;

  double norm() const;
  double cell() const { return g0.step() * g1.step(); }
};

Signal sample(const Grid& g, const std::function<cd(double)>& f);
Field sample(const Grid& g0, const Grid& g1, const std::function<cd(double, double)>& f);

cd inner(const Signal& f, const Signal& g);
cd inner(const Field& f, const Field& g);
Signal conjugate(Signal f);

// Unitary transforms matching f^(xi) = int f(t) e^{-2 pi i xi t} dt.
Signal fourier(const Signal& f);
Signal inverse_fourier(const Signal& f);
Field fourier_axis(const Field& F, int axis, bool inverse = false);
Field fourier(const Field& F, bool inverse = false);
inline Field partial_fourier_2(const Field& F) { return fourier_axis(F, 1); }

// Raw-array versions used by the field code (axis grid given explicitly).
void fourier_inplace(CVec& v, const Grid& g, bool inverse = false);

// Band-limited interpolation kernel of the periodic grid, zero outside [-L, L).
double interp_kernel(const Grid& g, double u);
Mat interp_matrix(const Grid& g, const Vec& points);
CVec interpolate(const Signal& f, const Vec& points);

// Exact trigonometric upsampling to the half-step grid on the same box.
CVec upsample2(const CVec& v);
CMat upsample2_axis(const CMat& m, int axis);

// Samples of e^{i pi C t.t} times the input. The aliasing guard compares the
// instantaneous frequency over the effective support with the Nyquist limit.
Signal chirp_multiply(const Signal& f, double C, bool guard = true);
Field chirp_multiply(const Field& F, const Mat& C, bool guard = true);

// sqrt|det L| F(L t)
Signal rescale(const Signal& f, double L);
Field rescale(const Field& F, const Mat& L);

// Circular shift of a field along one axis by an arbitrary offset (band-limited).
void shift_axis(CMat& m, const Grid& g, int axis, const Vec& offsets);

// M_xi0 T_x0 f
Signal tf_shift(const Signal& f, double x0, double xi0);

Field tensor(const Signal& f, const Signal& g);

// Standard test signals.
double gaussian(double t, double width = 1.0);
double hermite_function(int n, double t);
Signal gaussian_signal(const Grid& g, double x0 = 0, double xi0 = 0, double width = 1.0);
Signal hermite_signal(const Grid& g, int n);
Signal sign_gaussian_signal(const Grid& g);
Signal two_bump_signal(const Grid& g, double sep = 2.0);
Signal random_hermite_signal(const Grid& g, std::mt19937_64& rng, int nmax = 8);

}  // namespace metaplab
