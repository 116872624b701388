#pragma once

#include <optional>
#include <vector>

#include "metaplab/quantize.hpp"

namespace metaplab {

// Lambda = gen Z^2 truncated to |lambda| <= radius and to the grid's phase-space box.
struct GaborLattice {
  Mat gen = Mat::Identity(2, 2);
  double radius = 6.0;  // infinity keeps every point of the grid box

  static GaborLattice make(const Mat& gen, double radius);
  std::vector<Eigen::Vector2d> points(const Grid& g) const;
};

// Spread of a window in units where the standard Gaussian has deviation 1.
double window_deviation(const Signal& g);
inline double default_radius(const Signal& g) { return 6.0 * window_deviation(g); }

struct FrameBounds {
  double A = 0, B = 0;
};
FrameBounds frame_bounds(const Signal& g, const GaborLattice& lattice);

struct GaborMatrixData {
  Signal window;
  GaborLattice lattice;
  std::vector<Eigen::Vector2d> pts;
  CMat M;  // M(l, m) = <T pi(pts[l]) g, pi(pts[m]) g>
};

// op_norm > 0 enables the |M| <= ||T|| ||g||^2 check.
GaborMatrixData gabor_matrix(const DenseOperator& T, const Signal& g, const GaborLattice& lattice,
                             double op_norm = 0.0);

struct ShellValue {
  int k1 = 0, k2 = 0;
  double h = 0;
};

struct EnvelopeNorm {
  double q = 1, s = 0;
  double value = 0;
  double tail = 0;  // contribution of the outermost ring of cells
};

struct EnvelopeReport {
  Mat chi;
  bool estimated = false;
  double spread = 0;  // weighted second moment sum |M|^2 |mu - chi lambda|^2 / sum |M|^2
  std::vector<ShellValue> shells;
  std::vector<EnvelopeNorm> norms;
  double decay_slope = 0;  // regression slope of log h against |k| on shells 1..5
  std::optional<FrameBounds> frame;  // on the lattice covering the whole grid box; empty if degenerate
};

Mat estimate_chi(const GaborMatrixData& data);
EnvelopeReport envelope_fit(const GaborMatrixData& data, const std::optional<Mat>& chi = std::nullopt,
                            const std::vector<std::pair<double, double>>& qs = {{1.0, 0.0}});

// max h over cells whose center has round(|k|) = r, for r = 0..rmax
std::vector<double> shell_maxima(const EnvelopeReport& r, int rmax);
double shell_decay_slope(const EnvelopeReport& r, int rmin = 1, int rmax = 5);

struct Factorization {
  Field sigma1, sigma2;
  double residual1 = 0;  // || Op_w(sigma1) mu(chi) - T || / ||T|| up to phase
  double residual2 = 0;  // || mu(chi) Op_w(sigma2) - T || / ||T|| up to phase
};
Factorization metaplectic_factor(const DenseOperator& T, const Mat& chi);

}  // namespace metaplab
