#include "metaplab/gabor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace metaplab {

GaborLattice GaborLattice::make(const Mat& gen, double radius) {
  if (gen.rows() != 2 || gen.cols() != 2) throw ShapeError("lattice: generator must be 2x2");
  if (std::abs(gen.determinant()) < 1e-12) throw ValidationError("lattice: generator must be invertible");
  if (!(radius > 0)) throw ValidationError("lattice: radius must be positive");
  return {gen, radius};
}

std::vector<Eigen::Vector2d> GaborLattice::points(const Grid& g) const {
  const double Xi = g.nyquist();
  const double reach = std::min(radius, std::hypot(g.L, Xi));
  const Eigen::JacobiSVD<Mat> svd(gen);
  const long K = static_cast<long>(std::ceil(reach / svd.singularValues().minCoeff())) + 1;
  const double hx = g.step(), hxi = g.dual().step();
  auto on_grid = [](double v, double step) {
    const double q = v / step;
    return std::abs(q - std::round(q)) < 1e-9 * std::max(1.0, std::abs(q));
  };
  std::vector<Eigen::Vector2d> pts;
  for (long m = -K; m <= K; ++m)
    for (long n = -K; n <= K; ++n) {
      const Eigen::Vector2d z = gen * Eigen::Vector2d(static_cast<double>(m), static_cast<double>(n));
      if (z.norm() > radius * (1 + 1e-12)) continue;
      if (z[0] < -g.L || z[0] >= g.L || z[1] < -Xi || z[1] >= Xi) continue;
      if (!on_grid(z[0], hx) || !on_grid(z[1], hxi))
        throw ValidationError("lattice: point (" + std::to_string(z[0]) + ", " + std::to_string(z[1]) +
                              ") is off-grid");
      pts.push_back(z);
    }
  if (pts.empty()) throw ValidationError("lattice: no points inside the grid box");
  return pts;
}

double window_deviation(const Signal& g) {
  auto spread = [](const Signal& s) {
    const Vec w = s.v.cwiseAbs2();
    const Vec x = s.grid.points();
    const double m0 = w.sum();
    if (m0 == 0.0) throw ValidationError("window: zero signal");
    const double m1 = w.dot(x) / m0;
    return w.dot(x.cwiseProduct(x)) / m0 - m1 * m1;
  };
  const double vt = spread(g), vxi = spread(fourier(g));
  return 2.0 * std::sqrt(pi) * std::sqrt((vt + vxi) / 2.0);
}

namespace {

CMat atoms(const Signal& g, const std::vector<Eigen::Vector2d>& pts) {
  CMat G(g.grid.N, static_cast<Eigen::Index>(pts.size()));
  parallel_for(static_cast<int>(pts.size()), [&](int l) { G.col(l) = tf_shift(g, pts[l][0], pts[l][1]).v; });
  return G;
}

}  // namespace

FrameBounds frame_bounds(const Signal& g, const GaborLattice& lattice) {
  const CMat G = atoms(g, lattice.points(g.grid));
  const CMat S = g.grid.step() * G * G.adjoint();
  const Eigen::SelfAdjointEigenSolver<CMat> es(S, Eigen::EigenvaluesOnly);
  FrameBounds fb{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  if (!(fb.B > 0) || fb.A < 1e-8 * fb.B)
    throw NumericError("frame_bounds: degenerate frame (A = " + std::to_string(fb.A) +
                       ", B = " + std::to_string(fb.B) + ")");
  return fb;
}

GaborMatrixData gabor_matrix(const DenseOperator& T, const Signal& g, const GaborLattice& lattice,
                             double op_norm) {
  if (T.field) throw ShapeError("gabor_matrix: signal-side operators only");
  if (!T.g0.same(g.grid)) throw ShapeError("gabor_matrix: window and operator grids differ");
  GaborMatrixData d{g, lattice, lattice.points(g.grid), {}};
  const CMat G = atoms(g, d.pts);
  CMat TG(G.rows(), G.cols());
  parallel_for(static_cast<int>(G.cols()), [&](int l) { TG.col(l) = T.m * G.col(l); });
  d.M = g.grid.step() * TG.transpose() * G.conjugate();
  if (op_norm > 0) {
    const double bound = op_norm * g.norm() * g.norm();
    if (d.M.cwiseAbs().maxCoeff() > bound * (1 + 1e-8))
      throw NumericError("gabor_matrix: entry exceeds the operator-norm bound");
  }
  return d;
}

namespace {

struct WeightedPair {
  Eigen::Vector2d lam, mu;
  double w;
};

Mat iwasawa(double theta, double rho, double n) {
  Mat R(2, 2), A(2, 2), N(2, 2);
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  A << std::exp(rho), 0, 0, std::exp(-rho);
  N << 1, n, 0, 1;
  return R * A * N;
}

}  // namespace

Mat estimate_chi(const GaborMatrixData& data) {
  const double mmax = data.M.cwiseAbs().maxCoeff();
  std::vector<WeightedPair> pairs;
  double wsum = 0;
  for (Eigen::Index m = 0; m < data.M.cols(); ++m)
    for (Eigen::Index l = 0; l < data.M.rows(); ++l) {
      const double a = std::abs(data.M(l, m));
      if (a <= 1e-6 * mmax) continue;
      pairs.push_back({data.pts[l], data.pts[m], a * a});
      wsum += a * a;
    }
  if (pairs.size() < 6) throw ValidationError("estimate_chi: too few significant Gabor matrix entries");

  auto spread = [&](const Eigen::Vector3d& p) {
    const Mat chi = iwasawa(p[0], p[1], p[2]);
    double acc = 0;
    for (const auto& e : pairs) acc += e.w * (e.mu - chi * e.lam).squaredNorm();
    return acc / wsum;
  };

  Eigen::Vector3d best(0, 0, 0);
  double fbest = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 8; ++s) {
    Eigen::Vector3d p(s * pi / 4, 0, 0);
    double f = spread(p);
    Eigen::Vector3d step(0.4, 0.4, 0.4);
    for (int it = 0; it < 20000 && step.maxCoeff() > 1e-10; ++it) {
      bool moved = false;
      for (int c = 0; c < 3; ++c)
        for (double sgn : {1.0, -1.0}) {
          Eigen::Vector3d q = p;
          q[c] += sgn * step[c];
          const double fq = spread(q);
          if (fq < f) {
            p = q;
            f = fq;
            moved = true;
            break;
          }
        }
      if (!moved) step /= 2;
    }
    if (f < fbest - 1e-14) {
      fbest = f;
      best = p;
    }
  }
  return iwasawa(best[0], best[1], best[2]);
}

EnvelopeReport envelope_fit(const GaborMatrixData& data, const std::optional<Mat>& chi,
                            const std::vector<std::pair<double, double>>& qs) {
  EnvelopeReport r;
  if (chi) {
    if (chi->rows() != 2 || chi->cols() != 2) throw ShapeError("envelope_fit: chi must be 2x2");
    if (std::abs(chi->determinant() - 1.0) > 1e-8) throw ValidationError("envelope_fit: chi must be symplectic");
    r.chi = *chi;
  } else {
    r.chi = estimate_chi(data);
    r.estimated = true;
  }

  std::map<std::pair<long, long>, double> h;
  double wsum = 0, msum = 0;
  for (Eigen::Index m = 0; m < data.M.cols(); ++m)
    for (Eigen::Index l = 0; l < data.M.rows(); ++l) {
      const Eigen::Vector2d d = data.pts[m] - r.chi * data.pts[l];
      const double a = std::abs(data.M(l, m));
      double& cell = h[{std::lround(d[0]), std::lround(d[1])}];
      cell = std::max(cell, a);
      wsum += a * a;
      msum += a * a * d.squaredNorm();
    }
  r.spread = wsum > 0 ? msum / wsum : 0.0;

  long ring = 0;
  for (const auto& [k, v] : h) {
    r.shells.push_back({static_cast<int>(k.first), static_cast<int>(k.second), v});
    ring = std::max(ring, std::max(std::abs(k.first), std::abs(k.second)));
  }
  std::stable_sort(r.shells.begin(), r.shells.end(), [](const ShellValue& a, const ShellValue& b) {
    const long na = a.k1 * a.k1 + a.k2 * a.k2, nb = b.k1 * b.k1 + b.k2 * b.k2;
    return na < nb;
  });

  for (const auto& [q, s] : qs) {
    if (!(q > 0)) throw ValidationError("envelope_fit: q must be positive");
    EnvelopeNorm n{q, s, 0, 0};
    double all = 0, tail = 0;
    for (const auto& c : r.shells) {
      const double val = c.h * weight_vs(c.k1, c.k2, s);
      const bool outer = std::max(std::abs(c.k1), std::abs(c.k2)) == ring;
      if (std::isinf(q)) {
        all = std::max(all, val);
        if (outer) tail = std::max(tail, val);
      } else {
        all += std::pow(val, q);
        if (outer) tail += std::pow(val, q);
      }
    }
    n.value = std::isinf(q) ? all : std::pow(all, 1.0 / q);
    n.tail = std::isinf(q) ? tail : std::pow(tail, 1.0 / q);
    r.norms.push_back(n);
  }
  r.decay_slope = shell_decay_slope(r);

  try {
    GaborLattice cover{data.lattice.gen, std::numeric_limits<double>::infinity()};
    r.frame = frame_bounds(data.window, cover);
  } catch (const NumericError&) {
    r.frame.reset();
  }
  return r;
}

std::vector<double> shell_maxima(const EnvelopeReport& r, int rmax) {
  std::vector<double> H(rmax + 1, 0.0);
  for (const auto& c : r.shells) {
    const long k = std::lround(std::hypot(c.k1, c.k2));
    if (k <= rmax) H[k] = std::max(H[k], c.h);
  }
  return H;
}

double shell_decay_slope(const EnvelopeReport& r, int rmin, int rmax) {
  const std::vector<double> H = shell_maxima(r, rmax);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = rmin; k <= rmax; ++k) {
    if (!(H[k] > 0)) continue;
    const double y = std::log(H[k]);
    sx += k;
    sy += y;
    sxx += static_cast<double>(k) * k;
    sxy += k * y;
    ++n;
  }
  if (n < 2) throw ValidationError("shell_decay_slope: fewer than two populated shells");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Factorization metaplectic_factor(const DenseOperator& T, const Mat& chi) {
  if (T.field) throw ShapeError("metaplectic_factor: signal-side operators only");
  if (chi.rows() != 2 || chi.cols() != 2) throw ShapeError("metaplectic_factor: chi must be 2x2");
  const Grid& g = T.g0;
  const CMat mu = metaplectic_matrix(chi, g);
  const CMat mu_inv = mu.partialPivLu().inverse();
  Factorization f;
  f.sigma1 = inverse_weyl({g, g, false, T.m * mu_inv});
  f.sigma2 = rescale(f.sigma1, chi);
  f.residual1 = phase_aligned_error(CMat(weyl(f.sigma1).m * mu), T.m);
  f.residual2 = phase_aligned_error(CMat(mu * weyl(f.sigma2).m), T.m);
  return f;
}

}  // namespace metaplab
