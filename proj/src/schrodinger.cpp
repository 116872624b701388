#include "metaplab/schrodinger.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace metaplab {

CMat hamiltonian_matrix(const Hamiltonian& H, const Grid& g, double tol) {
  if (g.N > 256) throw ValidationError("hamiltonian_matrix: N > 256 exceeds the dense operator size guard");
  if (H.quad.d() != 1) throw ShapeError("hamiltonian_matrix: d = 1 only");
  const QuadraticHamiltonian& q = H.quad;
  CMat M = weyl([&q](double x, double xi) { return cd(q.symbol(x, xi)); }, g, 1).m;
  if (H.perturbation) M += weyl(*H.perturbation).m;
  const double asym = (M - M.adjoint()).norm();
  if (asym > tol * std::max(1.0, M.norm()))
    throw ValidationError("hamiltonian_matrix: H is not self-adjoint (relative asymmetry " +
                          std::to_string(asym / std::max(1.0, M.norm())) + ")");
  return 0.5 * (M + M.adjoint());
}

Propagator::Propagator(const Hamiltonian& H, const Grid& g) : g_(g), H_(hamiltonian_matrix(H, g)) {
  const Eigen::SelfAdjointEigenSolver<CMat> es(H_);
  V_ = es.eigenvectors();
  lambda_ = es.eigenvalues();
}

CMat Propagator::matrix(double t) const {
  CVec phase(lambda_.size());
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) phase[k] = expi(t * lambda_[k]);
  return V_ * phase.asDiagonal() * V_.adjoint();
}

Signal Propagator::operator()(double t, const Signal& u0) const {
  if (!u0.grid.same(g_)) throw ShapeError("propagator: grid mismatch");
  CVec c = V_.adjoint() * u0.v;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= expi(t * lambda_[k]);
  return {g_, V_ * c, u0.interpolated};
}

Signal propagate_quadratic(const QuadraticHamiltonian& h, double t, const Signal& u0) {
  return apply(hamiltonian_flow(h, t), u0);
}

Signal propagate_perturbed(const Hamiltonian& H, double t, const Signal& u0) {
  return Propagator(H, u0.grid)(t, u0);
}

Signal propagate(const Hamiltonian& H, double t, const Signal& u0) {
  return H.perturbation ? propagate_perturbed(H, t, u0) : propagate_quadratic(H.quad, t, u0);
}

Signal free_multiplier_propagate(double t, const Signal& u0) {
  Signal s = fourier(u0);
  for (int j = 0; j < s.grid.N; ++j) {
    const double xi = s.grid.x(j);
    s.v[j] *= expi(-4.0 * pi * pi * t * xi * xi);
  }
  return inverse_fourier(s);
}

PerturbationSymbol perturbation_symbol(const Hamiltonian& H, double t, const Grid& g) {
  const CMat U = Propagator(H, g).matrix(t);
  const CMat mu = metaplectic_matrix(hamiltonian_flow(H.quad, t), g);
  const CMat B = mu.partialPivLu().solve(U);
  PerturbationSymbol r;
  r.b = inverse_weyl({g, g, false, B});
  const cd mean = r.b.v.mean();
  if (std::abs(mean) > 0) r.b.v *= std::conj(mean) / std::abs(mean);
  r.residual = phase_aligned_error(CMat(mu * weyl(r.b).m), U);
  r.deviation = (r.b.v.array() - 1.0).abs().maxCoeff();
  return r;
}

namespace {

// Cohen matrix of Sigma o chi_t under the multiplier convention of cohen_convolve
Mat evolved_B(const CovariantForm& cov, const Mat& chi) { return evolve_cohen_B(cohen_B(cov), chi.transpose()); }

CovariantForm evolved_form(const CovariantForm& cov, const Mat& chi) {
  return covariant_from_cohen_B(evolved_B(cov, chi));
}

// W_{A_t} u0 evaluated at chi_t^{-1} z
Field evolved_right_side(const CovariantForm& cov, const Mat& chi, const Signal& u0) {
  const Mat Bt = evolved_B(cov, chi);
  const Field Wt = cohen_convolve(Bt, wigner_cross(u0, u0));
  return rescale(Wt, symplectic_inverse(chi));
}

double rel(const Field& lhs, const Field& rhs) { return (lhs.v - rhs.v).norm() / lhs.v.norm(); }

}  // namespace

double evolved_wigner_check(const QuadraticHamiltonian& h, double tau, double t, const Signal& u0) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("evolved_wigner_check: tau must lie in [0, 1]");
  const CovariantForm cov = CovariantForm::make(Mat::Constant(1, 1, 1.0 - tau), Mat::Zero(1, 1), Mat::Zero(1, 1));
  const Mat chi = hamiltonian_flow(h, t);
  const Signal ut = propagate_quadratic(h, t, u0);
  return rel(tau_wigner(ut, ut, tau), evolved_right_side(cov, chi, u0));
}

double evolved_wigner_check(const QuadraticHamiltonian& h, const CovariantForm& cov, double t, const Signal& u0) {
  const Mat chi = hamiltonian_flow(h, t);
  const Signal ut = propagate_quadratic(h, t, u0);
  return rel(wigner_A_covariant(cov, ut, ut), evolved_right_side(cov, chi, u0));
}

KernelReport wigner_kernel_check(const Hamiltonian& H, const CovariantForm& cov, double t, const Grid& g,
                                 const KernelProbeConfig& cfg) {
  if (cfg.field_N > 48) throw ValidationError("wigner_kernel_check: phase-space grid above 48 per axis");
  if (cov.d() != 1) throw ShapeError("wigner_kernel_check: d = 1 only");
  const Grid zg = Grid::make(cfg.field_N, cfg.field_L);
  const Mat chi = hamiltonian_flow(H.quad, t);
  const Mat chi_inv = symplectic_inverse(chi);
  const CovariantForm cov_t = evolved_form(cov, chi);
  const Propagator P(H, g);

  std::vector<Eigen::Vector2d> centers;
  const int K = static_cast<int>(std::floor(cfg.center_range / cfg.center_step + 1e-9));
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) centers.emplace_back(a * cfg.center_step, b * cfg.center_step);
  const int nc = static_cast<int>(centers.size());

  auto wa = [&](const CovariantForm& c, const Signal& u) {
    return apply_a13(covariant_quadrature(u, u, c.A11(0, 0), c.A21(0, 0), zg, zg), c.A13(0, 0));
  };
  const Eigen::Index D = static_cast<Eigen::Index>(zg.N) * zg.N;
  CMat out(D, nc);
  Vec res(nc);
  parallel_for(nc, [&](int c) {
    const Signal u = gaussian_signal(g, centers[c][0], centers[c][1], 1.0);
    const Field Fin = wa(cov_t, u);
    const Field Fout = wa(cov, P(t, u));
    res[c] = rel(Fout, rescale(Fin, chi_inv));
    out.col(c) = Eigen::Map<const CVec>(Fout.v.data(), D) / (Fin.norm());
  });

  KernelReport r;
  r.probes = nc;
  r.composition_residual = res.maxCoeff();
  Mat dist(D, nc);
  for (int j = 0; j < zg.N; ++j)
    for (int i = 0; i < zg.N; ++i) {
      const Eigen::Vector2d w = chi_inv * Eigen::Vector2d(zg.x(i), zg.x(j));
      for (int c = 0; c < nc; ++c) dist(i + static_cast<Eigen::Index>(j) * zg.N, c) = (centers[c] - w).norm();
    }
  const double cell = zg.step();
  double off = 0, all = 0;
  for (Eigen::Index c = 0; c < nc; ++c)
    for (Eigen::Index k = 0; k < D; ++k) {
      const double m = std::norm(out(k, c));
      all += m;
      if (dist(k, c) > 1.0) off += m;
    }
  r.off_diagonal = all > 0 ? off / all : 0.0;
  for (int n = 0; n <= 2; ++n) {
    const CMat W = out.cwiseProduct((1.0 + dist.array().square()).pow(n).matrix().cast<cd>()) * cell;
    r.weighted_norms.push_back(Eigen::JacobiSVD<CMat>(W).singularValues()[0]);
  }
  r.bounded_growth = true;
  for (double v : r.weighted_norms) {
    r.growth.push_back(v / r.weighted_norms[0]);
    if (r.growth.back() > cfg.growth_factor) r.bounded_growth = false;
  }
  return r;
}

std::vector<int> WaveFrontReport::singular_bins() const {
  std::vector<int> s;
  for (int j = 0; j < static_cast<int>(cones.size()); ++j)
    if (cones[j].singular) s.push_back(j);
  return s;
}

WaveFrontReport wavefront(const Signal& f, WaveRep rep, const WaveFrontConfig& cfg,
                          const std::optional<CovariantForm>& cov) {
  if (cfg.bins < 4) throw ValidationError("wavefront: at least 4 angular bins");
  if (cfg.nmax < 1) throw ValidationError("wavefront: nmax must be at least 1");
  if (!(cfg.wigner_extent > 0 && cfg.wigner_extent <= 1)) throw ValidationError("wavefront: wigner_extent must lie in (0, 1]");
  Field F;
  switch (rep) {
    case WaveRep::wigner:
      F = wigner_cross(f, f);
      break;
    case WaveRep::wigner_A:
      if (!cov) throw ValidationError("wavefront: wigner_A needs a covariant form");
      F = wigner_A_covariant(*cov, f, f);
      break;
    case WaveRep::stft_global:
      F = stft(f, gaussian_signal(f.grid, 0, 0, 1));
      break;
  }
  const double cell = F.cell();
  const int B = cfg.bins, NN = cfg.nmax;
  WaveFrontReport r;
  r.cones.resize(B);
  for (int j = 0; j < B; ++j) {
    r.cones[j].angle = -pi + (j + 0.5) * 2.0 * pi / B;
    r.cones[j].I.assign(NN + 1, 0.0);
  }
  double peak = 0, rim = 0;
  const double X = F.g0.L, XI = F.g1.L;
  const double extent = rep == WaveRep::stft_global ? 1.0 : cfg.wigner_extent;
  double cone_total = 0;
  for (int j = 0; j < F.g1.N; ++j)
    for (int i = 0; i < F.g0.N; ++i) {
      const double x = F.g0.x(i), xi = F.g1.x(j);
      const double m = std::norm(F.v(i, j));
      peak = std::max(peak, m);
      if (std::abs(x) >= 0.9 * X || std::abs(xi) >= 0.9 * XI) rim = std::max(rim, m);
      if (std::abs(x) > extent * X || std::abs(xi) > extent * XI) continue;
      cone_total += m * cell;
      const double rr = std::hypot(x, xi);
      if (rr < cfg.r0) continue;
      int b = static_cast<int>(std::floor((std::atan2(xi, x) + pi) / (2.0 * pi) * B));
      b = std::clamp(b, 0, B - 1);
      ConeReport& c = r.cones[b];
      c.r_max = std::max(c.r_max, rr);
      double w = 1.0;
      for (int n = 0; n <= NN; ++n) {
        c.I[n] += w * m * cell;
        w *= 1.0 + rr * rr;
      }
    }
  r.decades = rim > 0 ? std::log10(peak / rim) : std::numeric_limits<double>::infinity();
  double fpeak = 0, frim = 0;
  for (int k = 0; k < f.grid.N; ++k) {
    const double m = std::norm(f.v(k));
    fpeak = std::max(fpeak, m);
    if (std::abs(f.grid.x(k)) >= 0.9 * f.grid.L) frim = std::max(frim, m);
  }
  if (frim > 0) r.decades = std::min(r.decades, std::log10(fpeak / frim));
  r.inconclusive = !(r.decades >= cfg.min_decades);
  const double nbar = NN / 2.0;
  double sxx = 0;
  for (int n = 0; n <= NN; ++n) sxx += (n - nbar) * (n - nbar);
  for (auto& c : r.cones) {
    if (!(c.I[0] > 0)) continue;
    double ybar = 0, sxy = 0;
    for (int n = 0; n <= NN; ++n) ybar += std::log(c.I[n]) / (NN + 1);
    for (int n = 0; n <= NN; ++n) sxy += (n - nbar) * (std::log(c.I[n]) - ybar);
    c.slope = sxy / sxx;
    c.singular = !r.inconclusive && c.I[0] >= cfg.mass_floor * cone_total &&
                 c.slope > cfg.threshold * std::log(1.0 + c.r_max * c.r_max);
  }
  return r;
}

namespace {

int angle_bin(double theta, int B) {
  int b = static_cast<int>(std::floor((theta + pi) / (2.0 * pi) * B));
  return ((b % B) + B) % B;
}

double hausdorff_bins(const std::vector<int>& a, const std::vector<int>& b, int B) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto d = [B](int p, int q) {
    const int k = std::abs(p - q) % B;
    return std::min(k, B - k);
  };
  auto directed = [&](const std::vector<int>& u, const std::vector<int>& v) {
    int worst = 0;
    for (int p : u) {
      int best = B;
      for (int q : v) best = std::min(best, d(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

PropagationReport wavefront_propagation_check(const Hamiltonian& H, double t, const Signal& u0,
                                              const WaveFrontConfig& cfg) {
  PropagationReport r;
  r.initial = wavefront(u0, WaveRep::wigner, cfg);
  r.evolved = wavefront(propagate(H, t, u0), WaveRep::wigner, cfg);
  r.inconclusive = r.initial.inconclusive || r.evolved.inconclusive;
  const Mat chi = hamiltonian_flow(H.quad, t);
  std::set<int> mapped;
  for (int j : r.initial.singular_bins()) {
    const double th = r.initial.cones[j].angle;
    const Eigen::Vector2d d = chi * Eigen::Vector2d(std::cos(th), std::sin(th));
    mapped.insert(angle_bin(std::atan2(d[1], d[0]), cfg.bins));
  }
  r.mapped.assign(mapped.begin(), mapped.end());
  r.distance_bins = hausdorff_bins(r.mapped, r.evolved.singular_bins(), cfg.bins);
  return r;
}

double stft_wigner_identity_residual(const Signal& f, const Signal& g, const std::optional<CovariantForm>& cov) {
  if (!f.grid.same(g.grid)) throw ShapeError("stft_wigner_identity_residual: grid mismatch");
  const Field V = stft(f, g);
  Field lhs = V;
  lhs.v = V.v.cwiseAbs2().cast<cd>();

  const Field Wg = wigner_cross(g, g);
  Field IWg = Wg;
  const int N0 = Wg.g0.N, N1 = Wg.g1.N;
  for (int j = 0; j < N1; ++j)
    for (int i = 0; i < N0; ++i) IWg.v(i, j) = Wg.v((N0 - i) % N0, (N1 - j) % N1);

  const Field WAf = cov ? wigner_A_covariant(*cov, f, f) : wigner_cross(f, f);
  const Mat B = cov ? cohen_B(*cov) : Mat::Zero(2, 2);
  Field S = fourier(IWg);
  const Field T = fourier(WAf);
  for (int j = 0; j < S.g1.N; ++j)
    for (int i = 0; i < S.g0.N; ++i) {
      const double z1 = S.g0.x(i), z2 = S.g1.x(j);
      const double q = B(0, 0) * z1 * z1 + 2.0 * B(0, 1) * z1 * z2 + B(1, 1) * z2 * z2;
      S.v(i, j) *= T.v(i, j) * expi(pi * q);
    }
  const Field rhs = fourier(S, true);
  return rel(lhs, rhs);
}

}  // namespace metaplab
