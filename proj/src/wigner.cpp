#include "metaplab/wigner.hpp"

#include <cmath>
#include <map>

#include "metaplab/fft.hpp"

namespace metaplab {

Field wigner_cross(const Signal& f, const Signal& g) {
  if (!f.grid.same(g.grid)) throw ShapeError("wigner_cross: grid mismatch");
  const int N = f.grid.N;
  const double h = f.grid.step();
  const CVec f2 = upsample2(f.v), g2 = upsample2(g.v);
  Field W{f.grid, f.grid.dual(), CMat(N, N), f.interpolated || g.interpolated};
  parallel_for(N, [&](int i) {
    // lag t = k h, f(x + t/2) = f2[2i + k], g(x - t/2) = g2[2i - k]
    CVec b = CVec::Zero(2 * N);
    for (int k = -N; k < N; ++k) {
      const int p = 2 * i + k, q = 2 * i - k;
      if (p < 0 || p >= 2 * N || q < 0 || q >= 2 * N) continue;
      b[(k + 2 * N) % (2 * N)] = ((k & 1) ? -1.0 : 1.0) * f2[p] * std::conj(g2[q]);
    }
    dft_inplace(b, -1);
    for (int j = 0; j < N; ++j) W.v(i, j) = h * b[2 * j];
  });
  return W;
}

Field covariant_quadrature(const Signal& f, const Signal& g, double a11, double a21, const Grid& xgrid,
                           const Grid& xigrid, int R) {
  if (!f.grid.same(g.grid)) throw ShapeError("covariant quadrature: grid mismatch");
  const Grid& sg = f.grid;
  const double h = sg.step();
  if (R <= 0) {
    double band = (std::abs(1.0 - a11) + std::abs(a11)) * sg.nyquist() + xigrid.nyquist() +
                  std::abs(a21) * 2.0 * sg.L;
    R = std::max(1, static_cast<int>(std::ceil(band * h * (1.0 - 1e-12))));
  }
  const double he = h / R;
  const int M = sg.N * R;  // eta in [-2L, 2L)
  Vec eta(2 * M);
  for (int m = 0; m < 2 * M; ++m) eta[m] = (m - M) * he;
  CMat E(2 * M, xigrid.N);
  for (int j = 0; j < xigrid.N; ++j)
    for (int m = 0; m < 2 * M; ++m) E(m, j) = he * expi(-2.0 * pi * xigrid.x(j) * eta[m]);
  CVec chirp(2 * M);
  for (int m = 0; m < 2 * M; ++m) chirp[m] = expi(pi * a21 * eta[m] * eta[m]);

  CMat P(xgrid.N, 2 * M);
  parallel_for(xgrid.N, [&](int i) {
    const double x = xgrid.x(i);
    Vec pf = x + (1.0 - a11) * eta.array();
    Vec pg = x - a11 * eta.array();
    CVec F = interpolate(f, pf), G = interpolate(g, pg);
    P.row(i) = (F.array() * G.array().conjugate() * chirp.array()).transpose();
  });
  Field W{xgrid, xigrid, P * E, true};
  return W;
}

Field tau_wigner(const Signal& f, const Signal& g, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("tau_wigner: tau must lie in [0, 1]");
  Field W = covariant_quadrature(f, g, 1.0 - tau, 0.0, f.grid, f.grid.dual());
  W.interpolated = f.interpolated || g.interpolated;
  return W;
}

Field stft(const Signal& f, const Signal& window) {
  if (!f.grid.same(window.grid)) throw ShapeError("stft: grid mismatch");
  const Grid& g = f.grid;
  const int N = g.N;
  Field V{g, g.dual(), CMat(N, N), f.interpolated || window.interpolated};
  parallel_for(N, [&](int i) {
    // g(t_k - x_i) = g_{k - i + N/2}
    CVec row = CVec::Zero(N);
    for (int k = 0; k < N; ++k) {
      const int idx = k - i + N / 2;
      if (idx >= 0 && idx < N) row[k] = f.v[k] * std::conj(window.v[idx]);
    }
    fourier_inplace(row, g);
    V.v.row(i) = row.transpose();
  });
  return V;
}

Field apply_a13(const Field& W, double a13) {
  if (a13 == 0.0) return W;
  Field S = fourier_axis(W, 0);
  for (int i = 0; i < S.g0.N; ++i) {
    const double u = S.g0.x(i);
    S.v.row(i) *= expi(-pi * a13 * u * u);
  }
  return fourier_axis(S, 0, true);
}

Field wigner_A(const Mat& A, const Signal& f, const Signal& g) {
  if (A.rows() != 4 || A.cols() != 4) throw ShapeError("wigner_A: need a 4x4 symplectic matrix");
  return apply(A, tensor(f, conjugate(g)));
}

Field wigner_A_covariant(const CovariantForm& cov, const Signal& f, const Signal& g) {
  if (cov.d() != 1) throw ShapeError("wigner_A_covariant: d = 1 only");
  Field W = covariant_quadrature(f, g, cov.A11(0, 0), cov.A21(0, 0), f.grid, f.grid.dual());
  return apply_a13(W, cov.A13(0, 0));
}

Field stft_reduction(const Mat& A, const Signal& f, const Signal& g) {
  if (A.rows() != 4 || A.cols() != 4) throw ShapeError("stft_reduction: need a 4x4 symplectic matrix");
  auto L = wigner_decomposable_L(A);
  if (!L) throw ValidationError("stft_reduction: matrix is not totally Wigner-decomposable");
  const double a11 = A(0, 0), a12 = A(0, 1), a23 = A(1, 2), a24 = A(1, 3), a33 = A(2, 2), a34 = A(2, 3);
  auto tiny = [](double v) { return std::abs(v) < 1.0 / kConditionBound; };
  if (tiny(a11) || tiny(a12) || tiny(a23) || tiny(a24))
    throw ValidationError("stft_reduction: A11, A12, A23, A24 must be invertible (right-regular L)");
  if (!f.grid.same(g.grid)) throw ShapeError("stft_reduction: grid mismatch");

  const Grid& sg = f.grid;
  const Grid xg = sg, xig = sg.dual();
  const double cx = a33 - a23 * a34 / a24;
  const double wscale = a24 / a23;
  const double amp = std::sqrt(std::abs(L->determinant())) / std::abs(a23);
  // the rescaled window and the mapped frequencies need a finer t quadrature
  const double band = (1.0 + std::abs(wscale)) * sg.nyquist() + xig.nyquist() / std::abs(a23);
  const int R = std::max(1, static_cast<int>(std::ceil(band * sg.step() * (1.0 - 1e-12))));
  const int Nt = sg.N * R;
  const double ht = sg.step() / R;
  Vec t(Nt);
  for (int k = 0; k < Nt; ++k) t[k] = -sg.L + k * ht;
  const CVec ft = R == 1 ? f.v : interpolate(f, t);

  CMat E(Nt, xig.N);
  for (int j = 0; j < xig.N; ++j) {
    const double d = xig.x(j) / a23;
    for (int k = 0; k < Nt; ++k) E(k, j) = ht * expi(-2.0 * pi * d * t[k]);
  }
  CMat P(xg.N, Nt);
  parallel_for(xg.N, [&](int i) {
    const double c = cx * xg.x(i);
    Vec s = wscale * (t.array() - c);
    CVec G = interpolate(g, s);
    P.row(i) = (ft.array() * G.array().conjugate()).transpose();
  });
  Field W{xg, xig, P * E, true};
  for (int j = 0; j < xig.N; ++j)
    for (int i = 0; i < xg.N; ++i) W.v(i, j) *= amp * expi(2.0 * pi * xig.x(j) / a23 * a33 * xg.x(i));
  return W;
}

Field cohen_convolve(const Mat& B, const Field& W) {
  if (B.rows() != 2 || B.cols() != 2) throw ShapeError("cohen_convolve: d = 1 needs a 2x2 matrix");
  if (std::abs(B(0, 1) - B(1, 0)) > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff()))
    throw ValidationError("cohen_convolve: B must be symmetric");
  Field S = fourier(W);
  for (int j = 0; j < S.g1.N; ++j)
    for (int i = 0; i < S.g0.N; ++i) {
      const double z1 = S.g0.x(i), z2 = S.g1.x(j);
      S.v(i, j) *= expi(-pi * (B(0, 0) * z1 * z1 + 2.0 * B(0, 1) * z1 * z2 + B(1, 1) * z2 * z2));
    }
  return fourier(S, true);
}

double weight_vs(double x, double xi, double s) { return std::pow(1.0 + x * x + xi * xi, s / 2.0); }

double modulation_norm(const Signal& f, const Signal& window, double p, double q, double s) {
  if (window.v.cwiseAbs().maxCoeff() == 0.0) throw ValidationError("modulation_norm: zero window");
  if (!(p > 0) || !(q > 0)) throw ValidationError("modulation_norm: p and q must be positive");
  const Field V = stft(f, window);
  const double hx = V.g0.step(), hxi = V.g1.step();
  Vec inner(V.g1.N);
  for (int j = 0; j < V.g1.N; ++j) {
    double acc = 0;
    for (int i = 0; i < V.g0.N; ++i) {
      const double val = std::abs(V.v(i, j)) * weight_vs(V.g0.x(i), V.g1.x(j), s);
      acc = std::isinf(p) ? std::max(acc, val) : acc + std::pow(val, p);
    }
    inner[j] = std::isinf(p) ? acc : std::pow(hx * acc, 1.0 / p);
  }
  if (std::isinf(q)) return inner.maxCoeff();
  double acc = 0;
  for (int j = 0; j < V.g1.N; ++j) acc += std::pow(inner[j], q);
  return std::pow(hxi * acc, 1.0 / q);
}

double wiener_amalgam_norm(const Field& H, double q, double s) {
  if (H.g0.step() > 1.0 || H.g1.step() > 1.0)
    throw ValidationError("wiener_amalgam_norm: grid coarser than unit cells");
  if (!(q > 0)) throw ValidationError("wiener_amalgam_norm: q must be positive");
  std::map<std::pair<long, long>, double> sup;
  for (int j = 0; j < H.g1.N; ++j)
    for (int i = 0; i < H.g0.N; ++i) {
      std::pair<long, long> k{std::lround(std::floor(H.g0.x(i) + 0.5)), std::lround(std::floor(H.g1.x(j) + 0.5))};
      double& m = sup[k];
      m = std::max(m, std::abs(H.v(i, j)));
    }
  double acc = 0;
  for (const auto& [k, m] : sup) {
    const double val = m * weight_vs(static_cast<double>(k.first), static_cast<double>(k.second), s);
    acc = std::isinf(q) ? std::max(acc, val) : acc + std::pow(val, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

}  // namespace metaplab
