#include "metaplab/quantize.hpp"

#include <cmath>

#include "metaplab/fft.hpp"

namespace metaplab {

Signal DenseOperator::operator()(const Signal& f) const {
  if (field) throw ShapeError("field operator applied to a signal");
  if (!f.grid.same(g0)) throw ShapeError("operator grid mismatch");
  return {g0, m * f.v, f.interpolated};
}

Field DenseOperator::operator()(const Field& F) const {
  if (!field) throw ShapeError("signal operator applied to a field");
  if (!F.g0.same(g0) || !F.g1.same(g1)) throw ShapeError("operator grid mismatch");
  CVec flat = Eigen::Map<const CVec>(F.v.data(), F.v.size());
  CVec out = m * flat;
  return {g0, g1, Eigen::Map<CMat>(out.data(), F.v.rows(), F.v.cols()), F.interpolated};
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.field != b.field || !a.g0.same(b.g0) || !a.g1.same(b.g1)) throw ShapeError("operator product: grid mismatch");
  return {a.g0, a.g1, a.field, a.m * b.m};
}

DenseOperator identity_operator(const Grid& g) { return {g, g, false, CMat::Identity(g.N, g.N)}; }

Field symbol_field(const Symbol& a, const Grid& g) { return sample(g, g.dual(), a); }

namespace {

inline double alt(long n) { return (n & 1) ? -1.0 : 1.0; }

// eval(s, j): symbol at midpoint -L + s h/2 and frequency (j - RN/2)/(2 L R)
DenseOperator weyl_core(const Grid& g, int R, const std::function<cd(int, int)>& eval) {
  const int N = g.N, K = R * N;
  CMat M(N, N);
  parallel_for(2 * N - 1, [&](int s) {
    CVec buf(K);
    for (int j = 0; j < K; ++j) buf[j] = eval(s, j);
    dft_inplace(buf, +1);
    for (int i = std::max(0, s - N + 1); i <= std::min(s, N - 1); ++i) {
      const int k = s - i, n = i - k;
      M(i, k) = alt(n) * buf[((n % K) + K) % K] / static_cast<double>(K);
    }
  });
  return {g, g, false, M};
}

}  // namespace

DenseOperator weyl(const Symbol& a, const Grid& g, int R) {
  if (g.N > 256) throw ValidationError("weyl: N > 256 exceeds the dense operator size guard");
  if (R < 1) throw ValidationError("weyl: oversampling must be positive");
  const double h = g.step();
  const double deta = 1.0 / (2.0 * g.L * R);
  const int K = R * g.N;
  return weyl_core(g, R, [&](int s, int j) { return a(-g.L + s * h / 2.0, (j - K / 2) * deta); });
}

DenseOperator weyl(const Field& a) {
  if (!a.g1.same(a.g0.dual())) throw ShapeError("weyl: symbol samples must live on (x grid, dual grid)");
  if (a.g0.N > 256) throw ValidationError("weyl: N > 256 exceeds the dense operator size guard");
  const CMat a2 = upsample2_axis(upsample2_axis(a.v, 0), 1);
  return weyl_core(a.g0, 2, [&](int s, int j) { return a2(s, j); });
}

DenseOperator weyl4(const Symbol4& b, const Grid& g0, const Grid& g1, int R) {
  if (g0.N > 32 || g1.N > 32) throw ValidationError("weyl4: N > 32 per axis exceeds the 4d operator size guard");
  const int N0 = g0.N, N1 = g1.N, K0 = R * N0, K1 = R * N1;
  const double h0 = g0.step(), h1 = g1.step();
  const double d0 = 1.0 / (2.0 * g0.L * R), d1 = 1.0 / (2.0 * g1.L * R);
  const Eigen::Index D = static_cast<Eigen::Index>(N0) * N1;
  CMat M = CMat::Zero(D, D);
  const double norm = 1.0 / (static_cast<double>(K0) * K1);
  parallel_for(2 * N0 - 1, [&](int s0) {
    CMat buf(K0, K1);
    const double m0 = -g0.L + s0 * h0 / 2.0;
    for (int s1 = 0; s1 < 2 * N1 - 1; ++s1) {
      const double m1 = -g1.L + s1 * h1 / 2.0;
      for (int j1 = 0; j1 < K1; ++j1)
        for (int j0 = 0; j0 < K0; ++j0) buf(j0, j1) = b(m0, m1, (j0 - K0 / 2) * d0, (j1 - K1 / 2) * d1);
      dft_axis(buf, 0, +1);
      dft_axis(buf, 1, +1);
      for (int i0 = std::max(0, s0 - N0 + 1); i0 <= std::min(s0, N0 - 1); ++i0) {
        const int k0 = s0 - i0, n0 = i0 - k0;
        for (int i1 = std::max(0, s1 - N1 + 1); i1 <= std::min(s1, N1 - 1); ++i1) {
          const int k1 = s1 - i1, n1 = i1 - k1;
          M(i0 + static_cast<Eigen::Index>(i1) * N0, k0 + static_cast<Eigen::Index>(k1) * N0) =
              alt(n0 + n1) * norm * buf(((n0 % K0) + K0) % K0, ((n1 % K1) + K1) % K1);
        }
      }
    }
  });
  return {g0, g1, true, M};
}

Field inverse_weyl(const DenseOperator& T) {
  if (T.field) throw ShapeError("inverse_weyl: signal-side operators only");
  const Grid& g = T.g0;
  const int N = g.N;
  auto entry = [&](int s, int n) -> cd {
    const int i = (s + n) / 2, k = (s - n) / 2;
    return (i < 0 || i >= N || k < 0 || k >= N) ? cd(0.0) : T.m(i, k);
  };
  // lag profile c(i, n) at midpoint x_i; odd lags are only seen at half-step
  // midpoints and are moved back onto the grid by a -h/2 shift
  CMat even(N, N + 1), odd(N, N + 1);
  even.setZero();
  odd.setZero();
  for (int n = -N / 2; n <= N / 2; ++n)
    for (int i = 0; i < N; ++i) {
      if (n % 2 == 0)
        even(i, n + N / 2) = entry(2 * i, n);
      else
        odd(i, n + N / 2) = entry(2 * i + 1, n);
    }
  shift_axis(odd, g, 0, Vec::Constant(N + 1, -g.step() / 2.0));
  Field a{g, g.dual(), CMat(N, N)};
  parallel_for(N, [&](int i) {
    CVec b = CVec::Zero(N);
    for (int n = -N / 2; n <= N / 2; ++n) {
      const cd c = (n % 2 == 0) ? even(i, n + N / 2) : odd(i, n + N / 2);
      b[((n % N) + N) % N] += alt(n) * c;
    }
    dft_inplace(b, -1);
    a.v.row(i) = b.transpose();
  });
  return a;
}

DenseOperator op_A(const Mat& A, const Field& a) {
  if (!a.g1.same(a.g0.dual())) throw ShapeError("op_A: symbol samples must live on (x grid, dual grid)");
  Field k = apply(symplectic_inverse(A), a);
  return {k.g0, k.g1, false, k.g0.step() * k.v};
}

Field requantize(const Mat& A, const Mat& B, const Field& a) { return apply(B * symplectic_inverse(A), a); }

DenseOperator op_A_covariant_formula(const CovariantForm& cov, const Field& a) {
  if (cov.d() != 1) throw ShapeError("op_A_covariant_formula: d = 1 only");
  if (!a.g1.same(a.g0.dual())) throw ShapeError("op_A_covariant_formula: symbol grid mismatch");
  const double a11 = cov.A11(0, 0), c0 = cov.A13(0, 0), c1 = -cov.A21(0, 0);
  Field S = fourier(a);
  for (int j = 0; j < S.g1.N; ++j)
    for (int i = 0; i < S.g0.N; ++i) {
      const double z0 = S.g0.x(i), z1 = S.g1.x(j);
      S.v(i, j) *= expi(pi * (c0 * z0 * z0 + c1 * z1 * z1));
    }
  // half-step frequency grid keeps the kernel free of periodic wrap in x - y
  const CMat ac = upsample2_axis(fourier(S, true).v, 1);
  const Grid& g = a.g0;
  const int N = g.N;
  const double h = g.step(), dxi = a.g1.step() / 2.0;
  Vec xi(2 * N);
  for (int j = 0; j < 2 * N; ++j) xi[j] = -a.g1.L + j * dxi;
  CMat M(N, N);
  parallel_for(N, [&](int i) {
    Vec p(N);
    for (int k = 0; k < N; ++k) p[k] = a11 * g.x(i) + (1.0 - a11) * g.x(k);
    const CMat rows = interp_matrix(g, p).cast<cd>() * ac;  // a_C(p_k, xi_j)
    for (int k = 0; k < N; ++k) {
      cd acc = 0;
      for (int j = 0; j < 2 * N; ++j) acc += rows(k, j) * expi(2.0 * pi * xi[j] * (g.x(i) - g.x(k)));
      M(i, k) = h * dxi * acc;
    }
  });
  return {g, g, false, M};
}

Symbol4 symbol_pullback(const Mat& A, const Symbol& a, Pullback variant) {
  if (A.rows() != 4 || A.cols() != 4) throw ShapeError("symbol_pullback: need a 4x4 symplectic matrix");
  const Eigen::Matrix4d Ainv = symplectic_inverse(A);
  switch (variant) {
    case Pullback::b:
      return [Ainv, a](double x, double xi, double u, double v) {
        Eigen::Vector4d w = Ainv * Eigen::Vector4d(x, xi, u, v);
        return a(w[0], w[2]);
      };
    case Pullback::b_tilde:
      return [Ainv, a](double x, double xi, double u, double v) {
        Eigen::Vector4d w = Ainv * Eigen::Vector4d(x, xi, u, v);
        return std::conj(a(w[1], -w[3]));
      };
    case Pullback::c:
      return [Ainv, a](double x, double xi, double u, double v) {
        Eigen::Vector4d w = Ainv * Eigen::Vector4d(x, xi, u, v);
        return a(w[0], w[2]) * std::conj(a(w[1], -w[3]));
      };
  }
  throw ValidationError("symbol_pullback: unknown variant");
}

Symbol4 symbol_pullback_closed(const Mat& A, const Symbol& a) {
  if (auto cov = covariant_form_of(A)) {
    const double a11 = cov->A11(0, 0), a13 = cov->A13(0, 0), a21 = cov->A21(0, 0);
    return [=](double x, double xi, double u, double v) {
      return a(x - a13 * u + (a11 - 1.0) * v, xi + a11 * u + a21 * v);
    };
  }
  if (wigner_decomposable_L(A)) {
    const double a33 = A(2, 2), a23 = A(1, 2), a41 = A(3, 0), a11 = A(0, 0);
    return [=](double x, double xi, double u, double v) { return a(a33 * x - a23 * v, -a41 * xi + a11 * u); };
  }
  throw ShapeError("symbol_pullback_closed: matrix is neither covariant nor totally Wigner-decomposable");
}

ConjugationReport conjugation_check(const Mat& A, const Symbol& a, const Signal& f, const Signal& g,
                                    const Grid& zg) {
  auto cov = covariant_form_of(A);
  if (!cov) throw ValidationError("conjugation_check: covariant matrices only");
  if (zg.N > 32) throw ValidationError("conjugation_check: field grid above N = 32");
  const double a11 = cov->A11(0, 0), a13 = cov->A13(0, 0), a21 = cov->A21(0, 0);
  auto WA = [&](const Signal& p, const Signal& q) {
    return apply_a13(covariant_quadrature(p, q, a11, a21, zg, zg, 2), a13);
  };
  auto rel = [](const Field& lhs, const Field& rhs) { return (lhs.v - rhs.v).norm() / lhs.v.norm(); };

  const DenseOperator op = weyl(a, f.grid, 2);
  const Signal Of = op(f), Og = op(g);
  const Field W0 = WA(f, g);
  ConjugationReport r;
  r.a4 = rel(WA(Of, g), weyl4(symbol_pullback(A, a, Pullback::b), zg, zg)(W0));
  r.a5 = rel(WA(f, Og), weyl4(symbol_pullback(A, a, Pullback::b_tilde), zg, zg)(W0));
  const Field lhs6 = WA(Of, Of);
  r.a6 = rel(lhs6, weyl4(symbol_pullback(A, a, Pullback::c), zg, zg)(WA(f, f)));
  r.a6_imag = lhs6.v.imag().cwiseAbs().maxCoeff() / lhs6.v.cwiseAbs().maxCoeff();
  return r;
}

}  // namespace metaplab
