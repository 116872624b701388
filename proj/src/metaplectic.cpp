#include "metaplab/metaplectic.hpp"

#include <cmath>

namespace metaplab {

Signal apply_generator(const Generator& g, const Signal& f, bool guard) {
  switch (g.tag) {
    case Gen::Fourier: return fourier(f);
    case Gen::Chirp: return chirp_multiply(f, g.param(0, 0), guard);
    case Gen::Rescale: return rescale(f, g.param(0, 0));
    case Gen::PartialFourier: throw ShapeError("partial Fourier acts on fields only");
  }
  return f;
}

Field apply_generator(const Generator& g, const Field& F, bool guard) {
  switch (g.tag) {
    case Gen::Fourier: return fourier(F);
    case Gen::Chirp: return chirp_multiply(F, g.param, guard);
    case Gen::Rescale: return rescale(F, g.param);
    case Gen::PartialFourier: return partial_fourier_2(F);
  }
  return F;
}

Signal apply_chain(const GeneratorChain& chain, const Signal& f, bool guard) {
  if (chain.n != 1) throw ShapeError("signal chains need 2x2 generators");
  Signal r = f;
  for (auto it = chain.gens.rbegin(); it != chain.gens.rend(); ++it) r = apply_generator(*it, r, guard);
  return r;
}

Field apply_chain(const GeneratorChain& chain, const Field& F, bool guard) {
  if (chain.n != 2) throw ShapeError("field chains need 4x4 generators");
  bool fourier_steps = false;
  for (const auto& g : chain.gens) fourier_steps |= g.tag == Gen::Fourier || g.tag == Gen::PartialFourier;
  if (fourier_steps) {
    const Grid sd0 = Grid::self_dual(F.g0.N), sd1 = Grid::self_dual(F.g1.N);
    if (!F.g0.same(sd0, 1e-9) || !F.g1.same(sd1, 1e-9) || F.g0.N != F.g1.N)
      throw ValidationError("metaplectic action on fields needs a square self-dual grid (L^2 = N/4)");
  }
  Field r = F;
  for (auto it = chain.gens.rbegin(); it != chain.gens.rend(); ++it) r = apply_generator(*it, r, guard);
  return r;
}

Signal apply(const Mat& A, const Signal& f, bool guard) {
  if (A.rows() != 2 || A.cols() != 2) throw ShapeError("apply: signals need a 2x2 symplectic matrix");
  return apply_chain(generator_decompose(A), f, guard);
}

Field apply(const Mat& A, const Field& F, bool guard) {
  if (A.rows() != 4 || A.cols() != 4) throw ShapeError("apply: fields need a 4x4 symplectic matrix");
  return apply_chain(generator_decompose(A), F, guard);
}

Signal apply_free_quadrature(const Mat& A, const Signal& f) { return apply_free_quadrature(A, f, f.grid); }

Signal apply_free_quadrature(const Mat& A, const Signal& f, const Grid& out) {
  if (A.rows() != 2) throw ShapeError("apply_free_quadrature: signals need a 2x2 matrix");
  if (f.grid.N > 256) throw ValidationError("apply_free_quadrature: N > 256 exceeds the quadrature size guard");
  const double a = A(0, 0), b = A(0, 1), d = A(1, 1);
  if (std::abs(b) < 1e-12) throw ValidationError("apply_free_quadrature: matrix is not free");
  const Grid& g = f.grid;
  const double h = g.step();
  Signal r{out, CVec(out.N), f.interpolated};
  CVec pre(g.N);
  for (int k = 0; k < g.N; ++k) {
    double y = g.x(k);
    pre[k] = f.v[k] * expi(pi * a / b * y * y);
  }
  for (int i = 0; i < out.N; ++i) {
    const double x = out.x(i);
    cd acc = 0;
    for (int k = 0; k < g.N; ++k) acc += pre[k] * expi(-2.0 * pi * x * g.x(k) / b);
    r.v[i] = h * acc * expi(pi * d / b * x * x) / std::sqrt(std::abs(b));
  }
  return r;
}

Field apply_free_quadrature(const Mat& A, const Field& F) {
  if (A.rows() != 4) throw ShapeError("apply_free_quadrature: fields need a 4x4 matrix");
  if (F.g0.N > 64 || F.g1.N > 64) throw ValidationError("apply_free_quadrature: N > 64 exceeds the field quadrature size guard");
  FreeBlocks bl = free_blocks(A);
  if (condition_number(bl.B) > kConditionBound) throw ValidationError("apply_free_quadrature: matrix is not free");
  const Mat Binv = bl.B.inverse();
  const Mat P = bl.D * Binv, Q = Binv * bl.A;
  const int N0 = F.g0.N, N1 = F.g1.N;
  const Eigen::Index M = static_cast<Eigen::Index>(N0) * N1;
  Eigen::MatrixXd Y(2, M);
  CVec pre(M);
  for (int j = 0; j < N1; ++j)
    for (int i = 0; i < N0; ++i) {
      Eigen::Vector2d y(F.g0.x(i), F.g1.x(j));
      Y.col(i + static_cast<Eigen::Index>(j) * N0) = y;
      pre[i + static_cast<Eigen::Index>(j) * N0] = F.v(i, j) * expi(pi * y.dot(Q * y));
    }
  const double w = F.cell() / std::sqrt(std::abs(bl.B.determinant()));
  Field r{F.g0, F.g1, CMat(N0, N1), F.interpolated};
  parallel_for(N1, [&](int j) {
    for (int i = 0; i < N0; ++i) {
      Eigen::Vector2d x(F.g0.x(i), F.g1.x(j));
      Eigen::Vector2d bx = Binv.transpose() * x;
      cd acc = 0;
      for (Eigen::Index m = 0; m < M; ++m) acc += pre[m] * expi(-2.0 * pi * bx.dot(Y.col(m)));
      r.v(i, j) = w * acc * expi(pi * x.dot(P * x));
    }
  });
  return r;
}

Signal conv_chirp(double C, const Signal& f) {
  Signal s = fourier(f);
  for (int j = 0; j < s.grid.N; ++j) {
    double xi = s.grid.x(j);
    s.v[j] *= expi(pi * C * xi * xi);
  }
  return inverse_fourier(s);
}

Signal conv_chirp_direct(double C, const Signal& f) {
  if (std::abs(C) < 1e-14) return f;
  const Grid& g = f.grid;
  const double h = g.step();
  const double sgn = C > 0 ? 1.0 : -1.0;
  const cd pre = expi(pi * sgn / 4.0) / std::sqrt(std::abs(C));
  Signal r{g, CVec(g.N), f.interpolated};
  for (int i = 0; i < g.N; ++i) {
    cd acc = 0;
    for (int k = 0; k < g.N; ++k) {
      double u = g.x(i) - g.x(k);
      acc += f.v[k] * expi(-pi * u * u / C);
    }
    r.v[i] = pre * h * acc;
  }
  return r;
}

CMat metaplectic_matrix(const Mat& A, const Grid& g) {
  GeneratorChain chain = generator_decompose(A);
  CMat M(g.N, g.N);
  parallel_for(g.N, [&](int k) {
    Signal e{g, CVec::Zero(g.N)};
    e.v[k] = 1.0 / std::sqrt(g.step());
    Signal out = apply_chain(chain, e, false);
    M.col(k) = out.v * std::sqrt(g.step());
  });
  return M;
}

}  // namespace metaplab
