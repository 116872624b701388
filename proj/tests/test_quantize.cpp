#include <doctest.h>

#include "metaplab/quantize.hpp"

using namespace metaplab;

namespace {

const Symbol one = [](double, double) { return cd(1); };
const Symbol centred = [](double x, double xi) { return cd(std::exp(-pi * (x * x + xi * xi))); };
const Symbol shifted = [](double x, double xi) {
  return cd(std::exp(-pi * ((x - 0.5) * (x - 0.5) + (xi + 0.3) * (xi + 0.3))));
};

Mat c1(double v) { return Mat::Constant(1, 1, v); }

}  // namespace

TEST_CASE("Weyl quantization") {
  const Grid g = Grid::self_dual(64);
  CHECK((weyl(one, g).m - CMat::Identity(64, 64)).cwiseAbs().maxCoeff() <= 1e-10);

  const DenseOperator W = weyl(shifted, g);
  CHECK((W.m - W.m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);

  const Field samples = symbol_field(shifted, g);
  CHECK((weyl(samples).m - W.m).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((inverse_weyl(W).v - samples.v).cwiseAbs().maxCoeff() <= 1e-8);

  SUBCASE("modulation symbol against direct quadrature") {
    const Grid s = Grid::make(32, 2);
    const double xi0 = 0.5;
    const Symbol mod = [&](double x, double) { return expi(2 * pi * x * xi0); };
    const DenseOperator M = weyl(mod, s);
    const Signal f = gaussian_signal(s);
    const Signal out = M(f);
    // a(x) depends on x only, so the kernel collapses to a((x+y)/2) delta(x-y): pointwise product.
    for (int k = 0; k < s.N; ++k) CHECK(std::abs(out.v[k] - mod(s.x(k), 0) * f.v[k]) < 1e-10);
  }
}

TEST_CASE("metaplectic quantization") {
  const Grid g = Grid::self_dual(64);
  const Field a = symbol_field(shifted, g);
  const DenseOperator W = weyl(shifted, g);
  CHECK(phase_aligned_error(op_A(tau_matrix(0.5), a).m, W.m) <= 1e-7);

  SUBCASE("identity matrix gives the symbol as kernel") {
    const DenseOperator K = op_A(Mat::Identity(4, 4), a);
    const Signal f = hermite_signal(g, 1), h = gaussian_signal(g, 0.3, -0.2);
    const cd lhs = inner(K(f), h);
    const cd rhs = inner(a, tensor(h, conjugate(f)));
    CHECK(std::abs(std::abs(lhs) - std::abs(rhs)) <= 1e-8);
  }

  SUBCASE("pairing with the kernel field") {
    const Mat A = tau_matrix(0.25);
    const DenseOperator T = op_A(A, a);
    const Field k = apply(symplectic_inverse(A), a);
    const Signal f = hermite_signal(g, 2), h = gaussian_signal(g, -0.4, 0.3);
    const Signal fn{f.grid, f.v / f.norm()}, hn{h.grid, h.v / h.norm()};
    CHECK(std::abs(std::abs(inner(T(fn), hn)) - std::abs(inner(k, tensor(hn, conjugate(fn))))) <= 1e-8);
  }
}

TEST_CASE("change of quantization") {
  const Grid g = Grid::self_dual(64);
  const Field a = symbol_field(shifted, g);
  const std::vector<Mat> family = {tau_matrix(0), tau_matrix(0.25), tau_matrix(0.5),
                                   tau_matrix(0.75), tau_matrix(1), stft_matrix()};
  double worst = 0;
  for (const Mat& A : family)
    for (const Mat& B : family) worst = std::max(worst, phase_aligned_error(op_A(B, requantize(A, B, a)).m, op_A(A, a).m));
  CHECK(worst <= 1e-7);

  CHECK(phase_aligned_error(requantize(tau_matrix(0.5), tau_matrix(0.5), a).v, a.v) <= 1e-10);
  const Field ab = requantize(tau_matrix(0), tau_matrix(0.25), a);
  const Field chained = requantize(tau_matrix(0.25), stft_matrix(), ab);
  CHECK(phase_aligned_error(chained.v, requantize(tau_matrix(0), stft_matrix(), a).v) <= 1e-7);
}

TEST_CASE("covariant integral formula cross-check") {
  const Grid g = Grid::self_dual(64);
  const Field a = symbol_field(shifted, g);
  const DenseOperator cf = op_A_covariant_formula(*covariant_form_of(tau_matrix(0.25)), a);
  const double e = phase_aligned_error(cf.m, op_A(tau_matrix(0.25), a).m);
  MESSAGE("covariant formula discrepancy " << e);
  CHECK(std::isfinite(e));
}

TEST_CASE("symbol pullback") {
  const std::vector<double> xs = {-1.0, 0.3}, ys = {0.2, 1.1}, us = {-0.7, 0.5}, vs = {0.1, -1.3};
  for (const Mat& A : {tau_matrix(0.25), stft_matrix(), covariant_from_blocks(c1(0.3), c1(0.4), c1(-0.2))}) {
    const Symbol4 direct = symbol_pullback(A, shifted, Pullback::b), closed = symbol_pullback_closed(A, shifted);
    const Symbol4 unit = symbol_pullback(A, one, Pullback::b);
    double e = 0;
    for (double x : xs)
      for (double y : ys)
        for (double u : us)
          for (double v : vs) {
            e = std::max(e, std::abs(direct(x, y, u, v) - closed(x, y, u, v)));
            CHECK(std::abs(unit(x, y, u, v) - 1.0) < 1e-15);
          }
    CHECK(e <= 1e-8);
  }

  const Symbol4 half = symbol_pullback_closed(covariant_from_blocks(c1(0.5), c1(0), c1(0)), shifted);
  for (double x : xs)
    for (double y : ys)
      for (double u : us)
        for (double v : vs) CHECK(std::abs(half(x, y, u, v) - shifted(x - v / 2, y + u / 2)) < 1e-14);

  const Symbol4 c = symbol_pullback(tau_matrix(0.5), shifted, Pullback::c);
  const Symbol4 b = symbol_pullback(tau_matrix(0.5), shifted, Pullback::b);
  const Symbol4 bt = symbol_pullback(tau_matrix(0.5), shifted, Pullback::b_tilde);
  CHECK(std::abs(c(0.1, 0.2, 0.3, 0.4) - b(0.1, 0.2, 0.3, 0.4) * bt(0.1, 0.2, 0.3, 0.4)) < 1e-14);
}

TEST_CASE("conjugation identities on the reduced grid") {
  const Grid sg = Grid::make(64, 4), zg = Grid::make(32, 2);
  const Signal phi = gaussian_signal(sg), pm = gaussian_signal(sg, 0.3, 0.4), h1 = hermite_signal(sg, 1);
  const Symbol xonly = [](double x, double) { return cd(std::exp(-pi * x * x / 2)); };
  const Symbol cosmix = [](double x, double xi) {
    return cd(std::cos(2 * pi * 0.3 * x) * std::exp(-pi * (x * x + xi * xi) / 2));
  };
  struct Case {
    Mat A;
    Symbol a;
    Signal f;
    const char* name;
  };
  const std::vector<Case> corpus = {
      {tau_matrix(0.5), centred, phi, "Wigner, centred symbol"},
      {tau_matrix(0.5), shifted, pm, "Wigner, shifted symbol"},
      {tau_matrix(0.25), xonly, h1, "quarter, position symbol"},
      {covariant_from_blocks(c1(0.5), c1(0), c1(-0.3)), cosmix, phi, "covariant, oscillating symbol"},
      {tau_matrix(0.75), shifted, h1, "three quarters, shifted symbol"},
  };
  for (const Case& c : corpus) {
    CAPTURE(c.name);
    const ConjugationReport r = conjugation_check(c.A, c.a, c.f, phi, zg);
    CHECK(r.a4 <= 1e-6);
    CHECK(r.a5 <= 1e-6);
    CHECK(r.a6 <= 1e-6);
  }
  const ConjugationReport u = conjugation_check(tau_matrix(0.5), one, pm, phi, zg);
  CHECK(u.a4 <= 1e-10);
  const ConjugationReport s = conjugation_check(tau_matrix(0.5), centred, phi, phi, zg);
  CHECK(s.a6_imag <= 1e-8);
}

TEST_CASE("dense operator algebra") {
  const Grid g = Grid::self_dual(64);
  const DenseOperator A = weyl(shifted, g), B = weyl(centred, g);
  const Signal f = hermite_signal(g, 2);
  CHECK((A(B(f)).v - (A * B)(f).v).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(((A * identity_operator(g)).m - A.m).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(A * weyl(centred, Grid::make(64, 5)));
}
