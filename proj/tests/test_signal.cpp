#include <doctest.h>

#include "metaplab/fft.hpp"
#include "metaplab/signal.hpp"

using namespace metaplab;

namespace {

// Riemann sum of int f(t) e^{-2 pi i xi t} dt at every dual-grid frequency.
CVec direct_fourier(const Signal& f) {
  const Grid& g = f.grid;
  const Grid d = g.dual();
  CVec out(d.N);
  for (int j = 0; j < d.N; ++j) {
    cd s = 0;
    for (int k = 0; k < g.N; ++k) s += f.v[k] * expi(-2 * pi * d.x(j) * g.x(k));
    out[j] = s * g.step();
  }
  return out;
}

Signal random_signal(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  Signal f{g, CVec(g.N)};
  for (int k = 0; k < g.N; ++k) f.v[k] = cd(n(rng), n(rng));
  return f;
}

double maxdiff(const CVec& a, const CVec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid construction") {
  const Grid g = Grid::make(256, 8);
  CHECK(g.step() == 0.0625);
  CHECK(g.x(0) == -8.0);
  CHECK(g.dual().N == 256);
  CHECK(g.dual().L == doctest::Approx(8.0));
  CHECK(Grid::self_dual(64).L == doctest::Approx(4.0));
  CHECK_THROWS_AS(Grid::make(255, 8), ValidationError);
  CHECK_THROWS_AS(Grid::make(256, 0), ValidationError);
}

TEST_CASE("raw DFT matches the defining sum") {
  std::mt19937_64 rng(1);
  const Signal f = random_signal(Grid::make(48, 3), rng);
  const CVec F = dft(f.v, -1);
  for (int k = 0; k < 48; ++k) {
    cd s = 0;
    for (int n = 0; n < 48; ++n) s += f.v[n] * expi(-2 * pi * k * n / 48.0);
    CHECK(std::abs(F[k] - s) < 1e-12);
  }
  CHECK(maxdiff(dft(F, +1) / 48.0, f.v) < 1e-14);
}

TEST_CASE("Fourier transform") {
  const Grid g = Grid::make(256, 8);
  const Signal phi = gaussian_signal(g);

  SUBCASE("Gaussian is a fixed point") {
    const Signal F = fourier(phi);
    CHECK(F.grid.same(g.dual()));
    CHECK(maxdiff(F.v, gaussian_signal(F.grid).v) < 1e-12);
    CHECK(maxdiff(F.v, direct_fourier(phi)) < 1e-12);
  }
  SUBCASE("centered impulse gives a constant") {
    Signal d{g, CVec::Zero(g.N)};
    d.v[g.N / 2] = 1.0 / g.step();
    const Signal F = fourier(d);
    CHECK(maxdiff(F.v, CVec::Ones(g.N)) < 1e-12);
  }
  SUBCASE("translation becomes modulation") {
    const double x0 = 0.75;
    const Signal f = hermite_signal(g, 3);
    const Signal lhs = fourier(tf_shift(f, x0, 0));
    const Signal rhs = tf_shift(fourier(f), 0, -x0);
    CHECK(maxdiff(lhs.v, rhs.v) < 1e-12);
  }
  SUBCASE("Parseval, quadrature oracle and inversion") {
    std::mt19937_64 rng(2);
    for (int N : {64, 256, 512}) {
      const Grid h = Grid::make(N, 5);
      const Signal f = random_signal(h, rng);
      const Signal F = fourier(f);
      CHECK(std::abs(F.norm() - f.norm()) <= 1e-12 * f.norm());
      CHECK((F.v - direct_fourier(f)).norm() <= 1e-10 * F.v.norm());
      CHECK(maxdiff(inverse_fourier(F).v, f.v) < 1e-12);
      Signal f4 = fourier(fourier(fourier(fourier(f))));
      CHECK(maxdiff(f4.v, f.v) < 1e-12);
      const Signal ff = fourier(fourier(f));
      for (int k = 1; k < N; ++k) CHECK(std::abs(ff.v[k] - f.v[N - k]) < 1e-12);
    }
  }
}

TEST_CASE("partial Fourier transform") {
  const Grid g = Grid::self_dual(64);
  const Signal f = hermite_signal(g, 2), h = gaussian_signal(g, 0.5, -0.25);
  const Field T = tensor(f, h);
  const Field P = partial_fourier_2(T);
  CHECK((P.v - tensor(f, fourier(h)).v).cwiseAbs().maxCoeff() < 1e-12);

  Field one{g, g, CMat::Ones(g.N, g.N)};
  const Field Q = partial_fourier_2(one);
  const double centre = std::abs(Q.v(10, g.N / 2));
  CHECK(centre == doctest::Approx(2 * g.L));
  CHECK((Q.v.col(g.N / 2 + 1)).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  Field R{g, g, CMat(g.N, g.N)};
  for (Eigen::Index i = 0; i < R.v.size(); ++i) R.v.data()[i] = cd(n(rng), n(rng));
  const Field S = partial_fourier_2(R);
  CMat direct(g.N, g.N);
  const Grid d = g.dual();
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      cd s = 0;
      for (int k = 0; k < g.N; ++k) s += R.v(i, k) * expi(-2 * pi * d.x(j) * g.x(k));
      direct(i, j) = s * g.step();
    }
  CHECK((S.v - direct).norm() <= 1e-10 * direct.norm());
}

TEST_CASE("chirp multiplication") {
  const Grid g = Grid::make(256, 8);
  const Signal phi = gaussian_signal(g);
  CHECK(maxdiff(chirp_multiply(phi, 0.0).v, phi.v) == 0.0);
  const Signal c = chirp_multiply(phi, 1.0);
  for (int k = 0; k < g.N; ++k) {
    CHECK(std::abs(c.v[k] - expi(pi * g.x(k) * g.x(k)) * phi.v[k]) < 1e-15);
    CHECK(std::abs(std::abs(c.v[k]) - std::abs(phi.v[k])) < 1e-15);
  }
  Signal flat{g, CVec::Ones(g.N)};
  CHECK_THROWS_AS(chirp_multiply(flat, 3.0), SamplingError);
  CHECK_NOTHROW(chirp_multiply(flat, 3.0, false));
}

TEST_CASE("rescaling") {
  const Grid g = Grid::make(256, 8);
  const Signal phi = gaussian_signal(g);
  CHECK(maxdiff(rescale(phi, 1.0).v, phi.v) < 1e-14);
  CHECK(maxdiff(rescale(phi, -1.0).v, phi.v) < 1e-12);
  const Signal r = rescale(phi, 2.0);
  const Signal oracle = sample(g, [](double t) { return cd(std::sqrt(2.0) * gaussian(2 * t)); });
  CHECK(maxdiff(r.v, oracle.v) < 1e-10);
  CHECK(std::abs(r.norm() - phi.norm()) < 1e-8);
  const Signal h = hermite_signal(g, 4);
  CHECK(std::abs(rescale(h, 0.7).norm() - 1.0) < 1e-8);
}

TEST_CASE("time-frequency shifts") {
  const Grid g = Grid::make(256, 8);
  const Signal f = hermite_signal(g, 1);
  CHECK(maxdiff(tf_shift(f, 0, 0).v, f.v) == 0.0);
  const Signal s = tf_shift(f, 1.25, 0.7);
  CHECK_FALSE(s.interpolated);
  CHECK(s.norm() == doctest::Approx(f.norm()).epsilon(1e-14));

  const double x = 1.25, xi = 0.3, xp = -0.5, xip = 0.25;
  const Signal lhs = tf_shift(tf_shift(f, xp, xip), x, xi);
  const Signal rhs = tf_shift(f, x + xp, xi + xip);
  CHECK(maxdiff(lhs.v, expi(-2 * pi * x * xip) * rhs.v) < 1e-12);

  const Signal off = tf_shift(f, 0.01, 0);
  CHECK(off.interpolated);
}

TEST_CASE("tensor products") {
  const Grid g = Grid::make(64, 4);
  const Signal f = gaussian_signal(g, 0.5, 0.5), h = hermite_signal(g, 2);
  const Field T = tensor(f, conjugate(h));
  for (int i = 0; i < g.N; i += 7)
    for (int j = 0; j < g.N; j += 5) CHECK(T.v(i, j) == f.v[i] * std::conj(h.v[j]));
  CHECK(T.norm() == doctest::Approx(f.norm() * h.norm()).epsilon(1e-14));
  CHECK_THROWS_AS(tensor(f, gaussian_signal(Grid::make(64, 5))), ShapeError);
}

TEST_CASE("test signals are normalized") {
  const Grid g = Grid::make(256, 8);
  CHECK(gaussian_signal(g).norm() == doctest::Approx(1).epsilon(1e-14));
  for (int n = 0; n < 8; ++n) CHECK(hermite_signal(g, n).norm() == doctest::Approx(1).epsilon(1e-12));
  const double sg = sign_gaussian_signal(g).norm();
  CHECK(sg * sg == doctest::Approx(1 - g.step() * std::sqrt(2.0)).epsilon(1e-12));
  std::mt19937_64 a(5), b(5);
  CHECK(maxdiff(random_hermite_signal(g, a).v, random_hermite_signal(g, b).v) == 0.0);
}
