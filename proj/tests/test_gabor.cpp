#include <doctest.h>

#include "metaplab/gabor.hpp"

using namespace metaplab;

namespace {

Mat m2(double a, double b, double c, double d) {
  Mat M(2, 2);
  M << a, b, c, d;
  return M;
}

const Mat J = m2(0, 1, -1, 0);

struct Setup {
  Grid g = Grid::self_dual(256);
  Signal w = gaussian_signal(g, 0, 0, 1);
  GaborLattice lat = GaborLattice::make(Mat::Identity(2, 2), 6);
  DenseOperator mu(const Mat& chi) const { return {g, g, false, metaplectic_matrix(chi, g)}; }
};

int index_of(const std::vector<Eigen::Vector2d>& pts, double a, double b) {
  for (size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == Eigen::Vector2d(a, b)) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_CASE("lattice construction") {
  const Grid g = Grid::self_dual(256);
  const auto pts = GaborLattice::make(Mat::Identity(2, 2), 6).points(g);
  for (const auto& z : pts) CHECK(z.norm() <= 6 + 1e-12);
  CHECK(index_of(pts, 0, 0) >= 0);
  CHECK(index_of(pts, 6, 0) >= 0);
  CHECK(index_of(pts, 5, 4) < 0);
  CHECK_THROWS_AS(GaborLattice::make(m2(1, 2, 2, 4), 6), ValidationError);
  CHECK_THROWS_AS(GaborLattice::make(0.3 * Mat::Identity(2, 2), 2).points(g), ValidationError);
  CHECK(window_deviation(gaussian_signal(g)) == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("Gabor matrix entries") {
  const Setup s;
  SUBCASE("Fourier transform") {
    const GaborMatrixData d = gabor_matrix(s.mu(J), s.w, s.lat, 1.0);
    const int l = index_of(d.pts, 1, 0), m = index_of(d.pts, 0, 1);
    REQUIRE(l >= 0);
    REQUIRE(m >= 0);
    CHECK(std::abs(d.M(l, m)) == doctest::Approx(std::exp(-2 * pi)).epsilon(1e-9));
    double worst = 0;
    for (size_t i = 0; i < d.pts.size(); ++i)
      for (size_t j = 0; j < d.pts.size(); ++j) {
        const double r2 = (d.pts[j] - J * d.pts[i]).squaredNorm();
        worst = std::max(worst, std::abs(std::abs(d.M(i, j)) - std::exp(-pi * r2 / 2)));
      }
    CHECK(worst <= 1e-10);
  }
  SUBCASE("identity matches the window's ambiguity function") {
    const GaborMatrixData d = gabor_matrix(identity_operator(s.g), s.w, s.lat);
    double worst = 0;
    for (size_t i = 0; i < d.pts.size(); ++i)
      for (size_t j = 0; j < d.pts.size(); ++j)
        worst = std::max(worst, std::abs(std::abs(d.M(i, j)) - std::exp(-pi * (d.pts[j] - d.pts[i]).squaredNorm() / 2)));
    CHECK(worst <= 1e-10);
  }
  SUBCASE("linearity") {
    const DenseOperator A = s.mu(J), B = weyl([](double x, double xi) { return cd(std::exp(-pi * (x * x + xi * xi))); }, s.g);
    const DenseOperator AB{s.g, s.g, false, A.m + B.m};
    const GaborMatrixData da = gabor_matrix(A, s.w, s.lat), db = gabor_matrix(B, s.w, s.lat),
                          dab = gabor_matrix(AB, s.w, s.lat);
    CHECK((dab.M - da.M - db.M).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("operator norm bound") {
    const DenseOperator big{s.g, s.g, false, 3.0 * CMat::Identity(s.g.N, s.g.N)};
    CHECK_THROWS_AS(gabor_matrix(big, s.w, s.lat, 1.0), NumericError);
    CHECK_NOTHROW(gabor_matrix(big, s.w, s.lat, 3.0));
  }
}

TEST_CASE("envelope of the Fourier transform") {
  const Setup s;
  const GaborMatrixData d = gabor_matrix(s.mu(J), s.w, s.lat);
  const EnvelopeReport r = envelope_fit(d, J, {{1, 0}, {2, 1}});
  double worst = 0;
  for (const ShellValue& c : r.shells) {
    CHECK(c.h >= 0);
    worst = std::max(worst, std::abs(c.h - std::exp(-pi * (c.k1 * c.k1 + c.k2 * c.k2) / 2.0)));
  }
  CHECK(worst <= 1e-10);
  CHECK(r.decay_slope < -0.5);
  REQUIRE(r.norms.size() == 2);
  for (const auto& n : r.norms) CHECK(std::isfinite(n.value));
  CHECK_FALSE(r.frame.has_value());  // the integer lattice has critical density

  const GaborMatrixData d5 = gabor_matrix(s.mu(J), s.w, GaborLattice::make(Mat::Identity(2, 2), 5));
  CHECK(std::abs(envelope_fit(d5, J).norms[0].value - r.norms[0].value) <= 1e-6);

  const std::vector<double> sm = shell_maxima(r, 5);
  CHECK(sm[0] == doctest::Approx(1).epsilon(1e-10));
  for (int k = 1; k <= 5; ++k) CHECK(sm[k] < sm[k - 1]);
}

TEST_CASE("canonical transformation estimation") {
  const Setup s;
  const EnvelopeReport id = envelope_fit(gabor_matrix(identity_operator(s.g), s.w, s.lat));
  CHECK(id.estimated);
  CHECK((id.chi - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);

  const Mat chi = m2(1, 0, 0.5, 1) * J;
  const EnvelopeReport rc = envelope_fit(gabor_matrix(s.mu(chi), s.w, s.lat));
  CHECK((rc.chi - chi).cwiseAbs().maxCoeff() <= 1e-2);
  CHECK(rc.decay_slope < -0.5);

  const EnvelopeReport rf = envelope_fit(gabor_matrix(s.mu(J), s.w, s.lat));
  CHECK((rf.chi - J).cwiseAbs().maxCoeff() <= 1e-2);
}

TEST_CASE("envelope of a localized pseudodifferential operator") {
  const Setup s;
  const DenseOperator W = weyl([](double x, double xi) { return cd(std::exp(-pi * (x * x + xi * xi))); }, s.g);
  const EnvelopeReport r = envelope_fit(gabor_matrix(W, s.w, s.lat), Mat::Identity(2, 2), {{1, 0}, {2, 0}, {4, 0}});
  const std::vector<double> sm = shell_maxima(r, 4);
  for (int k = 1; k <= 4; ++k) CHECK(sm[k] < sm[0]);
  CHECK(r.norms[1].value <= r.norms[0].value);
  CHECK(r.norms[2].value <= r.norms[1].value);
}

TEST_CASE("Schwartz decay for generator chains") {
  const Setup s;
  const Mat V = m2(1, 0, 0.5, 1), D = m2(1.25, 0, 0, 0.8);
  for (const Mat& chi : {Mat(V * J), Mat(D * V), Mat(V * J * D * V)}) {
    const EnvelopeReport r = envelope_fit(gabor_matrix(s.mu(chi), s.w, s.lat), chi);
    CHECK(r.decay_slope < -0.5);
  }
}

TEST_CASE("algebra and inverse properties") {
  const Setup s;
  const Mat V = m2(1, 0, 0.5, 1), D = m2(1.25, 0, 0, 0.8);
  const Mat c1 = V * J, c2 = D * V;
  const DenseOperator W = weyl(
      [](double x, double xi) {
        return cd(1.0 + 0.5 * std::exp(-pi * (x * x + xi * xi)), 0.3 * std::exp(-pi * (x * x + 2 * xi * xi)));
      },
      s.g);
  const DenseOperator A1 = s.mu(c1) * W, A2 = W * s.mu(c2);
  const double n1 = envelope_fit(gabor_matrix(A1, s.w, s.lat), c1).norms[0].value;
  const double n2 = envelope_fit(gabor_matrix(A2, s.w, s.lat), c2).norms[0].value;
  const EnvelopeReport r12 = envelope_fit(gabor_matrix(A1 * A2, s.w, s.lat), Mat(c1 * c2));
  CHECK(std::isfinite(r12.norms[0].value));
  CHECK(r12.norms[0].value <= 3 * n1 * n2);
  CHECK(r12.decay_slope < -0.5);

  const DenseOperator inv{s.g, s.g, false, A1.m.inverse()};
  CHECK(envelope_fit(gabor_matrix(inv, s.w, s.lat), Mat(c1.inverse())).decay_slope < -0.5);
}

TEST_CASE("frame bounds") {
  const Setup s;
  const GaborLattice half = GaborLattice::make(0.5 * Mat::Identity(2, 2), 1e9);
  const FrameBounds fb = frame_bounds(s.w, half);
  CHECK(fb.A > 0);
  CHECK(fb.B >= fb.A);
  CHECK(fb.A == doctest::Approx(4).epsilon(0.02));
  CHECK(fb.B == doctest::Approx(4).epsilon(0.02));

  const Signal scaled{s.w.grid, 2.0 * s.w.v};
  const FrameBounds fs = frame_bounds(scaled, half);
  CHECK(fs.A == doctest::Approx(4 * fb.A).epsilon(1e-10));
  CHECK(fs.B == doctest::Approx(4 * fb.B).epsilon(1e-10));

  Signal spike{s.g, CVec::Zero(s.g.N)};
  spike.v[s.g.N / 2] = 1;
  CHECK_THROWS_AS(frame_bounds(spike, GaborLattice::make(Mat::Identity(2, 2), 1e9)), NumericError);
  CHECK_THROWS_AS(frame_bounds(s.w, GaborLattice::make(Mat::Identity(2, 2), 1e9)), NumericError);
}

TEST_CASE("factorization through the canonical transformation") {
  const Setup s;
  const Mat chi = m2(1, 0, 0.5, 1) * J;
  const Factorization f1 = metaplectic_factor(s.mu(chi), chi);
  CHECK((f1.sigma1.v.array() - f1.sigma1.v(0, 0)).abs().maxCoeff() <= 1e-7);
  CHECK(std::abs(std::abs(f1.sigma1.v(0, 0)) - 1) <= 1e-7);

  const Symbol a = [](double x, double xi) {
    return cd(std::exp(-pi * (x * x + xi * xi)), 0.2 * std::exp(-pi * (2 * x * x + xi * xi)));
  };
  const DenseOperator T = weyl(a, s.g) * s.mu(J);
  const Factorization f = metaplectic_factor(T, J);
  CHECK(phase_aligned_error(f.sigma1.v, symbol_field(a, s.g).v) <= 1e-6);
  CHECK(f.residual1 <= 1e-6);
  CHECK(f.residual2 <= 1e-6);

  // sigma2(x, xi) = sigma1(xi, -x); the reflection x -> -x is the index map k -> N - k.
  const int N = s.g.N;
  double worst = 0;
  for (int i = 1; i < N; ++i)
    for (int j = 0; j < N; ++j) worst = std::max(worst, std::abs(f.sigma2.v(i, j) - f.sigma1.v(j, N - i)));
  CHECK(worst <= 1e-8);
}
