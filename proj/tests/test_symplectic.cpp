#include <doctest.h>

#include "metaplab/symplectic.hpp"

using namespace metaplab;

namespace {

Mat m2(double a, double b, double c, double d) {
  Mat M(2, 2);
  M << a, b, c, d;
  return M;
}

Mat s1(double v) { return Mat::Constant(1, 1, v); }

Mat literal_tau(double t) {
  Mat A(4, 4);
  A << 1 - t, t, 0, 0,
       0, 0, t, -(1 - t),
       0, 0, 1, 1,
       -1, 1, 0, 0;
  return A;
}

Mat literal_stft() {
  Mat A(4, 4);
  A << 1, -1, 0, 0,
       0, 0, 1, 1,
       0, 0, 0, -1,
       -1, 0, 0, 0;
  return A;
}

double maxabs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

Mat random_symmetric(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0, 0.5);
  Mat M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = n(rng);
  return (M + M.transpose()) / 2;
}

}  // namespace

TEST_CASE("membership test") {
  CHECK(is_symplectic(standard_J(1), 1e-14));
  CHECK(is_symplectic(Mat::Identity(2, 2), 1e-14));
  CHECK_FALSE(is_symplectic(m2(2, 0, 0, 1), 1e-9));
  CHECK_THROWS_AS(is_symplectic(Mat::Identity(3, 3), 1e-9), ShapeError);
  CHECK_THROWS_AS(SymplecticMatrix(m2(2, 0, 0, 1)), ValidationError);
  const SymplecticMatrix S(m2(1, 2, 0, 1));
  CHECK(maxabs((S * S.inverse()).matrix() - Mat::Identity(2, 2)) < 1e-15);
}

TEST_CASE("named matrices match their literal block layout") {
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(maxabs(tau_matrix(t) - literal_tau(t)) == 0.0);
    CHECK(is_symplectic(tau_matrix(t), 1e-14));
  }
  CHECK(maxabs(stft_matrix() - literal_stft()) == 0.0);
  CHECK(is_symplectic(stft_matrix(), 1e-14));
  CHECK(is_symplectic(ft2_matrix(1), 1e-14));
  CHECK(is_symplectic(ft2_matrix(2), 1e-14));
}

TEST_CASE("free factorization") {
  SUBCASE("tau one half, 4x4") {
    const Mat A = tau_matrix(0.5);
    const auto f = free_factorize(A);
    CHECK(maxabs(f.first * f.second - A) <= 1e-12);
    CHECK(std::abs(free_blocks(f.first).B.determinant()) > 0);
    CHECK(std::abs(free_blocks(f.second).B.determinant()) > 0);
  }
  SUBCASE("J is free") {
    const auto f = free_factorize(standard_J(1));
    CHECK(maxabs(f.first * f.second - standard_J(1)) <= 1e-12);
  }
  SUBCASE("chirp matrix has a zero B-block") {
    const Mat V = chirp_matrix(s1(1.5));
    const auto f = free_factorize(V);
    CHECK(maxabs(f.first * f.second - V) <= 1e-12);
    CHECK(f.cond_first < kConditionBound);
    CHECK(f.cond_second < kConditionBound);
  }
  SUBCASE("random corpus") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
      const int n = 1 + k % 2;
      const Mat A = random_symplectic(rng, n);
      const auto f = free_factorize(A);
      CHECK(maxabs(f.first * f.second - A) <= 1e-10);
      CHECK(std::abs(free_blocks(f.first).B.determinant()) > 0);
      CHECK(std::abs(free_blocks(f.second).B.determinant()) > 0);
    }
  }
  CHECK_THROWS_AS(free_factorize(m2(2, 0, 0, 1)), ValidationError);
}

TEST_CASE("generator decomposition") {
  const Mat D = rescale_matrix(s1(2.0));
  auto c = generator_decompose(D);
  REQUIRE(c.gens.size() == 1);
  CHECK(c.gens[0].tag == Gen::Rescale);
  c = generator_decompose(standard_J(1));
  REQUIRE(c.gens.size() == 1);
  CHECK(c.gens[0].tag == Gen::Fourier);
  c = generator_decompose(stft_matrix());
  CHECK(maxabs(c.product() - stft_matrix()) < 1e-12);
  CHECK(c.gens.size() <= 6);

  std::mt19937_64 rng(12);
  for (int k = 0; k < 100; ++k) {
    const Mat A = random_symplectic(rng, 1 + k % 2);
    const auto chain = generator_decompose(A);
    CHECK(maxabs(chain.product() - A) <= 1e-10);
  }
}

TEST_CASE("covariant matrices and the Cohen matrix") {
  for (double t : {0.0, 0.3, 0.5, 1.0}) {
    const Mat A = covariant_from_blocks(s1(1 - t), s1(0), s1(0));
    CHECK(maxabs(A - literal_tau(t)) < 1e-15);
    const Mat B = cohen_B(CovariantForm::make(s1(1 - t), s1(0), s1(0)));
    CHECK(maxabs(B - m2(0, t - 0.5, t - 0.5, 0)) < 1e-15);
  }
  CHECK(maxabs(cohen_B(CovariantForm::make(s1(0.5), s1(0), s1(0)))) == 0.0);
  CHECK_THROWS_AS(CovariantForm::make(m2(1, 0, 0, 1), m2(0, 1, 0, 0), Mat::Zero(2, 2)), ValidationError);

  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0, 1);
  for (int d : {1, 2}) {
    for (int k = 0; k < 10; ++k) {
      Mat A11(d, d);
      for (int i = 0; i < d * d; ++i) A11.data()[i] = n(rng);
      const Mat A13 = random_symmetric(rng, d), A21 = random_symmetric(rng, d);
      const Mat A = covariant_from_blocks(A11, A13, A21);
      CHECK(is_symplectic(A, 1e-12));
      const auto back = covariant_form_of(A);
      REQUIRE(back);
      CHECK(maxabs(back->A11 - A11) < 1e-14);
      CHECK(maxabs(back->A13 - A13) < 1e-14);
      CHECK(maxabs(back->A21 - A21) < 1e-14);
      const auto fromB = covariant_from_cohen_B(cohen_B(*back));
      CHECK(maxabs(fromB.A11 - A11) < 1e-14);
      CHECK(maxabs(fromB.A13 - A13) < 1e-14);
      CHECK(maxabs(fromB.A21 - A21) < 1e-14);
    }
  }
}

TEST_CASE("evolved Cohen matrix") {
  const Mat chi_fp = m2(1, 4 * pi * 0.05, 0, 1);
  CHECK(maxabs(evolve_cohen_B(Mat::Zero(2, 2), chi_fp)) == 0.0);

  for (double tau : {0.0, 0.25, 0.75}) {
    for (double t : {0.02, 0.05, 0.1}) {
      const Mat chi = m2(1, 4 * pi * t, 0, 1);
      const Mat expected = m2(0, tau - 0.5, tau - 0.5, 4 * pi * t * (1 - 2 * tau));
      const Mat B = cohen_B(CovariantForm::make(s1(1 - tau), s1(0), s1(0)));
      CHECK(maxabs(evolve_cohen_B(B, chi) - expected) < 1e-13);
      const auto At = covariant_from_cohen_B(evolve_cohen_B(B, chi));
      CHECK(At.A11(0, 0) == doctest::Approx(1 - tau).epsilon(1e-13));
      CHECK(std::abs(At.A13(0, 0)) < 1e-13);
      CHECK(At.A21(0, 0) == doctest::Approx(-4 * pi * t * (1 - 2 * tau)).epsilon(1e-13));
    }
  }

  std::mt19937_64 rng(14);
  std::normal_distribution<double> n(0, 1);
  for (int d : {1, 2}) {
    for (int k = 0; k < 10; ++k) {
      Mat A11(d, d);
      for (int i = 0; i < d * d; ++i) A11.data()[i] = n(rng);
      const CovariantForm cov = CovariantForm::make(A11, random_symmetric(rng, d), random_symmetric(rng, d));
      const Mat chi = random_symplectic(rng, d);
      const Mat ci = symplectic_inverse(chi);
      const Mat B = cohen_B(cov);
      const Mat Bt = evolve_cohen_B(B, chi);
      CHECK(maxabs(Bt - ci.transpose() * B * ci) < 1e-12);
      CHECK(maxabs(Bt - Bt.transpose()) < 1e-12);

      const Mat X = ci.topLeftCorner(d, d), Y = ci.topRightCorner(d, d);
      const Mat W = ci.bottomLeftCorner(d, d), Z = ci.bottomRightCorner(d, d);
      const Mat t11 = -W.transpose() * Y - X.transpose() * (cov.A13 * Y - cov.A11 * Z) +
                      W.transpose() * (cov.A11.transpose() * Y + cov.A21 * Z);
      const Mat t13 = X.transpose() * W + X.transpose() * (cov.A13 * X - cov.A11 * W) -
                      W.transpose() * (cov.A11.transpose() * X + cov.A21 * W);
      const Mat t21 = -Z.transpose() * Y - Y.transpose() * (cov.A13 * Y - cov.A11 * Z) +
                      Z.transpose() * (cov.A11.transpose() * Y + cov.A21 * Z);
      const auto At = covariant_from_cohen_B(Bt);
      CHECK(maxabs(At.A11 - t11) < 1e-12);
      CHECK(maxabs(At.A13 - t13) < 1e-12);
      CHECK(maxabs(At.A21 - t21) < 1e-12);

      const Mat chi2 = random_symplectic(rng, d);
      CHECK(maxabs(evolve_cohen_B(B, chi * chi2) - evolve_cohen_B(evolve_cohen_B(B, chi2), chi)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(evolve_cohen_B(Mat::Zero(2, 2), m2(2, 0, 0, 1)), ValidationError);
}

TEST_CASE("Hamiltonian flow") {
  const auto fp = QuadraticHamiltonian::free_particle();
  CHECK(fp.C(0, 0) == doctest::Approx(-8 * pi * pi));
  CHECK(maxabs(hamiltonian_flow(fp, 0.0) - Mat::Identity(2, 2)) == 0.0);
  CHECK(maxabs(hamiltonian_flow(fp, 1.0) - m2(1, 4 * pi, 0, 1)) < 1e-12);

  const auto ho = QuadraticHamiltonian::harmonic_oscillator(1.0);
  const Mat quarter = hamiltonian_flow(ho, pi / 2);
  CHECK(std::abs(std::abs(quarter(0, 1)) - 1) < 1e-12);
  CHECK(std::abs(quarter(0, 0)) < 1e-12);
  CHECK(maxabs(quarter.transpose() * quarter - Mat::Identity(2, 2)) < 1e-12);
  CHECK(maxabs(hamiltonian_flow(ho, 0.3) * hamiltonian_flow(ho, 0.4) - hamiltonian_flow(ho, 0.7)) < 1e-12);

  std::mt19937_64 rng(15);
  for (int d : {1, 2}) {
    for (int k = 0; k < 10; ++k) {
      std::normal_distribution<double> n(0, 1);
      Mat Bm(d, d);
      for (int i = 0; i < d * d; ++i) Bm.data()[i] = n(rng);
      const auto h = QuadraticHamiltonian::make(random_symmetric(rng, d), Bm, random_symmetric(rng, d));
      const Mat D = h.hamiltonian_matrix();
      const Mat J = standard_J(d);
      CHECK(maxabs(D.transpose() * J + J * D) < 1e-12);
      const Mat a = hamiltonian_flow(h, 0.4), b = hamiltonian_flow(h, -1.1);
      CHECK(is_symplectic(a, 1e-10));
      CHECK(maxabs(a * b - hamiltonian_flow(h, -0.7)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(QuadraticHamiltonian::make(m2(0, 1, 0, 0), Mat::Zero(2, 2), Mat::Zero(2, 2)), ValidationError);
}

TEST_CASE("shift invertibility") {
  const auto st = shift_invertibility(stft_matrix());
  REQUIRE(st);
  CHECK(maxabs(*st - Mat::Identity(2, 2)) < 1e-15);
  CHECK_FALSE(shift_invertibility(tau_matrix(0.0)));
  const auto half = shift_invertibility(tau_matrix(0.5));
  REQUIRE(half);
  CHECK(maxabs(*half - 0.5 * Mat::Identity(2, 2)) < 1e-15);
  CHECK_THROWS_AS(shift_invertibility(Mat::Identity(2, 2)), ShapeError);
}
