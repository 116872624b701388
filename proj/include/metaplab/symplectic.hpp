#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metaplab/core.hpp"

namespace metaplab {

// Standard symplectic form [[0, I], [-I, 0]] of size 2n.
template <typename Scalar = double>
MatX<Scalar> standard_J(int n) {
  MatX<Scalar> J = MatX<Scalar>::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n).setIdentity();
  J.bottomLeftCorner(n, n) = -MatX<Scalar>::Identity(n, n);
  return J;
}

template <typename Derived>
typename Derived::RealScalar symplectic_defect(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(M.rows() / 2);
  MatX<Scalar> J = standard_J<Scalar>(n);
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& M, double tol) {
  if (M.rows() != M.cols()) throw ShapeError("is_symplectic: matrix is not square");
  if (M.rows() % 2 != 0) throw ShapeError("is_symplectic: odd side");
  return symplectic_defect(M) <= tol;
}

// A^{-1} = -J A^T J for symplectic A.
template <typename Derived>
MatX<typename Derived::Scalar> symplectic_inverse(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  MatX<Scalar> J = standard_J<Scalar>(static_cast<int>(M.rows() / 2));
  return -J * M.transpose() * J;
}

// V_C = [[I, 0], [C, I]]
template <typename Derived>
MatX<typename Derived::Scalar> chirp_matrix(const Eigen::MatrixBase<Derived>& C) {
  using Scalar = typename Derived::Scalar;
  const auto n = C.rows();
  MatX<Scalar> V = MatX<Scalar>::Identity(2 * n, 2 * n);
  V.bottomLeftCorner(n, n) = C;
  return V;
}

// U_Q = [[I, Q], [0, I]]
template <typename Derived>
MatX<typename Derived::Scalar> upper_shear_matrix(const Eigen::MatrixBase<Derived>& Q) {
  using Scalar = typename Derived::Scalar;
  const auto n = Q.rows();
  MatX<Scalar> U = MatX<Scalar>::Identity(2 * n, 2 * n);
  U.topRightCorner(n, n) = Q;
  return U;
}

// D_L = diag(L^{-1}, L^T)
template <typename Derived>
MatX<typename Derived::Scalar> rescale_matrix(const Eigen::MatrixBase<Derived>& L) {
  using Scalar = typename Derived::Scalar;
  const auto n = L.rows();
  MatX<Scalar> D = MatX<Scalar>::Zero(2 * n, 2 * n);
  D.topLeftCorner(n, n) = L.inverse();
  D.bottomRightCorner(n, n) = L.transpose();
  return D;
}

class SymplecticMatrix {
 public:
  SymplecticMatrix() = default;
  explicit SymplecticMatrix(const Mat& m, double tol = 1e-9);

  int n() const { return static_cast<int>(m_.rows() / 2); }
  const Mat& matrix() const { return m_; }
  double tol() const { return tol_; }
  SymplecticMatrix inverse() const;
  SymplecticMatrix operator*(const SymplecticMatrix& o) const;

 private:
  Mat m_;
  double tol_ = 1e-9;
};

// Named matrices (d = half the dimension of the signal-side phase space).
Mat ft2_matrix(int d);
Mat tau_matrix(double tau, int d = 1);
Mat stft_matrix(int d = 1);

struct FreeBlocks {
  Mat A, B, C, D;
};
FreeBlocks free_blocks(const Mat& M);
Mat assemble(const FreeBlocks& b);

// d x d block (i, j), 1-based, of a 4d x 4d matrix.
Mat block4(const Mat& M, int i, int j);

inline constexpr double kConditionBound = 1e8;
double condition_number(const Mat& M);

struct FreeFactors {
  Mat first, second;
  double cond_first = 0, cond_second = 0;
};
FreeFactors free_factorize(const Mat& A, double cond_bound = kConditionBound);

enum class Gen { Fourier, Chirp, Rescale, PartialFourier };
std::string to_string(Gen g);

struct Generator {
  Gen tag;
  Mat param;  // C for Chirp, L for Rescale, empty otherwise
  Mat matrix(int n) const;
};

// Product order: matrix = gens[0] * gens[1] * ...; operators act right to left.
struct GeneratorChain {
  int n = 1;
  std::vector<Generator> gens;
  Mat product() const;
};

GeneratorChain simplify(const GeneratorChain& chain, double tol = 1e-13);
GeneratorChain generator_decompose(const Mat& A, double tol = 1e-10);

struct CovariantForm {
  Mat A11, A13, A21;
  static CovariantForm make(const Mat& A11, const Mat& A13, const Mat& A21, double tol = 1e-9);
  int d() const { return static_cast<int>(A11.rows()); }
};

Mat covariant_from_blocks(const Mat& A11, const Mat& A13, const Mat& A21, double tol = 1e-9);
Mat covariant_matrix(const CovariantForm& cov);
std::optional<CovariantForm> covariant_form_of(const Mat& A, double tol = 1e-9);
Mat cohen_B(const CovariantForm& cov);
CovariantForm covariant_from_cohen_B(const Mat& B, double tol = 1e-9);
Mat evolve_cohen_B(const Mat& B, const Mat& chi, double tol = 1e-9);

// A = A_FT2 D_L with L returned when the block pattern (Arepr) holds.
std::optional<Mat> wigner_decomposable_L(const Mat& A, double tol = 1e-9);

struct QuadraticHamiltonian {
  Mat A, B, C;  // a(x, xi) = 1/2 x.Ax + xi.Bx + 1/2 xi.C xi
  static QuadraticHamiltonian make(const Mat& A, const Mat& B, const Mat& C, double tol = 1e-12);
  static QuadraticHamiltonian free_particle(int d = 1);
  static QuadraticHamiltonian harmonic_oscillator(double omega, int d = 1);
  int d() const { return static_cast<int>(A.rows()); }
  Mat hamiltonian_matrix() const;
  double symbol(double x, double xi) const;  // d = 1
};

Mat hamiltonian_flow(const QuadraticHamiltonian& h, double t);

std::optional<Mat> shift_invertibility(const Mat& A, double cond_bound = kConditionBound);

// Random element of Sp(n) built from a chain of mild generators.
Mat random_symplectic(std::mt19937_64& rng, int n, int length = 4, double strength = 0.5);

}  // namespace metaplab
