#include "metaplab/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <limits>

namespace metaplab {

SymplecticMatrix::SymplecticMatrix(const Mat& m, double tol) : m_(m), tol_(tol) {
  if (!is_symplectic(m, tol)) throw ValidationError("matrix is not symplectic within tolerance");
  double det = m.determinant();
  if (std::abs(std::abs(det) - 1.0) > 10 * tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw ValidationError("symplectic matrix with |det| != 1");
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  return SymplecticMatrix(symplectic_inverse(m_), tol_);
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
  return SymplecticMatrix(m_ * o.m_, std::max(tol_, o.tol_));
}

Mat ft2_matrix(int d) {
  Mat A = Mat::Zero(4 * d, 4 * d);
  Mat I = Mat::Identity(d, d);
  A.block(0, 0, d, d) = I;
  A.block(d, 3 * d, d, d) = I;
  A.block(2 * d, 2 * d, d, d) = I;
  A.block(3 * d, d, d, d) = -I;
  return A;
}

Mat tau_matrix(double tau, int d) {
  Mat I = Mat::Identity(d, d);
  return covariant_from_blocks((1.0 - tau) * I, Mat::Zero(d, d), Mat::Zero(d, d));
}

Mat stft_matrix(int d) {
  Mat A = Mat::Zero(4 * d, 4 * d);
  Mat I = Mat::Identity(d, d);
  A.block(0, 0, d, d) = I;
  A.block(0, d, d, d) = -I;
  A.block(d, 2 * d, d, d) = I;
  A.block(d, 3 * d, d, d) = I;
  A.block(2 * d, 3 * d, d, d) = -I;
  A.block(3 * d, 0, d, d) = -I;
  return A;
}

FreeBlocks free_blocks(const Mat& M) {
  if (M.rows() != M.cols() || M.rows() % 2) throw ShapeError("free_blocks: need a 2n x 2n matrix");
  const auto n = M.rows() / 2;
  return {M.topLeftCorner(n, n), M.topRightCorner(n, n), M.bottomLeftCorner(n, n),
          M.bottomRightCorner(n, n)};
}

Mat assemble(const FreeBlocks& b) {
  const auto n = b.A.rows();
  Mat M(2 * n, 2 * n);
  M << b.A, b.B, b.C, b.D;
  return M;
}

Mat block4(const Mat& M, int i, int j) {
  if (M.rows() != M.cols() || M.rows() % 4) throw ShapeError("block4: need a 4d x 4d matrix");
  const auto d = M.rows() / 4;
  return M.block((i - 1) * d, (j - 1) * d, d, d);
}

double condition_number(const Mat& M) {
  if (M.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  double smin = s(s.size() - 1);
  return smin <= 0 ? std::numeric_limits<double>::infinity() : s(0) / smin;
}

namespace {

double sigma_min(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

bool near(const Mat& a, const Mat& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a - b).cwiseAbs().maxCoeff() <= tol * std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

FreeFactors free_factorize(const Mat& A, double cond_bound) {
  if (!is_symplectic(A, 1e-8)) throw ValidationError("free_factorize: input is not symplectic");
  const int n = static_cast<int>(A.rows() / 2);
  const Mat I = Mat::Identity(n, n);
  const Mat Jinv = symplectic_inverse(standard_J(n));
  std::vector<double> dict = {0.0, 1.0, -1.0, 0.5, -0.5};
  const std::vector<double> extra = {2.0, -2.0, 3.0, -3.0};

  FreeFactors best;
  double best_score = -1;
  auto attempt = [&](const std::vector<double>& coeffs) {
    for (double c : coeffs) {
      Mat U = upper_shear_matrix(Mat(c * I));
      Mat first = A * Jinv * U;
      Mat second = symplectic_inverse(U) * standard_J(n);
      Mat B1 = first.topRightCorner(n, n), B2 = second.topRightCorner(n, n);
      double score = std::min(sigma_min(B1), sigma_min(B2));
      if (score > best_score) {
        best_score = score;
        best = {first, second, condition_number(B1), condition_number(B2)};
      }
    }
  };
  attempt(dict);
  if (!(best.cond_first < cond_bound && best.cond_second < cond_bound)) attempt(extra);
  if (!(best.cond_first < cond_bound && best.cond_second < cond_bound))
    throw FactorizationError("free_factorize: no factor pair with B-block condition below bound (best " +
                             std::to_string(std::max(best.cond_first, best.cond_second)) + ")");
  return best;
}

std::string to_string(Gen g) {
  switch (g) {
    case Gen::Fourier: return "fourier";
    case Gen::Chirp: return "chirp";
    case Gen::Rescale: return "rescale";
    case Gen::PartialFourier: return "partial_fourier";
  }
  return "?";
}

Mat Generator::matrix(int n) const {
  switch (tag) {
    case Gen::Fourier: return standard_J(n);
    case Gen::Chirp: return chirp_matrix(param);
    case Gen::Rescale: return rescale_matrix(param);
    case Gen::PartialFourier:
      if (n % 2) throw ShapeError("partial Fourier needs an even half-dimension");
      return ft2_matrix(n / 2);
  }
  return {};
}

Mat GeneratorChain::product() const {
  Mat P = Mat::Identity(2 * n, 2 * n);
  for (const auto& g : gens) P = P * g.matrix(n);
  return P;
}

GeneratorChain simplify(const GeneratorChain& chain, double tol) {
  const int n = chain.n;
  const Mat I = Mat::Identity(n, n);
  std::vector<Generator> g = chain.gens;
  bool negate = false;  // D_{-I} = -I commutes with everything; collect it at the end
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Generator> out;
    for (const auto& x : g) {
      if (x.tag == Gen::Chirp && x.param.cwiseAbs().maxCoeff() <= tol) { changed = true; continue; }
      if (x.tag == Gen::Rescale && near(x.param, I, tol)) { changed = true; continue; }
      if (x.tag == Gen::Rescale && near(x.param, Mat(-I), tol)) { negate = !negate; changed = true; continue; }
      if (!out.empty()) {
        Generator& last = out.back();
        if (last.tag == Gen::Chirp && x.tag == Gen::Chirp) {
          last.param = last.param + x.param;
          changed = true;
          continue;
        }
        if (last.tag == Gen::Rescale && x.tag == Gen::Rescale) {
          // D_{L1} D_{L2} = D_{L2 L1}
          last.param = x.param * last.param;
          changed = true;
          continue;
        }
        if (last.tag == Gen::Fourier && x.tag == Gen::Fourier) {
          out.pop_back();
          negate = !negate;
          changed = true;
          continue;
        }
        if (last.tag == Gen::PartialFourier && x.tag == Gen::PartialFourier) {
          Mat L = I;
          L.bottomRightCorner(n / 2, n / 2) *= -1.0;
          last = {Gen::Rescale, L};
          changed = true;
          continue;
        }
      }
      out.push_back(x);
    }
    g = std::move(out);
  }
  if (negate) {
    if (!g.empty() && g.back().tag == Gen::Rescale)
      g.back().param = -g.back().param;
    else
      g.push_back({Gen::Rescale, -I});
  }
  return {n, g};
}

namespace {

double chain_cost(const GeneratorChain& c) {
  double cost = 0.01 * static_cast<double>(c.gens.size());
  for (const auto& g : c.gens) {
    if (g.tag == Gen::Chirp) {
      cost += Eigen::JacobiSVD<Mat>(g.param).singularValues()(0);
    } else if (g.tag == Gen::Rescale) {
      Vec s = Eigen::JacobiSVD<Mat>(g.param).singularValues();
      cost += std::abs(std::log(s(0))) + std::abs(std::log(s(s.size() - 1)));
    }
  }
  return cost;
}

using Chain = std::vector<Generator>;

std::optional<Chain> single_generator(const Mat& A, double tol) {
  const int n = static_cast<int>(A.rows() / 2);
  const Mat I2 = Mat::Identity(2 * n, 2 * n);
  if (near(A, I2, tol)) return Chain{};
  if (near(A, standard_J(n), tol)) return Chain{{Gen::Fourier, Mat()}};
  FreeBlocks b = free_blocks(A);
  const Mat I = Mat::Identity(n, n);
  if (near(b.A, I, tol) && near(b.D, I, tol) && b.B.cwiseAbs().maxCoeff() <= tol)
    return Chain{{Gen::Chirp, b.C}};
  if (b.B.cwiseAbs().maxCoeff() <= tol && b.C.cwiseAbs().maxCoeff() <= tol) {
    Mat L = b.D.transpose();
    if (near(L.inverse(), b.A, tol)) return Chain{{Gen::Rescale, L}};
  }
  if (n % 2 == 0 && near(A, ft2_matrix(n / 2), tol)) return Chain{{Gen::PartialFourier, Mat()}};
  return std::nullopt;
}

// A = V_{C A^-1} D_{A^-1} U_{A^-1 B}, U_Q = J V_{-Q} J D_{-I}
std::optional<Chain> ldu_chain(const Mat& M) {
  FreeBlocks b = free_blocks(M);
  if (condition_number(b.A) > kConditionBound) return std::nullopt;
  Mat Ainv = b.A.inverse();
  Mat P = b.C * Ainv;
  Mat Q = Ainv * b.B;
  P = 0.5 * (P + P.transpose());
  Q = 0.5 * (Q + Q.transpose());
  const auto n = b.A.rows();
  return Chain{{Gen::Chirp, P},
               {Gen::Rescale, Ainv},
               {Gen::Fourier, Mat()},
               {Gen::Chirp, -Q},
               {Gen::Fourier, Mat()},
               {Gen::Rescale, -Mat::Identity(n, n)}};
}

// A = V_{D B^-1} D_{B^-1} J V_{B^-1 A}
std::optional<Chain> free_chain(const Mat& M) {
  FreeBlocks b = free_blocks(M);
  if (condition_number(b.B) > kConditionBound) return std::nullopt;
  Mat Binv = b.B.inverse();
  Mat P = b.D * Binv, Q = Binv * b.A;
  P = 0.5 * (P + P.transpose());
  Q = 0.5 * (Q + Q.transpose());
  return Chain{{Gen::Chirp, P}, {Gen::Rescale, Binv}, {Gen::Fourier, Mat()}, {Gen::Chirp, Q}};
}

}  // namespace

GeneratorChain generator_decompose(const Mat& A, double tol) {
  if (A.rows() != A.cols() || A.rows() % 2) throw ShapeError("generator_decompose: need 2n x 2n");
  if (!is_symplectic(A, 1e-8)) throw ValidationError("generator_decompose: input is not symplectic");
  const int n = static_cast<int>(A.rows() / 2);
  const Mat J = standard_J(n);
  const Mat Jinv = symplectic_inverse(J);

  if (auto s = single_generator(A, tol)) return {n, *s};

  std::vector<Chain> candidates;
  auto add = [&](std::optional<Chain> c, const Chain& pre = {}, const Chain& post = {}) {
    if (!c) return;
    Chain full = pre;
    full.insert(full.end(), c->begin(), c->end());
    full.insert(full.end(), post.begin(), post.end());
    candidates.push_back(full);
  };

  if (n % 2 == 0) {
    const int d = n / 2;
    if (auto L = wigner_decomposable_L(A, tol)) add(Chain{{Gen::PartialFourier, Mat()}, {Gen::Rescale, *L}});
    if (auto cov = covariant_form_of(A, tol)) {
      Mat C = Mat::Zero(n, n);
      C.topLeftCorner(d, d) = cov->A13;
      C.bottomRightCorner(d, d) = -cov->A21;
      Mat Id = Mat::Identity(d, d);
      Mat L(n, n);
      L << Id, Id - cov->A11, Id, -cov->A11;
      add(Chain{{Gen::Fourier, Mat()}, {Gen::Chirp, -C}, {Gen::Fourier, Mat()}, {Gen::PartialFourier, Mat()},
                {Gen::Rescale, -L}});
    }
    // inverses of the two forms above, using A_FT2^{-1} = A_FT2 D_{diag(I,-I)}
    Mat flip = Mat::Identity(n, n);
    flip.bottomRightCorner(d, d) *= -1.0;
    const Mat Ainv = symplectic_inverse(A);
    if (auto L = wigner_decomposable_L(Ainv, tol))
      add(Chain{{Gen::Rescale, L->inverse()}, {Gen::PartialFourier, Mat()}, {Gen::Rescale, flip}});
    if (auto cov = covariant_form_of(Ainv, tol)) {
      Mat C = Mat::Zero(n, n);
      C.topLeftCorner(d, d) = cov->A13;
      C.bottomRightCorner(d, d) = -cov->A21;
      Mat Id = Mat::Identity(d, d);
      Mat L(n, n);
      L << Id, Id - cov->A11, Id, -cov->A11;
      add(Chain{{Gen::Rescale, L.inverse()}, {Gen::PartialFourier, Mat()}, {Gen::Rescale, flip},
                {Gen::Fourier, Mat()}, {Gen::Chirp, C}, {Gen::Fourier, Mat()}, {Gen::Rescale, Mat(-Mat::Identity(n, n))}});
    }
  }
  const Chain F = {{Gen::Fourier, Mat()}};
  add(ldu_chain(A));
  add(free_chain(A));
  add(ldu_chain(A * Jinv), {}, F);
  add(ldu_chain(Jinv * A), F, {});
  add(free_chain(Jinv * A), F, {});
  add(ldu_chain(Jinv * A * Jinv), F, F);
  if (candidates.empty()) {
    FreeFactors ff = free_factorize(A);
    auto c1 = free_chain(ff.first), c2 = free_chain(ff.second);
    if (c1 && c2) {
      Chain full = *c1;
      full.insert(full.end(), c2->begin(), c2->end());
      candidates.push_back(full);
    }
  }

  GeneratorChain best;
  double best_cost = std::numeric_limits<double>::infinity();
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (const auto& c : candidates) {
    GeneratorChain g = simplify({n, c});
    double err = (g.product() - A).cwiseAbs().maxCoeff();
    if (err > tol * scale) continue;
    double cost = chain_cost(g);
    if (cost < best_cost) {
      best_cost = cost;
      best = g;
    }
  }
  if (!std::isfinite(best_cost))
    throw FactorizationError("generator_decompose: no candidate chain reproduces the matrix");
  return best;
}

CovariantForm CovariantForm::make(const Mat& A11, const Mat& A13, const Mat& A21, double tol) {
  const auto d = A11.rows();
  if (A11.cols() != d || A13.rows() != d || A13.cols() != d || A21.rows() != d || A21.cols() != d)
    throw ShapeError("covariant form: blocks must be d x d");
  if ((A13 - A13.transpose()).cwiseAbs().maxCoeff() > tol) throw ValidationError("covariant form: A13 not symmetric");
  if ((A21 - A21.transpose()).cwiseAbs().maxCoeff() > tol) throw ValidationError("covariant form: A21 not symmetric");
  return {A11, 0.5 * (A13 + A13.transpose()), 0.5 * (A21 + A21.transpose())};
}

Mat covariant_matrix(const CovariantForm& c) {
  const auto d = c.A11.rows();
  Mat I = Mat::Identity(d, d), Z = Mat::Zero(d, d);
  Mat A(4 * d, 4 * d);
  A << c.A11, I - c.A11, c.A13, c.A13,
       c.A21, -c.A21, I - c.A11.transpose(), -c.A11.transpose(),
       Z, Z, I, I,
       -I, I, Z, Z;
  return A;
}

Mat covariant_from_blocks(const Mat& A11, const Mat& A13, const Mat& A21, double tol) {
  return covariant_matrix(CovariantForm::make(A11, A13, A21, tol));
}

std::optional<CovariantForm> covariant_form_of(const Mat& A, double tol) {
  if (A.rows() != A.cols() || A.rows() % 4) return std::nullopt;
  Mat A11 = block4(A, 1, 1), A13 = block4(A, 1, 3), A21 = block4(A, 2, 1);
  if ((A13 - A13.transpose()).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  if ((A21 - A21.transpose()).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  CovariantForm c{A11, 0.5 * (A13 + A13.transpose()), 0.5 * (A21 + A21.transpose())};
  if (!near(covariant_matrix(c), A, tol)) return std::nullopt;
  return c;
}

Mat cohen_B(const CovariantForm& c) {
  const auto d = c.A11.rows();
  Mat I = Mat::Identity(d, d);
  Mat B(2 * d, 2 * d);
  B << c.A13, 0.5 * I - c.A11, 0.5 * I - c.A11.transpose(), -c.A21;
  return B;
}

CovariantForm covariant_from_cohen_B(const Mat& B, double tol) {
  if (B.rows() != B.cols() || B.rows() % 2) throw ShapeError("cohen matrix must be 2d x 2d");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, B.cwiseAbs().maxCoeff()))
    throw ValidationError("cohen matrix is not symmetric");
  const auto d = B.rows() / 2;
  Mat I = Mat::Identity(d, d);
  return CovariantForm::make(0.5 * I - B.topRightCorner(d, d), B.topLeftCorner(d, d),
                             -B.bottomRightCorner(d, d), tol * std::max(1.0, B.cwiseAbs().maxCoeff()));
}

Mat evolve_cohen_B(const Mat& B, const Mat& chi, double tol) {
  if (chi.rows() != B.rows() || chi.cols() != B.cols()) throw ShapeError("evolve_cohen_B: size mismatch");
  if (!is_symplectic(chi, tol * std::max(1.0, chi.cwiseAbs().maxCoeff())))
    throw ValidationError("evolve_cohen_B: chi_t is not symplectic");
  Mat chi_inv = symplectic_inverse(chi);
  Mat out = chi_inv.transpose() * B * chi_inv;
  return 0.5 * (out + out.transpose());
}

std::optional<Mat> wigner_decomposable_L(const Mat& A, double tol) {
  if (A.rows() != A.cols() || A.rows() % 4) return std::nullopt;
  const auto n = A.rows() / 2;
  Mat D = symplectic_inverse(ft2_matrix(static_cast<int>(n / 2))) * A;
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (D.topRightCorner(n, n).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
  if (D.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
  Mat L = D.bottomRightCorner(n, n).transpose();
  if (condition_number(L) > kConditionBound) return std::nullopt;
  if (!near(L.inverse(), D.topLeftCorner(n, n), tol)) return std::nullopt;
  return L;
}

QuadraticHamiltonian QuadraticHamiltonian::make(const Mat& A, const Mat& B, const Mat& C, double tol) {
  const auto d = A.rows();
  if (A.cols() != d || B.rows() != d || B.cols() != d || C.rows() != d || C.cols() != d)
    throw ShapeError("quadratic Hamiltonian: blocks must be d x d");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol) throw ValidationError("quadratic Hamiltonian: A not symmetric");
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > tol) throw ValidationError("quadratic Hamiltonian: C not symmetric");
  QuadraticHamiltonian h{0.5 * (A + A.transpose()), B, 0.5 * (C + C.transpose())};
  Mat D = h.hamiltonian_matrix();
  Mat J = standard_J(static_cast<int>(d));
  if ((D.transpose() * J + J * D).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, D.cwiseAbs().maxCoeff()))
    throw ValidationError("quadratic Hamiltonian: matrix not in sp(d)");
  return h;
}

QuadraticHamiltonian QuadraticHamiltonian::free_particle(int d) {
  return make(Mat::Zero(d, d), Mat::Zero(d, d), -8.0 * pi * pi * Mat::Identity(d, d));
}

QuadraticHamiltonian QuadraticHamiltonian::harmonic_oscillator(double omega, int d) {
  Mat K = 2.0 * pi * omega * Mat::Identity(d, d);
  return make(K, Mat::Zero(d, d), K);
}

Mat QuadraticHamiltonian::hamiltonian_matrix() const {
  const auto d = A.rows();
  Mat D(2 * d, 2 * d);
  D << B, C, -A, -B.transpose();
  return D;
}

double QuadraticHamiltonian::symbol(double x, double xi) const {
  return 0.5 * A(0, 0) * x * x + xi * B(0, 0) * x + 0.5 * C(0, 0) * xi * xi;
}

Mat hamiltonian_flow(const QuadraticHamiltonian& h, double t) {
  Mat X = (-t / (2.0 * pi)) * h.hamiltonian_matrix();
  return X.exp();
}

std::optional<Mat> shift_invertibility(const Mat& A, double cond_bound) {
  if (A.rows() != A.cols() || A.rows() % 4) throw ShapeError("shift_invertibility: need a 4d x 4d matrix");
  if (!wigner_decomposable_L(A, 1e-9) && !covariant_form_of(A, 1e-9))
    throw ShapeError("shift_invertibility: matrix is neither totally Wigner-decomposable nor covariant");
  Mat A11 = block4(A, 1, 1), A23 = block4(A, 2, 3);
  if (condition_number(A11) > cond_bound || condition_number(A23) > cond_bound) return std::nullopt;
  const auto d = A11.rows();
  Mat E = Mat::Zero(2 * d, 2 * d);
  E.topLeftCorner(d, d) = A11;
  E.bottomRightCorner(d, d) = A23;
  return E;
}

Mat random_symplectic(std::mt19937_64& rng, int n, int length, double strength) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 2);
  Mat P = Mat::Identity(2 * n, 2 * n);
  for (int k = 0; k < length; ++k) {
    int kind = pick(rng);
    if (kind == 0) {
      P = P * standard_J(n);
    } else if (kind == 1) {
      Mat C(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) C(i, j) = strength * u(rng);
      P = P * chirp_matrix(Mat(0.5 * (C + C.transpose())));
    } else {
      Mat L = Mat::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) L(i, j) += 0.5 * strength * u(rng);
      P = P * rescale_matrix(L);
    }
  }
  return P;
}

}  // namespace metaplab
