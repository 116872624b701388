#pragma once

#include "metaplab/wigner.hpp"

namespace metaplab {

using Symbol = std::function<cd(double, double)>;                  // a(x, xi)
using Symbol4 = std::function<cd(double, double, double, double)>;  // b(x, xi, u, v)

// Matrix acting on grid samples: signal side (N x N) or field side (N0 N1 x N0 N1,
// column-major flattening i + j N0).
struct DenseOperator {
  Grid g0, g1;
  bool field = false;
  CMat m;

  Signal operator()(const Signal& f) const;
  Field operator()(const Field& F) const;
};

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
DenseOperator identity_operator(const Grid& g);

// Samples of a symbol on (x grid, dual grid).
Field symbol_field(const Symbol& a, const Grid& g);

// Weyl quantization with a frequency grid of step 1/(2 L R); R = 2 keeps the
// kernel free of periodic wrap, R = 1 gives the spectral realization.
DenseOperator weyl(const Symbol& a, const Grid& g, int R = 2);
DenseOperator weyl(const Field& a);
DenseOperator weyl4(const Symbol4& b, const Grid& g0, const Grid& g1, int R = 2);

// Weyl symbol of a signal-side operator, on (x grid, dual grid).
Field inverse_weyl(const DenseOperator& T);

DenseOperator op_A(const Mat& A, const Field& a);
Field requantize(const Mat& A, const Mat& B, const Field& a);

// Covariant integral formula with the F(Phi_C) * a convolution (cross-check only).
DenseOperator op_A_covariant_formula(const CovariantForm& cov, const Field& a);

enum class Pullback { b, b_tilde, c };
// Direct composition (a x 1) o A^{-1} and its conjugate-reflected companion.
Symbol4 symbol_pullback(const Mat& A, const Symbol& a, Pullback variant);
// Closed forms for b: decomposable or covariant A.
Symbol4 symbol_pullback_closed(const Mat& A, const Symbol& a);

struct ConjugationReport {
  double a4 = 0, a5 = 0, a6 = 0;
  double a6_imag = 0;  // max |Im| of the A6 left side relative to its max modulus
};

// Both sides of the three conjugation identities for covariant A: signals on
// their own grid, phase-space fields on field_grid x field_grid.
ConjugationReport conjugation_check(const Mat& A, const Symbol& a, const Signal& f, const Signal& g,
                                    const Grid& field_grid);

}  // namespace metaplab
