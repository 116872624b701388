#include "metaplab/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metaplab/fft.hpp"
#include "metaplab/symplectic.hpp"

namespace metaplab {

Grid Grid::make(int N, double L) {
  if (N <= 0 || N % 2) throw ValidationError("grid: N must be a positive even integer");
  if (!(L > 0) || !std::isfinite(L)) throw ValidationError("grid: L must be positive");
  return {N, L};
}

Vec Grid::points() const {
  Vec p(N);
  for (int k = 0; k < N; ++k) p[k] = x(k);
  return p;
}

bool Grid::same(const Grid& o, double tol) const {
  return N == o.N && std::abs(L - o.L) <= tol * std::max(1.0, L);
}

Grid Grid::self_dual(int N) { return make(N, std::sqrt(static_cast<double>(N)) / 2.0); }

double Signal::norm() const { return std::sqrt(grid.step()) * v.norm(); }
double Field::norm() const { return std::sqrt(cell()) * v.norm(); }

Signal sample(const Grid& g, const std::function<cd(double)>& f) {
  Signal s{g, CVec(g.N)};
  for (int k = 0; k < g.N; ++k) s.v[k] = f(g.x(k));
  return s;
}

Field sample(const Grid& g0, const Grid& g1, const std::function<cd(double, double)>& f) {
  Field F{g0, g1, CMat(g0.N, g1.N)};
  for (int j = 0; j < g1.N; ++j)
    for (int i = 0; i < g0.N; ++i) F.v(i, j) = f(g0.x(i), g1.x(j));
  return F;
}

cd inner(const Signal& f, const Signal& g) {
  if (!f.grid.same(g.grid)) throw ShapeError("inner: grid mismatch");
  return f.grid.step() * g.v.dot(f.v);
}

cd inner(const Field& f, const Field& g) {
  if (!f.g0.same(g.g0) || !f.g1.same(g.g1)) throw ShapeError("inner: grid mismatch");
  return f.cell() * (g.v.array().conjugate() * f.v.array()).sum();
}

Signal conjugate(Signal f) {
  f.v = f.v.conjugate();
  return f;
}

namespace {

inline double alt(int k) { return (k & 1) ? -1.0 : 1.0; }

// Pre/post sign patterns that center the DFT on the symmetric grids.
void fourier_core(cd* data, std::ptrdiff_t stride, const Grid& g, bool inverse, std::vector<cd>& buf) {
  const int N = g.N;
  buf.resize(N);
  for (int k = 0; k < N; ++k) buf[k] = alt(k) * data[k * stride];
  CVec tmp = Eigen::Map<CVec>(buf.data(), N);
  dft_inplace(tmp, inverse ? +1 : -1);
  const double s = alt(N / 2) * (inverse ? 1.0 / (2.0 * g.L) : g.step());
  for (int j = 0; j < N; ++j) data[j * stride] = s * alt(j) * tmp[j];
}

}  // namespace

void fourier_inplace(CVec& v, const Grid& g, bool inverse) {
  if (v.size() != g.N) throw ShapeError("fourier: length does not match grid");
  std::vector<cd> buf;
  fourier_core(v.data(), 1, g, inverse, buf);
}

Signal fourier(const Signal& f) {
  Signal r{f.grid.dual(), f.v, f.interpolated};
  fourier_inplace(r.v, f.grid, false);
  return r;
}

Signal inverse_fourier(const Signal& f) {
  Signal r{f.grid.dual(), f.v, f.interpolated};
  fourier_inplace(r.v, r.grid, true);
  return r;
}

Field fourier_axis(const Field& F, int axis, bool inverse) {
  Field r = F;
  std::vector<cd> buf;
  if (axis == 0) {
    const Grid g = inverse ? F.g0.dual() : F.g0;
    for (Eigen::Index j = 0; j < r.v.cols(); ++j) fourier_core(&r.v(0, j), 1, g, inverse, buf);
    r.g0 = F.g0.dual();
  } else if (axis == 1) {
    const Grid g = inverse ? F.g1.dual() : F.g1;
    for (Eigen::Index i = 0; i < r.v.rows(); ++i) fourier_core(&r.v(i, 0), r.v.rows(), g, inverse, buf);
    r.g1 = F.g1.dual();
  } else {
    throw ShapeError("fourier_axis: axis must be 0 or 1");
  }
  return r;
}

Field fourier(const Field& F, bool inverse) { return fourier_axis(fourier_axis(F, 0, inverse), 1, inverse); }

double interp_kernel(const Grid& g, double u) {
  const double h = g.step();
  const double a = std::sin(pi * u / (2.0 * g.L));
  if (std::abs(a) < 1e-14) {
    // u is a multiple of the period 2L: kernel equals 1 there
    return 1.0;
  }
  return std::sin(pi * u / h) * std::cos(pi * u / (2.0 * g.L)) / (a * g.N);
}

Mat interp_matrix(const Grid& g, const Vec& points) {
  const int N = g.N;
  const double h = g.step();
  Mat P = Mat::Zero(points.size(), N);
  for (Eigen::Index r = 0; r < points.size(); ++r) {
    const double p = points[r];
    if (!(p >= -g.L - 1e-12 * h && p < g.L - 1e-12 * h)) continue;
    const double q = (p + g.L) / h;
    const double qr = std::round(q);
    if (std::abs(q - qr) < 1e-12) {
      P(r, static_cast<int>(qr) % N) = 1.0;
      continue;
    }
    const double s = std::sin(pi * (p + g.L) / h) / N;
    for (int k = 0; k < N; ++k) P(r, k) = alt(k) * s / std::tan(pi * (p - g.x(k)) / (2.0 * g.L));
  }
  return P;
}

CVec interpolate(const Signal& f, const Vec& points) {
  return interp_matrix(f.grid, points).cast<cd>() * f.v;
}

namespace {

// Zero-pad the centered spectrum; the Nyquist bin is split evenly.
CVec upsample_line(const CVec& v) {
  const int N = static_cast<int>(v.size());
  CVec s = dft(v, -1);
  CVec p = CVec::Zero(2 * N);
  for (int k = 0; k < N / 2; ++k) p[k] = s[k];
  for (int k = N / 2 + 1; k < N; ++k) p[k + N] = s[k];
  p[N / 2] = 0.5 * s[N / 2];
  p[N + N / 2] = 0.5 * s[N / 2];
  CVec out = dft(p, +1);
  return out / static_cast<double>(N);
}

}  // namespace

CVec upsample2(const CVec& v) { return upsample_line(v); }

CMat upsample2_axis(const CMat& m, int axis) {
  if (axis == 0) {
    CMat out(2 * m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.col(j) = upsample_line(m.col(j));
    return out;
  }
  CMat out(m.rows(), 2 * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = upsample_line(m.row(i).transpose()).transpose();
  return out;
}

namespace {

double support_radius(const CVec& v, const Grid& g) {
  double mx = v.cwiseAbs().maxCoeff();
  double r = 0;
  for (int k = 0; k < g.N; ++k)
    if (std::abs(v[k]) > 1e-12 * mx) r = std::max(r, std::abs(g.x(k)));
  return r;
}

}  // namespace

Signal chirp_multiply(const Signal& f, double C, bool guard) {
  if (guard && std::abs(C) * support_radius(f.v, f.grid) > f.grid.nyquist())
    throw SamplingError("chirp aliasing guard tripped on axis 0: |C| t exceeds Nyquist " +
                        std::to_string(f.grid.nyquist()));
  Signal r = f;
  for (int k = 0; k < f.grid.N; ++k) {
    const double t = f.grid.x(k);
    r.v[k] *= expi(pi * C * t * t);
  }
  return r;
}

Field chirp_multiply(const Field& F, const Mat& C, bool guard) {
  if (C.rows() != 2 || C.cols() != 2) throw ShapeError("field chirp needs a 2x2 matrix");
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, C.cwiseAbs().maxCoeff()))
    throw ValidationError("chirp matrix must be symmetric");
  if (guard) {
    double mx = F.v.cwiseAbs().maxCoeff();
    double f0 = 0, f1 = 0;
    for (Eigen::Index j = 0; j < F.v.cols(); ++j)
      for (Eigen::Index i = 0; i < F.v.rows(); ++i) {
        if (std::abs(F.v(i, j)) <= 1e-12 * mx) continue;
        double t0 = F.g0.x(static_cast<int>(i)), t1 = F.g1.x(static_cast<int>(j));
        f0 = std::max(f0, std::abs(C(0, 0) * t0 + C(0, 1) * t1));
        f1 = std::max(f1, std::abs(C(1, 0) * t0 + C(1, 1) * t1));
      }
    if (f0 > F.g0.nyquist())
      throw SamplingError("chirp aliasing guard tripped on axis 0: frequency " + std::to_string(f0) +
                          " exceeds Nyquist " + std::to_string(F.g0.nyquist()));
    if (f1 > F.g1.nyquist())
      throw SamplingError("chirp aliasing guard tripped on axis 1: frequency " + std::to_string(f1) +
                          " exceeds Nyquist " + std::to_string(F.g1.nyquist()));
  }
  Field r = F;
  for (Eigen::Index j = 0; j < F.v.cols(); ++j)
    for (Eigen::Index i = 0; i < F.v.rows(); ++i) {
      double t0 = F.g0.x(static_cast<int>(i)), t1 = F.g1.x(static_cast<int>(j));
      r.v(i, j) *= expi(pi * (C(0, 0) * t0 * t0 + 2.0 * C(0, 1) * t0 * t1 + C(1, 1) * t1 * t1));
    }
  return r;
}

namespace {

// Samples of F(a t) on the same grid, without the amplitude factor.
Mat scale_matrix(const Grid& g, double a) {
  const int N = g.N;
  if (std::abs(a - 1.0) < 1e-15) return Mat::Identity(N, N);
  if (std::abs(a + 1.0) < 1e-15) {
    Mat P = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k) P(k, (N - k) % N) = 1.0;
    return P;
  }
  return interp_matrix(g, a * g.points());
}

}  // namespace

Signal rescale(const Signal& f, double L) {
  if (!(std::abs(L) > 0) || !std::isfinite(L) || std::max(std::abs(L), 1.0 / std::abs(L)) > kConditionBound)
    throw ValidationError("rescale: scale factor not invertible within the condition bound");
  Signal r = f;
  r.v = std::sqrt(std::abs(L)) * (scale_matrix(f.grid, L).cast<cd>() * f.v);
  return r;
}

void shift_axis(CMat& m, const Grid& g, int axis, const Vec& offsets) {
  // line(t) -> line(t + delta) via the spectrum; Nyquist bin uses cos to stay symmetric
  const int N = g.N;
  const bool along0 = axis == 0;
  const Eigen::Index lines = along0 ? m.cols() : m.rows();
  if (offsets.size() != lines) throw ShapeError("shift_axis: one offset per line required");
  for (Eigen::Index l = 0; l < lines; ++l) {
    const double delta = offsets[l];
    if (delta == 0.0) continue;
    CVec line = along0 ? CVec(m.col(l)) : CVec(m.row(l).transpose());
    dft_inplace(line, -1);
    for (int k = 0; k < N; ++k) {
      int kk = k < N / 2 ? k : k - N;
      double freq = kk / (2.0 * g.L);
      if (k == N / 2)
        line[k] *= std::cos(2.0 * pi * (N / (4.0 * g.L)) * delta);
      else
        line[k] *= expi(2.0 * pi * freq * delta);
    }
    dft_inplace(line, +1);
    line /= static_cast<double>(N);
    if (along0)
      m.col(l) = line;
    else
      m.row(l) = line.transpose();
  }
}

namespace {

struct Step {
  enum Kind { Shear0, Shear1, Diag, Swap } kind;
  double a = 0, b = 0;
};

std::vector<Step> ldu_steps(const Eigen::Matrix2d& M) {
  const double a = M(0, 0), b = M(0, 1), c = M(1, 0), det = M.determinant();
  return {{Step::Shear1, c / a}, {Step::Diag, a, det / a}, {Step::Shear0, b / a}};
}

std::vector<Step> udl_steps(const Eigen::Matrix2d& M) {
  const double b = M(0, 1), c = M(1, 0), d = M(1, 1), det = M.determinant();
  return {{Step::Shear0, b / d}, {Step::Diag, det / d, d}, {Step::Shear1, c / d}};
}

double steps_cost(const std::vector<Step>& s) {
  double c = 0;
  for (const auto& st : s) {
    if (st.kind == Step::Shear0 || st.kind == Step::Shear1) c += std::abs(st.a);
    if (st.kind == Step::Diag) {
      c += 2.0 * (std::abs(std::log(std::abs(st.a))) + std::abs(std::log(std::abs(st.b))));
      if (std::abs(std::abs(st.a) - 1.0) > 1e-15) c += 0.05;
      if (std::abs(std::abs(st.b) - 1.0) > 1e-15) c += 0.05;
    }
    if (st.kind == Step::Swap) c += 0.01;
  }
  return c;
}

}  // namespace

Field rescale(const Field& F, const Mat& Lm) {
  if (Lm.rows() != 2 || Lm.cols() != 2) throw ShapeError("field rescale needs a 2x2 matrix");
  if (condition_number(Lm) > kConditionBound) throw ValidationError("rescale: matrix condition number above bound");
  const Eigen::Matrix2d M = Lm;
  const Eigen::Matrix2d P{{0, 1}, {1, 0}};
  const bool square = F.g0.same(F.g1);

  std::vector<std::vector<Step>> cands;
  auto push = [&](std::vector<Step> s, bool pre, bool post) {
    if (pre) s.insert(s.begin(), {Step::Swap});
    if (post) s.push_back({Step::Swap});
    cands.push_back(std::move(s));
  };
  const double eps = 1e-12 * M.cwiseAbs().maxCoeff();
  auto add_all = [&](const Eigen::Matrix2d& X, bool pre, bool post) {
    if (std::abs(X(0, 0)) > eps) push(ldu_steps(X), pre, post);
    if (std::abs(X(1, 1)) > eps) push(udl_steps(X), pre, post);
  };
  add_all(M, false, false);
  if (square) {
    add_all(P * M, true, false);   // M = P (P M)
    add_all(M * P, false, true);   // M = (M P) P
  }
  if (cands.empty()) throw ValidationError("rescale: no admissible shear factorization on a non-square grid");
  const auto best = *std::min_element(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
    return steps_cost(x) < steps_cost(y);
  });

  Field r = F;
  for (const auto& st : best) {
    switch (st.kind) {
      case Step::Shear0: {
        if (st.a == 0.0) break;
        Vec off = st.a * r.g1.points();
        shift_axis(r.v, r.g0, 0, off);
        break;
      }
      case Step::Shear1: {
        if (st.a == 0.0) break;
        Vec off = st.a * r.g0.points();
        shift_axis(r.v, r.g1, 1, off);
        break;
      }
      case Step::Diag: {
        CMat Pa = scale_matrix(r.g0, st.a).cast<cd>();
        CMat Pb = scale_matrix(r.g1, st.b).cast<cd>();
        r.v = Pa * r.v * Pb.transpose();
        if (std::abs(std::abs(st.a) - 1.0) > 1e-15 || std::abs(std::abs(st.b) - 1.0) > 1e-15) r.interpolated = true;
        break;
      }
      case Step::Swap: {
        CMat t = r.v.transpose();
        r.v = t;
        break;
      }
    }
  }
  r.v *= std::sqrt(std::abs(M.determinant()));
  return r;
}

Signal tf_shift(const Signal& f, double x0, double xi0) {
  const Grid& g = f.grid;
  const double q = x0 / g.step();
  const long m = std::lround(q);
  Signal r{g, CVec(g.N), f.interpolated};
  if (std::abs(q - static_cast<double>(m)) < 1e-9) {
    const int N = g.N;
    for (int k = 0; k < N; ++k) r.v[k] = f.v[((k - m) % N + N) % N];
  } else {
    Vec pts = g.points().array() - x0;
    r.v = interpolate(f, pts);
    r.interpolated = true;
  }
  for (int k = 0; k < g.N; ++k) r.v[k] *= expi(2.0 * pi * xi0 * g.x(k));
  return r;
}

Field tensor(const Signal& f, const Signal& g) {
  if (!f.grid.same(g.grid)) throw ShapeError("tensor: grid mismatch");
  return {f.grid, g.grid, f.v * g.v.transpose(), f.interpolated || g.interpolated};
}

double gaussian(double t, double width) {
  return std::pow(2.0, 0.25) / std::sqrt(width) * std::exp(-pi * t * t / (width * width));
}

double hermite_function(int n, double t) {
  // normalized eigenfunctions of the Fourier transform, h_0 = 2^{1/4} e^{-pi t^2}
  const double s = std::sqrt(2.0 * pi) * t;
  double prev = 0.0, cur = std::pow(2.0, 0.25) * std::exp(-pi * t * t);
  for (int k = 0; k < n; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * s * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Signal gaussian_signal(const Grid& g, double x0, double xi0, double width) {
  return sample(g, [=](double t) { return gaussian(t - x0, width) * expi(2.0 * pi * xi0 * t); });
}

Signal hermite_signal(const Grid& g, int n) {
  if (n < 0) throw ValidationError("hermite order must be non-negative");
  return sample(g, [=](double t) { return cd(hermite_function(n, t)); });
}

Signal sign_gaussian_signal(const Grid& g) {
  return sample(g, [](double t) { return cd(t > 0 ? gaussian(t) : t < 0 ? -gaussian(t) : 0.0); });
}

Signal two_bump_signal(const Grid& g, double sep) {
  Signal s = sample(g, [=](double t) { return cd(gaussian(t - sep / 2) + gaussian(t + sep / 2)); });
  s.v /= s.norm();
  return s;
}

Signal random_hermite_signal(const Grid& g, std::mt19937_64& rng, int nmax) {
  std::normal_distribution<double> nd;
  std::vector<cd> c(nmax + 1);
  for (auto& z : c) z = {nd(rng), nd(rng)};
  Signal s = sample(g, [&](double t) {
    cd acc = 0;
    for (int n = 0; n <= nmax; ++n) acc += c[n] * hermite_function(n, t);
    return acc;
  });
  s.v /= s.norm();
  return s;
}

}  // namespace metaplab
