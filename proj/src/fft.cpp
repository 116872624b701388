#include "metaplab/fft.hpp"

#include <unsupported/Eigen/FFT>
#include <vector>

namespace metaplab {

namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

void transform(std::vector<cd>& buf, std::vector<cd>& out, int sign) {
  if (sign < 0)
    engine().fwd(out, buf);
  else
    engine().inv(out, buf);
}

}  // namespace

void dft_inplace(CVec& v, int sign) {
  std::vector<cd> in(v.data(), v.data() + v.size()), out;
  transform(in, out, sign);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = out[i];
}

CVec dft(const CVec& v, int sign) {
  CVec r = v;
  dft_inplace(r, sign);
  return r;
}

void dft_axis(CMat& m, int axis, int sign) {
  std::vector<cd> in, out;
  if (axis == 0) {
    in.resize(m.rows());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) in[i] = m(i, j);
      transform(in, out, sign);
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = out[i];
    }
  } else {
    in.resize(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) in[j] = m(i, j);
      transform(in, out, sign);
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = out[j];
    }
  }
}

}  // namespace metaplab
