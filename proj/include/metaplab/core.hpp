#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace metaplab {

using cd = std::complex<double>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = MatX<double>;
using CMat = MatX<cd>;
using Vec = VecX<double>;
using CVec = VecX<cd>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cd I_unit{0.0, 1.0};

// Bad input: maps to CLI exit code 2.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ShapeError : ValidationError {
  using ValidationError::ValidationError;
};

// Numeric guard trips (aliasing, conditioning, failed factorization): exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplingError : NumericError {
  using NumericError::NumericError;
};

struct FactorizationError : NumericError {
  using NumericError::NumericError;
};

// Worker count from METAPLAB_THREADS (defaults to hardware concurrency).
int worker_threads();

// Runs body(i) for i in [0, n) split into contiguous chunks, one per worker.
// Each index is written by exactly one worker so results do not depend on scheduling.
void parallel_for(int n, const std::function<void(int)>& body);

inline cd expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

// Relative L2 error after removing the best global unimodular phase.
double phase_aligned_error(const CVec& u, const CVec& v);
double phase_aligned_error(const CMat& u, const CMat& v);
double cosine_similarity(const CVec& u, const CVec& v);
double relative_error(const CMat& u, const CMat& v);

}  // namespace metaplab
