#include "metaplab/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace metaplab {

int worker_threads() {
  if (const char* env = std::getenv("METAPLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  if (n <= 0) return;
  int workers = std::min(worker_threads(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    int lo = static_cast<int>(static_cast<long>(n) * w / workers);
    int hi = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

template <typename M>
double aligned(const M& u, const M& v) {
  cd ip = (v.array().conjugate() * u.array()).sum();
  double nv = v.norm();
  if (nv == 0.0) return u.norm();
  cd phase = std::abs(ip) > 0 ? ip / std::abs(ip) : cd(1.0);
  return (u - phase * v).norm() / nv;
}

}  // namespace

double phase_aligned_error(const CVec& u, const CVec& v) { return aligned(u, v); }
double phase_aligned_error(const CMat& u, const CMat& v) { return aligned(u, v); }

double cosine_similarity(const CVec& u, const CVec& v) {
  double d = u.norm() * v.norm();
  return d == 0.0 ? 0.0 : std::abs(v.dot(u)) / d;
}

double relative_error(const CMat& u, const CMat& v) {
  double nv = v.norm();
  return nv == 0.0 ? u.norm() : (u - v).norm() / nv;
}

}  // namespace metaplab
