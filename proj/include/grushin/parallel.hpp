#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace grushin {

using Index = Eigen::Index;
using cplx = std::complex<double>;

/// Number of worker threads. Initialized from GRUSHIN_WORKERS, default 1.
int worker_count();
void set_worker_count(int n);

/// Runs body(i) for i in [0, n). Work is split into contiguous static chunks,
/// so each body(i) sees the same inputs whatever the worker count.
void parallel_for(Index n, const std::function<void(Index)>& body);

/// Fixed-shape pairwise summation. The tree depends only on n.
template <typename T>
T pairwise_sum(const T* x, Index n)
{
  if (n <= 8) {
    T s = T(0);
    for (Index i = 0; i < n; ++i)
      s += x[i];
    return s;
  }
  const Index h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& v)
{
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, 1> tmp = v.derived().reshaped();
  return pairwise_sum(tmp.data(), tmp.size());
}

/// splitmix64 step, used to derive independent seeded streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Small reproducible generator: uniform doubles and normals from splitmix64.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();
  std::uint64_t next();

private:
  std::uint64_t state_;
};

} // namespace grushin
