#include "grushin/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace grushin {

namespace {

int initial_workers()
{
  if (const char* env = std::getenv("GRUSHIN_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0)
      return n;
  }
  return 1;
}

std::atomic<int>& workers_ref()
{
  static std::atomic<int> w{initial_workers()};
  return w;
}

} // namespace

int worker_count() { return workers_ref().load(); }

void set_worker_count(int n) { workers_ref().store(std::max(1, n)); }

void parallel_for(Index n, const std::function<void(Index)>& body)
{
  if (n <= 0)
    return;
  const Index w = std::min<Index>(worker_count(), n);
  if (w <= 1) {
    for (Index i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (Index t = 0; t < w; ++t) {
    const Index lo = n * t / w;
    const Index hi = n * (t + 1) / w;
    pool.emplace_back([&, lo, hi] {
      try {
        for (Index i = lo; i < hi; ++i)
          body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err)
          err = std::current_exception();
      }
    });
  }
  for (auto& th : pool)
    th.join();
  if (err)
    std::rethrow_exception(err);
}

std::uint64_t splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t s = seed;
  state_ = splitmix64(s) ^ (0xd1b54a32d192ed03ULL * (stream + 1));
}

std::uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal()
{
  double u1 = uniform();
  while (u1 <= 0.0)
    u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace grushin
