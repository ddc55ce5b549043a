#pragma once

// Shared basics: error type, complex alias, multi-index helpers, a small
// deterministic RNG and a bounded parallel_for used by the transform kernels.

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hnse {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846264338327950288;

class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class accuracy_error : public error {
public:
  explicit accuracy_error(const std::string& what) : error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw error(msg);
}

// ---------------------------------------------------------------------------
// Multi-indices n = (n_1,...,n_d), each component in [0, M], linearized
// row-major (first coordinate slowest).

struct ModeIndexer {
  int d = 1;
  int M = 0;

  int per_dim() const { return M + 1; }

  int count() const {
    int c = 1;
    for (int j = 0; j < d; ++j) c *= M + 1;
    return c;
  }

  // stride of coordinate j in the linearized index
  int stride(int j) const {
    int s = 1;
    for (int k = j + 1; k < d; ++k) s *= M + 1;
    return s;
  }

  void decode(int lin, int* out) const {
    for (int j = d - 1; j >= 0; --j) {
      out[j] = lin % (M + 1);
      lin /= (M + 1);
    }
  }

  int encode(const int* idx) const {
    int lin = 0;
    for (int j = 0; j < d; ++j) lin = lin * (M + 1) + idx[j];
    return lin;
  }

  // |n| = n_1 + ... + n_d for a linear index
  int abs_sum(int lin) const {
    int s = 0;
    for (int j = d - 1; j >= 0; --j) {
      s += lin % (M + 1);
      lin /= (M + 1);
    }
    return s;
  }

  int component(int lin, int j) const {
    for (int k = d - 1; k > j; --k) lin /= (M + 1);
    return lin % (M + 1);
  }
};

// ---------------------------------------------------------------------------
// Deterministic RNG. std::mt19937_64 is fully specified by the standard; the
// distributions are not, so uniform/normal are spelled out here.

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // xorshift* (Marsaglia); period 2^64-1, reproducible everywhere
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  double uniform() {  // in [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    // Box-Muller, one value per call (second discarded for simplicity)
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

  cplx normal_cplx() { return cplx(normal(), normal()); }

private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Parallel loop over [0, n). Thread count is capped by HNSE_THREADS.
// Work items must write to disjoint state; reductions are done by the caller
// in index order so results do not depend on the thread count.

inline int max_threads() {
  static const int cap = [] {
    if (const char* env = std::getenv("HNSE_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }();
  return cap;
}

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  int nt = std::min(max_threads(), n);
  if (nt <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (int t = 1; t < nt; ++t) {
    pool.emplace_back([=, &fn] {
      for (int i = t; i < n; i += nt) fn(i);
    });
  }
  for (int i = 0; i < n; i += nt) fn(i);
  for (auto& th : pool) th.join();
}

}  // namespace hnse
