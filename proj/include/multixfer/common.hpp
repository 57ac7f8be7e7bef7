#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace multixfer {

using Real = double;
using Complex = std::complex<double>;
using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Vec2 = Eigen::Vector2d;
using Freq2 = Eigen::Vector2i;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;
inline constexpr Real kTwoPi = 2.0 * kPi;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline Complex unit_phase(Real angle) { return Complex(std::cos(angle), std::sin(angle)); }

/// Deterministic RNG with portable output (no libstdc++ distribution objects,
/// so streams are bit-identical across platforms given the same seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // warm up so that small seeds decorrelate
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  Real uniform() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  /// uniform in [a, b)
  Real uniform(Real a, Real b) { return a + (b - a) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// standard normal via Box-Muller
  Real normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    Real u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const Real u2 = uniform();
    const Real r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  Complex complex_normal() {
    const Real re = normal();
    const Real im = normal();
    return Complex(re, im);
  }

  /// independent child stream (used for per-restart seeds)
  std::uint64_t derive(std::uint64_t salt) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  Real spare_ = 0.0;
  bool have_spare_ = false;
};

/// Run fn(i) for i in [0, n) on up to `jobs` threads. Results must be written
/// to disjoint slots by the caller; iteration order inside a thread is
/// ascending, and the partition depends only on (n, jobs).
inline void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += jobs) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_jobs() {
  if (const char* env = std::getenv("MULTIXFER_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace multixfer
