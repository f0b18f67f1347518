#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace revineq {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t block = 0) noexcept {
  return mix_seed(mix_seed(mix_seed(seed) ^ stream) ^ block);
}

/// mt19937_64 with hand-written uniform/normal transforms. The standard
/// distributions are implementation-defined, so they would break
/// cross-platform reproducibility of the seeded estimates.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = uniform_open0();
    const double v = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u));
    const double ang = 2.0 * std::numbers::pi * v;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Running mean / second central moment, mergeable (Chan et al.).
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    Moments out;
    out.count = a.count + b.count;
    const double d = b.mean - a.mean;
    out.mean = a.mean + d * (b.count / out.count);
    out.m2 = a.m2 + b.m2 + d * d * (a.count * b.count / out.count);
    return out;
  }

  double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
  double stderr_of_mean() const {
    return count > 1.0 ? std::sqrt(variance() / count) : 0.0;
  }
};

/// Pairwise (tree) reduction in index order; the result depends only on the
/// input sequence, not on how it was produced.
template <class T, class Merge>
T pairwise_reduce(std::span<const T> items, Merge merge) {
  if (items.empty()) return T{};
  if (items.size() == 1) return items[0];
  const std::size_t half = items.size() / 2;
  return merge(pairwise_reduce(items.first(half), merge),
               pairwise_reduce(items.subspan(half), merge));
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_reduce<double>(xs, [](double a, double b) { return a + b; });
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work items are
/// claimed dynamically; callers write results to slot i so that the
/// reduction order stays fixed.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  threads = std::min<unsigned>(resolve_threads(threads),
                               static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace revineq
