#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mubforge {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Thrown when inputs violate a documented precondition (bad parameters,
/// malformed descriptors, mixed contexts).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in add");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in mul");
  return r;
}

/// Deterministic 64-bit generator (splitmix64). Used for every sampled
/// verification mode so that identical seeds reproduce identical reports
/// on any platform.
class Rng {
 public:
  explicit Rng(u64 seed) : state_(seed) {}

  u64 next() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) without modulo bias.
  u64 below(u64 bound) {
    if (bound == 0) throw domain_error("Rng::below: zero bound");
    u64 threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      u64 v = next();
      if (v >= threshold) return v % bound;
    }
  }

 private:
  u64 state_;
};

/// Outcome of one verification pass. `failures` keeps at most a handful of
/// witnesses; `failure_count` is the true total. Telemetry counters are
/// deterministic (no wall-clock values); timing is reported separately.
struct Report {
  std::string subject;
  std::string mode = "exact";  // "exact" or "sampled" (sampled checks are still exact)
  u64 checks = 0;
  u64 seed = 0;
  u64 samples = 0;
  u64 failure_count = 0;
  std::vector<std::string> failures;
  std::map<std::string, i64> telemetry;
  double time_ms = 0.0;

  bool passed() const { return failure_count == 0; }

  void fail(std::string witness) {
    ++failure_count;
    if (failures.size() < 32) failures.push_back(std::move(witness));
  }

  void absorb(const Report& other) {
    checks += other.checks;
    samples += other.samples;
    failure_count += other.failure_count;
    for (const auto& f : other.failures)
      if (failures.size() < 32) failures.push_back(f);
    for (const auto& [k, v] : other.telemetry) telemetry[k] += v;
  }
};

/// Splits [0, count) into contiguous chunks, runs `body(chunk, begin, end)`
/// on up to `threads` workers, and leaves merging to the caller so results
/// stay deterministic regardless of scheduling.
template <typename Body>
void parallel_chunks(u64 count, u32 threads, u32 nchunks, Body&& body) {
  if (threads <= 1 || count < 2 || nchunks <= 1) {
    body(0u, u64{0}, count);
    return;
  }
  if (nchunks > count) nchunks = static_cast<u32>(count);
  std::vector<std::thread> pool;
  std::vector<u64> starts(nchunks + 1);
  for (u32 c = 0; c <= nchunks; ++c) starts[c] = count * c / nchunks;
  u32 per = (nchunks + threads - 1) / threads;
  for (u32 t = 0; t < threads; ++t) {
    u32 lo = t * per, hi = std::min(nchunks, lo + per);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi]() {
      for (u32 c = lo; c < hi; ++c) body(c, starts[c], starts[c + 1]);
    });
  }
  for (auto& th : pool) th.join();
}

inline u32 default_thread_count() {
  if (const char* env = std::getenv("MUBFORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<u32>(v);
  }
  u32 hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace mubforge
