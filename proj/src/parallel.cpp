#include "edlkit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace edl {

namespace {

int default_threads() {
  if (const char* env = std::getenv("EDLKIT_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
      // fall through to all cores
    }
  }
  return omp_get_max_threads();
}

std::atomic<int> g_override{0};

}  // namespace

int max_threads() {
  static const int cached = default_threads();
  const int o = g_override.load();
  return o >= 1 ? o : cached;
}

void set_max_threads(int threads) { g_override.store(threads >= 1 ? threads : 0); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace edl
