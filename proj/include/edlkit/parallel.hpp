#pragma once

// Thread-count control and deterministic seed derivation for parallel sweeps.

#include <cstdint>

namespace edl {

/// Thread cap for internal OpenMP loops. Reads EDLKIT_THREADS once; defaults to all cores.
int max_threads();

/// Overrides the cap for the rest of the process (values < 1 restore the default).
void set_max_threads(int threads);

/// splitmix64 finalizer; mixes a base seed with a task index into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace edl
