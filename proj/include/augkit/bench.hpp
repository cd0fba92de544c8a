#pragma once

#include <vector>

#include "augkit/pipeline.hpp"

namespace augkit {

struct BenchResult {
  std::vector<double> per_worker;  // images/sec
  double aggregate = 0.0;          // images/sec summed over workers
  std::uint64_t images = 0;
  double seconds = 0.0;
};

/// Steady-state run_chain throughput on a synthetic noise image of the given
/// size; no I/O. Each worker owns its rng stream. Throws ConfigError when
/// duration_s < 1 or workers < 1.
BenchResult bench_throughput(const ChainConfig& chain, int image_size, double duration_s,
                             int workers = 1, std::uint64_t seed = 0);

}  // namespace augkit
