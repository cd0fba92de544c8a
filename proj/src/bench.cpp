#include "augkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace augkit {

namespace {

Image noise_image(int size, std::uint64_t seed) {
  Image img(size, size);
  RngState rng(seed, 0xBE7C4);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.next_u64() >> 56);
  return img;
}

}  // namespace

BenchResult bench_throughput(const ChainConfig& chain, int image_size, double duration_s,
                             int workers, std::uint64_t seed) {
  if (duration_s < 1.0) throw ConfigError("benchmark duration must be at least 1 s");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (image_size < 1) throw ConfigError("image size must be positive");
  chain.validate();

  const Image input = noise_image(image_size, seed);
  // A second image gives sample_pairing a partner.
  const std::vector<Image> batch{input, noise_image(image_size, seed + 1)};
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(workers), 0);
  std::vector<double> elapsed(static_cast<std::size_t>(workers), 0.0);

  auto run = [&](int w) {
    using clock = std::chrono::steady_clock;
    const PartnerPool pool{batch, 0, 0, {}};
    const auto start = clock::now();
    const auto deadline = start + std::chrono::duration<double>(duration_s);
    std::uint64_t n = 0;
    auto now = start;
    while (now < deadline) {
      for (int i = 0; i < 64; ++i) {
        RngState rng(seed, derive_stream(seed, static_cast<std::uint64_t>(w), n));
        run_chain(input, chain, rng, &pool);
        ++n;
      }
      now = clock::now();
    }
    counts[static_cast<std::size_t>(w)] = n;
    elapsed[static_cast<std::size_t>(w)] = std::chrono::duration<double>(now - start).count();
  };

  {
    std::vector<std::jthread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back(run, w);
    run(0);
  }

  BenchResult result;
  for (int w = 0; w < workers; ++w) {
    const double ips = elapsed[w] > 0 ? static_cast<double>(counts[w]) / elapsed[w] : 0.0;
    result.per_worker.push_back(ips);
    result.aggregate += ips;
    result.images += counts[w];
    result.seconds = std::max(result.seconds, elapsed[w]);
  }
  return result;
}

}  // namespace augkit
