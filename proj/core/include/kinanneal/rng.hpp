#pragma once

#include <cstdint>
#include <random>

namespace kinanneal {

std::uint64_t mix64(std::uint64_t z);

// Seed material for stream `index` derived from a master seed; two distinct
// indices give statistically independent generators.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index);

// Per-walker random stream. Each worker owns its stream; streams are never
// shared between threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t index = 0);

  std::uint64_t stream_seed() const { return seed_; }

  double uniform();                    // U[0,1)
  double uniform(double a, double b);  // U[a,b)
  double normal();                     // N(0,1)

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kinanneal
