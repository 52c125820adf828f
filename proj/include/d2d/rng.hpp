#pragma once

#include <cstdint>

namespace d2d {

// Deterministic, stream-splittable generator (xoshiro256++ seeded through
// splitmix64). All randomness of a campaign flows from one master seed;
// substreams are opened by (master, stream_id) so each realization draws
// from its own stream regardless of execution order. Distribution sampling
// is implemented here directly so that sequences are identical across
// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  double normal(double mean, double stddev);

  // Exponential with the given mean (unit-mean Rayleigh fading power).
  double exponential(double mean);

 private:
  std::uint64_t state_[4];
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace d2d
