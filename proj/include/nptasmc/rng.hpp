#pragma once

#include <cstdint>
#include <random>

namespace nptasmc {

// Reproducible random stream addressed by (master seed, stream index).
// Distinct indices give statistically independent streams; the same pair
// reproduces bit-identical draws on every platform because both the
// mt19937_64 engine and the double construction below are fully specified.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(uint64_t master_seed, uint64_t stream_index) { reseed(master_seed, stream_index); }

    void reseed(uint64_t master_seed, uint64_t stream_index);

    uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Inverse-transform exponential; uniform01() < 1 keeps the log finite.
    double exponential(double rate);

    // Uniform integer in [0, n); n must be positive.
    uint64_t pick(uint64_t n);

  private:
    std::mt19937_64 engine_;
};

// Stateless O(1) derivation so runs can be generated out of order.
RngStream substream(uint64_t master_seed, uint64_t index);

} // namespace nptasmc
