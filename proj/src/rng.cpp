#include "nptasmc/rng.hpp"

#include <cmath>

namespace nptasmc {

namespace {

// SplitMix64 finalizer; good avalanche, used only to spread seeds.
uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

void RngStream::reseed(uint64_t master_seed, uint64_t stream_index) {
    const uint64_t a = mix64(master_seed);
    const uint64_t b = mix64(stream_index ^ 0x6a09e667f3bcc909ULL);
    std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                      static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
    engine_.seed(seq);
}

double RngStream::exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
}

uint64_t RngStream::pick(uint64_t n) {
    // Rejection keeps the choice unbiased.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return draw % n;
}

RngStream substream(uint64_t master_seed, uint64_t index) {
    return RngStream(master_seed, index);
}

} // namespace nptasmc
