#pragma once

#include <cmath>
#include <cstdint>

namespace secharq::rng {

// splitmix64 finalizer (Steele, Lea, Flood; public domain reference constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ull;

// Derives an independent substream key from (seed, stream, index).
// Estimates built from per-index substreams do not depend on how trials are
// batched or partitioned across workers.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t index) {
    std::uint64_t h = mix64(seed + golden);
    h = mix64(h ^ (stream + golden));
    h = mix64(h ^ (index + golden));
    return h;
}

// Small counter-based generator: state advances by the golden-ratio increment
// and every output is a full avalanche of the counter.
class stream {
  public:
    explicit stream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() { return mix64(state_ += golden); }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential with the given mean; uses log1p so a zero draw is safe.
    double next_exponential(double mean) { return -mean * std::log1p(-next_unit()); }

  private:
    std::uint64_t state_;
};

inline stream substream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index) {
    return stream(substream_key(seed, stream_id, index));
}

// Stream ids used across the library so independent estimators never share draws.
namespace streams {
constexpr std::uint64_t legitimate = 1;
constexpr std::uint64_t eavesdropper = 2;
constexpr std::uint64_t joint_legitimate = 3;
constexpr std::uint64_t joint_eavesdropper = 4;
constexpr std::uint64_t sum_tail = 5;
constexpr std::uint64_t sweep_legitimate = 6;
constexpr std::uint64_t sweep_eavesdropper = 7;
}  // namespace streams

}  // namespace secharq::rng
