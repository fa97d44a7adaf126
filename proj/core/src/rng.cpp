#include "betaflow/rng.hpp"

namespace betaflow::rng {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

// SplitMix64 finalizer (full-avalanche 64-bit mix).
constexpr std::uint64_t fmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_base(std::uint64_t seed, std::uint64_t stream) {
    return fmix64(fmix64(seed + kGolden) ^ (stream * kStreamSalt + kGolden));
}

}  // namespace

std::uint64_t next_u64(StreamKey& key) {
    const std::uint64_t base = stream_base(key.master_seed, key.stream_index);
    ++key.counter;
    return fmix64(base + key.counter * kGolden);
}

double next_u01(StreamKey& key) {
    return static_cast<double>(next_u64(key) >> 11) * 0x1.0p-53;
}

double next_u01_open(StreamKey& key) {
    return (static_cast<double>(next_u64(key) >> 11) + 0.5) * 0x1.0p-53;
}

StreamKey substream(const StreamKey& key, std::uint64_t index) {
    return StreamKey{key.master_seed, index, 0};
}

StreamKey fork(const StreamKey& key, std::uint64_t tag) {
    const std::uint64_t derived =
        fmix64(stream_base(key.master_seed, key.stream_index) ^
               (tag * kGolden + kStreamSalt));
    return StreamKey{derived, 0, 0};
}

}  // namespace betaflow::rng
