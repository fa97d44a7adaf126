#pragma once

#include <cstdint>

namespace betaflow::rng {

/// Position in a counter-based random stream.
///
/// Sample i of stream j under master seed s is the pure function
///     fmix64(base(s, j) + (i + 1) * 0x9E3779B97F4A7C15)
/// where fmix64 is the SplitMix64 finalizer and base(s, j) hashes the
/// (seed, stream) pair. Each stream is therefore an ordinary SplitMix64
/// sequence with a derived starting state: full period 2^64 in the counter,
/// and loops over samples can be split across workers without changing any
/// draw. Not cryptographic.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
    std::uint64_t counter = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Next raw 64-bit word; advances key.counter.
std::uint64_t next_u64(StreamKey& key);

/// Uniform double in [0, 1) with 53 random bits; advances key.counter.
double next_u01(StreamKey& key);

/// Uniform double in (0, 1), safe to pass to log(); advances key.counter.
double next_u01_open(StreamKey& key);

/// Stream keyed by (key.master_seed, index), counter reset to 0.
/// Deterministic; distinct indices give non-overlapping streams.
StreamKey substream(const StreamKey& key, std::uint64_t index);

/// Independent root key derived by hashing (master_seed, stream_index, tag).
/// Use this to give separate experiment stages their own substream families
/// so that substream indices never collide across stages.
StreamKey fork(const StreamKey& key, std::uint64_t tag);

}  // namespace betaflow::rng
