#pragma once

#include <cstdint>
#include <random>

namespace pfloc {

/**
 * @brief Seeded pseudo-random stream with deterministic substreams.
 *
 * A stream is identified by a (master seed, stream index) pair. Both words are
 * fed through std::seed_seq into a 64-bit Mersenne Twister, so the generated
 * sequence is fully specified by the C++ standard and reproducible across
 * platforms. Distinct pairs give distinct generator states.
 *
 * Variates are produced from raw engine bits rather than through
 * <random> distributions, whose algorithms are implementation-defined.
 */
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// Substream `index` of this stream's master seed.
    [[nodiscard]] RandomStream substream(std::uint64_t index) const;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open();

    /// Standard exponential variate.
    double exponential();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// Mixes a seed with an index into a new 64-bit seed (SplitMix64 finalizer).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace pfloc
