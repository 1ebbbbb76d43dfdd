#ifndef OWC_SIM_RNG_H
#define OWC_SIM_RNG_H

#include <cstdint>

namespace owc::sim
{

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t
Mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Seed used by replication \p index of a run seeded with \p seed:
 * Mix64(seed XOR index). Replication 0 therefore does not reuse the raw seed.
 */
constexpr std::uint64_t
ReplicationSeed(std::uint64_t seed, std::uint64_t index)
{
    return Mix64(seed ^ index);
}

/// Well-known stream ids, one per stochastic source.
enum class Stream : std::uint64_t
{
    ChannelNoise = 1,
    MacBackoff = 2,
    Jitter = 3,
    Traffic = 4,
    Safety = 5,
    Wired = 6,
    Test = 99,
};

/**
 * \brief Counter-based pseudo-random stream.
 *
 * The n-th draw is Mix64(key + n * golden) where the key is derived from
 * (seed, stream id). Draws do not depend on any other stream, so adding a
 * consumer on one stream never perturbs another. Only integer arithmetic is
 * involved up to the uniform conversion, which makes the sequence identical
 * across compilers and platforms.
 */
class RngStream
{
  public:
    RngStream(std::uint64_t seed, std::uint64_t streamId);
    RngStream(std::uint64_t seed, Stream stream);

    std::uint64_t NextU64();

    /// Uniform real in [0, 1) with 53 random bits.
    double Uniform();

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t UniformInt(std::uint64_t n);

    bool Bernoulli(double p);

    double Exponential(double mean);

    /// Standard normal via Box-Muller (no cached second variate).
    double Normal();

    std::uint64_t Seed() const
    {
        return m_seed;
    }

    std::uint64_t StreamId() const
    {
        return m_streamId;
    }

    std::uint64_t Counter() const
    {
        return m_counter;
    }

  private:
    std::uint64_t m_seed;
    std::uint64_t m_streamId;
    std::uint64_t m_key;
    std::uint64_t m_counter{0};
};

} // namespace owc::sim

#endif // OWC_SIM_RNG_H
