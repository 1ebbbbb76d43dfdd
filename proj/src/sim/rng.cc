#include "owc/sim/rng.h"

#include <cmath>
#include <numbers>

namespace owc::sim
{

namespace
{
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
__extension__ typedef unsigned __int128 U128;
} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t streamId)
    : m_seed(seed),
      m_streamId(streamId),
      m_key(Mix64(seed ^ Mix64(streamId * kGolden + 0x632BE59BD9B4E019ULL)))
{
}

RngStream::RngStream(std::uint64_t seed, Stream stream)
    : RngStream(seed, static_cast<std::uint64_t>(stream))
{
}

std::uint64_t
RngStream::NextU64()
{
    ++m_counter;
    return Mix64(m_key + m_counter * kGolden);
}

double
RngStream::Uniform()
{
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t
RngStream::UniformInt(std::uint64_t n)
{
    const U128 wide = static_cast<U128>(NextU64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
}

bool
RngStream::Bernoulli(double p)
{
    if (p <= 0.0)
    {
        return false;
    }
    if (p >= 1.0)
    {
        return true;
    }
    return Uniform() < p;
}

double
RngStream::Exponential(double mean)
{
    // 1 - U lies in (0, 1], so the log is finite.
    return -mean * std::log(1.0 - Uniform());
}

double
RngStream::Normal()
{
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace owc::sim
