#ifndef OWC_SIM_SIM_TIME_H
#define OWC_SIM_SIM_TIME_H

#include <compare>
#include <cstdint>
#include <limits>

namespace owc::sim
{

/**
 * \brief Virtual time as an integer count of nanoseconds.
 *
 * Durations and instants share this type. Instants are never negative; the
 * kernel enforces that on scheduling.
 */
class SimTime
{
  public:
    constexpr SimTime() = default;

    constexpr explicit SimTime(std::int64_t ticks)
        : m_ticks(ticks)
    {
    }

    constexpr std::int64_t Ticks() const
    {
        return m_ticks;
    }

    constexpr double Seconds() const
    {
        return static_cast<double>(m_ticks) * 1e-9;
    }

    constexpr double MilliSeconds() const
    {
        return static_cast<double>(m_ticks) * 1e-6;
    }

    static constexpr SimTime Max()
    {
        return SimTime(std::numeric_limits<std::int64_t>::max());
    }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime& operator+=(SimTime other)
    {
        m_ticks += other.m_ticks;
        return *this;
    }

    constexpr SimTime& operator-=(SimTime other)
    {
        m_ticks -= other.m_ticks;
        return *this;
    }

    friend constexpr SimTime operator+(SimTime a, SimTime b)
    {
        return SimTime(a.m_ticks + b.m_ticks);
    }

    friend constexpr SimTime operator-(SimTime a, SimTime b)
    {
        return SimTime(a.m_ticks - b.m_ticks);
    }

    friend constexpr SimTime operator*(SimTime a, std::int64_t k)
    {
        return SimTime(a.m_ticks * k);
    }

    friend constexpr SimTime operator*(std::int64_t k, SimTime a)
    {
        return SimTime(a.m_ticks * k);
    }

  private:
    std::int64_t m_ticks{0};
};

constexpr SimTime
NanoSeconds(std::int64_t ns)
{
    return SimTime(ns);
}

constexpr SimTime
MicroSeconds(std::int64_t us)
{
    return SimTime(us * 1000);
}

constexpr SimTime
MilliSeconds(std::int64_t ms)
{
    return SimTime(ms * 1000000);
}

/// Rounds to the nearest nanosecond.
constexpr SimTime
Seconds(double s)
{
    const double ns = s * 1e9;
    return SimTime(static_cast<std::int64_t>(ns < 0 ? ns - 0.5 : ns + 0.5));
}

} // namespace owc::sim

#endif // OWC_SIM_SIM_TIME_H
