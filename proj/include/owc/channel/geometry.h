#ifndef OWC_CHANNEL_GEOMETRY_H
#define OWC_CHANNEL_GEOMETRY_H

#include <cmath>
#include <optional>
#include <stdexcept>

namespace owc::channel
{

struct Vec3
{
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Vec3 operator+(const Vec3& o) const
    {
        return {x + o.x, y + o.y, z + o.z};
    }

    constexpr Vec3 operator-(const Vec3& o) const
    {
        return {x - o.x, y - o.y, z - o.z};
    }

    constexpr Vec3 operator*(double k) const
    {
        return {x * k, y * k, z * k};
    }

    constexpr Vec3 operator-() const
    {
        return {-x, -y, -z};
    }

    constexpr bool operator==(const Vec3&) const = default;
};

constexpr double
Dot(const Vec3& a, const Vec3& b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3
Cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double
Norm(const Vec3& v)
{
    return std::sqrt(Dot(v, v));
}

inline Vec3
Normalized(const Vec3& v)
{
    const double n = Norm(v);
    return v * (1.0 / n);
}

constexpr Vec3 kDown{0.0, 0.0, -1.0};
constexpr Vec3 kUp{0.0, 0.0, 1.0};

class GeometryError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Diffuse reflecting patch used by the single-bounce path.
struct Reflector
{
    Vec3 point;
    Vec3 normal{kUp};
    double reflectivity{0.8};
};

/**
 * \brief Placement of lamp, receiver dongle, optional reflector and obstacle.
 *
 * Distances in meters. Axes are unit vectors: the lamp's boresight and the
 * dongle's optical axis.
 */
struct LinkGeometry
{
    Vec3 lampPos{0.0, 0.0, 2.5};
    Vec3 donglePos{};
    Vec3 lampAxis{kDown};
    Vec3 dongleAxis{kUp};
    std::optional<Reflector> reflector;
    double obstacleTransmittance{1.0};

    /// \throws GeometryError naming the violated invariant.
    void Validate() const;
};

} // namespace owc::channel

#endif // OWC_CHANNEL_GEOMETRY_H
