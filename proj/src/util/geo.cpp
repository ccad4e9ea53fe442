#include "tms/util/geo.hpp"

#include <algorithm>
#include <cmath>

namespace tms::geo {

namespace {

constexpr double kMetersPerDegree = 111320.0;
constexpr double kPi = 3.14159265358979323846;

// Local planar frame centered on `origin`: x east, y north, meters.
struct Planar {
    double x;
    double y;
};

Planar to_planar(const LatLon& p, const LatLon& origin)
{
    const double lat_scale = kMetersPerDegree;
    const double lon_scale = kMetersPerDegree * std::cos(origin.lat * kPi / 180.0);
    return {(p.lon - origin.lon) * lon_scale, (p.lat - origin.lat) * lat_scale};
}

} // namespace

double distance_m(const LatLon& a, const LatLon& b)
{
    const Planar d = to_planar(b, a);
    return std::hypot(d.x, d.y);
}

double point_segment_distance_m(const LatLon& p, const LatLon& a, const LatLon& b)
{
    const Planar pp = to_planar(p, a);
    const Planar bb = to_planar(b, a);
    const double len_sq = bb.x * bb.x + bb.y * bb.y;
    if (len_sq == 0.0) {
        return std::hypot(pp.x, pp.y);
    }
    double t = (pp.x * bb.x + pp.y * bb.y) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(pp.x - t * bb.x, pp.y - t * bb.y);
}

LatLon interpolate(const LatLon& a, const LatLon& b, double fraction)
{
    return {a.lat + (b.lat - a.lat) * fraction, a.lon + (b.lon - a.lon) * fraction};
}

LatLon position_along(const std::vector<LatLon>& points, double distance)
{
    if (points.empty()) {
        return {};
    }
    if (distance <= 0.0) {
        return points.front();
    }
    double remaining = distance;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double seg = distance_m(points[i], points[i + 1]);
        if (remaining <= seg && seg > 0.0) {
            return interpolate(points[i], points[i + 1], remaining / seg);
        }
        remaining -= seg;
    }
    return points.back();
}

} // namespace tms::geo
