#pragma once

#include <vector>

namespace tms::geo {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    bool operator==(const LatLon&) const = default;
};

/// Approximate ground distance in meters (equirectangular projection;
/// adequate at deployment scale, i.e. a few kilometers).
double distance_m(const LatLon& a, const LatLon& b);

/// Distance in meters from point p to the segment a-b.
double point_segment_distance_m(const LatLon& p, const LatLon& a, const LatLon& b);

/// Linear interpolation in degrees; fraction 0 -> a, 1 -> b.
LatLon interpolate(const LatLon& a, const LatLon& b, double fraction);

/// Position after traveling `distance` meters along the polyline, measured
/// from the first point; clamps to the last point past the end.
LatLon position_along(const std::vector<LatLon>& points, double distance);

} // namespace tms::geo
