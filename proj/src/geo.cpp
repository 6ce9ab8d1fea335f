#include "seltrack/geo.hpp"

#include <cmath>

#include "seltrack/errors.hpp"

namespace seltrack {

double EcefVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double EcefVector::dot(const EcefVector& other) const {
    return x * other.x + y * other.y + z * other.z;
}

EcefVector EcefVector::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw DegenerateInputError("cannot normalize a zero vector");
    }
    return {x / n, y / n, z / n};
}

EcefVector operator+(const EcefVector& a, const EcefVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

EcefVector operator-(const EcefVector& a, const EcefVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

EcefVector operator*(double s, const EcefVector& v) { return {s * v.x, s * v.y, s * v.z}; }

EcefVector geodetic_to_ecef(const GeodeticPosition& p) {
    const double sin_lat = std::sin(p.latitude);
    const double cos_lat = std::cos(p.latitude);
    const double sin_lon = std::sin(p.longitude);
    const double cos_lon = std::cos(p.longitude);

    // Prime-vertical radius of curvature.
    const double n = kWgs84SemiMajorAxisM /
                     std::sqrt(1.0 - kWgs84EccentricitySq * sin_lat * sin_lat);

    return {(n + p.height) * cos_lat * cos_lon,
            (n + p.height) * cos_lat * sin_lon,
            (n * (1.0 - kWgs84EccentricitySq) + p.height) * sin_lat};
}

GeodeticPosition ecef_to_geodetic(const EcefVector& v) {
    if (v.norm() == 0.0) {
        throw DegenerateInputError("geodetic coordinates undefined at the geocenter");
    }

    const double a = kWgs84SemiMajorAxisM;
    const double e2 = kWgs84EccentricitySq;
    const double p = std::hypot(v.x, v.y);

    if (p < 1e-6) {
        // On the polar axis; longitude unconstrained, reported as 0.
        return {std::copysign(kPi / 2.0, v.z), 0.0, std::fabs(v.z) - kWgs84SemiMinorAxisM};
    }

    double lon = std::atan2(v.y, v.x);
    if (lon <= -kPi) {
        lon = kPi;  // keep longitude in (-pi, pi]
    }

    // Fixed-point iteration on latitude, then height from the dominant axis.
    double lat = std::atan2(v.z, p * (1.0 - e2));
    for (int i = 0; i < 50; ++i) {
        const double sin_lat = std::sin(lat);
        const double n = a / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
        const double next = std::atan2(v.z + e2 * n * sin_lat, p);
        const double delta = std::fabs(next - lat);
        lat = next;
        if (delta < 1e-15) {
            break;
        }
    }

    const double sin_lat = std::sin(lat);
    const double cos_lat = std::cos(lat);
    const double n = a / std::sqrt(1.0 - e2 * sin_lat * sin_lat);
    double height;
    if (std::fabs(cos_lat) > std::fabs(sin_lat)) {
        height = p / cos_lat - n;
    } else {
        height = v.z / sin_lat - n * (1.0 - e2);
    }

    return {lat, lon, height};
}

EnuBasis enu_basis(const GeodeticPosition& p) {
    const double sin_lat = std::sin(p.latitude);
    const double cos_lat = std::cos(p.latitude);
    const double sin_lon = std::sin(p.longitude);
    const double cos_lon = std::cos(p.longitude);

    return {{-sin_lon, cos_lon, 0.0},
            {-sin_lat * cos_lon, -sin_lat * sin_lon, cos_lat},
            {cos_lat * cos_lon, cos_lat * sin_lon, sin_lat}};
}

LookAngles look_angles(const EcefVector& receiver, const EcefVector& satellite) {
    const EcefVector d = satellite - receiver;
    if (d.norm() == 0.0) {
        throw DegenerateInputError("look angles undefined for coincident points");
    }

    const EnuBasis basis = enu_basis(ecef_to_geodetic(receiver));
    const EcefVector dir = d.normalized();

    const double e = dir.dot(basis.east);
    const double n = dir.dot(basis.north);
    const double u = dir.dot(basis.up);

    // atan2 keeps the elevation well-conditioned near the zenith, where
    // asin(u) would amplify rounding in u.
    const double elevation = std::atan2(u, std::hypot(e, n));
    double azimuth = std::atan2(e, n);
    if (azimuth < 0.0) {
        azimuth += 2.0 * kPi;
    }
    if (azimuth >= 2.0 * kPi) {
        azimuth = 0.0;
    }
    return {elevation, azimuth};
}

GeometryMatrix geometry_matrix(const EcefVector& receiver,
                               const std::vector<EcefVector>& satellites) {
    if (satellites.empty()) {
        throw DegenerateInputError("geometry matrix needs at least one satellite");
    }

    GeometryMatrix m;
    m.rows.reserve(satellites.size());
    for (const EcefVector& sat : satellites) {
        const EcefVector d = sat - receiver;
        if (d.norm() == 0.0) {
            throw DegenerateInputError("satellite coincident with receiver");
        }
        const EcefVector u = d.normalized();
        m.rows.push_back({u.x, u.y, u.z, 1.0});
    }
    return m;
}

std::array<double, 4> altitude_constraint_row(const EcefVector& receiver) {
    const EcefVector up = receiver.normalized();
    return {-up.x, -up.y, -up.z, 1.0};
}

}  // namespace seltrack
