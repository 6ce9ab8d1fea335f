#pragma once

#include <array>
#include <vector>

namespace seltrack {

// WGS-84 ellipsoid constants
inline constexpr double kWgs84SemiMajorAxisM = 6378137.0;
inline constexpr double kWgs84Flattening = 1.0 / 298.257223563;
inline constexpr double kWgs84SemiMinorAxisM = kWgs84SemiMajorAxisM * (1.0 - kWgs84Flattening);
inline constexpr double kWgs84EccentricitySq = kWgs84Flattening * (2.0 - kWgs84Flattening);

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Position or displacement in the Earth-Centered-Earth-Fixed frame, meters.
struct EcefVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    double dot(const EcefVector& other) const;
    /// Unit vector in the same direction; throws DegenerateInputError on a zero vector.
    EcefVector normalized() const;
};

EcefVector operator+(const EcefVector& a, const EcefVector& b);
EcefVector operator-(const EcefVector& a, const EcefVector& b);
EcefVector operator*(double s, const EcefVector& v);

/// Geodetic coordinates on the WGS-84 ellipsoid.
/// latitude in [-pi/2, pi/2], longitude in (-pi, pi], height in meters.
struct GeodeticPosition {
    double latitude = 0.0;
    double longitude = 0.0;
    double height = 0.0;
};

/// Elevation in [-pi/2, pi/2] and azimuth in [0, 2*pi), receiver-local East-North-Up frame.
struct LookAngles {
    double elevation = 0.0;
    double azimuth = 0.0;
};

/// r x 4 navigation geometry matrix. Each row is the unit receiver->satellite
/// direction (u, v, w) followed by a clock column entry of exactly 1.
struct GeometryMatrix {
    std::vector<std::array<double, 4>> rows;

    int r() const { return static_cast<int>(rows.size()); }
};

EcefVector geodetic_to_ecef(const GeodeticPosition& p);

/// Inverse of geodetic_to_ecef (iterative, converged well below 1e-12 rad).
/// Longitude of a point on the polar axis is reported as 0.
/// Throws DegenerateInputError on the zero vector.
GeodeticPosition ecef_to_geodetic(const EcefVector& v);

/// Elevation/azimuth of `satellite` as seen from `receiver`.
/// Throws DegenerateInputError when the points coincide or the receiver is at the geocenter.
LookAngles look_angles(const EcefVector& receiver, const EcefVector& satellite);

/// Geometry matrix rows in input order. Throws DegenerateInputError when
/// `satellites` is empty or contains a satellite coincident with the receiver.
GeometryMatrix geometry_matrix(const EcefVector& receiver,
                               const std::vector<EcefVector>& satellites);

/// Virtual geometry row representing a height pseudo-measurement:
/// (-unit(receiver direction from the geocenter), 1).
std::array<double, 4> altitude_constraint_row(const EcefVector& receiver);

/// Local East-North-Up unit vectors at a geodetic position, expressed in ECEF.
struct EnuBasis {
    EcefVector east;
    EcefVector north;
    EcefVector up;
};

EnuBasis enu_basis(const GeodeticPosition& p);

}  // namespace seltrack
