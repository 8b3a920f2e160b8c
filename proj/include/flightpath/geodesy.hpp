#pragma once

// WGS-84 ellipsoid model and conversions between geodetic, ECEF and
// local-tangent (east/north/up) frames. Angles cross this API in degrees;
// radians are used only inside the computations.

#include <cmath>

#include "flightpath/errors.hpp"
#include "flightpath/linalg.hpp"

namespace flightpath {

struct Ellipsoid {
    double a;  // semi-major axis, meters
    double f;  // flattening
    double b;  // semi-minor axis, derived
    double e2; // first eccentricity squared, derived

    Ellipsoid(double semi_major, double flattening)
        : a(semi_major), f(flattening), b(semi_major * (1.0 - flattening)),
          e2(2.0 * flattening - flattening * flattening) {
        if (!(a > 0.0))
            throw DomainError("ellipsoid semi-major axis must be positive");
        if (!(f > 0.0 && f < 1.0))
            throw DomainError("ellipsoid flattening must lie in (0, 1)");
    }
};

// WGS-84 defining parameters.
inline const Ellipsoid& wgs84() {
    static const Ellipsoid e(6378137.0, 1.0 / 298.257223563);
    return e;
}

struct GeodeticPoint {
    double lon = 0.0; // degrees, [-180, 180]
    double lat = 0.0; // degrees, [-90, 90]
    double h = 0.0;   // meters above the ellipsoid
};

struct EcefPoint {
    double x = 0.0; // meters
    double y = 0.0;
    double z = 0.0;
};

// Offset in the local tangent frame at some stated origin.
struct LsrVector {
    double u = 0.0;       // meters east
    double v_north = 0.0; // meters north
    double w = 0.0;       // meters up
};

inline void validate(const GeodeticPoint& p) {
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat) || !std::isfinite(p.h))
        throw DomainError("geodetic point has a non-finite component");
    if (p.lon < -180.0 || p.lon > 180.0)
        throw DomainError("longitude outside [-180, 180]");
    if (p.lat < -90.0 || p.lat > 90.0)
        throw DomainError("latitude outside [-90, 90]");
}

// Radius of curvature in the prime vertical, a / sqrt(1 - e^2 sin^2(lat)).
inline double prime_vertical_radius(const Ellipsoid& ell, double lat_deg) {
    if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
        throw DomainError("latitude outside [-90, 90]");
    const double s = std::sin(deg_to_rad(lat_deg));
    return ell.a / std::sqrt(1.0 - ell.e2 * s * s);
}

inline EcefPoint geodetic_to_ecef(const Ellipsoid& ell, const GeodeticPoint& p) {
    validate(p);
    const double lam = deg_to_rad(p.lon);
    const double phi = deg_to_rad(p.lat);
    const double v = prime_vertical_radius(ell, p.lat);
    const double cphi = std::cos(phi);
    return {(v + p.h) * cphi * std::cos(lam),
            (v + p.h) * cphi * std::sin(lam),
            ((1.0 - ell.e2) * v + p.h) * std::sin(phi)};
}

// Inverse conversion by bounded fixed-point iteration on the latitude.
// Longitude at the poles is reported as 0 (degenerate case convention).
inline GeodeticPoint ecef_to_geodetic(const Ellipsoid& ell, const EcefPoint& pt) {
    const double r = std::sqrt(pt.x * pt.x + pt.y * pt.y + pt.z * pt.z);
    if (r < 1.0)
        throw DomainError("point within 1 m of Earth center");

    const double p = std::hypot(pt.x, pt.y);
    double phi = std::atan2(pt.z, p * (1.0 - ell.e2));
    double v = 0.0, h = 0.0;
    constexpr int max_iter = 50;
    constexpr double tol_rad = 1e-12;
    bool converged = false;
    for (int i = 0; i < max_iter; ++i) {
        const double s = std::sin(phi), c = std::cos(phi);
        v = ell.a / std::sqrt(1.0 - ell.e2 * s * s);
        // robust at the poles, where p/cos(phi) degenerates
        h = p * c + pt.z * s - v * (1.0 - ell.e2 * s * s);
        const double next = std::atan2(pt.z, p * (1.0 - ell.e2 * v / (v + h)));
        const double delta = std::fabs(next - phi);
        phi = next;
        if (delta < tol_rad) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericError("ecef_to_geodetic failed to converge");

    const double s = std::sin(phi), c = std::cos(phi);
    v = ell.a / std::sqrt(1.0 - ell.e2 * s * s);
    h = p * c + pt.z * s - v * (1.0 - ell.e2 * s * s);
    const double lon = c < 1e-12 ? 0.0 : rad_to_deg(std::atan2(pt.y, pt.x));
    return {lon, rad_to_deg(phi), h};
}

// Local-tangent basis at (lon0, lat0): columns are the east, north and up
// unit vectors expressed in ECEF.
inline Mat3 lsr_basis_at(double lon0_deg, double lat0_deg) {
    if (!(lon0_deg >= -180.0 && lon0_deg <= 180.0))
        throw DomainError("longitude outside [-180, 180]");
    if (!(lat0_deg >= -90.0 && lat0_deg <= 90.0))
        throw DomainError("latitude outside [-90, 90]");
    const double lam = deg_to_rad(lon0_deg);
    const double phi = deg_to_rad(lat0_deg);
    const double sl = std::sin(lam), cl = std::cos(lam);
    const double sp = std::sin(phi), cp = std::cos(phi);
    Mat3 r;
    r.m = {{{-sl, -sp * cl, cp * cl},
            {cl, -sp * sl, cp * sl},
            {0.0, cp, sp}}};
    return r;
}

// ECEF point of a local east/north/up offset from a geodetic origin.
inline EcefPoint lsr_to_ecef(const Ellipsoid& ell, const GeodeticPoint& origin,
                             const LsrVector& d) {
    const EcefPoint o = geodetic_to_ecef(ell, origin);
    const Mat3 basis = lsr_basis_at(origin.lon, origin.lat);
    const Vec3 offset = mul_col(basis, {d.u, d.v_north, d.w});
    return {o.x + offset.x, o.y + offset.y, o.z + offset.z};
}

} // namespace flightpath
