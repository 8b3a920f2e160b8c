#pragma once

// Posture-to-rotation composition and the view/projection/window chain.
//
// Conventions (fixed here, tested everywhere):
//  - Points transform as row vectors: screen = world * VM * PM * WM.
//  - A pose rotation holds the camera axes as its COLUMNS in world (ECEF)
//    coordinates, so row-applying it projects a world vector onto the
//    camera axes.
//  - Camera space is right-handed with +X right, +Y forward (the viewing
//    direction), +Z up. At posture (0,0,0) the camera looks north.
//  - Heading is positive clockwise from north (aviation convention) and is
//    therefore applied as a negative rotation about the local up axis. Flip
//    the sign in rotation_from_posture if the opposite convention is needed.

#include <cmath>

#include "flightpath/errors.hpp"
#include "flightpath/geodesy.hpp"
#include "flightpath/linalg.hpp"

namespace flightpath {

struct Posture {
    double heading = 0.0; // degrees, [0, 360)
    double pitch = 0.0;   // degrees, [-90, 90]
    double roll = 0.0;    // degrees, [-180, 180]
};

struct CameraPose {
    Mat3 rotation_lsr; // camera axes in ECEF (columns)
    EcefPoint eye;
};

namespace detail {

inline Mat3 rot_x(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
    return r;
}

inline Mat3 rot_y(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
    return r;
}

inline Mat3 rot_z(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
    return r;
}

} // namespace detail

// Rz(heading) * Ry(pitch) * Rx(roll), heading negated for the clockwise
// convention above.
inline Mat3 rotation_from_posture(const Posture& p) {
    if (!std::isfinite(p.heading) || !std::isfinite(p.pitch) || !std::isfinite(p.roll))
        throw DomainError("posture angles must be finite");
    return detail::rot_z(deg_to_rad(-p.heading)) *
           detail::rot_y(deg_to_rad(p.pitch)) *
           detail::rot_x(deg_to_rad(p.roll));
}

// Posture rotation carried into the world frame through the local basis.
inline Mat3 rotation_in_lsr(const Mat3& rotate, const Mat3& lsr) {
    return rotate * lsr;
}

// Rigid inverse of the camera-to-world transform: row-applying the result
// takes the eye to the origin.
inline Mat4 view_matrix_of(const CameraPose& pose) {
    const Mat3& g = pose.rotation_lsr;
    const Vec3 eye{pose.eye.x, pose.eye.y, pose.eye.z};
    const Vec3 t = -mul_row(eye, g);
    Mat4 vm;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            vm.m[i][j] = g.m[i][j];
    vm.m[3][0] = t.x;
    vm.m[3][1] = t.y;
    vm.m[3][2] = t.z;
    vm.m[3][3] = 1.0;
    return vm;
}

// Inverse of view_matrix_of; row-applying it takes the camera origin to the eye.
inline Mat4 camera_to_world(const CameraPose& pose) {
    const Mat3 gt = pose.rotation_lsr.transposed();
    Mat4 cw;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            cw.m[i][j] = gt.m[i][j];
    cw.m[3][0] = pose.eye.x;
    cw.m[3][1] = pose.eye.y;
    cw.m[3][2] = pose.eye.z;
    cw.m[3][3] = 1.0;
    return cw;
}

struct FixedMatrices {
    Mat4 projection;
    Mat4 window;
};

inline constexpr double kDefaultFovYDeg = 60.0;
inline constexpr double kDefaultAspect = 16.0 / 9.0;
inline constexpr double kDefaultNear = 1.0;
inline constexpr double kDefaultFar = 1e8;
inline constexpr int kDefaultWidthPx = 1920;
inline constexpr int kDefaultHeightPx = 1080;

// Perspective projection along +Y and the viewport map to pixel coordinates
// with the origin at the top-left. Depth normalizes to [0, 1].
inline FixedMatrices make_fixed_pm_wm(double fovy_deg, double aspect, double near_d,
                                      double far_d, int width_px, int height_px) {
    if (!(fovy_deg > 0.0 && fovy_deg < 180.0))
        throw DomainError("field of view must lie in (0, 180) degrees");
    if (!(aspect > 0.0))
        throw DomainError("aspect ratio must be positive");
    if (!(near_d > 0.0) || !(far_d > near_d))
        throw DomainError("require 0 < near < far");
    if (width_px < 1 || height_px < 1)
        throw DomainError("pixel dimensions must be positive");

    const double f = 1.0 / std::tan(deg_to_rad(fovy_deg) / 2.0);
    const double a = (far_d + near_d) / (far_d - near_d);
    const double b = -2.0 * far_d * near_d / (far_d - near_d);

    Mat4 pm;
    pm.m[0][0] = f / aspect; // x -> horizontal clip
    pm.m[2][1] = f;          // z (up) -> vertical clip
    pm.m[1][2] = a;          // y (forward) -> depth
    pm.m[3][2] = b;
    pm.m[1][3] = 1.0;        // w = forward distance

    Mat4 wm;
    wm.m[0][0] = width_px / 2.0;
    wm.m[3][0] = width_px / 2.0;
    wm.m[1][1] = -height_px / 2.0; // pixel y grows downward
    wm.m[3][1] = height_px / 2.0;
    wm.m[2][2] = 0.5;
    wm.m[3][2] = 0.5;
    wm.m[3][3] = 1.0;
    return {pm, wm};
}

inline FixedMatrices make_default_pm_wm() {
    return make_fixed_pm_wm(kDefaultFovYDeg, kDefaultAspect, kDefaultNear, kDefaultFar,
                            kDefaultWidthPx, kDefaultHeightPx);
}

struct ScreenPoint {
    double x_px = 0.0;
    double y_px = 0.0;
    double depth = 0.0; // [0, 1] between the near and far planes
};

// world * VM * PM, perspective divide, then * WM.
inline ScreenPoint world_to_screen(const EcefPoint& p, const Mat4& vm, const Mat4& pm,
                                   const Mat4& wm) {
    const Vec4 view = mul_row({p.x, p.y, p.z, 1.0}, vm);
    const Vec4 clip = mul_row(view, pm);
    if (clip.w <= 1e-12)
        throw ProjectionError("point at or behind the eye plane");
    const Vec4 ndc{clip.x / clip.w, clip.y / clip.w, clip.z / clip.w, 1.0};
    const Vec4 s = mul_row(ndc, wm);
    return {s.x, s.y, s.z};
}

} // namespace flightpath
