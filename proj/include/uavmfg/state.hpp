#pragma once

#include <Eigen/Core>

namespace uavmfg {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Position (m) and velocity (m/s) of one UAV in the plane.
struct UavState {
    Vec2 r = Vec2::Zero();
    Vec2 v = Vec2::Zero();

    /// Stacked state in (r, v) order: (x, y, v_x, v_y).
    Vec4 stacked() const { return {r.x(), r.y(), v.x(), v.y()}; }
    static UavState from_stacked(const Vec4& s) { return {s.head<2>(), s.tail<2>()}; }

    bool finite() const { return r.allFinite() && v.allFinite(); }
};

} // namespace uavmfg
