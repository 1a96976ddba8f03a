// Rotation and kinematics primitives shared by the dynamics modules.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace aguard {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Thrown when a numerical routine meets a singular or ill-conditioned input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Roll (x), pitch (y), yaw (z) in radians.
struct EulerAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    Vec3 as_vector() const { return {roll, pitch, yaw}; }
    static EulerAngles from_vector(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

inline Mat3 rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return r;
}

inline Mat3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return r;
}

inline Mat3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return r;
}

/// Z-Y-X convention: R = Rz(yaw) * Ry(pitch) * Rx(roll), body to world.
/// Pitch must lie strictly inside (-pi/2, pi/2).
inline Mat3 euler_to_rotation(const EulerAngles& e) {
    if (!std::isfinite(e.roll) || !std::isfinite(e.pitch) || !std::isfinite(e.yaw)) {
        throw std::domain_error("euler_to_rotation: non-finite angle");
    }
    if (std::abs(e.pitch) >= std::numbers::pi / 2) {
        throw std::domain_error("euler_to_rotation: pitch at or beyond +/-pi/2 (gimbal singularity)");
    }
    return rot_z(e.yaw) * rot_y(e.pitch) * rot_x(e.roll);
}

/// Inverse of euler_to_rotation for matrices away from the pitch singularity.
inline EulerAngles rotation_to_euler(const Mat3& r) {
    const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
    return {std::atan2(r(2, 1), r(2, 2)), std::asin(sp), std::atan2(r(1, 0), r(0, 0))};
}

/// Skew matrix with hat(w) * v == w.cross(v).
inline Mat3 hat(const Vec3& w) {
    Mat3 m;
    m << 0, -w.z(), w.y(),
         w.z(), 0, -w.x(),
         -w.y(), w.x(), 0;
    return m;
}

/// Nearest rotation in the Frobenius sense (orthogonal polar factor).
///
/// Meant for repairing integrator drift: the input should be within ~0.1
/// (Frobenius) of SO(3). Rank-deficient input throws.
inline Mat3 reorthonormalize(const Mat3& r) {
    if (!r.allFinite()) throw NumericError("reorthonormalize: non-finite input");
    Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sv = svd.singularValues();
    if (sv.minCoeff() < 1e-6 * std::max(1.0, sv.maxCoeff())) {
        throw NumericError("reorthonormalize: rank-deficient matrix");
    }
    Mat3 q = svd.matrixU() * svd.matrixV().transpose();
    if (q.determinant() < 0) {
        throw NumericError("reorthonormalize: input is closer to a reflection than a rotation");
    }
    // One Newton polar step cleans the last few ulps so that q^T q = I to ~1e-16.
    q = 0.5 * (q + q.inverse().transpose());
    return q;
}

/// Body-to-world quaternion (w, x, y, z) of a rotation matrix.
inline Eigen::Quaterniond rotation_to_quaternion(const Mat3& r) {
    Eigen::Quaterniond q(r);
    q.normalize();
    if (q.w() < 0) q.coeffs() *= -1.0;
    return q;
}

}  // namespace aguard
