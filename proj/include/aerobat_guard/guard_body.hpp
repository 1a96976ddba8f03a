// Guard rigid body: six-thruster mixing and Newton-Euler equations of motion.
#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "aerobat_guard/spatial.hpp"

namespace aguard {

using Thrusts = Eigen::Matrix<double, 6, 1>;

struct GuardParams {
    double mass = 0.2;                                  // kg, placeholder
    Mat3 inertia = Vec3(2.0e-3, 2.0e-3, 3.5e-3).asDiagonal();  // kg m^2, placeholder
    double arm_x = 0.15;                                // roll pair f2/f4
    double arm_y = 0.15;                                // pitch pair f1/f3
    double arm_z = 0.25;                                // yaw pair f5/f6 on the long axis
    double f_max = 0.6;                                 // N per thruster
    double gravity = 9.8;

    void validate() const {
        if (!(mass > 0.0)) throw std::domain_error("guard: mass must be positive");
        if (!(arm_x > 0.0 && arm_y > 0.0 && arm_z > 0.0)) throw std::domain_error("guard: arms must be positive");
        if (!(f_max > 0.0)) throw std::domain_error("guard: f_max must be positive");
        if ((inertia - inertia.transpose()).norm() > 1e-12 * inertia.norm()) {
            throw std::domain_error("guard: inertia must be symmetric");
        }
        Eigen::LLT<Mat3> llt(inertia);
        if (llt.info() != Eigen::Success) throw std::domain_error("guard: inertia must be positive definite");
    }
};

/// Thruster forces plus the elastic wrench passed through from the bands.
/// `elastic_force` is in the guard body frame; its z component enters the
/// collective sum.
struct ThrustCommand {
    Thrusts f = Thrusts::Zero();
    Vec3 elastic_force = Vec3::Zero();
    Vec3 elastic_moment = Vec3::Zero();
};

struct BodyWrench {
    double force = 0.0;          // along body z
    Vec3 moment = Vec3::Zero();  // body frame
};

/// Rows: collective, roll, pitch, yaw. Maps the six thrusts to the body wrench.
inline Eigen::Matrix<double, 4, 6> mixing_matrix(const GuardParams& p) {
    Eigen::Matrix<double, 4, 6> m;
    m << 1, 1, 1, 1, 1, 1,
         0, -p.arm_x, 0, p.arm_x, 0, 0,
         -p.arm_y, 0, p.arm_y, 0, 0, 0,
         0, 0, 0, 0, -p.arm_z, p.arm_z;
    return m;
}

inline BodyWrench mix(const ThrustCommand& cmd, const GuardParams& p) {
    const auto& f = cmd.f;
    BodyWrench w;
    w.force = f.sum() + cmd.elastic_force.z();
    w.moment = Vec3(p.arm_x * (f[3] - f[1]), p.arm_y * (f[2] - f[0]), p.arm_z * (f[5] - f[4])) +
               cmd.elastic_moment;
    return w;
}

/// World-frame force of a body-z thrust: R [0, 0, f]^T.
inline Vec3 body_to_world_force(const Mat3& r, double f) { return r.col(2) * f; }

struct GuardState {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Mat3 rotation = Mat3::Identity();
    Vec3 omega = Vec3::Zero();  // body frame
};

struct GuardRate {
    Vec3 position_dot;
    Vec3 velocity_dot;
    Mat3 rotation_dot;
    Vec3 omega_dot;
};

/// p'' = -g z + F / m, R' = R hat(w), J w' = m - w x J w.
inline GuardRate guard_derivative(const GuardState& s, const Vec3& world_force, const Vec3& body_moment,
                                  const GuardParams& p) {
    GuardRate r;
    r.position_dot = s.velocity;
    r.velocity_dot = Vec3(0, 0, -p.gravity) + world_force / p.mass;
    r.rotation_dot = s.rotation * hat(s.omega);
    r.omega_dot = p.inertia.ldlt().solve(body_moment - s.omega.cross(p.inertia * s.omega));
    return r;
}

inline double guard_kinetic_energy(const GuardState& s, const GuardParams& p) {
    return 0.5 * p.mass * s.velocity.squaredNorm() + 0.5 * s.omega.dot(p.inertia * s.omega);
}

/// World-frame angular momentum about the guard's center of mass.
inline Vec3 guard_angular_momentum(const GuardState& s, const GuardParams& p) {
    return s.rotation * (p.inertia * s.omega);
}

}  // namespace aguard
