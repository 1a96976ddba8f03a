// Cascaded position (outer, ground computer) and attitude (inner, flight
// controller) PID loops feeding the thrust allocation.
#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "aerobat_guard/allocation.hpp"
#include "aerobat_guard/guard_body.hpp"
#include "aerobat_guard/pid.hpp"
#include "aerobat_guard/spatial.hpp"

namespace aguard::control {

struct AttitudeSetpoint {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
    double collective = 0.0;  // N, total over the six thrusters
};

struct PositionLoopParams {
    AxisGains x{15.900, 0.300, 31.000};
    AxisGains y{15.900, 0.300, 35.000};
    AxisGains z{36.000, 3.500, 30.000};
    // Converts PID output units to m/s^2 of commanded acceleration.
    double output_scale = 0.1;
    // Bound on each axis' integral contribution, in PID output units.
    double max_i = 10.0;
    double max_tilt = 0.35;          // rad
    double suspended_mass = 0.24;    // guard + Aerobat, kg
    double gravity = 9.8;

    void set_preset(const PositionGainSet& p) {
        x = p.x;
        y = p.y;
        z = p.z;
    }
};

struct AttitudeLoopParams {
    PidGains roll{60.0, 10.0, 12.0, 5.0};
    PidGains pitch{60.0, 10.0, 12.0, 5.0};
    PidGains yaw{20.0, 2.0, 6.0, 2.0};
};

inline double wrap_angle(double a) {
    a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
    if (a < 0) a += 2.0 * std::numbers::pi;
    return a - std::numbers::pi;
}

/// Outer loop: position error to tilt setpoint and collective thrust.
class PositionController {
public:
    explicit PositionController(PositionLoopParams p = {}) : p_(p) {
        auto make = [&](const AxisGains& g) { return Pid(PidGains{g.kp, g.ki, g.kd, p_.max_i}); };
        x_ = make(p_.x);
        y_ = make(p_.y);
        z_ = make(p_.z);
    }

    /// `force_ff` is a world-frame force already acting on the guard that the
    /// thrust need not supply (e.g. an estimated disturbance); zero disables it.
    AttitudeSetpoint step(const Vec3& position, const Vec3& setpoint, double yaw_setpoint, double dt,
                          const Vec3& force_ff = Vec3::Zero()) {
        const Vec3 e = setpoint - position;
        const Vec3 acc(x_.step(e.x(), dt), y_.step(e.y(), dt), z_.step(e.z(), dt));
        return from_acceleration(acc * p_.output_scale, yaw_setpoint, force_ff);
    }

    AttitudeSetpoint from_acceleration(const Vec3& acc, double yaw, const Vec3& force_ff) const {
        const Vec3 f = p_.suspended_mass * (acc + Vec3(0, 0, p_.gravity)) - force_ff;
        const double cy = std::cos(yaw), sy = std::sin(yaw);
        const Vec3 fh(cy * f.x() + sy * f.y(), -sy * f.x() + cy * f.y(), f.z());
        AttitudeSetpoint sp;
        sp.yaw = yaw;
        sp.pitch = std::clamp(std::atan2(fh.x(), std::max(fh.z(), 1e-6)), -p_.max_tilt, p_.max_tilt);
        sp.roll = std::clamp(std::atan2(-fh.y(), std::hypot(fh.x(), fh.z())), -p_.max_tilt, p_.max_tilt);
        sp.collective = std::max(f.norm(), 0.0);
        if (f.z() <= 0.0) sp.collective = 0.0;
        return sp;
    }

    void reset() {
        x_.reset();
        y_.reset();
        z_.reset();
    }

    const PositionLoopParams& params() const { return p_; }

private:
    PositionLoopParams p_;
    Pid x_, y_, z_;
};

/// Inner loop: attitude error to body moment demand, then allocation.
class AttitudeController {
public:
    AttitudeController(AttitudeLoopParams p, GuardParams guard)
        : p_(p), guard_(guard), roll_(p.roll), pitch_(p.pitch), yaw_(p.yaw) {}

    /// `rates` are body angular rates from the IMU; `moment_ff` is a body
    /// moment already acting on the guard.
    Allocation step(const AttitudeSetpoint& sp, const EulerAngles& att, const Vec3& rates, double dt,
                    const Vec3& moment_ff = Vec3::Zero()) {
        const Vec3 alpha(roll_.step(sp.roll - att.roll, -rates.x(), dt),
                         pitch_.step(sp.pitch - att.pitch, -rates.y(), dt),
                         yaw_.step(wrap_angle(sp.yaw - att.yaw), -rates.z(), dt));
        const Vec3 moment = guard_.inertia * alpha - moment_ff;
        return allocate(sp.collective, moment, guard_);
    }

    void reset() {
        roll_.reset();
        pitch_.reset();
        yaw_.reset();
    }

private:
    AttitudeLoopParams p_;
    GuardParams guard_;
    Pid roll_, pitch_, yaw_;
};

/// Both loops stepped together at one rate.
class Cascade {
public:
    Cascade(PositionLoopParams pos, AttitudeLoopParams att, GuardParams guard)
        : outer_(pos), inner_(att, guard) {}

    Allocation step(const Vec3& position, const EulerAngles& att, const Vec3& rates, const Vec3& setpoint,
                    double yaw_setpoint, double dt) {
        const AttitudeSetpoint sp = outer_.step(position, setpoint, yaw_setpoint, dt);
        return inner_.step(sp, att, rates, dt);
    }

    PositionController& outer() { return outer_; }
    AttitudeController& inner() { return inner_; }

private:
    PositionController outer_;
    AttitudeController inner_;
};

}  // namespace aguard::control
