// Multirate simulation executive.
//
// One base clock drives everything; each loop fires when the integer tick
// count is a multiple of its period:
//   mocap    pose sampled, encoded, sent over the pose link
//   control  ground computer: observer + position loop, command sent
//   attitude flight controller: attitude loop + allocation from IMU data
//   pwm      thrusts latched onto the quantized PWM grid
// Between ticks the plant advances one RK4 step with the latched thrusts.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "aerobat_guard/cascade.hpp"
#include "aerobat_guard/integrator.hpp"
#include "aerobat_guard/metrics.hpp"
#include "aerobat_guard/observer.hpp"
#include "aerobat_guard/plant.hpp"
#include "aerobat_guard/run_log.hpp"
#include "aerobat_guard/scenario.hpp"
#include "aerobat_guard/telemetry.hpp"

namespace aguard {

/// Observer model terms for the guard: pose x1 = [p; euler], g3 = diag(I/m, J^-1).
struct GuardObserverModel {
    GuardParams guard;

    Vec6 g1() const {
        Vec6 g = Vec6::Zero();
        g[2] = -guard.gravity;
        return g;
    }

    /// 6x6 map from thrusts to [linear accel; angular accel] at attitude r.
    estimation::Mat6 g2(const Mat3& r) const {
        const Eigen::Matrix<double, 4, 6> m = mixing_matrix(guard);
        const Mat3 jinv = guard.inertia.inverse();
        estimation::Mat6 out;
        for (int i = 0; i < 6; ++i) {
            out.block<3, 1>(0, i) = r.col(2) * m(0, i) / guard.mass;
            out.block<3, 1>(3, i) = jinv * m.block<3, 1>(1, i);
        }
        return out;
    }

    estimation::Mat6 g3() const {
        estimation::Mat6 out = estimation::Mat6::Zero();
        out.block<3, 3>(0, 0) = Mat3::Identity() / guard.mass;
        out.block<3, 3>(3, 3) = guard.inertia.inverse();
        return out;
    }
};

class Simulator {
public:
    explicit Simulator(Scenario s) : s_(std::move(s)), plant_(s_.plant) {
        s_.validate();
        plant_ = Plant(s_.plant);
    }

    const Scenario& scenario() const { return s_; }
    const Plant& plant() const { return plant_; }

    /// Initial flat state: guard at the configured pose, Aerobat at band rest.
    Eigen::VectorXd initial_state() const {
        PlantState st = plant_.rest_state(s_.initial_position);
        st.guard.rotation = euler_to_rotation(s_.initial_attitude);
        return plant_.pack(st);
    }

    RunLog run() {
        using telemetry::CommandPacket;
        using telemetry::PosePacket;

        const std::int64_t base = s_.base_rate_hz;
        const std::int64_t mocap_every = base / s_.rates.mocap_hz;
        const std::int64_t control_every = base / s_.rates.control_hz;
        const std::int64_t attitude_every = base / s_.rates.attitude_hz;
        const std::int64_t pwm_every = base / s_.rates.pwm_hz;
        const std::int64_t total = s_.total_ticks();
        const double dt = s_.dt();
        const double control_dt = 1.0 / s_.rates.control_hz;
        const double attitude_dt = 1.0 / s_.rates.attitude_hz;
        const GuardParams& gp = s_.plant.guard;
        const double aerobat_mass = s_.plant.aerobat.total_mass();

        std::mt19937_64 rng(s_.seed);
        telemetry::Link<PosePacket> pose_link(s_.pose_link, s_.seed ^ 0x9E3779B97F4A7C15ULL);
        telemetry::Link<CommandPacket> command_link(s_.command_link, s_.seed ^ 0xC2B2AE3D27D4EB4FULL);
        auto noise = [&rng](double sd) {
            if (sd <= 0.0) return 0.0;
            return std::normal_distribution<double>(0.0, sd)(rng);
        };

        const bool ff = s_.observer.enabled && s_.observer.feedforward;
        control::PositionLoopParams pos = s_.position;
        pos.suspended_mass = ff ? gp.mass : gp.mass + aerobat_mass;
        control::PositionController outer(pos);
        control::AttitudeController inner(s_.attitude, gp);

        const GuardObserverModel model{gp};
        const estimation::Mat6 g3 = model.g3();
        const auto gains = estimation::ObserverGains::from_bandwidth(s_.observer.bandwidth, g3.diagonal());

        Eigen::VectorXd x = initial_state();
        PlantState st = plant_.unpack(x);

        estimation::ExtendedState est;
        est.x1 << st.guard.position, rotation_to_euler(st.guard.rotation).as_vector();
        // Nominal hanging load, so feedforward starts near trim.
        est.x3[2] = -aerobat_mass * s_.gravity;

        const double trim = plant_.trim_collective();
        Thrusts desired = Thrusts::Constant(trim / 6.0);
        Thrusts applied = desired;
        for (int i = 0; i < 6; ++i) applied[i] = telemetry::quantize_thrust(desired[i], gp.f_max, s_.pwm_bits);
        bool saturated = false;

        std::optional<PosePacket> pose_rx;
        control::AttitudeSetpoint att_sp{s_.initial_attitude.roll, s_.initial_attitude.pitch,
                                         s_.initial_attitude.yaw, trim};

        RunLog log;
        auto record = [&](double t) {
            const PlantState ps = plant_.unpack(x);
            LogRow r;
            r.t = t;
            r.position = ps.guard.position;
            r.euler = rotation_to_euler(ps.guard.rotation).as_vector();
            r.setpoint = s_.setpoint;
            r.x1_hat = est.x1;
            r.x2_hat = est.x2;
            r.x3_hat = est.x3;
            r.thrust = applied;
            r.saturated = saturated;
            const estimation::Mat6 g2 = model.g2(ps.guard.rotation);
            Eigen::CompleteOrthogonalDecomposition<estimation::Mat6> cod(g2);
            r.inertial = cod.solve(model.g1());
            r.aero = cod.solve(g3 * est.x3);
            r.aerobat_position = ps.aerobat.position;
            log.rows.push_back(r);
        };

        auto orth_error = [&]() {
            const Mat3 r = Eigen::Map<const Mat3>(x.data() + 6);
            return (r.transpose() * r - Mat3::Identity()).norm();
        };

        for (std::int64_t k = 0;; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(base);
            st = plant_.unpack(x);

            if (k % mocap_every == 0) {
                const Vec3 e = rotation_to_euler(st.guard.rotation).as_vector() +
                               Vec3(noise(s_.noise.attitude_std), noise(s_.noise.attitude_std),
                                    noise(s_.noise.attitude_std));
                const Eigen::Quaterniond q = rotation_to_quaternion(euler_to_rotation(EulerAngles::from_vector(e)));
                PosePacket p;
                p.x = static_cast<float>(st.guard.position.x() + noise(s_.noise.position_std));
                p.y = static_cast<float>(st.guard.position.y() + noise(s_.noise.position_std));
                p.z = static_cast<float>(st.guard.position.z() + noise(s_.noise.position_std));
                p.qw = static_cast<float>(q.w());
                p.qx = static_cast<float>(q.x());
                p.qy = static_cast<float>(q.y());
                p.qz = static_cast<float>(q.z());
                const auto wire = telemetry::encode_pose(p);
                pose_link.send(telemetry::decode_pose(wire), t);
                ++log.mocap_samples;
            }
            for (const auto& d : pose_link.poll(t)) {
                pose_rx = d.packet;
                ++log.pose_deliveries;
            }

            if (k % control_every == 0) {
                ++log.control_steps;
                if (pose_rx) {
                    const Vec3 p_meas(pose_rx->x, pose_rx->y, pose_rx->z);
                    Eigen::Quaterniond q(pose_rx->qw, pose_rx->qx, pose_rx->qy, pose_rx->qz);
                    q.normalize();
                    const Mat3 r_meas = q.toRotationMatrix();
                    Vec6 z;
                    z << p_meas, rotation_to_euler(r_meas).as_vector();
                    if (s_.observer.enabled) {
                        estimation::ModelTerms m;
                        m.g1 = model.g1();
                        m.g2u = model.g2(r_meas) * applied;
                        m.g3 = g3;
                        est = estimation::observer_step(est, z, m, gains, control_dt);
                    } else {
                        est.x1 = z;
                    }
                    if (s_.mode == ControlMode::Cascade) {
                        const Vec3 f_ff = ff ? Vec3(est.x3.head<3>()) : Vec3::Zero();
                        const control::AttitudeSetpoint sp =
                            outer.step(p_meas, s_.setpoint, s_.yaw_setpoint, control_dt, f_ff);
                        CommandPacket c;
                        c.roll = static_cast<float>(sp.roll);
                        c.pitch = static_cast<float>(sp.pitch);
                        c.yaw = static_cast<float>(sp.yaw);
                        for (auto& f : c.thrust) f = static_cast<float>(sp.collective / 6.0);
                        command_link.send(telemetry::decode_command(telemetry::encode_command(c)), t);
                    }
                }
            }
            for (const auto& d : command_link.poll(t)) {
                const CommandPacket& c = d.packet;
                att_sp.roll = c.roll;
                att_sp.pitch = c.pitch;
                att_sp.yaw = c.yaw;
                att_sp.collective = 0.0;
                for (float f : c.thrust) att_sp.collective += f;
            }

            if (k % attitude_every == 0) {
                if (s_.mode == ControlMode::Cascade) {
                    const Vec3 e = rotation_to_euler(st.guard.rotation).as_vector() +
                                   Vec3(noise(s_.noise.attitude_std), noise(s_.noise.attitude_std),
                                        noise(s_.noise.attitude_std));
                    const Vec3 w = st.guard.omega +
                                   Vec3(noise(s_.noise.rate_std), noise(s_.noise.rate_std), noise(s_.noise.rate_std));
                    const control::Allocation a = inner.step(att_sp, EulerAngles::from_vector(e), w, attitude_dt);
                    desired = a.f;
                    saturated = a.saturated;
                } else {
                    desired = Thrusts::Constant(trim / 6.0);
                    saturated = false;
                }
            }

            if (k % pwm_every == 0) {
                for (int i = 0; i < 6; ++i) applied[i] = telemetry::quantize_thrust(desired[i], gp.f_max, s_.pwm_bits);
            }

            if (k % s_.log_decimation == 0) record(t);
            log.max_orthonormality_error = std::max(log.max_orthonormality_error, orth_error());
            if (k >= total) break;

            try {
                x = rk4_step([&](double tt, const Eigen::VectorXd& xx) { return plant_.derivative(tt, xx, applied); },
                             t, x, dt);
                log.max_orthonormality_error = std::max(log.max_orthonormality_error, orth_error());
                plant_.project(x);
            } catch (const IntegrationError&) {
                log.diverged = true;
                log.halt_reason = fmt::format("non-finite state at t={}", t);
                log.ticks = k;
                return log;
            } catch (const NumericError& e) {
                log.diverged = true;
                log.halt_reason = fmt::format("numeric failure at t={}: {}", t, e.what());
                log.ticks = k;
                return log;
            }
            const double norm = x.head<Plant::kGuardDim + Plant::kAerobatDim>().lpNorm<Eigen::Infinity>();
            if (!(norm <= s_.divergence_bound)) {
                log.diverged = true;
                log.halt_reason = fmt::format("state norm {} exceeded bound {} at t={}", norm, s_.divergence_bound,
                                              static_cast<double>(k + 1) / static_cast<double>(base));
                log.ticks = k + 1;
                record(static_cast<double>(k + 1) / static_cast<double>(base));
                return log;
            }
        }
        log.ticks = total;
        return log;
    }

private:
    Scenario s_;
    Plant plant_;
};

inline RunLog run(const Scenario& s) { return Simulator(s).run(); }

/// Metrics of a run log's guard position against the scenario setpoint.
/// `scale` converts log metres into report units (100 for centimetres).
inline metrics::MetricsReport analyze_log(const RunLog& log, const Vec3& setpoint, double scale = 1.0,
                                          std::string label = {}) {
    std::vector<double> xs, ys, zs;
    for (const auto& r : log.rows) {
        xs.push_back(r.position.x());
        ys.push_back(r.position.y());
        zs.push_back(r.position.z());
    }
    return metrics::analyze_series(xs, ys, zs, {setpoint.x(), setpoint.y(), setpoint.z()}, scale, std::move(label));
}

}  // namespace aguard
