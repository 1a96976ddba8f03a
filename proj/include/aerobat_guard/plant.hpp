// Coupled guard + Aerobat + wing aerodynamics, packed into one flat state
// vector for the integrator.
//
// Layout: guard p(3) v(3) R(9, column-major) w(3) | Aerobat q(5) q'(5) |
//         right wing aero (3n) | left wing aero (3n)
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "aerobat_guard/aero.hpp"
#include "aerobat_guard/aerobat_rom.hpp"
#include "aerobat_guard/guard_body.hpp"
#include "aerobat_guard/spatial.hpp"

namespace aguard {

struct AeroParams {
    bool enabled = true;
    int strips = 4;
    double semispan = 0.15;  // m
    double chord = 0.05;     // m
    double rho = 1.225;      // kg/m^3
    aero::WagnerCoefficients wagner{};
    aero::MemoryForm form = aero::MemoryForm::Standard;
};

/// Piecewise-constant external load on the guard, active on [start, start + duration).
struct DisturbanceStep {
    double start = 0.0;
    double duration = 0.0;
    Vec3 force = Vec3::Zero();   // world frame
    Vec3 moment = Vec3::Zero();  // guard body frame
};

struct PlantParams {
    GuardParams guard{};
    rom::AerobatParams aerobat{};
    AeroParams aero{};
    rom::GaitParams gait{};
    bool gait_enabled = true;
    std::vector<DisturbanceStep> disturbances{};
};

struct PlantState {
    GuardState guard;
    rom::AerobatState aerobat;
    aero::AeroState right;
    aero::AeroState left;
};

/// Per-evaluation diagnostics (forces the guard sees, aero loads).
struct PlantOutputs {
    rom::ElasticWrench elastic;
    Vec3 aero_force = Vec3::Zero();  // net aerodynamic force on Aerobat, world
    Vec3 disturbance = Vec3::Zero();
};

class Plant {
public:
    static constexpr int kGuardDim = 18;
    static constexpr int kAerobatDim = 10;

    explicit Plant(PlantParams p)
        : p_(std::move(p)),
          rom_(p_.aerobat),
          wing_(aero::BladeGeometry::uniform(p_.aero.strips, p_.aero.semispan, p_.aero.chord), p_.aero.wagner,
                p_.aero.form) {
        p_.guard.validate();
    }

    const PlantParams& params() const { return p_; }
    const rom::AerobatModel& aerobat_model() const { return rom_; }
    const aero::AeroModel& wing_model() const { return wing_; }
    int strips() const { return p_.aero.strips; }
    int dim() const { return kGuardDim + kAerobatDim + 6 * strips(); }

    Eigen::VectorXd pack(const PlantState& s) const {
        Eigen::VectorXd x(dim());
        x.segment<3>(0) = s.guard.position;
        x.segment<3>(3) = s.guard.velocity;
        x.segment<9>(6) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(s.guard.rotation.data());
        x.segment<3>(15) = s.guard.omega;
        x.segment<5>(18) = s.aerobat.q();
        x.segment<5>(23) = s.aerobat.q_dot();
        const int n3 = 3 * strips();
        x.segment(28, n3) = s.right.flatten();
        x.segment(28 + n3, n3) = s.left.flatten();
        return x;
    }

    PlantState unpack(const Eigen::VectorXd& x) const {
        PlantState s;
        s.guard.position = x.segment<3>(0);
        s.guard.velocity = x.segment<3>(3);
        s.guard.rotation = Eigen::Map<const Mat3>(x.data() + 6);
        s.guard.omega = x.segment<3>(15);
        s.aerobat.position = x.segment<3>(18);
        s.aerobat.angles = x.segment<2>(21);
        s.aerobat.velocity = x.segment<3>(23);
        s.aerobat.angle_rates = x.segment<2>(26);
        const int n3 = 3 * strips();
        s.right = aero::AeroState::unflatten(x.segment(28, n3));
        s.left = aero::AeroState::unflatten(x.segment(28 + n3, n3));
        return s;
    }

    /// Hover rest state: guard at `position`, Aerobat hanging at band equilibrium
    /// with wings at the gait's t = 0 pose.
    PlantState rest_state(const Vec3& position) const {
        PlantState s;
        s.guard.position = position;
        s.aerobat.position = position - Vec3(0, 0, rom_.params().total_mass() * rom_.params().gravity /
                                                        rom_.params().stiffness);
        s.right = aero::AeroState::zero(strips());
        s.left = aero::AeroState::zero(strips());
        return s;
    }

    rom::GaitSample gait(double t) const {
        if (!p_.gait_enabled) return {};
        return rom::wing_gait(t, p_.gait);
    }

    /// Thrust that exactly holds the rest state.
    double trim_collective() const { return (p_.guard.mass + rom_.params().total_mass()) * p_.guard.gravity; }

    Eigen::VectorXd derivative(double t, const Eigen::VectorXd& x, const Thrusts& thrusts,
                               PlantOutputs* out = nullptr) const {
        const PlantState s = unpack(x);
        const rom::GaitSample g = gait(t);
        const Mat3& rg = s.guard.rotation;

        // Guard wrench: thrusters, bands, scripted disturbance.
        const rom::ElasticWrench ew = rom_.wrench_on_guard(s.aerobat, s.guard);
        ThrustCommand cmd;
        cmd.f = thrusts;
        cmd.elastic_force = rg.transpose() * ew.force;
        cmd.elastic_moment = ew.moment;
        const BodyWrench bw = mix(cmd, p_.guard);
        Vec3 lateral = cmd.elastic_force;
        lateral.z() = 0.0;
        Vec3 world_force = body_to_world_force(rg, bw.force) + rg * lateral;
        Vec3 body_moment = bw.moment;
        for (const auto& d : p_.disturbances) {
            if (t >= d.start && t < d.start + d.duration) {
                world_force += d.force;
                body_moment += d.moment;
            }
        }
        const GuardRate gr = guard_derivative(s.guard, world_force, body_moment, p_.guard);

        Eigen::VectorXd dx(dim());
        dx.segment<3>(0) = gr.position_dot;
        dx.segment<3>(3) = gr.velocity_dot;
        dx.segment<9>(6) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(gr.rotation_dot.data());
        dx.segment<3>(15) = gr.omega_dot;

        // Aerobat with wing aerodynamics.
        const rom::PartitionedDynamics dyn = rom_.partition(s.aerobat, g, s.guard);
        const int n = strips();
        const int n3 = 3 * n;
        Eigen::MatrixXd jac;
        Eigen::VectorXd loads;
        Vec3 aero_total = Vec3::Zero();
        if (p_.aero.enabled) {
            jac.resize(3 * 2 * n, 5);
            loads.resize(3 * 2 * n);
            const Mat3 ra = rom::AerobatModel::attitude(s.aerobat.angles);
            const rom::Vec5 q = s.aerobat.q();
            const double sigma = 1.0 - p_.aerobat.fold_depth * (1.0 - std::cos(g.a[1]));
            int row = 0;
            for (int side : {1, -1}) {
                const aero::AeroState& st = side > 0 ? s.right : s.left;
                const Vec3 span = ra * rom::span_axis(side, g.a[0]);
                const Vec3 normal = Vec3::UnitX().cross(rom::span_axis(side, g.a[0]));
                const Vec3 normal_w = ra * normal;
                Eigen::VectorXd y1(n);
                std::vector<Vec3> flow(n);
                for (int i = 0; i < n; ++i) {
                    const double station = wing_.geometry().station(i);
                    flow[i] = -rom_.strip_velocity(s.aerobat, g, side, station);
                    y1[i] = flow[i].dot(normal_w);
                }
                const aero::AeroState rate = wing_.rate(st, y1, t);
                dx.segment(28 + (side > 0 ? 0 : n3), n3) = rate.flatten();
                const Eigen::VectorXd gamma = wing_.circulations(st);
                for (int i = 0; i < n; ++i) {
                    const double station = wing_.geometry().station(i);
                    const Vec3 f = aero::strip_force(gamma[i], flow[i], span, wing_.geometry().width(i) * sigma,
                                                     p_.aero.rho);
                    aero_total += f;
                    jac.block<3, 5>(3 * row, 0) = rom_.strip_jacobian(q, g.a, side, station);
                    loads.segment<3>(3 * row) = -f;
                    ++row;
                }
            }
        } else {
            dx.segment(28, 2 * n3).setZero();
        }
        const rom::Vec5 acc = rom::aerobat_accel(dyn, g.a_ddot, jac, loads);
        dx.segment<5>(18) = s.aerobat.q_dot();
        dx.segment<5>(23) = acc;

        if (out) {
            out->elastic = ew;
            out->aero_force = aero_total;
            out->disturbance = world_force - body_to_world_force(rg, bw.force) - rg * lateral;
        }
        return dx;
    }

    /// Re-project the guard rotation block onto SO(3).
    void project(Eigen::VectorXd& x) const {
        Mat3 r = Eigen::Map<const Mat3>(x.data() + 6);
        r = reorthonormalize(r);
        x.segment<9>(6) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(r.data());
    }

    /// Kinetic plus potential energy of the mechanical subsystem.
    double mechanical_energy(double t, const Eigen::VectorXd& x) const {
        const PlantState s = unpack(x);
        const rom::GaitSample g = gait(t);
        return guard_kinetic_energy(s.guard, p_.guard) + p_.guard.mass * p_.guard.gravity * s.guard.position.z() +
               rom_.kinetic_energy(s.aerobat, g) + rom_.gravity_potential(s.aerobat, g) +
               rom_.band_energy(s.aerobat, s.guard);
    }

private:
    PlantParams p_;
    rom::AerobatModel rom_;
    aero::AeroModel wing_;
};

}  // namespace aguard
