// Reduced-order Aerobat model suspended in the guard by elastic bands.
//
// Mass model: one rigid body (point mass plus rotational inertia) and two
// symmetric wing point masses. Underactuated coordinates are the body
// position (world frame) and two attitude angles alpha3 (about x) and alpha4
// (about y), R_A = Rx(alpha3) Ry(alpha4). Wing joints (proximal flap, distal
// fold) follow a prescribed gait and are the actuated coordinates.
//
// The wing joint vector of the gait is unrelated to the Fourier circulation
// coefficients of the aero module even though both are commonly written a.
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "aerobat_guard/guard_body.hpp"
#include "aerobat_guard/spatial.hpp"

namespace aguard::rom {

using Vec2 = Eigen::Vector2d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat52 = Eigen::Matrix<double, 5, 2>;
using Mat35 = Eigen::Matrix<double, 3, 5>;

// ---------------------------------------------------------------------------
// Gait

struct GaitParams {
    double frequency = 8.0;          // Hz
    double amplitude = 0.5;          // proximal flap amplitude, rad
    double distal_amplitude = 0.4;   // fold amplitude, rad
    double phase = 0.0;              // distal lead over proximal, rad
};

struct GaitSample {
    Vec2 a = Vec2::Zero();
    Vec2 a_dot = Vec2::Zero();
    Vec2 a_ddot = Vec2::Zero();
};

/// Sinusoidal joint trajectories: proximal A sin(wt), distal Ad sin(wt + phase).
inline GaitSample wing_gait(double t, const GaitParams& g) {
    if (!(g.frequency > 0.0)) throw std::domain_error("wing_gait: frequency must be positive");
    const double w = 2.0 * std::numbers::pi * g.frequency;
    const std::array<double, 2> amp{g.amplitude, g.distal_amplitude};
    const std::array<double, 2> ph{0.0, g.phase};
    GaitSample s;
    for (int j = 0; j < 2; ++j) {
        const double arg = w * t + ph[j];
        s.a[j] = amp[j] * std::sin(arg);
        s.a_dot[j] = amp[j] * w * std::cos(arg);
        s.a_ddot[j] = -amp[j] * w * w * std::sin(arg);
    }
    return s;
}

inline GaitSample wing_gait(double t, double frequency, double amplitude) {
    return wing_gait(t, GaitParams{frequency, amplitude, amplitude, 0.0});
}

// ---------------------------------------------------------------------------
// Elastic coupling

struct ElasticParams {
    double stiffness = 20.0;       // N/m, total over the four bands
    double aerobat_mass = 0.040;   // kg
    double gravity = 9.8;
};

/// V = 1/2 K (pG - pA)^T (pG - pA) + mA g (pG_z + (R pA)_z).
inline double elastic_potential(const Vec3& p_guard, const Vec3& p_aerobat, const Mat3& r_aerobat,
                                const ElasticParams& e) {
    const Vec3 d = p_guard - p_aerobat;
    return 0.5 * e.stiffness * d.squaredNorm() +
           e.aerobat_mass * e.gravity * (p_guard.z() + (r_aerobat * p_aerobat).z());
}

/// Four zero-rest-length bands from guard-frame anchors to Aerobat body anchors.
/// Each band carries a quarter of the total stiffness.
struct BandGeometry {
    std::array<Vec3, 4> guard_anchors{Vec3(0.15, 0.15, 0.0), Vec3(-0.15, 0.15, 0.0), Vec3(-0.15, -0.15, 0.0),
                                      Vec3(0.15, -0.15, 0.0)};
    std::array<Vec3, 4> body_anchors{Vec3(0.02, 0.02, 0.0), Vec3(-0.02, 0.02, 0.0), Vec3(-0.02, -0.02, 0.0),
                                     Vec3(0.02, -0.02, 0.0)};
};

struct ElasticWrench {
    Vec3 force = Vec3::Zero();   // on the guard, world frame
    Vec3 moment = Vec3::Zero();  // on the guard about its CoM, guard body frame
};

inline double band_potential(const Vec3& p_guard, const Mat3& r_guard, const Vec3& p_aerobat,
                             const Mat3& r_aerobat, double stiffness, const BandGeometry& bands) {
    double v = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Vec3 d = p_guard + r_guard * bands.guard_anchors[k] - p_aerobat - r_aerobat * bands.body_anchors[k];
        v += d.squaredNorm();
    }
    return 0.125 * stiffness * v;
}

inline ElasticWrench elastic_wrench(const Vec3& p_guard, const Mat3& r_guard, const Vec3& p_aerobat,
                                    const Mat3& r_aerobat, double stiffness, const BandGeometry& bands) {
    ElasticWrench w;
    Vec3 moment_world = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const Vec3 arm = r_guard * bands.guard_anchors[k];
        const Vec3 d = p_guard + arm - p_aerobat - r_aerobat * bands.body_anchors[k];
        const Vec3 f = -0.25 * stiffness * d;
        w.force += f;
        moment_world += arm.cross(f);
    }
    w.moment = r_guard.transpose() * moment_world;
    return w;
}

/// Suspension direction R_A^G(q_A) [0, 0, 1]^T for q_A = (alpha3, alpha4).
inline Vec3 aerobat_kinematics(const Vec2& q) { return rot_x(q[0]) * rot_y(q[1]) * Vec3::UnitZ(); }

// ---------------------------------------------------------------------------
// Partitioned dynamics

struct PartitionedDynamics {
    Mat5 d_u = Mat5::Identity();
    Mat52 d_ua = Mat52::Zero();
    Vec5 h_u = Vec5::Zero();
};

/// [p_A''; q_A''] = -D_u^{-1} (D_ua a'' - H_u + J^T y).
///
/// H_u holds the non-aerodynamic generalized forces acting on the body
/// (gravity, bands, and the negated velocity-product terms). y stacks the
/// per-strip loads the wing exerts on the air, i.e. the negated aerodynamic
/// force on the wing, and J stacks the matching 3x5 strip Jacobians.
inline Vec5 aerobat_accel(const PartitionedDynamics& dyn, const Vec2& a_ddot, const Eigen::MatrixXd& jacobian,
                          const Eigen::VectorXd& y) {
    Eigen::SelfAdjointEigenSolver<Mat5> eig(dyn.d_u, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
        throw NumericError("aerobat_accel: D_u not safely invertible (condition estimate " +
                           std::to_string(lo > 0.0 ? hi / lo : INFINITY) + ")");
    }
    Vec5 rhs = dyn.d_ua * a_ddot - dyn.h_u;
    if (jacobian.size() > 0) rhs += jacobian.transpose() * y;
    return -dyn.d_u.ldlt().solve(rhs);
}

struct AerobatParams {
    double body_mass = 0.030;
    double wing_mass = 0.005;  // each wing
    Vec3 body_inertia{1.5e-5, 1.0e-5, 2.0e-5};
    double wing_radius = 0.07;  // wing point-mass radius at full extension
    double fold_depth = 0.25;   // span shrink factor at 90 deg fold
    double stiffness = 20.0;
    double gravity = 9.8;
    BandGeometry bands{};

    double total_mass() const { return body_mass + 2.0 * wing_mass; }
    ElasticParams elastic() const { return {stiffness, total_mass(), gravity}; }

    void validate() const {
        if (!(body_mass > 0.0 && wing_mass >= 0.0)) throw std::domain_error("aerobat: masses must be positive");
        if (!(body_inertia.minCoeff() > 0.0)) throw std::domain_error("aerobat: body inertia must be positive");
        if (!(stiffness > 0.0)) throw std::domain_error("aerobat: band stiffness must be positive");
        if (!(fold_depth >= 0.0 && fold_depth < 0.5)) throw std::domain_error("aerobat: fold_depth must be in [0, 0.5)");
    }
};

/// Absolute (world-frame) Aerobat coordinates and rates.
struct AerobatState {
    Vec3 position = Vec3::Zero();
    Vec2 angles = Vec2::Zero();
    Vec3 velocity = Vec3::Zero();
    Vec2 angle_rates = Vec2::Zero();

    Vec5 q() const { return (Vec5() << position, angles).finished(); }
    Vec5 q_dot() const { return (Vec5() << velocity, angle_rates).finished(); }
};

/// R_A and its first and second partials in (alpha3, alpha4).
struct AttitudePartials {
    Mat3 r;
    std::array<Mat3, 2> d;
    std::array<std::array<Mat3, 2>, 2> dd;

    explicit AttitudePartials(const Vec2& ang) {
        const Mat3 rx = rot_x(ang[0]);
        const Mat3 ry = rot_y(ang[1]);
        const Mat3 hx = hat(Vec3::UnitX());
        const Mat3 hy = hat(Vec3::UnitY());
        r = rx * ry;
        d[0] = rx * hx * ry;
        d[1] = rx * ry * hy;
        dd[0][0] = rx * hx * hx * ry;
        dd[0][1] = rx * hx * ry * hy;
        dd[1][0] = dd[0][1];
        dd[1][1] = rx * ry * hy * hy;
    }

    Mat3 rate(const Vec2& w) const { return d[0] * w[0] + d[1] * w[1]; }
};

/// Body-frame angular velocity is S(alpha4) alpha'.
inline Eigen::Matrix<double, 3, 2> body_rate_map(double alpha4) {
    Eigen::Matrix<double, 3, 2> s;
    s << std::cos(alpha4), 0, 0, 1, std::sin(alpha4), 0;
    return s;
}

/// Wing-frame offset of a point at spanwise distance `radius` on wing `side`
/// (+1 right, -1 left) together with its partials in the two joint angles.
struct WingOffset {
    Vec3 w;
    std::array<Vec3, 2> d;
    std::array<std::array<Vec3, 2>, 2> dd;

    WingOffset(double radius, int side, const Vec2& a, double fold_depth) {
        const double c1 = std::cos(a[0]), s1 = std::sin(a[0]);
        const double sigma = 1.0 - fold_depth * (1.0 - std::cos(a[1]));
        const double dsigma = -fold_depth * std::sin(a[1]);
        const double ddsigma = -fold_depth * std::cos(a[1]);
        const Vec3 e(0.0, side * c1, s1);
        const Vec3 de(0.0, -side * s1, c1);
        const Vec3 dde(0.0, -side * c1, -s1);
        w = radius * sigma * e;
        d[0] = radius * sigma * de;
        d[1] = radius * dsigma * e;
        dd[0][0] = radius * sigma * dde;
        dd[0][1] = radius * dsigma * de;
        dd[1][0] = dd[0][1];
        dd[1][1] = radius * ddsigma * e;
    }

    Vec3 rate(const Vec2& a_dot) const { return d[0] * a_dot[0] + d[1] * a_dot[1]; }
};

/// Oriented span axis of a wing (chord x span points to the lift side), wing frame.
inline Vec3 span_axis(int side, double flap) {
    return side > 0 ? Vec3(0.0, std::cos(flap), std::sin(flap)) : Vec3(0.0, std::cos(flap), -std::sin(flap));
}

class AerobatModel {
public:
    explicit AerobatModel(AerobatParams p = {}) : p_(std::move(p)) { p_.validate(); }

    const AerobatParams& params() const { return p_; }

    /// D_u, D_ua and H_u at the given configuration, gait and guard pose.
    PartitionedDynamics partition(const AerobatState& s, const GaitSample& gait, const GuardState& guard) const {
        const AttitudePartials att(s.angles);
        PartitionedDynamics dyn;
        dyn.d_u.setZero();
        dyn.d_ua.setZero();
        Vec5 bias = Vec5::Zero();
        Vec5 q_forces = Vec5::Zero();

        const Vec3 down(0.0, 0.0, -p_.gravity);

        // Body point mass.
        dyn.d_u.topLeftCorner<3, 3>() += p_.body_mass * Mat3::Identity();
        q_forces.head<3>() += p_.body_mass * down;

        // Wing point masses.
        for (int side : {1, -1}) {
            const WingOffset wo(p_.wing_radius, side, gait.a, p_.fold_depth);
            Mat35 ju;
            ju.leftCols<3>().setIdentity();
            ju.col(3) = att.d[0] * wo.w;
            ju.col(4) = att.d[1] * wo.w;
            Eigen::Matrix<double, 3, 2> ja;
            ja.col(0) = att.r * wo.d[0];
            ja.col(1) = att.r * wo.d[1];

            Vec3 h = Vec3::Zero();
            for (int i = 0; i < 2; ++i) {
                for (int k = 0; k < 2; ++k) {
                    h += att.dd[i][k] * wo.w * (s.angle_rates[i] * s.angle_rates[k]);
                    h += att.r * wo.dd[i][k] * (gait.a_dot[i] * gait.a_dot[k]);
                }
            }
            h += 2.0 * att.rate(s.angle_rates) * wo.rate(gait.a_dot);

            dyn.d_u += p_.wing_mass * ju.transpose() * ju;
            dyn.d_ua += p_.wing_mass * ju.transpose() * ja;
            bias += p_.wing_mass * ju.transpose() * h;
            q_forces += p_.wing_mass * ju.transpose() * down;
        }

        // Body rotational inertia.
        const Eigen::Matrix<double, 3, 2> sm = body_rate_map(s.angles[1]);
        Eigen::Matrix<double, 3, 2> sm_dot;
        sm_dot << -std::sin(s.angles[1]), 0, 0, 0, std::cos(s.angles[1]), 0;
        sm_dot *= s.angle_rates[1];
        const Mat3 ib = p_.body_inertia.asDiagonal();
        const Vec3 wb = sm * s.angle_rates;
        dyn.d_u.bottomRightCorner<2, 2>() += sm.transpose() * ib * sm;
        bias.tail<2>() += sm.transpose() * (ib * sm_dot * s.angle_rates + wb.cross(ib * wb));

        // Bands.
        const double kq = 0.25 * p_.stiffness;
        for (int k = 0; k < 4; ++k) {
            const Vec3 d = guard.position + guard.rotation * p_.bands.guard_anchors[k] - s.position -
                           att.r * p_.bands.body_anchors[k];
            q_forces.head<3>() += kq * d;
            q_forces[3] += kq * d.dot(att.d[0] * p_.bands.body_anchors[k]);
            q_forces[4] += kq * d.dot(att.d[1] * p_.bands.body_anchors[k]);
        }

        dyn.h_u = q_forces - bias;
        return dyn;
    }

    double kinetic_energy(const AerobatState& s, const GaitSample& gait) const {
        const AttitudePartials att(s.angles);
        double t = 0.5 * p_.body_mass * s.velocity.squaredNorm();
        for (int side : {1, -1}) {
            const WingOffset wo(p_.wing_radius, side, gait.a, p_.fold_depth);
            const Vec3 v = s.velocity + att.rate(s.angle_rates) * wo.w + att.r * wo.rate(gait.a_dot);
            t += 0.5 * p_.wing_mass * v.squaredNorm();
        }
        const Vec3 wb = body_rate_map(s.angles[1]) * s.angle_rates;
        t += 0.5 * wb.dot(p_.body_inertia.cwiseProduct(wb));
        return t;
    }

    double gravity_potential(const AerobatState& s, const GaitSample& gait) const {
        const Mat3 r = attitude(s.angles);
        double z = p_.body_mass * s.position.z();
        for (int side : {1, -1}) {
            const WingOffset wo(p_.wing_radius, side, gait.a, p_.fold_depth);
            z += p_.wing_mass * (s.position + r * wo.w).z();
        }
        return p_.gravity * z;
    }

    double band_energy(const AerobatState& s, const GuardState& guard) const {
        return band_potential(guard.position, guard.rotation, s.position, attitude(s.angles), p_.stiffness, p_.bands);
    }

    ElasticWrench wrench_on_guard(const AerobatState& s, const GuardState& guard) const {
        return elastic_wrench(guard.position, guard.rotation, s.position, attitude(s.angles), p_.stiffness, p_.bands);
    }

    static Mat3 attitude(const Vec2& angles) { return rot_x(angles[0]) * rot_y(angles[1]); }

    /// World position of the point at spanwise distance `station` on wing `side`.
    Vec3 strip_position(const Vec5& q, const Vec2& a, int side, double station) const {
        const WingOffset wo(station, side, a, p_.fold_depth);
        return q.head<3>() + attitude(q.tail<2>()) * wo.w;
    }

    Vec3 strip_velocity(const AerobatState& s, const GaitSample& gait, int side, double station) const {
        const AttitudePartials att(s.angles);
        const WingOffset wo(station, side, gait.a, p_.fold_depth);
        return s.velocity + att.rate(s.angle_rates) * wo.w + att.r * wo.rate(gait.a_dot);
    }

    /// d(strip position)/d(q_u) by central differences.
    Mat35 strip_jacobian(const Vec5& q, const Vec2& a, int side, double station, double h = 1e-6) const {
        Mat35 j;
        for (int c = 0; c < 5; ++c) {
            Vec5 qp = q, qm = q;
            qp[c] += h;
            qm[c] -= h;
            j.col(c) = (strip_position(qp, a, side, station) - strip_position(qm, a, side, station)) / (2.0 * h);
        }
        return j;
    }

private:
    AerobatParams p_;
};

}  // namespace aguard::rom
