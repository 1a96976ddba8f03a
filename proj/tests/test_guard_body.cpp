#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "aerobat_guard/guard_body.hpp"
#include "aerobat_guard/integrator.hpp"

using namespace aguard;
using std::numbers::pi;

namespace {

ThrustCommand thrusts(std::initializer_list<double> f) {
    ThrustCommand c;
    int i = 0;
    for (double v : f) c.f[i++] = v;
    return c;
}

// Guard state packed as (p, v, R row-major, w) for the generic RK4 stepper.
Eigen::VectorXd pack(const GuardState& s) {
    Eigen::VectorXd x(18);
    x << s.position, s.velocity, Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Mat3(s.rotation.transpose()).data()),
        s.omega;
    return x;
}

GuardState unpack(const Eigen::VectorXd& x) {
    GuardState s;
    s.position = x.segment<3>(0);
    s.velocity = x.segment<3>(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.rotation(i, j) = x[6 + 3 * i + j];
    s.omega = x.segment<3>(15);
    return s;
}

Eigen::VectorXd free_rate(const Eigen::VectorXd& x, const GuardParams& p) {
    const GuardRate r = guard_derivative(unpack(x), Vec3::Zero(), Vec3::Zero(), p);
    GuardState d;
    d.position = r.position_dot;
    d.velocity = r.velocity_dot;
    d.rotation = r.rotation_dot;
    d.omega = r.omega_dot;
    return pack(d);
}

}  // namespace

TEST(Mix, SymmetricThrust) {
    const BodyWrench w = mix(thrusts({1, 1, 1, 1, 1, 1}), GuardParams{});
    EXPECT_DOUBLE_EQ(w.force, 6.0);
    EXPECT_EQ(w.moment, Vec3::Zero());
}

TEST(Mix, PitchPair) {
    GuardParams p;
    p.arm_y = 0.3;
    const BodyWrench w = mix(thrusts({1, 0, 2, 0, 0, 0}), p);
    EXPECT_NEAR(w.moment.y(), 0.3, 1e-15);
    EXPECT_EQ(w.moment.x(), 0.0);
    EXPECT_EQ(w.moment.z(), 0.0);
}

TEST(Mix, ZeroCommand) {
    const BodyWrench w = mix(ThrustCommand{}, GuardParams{});
    EXPECT_EQ(w.force, 0.0);
    EXPECT_EQ(w.moment, Vec3::Zero());
}

TEST(Mix, ElasticPassthrough) {
    ThrustCommand c;
    c.elastic_force = Vec3(0.3, -0.2, 0.5);
    c.elastic_moment = Vec3(0.01, 0.02, 0.03);
    const BodyWrench w = mix(c, GuardParams{});
    EXPECT_DOUBLE_EQ(w.force, 0.5);
    EXPECT_EQ(w.moment, c.elastic_moment);
}

TEST(Mix, MatchesMixingMatrix) {
    const GuardParams p;
    const auto m = mixing_matrix(p);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, p.f_max);
    for (int i = 0; i < 100; ++i) {
        ThrustCommand c;
        for (int k = 0; k < 6; ++k) c.f[k] = u(rng);
        const BodyWrench w = mix(c, p);
        const Eigen::Vector4d v = m * c.f;
        EXPECT_NEAR(w.force, v[0], 1e-14);
        EXPECT_LT((w.moment - v.tail<3>()).norm(), 1e-14);
    }
}

TEST(Mix, Linear) {
    const GuardParams p;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 0.3);
    for (int i = 0; i < 100; ++i) {
        ThrustCommand a, b, ab;
        for (int k = 0; k < 6; ++k) {
            a.f[k] = u(rng);
            b.f[k] = u(rng);
        }
        const double alpha = 0.7, beta = 1.3;
        ab.f = alpha * a.f + beta * b.f;
        const BodyWrench wa = mix(a, p), wb = mix(b, p), wab = mix(ab, p);
        EXPECT_NEAR(wab.force, alpha * wa.force + beta * wb.force, 1e-14);
        EXPECT_LT((wab.moment - (alpha * wa.moment + beta * wb.moment)).norm(), 1e-14);
    }
}

TEST(Mix, PairSwapsNegateMoments) {
    const GuardParams p;
    const ThrustCommand c = thrusts({0.1, 0.2, 0.3, 0.4, 0.5, 0.25});
    const BodyWrench w = mix(c, p);
    const std::array<std::array<int, 3>, 3> swaps{{{1, 3, 0}, {0, 2, 1}, {4, 5, 2}}};
    for (const auto& [i, j, axis] : swaps) {
        ThrustCommand s = c;
        std::swap(s.f[i], s.f[j]);
        const BodyWrench ws = mix(s, p);
        EXPECT_DOUBLE_EQ(ws.force, w.force);
        for (int k = 0; k < 3; ++k) {
            if (k == axis) {
                EXPECT_NEAR(ws.moment[k], -w.moment[k], 1e-15);
            } else {
                EXPECT_EQ(ws.moment[k], w.moment[k]);
            }
        }
    }
}

TEST(BodyToWorld, Identity) { EXPECT_EQ(body_to_world_force(Mat3::Identity(), 5.0), Vec3(0, 0, 5)); }

TEST(BodyToWorld, QuarterRollKeepsNorm) {
    const Vec3 f = body_to_world_force(euler_to_rotation({pi / 2, 0, 0}), 1.0);
    EXPECT_NEAR(f.norm(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(f.y()), 1.0, 1e-15);
    EXPECT_NEAR(f.y(), -1.0, 1e-15);
}

TEST(BodyToWorld, ThirdColumn) {
    const Mat3 r = euler_to_rotation({0.1, 0.2, 0.3});
    EXPECT_LT((body_to_world_force(r, 2.0) - 2.0 * r.col(2)).norm(), 1e-15);
}

TEST(GuardDerivative, HoverEquilibrium) {
    const GuardParams p;
    const GuardRate r = guard_derivative(GuardState{}, Vec3(0, 0, p.mass * p.gravity), Vec3::Zero(), p);
    EXPECT_LT(r.velocity_dot.norm(), 1e-15);
    EXPECT_EQ(r.omega_dot, Vec3::Zero());
}

TEST(GuardDerivative, FreeFall) {
    const GuardRate r = guard_derivative(GuardState{}, Vec3::Zero(), Vec3::Zero(), GuardParams{});
    EXPECT_EQ(r.velocity_dot, Vec3(0, 0, -9.8));
    EXPECT_EQ(r.rotation_dot, Mat3::Zero());
}

TEST(GuardDerivative, GyroscopicTerm) {
    GuardParams p;
    p.inertia = Vec3(1, 2, 3).asDiagonal();
    GuardState s;
    s.omega = Vec3(1, 1, 0);
    // J w = (1, 2, 0); w x J w = (0, 0, 1); w' = -J^-1 (0, 0, 1) = (0, 0, -1/3).
    const GuardRate r = guard_derivative(s, Vec3::Zero(), Vec3::Zero(), p);
    EXPECT_LT((r.omega_dot - Vec3(0, 0, -1.0 / 3.0)).norm(), 1e-15);
}

TEST(GuardDerivative, RotationRate) {
    GuardState s;
    s.rotation = euler_to_rotation({0.2, 0.1, -0.4});
    s.omega = Vec3(0.3, -0.5, 0.7);
    const GuardRate r = guard_derivative(s, Vec3::Zero(), Vec3::Zero(), GuardParams{});
    EXPECT_LT((r.rotation_dot - s.rotation * hat(s.omega)).norm(), 1e-15);
}

TEST(GuardParams, Validation) {
    GuardParams p;
    EXPECT_NO_THROW(p.validate());
    p.mass = 0.0;
    EXPECT_THROW(p.validate(), std::domain_error);
    p = GuardParams{};
    p.inertia(0, 1) = 1.0;
    EXPECT_THROW(p.validate(), std::domain_error);
    p = GuardParams{};
    p.inertia(2, 2) = -1.0;
    EXPECT_THROW(p.validate(), std::domain_error);
    p = GuardParams{};
    p.arm_z = 0.0;
    EXPECT_THROW(p.validate(), std::domain_error);
}

TEST(GuardDynamics, TorqueFreeConservation) {
    GuardParams p;
    p.gravity = 0.0;
    p.inertia << 2.0e-3, 1.0e-4, 0.0, 1.0e-4, 2.5e-3, 0.0, 0.0, 0.0, 3.5e-3;
    GuardState s;
    s.velocity = Vec3(0.1, -0.2, 0.05);
    s.rotation = euler_to_rotation({0.3, -0.2, 1.0});
    s.omega = Vec3(2.0, -1.0, 3.0);
    const double e0 = guard_kinetic_energy(s, p);
    const Vec3 h0 = guard_angular_momentum(s, p);
    const double dt = 1e-4;
    const int steps = 10000;  // 1 s
    Eigen::VectorXd x = pack(s);
    for (int k = 0; k < steps; ++k) {
        x = rk4_step([&](double, const Eigen::VectorXd& xx) { return free_rate(xx, p); }, k * dt, x, dt);
        GuardState g = unpack(x);
        g.rotation = reorthonormalize(g.rotation);
        x = pack(g);
    }
    const GuardState end = unpack(x);
    EXPECT_LT(std::abs(guard_kinetic_energy(end, p) - e0) / e0, 1e-6);
    EXPECT_LT((guard_angular_momentum(end, p) - h0).norm() / h0.norm(), 1e-6);
}
