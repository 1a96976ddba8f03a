// Shared set-ups for the harness-level regression and acceptance checks.
#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "aerobat_guard/integrator.hpp"
#include "aerobat_guard/observer.hpp"
#include "aerobat_guard/plant.hpp"
#include "aerobat_guard/simulation.hpp"

namespace fixture {

/// Plant with thrusters and aero off and the wings frozen: the guard and the
/// suspended Aerobat exchange energy only through the bands and gravity.
inline aguard::Plant conservative_plant() {
    aguard::PlantParams p;
    p.aero.enabled = false;
    p.gait_enabled = false;
    return aguard::Plant(p);
}

/// Rest state with a stretched band, a tumbling guard and a swinging body.
inline Eigen::VectorXd perturbed_state(const aguard::Plant& plant) {
    aguard::PlantState s = plant.rest_state(aguard::Vec3(0, 0, 0.2));
    s.guard.rotation = aguard::euler_to_rotation({0.1, -0.05, 0.3});
    s.guard.velocity = aguard::Vec3(0.05, -0.02, 0.1);
    s.guard.omega = aguard::Vec3(0.8, -0.5, 1.2);
    s.aerobat.position += aguard::Vec3(0.01, -0.015, 0.02);
    s.aerobat.angles = aguard::rom::Vec2(0.2, -0.1);
    s.aerobat.angle_rates = aguard::rom::Vec2(1.0, -0.5);
    return plant.pack(s);
}

struct EnergyDrift {
    double max_relative = 0.0;  // max_t |E(t) - E0| / scale
    double per_second = 0.0;    // max_relative / duration
    double scale = 0.0;         // |KE0| + |V_grav0| + V_band0
};

/// Integrates the unforced plant with RK4 plus rotation reprojection.
inline EnergyDrift energy_drift(const aguard::Plant& plant, Eigen::VectorXd x, double dt, double duration) {
    const aguard::Thrusts off = aguard::Thrusts::Zero();
    const long steps = std::lround(duration / dt);
    const double e0 = plant.mechanical_energy(0.0, x);
    const aguard::PlantState s0 = plant.unpack(x);
    const auto& model = plant.aerobat_model();
    const aguard::rom::GaitSample g0 = plant.gait(0.0);
    const auto& gp = plant.params().guard;
    EnergyDrift out;
    out.scale = aguard::guard_kinetic_energy(s0.guard, gp) + model.kinetic_energy(s0.aerobat, g0) +
                std::abs(gp.mass * gp.gravity * s0.guard.position.z()) +
                std::abs(model.gravity_potential(s0.aerobat, g0)) + model.band_energy(s0.aerobat, s0.guard);
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        x = aguard::rk4_step([&](double tt, const Eigen::VectorXd& xx) { return plant.derivative(tt, xx, off); }, t,
                             x, dt);
        plant.project(x);
        out.max_relative =
            std::max(out.max_relative, std::abs(plant.mechanical_energy(t + dt, x) - e0) / out.scale);
    }
    out.per_second = out.max_relative / duration;
    return out;
}

// Truth held stationary by an input that cancels the current x3, so the
// pose measurement is exact and the observer error evolves on its own.
struct HeldTruth {
    aguard::GuardObserverModel model;
    aguard::estimation::Vec6 x1 = aguard::estimation::Vec6::Zero();
    aguard::estimation::Vec6 x3 = aguard::estimation::Vec6::Zero();

    aguard::estimation::ModelTerms terms() const {
        aguard::estimation::ModelTerms m;
        m.g1 = model.g1();
        m.g3 = model.g3();
        m.g2u = -m.g1 - m.g3 * x3;
        return m;
    }
};

inline Eigen::Matrix<double, 18, 1> error_of(const aguard::estimation::ExtendedState& est, const HeldTruth& tr) {
    Eigen::Matrix<double, 18, 1> e;
    e << est.x1 - tr.x1, est.x2, est.x3 - tr.x3;
    return e;
}

}  // namespace fixture
