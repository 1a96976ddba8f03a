// Wrench-to-thruster allocation for the six-thruster guard.
#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include <Eigen/Dense>

#include "aerobat_guard/guard_body.hpp"

namespace aguard::control {

struct Allocation {
    Thrusts f = Thrusts::Zero();
    bool saturated = false;
};

/// Minimum-norm least-squares inverse of the mixing map. Thrusters that leave
/// [0, f_max] are pinned at the violated bound and the remaining ones are
/// re-solved for the residual wrench until the set is feasible.
inline Allocation allocate(double collective, const Vec3& moment, const GuardParams& p) {
    const Eigen::Matrix<double, 4, 6> m = mixing_matrix(p);
    Eigen::Vector4d w;
    w << collective, moment;

    Allocation out;
    std::array<bool, 6> fixed{};
    Thrusts f = Thrusts::Zero();
    for (int iter = 0; iter < 6; ++iter) {
        Eigen::Vector4d residual = w;
        std::vector<int> free_idx;
        for (int i = 0; i < 6; ++i) {
            if (fixed[i]) {
                residual -= m.col(i) * f[i];
            } else {
                free_idx.push_back(i);
            }
        }
        if (free_idx.empty()) break;
        Eigen::MatrixXd mf(4, free_idx.size());
        for (std::size_t j = 0; j < free_idx.size(); ++j) mf.col(j) = m.col(free_idx[j]);
        const Eigen::VectorXd sol = mf.completeOrthogonalDecomposition().solve(residual);

        bool violated = false;
        for (std::size_t j = 0; j < free_idx.size(); ++j) {
            const int i = free_idx[j];
            f[i] = sol[j];
            if (f[i] < 0.0 || f[i] > p.f_max) {
                f[i] = std::clamp(f[i], 0.0, p.f_max);
                fixed[i] = true;
                violated = true;
            }
        }
        if (!violated) break;
        out.saturated = true;
    }
    // Any remaining infeasibility after the active set is exhausted.
    for (int i = 0; i < 6; ++i) {
        if (f[i] < 0.0 || f[i] > p.f_max) {
            f[i] = std::clamp(f[i], 0.0, p.f_max);
            out.saturated = true;
        }
    }
    out.f = f;
    return out;
}

}  // namespace aguard::control
