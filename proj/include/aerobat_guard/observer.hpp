// Extended-state observer and the feedback-cancelling control law.
//
// Model: x1' = x2, x2' = g1 + g2 u + g3 x3, x3' = G(t), measured z = x1.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "aerobat_guard/spatial.hpp"

namespace aguard::estimation {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Estimates of pose (x1), pose rate (x2) and the extended aerodynamic state (x3).
struct ExtendedState {
    Vec6 x1 = Vec6::Zero();
    Vec6 x2 = Vec6::Zero();
    Vec6 x3 = Vec6::Zero();
};

struct ObserverGains {
    Mat6 b1 = Mat6::Zero();
    Mat6 b2 = Mat6::Zero();
    Mat6 b3 = Mat6::Zero();

    /// Diagonal gains placing each axis' error poles at -w, -2w, -3w, given
    /// the diagonal of g3. Characteristic polynomial per axis is
    /// l^3 + b1 l^2 + b2 l + g3 b3.
    static ObserverGains from_bandwidth(double w, const Vec6& g3_diag) {
        ObserverGains g;
        for (int i = 0; i < 6; ++i) {
            g.b1(i, i) = 6.0 * w;
            g.b2(i, i) = 11.0 * w * w;
            g.b3(i, i) = 6.0 * w * w * w / g3_diag[i];
        }
        return g;
    }
};

/// Model terms evaluated at the current operating point.
struct ModelTerms {
    Vec6 g1 = Vec6::Zero();
    Vec6 g2u = Vec6::Zero();  // g2 applied to the known input
    Mat6 g3 = Mat6::Identity();
};

inline ExtendedState observer_rate(const ExtendedState& e, const Vec6& x1_meas, const ModelTerms& m,
                                   const ObserverGains& g) {
    const Vec6 innov = e.x1 - x1_meas;
    ExtendedState r;
    r.x1 = e.x2 - g.b1 * innov;
    r.x2 = m.g1 + m.g2u + m.g3 * e.x3 - g.b2 * innov;
    r.x3 = -g.b3 * innov;
    return r;
}

/// One RK4 step of the observer with measurement and model terms held over dt.
inline ExtendedState observer_step(const ExtendedState& e, const Vec6& x1_meas, const ModelTerms& m,
                                   const ObserverGains& g, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("observer_step: dt must be positive");
    auto add = [](const ExtendedState& a, const ExtendedState& b, double h) {
        return ExtendedState{a.x1 + h * b.x1, a.x2 + h * b.x2, a.x3 + h * b.x3};
    };
    const ExtendedState k1 = observer_rate(e, x1_meas, m, g);
    const ExtendedState k2 = observer_rate(add(e, k1, dt / 2), x1_meas, m, g);
    const ExtendedState k3 = observer_rate(add(e, k2, dt / 2), x1_meas, m, g);
    const ExtendedState k4 = observer_rate(add(e, k3, dt), x1_meas, m, g);
    ExtendedState out;
    out.x1 = e.x1 + dt / 6.0 * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1);
    out.x2 = e.x2 + dt / 6.0 * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2);
    out.x3 = e.x3 + dt / 6.0 * (k1.x3 + 2 * k2.x3 + 2 * k3.x3 + k4.x3);
    return out;
}

struct ErrorDynamics {
    Eigen::MatrixXd matrix;           // 3k x 3k
    Eigen::VectorXcd eigenvalues;
    double spectral_abscissa = 0.0;   // max real part

    bool hurwitz() const { return spectral_abscissa < 0.0; }
};

/// [[-b1, I, 0], [-b2, 0, g3], [-b3, 0, 0]] for blocks of any (equal) size.
inline ErrorDynamics observer_error_matrix(const Eigen::MatrixXd& b1, const Eigen::MatrixXd& b2,
                                           const Eigen::MatrixXd& b3, const Eigen::MatrixXd& g3) {
    const Eigen::Index k = b1.rows();
    ErrorDynamics out;
    out.matrix = Eigen::MatrixXd::Zero(3 * k, 3 * k);
    out.matrix.block(0, 0, k, k) = -b1;
    out.matrix.block(0, k, k, k) = Eigen::MatrixXd::Identity(k, k);
    out.matrix.block(k, 0, k, k) = -b2;
    out.matrix.block(k, 2 * k, k, k) = g3;
    out.matrix.block(2 * k, 0, k, k) = -b3;
    Eigen::EigenSolver<Eigen::MatrixXd> es(out.matrix, false);
    out.eigenvalues = es.eigenvalues();
    out.spectral_abscissa = out.eigenvalues.real().maxCoeff();
    return out;
}

inline ErrorDynamics observer_error_matrix(const ObserverGains& g, const Mat6& g3) {
    return observer_error_matrix(g.b1, g.b2, g.b3, g3);
}

/// u = g2^{-1} (u0 - g1 - g3 x3_hat), u0 = K x2 (+ Kp (x1 - x1_ref) when given).
inline Eigen::VectorXd control_law(const Eigen::VectorXd& x2, const Eigen::VectorXd& x3_hat,
                                   const Eigen::VectorXd& g1, const Eigen::MatrixXd& g2,
                                   const Eigen::MatrixXd& g3, const Eigen::MatrixXd& k,
                                   const Eigen::VectorXd* position_term = nullptr) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g2);
    if (g2.rows() != g2.cols() || !lu.isInvertible()) {
        throw NumericError("control_law: g2 is singular (rank " + std::to_string(lu.rank()) + " of " +
                           std::to_string(g2.rows()) + ")");
    }
    Eigen::VectorXd u0 = k * x2;
    if (position_term) u0 += *position_term;
    return lu.solve(u0 - g1 - g3 * x3_hat);
}

}  // namespace aguard::estimation
