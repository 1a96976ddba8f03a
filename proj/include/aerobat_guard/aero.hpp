// Unsteady blade-element aerodynamics: Fourier circulation over spanwise
// strips, lifting-line induced kinematics, and a two-pole Wagner indicial
// response marched as a linear state-space system.
#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aerobat_guard/spatial.hpp"

namespace aguard::aero {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Two-exponential Wagner approximation Phi(tau) = sum_k psi_k exp(-eps_k tau / c).
/// Defaults are the classical Jones coefficients.
struct WagnerCoefficients {
    double psi1 = 0.165;
    double psi2 = 0.335;
    double eps1 = 0.0455;
    double eps2 = 0.3;

    double phi0() const { return psi1 + psi2; }

    void validate() const {
        if (!(eps1 > 0.0 && eps2 > 0.0)) throw std::domain_error("wagner: decay rates must be positive");
        if (!(psi1 + psi2 > 0.0)) throw std::domain_error("wagner: psi1 + psi2 must be positive");
    }
};

inline double wagner(double tau, double chord, const WagnerCoefficients& w) {
    return w.psi1 * std::exp(-w.eps1 / chord * tau) + w.psi2 * std::exp(-w.eps2 / chord * tau);
}

/// d/dtau of Phi(t - tau), i.e. the Duhamel kernel evaluated at lag s = t - tau.
inline double wagner_kernel(double lag, double chord, const WagnerCoefficients& w) {
    return w.psi1 * w.eps1 / chord * std::exp(-w.eps1 / chord * lag) +
           w.psi2 * w.eps2 / chord * std::exp(-w.eps2 / chord * lag);
}

/// Spanwise strip layout of one wing. Stations run from root (s = 0 allowed)
/// towards the tip; the tip itself (s = l, theta = 0) is excluded because the
/// induced-kinematics rows divide by sin(theta).
class BladeGeometry {
public:
    BladeGeometry(std::vector<double> stations, std::vector<double> chords, double semispan)
        : s_(std::move(stations)), c_(std::move(chords)), l_(semispan) {
        if (s_.empty() || s_.size() != c_.size()) {
            throw std::domain_error("BladeGeometry: stations and chords must be non-empty and equal length");
        }
        if (!(l_ > 0.0)) throw std::domain_error("BladeGeometry: semispan must be positive");
        theta_.resize(s_.size());
        for (std::size_t i = 0; i < s_.size(); ++i) {
            if (!(s_[i] >= 0.0 && s_[i] < l_)) {
                throw std::domain_error("BladeGeometry: station " + std::to_string(i) +
                                        " outside [0, semispan) (theta = 0 at the tip is singular)");
            }
            if (i > 0 && !(s_[i] > s_[i - 1])) {
                throw std::domain_error("BladeGeometry: stations must be strictly increasing");
            }
            if (!(c_[i] > 0.0)) throw std::domain_error("BladeGeometry: chords must be positive");
            theta_[i] = std::acos(s_[i] / l_);
        }
    }

    /// n strips with theta_i = i * pi / (2n), i = 1..n, listed root to tip.
    static BladeGeometry uniform(int n, double semispan, double chord) {
        if (n < 1) throw std::domain_error("BladeGeometry: need at least one strip");
        std::vector<double> s(n), c(n, chord);
        for (int i = 0; i < n; ++i) {
            const double theta = (n - i) * std::numbers::pi / (2.0 * n);
            s[i] = semispan * std::cos(theta);
        }
        s[0] = 0.0;  // cos(pi/2) is ~6e-17, not zero
        return BladeGeometry(std::move(s), std::move(c), semispan);
    }

    /// Build directly from station angles; chords per strip.
    static BladeGeometry from_angles(std::span<const double> theta, std::vector<double> chords,
                                     double semispan) {
        std::vector<double> s(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            s[i] = std::abs(theta[i] - std::numbers::pi / 2) < 1e-15 ? 0.0 : semispan * std::cos(theta[i]);
        }
        return BladeGeometry(std::move(s), std::move(chords), semispan);
    }

    int size() const { return static_cast<int>(s_.size()); }
    double station(int i) const { return s_[i]; }
    double chord(int i) const { return c_[i]; }
    double theta(int i) const { return theta_[i]; }
    double semispan() const { return l_; }
    /// Spanwise width represented by strip i (uniform split of the semispan).
    double width(int) const { return l_ / static_cast<double>(s_.size()); }

private:
    std::vector<double> s_;
    std::vector<double> c_;
    std::vector<double> theta_;
    double l_;
};

/// Gamma(theta) = sum_k a_k sin(k theta).
inline double circulation(const VectorXd& a, double theta) {
    double g = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) g += a[k] * std::sin(static_cast<double>(k + 1) * theta);
    return g;
}

/// Rows [sin(theta_i) ... sin(n theta_i)]; Gamma = A a.
inline MatrixXd sine_matrix(const BladeGeometry& geom, int modes) {
    MatrixXd m(geom.size(), modes);
    for (int i = 0; i < geom.size(); ++i) {
        for (int k = 0; k < modes; ++k) m(i, k) = std::sin((k + 1) * geom.theta(i));
    }
    return m;
}

/// Rows [1, sin(2 theta_i)/sin(theta_i), ..., sin(n theta_i)/sin(theta_i)].
inline MatrixXd induced_matrix(const BladeGeometry& geom, int modes) {
    MatrixXd m(geom.size(), modes);
    for (int i = 0; i < geom.size(); ++i) {
        const double st = std::sin(geom.theta(i));
        if (st == 0.0) throw std::domain_error("induced_matrix: strip at theta = 0");
        m(i, 0) = 1.0;
        for (int k = 1; k < modes; ++k) m(i, k) = std::sin((k + 1) * geom.theta(i)) / st;
    }
    return m;
}

inline VectorXd induced_kinematics(const VectorXd& a, const BladeGeometry& geom) {
    return induced_matrix(geom, static_cast<int>(a.size())) * a;
}

/// Unified aerodynamic state: Fourier coefficients plus two Wagner memory
/// states per strip (column 0 holds z_1, column 1 holds z_2).
struct AeroState {
    VectorXd a;
    Eigen::MatrixX2d z;

    static AeroState zero(int n) { return {VectorXd::Zero(n), Eigen::MatrixX2d::Zero(n, 2)}; }

    int size() const { return static_cast<int>(a.size()); }

    VectorXd flatten() const {
        VectorXd v(3 * a.size());
        v.head(a.size()) = a;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            v[a.size() + 2 * i] = z(i, 0);
            v[a.size() + 2 * i + 1] = z(i, 1);
        }
        return v;
    }

    static AeroState unflatten(const Eigen::Ref<const VectorXd>& v) {
        const Eigen::Index n = v.size() / 3;
        AeroState s = zero(static_cast<int>(n));
        s.a = v.head(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            s.z(i, 0) = v[n + 2 * i];
            s.z(i, 1) = v[n + 2 * i + 1];
        }
        return s;
    }
};

/// beta_i = y' Phi(0) + (psi1 eps1 / c) z1 + (psi2 eps2 / c) z2.
inline double beta_from_states(double yprime, const Eigen::Vector2d& z, double chord,
                               const WagnerCoefficients& w) {
    return yprime * w.phi0() + w.psi1 * w.eps1 / chord * z[0] + w.psi2 * w.eps2 / chord * z[1];
}

/// How the memory-state input gain is formed.
///  - Standard: z_k = int exp(-eps_k (t - tau)/c) y' dtau differentiated
///    directly, giving dz_k/dt = -(eps_k/c) z_k + y'. Matches the convolution.
///  - Verbatim: D = diag(-2 eps_k / c), E = 2 - exp(eps_k t / c) as printed.
///    The input gain grows without bound; kept for comparison only.
enum class MemoryForm { Standard, Verbatim };

/// Brute-force Duhamel reference: beta(t_N) from uniformly sampled y'(t_j),
/// j = 0..N, by trapezoidal quadrature of the Wagner kernel.
inline double duhamel_oracle(std::span<const double> yprime, double dt, double chord,
                             const WagnerCoefficients& w) {
    if (yprime.empty()) throw std::domain_error("duhamel_oracle: empty history");
    const std::size_t n = yprime.size() - 1;
    if (n == 0) return yprime[0] * w.phi0();
    const double t = static_cast<double>(n) * dt;
    double integral = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
        integral += weight * wagner_kernel(t - static_cast<double>(j) * dt, chord, w) * yprime[j];
    }
    return yprime[n] * w.phi0() + integral * dt;
}

/// Per-strip force from bound circulation: rho * Gamma * width * (span x U_p),
/// with U_p the relative air velocity projected on the strip section plane.
/// `span_axis` must be a unit vector oriented so that chord x span points to
/// the positive-lift side. Zero flow gives zero force.
inline Vec3 strip_force(double gamma, const Vec3& u_rel, const Vec3& span_axis, double width,
                        double rho) {
    const Vec3 u_p = u_rel - u_rel.dot(span_axis) * span_axis;
    if (u_p.squaredNorm() == 0.0) return Vec3::Zero();
    return rho * gamma * width * span_axis.cross(u_p);
}

/// Assembled state-space model for one wing. Mode count equals strip count so
/// the stacked sine matrix is square.
class AeroModel {
public:
    AeroModel(BladeGeometry geom, WagnerCoefficients coeffs = {}, MemoryForm form = MemoryForm::Standard)
        : geom_(std::move(geom)), w_(coeffs), form_(form) {
        w_.validate();
        const int n = geom_.size();
        sine_ = sine_matrix(geom_, n);
        induced_ = induced_matrix(geom_, n);
        Eigen::JacobiSVD<MatrixXd> svd(sine_);
        const auto& sv = svd.singularValues();
        cond_ = sv[0] / sv[sv.size() - 1];
        if (!std::isfinite(cond_) || cond_ > 1e12) {
            throw NumericError("AeroModel: stacked sine matrix is singular or ill-conditioned (cond = " +
                               std::to_string(cond_) + "); check station layout");
        }
        lu_ = sine_.partialPivLu();
        inv_chord_ = VectorXd(n);
        for (int i = 0; i < n; ++i) inv_chord_[i] = 1.0 / geom_.chord(i);
    }

    const BladeGeometry& geometry() const { return geom_; }
    const WagnerCoefficients& coefficients() const { return w_; }
    MemoryForm form() const { return form_; }
    int size() const { return geom_.size(); }
    double condition_number() const { return cond_; }
    const MatrixXd& sine() const { return sine_; }
    const MatrixXd& induced() const { return induced_; }

    /// y' = y1 + y_Gamma(a).
    VectorXd effective_kinematics(const AeroState& s, const VectorXd& y1) const { return y1 + induced_ * s.a; }

    VectorXd circulations(const AeroState& s) const { return sine_ * s.a; }

    VectorXd betas(const AeroState& s, const VectorXd& yprime) const {
        VectorXd b(size());
        for (int i = 0; i < size(); ++i) b[i] = beta_from_states(yprime[i], s.z.row(i).transpose(), geom_.chord(i), w_);
        return b;
    }

    /// State rate for a given effective kinematics y'. `t` is time since the
    /// memory states were zero; only the Verbatim form reads it.
    AeroState derivative(const AeroState& s, const VectorXd& yprime, double t = 0.0) const {
        const int n = size();
        VectorXd rhs(n);
        AeroState rate = AeroState::zero(n);
        for (int i = 0; i < n; ++i) {
            const double c = geom_.chord(i);
            const double gamma_over_c = sine_.row(i).dot(s.a) * inv_chord_[i];
            rhs[i] = -gamma_over_c + w_.psi1 * w_.eps1 / c * s.z(i, 0) + w_.psi2 * w_.eps2 / c * s.z(i, 1) +
                     w_.phi0() * yprime[i];
            if (form_ == MemoryForm::Standard) {
                rate.z(i, 0) = -w_.eps1 / c * s.z(i, 0) + yprime[i];
                rate.z(i, 1) = -w_.eps2 / c * s.z(i, 1) + yprime[i];
            } else {
                rate.z(i, 0) = -2.0 * w_.eps1 / c * s.z(i, 0) + (2.0 - std::exp(w_.eps1 * t / c)) * yprime[i];
                rate.z(i, 1) = -2.0 * w_.eps2 / c * s.z(i, 1) + (2.0 - std::exp(w_.eps2 * t / c)) * yprime[i];
            }
        }
        rate.a = lu_.solve(rhs);
        return rate;
    }

    /// Rate driven by raw strip kinematics (adds the induced part).
    AeroState rate(const AeroState& s, const VectorXd& y1, double t = 0.0) const {
        return derivative(s, effective_kinematics(s, y1), t);
    }

    /// beta_i - (Gamma_i / c_i + dGamma_i/dt); zero along exact trajectories.
    VectorXd kutta_joukowski_residual(const AeroState& s, const VectorXd& yprime, double t = 0.0) const {
        const AeroState r = derivative(s, yprime, t);
        const VectorXd gamma = circulations(s);
        const VectorXd gamma_dot = sine_ * r.a;
        return betas(s, yprime) - (gamma.cwiseProduct(inv_chord_) + gamma_dot);
    }

private:
    BladeGeometry geom_;
    WagnerCoefficients w_;
    MemoryForm form_;
    MatrixXd sine_;
    MatrixXd induced_;
    Eigen::PartialPivLU<MatrixXd> lu_;
    VectorXd inv_chord_;
    double cond_ = 1.0;
};

}  // namespace aguard::aero
