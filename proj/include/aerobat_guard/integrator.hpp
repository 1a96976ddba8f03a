#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace aguard {

/// Raised when a derivative evaluation produces NaN/Inf; carries a state dump.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, std::string dump)
        : std::runtime_error(what), dump_(std::move(dump)) {}
    const std::string& state_dump() const { return dump_; }

private:
    std::string dump_;
};

/// Classical fourth-order Runge-Kutta step of x' = f(t, x).
template <typename F>
Eigen::VectorXd rk4_step(F&& f, double t, const Eigen::VectorXd& x, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("rk4_step: dt must be positive");
    auto eval = [&](double tt, const Eigen::VectorXd& xx) {
        Eigen::VectorXd k = f(tt, xx);
        if (!k.allFinite()) {
            std::ostringstream os;
            os.precision(17);
            os << "t=" << tt << "\nstate=" << xx.transpose() << "\nrate=" << k.transpose();
            throw IntegrationError("rk4_step: non-finite derivative at t=" + std::to_string(tt), os.str());
        }
        return k;
    };
    const Eigen::VectorXd k1 = eval(t, x);
    const Eigen::VectorXd k2 = eval(t + dt / 2, x + dt / 2 * k1);
    const Eigen::VectorXd k3 = eval(t + dt / 2, x + dt / 2 * k2);
    const Eigen::VectorXd k4 = eval(t + dt, x + dt * k3);
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace aguard
