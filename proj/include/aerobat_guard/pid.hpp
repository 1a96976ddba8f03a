#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aguard::control {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double max_i = 1.0;  // bound on |ki * integral|
    double out_min = -std::numeric_limits<double>::infinity();
    double out_max = std::numeric_limits<double>::infinity();

    void validate() const {
        if (kp < 0.0 || ki < 0.0 || kd < 0.0) throw std::domain_error("pid: gains must be non-negative");
        if (!(max_i > 0.0)) throw std::domain_error("pid: integral clamp must be positive");
        if (!(out_min <= out_max)) throw std::domain_error("pid: output bounds reversed");
    }
};

struct PidState {
    double integral = 0.0;
};

/// Integrates the error, clamps the integral so |ki * integral| <= max_i,
/// then returns kp e + ki int + kd e_rate saturated to the output bounds.
inline double pid_step(PidState& st, double err, double err_rate, const PidGains& g, double dt) {
    if (!(dt > 0.0)) throw std::domain_error("pid_step: dt must be positive");
    double i_term = 0.0;
    if (g.ki > 0.0) {
        const double lim = g.max_i / g.ki;
        st.integral = std::clamp(st.integral + err * dt, -lim, lim);
        i_term = g.ki * st.integral;
    }
    return std::clamp(g.kp * err + i_term + g.kd * err_rate, g.out_min, g.out_max);
}

/// Stateful wrapper that differentiates the error itself when no rate is supplied.
class Pid {
public:
    Pid() = default;
    explicit Pid(PidGains g) : g_(g) { g_.validate(); }

    double step(double err, double dt) {
        const double rate = prev_ ? (err - *prev_) / dt : 0.0;
        prev_ = err;
        return pid_step(st_, err, rate, g_, dt);
    }

    double step(double err, double err_rate, double dt) {
        prev_ = err;
        return pid_step(st_, err, err_rate, g_, dt);
    }

    void reset() {
        st_ = {};
        prev_.reset();
    }

    const PidGains& gains() const { return g_; }
    double integral() const { return st_.integral; }
    double integral_term() const { return g_.ki * st_.integral; }

private:
    PidGains g_{};
    PidState st_{};
    std::optional<double> prev_{};
};

/// Position-loop gains for the three axes.
struct AxisGains {
    double kp, ki, kd;
};

struct PositionGainSet {
    std::string_view name;
    AxisGains x, y, z;
};

/// The five flight-test position PID configurations.
inline constexpr std::array<PositionGainSet, 5> kPositionPresets{{
    {"test1", {15.900, 0.300, 31.000}, {15.900, 0.300, 35.000}, {36.000, 3.500, 30.000}},
    {"test2", {15.900, 0.300, 31.000}, {15.900, 0.300, 35.000}, {36.000, 3.500, 30.000}},
    {"test3", {18.264, 0.648, 40.691}, {17.617, 0.631, 36.304}, {36.000, 3.500, 30.000}},
    {"test4", {18.727, 0.535, 39.305}, {18.028, 0.497, 35.000}, {36.000, 3.500, 30.000}},
    {"test5", {17.900, 0.450, 36.000}, {15.900, 1.282, 35.000}, {36.000, 3.500, 30.000}},
}};

inline const PositionGainSet& position_preset(std::string_view name) {
    for (const auto& p : kPositionPresets) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown gain preset '" + std::string(name) + "' (expected test1..test5)");
}

}  // namespace aguard::control
