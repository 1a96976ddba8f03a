// Scenario configuration: typed parameters for one simulated flight and their
// YAML encoding. Schema violations raise ConfigError naming the key path and
// the source line.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "aerobat_guard/cascade.hpp"
#include "aerobat_guard/plant.hpp"
#include "aerobat_guard/telemetry.hpp"

namespace aguard {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, int line, const std::string& msg)
        : std::runtime_error(key + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) + ": " + msg),
          key_(key),
          line_(line) {}
    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

struct LoopRates {
    int mocap_hz = 240;
    int control_hz = 200;
    int attitude_hz = 200;
    int pwm_hz = 50;
};

struct NoiseParams {
    double position_std = 0.0;  // m, mocap
    double attitude_std = 0.0;  // rad, mocap and IMU
    double rate_std = 0.0;      // rad/s, gyro
};

struct ObserverConfig {
    bool enabled = true;
    double bandwidth = 10.0;         // rad/s; error poles at -w, -2w, -3w
    bool feedforward = true;         // feed x3_hat into the thrust demand
    double disturbance_bound = 0.0;  // bound on ||G(t)||, required in files
};

enum class ControlMode { Cascade, Trim };

struct Scenario {
    std::string name = "scenario";
    double duration = 10.0;
    int base_rate_hz = 12000;
    std::uint64_t seed = 1;
    int log_decimation = 60;
    double divergence_bound = 50.0;
    double gravity = 9.8;

    LoopRates rates{};
    int pwm_bits = 16;

    PlantParams plant{};

    ControlMode mode = ControlMode::Cascade;
    std::string preset = "test1";
    control::PositionLoopParams position{};
    control::AttitudeLoopParams attitude{};
    ObserverConfig observer{};

    telemetry::LinkModel pose_link{240.0, 0.0028, 0.0, 0.0};
    telemetry::LinkModel command_link{200.0, 0.0028, 0.0, 0.0};
    NoiseParams noise{};

    Vec3 setpoint{0.0, 0.0, 0.2};
    double yaw_setpoint = 0.0;
    Vec3 initial_position{0.0, 0.0, 0.2};
    EulerAngles initial_attitude{};

    double dt() const { return 1.0 / base_rate_hz; }
    std::int64_t total_ticks() const { return static_cast<std::int64_t>(std::llround(duration * base_rate_hz)); }

    /// Checks value ranges and that every loop period is an integer number of base ticks.
    void validate() const {
        auto fail = [](const std::string& k, const std::string& m) { throw ConfigError(k, 0, m); };
        if (!(duration > 0.0)) fail("sim.duration", "must be positive");
        if (base_rate_hz <= 0) fail("sim.base_rate_hz", "must be positive");
        if (log_decimation <= 0) fail("sim.log_decimation", "must be positive");
        for (auto [key, hz] : {std::pair{"rates.mocap_hz", rates.mocap_hz}, std::pair{"rates.control_hz", rates.control_hz},
                               std::pair{"rates.attitude_hz", rates.attitude_hz}, std::pair{"rates.pwm_hz", rates.pwm_hz}}) {
            if (hz <= 0) fail(key, "must be positive");
            if (base_rate_hz % hz != 0) {
                fail(key, std::to_string(hz) + " Hz does not divide the base rate " + std::to_string(base_rate_hz) +
                              " Hz (dt must divide every loop period)");
            }
        }
        if (std::abs(duration * base_rate_hz - std::round(duration * base_rate_hz)) > 1e-6) {
            fail("sim.duration", "must be a whole number of base ticks");
        }
        if (pwm_bits < 0 || pwm_bits > 24) fail("pwm.bits", "must be in [0, 24]");
        if (!(observer.disturbance_bound >= 0.0)) fail("observer.disturbance_bound", "must be non-negative");
        if (plant.aero.strips < 1) fail("aero.strips", "must be >= 1");
        try {
            plant.guard.validate();
        } catch (const std::domain_error& e) {
            fail("guard", e.what());
        }
        try {
            plant.aerobat.validate();
        } catch (const std::domain_error& e) {
            fail("aerobat", e.what());
        }
        try {
            pose_link.validate();
        } catch (const std::domain_error& e) {
            fail("links.pose", e.what());
        }
        try {
            command_link.validate();
        } catch (const std::domain_error& e) {
            fail("links.command", e.what());
        }
    }

    /// Apply a named gain preset (test1..test5) to the position loop.
    void apply_preset(const std::string& name) {
        preset = name;
        position.set_preset(control::position_preset(name));
    }
};

namespace detail {

inline int line_of(const YAML::Node& n) { return n.IsDefined() && n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

/// A YAML map node with its dotted key path; tracks which keys were read.
class ConfigNode {
public:
    ConfigNode(YAML::Node n, std::string path) : n_(std::move(n)), path_(std::move(path)) {
        if (n_.IsDefined() && !n_.IsNull() && !n_.IsMap()) throw ConfigError(path_or_root(), line_of(n_), "expected a mapping");
    }

    bool has(const std::string& key) const { return n_.IsMap() && n_[key].IsDefined() && !n_[key].IsNull(); }

    template <typename T>
    T get(const std::string& key, const T& fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        return convert<T>(n_[key], full(key));
    }

    template <typename T>
    T require(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) throw ConfigError(full(key), line_of(n_), "required key is missing");
        return convert<T>(n_[key], full(key));
    }

    ConfigNode child(const std::string& key) {
        seen_.insert(key);
        return ConfigNode(has(key) ? n_[key] : YAML::Node(YAML::NodeType::Undefined), full(key));
    }

    YAML::Node raw(const std::string& key) {
        seen_.insert(key);
        return has(key) ? n_[key] : YAML::Node(YAML::NodeType::Undefined);
    }

    /// Rejects keys that were never read.
    void finish() const {
        if (!n_.IsMap()) return;
        for (const auto& kv : n_) {
            const auto k = kv.first.as<std::string>();
            if (!seen_.count(k)) throw ConfigError(full(k), line_of(kv.first), "unknown key");
        }
    }

    std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <typename T>
    static T convert(const YAML::Node& v, const std::string& key) {
        try {
            if constexpr (std::is_same_v<T, Vec3>) {
                if (!v.IsSequence() || v.size() != 3) throw ConfigError(key, line_of(v), "expected a 3-element list");
                return Vec3(v[0].as<double>(), v[1].as<double>(), v[2].as<double>());
            } else {
                return v.as<T>();
            }
        } catch (const YAML::Exception& e) {
            throw ConfigError(key, line_of(v), std::string("bad value: ") + e.msg);
        }
    }

private:
    std::string path_or_root() const { return path_.empty() ? "<root>" : path_; }

    YAML::Node n_;
    std::string path_;
    std::set<std::string> seen_;
};

inline control::AxisGains read_axis(ConfigNode& n, const std::string& key, control::AxisGains fallback) {
    if (!n.has(key)) {
        n.get<double>(key, 0.0);
        return fallback;
    }
    const Vec3 v = n.require<Vec3>(key);
    return {v.x(), v.y(), v.z()};
}

inline control::PidGains read_pid(ConfigNode& parent, const std::string& key, control::PidGains g) {
    ConfigNode n = parent.child(key);
    g.kp = n.get("kp", g.kp);
    g.ki = n.get("ki", g.ki);
    g.kd = n.get("kd", g.kd);
    g.max_i = n.get("max_i", g.max_i);
    n.finish();
    try {
        g.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(parent.full(key), 0, e.what());
    }
    return g;
}

inline telemetry::LinkModel read_link(ConfigNode& parent, const std::string& key, telemetry::LinkModel m) {
    ConfigNode n = parent.child(key);
    m.latency = n.get("latency", m.latency);
    m.jitter = n.get("jitter", m.jitter);
    m.drop = n.get("drop", m.drop);
    n.finish();
    return m;
}

inline std::array<Vec3, 4> read_anchors(ConfigNode& n, const std::string& key, const std::array<Vec3, 4>& fallback) {
    const YAML::Node v = n.raw(key);
    if (!v.IsDefined()) return fallback;
    if (!v.IsSequence() || v.size() != 4) throw ConfigError(n.full(key), line_of(v), "expected four 3-element lists");
    std::array<Vec3, 4> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = ConfigNode::convert<Vec3>(v[i], n.full(key) + "[" + std::to_string(i) + "]");
    return out;
}

}  // namespace detail

/// Parses a scenario document. `sim.duration` and `observer.disturbance_bound`
/// are required; every other key has a default.
inline Scenario parse_scenario(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("<document>", e.mark.line + 1, e.msg);
    }
    using detail::ConfigNode;
    Scenario s;
    ConfigNode top(root, "");
    s.name = top.get<std::string>("name", s.name);

    ConfigNode sim = top.child("sim");
    s.duration = sim.require<double>("duration");
    s.base_rate_hz = sim.get("base_rate_hz", s.base_rate_hz);
    s.seed = sim.get<std::uint64_t>("seed", s.seed);
    s.log_decimation = sim.get("log_decimation", s.log_decimation);
    s.divergence_bound = sim.get("divergence_bound", s.divergence_bound);
    s.gravity = sim.get("gravity", s.gravity);
    sim.finish();

    ConfigNode rates = top.child("rates");
    s.rates.mocap_hz = rates.get("mocap_hz", s.rates.mocap_hz);
    s.rates.control_hz = rates.get("control_hz", s.rates.control_hz);
    s.rates.attitude_hz = rates.get("attitude_hz", s.rates.attitude_hz);
    s.rates.pwm_hz = rates.get("pwm_hz", s.rates.pwm_hz);
    rates.finish();

    ConfigNode pwm = top.child("pwm");
    s.pwm_bits = pwm.get("bits", s.pwm_bits);
    pwm.finish();

    auto& gp = s.plant.guard;
    ConfigNode guard = top.child("guard");
    gp.mass = guard.get("mass", gp.mass);
    if (guard.has("inertia")) gp.inertia = guard.require<Vec3>("inertia").asDiagonal();
    else guard.get<double>("inertia", 0.0);
    const Vec3 arms = guard.get<Vec3>("arms", Vec3(gp.arm_x, gp.arm_y, gp.arm_z));
    gp.arm_x = arms.x();
    gp.arm_y = arms.y();
    gp.arm_z = arms.z();
    gp.f_max = guard.get("f_max", gp.f_max);
    guard.finish();

    auto& ap = s.plant.aerobat;
    ConfigNode aerobat = top.child("aerobat");
    ap.body_mass = aerobat.get("body_mass", ap.body_mass);
    ap.wing_mass = aerobat.get("wing_mass", ap.wing_mass);
    ap.body_inertia = aerobat.get("body_inertia", ap.body_inertia);
    ap.wing_radius = aerobat.get("wing_radius", ap.wing_radius);
    ap.fold_depth = aerobat.get("fold_depth", ap.fold_depth);
    ap.stiffness = aerobat.get("band_stiffness", ap.stiffness);
    ap.bands.guard_anchors = detail::read_anchors(aerobat, "guard_anchors", ap.bands.guard_anchors);
    ap.bands.body_anchors = detail::read_anchors(aerobat, "body_anchors", ap.bands.body_anchors);
    aerobat.finish();

    auto& ar = s.plant.aero;
    ConfigNode aero = top.child("aero");
    ar.enabled = aero.get("enabled", ar.enabled);
    ar.strips = aero.get("strips", ar.strips);
    ar.semispan = aero.get("semispan", ar.semispan);
    ar.chord = aero.get("chord", ar.chord);
    ar.rho = aero.get("rho", ar.rho);
    {
        ConfigNode w = aero.child("wagner");
        ar.wagner.psi1 = w.get("psi1", ar.wagner.psi1);
        ar.wagner.psi2 = w.get("psi2", ar.wagner.psi2);
        ar.wagner.eps1 = w.get("eps1", ar.wagner.eps1);
        ar.wagner.eps2 = w.get("eps2", ar.wagner.eps2);
        w.finish();
        try {
            ar.wagner.validate();
        } catch (const std::domain_error& e) {
            throw ConfigError("aero.wagner", 0, e.what());
        }
    }
    const std::string form = aero.get<std::string>("memory_form", "standard");
    if (form == "standard") ar.form = aero::MemoryForm::Standard;
    else if (form == "verbatim") ar.form = aero::MemoryForm::Verbatim;
    else throw ConfigError("aero.memory_form", 0, "expected 'standard' or 'verbatim', got '" + form + "'");
    aero.finish();

    auto& gt = s.plant.gait;
    ConfigNode gait = top.child("gait");
    s.plant.gait_enabled = gait.get("enabled", s.plant.gait_enabled);
    gt.frequency = gait.get("frequency", gt.frequency);
    gt.amplitude = gait.get("amplitude", gt.amplitude);
    gt.distal_amplitude = gait.get("distal_amplitude", gt.distal_amplitude);
    gt.phase = gait.get("phase", gt.phase);
    gait.finish();

    ConfigNode ctl = top.child("control");
    const std::string mode = ctl.get<std::string>("mode", "cascade");
    if (mode == "cascade") s.mode = ControlMode::Cascade;
    else if (mode == "trim") s.mode = ControlMode::Trim;
    else throw ConfigError("control.mode", 0, "expected 'cascade' or 'trim', got '" + mode + "'");
    const std::string preset = ctl.get<std::string>("preset", s.preset);
    try {
        s.apply_preset(preset);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("control.preset", 0, e.what());
    }
    {
        ConfigNode pos = ctl.child("position");
        s.position.x = detail::read_axis(pos, "x", s.position.x);
        s.position.y = detail::read_axis(pos, "y", s.position.y);
        s.position.z = detail::read_axis(pos, "z", s.position.z);
        s.position.output_scale = pos.get("output_scale", s.position.output_scale);
        s.position.max_i = pos.get("max_i", s.position.max_i);
        s.position.max_tilt = pos.get("max_tilt", s.position.max_tilt);
        pos.finish();
    }
    {
        ConfigNode att = ctl.child("attitude");
        s.attitude.roll = detail::read_pid(att, "roll", s.attitude.roll);
        s.attitude.pitch = detail::read_pid(att, "pitch", s.attitude.pitch);
        s.attitude.yaw = detail::read_pid(att, "yaw", s.attitude.yaw);
        att.finish();
    }
    ctl.finish();

    ConfigNode obs = top.child("observer");
    s.observer.enabled = obs.get("enabled", s.observer.enabled);
    s.observer.bandwidth = obs.get("bandwidth", s.observer.bandwidth);
    s.observer.feedforward = obs.get("feedforward", s.observer.feedforward);
    s.observer.disturbance_bound = obs.require<double>("disturbance_bound");
    obs.finish();

    ConfigNode links = top.child("links");
    s.pose_link = detail::read_link(links, "pose", s.pose_link);
    s.command_link = detail::read_link(links, "command", s.command_link);
    links.finish();

    ConfigNode noise = top.child("noise");
    s.noise.position_std = noise.get("position_std", s.noise.position_std);
    s.noise.attitude_std = noise.get("attitude_std", s.noise.attitude_std);
    s.noise.rate_std = noise.get("rate_std", s.noise.rate_std);
    noise.finish();

    ConfigNode sp = top.child("setpoint");
    s.setpoint = sp.get("position", s.setpoint);
    s.yaw_setpoint = sp.get("yaw", s.yaw_setpoint);
    sp.finish();

    ConfigNode init = top.child("initial");
    s.initial_position = init.get("position", s.initial_position);
    s.initial_attitude = EulerAngles::from_vector(init.get("attitude", s.initial_attitude.as_vector()));
    init.finish();

    const YAML::Node dist = top.raw("disturbances");
    if (dist.IsDefined()) {
        if (!dist.IsSequence()) throw ConfigError("disturbances", detail::line_of(dist), "expected a list");
        for (std::size_t i = 0; i < dist.size(); ++i) {
            ConfigNode d(dist[i], "disturbances[" + std::to_string(i) + "]");
            DisturbanceStep step;
            step.start = d.require<double>("start");
            step.duration = d.require<double>("duration");
            step.force = d.get("force", step.force);
            step.moment = d.get("moment", step.moment);
            d.finish();
            s.plant.disturbances.push_back(step);
        }
    }
    top.finish();

    gp.gravity = s.gravity;
    ap.gravity = s.gravity;
    s.position.gravity = s.gravity;
    s.pose_link.rate_hz = s.rates.mocap_hz;
    s.command_link.rate_hz = s.rates.control_hz;
    s.validate();
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open scenario file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

namespace detail {

inline void emit_vec(YAML::Emitter& e, const Vec3& v) {
    e << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
}

inline void emit_pid(YAML::Emitter& e, const char* key, const control::PidGains& g) {
    e << YAML::Key << key << YAML::Value << YAML::BeginMap << YAML::Key << "kp" << YAML::Value << g.kp << YAML::Key
      << "ki" << YAML::Value << g.ki << YAML::Key << "kd" << YAML::Value << g.kd << YAML::Key << "max_i"
      << YAML::Value << g.max_i << YAML::EndMap;
}

inline void emit_link(YAML::Emitter& e, const char* key, const telemetry::LinkModel& m) {
    e << YAML::Key << key << YAML::Value << YAML::BeginMap << YAML::Key << "latency" << YAML::Value << m.latency
      << YAML::Key << "jitter" << YAML::Value << m.jitter << YAML::Key << "drop" << YAML::Value << m.drop
      << YAML::EndMap;
}

}  // namespace detail

/// Full YAML rendering of a scenario; parse_scenario(emit_scenario(s)) reproduces s.
inline std::string emit_scenario(const Scenario& s) {
    using detail::emit_vec;
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "name" << YAML::Value << s.name;

    e << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "duration" << YAML::Value << s.duration;
    e << YAML::Key << "base_rate_hz" << YAML::Value << s.base_rate_hz;
    e << YAML::Key << "seed" << YAML::Value << s.seed;
    e << YAML::Key << "log_decimation" << YAML::Value << s.log_decimation;
    e << YAML::Key << "divergence_bound" << YAML::Value << s.divergence_bound;
    e << YAML::Key << "gravity" << YAML::Value << s.gravity;
    e << YAML::EndMap;

    e << YAML::Key << "rates" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "mocap_hz" << YAML::Value << s.rates.mocap_hz;
    e << YAML::Key << "control_hz" << YAML::Value << s.rates.control_hz;
    e << YAML::Key << "attitude_hz" << YAML::Value << s.rates.attitude_hz;
    e << YAML::Key << "pwm_hz" << YAML::Value << s.rates.pwm_hz;
    e << YAML::EndMap;

    e << YAML::Key << "pwm" << YAML::Value << YAML::BeginMap << YAML::Key << "bits" << YAML::Value << s.pwm_bits
      << YAML::EndMap;

    const auto& gp = s.plant.guard;
    e << YAML::Key << "guard" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "mass" << YAML::Value << gp.mass;
    e << YAML::Key << "inertia" << YAML::Value;
    emit_vec(e, gp.inertia.diagonal());
    e << YAML::Key << "arms" << YAML::Value;
    emit_vec(e, Vec3(gp.arm_x, gp.arm_y, gp.arm_z));
    e << YAML::Key << "f_max" << YAML::Value << gp.f_max;
    e << YAML::EndMap;

    const auto& ap = s.plant.aerobat;
    e << YAML::Key << "aerobat" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "body_mass" << YAML::Value << ap.body_mass;
    e << YAML::Key << "wing_mass" << YAML::Value << ap.wing_mass;
    e << YAML::Key << "body_inertia" << YAML::Value;
    emit_vec(e, ap.body_inertia);
    e << YAML::Key << "wing_radius" << YAML::Value << ap.wing_radius;
    e << YAML::Key << "fold_depth" << YAML::Value << ap.fold_depth;
    e << YAML::Key << "band_stiffness" << YAML::Value << ap.stiffness;
    for (auto [key, anchors] : {std::pair{"guard_anchors", &ap.bands.guard_anchors},
                                std::pair{"body_anchors", &ap.bands.body_anchors}}) {
        e << YAML::Key << key << YAML::Value << YAML::BeginSeq;
        for (const auto& v : *anchors) emit_vec(e, v);
        e << YAML::EndSeq;
    }
    e << YAML::EndMap;

    const auto& ar = s.plant.aero;
    e << YAML::Key << "aero" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "enabled" << YAML::Value << ar.enabled;
    e << YAML::Key << "strips" << YAML::Value << ar.strips;
    e << YAML::Key << "semispan" << YAML::Value << ar.semispan;
    e << YAML::Key << "chord" << YAML::Value << ar.chord;
    e << YAML::Key << "rho" << YAML::Value << ar.rho;
    e << YAML::Key << "wagner" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "psi1" << YAML::Value << ar.wagner.psi1 << YAML::Key << "psi2" << YAML::Value << ar.wagner.psi2;
    e << YAML::Key << "eps1" << YAML::Value << ar.wagner.eps1 << YAML::Key << "eps2" << YAML::Value << ar.wagner.eps2;
    e << YAML::EndMap;
    e << YAML::Key << "memory_form" << YAML::Value
      << (ar.form == aero::MemoryForm::Standard ? "standard" : "verbatim");
    e << YAML::EndMap;

    const auto& gt = s.plant.gait;
    e << YAML::Key << "gait" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "enabled" << YAML::Value << s.plant.gait_enabled;
    e << YAML::Key << "frequency" << YAML::Value << gt.frequency;
    e << YAML::Key << "amplitude" << YAML::Value << gt.amplitude;
    e << YAML::Key << "distal_amplitude" << YAML::Value << gt.distal_amplitude;
    e << YAML::Key << "phase" << YAML::Value << gt.phase;
    e << YAML::EndMap;

    e << YAML::Key << "control" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "mode" << YAML::Value << (s.mode == ControlMode::Cascade ? "cascade" : "trim");
    e << YAML::Key << "preset" << YAML::Value << s.preset;
    e << YAML::Key << "position" << YAML::Value << YAML::BeginMap;
    for (auto [key, g] : {std::pair{"x", s.position.x}, std::pair{"y", s.position.y}, std::pair{"z", s.position.z}}) {
        e << YAML::Key << key << YAML::Value;
        emit_vec(e, Vec3(g.kp, g.ki, g.kd));
    }
    e << YAML::Key << "output_scale" << YAML::Value << s.position.output_scale;
    e << YAML::Key << "max_i" << YAML::Value << s.position.max_i;
    e << YAML::Key << "max_tilt" << YAML::Value << s.position.max_tilt;
    e << YAML::EndMap;
    e << YAML::Key << "attitude" << YAML::Value << YAML::BeginMap;
    detail::emit_pid(e, "roll", s.attitude.roll);
    detail::emit_pid(e, "pitch", s.attitude.pitch);
    detail::emit_pid(e, "yaw", s.attitude.yaw);
    e << YAML::EndMap;
    e << YAML::EndMap;

    e << YAML::Key << "observer" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "enabled" << YAML::Value << s.observer.enabled;
    e << YAML::Key << "bandwidth" << YAML::Value << s.observer.bandwidth;
    e << YAML::Key << "feedforward" << YAML::Value << s.observer.feedforward;
    e << YAML::Key << "disturbance_bound" << YAML::Value << s.observer.disturbance_bound;
    e << YAML::EndMap;

    e << YAML::Key << "links" << YAML::Value << YAML::BeginMap;
    detail::emit_link(e, "pose", s.pose_link);
    detail::emit_link(e, "command", s.command_link);
    e << YAML::EndMap;

    e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "position_std" << YAML::Value << s.noise.position_std;
    e << YAML::Key << "attitude_std" << YAML::Value << s.noise.attitude_std;
    e << YAML::Key << "rate_std" << YAML::Value << s.noise.rate_std;
    e << YAML::EndMap;

    e << YAML::Key << "setpoint" << YAML::Value << YAML::BeginMap << YAML::Key << "position" << YAML::Value;
    emit_vec(e, s.setpoint);
    e << YAML::Key << "yaw" << YAML::Value << s.yaw_setpoint << YAML::EndMap;

    e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap << YAML::Key << "position" << YAML::Value;
    emit_vec(e, s.initial_position);
    e << YAML::Key << "attitude" << YAML::Value;
    emit_vec(e, s.initial_attitude.as_vector());
    e << YAML::EndMap;

    e << YAML::Key << "disturbances" << YAML::Value << YAML::BeginSeq;
    for (const auto& d : s.plant.disturbances) {
        e << YAML::BeginMap << YAML::Key << "start" << YAML::Value << d.start << YAML::Key << "duration"
          << YAML::Value << d.duration << YAML::Key << "force" << YAML::Value;
        emit_vec(e, d.force);
        e << YAML::Key << "moment" << YAML::Value;
        emit_vec(e, d.moment);
        e << YAML::EndMap;
    }
    e << YAML::EndSeq;

    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

inline void save_scenario(const std::string& path, const Scenario& s) {
    std::ofstream out(path);
    if (!out) throw ConfigError(path, 0, "cannot write scenario file");
    out << emit_scenario(s);
}

}  // namespace aguard
