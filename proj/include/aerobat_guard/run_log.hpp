// Time-indexed run record and its CSV encoding. Doubles are written in
// shortest round-trip form so two identical runs give identical files.
#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "aerobat_guard/guard_body.hpp"
#include "aerobat_guard/observer.hpp"
#include "aerobat_guard/spatial.hpp"

namespace aguard {

using estimation::Vec6;

struct LogRow {
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 euler = Vec3::Zero();  // roll, pitch, yaw
    Vec3 setpoint = Vec3::Zero();
    Vec6 x1_hat = Vec6::Zero();
    Vec6 x2_hat = Vec6::Zero();
    Vec6 x3_hat = Vec6::Zero();
    Thrusts thrust = Thrusts::Zero();
    bool saturated = false;
    Vec6 inertial = Vec6::Zero();  // g2^+ g1
    Vec6 aero = Vec6::Zero();      // g2^+ g3 x3_hat
    Vec3 aerobat_position = Vec3::Zero();
};

struct RunLog {
    std::vector<LogRow> rows;
    bool diverged = false;
    std::string halt_reason;
    std::int64_t ticks = 0;
    std::int64_t control_steps = 0;
    std::int64_t mocap_samples = 0;
    std::int64_t pose_deliveries = 0;
    double max_orthonormality_error = 0.0;  // max ||R^T R - I||_F over the run
};

inline std::vector<std::string> log_header() {
    std::vector<std::string> h{"t", "x", "y", "z", "roll", "pitch", "yaw", "sp_x", "sp_y", "sp_z"};
    for (const char* p : {"x1_hat", "x2_hat", "x3_hat"}) {
        for (int i = 0; i < 6; ++i) h.push_back(fmt::format("{}_{}", p, i));
    }
    for (int i = 1; i <= 6; ++i) h.push_back(fmt::format("f{}", i));
    h.push_back("saturated");
    for (int i = 0; i < 6; ++i) h.push_back(fmt::format("g2inv_g1_{}", i));
    for (int i = 0; i < 6; ++i) h.push_back(fmt::format("g2inv_g3x3_{}", i));
    for (const char* c : {"aerobat_x", "aerobat_y", "aerobat_z"}) h.push_back(c);
    return h;
}

inline void write_log(std::ostream& out, const RunLog& log) {
    const auto header = log_header();
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) line += (i ? "," : "") + header[i];
    out << line << '\n';
    auto put = [&line](double v) { fmt::format_to(std::back_inserter(line), ",{}", v); };
    for (const auto& r : log.rows) {
        line = fmt::format("{}", r.t);
        for (const Vec3* v : {&r.position, &r.euler, &r.setpoint}) {
            for (int i = 0; i < 3; ++i) put((*v)[i]);
        }
        for (const Vec6* v : {&r.x1_hat, &r.x2_hat, &r.x3_hat}) {
            for (int i = 0; i < 6; ++i) put((*v)[i]);
        }
        for (int i = 0; i < 6; ++i) put(r.thrust[i]);
        line += r.saturated ? ",1" : ",0";
        for (const Vec6* v : {&r.inertial, &r.aero}) {
            for (int i = 0; i < 6; ++i) put((*v)[i]);
        }
        for (int i = 0; i < 3; ++i) put(r.aerobat_position[i]);
        out << line << '\n';
    }
    if (log.diverged) out << "# halted: " << log.halt_reason << '\n';
}

inline void write_log(const std::string& path, const RunLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write log " + path);
    write_log(out, log);
}

inline RunLog read_log(std::istream& in) {
    RunLog log;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_log: empty log");
    const auto header = log_header();
    {
        std::vector<std::string> got;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) got.push_back(cell);
        if (got != header) throw std::runtime_error("read_log: unexpected header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            log.diverged = true;
            const std::string tag = "# halted: ";
            log.halt_reason = line.rfind(tag, 0) == 0 ? line.substr(tag.size()) : line.substr(1);
            continue;
        }
        std::vector<double> v;
        v.reserve(header.size());
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            double d = 0.0;
            const auto res = std::from_chars(p, comma, d);
            if (res.ec != std::errc() || res.ptr != comma) {
                throw std::runtime_error(fmt::format("read_log: bad number on line {}", lineno));
            }
            v.push_back(d);
            p = comma + 1;
        }
        if (v.size() != header.size()) {
            throw std::runtime_error(fmt::format("read_log: line {} has {} fields, expected {}", lineno, v.size(),
                                                 header.size()));
        }
        LogRow r;
        std::size_t k = 0;
        r.t = v[k++];
        for (Vec3* x : {&r.position, &r.euler, &r.setpoint}) {
            for (int i = 0; i < 3; ++i) (*x)[i] = v[k++];
        }
        for (Vec6* x : {&r.x1_hat, &r.x2_hat, &r.x3_hat}) {
            for (int i = 0; i < 6; ++i) (*x)[i] = v[k++];
        }
        for (int i = 0; i < 6; ++i) r.thrust[i] = v[k++];
        r.saturated = v[k++] != 0.0;
        for (Vec6* x : {&r.inertial, &r.aero}) {
            for (int i = 0; i < 6; ++i) (*x)[i] = v[k++];
        }
        for (int i = 0; i < 3; ++i) r.aerobat_position[i] = v[k++];
        log.rows.push_back(r);
    }
    return log;
}

inline RunLog read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open log " + path);
    return read_log(in);
}

}  // namespace aguard
