// Pose and command packet codecs, a simulated lossy/latent link, and PWM
// quantization.
//
// Wire layout (all little-endian IEEE-754 binary32):
//   pose:    "AGP1" x y z qw qx qy qz            32 bytes
//   command: "AGC1" roll pitch yaw f1 .. f6      40 bytes
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <deque>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aguard::telemetry {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PosePacket {
    float x = 0, y = 0, z = 0;
    float qw = 1, qx = 0, qy = 0, qz = 0;

    bool operator==(const PosePacket&) const = default;
};

struct CommandPacket {
    float roll = 0, pitch = 0, yaw = 0;
    std::array<float, 6> thrust{};

    bool operator==(const CommandPacket&) const = default;
};

inline constexpr std::size_t kPoseBytes = 4 + 7 * 4;
inline constexpr std::size_t kCommandBytes = 4 + 9 * 4;
inline constexpr std::array<std::byte, 4> kPoseMagic{std::byte{'A'}, std::byte{'G'}, std::byte{'P'}, std::byte{'1'}};
inline constexpr std::array<std::byte, 4> kCommandMagic{std::byte{'A'}, std::byte{'G'}, std::byte{'C'},
                                                        std::byte{'1'}};

namespace detail {

inline void put_f32(std::byte* out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out[i] = static_cast<std::byte>((bits >> (8 * i)) & 0xFFu);
}

inline float get_f32(const std::byte* in) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(in[i]) << (8 * i);
    return std::bit_cast<float>(bits);
}

template <std::size_t N>
void check_frame(std::span<const std::byte> buf, const std::array<std::byte, 4>& magic, const char* what) {
    if (buf.size() != N) {
        throw DecodeError(std::string(what) + ": expected " + std::to_string(N) + " bytes, got " +
                          std::to_string(buf.size()));
    }
    if (!std::equal(magic.begin(), magic.end(), buf.begin())) throw DecodeError(std::string(what) + ": bad magic");
}

}  // namespace detail

inline std::array<std::byte, kPoseBytes> encode_pose(const PosePacket& p) {
    std::array<std::byte, kPoseBytes> out{};
    std::copy(kPoseMagic.begin(), kPoseMagic.end(), out.begin());
    const std::array<float, 7> v{p.x, p.y, p.z, p.qw, p.qx, p.qy, p.qz};
    for (std::size_t i = 0; i < v.size(); ++i) detail::put_f32(out.data() + 4 + 4 * i, v[i]);
    return out;
}

inline PosePacket decode_pose(std::span<const std::byte> buf) {
    detail::check_frame<kPoseBytes>(buf, kPoseMagic, "decode_pose");
    const std::byte* d = buf.data() + 4;
    return {detail::get_f32(d), detail::get_f32(d + 4), detail::get_f32(d + 8), detail::get_f32(d + 12),
            detail::get_f32(d + 16), detail::get_f32(d + 20), detail::get_f32(d + 24)};
}

inline std::array<std::byte, kCommandBytes> encode_command(const CommandPacket& c) {
    std::array<std::byte, kCommandBytes> out{};
    std::copy(kCommandMagic.begin(), kCommandMagic.end(), out.begin());
    detail::put_f32(out.data() + 4, c.roll);
    detail::put_f32(out.data() + 8, c.pitch);
    detail::put_f32(out.data() + 12, c.yaw);
    for (std::size_t i = 0; i < 6; ++i) detail::put_f32(out.data() + 16 + 4 * i, c.thrust[i]);
    return out;
}

inline CommandPacket decode_command(std::span<const std::byte> buf) {
    detail::check_frame<kCommandBytes>(buf, kCommandMagic, "decode_command");
    const std::byte* d = buf.data() + 4;
    CommandPacket c;
    c.roll = detail::get_f32(d);
    c.pitch = detail::get_f32(d + 4);
    c.yaw = detail::get_f32(d + 8);
    for (std::size_t i = 0; i < 6; ++i) c.thrust[i] = detail::get_f32(d + 12 + 4 * i);
    return c;
}

/// Quantize a thrust to the PWM grid: round(f / f_max * (2^bits - 1)) steps.
/// bits == 0 disables quantization.
inline double quantize_thrust(double f, double f_max, int bits = 16) {
    if (bits <= 0) return f;
    const double levels = std::ldexp(1.0, bits) - 1.0;
    return std::round(std::clamp(f, 0.0, f_max) / f_max * levels) * f_max / levels;
}

struct LinkModel {
    double rate_hz = 240.0;
    double latency = 0.0028;  // s
    double jitter = 0.0;      // s, uniform in [-jitter, +jitter]
    double drop = 0.0;        // probability in [0, 1)

    void validate() const {
        if (!(latency >= 0.0)) throw std::domain_error("link: latency must be >= 0");
        if (!(jitter >= 0.0)) throw std::domain_error("link: jitter must be >= 0");
        if (!(drop >= 0.0 && drop < 1.0)) throw std::domain_error("link: drop must be in [0, 1)");
        if (!(rate_hz > 0.0)) throw std::domain_error("link: rate must be positive");
    }
};

template <typename Packet>
struct Delivery {
    Packet packet;
    double sent = 0.0;
    double delivered = 0.0;
};

/// In-process simulated channel. Survivors are delivered in send order, never
/// before send + latency - jitter; the RNG is seeded so traces are repeatable.
template <typename Packet>
class Link {
public:
    Link(LinkModel m, std::uint64_t seed) : m_(m), rng_(seed) { m_.validate(); }

    void send(const Packet& p, double now) {
        ++sent_;
        if (m_.drop > 0.0 && unit_(rng_) < m_.drop) return;
        double due = now + m_.latency;
        if (m_.jitter > 0.0) due += m_.jitter * (2.0 * unit_(rng_) - 1.0);
        due = std::max({due, now, last_due_});
        last_due_ = due;
        queue_.push_back({p, now, due});
    }

    /// Packets whose delivery time is <= now, oldest first.
    std::vector<Delivery<Packet>> poll(double now) {
        std::vector<Delivery<Packet>> out;
        while (!queue_.empty() && queue_.front().delivered <= now) {
            out.push_back(queue_.front());
            queue_.pop_front();
        }
        delivered_ += out.size();
        return out;
    }

    std::size_t sent() const { return sent_; }
    std::size_t delivered() const { return delivered_; }
    std::size_t in_flight() const { return queue_.size(); }
    const LinkModel& model() const { return m_; }

private:
    LinkModel m_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::deque<Delivery<Packet>> queue_;
    double last_due_ = -INFINITY;
    std::size_t sent_ = 0;
    std::size_t delivered_ = 0;
};

/// link_step: enqueue one packet at `now` and return everything due by `now`.
template <typename Packet>
std::vector<Delivery<Packet>> link_step(Link<Packet>& link, const Packet& p, double now) {
    link.send(p, now);
    return link.poll(now);
}

}  // namespace aguard::telemetry
