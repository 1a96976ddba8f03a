#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "aerobat_guard/telemetry.hpp"
#include "aerobat_guard/udp.hpp"

using namespace aguard::telemetry;

namespace {

PosePacket random_pose(std::mt19937_64& rng) {
    std::uniform_real_distribution<float> u(-1e3f, 1e3f);
    std::normal_distribution<double> n;
    double q[4];
    double norm = 0.0;
    for (double& v : q) {
        v = n(rng);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    return {u(rng), u(rng), u(rng), static_cast<float>(q[0] / norm), static_cast<float>(q[1] / norm),
            static_cast<float>(q[2] / norm), static_cast<float>(q[3] / norm)};
}

CommandPacket random_command(std::mt19937_64& rng) {
    std::uniform_real_distribution<float> ang(-3.2f, 3.2f), f(0.0f, 0.6f);
    CommandPacket c{ang(rng), ang(rng), ang(rng), {}};
    for (float& t : c.thrust) t = f(rng);
    return c;
}

template <std::size_t N>
bool same_bits(const std::array<std::byte, N>& a, const std::array<std::byte, N>& b) {
    return a == b;
}

}  // namespace

TEST(PoseCodec, IdentityRoundTrip) {
    const PosePacket p{0, 0, 0, 1, 0, 0, 0};
    const auto bytes = encode_pose(p);
    EXPECT_EQ(bytes.size(), 32u);
    EXPECT_EQ(decode_pose(bytes), p);
}

TEST(PoseCodec, Layout) {
    const PosePacket p{1.0f, -2.0f, 0.5f, 1, 0, 0, 0};
    const auto b = encode_pose(p);
    EXPECT_EQ(static_cast<char>(b[0]), 'A');
    EXPECT_EQ(static_cast<char>(b[1]), 'G');
    EXPECT_EQ(static_cast<char>(b[2]), 'P');
    EXPECT_EQ(static_cast<char>(b[3]), '1');
    // 1.0f = 0x3F800000, little-endian.
    EXPECT_EQ(b[4], std::byte{0x00});
    EXPECT_EQ(b[6], std::byte{0x80});
    EXPECT_EQ(b[7], std::byte{0x3F});
    // -2.0f = 0xC0000000.
    EXPECT_EQ(b[11], std::byte{0xC0});
}

TEST(PoseCodec, RandomRoundTrips) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const PosePacket p = random_pose(rng);
        const PosePacket back = decode_pose(encode_pose(p));
        EXPECT_EQ(std::bit_cast<std::uint32_t>(back.x), std::bit_cast<std::uint32_t>(p.x));
        ASSERT_EQ(back, p);
        ASSERT_NEAR(std::sqrt(double(p.qw) * p.qw + double(p.qx) * p.qx + double(p.qy) * p.qy + double(p.qz) * p.qz),
                    1.0, 1e-6);
    }
}

TEST(PoseCodec, SpecialValuesBitExact) {
    const PosePacket p{-0.0f, std::numeric_limits<float>::denorm_min(), std::numeric_limits<float>::max(), 1, 0, 0, 0};
    const PosePacket back = decode_pose(encode_pose(p));
    EXPECT_TRUE(std::signbit(back.x));
    EXPECT_EQ(back.y, p.y);
    EXPECT_EQ(back.z, p.z);
}

TEST(PoseCodec, TruncatedBufferRejected) {
    const auto b = encode_pose(PosePacket{});
    EXPECT_THROW(decode_pose(std::span<const std::byte>(b.data(), 31)), DecodeError);
    EXPECT_THROW(decode_pose(std::span<const std::byte>()), DecodeError);
}

TEST(PoseCodec, WrongMagicRejected) {
    auto b = encode_pose(PosePacket{});
    b[2] = std::byte{'C'};
    EXPECT_THROW(decode_pose(b), DecodeError);
    const auto c = encode_command(CommandPacket{});
    EXPECT_THROW(decode_pose(std::span<const std::byte>(c.data(), 32)), DecodeError);
}

TEST(CommandCodec, ZeroRoundTrip) {
    const CommandPacket c{};
    const auto b = encode_command(c);
    EXPECT_EQ(b.size(), 40u);
    EXPECT_EQ(decode_command(b), c);
}

TEST(CommandCodec, SaturatedRoundTrip) {
    CommandPacket c{0.35f, -0.35f, 3.14f, {}};
    c.thrust.fill(0.6f);
    EXPECT_EQ(decode_command(encode_command(c)), c);
}

TEST(CommandCodec, RandomRoundTrips) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10000; ++i) {
        const CommandPacket c = random_command(rng);
        ASSERT_EQ(decode_command(encode_command(c)), c);
    }
}

TEST(CommandCodec, CorruptedMagicRejected) {
    auto b = encode_command(CommandPacket{});
    b[0] = std::byte{'X'};
    EXPECT_THROW(decode_command(b), DecodeError);
    const auto p = encode_pose(PosePacket{});
    EXPECT_THROW(decode_command(p), DecodeError);
}

TEST(Quantize, Grid) {
    const double fmax = 0.6, step = fmax / 65535.0;
    EXPECT_EQ(quantize_thrust(0.0, fmax), 0.0);
    EXPECT_EQ(quantize_thrust(fmax, fmax), fmax);
    EXPECT_EQ(quantize_thrust(1.0, fmax), fmax);
    EXPECT_EQ(quantize_thrust(-0.1, fmax), 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, fmax);
    for (int i = 0; i < 1000; ++i) {
        const double f = u(rng);
        const double q = quantize_thrust(f, fmax);
        EXPECT_LE(std::abs(q - f), 0.5 * step * (1 + 1e-9));
        EXPECT_NEAR(std::round(q / step), q / step, 1e-6);
    }
    EXPECT_EQ(quantize_thrust(0.123456789, fmax, 0), 0.123456789);
}

TEST(Link, ZeroLatencyImmediateInOrder) {
    Link<int> link({240, 0.0, 0.0, 0.0}, 1);
    for (int i = 0; i < 10; ++i) {
        const auto out = link_step(link, i, i / 240.0);
        ASSERT_EQ(out.size(), 1u);
        EXPECT_EQ(out[0].packet, i);
        EXPECT_EQ(out[0].delivered, out[0].sent);
    }
}

TEST(Link, LatencyHoldsPackets) {
    Link<int> link({240, 0.0028, 0.0, 0.0}, 1);
    link.send(7, 0.0);
    EXPECT_TRUE(link.poll(0.0027).empty());
    const auto out = link.poll(0.0028);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].packet, 7);
}

TEST(Link, DeliveredWithinOneControlTick) {
    // 240 Hz pose stream polled by a 200 Hz loop on a 12 kHz integer clock.
    const int base = 12000, pose_div = base / 240, ctrl_div = base / 200;
    Link<long> link({240, 0.0028, 0.0, 0.0}, 9);
    long checked = 0;
    for (long k = 0; k <= 2 * base; ++k) {
        const double t = static_cast<double>(k) / base;
        if (k % pose_div == 0) link.send(k, t);
        if (k % ctrl_div == 0) {
            for (const auto& d : link.poll(t)) {
                const long first_tick = (d.packet + ctrl_div - 1) / ctrl_div;  // first control tick at or after send
                EXPECT_LE(k / ctrl_div, first_tick + 1) << "sent at tick " << d.packet;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 470);
}

TEST(Link, JitterNeverEarlyAndOrdered) {
    const LinkModel m{240, 0.0028, 0.001, 0.1};
    Link<int> link(m, 5);
    double last = -1.0;
    int last_id = -1;
    for (int i = 0; i < 5000; ++i) {
        const double now = i / 240.0;
        for (const auto& d : link_step(link, i, now)) {
            EXPECT_GE(d.delivered, d.sent + m.latency - m.jitter - 1e-15);
            EXPECT_GE(d.delivered, last);
            EXPECT_GT(d.packet, last_id);
            last = d.delivered;
            last_id = d.packet;
        }
    }
}

TEST(Link, DropFraction) {
    const double eps = 0.05;
    Link<int> link({240, 0.0, 0.0, 1.0 - eps}, 11);
    std::size_t got = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) got += link_step(link, i, i / 240.0).size();
    const double frac = static_cast<double>(got) / n;
    EXPECT_NEAR(frac, eps, 4 * std::sqrt(eps * (1 - eps) / n));
    EXPECT_EQ(link.sent(), static_cast<std::size_t>(n));
}

TEST(Link, SeededTraceDeterministic) {
    auto trace = [](std::uint64_t seed) {
        Link<int> link({240, 0.0028, 0.002, 0.2}, seed);
        std::vector<std::pair<int, double>> out;
        for (int i = 0; i < 2000; ++i) {
            for (const auto& d : link_step(link, i, i / 240.0)) out.emplace_back(d.packet, d.delivered);
        }
        return out;
    };
    EXPECT_EQ(trace(42), trace(42));
    EXPECT_NE(trace(42), trace(43));
}

TEST(Link, InvalidModel) {
    EXPECT_THROW((Link<int>({240, -1.0, 0.0, 0.0}, 1)), std::domain_error);
    EXPECT_THROW((Link<int>({240, 0.0, 0.0, 1.0}, 1)), std::domain_error);
    EXPECT_THROW((Link<int>({0, 0.0, 0.0, 0.0}, 1)), std::domain_error);
}

TEST(Udp, LoopbackRoundTrip) {
    UdpEndpoint rx, tx;
    const PosePacket p{0.1f, 0.2f, 0.3f, 1, 0, 0, 0};
    tx.send_to(encode_pose(p), rx.port());
    const auto got = rx.receive(1000);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(decode_pose(*got), p);
    EXPECT_FALSE(rx.receive(10).has_value());
}
