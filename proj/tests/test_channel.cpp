#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "channel.hpp"
#include "oracles.hpp"

using namespace gisi;

TEST_CASE("bpsk mapping") {
    CHECK(bpsk_map({0}) == RealBlock{1.0});
    CHECK(bpsk_map({1}) == RealBlock{-1.0});
    const BitBlock x = parse_bits("0110101");
    BitBlock flipped = x;
    for (auto& b : flipped) b ^= 1;
    const RealBlock a = bpsk_map(x), b = bpsk_map(flipped);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == -b[i]);
}

TEST_CASE("tap validation and normalization") {
    CHECK_NOTHROW(ChannelModel::create({std::sqrt(0.9), std::sqrt(0.1)}, 1.0));
    CHECK_THROWS_AS(ChannelModel::create({1.0, 0.5}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelModel::create({1.0}, 0.0), std::invalid_argument);

    bool normalized = false;
    const ChannelModel m = ChannelModel::create_normalized({3.0, 4.0}, 1.0, &normalized);
    CHECK(normalized);
    CHECK(m.taps[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(m.taps[1] == doctest::Approx(0.8).epsilon(1e-15));
    double e = 0.0;
    for (double h : m.taps) e += h * h;
    CHECK(std::abs(e - 1.0) <= 1e-12);

    normalized = true;
    ChannelModel::create_normalized({std::sqrt(0.5), std::sqrt(0.5)}, 1.0, &normalized);
    CHECK_FALSE(normalized);
}

TEST_CASE("noiseless transmit") {
    // memoryless: plain BPSK
    {
        const ChannelModel m = ChannelModel::create({1.0}, 1e-30);
        GaussianStream s(1);
        const RealBlock y = transmit(parse_bits("0101"), m, s);
        const RealBlock want{1.0, -1.0, 1.0, -1.0};
        for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-9));
    }
    // first-order: hand convolution with nothing before the block
    {
        const double h0 = std::sqrt(0.9), h1 = std::sqrt(0.1);
        const ChannelModel m = ChannelModel::create({h0, h1}, 1e-30);
        GaussianStream s(2);
        const RealBlock y = transmit(parse_bits("0001"), m, s);
        CHECK(y[0] == doctest::Approx(h0).epsilon(1e-9));
        CHECK(y[1] == doctest::Approx(h0 + h1).epsilon(1e-9));
        CHECK(y[2] == doctest::Approx(h0 + h1).epsilon(1e-9));
        CHECK(y[3] == doctest::Approx(-h0 + h1).epsilon(1e-9));
    }
}

TEST_CASE("transmit determinism") {
    const ChannelModel m = ChannelModel::create({std::sqrt(0.8), std::sqrt(0.15), std::sqrt(0.05)}, 0.3);
    const BitBlock x = parse_bits("01011010010110100101");
    GaussianStream s1(42), s2(42), s3(43);
    const RealBlock y1 = transmit(x, m, s1);
    const RealBlock y2 = transmit(x, m, s2);
    const RealBlock y3 = transmit(x, m, s3);
    CHECK(y1 == y2);
    CHECK(y1 != y3);
}

TEST_CASE("noise statistics") {
    GaussianStream s(1234);
    const double sigma2 = 2.0;
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.next(std::sqrt(sigma2));
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(var - sigma2) / sigma2 < 0.01);
    CHECK(std::abs(mean) < 0.01);
}

TEST_CASE("memoryless transmit is bpsk plus the identical noise stream") {
    const ChannelModel m = ChannelModel::create({1.0}, 0.7);
    const BitBlock x = parse_bits("0100110");
    GaussianStream s1(77), s2(77);
    const RealBlock y = transmit(x, m, s1);
    const RealBlock w = bpsk_map(x);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(y[i] == w[i] + s2.next(std::sqrt(0.7)));
}

TEST_CASE("ebn0 conversion") {
    CHECK(ebn0_to_sigma2(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ebn0_to_sigma2(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    // SNR = 1/sigma^2 once the 2*R*Eb factor is stripped
    const double s2 = ebn0_to_sigma2(3.0, 0.25);
    CHECK(1.0 / s2 == doctest::Approx(2.0 * 0.25 * std::pow(10.0, 0.3)).epsilon(1e-12));
    CHECK_THROWS_AS(ebn0_to_sigma2(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("seed mixing changes with every component") {
    CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 2, 4));
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 3));
    CHECK(mix_seed(1, 2, 3) != mix_seed(2, 2, 3));
}
