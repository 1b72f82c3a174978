#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "detector.hpp"
#include "oracles.hpp"

using namespace gisi;

TEST_CASE("weight function matches the plain full-sum oracle") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 14);
        const int order = static_cast<int>(rng() % 3);
        const ChannelModel m = ChannelModel::create(oracle::random_taps(rng, order), 0.2 + (rng() % 100) / 50.0);
        const RealBlock y = oracle::random_observation(rng, n);
        const BitBlock x = oracle::random_bits(rng, n);
        CHECK(weight_lambda(x, y, m) == doctest::Approx(oracle::lambda_full(x, y, m)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(weight_lambda(BitBlock(3, 0), RealBlock(4, 0.0), ChannelModel::create({1.0}, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("worked first-order instance") {
    const ChannelModel m = oracle::example2_model();
    const RealBlock y = oracle::example2_y();
    const DetectionResult det = viterbi_hard(y, m);
    CHECK(bits_to_string(det.hard_sequence) == "0001");
    CHECK(det.weight == doctest::Approx(-4.5595858863547836).epsilon(1e-12));
    CHECK(det.branch_evals == 4u * 2u * 2u);

    // the reported weight is recomputable
    CHECK(det.weight == weight_lambda(det.hard_sequence, y, m));

    // flipping the last bit costs 3.96 (reference value, printed to 2 decimals)
    const double drop = det.weight - weight_lambda(oracle::flip_set(det.hard_sequence, {4}), y, m);
    CHECK(drop == doctest::Approx(3.9583388750988178).epsilon(1e-12));
    CHECK(std::abs(drop - 3.96) < 0.01);
}

TEST_CASE("worked second-order instance") {
    const DetectionResult det = viterbi_hard(oracle::example3_y(), oracle::example3_model());
    CHECK(bits_to_string(det.hard_sequence) == "0100");
    CHECK(det.branch_evals == 4u * 4u * 2u);
}

TEST_CASE("pairwise differences ignore the gaussian normalizer") {
    std::mt19937_64 rng(5);
    const ChannelModel m = ChannelModel::create(oracle::random_taps(rng, 1), 0.8);
    const RealBlock y = oracle::random_observation(rng, 10);
    const BitBlock a = oracle::random_bits(rng, 10), b = oracle::random_bits(rng, 10);
    const double with = oracle::lambda_full(a, y, m, true) - oracle::lambda_full(b, y, m, true);
    const double without = oracle::lambda_full(a, y, m, false) - oracle::lambda_full(b, y, m, false);
    CHECK(with == doctest::Approx(without).epsilon(1e-12));
}

TEST_CASE("memoryless flip penalty reduces to the llr magnitude") {
    std::mt19937_64 rng(7);
    const ChannelModel m = ChannelModel::create({1.0}, 1.0);
    const RealBlock y = oracle::random_observation(rng, 12);
    const DetectionResult det = viterbi_hard(y, m);
    for (int i = 1; i <= 12; ++i) {
        const double drop = det.weight - weight_lambda(oracle::flip_set(det.hard_sequence, {i}), y, m);
        CHECK(drop == doctest::Approx(2.0 * std::abs(y[static_cast<std::size_t>(i - 1)]) * m.taps[0] / m.noise_var)
                          .epsilon(1e-10));
    }
}

TEST_CASE("viterbi equals the exhaustive argmax") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 11);  // up to 12
        const int order = static_cast<int>(rng() % 3);   // up to L = 2
        const ChannelModel m = ChannelModel::create(oracle::random_taps(rng, order), 0.3 + (rng() % 100) / 60.0);
        const RealBlock y = oracle::random_observation(rng, n);
        const DetectionResult det = viterbi_hard(y, m);
        const auto [best, best_v] = oracle::argmax_lambda(y, m);
        CHECK(det.weight == doctest::Approx(best_v).epsilon(1e-9));
        CHECK(det.branch_evals == static_cast<std::uint64_t>(n) * (1ull << order) * 2);
    }
}

TEST_CASE("memoryless detection is the sign rule") {
    std::mt19937_64 rng(13);
    const ChannelModel m = ChannelModel::create({1.0}, 0.5);
    const RealBlock y = oracle::random_observation(rng, 40);
    const DetectionResult det = viterbi_hard(y, m);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(det.hard_sequence[i] == (y[i] < 0.0 ? 1 : 0));
}

TEST_CASE("noise-scale invariance: argmax fixed, weight differences rescale") {
    std::mt19937_64 rng(17);
    const ChannelModel m = ChannelModel::create(oracle::random_taps(rng, 2), 0.9);
    const RealBlock y = oracle::random_observation(rng, 20);
    const DetectionResult base = viterbi_hard(y, m);
    const BitBlock other = oracle::random_bits(rng, 20);
    const double base_gap = base.weight - weight_lambda(other, y, m);
    for (double alpha : {0.5, 2.0, 7.25}) {
        const ChannelModel ms = ChannelModel::create(m.taps, m.noise_var * alpha * alpha);
        const DetectionResult scaled = viterbi_hard(y, ms);
        CHECK(scaled.hard_sequence == base.hard_sequence);
        const double gap = scaled.weight - weight_lambda(other, y, ms);
        CHECK(gap == doctest::Approx(base_gap / (alpha * alpha)).epsilon(1e-9));
    }
    // for a memoryless channel the argmax is the sign rule, so scaling the
    // observations themselves cannot change it either
    const ChannelModel awgn = ChannelModel::create({1.0}, 0.4);
    const BitBlock hard = viterbi_hard(y, awgn).hard_sequence;
    for (double alpha : {0.5, 3.0}) {
        RealBlock ys = y;
        for (double& v : ys) v *= alpha;
        CHECK(viterbi_hard(ys, awgn).hard_sequence == hard);
    }
}
