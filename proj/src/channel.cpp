#include "channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gisi {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double tap_energy(const std::vector<double>& taps) {
    double e = 0.0;
    for (double h : taps) e += h * h;
    return e;
}

}  // namespace

ChannelModel ChannelModel::create(std::vector<double> taps, double sigma2) {
    if (taps.empty()) throw std::invalid_argument("ChannelModel: at least one tap required");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("ChannelModel: sigma^2 must be positive");
    if (std::abs(tap_energy(taps) - 1.0) > 1e-12)
        throw std::invalid_argument("ChannelModel: taps must satisfy sum h^2 = 1");
    return ChannelModel{std::move(taps), sigma2};
}

ChannelModel ChannelModel::create_normalized(std::vector<double> taps, double sigma2, bool* normalized) {
    if (taps.empty()) throw std::invalid_argument("ChannelModel: at least one tap required");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("ChannelModel: sigma^2 must be positive");
    const double e = tap_energy(taps);
    if (!(e > 0.0)) throw std::invalid_argument("ChannelModel: taps have zero energy");
    bool scaled = std::abs(e - 1.0) > 1e-12;
    if (scaled) {
        const double s = 1.0 / std::sqrt(e);
        for (double& h : taps) h *= s;
    }
    if (normalized) *normalized = scaled;
    return ChannelModel{std::move(taps), sigma2};
}

GaussianStream::GaussianStream(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
}

std::uint64_t GaussianStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double GaussianStream::next(double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return spare_ * sigma;
    }
    // Box-Muller with u1 in (0,1], u2 in [0,1)
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a) * sigma;
}

RealBlock bpsk_map(const BitBlock& x) {
    RealBlock w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = 1.0 - 2.0 * x[i];
    return w;
}

RealBlock transmit(const BitBlock& x, const ChannelModel& model, GaussianStream& noise) {
    if (x.empty()) throw std::invalid_argument("transmit: empty input block");
    const int n = static_cast<int>(x.size());
    const int order = model.order();
    const double sigma = std::sqrt(model.noise_var);
    RealBlock w = bpsk_map(x);
    RealBlock y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double mu = 0.0;
        for (int l = 0; l <= order && l <= i; ++l) mu += model.taps[static_cast<std::size_t>(l)] * w[static_cast<std::size_t>(i - l)];
        y[static_cast<std::size_t>(i)] = mu + noise.next(sigma);
    }
    return y;
}

double ebn0_to_sigma2(double ebn0_db, double rate) {
    if (!(rate > 0.0) || rate > 1.0) throw std::invalid_argument("ebn0_to_sigma2: rate must be in (0,1]");
    return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = master;
    std::uint64_t h = splitmix64(x);
    x ^= a + 0x632BE59BD9B4E019ull;
    h ^= splitmix64(x);
    x ^= b + 0x9E6C63D0876A9A47ull;
    h ^= splitmix64(x);
    return h;
}

}  // namespace gisi
