#ifndef GISI_CHANNEL_HPP
#define GISI_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "bits.hpp"

namespace gisi {

// BPSK over a Gaussian ISI channel: y_i = sum_l h_l W_{i-l} + z_i, with
// W_j = 0 for j <= 0 (nothing is transmitted before the block) and
// z ~ N(0, sigma^2) i.i.d. Taps are unit-energy: sum h_l^2 = 1.
struct ChannelModel {
    std::vector<double> taps;  // h_0 .. h_L
    double noise_var = 1.0;    // sigma^2

    int order() const { return static_cast<int>(taps.size()) - 1; }

    // Validates sum h^2 = 1 within 1e-12 and sigma^2 > 0.
    static ChannelModel create(std::vector<double> taps, double sigma2);
    // Rescales the taps to unit energy; *normalized reports whether it had to.
    static ChannelModel create_normalized(std::vector<double> taps, double sigma2,
                                          bool* normalized = nullptr);
};

// Deterministic seeded Gaussian stream: xoshiro256++ with Box-Muller on top.
// Self-contained so that identical seeds give identical samples everywhere.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed);
    double next(double sigma);
    std::uint64_t next_u64();

  private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

RealBlock bpsk_map(const BitBlock& x);  // bit 0 -> +1, bit 1 -> -1
RealBlock transmit(const BitBlock& x, const ChannelModel& model, GaussianStream& noise);

// Eb/N0 (dB) to noise variance at unit symbol energy: sigma^2 = 1/(2 R 10^(dB/10)).
double ebn0_to_sigma2(double ebn0_db, double rate);

// Stable seed derivation for per-trial streams.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

}  // namespace gisi

#endif
