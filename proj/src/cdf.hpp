#ifndef GISI_CDF_HPP
#define GISI_CDF_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "channel.hpp"
#include "codes.hpp"
#include "reliability.hpp"

namespace gisi {

// Continuous two-segment piecewise-linear approximation of the quantile
// function, least-squares fitted with a grid-searched breakpoint.
struct TwoLineFit {
    double breakpoint = 0.5;     // p coordinate of the knot
    double value_at_break = 0.0;
    double slope_lo = 0.0;       // p <= breakpoint
    double slope_hi = 0.0;       // p >  breakpoint
    double residual = 0.0;       // sum of squared residuals on the fit grid

    double eval(double p) const {
        const double d = p - breakpoint;
        return value_at_break + (d <= 0.0 ? slope_lo : slope_hi) * d;
    }
};

// Empirical distribution of burst sequence reliabilities at one
// (code, taps, sigma^2) operating point.
struct CdfModel {
    std::vector<double> sorted_samples;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string code_id;
    std::vector<double> taps;
    double sigma2 = 0.0;
    int g = 0;

    // Inverse CDF for p in (0,1): linear interpolation between order
    // statistics placed at k/(n+1), clamped to the extreme samples.
    double quantile(double p) const;
};

// Pools the reliabilities of every dictionary burst over `trials` random
// codeword transmissions. Deterministic given the seed.
CdfModel build_cdf_model(const CodeSpec& code, const ChannelModel& model,
                         const BurstDictionary& dict, std::uint64_t trials,
                         std::uint64_t seed, const std::string& code_id = "");

TwoLineFit fit_two_line(const CdfModel& cdf);

// Cache file: text header followed by the raw little-endian samples.
void save_cdf_model(const CdfModel& cdf, const std::string& path);
CdfModel load_cdf_model(const std::string& path);

}  // namespace gisi

#endif
