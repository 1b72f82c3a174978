#include "detector.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gisi {

double weight_lambda(const BitBlock& x, const RealBlock& y, const ChannelModel& model) {
    if (x.size() != y.size()) throw std::invalid_argument("weight_lambda: length mismatch");
    const int n = static_cast<int>(x.size());
    const int order = model.order();
    const double inv2v = 1.0 / (2.0 * model.noise_var);
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * model.noise_var);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double mu = 0.0;
        for (int l = 0; l <= order && l <= i; ++l)
            mu += model.taps[static_cast<std::size_t>(l)] * (1.0 - 2.0 * x[static_cast<std::size_t>(i - l)]);
        const double d = y[static_cast<std::size_t>(i)] - mu;
        acc += log_norm - d * d * inv2v;
    }
    return acc;
}

DetectionResult viterbi_hard(const RealBlock& y, const ChannelModel& model) {
    const int n = static_cast<int>(y.size());
    if (n < 1) throw std::invalid_argument("viterbi_hard: empty observation");
    const int order = model.order();
    const unsigned states = 1u << order;
    const unsigned mask = states - 1;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    // State packs the last L bits, newest in bit 0. Only the all-zero history
    // exists before the block (zero-signal boundary).
    std::vector<double> metric(states, kNegInf), next(states);
    metric[0] = 0.0;
    // survivor bookkeeping: predecessor state and chosen bit, packed as s<<1|b
    std::vector<std::uint32_t> pred(static_cast<std::size_t>(n) * states);

    // Means for full-history stages (i > L) depend on (state, bit) only.
    std::vector<double> mean_full(static_cast<std::size_t>(states) * 2);
    for (unsigned s = 0; s < states; ++s) {
        for (unsigned b = 0; b < 2; ++b) {
            double mu = model.taps[0] * (1.0 - 2.0 * b);
            for (int l = 1; l <= order; ++l)
                mu += model.taps[static_cast<std::size_t>(l)] * (1.0 - 2.0 * ((s >> (l - 1)) & 1u));
            mean_full[s * 2 + b] = mu;
        }
    }

    std::uint64_t evals = 0;
    for (int i = 0; i < n; ++i) {
        const double yi = y[static_cast<std::size_t>(i)];
        std::fill(next.begin(), next.end(), kNegInf);
        std::uint32_t* pr = pred.data() + static_cast<std::size_t>(i) * states;
        const bool truncated = i < order;
        for (unsigned s = 0; s < states; ++s) {
            for (unsigned b = 0; b < 2; ++b) {
                double mu;
                if (!truncated) {
                    mu = mean_full[s * 2 + b];
                } else {
                    // taps reaching past the block start contribute nothing
                    mu = model.taps[0] * (1.0 - 2.0 * b);
                    for (int l = 1; l <= order && l <= i; ++l)
                        mu += model.taps[static_cast<std::size_t>(l)] * (1.0 - 2.0 * ((s >> (l - 1)) & 1u));
                }
                const double d = yi - mu;
                const double cand = metric[s] - d * d;
                ++evals;
                const unsigned ns = ((s << 1) | b) & mask;
                if (cand > next[ns]) {  // strict: on ties the smaller s wins
                    next[ns] = cand;
                    pr[ns] = (s << 1) | b;
                }
            }
        }
        metric.swap(next);
    }

    unsigned best = 0;
    for (unsigned s = 1; s < states; ++s)
        if (metric[s] > metric[best]) best = s;

    DetectionResult res;
    res.hard_sequence.assign(static_cast<std::size_t>(n), 0);
    unsigned cur = best;
    for (int i = n - 1; i >= 0; --i) {
        const std::uint32_t entry = pred[static_cast<std::size_t>(i) * states + cur];
        res.hard_sequence[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(entry & 1u);
        cur = entry >> 1;
    }
    res.weight = weight_lambda(res.hard_sequence, y, model);
    res.branch_evals = evals;
    return res;
}

}  // namespace gisi
