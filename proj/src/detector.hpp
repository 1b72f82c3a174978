#ifndef GISI_DETECTOR_HPP
#define GISI_DETECTOR_HPP

#include <cstdint>

#include "bits.hpp"
#include "channel.hpp"

namespace gisi {

struct DetectionResult {
    BitBlock hard_sequence;  // argmax of the weight function over {0,1}^N
    double weight = 0.0;     // weight_lambda(hard_sequence, y, model)
    std::uint64_t branch_evals = 0;
};

// Sum over i of the Gaussian log-density of y_i given the bits in window
// [i-L, i], with the zero-signal boundary convention before the block.
double weight_lambda(const BitBlock& x, const RealBlock& y, const ChannelModel& model);

// Maximum-likelihood sequence detection over the 2^L-state trellis.
// Survivor ties resolve toward the history with the smaller older bits.
DetectionResult viterbi_hard(const RealBlock& y, const ChannelModel& model);

}  // namespace gisi

#endif
