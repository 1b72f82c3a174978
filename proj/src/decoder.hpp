#ifndef GISI_DECODER_HPP
#define GISI_DECODER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bits.hpp"
#include "cdf.hpp"
#include "channel.hpp"
#include "codes.hpp"
#include "reliability.hpp"

namespace gisi {

// Per-burst decoding metric family.
enum class GammaKind { SGrand, Orb, CdfOrb, TwoLine };
const char* gamma_kind_name(GammaKind kind);
GammaKind parse_gamma_kind(const std::string& name);

struct DecoderConfig {
    std::uint64_t max_valid_queries = 10000;  // Q: parity-checked EPs
    std::uint64_t max_candidates = 150000;    // Q1: emitted candidates
    int g = 0;                                // partially-decomposable size cap
};

struct DecodeResult {
    enum class Outcome { Decoded, Abandon };
    Outcome outcome = Outcome::Abandon;
    BitBlock codeword;       // filled when decoded
    BitBlock error_pattern;  // filled when decoded
    std::uint64_t candidate_queries = 0;  // q
    std::uint64_t valid_queries = 0;      // p
    double metric_sum = 0.0;              // metric of the found pattern

    bool decoded() const { return outcome == Outcome::Decoded; }
};

// Lazy enumeration of all subsets of ranks {1..M} in nondecreasing order of
// their weight sums, starting from the empty set. Weights must be ascending
// and non-negative. Each subset derives from its parent by either setting the
// next rank (extend) or moving the highest set rank up by one (swap), so every
// subset is emitted exactly once; a min-heap orders the frontier.
class SubsetSumGenerator {
  public:
    void reset(std::span<const double> ascending_weights);
    bool next();  // advances to the next subset; the first call yields the empty set

    double sum() const { return arena_[current_].sum; }
    std::size_t count() const { return arena_[current_].size; }

    template <typename F>
    void for_each_rank_desc(F&& f) const {  // 1-based ranks, largest first
        for (std::uint32_t node = current_; node != 0; node = arena_[node].rest)
            f(arena_[node].last);
    }
    std::vector<std::uint16_t> current_ranks() const;  // ascending, for tests

  private:
    struct Node {
        double sum;
        std::uint32_t rest;  // node holding the remaining smaller ranks
        std::uint16_t last;  // largest rank in this subset
        std::uint16_t size;
    };
    struct HeapItem {
        double sum;
        std::uint32_t node;
        bool operator>(const HeapItem& o) const {
            return sum > o.sum || (sum == o.sum && node > o.node);
        }
    };
    std::span<const double> w_;
    std::vector<Node> arena_;
    std::vector<HeapItem> heap_;
    std::uint32_t current_ = 0;
    bool started_ = false;

    void push_item(double sum, std::uint32_t rest, std::uint16_t last, std::uint16_t size);
};

// Per-burst gamma values arranged by rank (ascending) plus the rank->burst map.
struct GammaProvider {
    GammaKind kind = GammaKind::SGrand;
    std::vector<double> gamma_by_rank;
    std::vector<std::uint32_t> rank_to_burst;
};

// Ranks of the reliability values, ties broken by dictionary order.
std::vector<std::uint32_t> reliability_argsort(const ReliabilityTable& table);

GammaProvider make_gamma_provider(GammaKind kind, const ReliabilityTable& table,
                                  const CdfModel* cdf = nullptr, const TwoLineFit* fit = nullptr);

// Rank-only gamma values (Orb/CdfOrb/TwoLine): independent of the trial, so
// sweeps compute them once per operating point.
std::vector<double> static_gamma_by_rank(GammaKind kind, std::size_t m, const CdfModel* cdf,
                                         const TwoLineFit* fit);

// Chosen bursts form a valid error pattern iff they are pairwise disjoint and
// any two are separated by more than L positions.
bool is_valid_pattern(const BurstDictionary& dict, std::span<const std::uint32_t> burst_ids, int l);

// Error pattern with ones exactly on the union of the chosen bursts.
BitBlock assemble_ep(std::span<const std::uint32_t> burst_ids, const BurstDictionary& dict);

// Check-word XOR of every dictionary burst, for incremental syndrome upkeep.
std::vector<std::uint64_t> burst_syndromes(const CodeSpec& code, const BurstDictionary& dict);

// Query engine with the preparation (detection, table, provider, syndromes)
// supplied by the caller; used by the sweep runner to share work across
// decoders operating on the same trial.
DecodeResult grand_isi_run(const BitBlock& x_star, std::span<const std::uint64_t> star_syndrome,
                           const CodeSpec& code, const BurstDictionary& dict,
                           const GammaProvider& provider, std::span<const std::uint64_t> burst_synd,
                           const DecoderConfig& cfg, SubsetSumGenerator& gen);

// Full single-shot decode: Viterbi detection, immediate exit if the hard
// sequence is a codeword, otherwise reliability table + ordered queries.
DecodeResult grand_isi_decode(const RealBlock& y, const CodeSpec& code, const ChannelModel& model,
                              GammaKind kind, const DecoderConfig& cfg,
                              const CdfModel* cdf = nullptr, const TwoLineFit* fit = nullptr);

// Baseline that ignores channel memory: per-symbol sign decisions, |y_i|
// reliabilities, integer-rank (logistic weight) pattern order.
DecodeResult memoryless_orbgrand_decode(const RealBlock& y, const CodeSpec& code,
                                        const ChannelModel& model, const DecoderConfig& cfg);

// Sum of the baseline's reliability ranks over the positions where the
// per-symbol hard decision differs from the transmitted codeword.
std::int64_t logistic_weight_of_target(const RealBlock& y, const BitBlock& transmitted,
                                       const ChannelModel& model);

// Genie-aided ML lower-bound event: a decoded codeword provably at least as
// likely as the transmitted one. Abandons never count.
bool genie_ml_error_event(const DecodeResult& result, const BitBlock& transmitted,
                          const RealBlock& y, const ChannelModel& model);

}  // namespace gisi

#endif
