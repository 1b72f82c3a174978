#ifndef GISI_SIM_HPP
#define GISI_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "decoder.hpp"

namespace gisi {

struct DecoderSetup {
    std::string label;         // empty: derived from kind and g
    bool memoryless = false;   // ORBGRAND that ignores the channel memory
    GammaKind kind = GammaKind::SGrand;
    std::uint64_t q = 10000;   // Q, valid-EP budget
    std::uint64_t q1 = 150000; // Q1, candidate budget
    int g = -1;                // -1: 0 for first-order channels, 3 otherwise
};

struct SimConfig {
    std::string code_id;                // "bch127_113" | "capolar128_114_crc6" | parity file
    std::vector<double> taps;           // auto-normalized to unit energy with a warning
    std::vector<double> ebn0_grid_db;
    std::uint64_t trials = 10000;
    std::vector<DecoderSetup> decoders;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "csv";         // csv | json
    std::uint64_t cdf_trials = 2000;
    std::string cdf_cache_dir;          // empty: build CDF models in memory only
    int threads = 0;                    // 0: GRAND_ISI_THREADS env or hardware count
};

struct AggregateStats {
    std::string decoder;
    double snr_db = 0.0;  // Eb/N0 grid value
    double bler = 0.0;
    double bler_ci95 = 0.0;
    double abandon_rate = 0.0;
    double mean_q = 0.0;
    double mean_p = 0.0;
    double genie_bler = 0.0;  // NaN when no SGRAND decoder participates
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean_logistic_weight = 0.0;  // emitted in JSON output only
};

SimConfig parse_sim_config(std::istream& in);
SimConfig parse_sim_config_file(const std::string& path);

std::string decoder_label(const DecoderSetup& d, int g_resolved);

// Paired Monte Carlo sweep: every decoder sees the same received block per
// trial; per-trial randomness is a pure function of (seed, snr index, trial).
std::vector<AggregateStats> run_sweep(const SimConfig& cfg, std::ostream* progress = nullptr);

// One row per (decoder, SNR):
// decoder,snr_db,bler,bler_ci95,abandon_rate,mean_q,mean_p,genie_bler,trials,seed
void emit_results(const std::vector<AggregateStats>& stats, const std::string& format,
                  const std::string& path);
std::string format_results_csv(const std::vector<AggregateStats>& stats);

}  // namespace gisi

#endif
