#include "grand_isi.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "cdf.hpp"
#include "channel.hpp"
#include "codes.hpp"
#include "complexity.hpp"
#include "decoder.hpp"
#include "detector.hpp"
#include "sim.hpp"

struct gisi_code {
    gisi::CodeSpec impl;
};
struct gisi_channel {
    gisi::ChannelModel impl;
};
struct gisi_cdf {
    gisi::CdfModel impl;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        return fail(GRAND_ISI_EINVAL, e.what());
    } catch (const std::out_of_range& e) {
        return fail(GRAND_ISI_EINVAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(GRAND_ISI_EINTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GRAND_ISI_EIO, e.what());
    }
}

gisi::BitBlock to_bits(const uint8_t* bits, size_t n) {
    gisi::BitBlock b(n);
    for (size_t i = 0; i < n; ++i) b[i] = bits[i] ? 1 : 0;
    return b;
}

void fill_result(const gisi::DecodeResult& r, uint8_t* codeword_out, uint8_t* ep_out,
                 gisi_decode_info* info, size_t n) {
    if (r.decoded()) {
        if (codeword_out) std::memcpy(codeword_out, r.codeword.data(), n);
        if (ep_out) std::memcpy(ep_out, r.error_pattern.data(), n);
    }
    if (info) {
        info->decoded = r.decoded() ? 1 : 0;
        info->candidate_queries = r.candidate_queries;
        info->valid_queries = r.valid_queries;
        info->metric_sum = r.metric_sum;
    }
}

gisi::DecodeResult run_decode(const gisi::CodeSpec& code, const gisi::ChannelModel& ch,
                              const gisi::RealBlock& y, const std::string& provider,
                              uint64_t max_valid, uint64_t max_candidates, int g,
                              const gisi_cdf* cdf, uint64_t cdf_trials) {
    gisi::DecoderConfig cfg{max_valid, max_candidates, g};
    if (provider == "memoryless") {
        cfg.max_candidates = cfg.max_valid_queries;
        return gisi::memoryless_orbgrand_decode(y, code, ch, cfg);
    }
    const gisi::GammaKind kind = gisi::parse_gamma_kind(provider);
    gisi::CdfModel local;
    const gisi::CdfModel* model = cdf ? &cdf->impl : nullptr;
    if (!model && (kind == gisi::GammaKind::CdfOrb || kind == gisi::GammaKind::TwoLine)) {
        auto dict = gisi::enumerate_bursts(code.n, std::max(1, ch.order()), g);
        local = gisi::build_cdf_model(code, ch, dict, cdf_trials ? cdf_trials : 2000, 0x5EEDCDFull);
        model = &local;
    }
    gisi::TwoLineFit fit;
    const gisi::TwoLineFit* fitp = nullptr;
    if (kind == gisi::GammaKind::TwoLine) {
        fit = gisi::fit_two_line(*model);
        fitp = &fit;
    }
    return gisi::grand_isi_decode(y, code, ch, kind, cfg, model, fitp);
}

}  // namespace

extern "C" {

const char* gisi_last_error(void) { return g_last_error.c_str(); }

int gisi_code_create(const char* id, gisi_code** out) {
    if (!id || !out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = new gisi_code{gisi::make_code(id)};
        return GRAND_ISI_OK;
    });
}

int gisi_code_create_bch(int m, int t, gisi_code** out) {
    if (!out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = new gisi_code{gisi::build_bch(m, t)};
        return GRAND_ISI_OK;
    });
}

int gisi_code_create_ca_polar(int n_bits, int k_info, uint64_t crc_poly, gisi_code** out) {
    if (!out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = new gisi_code{gisi::build_ca_polar(n_bits, k_info, crc_poly)};
        return GRAND_ISI_OK;
    });
}

void gisi_code_destroy(gisi_code* code) { delete code; }

int gisi_code_dims(const gisi_code* code, int* n, int* k) {
    if (!code) return fail(GRAND_ISI_EINVAL, "null code");
    if (n) *n = code->impl.n;
    if (k) *k = code->impl.k;
    return GRAND_ISI_OK;
}

int gisi_encode(const gisi_code* code, const uint8_t* message, size_t k, uint8_t* codeword_out,
                size_t n) {
    if (!code || !message || !codeword_out) return fail(GRAND_ISI_EINVAL, "null argument");
    if (n != static_cast<size_t>(code->impl.n)) return fail(GRAND_ISI_ERANGE, "codeword buffer must hold N bits");
    return guarded([&]() -> int {
        const gisi::BitBlock cw = gisi::encode(code->impl, to_bits(message, k));
        std::memcpy(codeword_out, cw.data(), cw.size());
        return GRAND_ISI_OK;
    });
}

int gisi_is_codeword(const gisi_code* code, const uint8_t* bits, size_t n, int* result) {
    if (!code || !bits || !result) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *result = gisi::is_codeword(code->impl, to_bits(bits, n)) ? 1 : 0;
        return GRAND_ISI_OK;
    });
}

int gisi_channel_create(const double* taps, size_t num_taps, double sigma2, int auto_normalize,
                        gisi_channel** out) {
    if (!taps || !out || num_taps == 0) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        std::vector<double> t(taps, taps + num_taps);
        *out = new gisi_channel{auto_normalize
                                    ? gisi::ChannelModel::create_normalized(std::move(t), sigma2)
                                    : gisi::ChannelModel::create(std::move(t), sigma2)};
        return GRAND_ISI_OK;
    });
}

void gisi_channel_destroy(gisi_channel* ch) { delete ch; }

int gisi_channel_order(const gisi_channel* ch) { return ch ? ch->impl.order() : -1; }

int gisi_ebn0_to_sigma2(double ebn0_db, double rate, double* sigma2_out) {
    if (!sigma2_out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *sigma2_out = gisi::ebn0_to_sigma2(ebn0_db, rate);
        return GRAND_ISI_OK;
    });
}

int gisi_transmit(const gisi_channel* ch, const uint8_t* bits, size_t n, uint64_t seed,
                  double* y_out) {
    if (!ch || !bits || !y_out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        gisi::GaussianStream stream(seed);
        const gisi::RealBlock y = gisi::transmit(to_bits(bits, n), ch->impl, stream);
        std::memcpy(y_out, y.data(), y.size() * sizeof(double));
        return GRAND_ISI_OK;
    });
}

int gisi_viterbi(const gisi_channel* ch, const double* y, size_t n, uint8_t* hard_out,
                 double* weight_out) {
    if (!ch || !y || !hard_out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        const gisi::DetectionResult det = gisi::viterbi_hard(gisi::RealBlock(y, y + n), ch->impl);
        std::memcpy(hard_out, det.hard_sequence.data(), n);
        if (weight_out) *weight_out = det.weight;
        return GRAND_ISI_OK;
    });
}

int gisi_weight_lambda(const gisi_channel* ch, const uint8_t* bits, const double* y, size_t n,
                       double* out) {
    if (!ch || !bits || !y || !out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = gisi::weight_lambda(to_bits(bits, n), gisi::RealBlock(y, y + n), ch->impl);
        return GRAND_ISI_OK;
    });
}

int gisi_dump_rel_csv(const gisi_channel* ch, const double* y, size_t n, int g, char** csv_out) {
    if (!ch || !y || !csv_out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        const gisi::RealBlock yy(y, y + n);
        const gisi::DetectionResult det = gisi::viterbi_hard(yy, ch->impl);
        auto dict = gisi::shared_bursts(static_cast<int>(n), std::max(1, ch->impl.order()), g);
        const gisi::ReliabilityTable table =
            ch->impl.order() == 1 ? gisi::rel_table_first_order(det.hard_sequence, yy, ch->impl, dict)
                                  : gisi::rel_table_general(det.hard_sequence, yy, ch->impl, dict);
        std::string out = "indices;rel\n";
        char buf[40];
        for (std::size_t i = 0; i < dict->size(); ++i) {
            const gisi::Burst& b = dict->bursts[i];
            for (std::size_t j = 0; j < b.indices.size(); ++j) {
                if (j) out += ' ';
                out += std::to_string(b.indices[j]);
            }
            std::snprintf(buf, sizeof buf, "%.17g", table.values[i]);
            out += ';';
            out += buf;
            out += '\n';
        }
        char* mem = static_cast<char*>(std::malloc(out.size() + 1));
        if (!mem) return fail(GRAND_ISI_EINTERNAL, "out of memory");
        std::memcpy(mem, out.c_str(), out.size() + 1);
        *csv_out = mem;
        return GRAND_ISI_OK;
    });
}

void gisi_string_free(char* s) { std::free(s); }

int gisi_cdf_build(const gisi_code* code, const gisi_channel* ch, int g, uint64_t trials,
                   uint64_t seed, gisi_cdf** out) {
    if (!code || !ch || !out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        auto dict = gisi::enumerate_bursts(code->impl.n, std::max(1, ch->impl.order()), g);
        *out = new gisi_cdf{gisi::build_cdf_model(code->impl, ch->impl, dict, trials, seed)};
        return GRAND_ISI_OK;
    });
}

int gisi_cdf_save(const gisi_cdf* cdf, const char* path) {
    if (!cdf || !path) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        gisi::save_cdf_model(cdf->impl, path);
        return GRAND_ISI_OK;
    });
}

int gisi_cdf_load(const char* path, gisi_cdf** out) {
    if (!path || !out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = new gisi_cdf{gisi::load_cdf_model(path)};
        return GRAND_ISI_OK;
    });
}

int gisi_cdf_quantile(const gisi_cdf* cdf, double p, double* out) {
    if (!cdf || !out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = cdf->impl.quantile(p);
        return GRAND_ISI_OK;
    });
}

void gisi_cdf_destroy(gisi_cdf* cdf) { delete cdf; }

int gisi_decode(const gisi_code* code, const gisi_channel* ch, const double* y, size_t n,
                const char* provider, uint64_t max_valid, uint64_t max_candidates, int g,
                const gisi_cdf* cdf, uint8_t* codeword_out, uint8_t* error_pattern_out,
                gisi_decode_info* info) {
    if (!code || !ch || !y || !provider) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        const gisi::DecodeResult r = run_decode(code->impl, ch->impl, gisi::RealBlock(y, y + n),
                                                provider, max_valid, max_candidates, g, cdf, 0);
        fill_result(r, codeword_out, error_pattern_out, info, n);
        return GRAND_ISI_OK;
    });
}

int gisi_decode_one_trial(const gisi_code* code, const gisi_channel* ch, const char* provider,
                          uint64_t max_valid, uint64_t max_candidates, int g, uint64_t seed,
                          const gisi_cdf* cdf, uint64_t cdf_trials, uint8_t* transmitted_out,
                          double* y_out, uint8_t* hard_out, double* hard_weight_out,
                          uint8_t* codeword_out, uint8_t* error_pattern_out,
                          gisi_decode_info* info) {
    if (!code || !ch || !provider) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        const gisi::CodeSpec& c = code->impl;
        gisi::GaussianStream stream(gisi::mix_seed(seed, 0, 0));
        gisi::BitBlock msg(static_cast<std::size_t>(c.k));
        std::uint64_t word = 0;
        for (int i = 0; i < c.k; ++i) {
            if (i % 64 == 0) word = stream.next_u64();
            msg[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((word >> (i % 64)) & 1);
        }
        const gisi::BitBlock cw = gisi::encode(c, msg);
        const gisi::RealBlock y = gisi::transmit(cw, ch->impl, stream);
        const gisi::DetectionResult det = gisi::viterbi_hard(y, ch->impl);
        if (transmitted_out) std::memcpy(transmitted_out, cw.data(), cw.size());
        if (y_out) std::memcpy(y_out, y.data(), y.size() * sizeof(double));
        if (hard_out) std::memcpy(hard_out, det.hard_sequence.data(), det.hard_sequence.size());
        if (hard_weight_out) *hard_weight_out = det.weight;
        const gisi::DecodeResult r =
            run_decode(c, ch->impl, y, provider, max_valid, max_candidates, g, cdf, cdf_trials);
        fill_result(r, codeword_out, error_pattern_out, info, y.size());
        return GRAND_ISI_OK;
    });
}

int gisi_simulate_file(const char* config_path, int verbose) {
    if (!config_path) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        const gisi::SimConfig cfg = gisi::parse_sim_config_file(config_path);
        if (cfg.out_path.empty()) return fail(GRAND_ISI_EINVAL, "config is missing the 'out' key");
        const auto stats = gisi::run_sweep(cfg, verbose ? &std::cerr : nullptr);
        gisi::emit_results(stats, cfg.format, cfg.out_path);
        return GRAND_ISI_OK;
    });
}

int gisi_complexity_tot(int n, int l, char* decimal_out, size_t cap) {
    if (!decimal_out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        const std::string s = gisi::complexity_tot(n, l).to_string();
        if (s.size() + 1 > cap) return fail(GRAND_ISI_ERANGE, "decimal buffer too small");
        std::memcpy(decimal_out, s.c_str(), s.size() + 1);
        return GRAND_ISI_OK;
    });
}

int gisi_tot_closed_form_l2(int n, double* out) {
    if (!out) return fail(GRAND_ISI_EINVAL, "null argument");
    return guarded([&]() -> int {
        *out = gisi::tot_closed_form_l2(n);
        return GRAND_ISI_OK;
    });
}

}  // extern "C"
