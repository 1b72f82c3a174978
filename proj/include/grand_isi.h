/*
 * grand_isi: GRAND decoding for Gaussian intersymbol-interference channels.
 *
 * C API over the core library. All objects are opaque handles; every function
 * returns GRAND_ISI_OK or an error code, with a thread-local message
 * available from gisi_last_error(). Bit buffers are uint8_t arrays holding
 * one 0/1 value per element.
 */
#ifndef GRAND_ISI_H
#define GRAND_ISI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    GRAND_ISI_OK = 0,
    GRAND_ISI_EINVAL = 1,    /* invalid argument or precondition violated */
    GRAND_ISI_EIO = 2,       /* file or I/O failure */
    GRAND_ISI_ERANGE = 3,    /* result does not fit the provided buffer */
    GRAND_ISI_EINTERNAL = 4
};

typedef struct gisi_code gisi_code;
typedef struct gisi_channel gisi_channel;
typedef struct gisi_cdf gisi_cdf;

/* Message describing the most recent failure on this thread. */
const char* gisi_last_error(void);

/* ---- codes ---------------------------------------------------------- */

/* id: "bch127_113" | "capolar128_114_crc6" | path to a parity-check file
 * (text, one row of 0/1 per line). */
int gisi_code_create(const char* id, gisi_code** out);
int gisi_code_create_bch(int m, int t, gisi_code** out);
int gisi_code_create_ca_polar(int n_bits, int k_info, uint64_t crc_poly, gisi_code** out);
void gisi_code_destroy(gisi_code* code);
int gisi_code_dims(const gisi_code* code, int* n, int* k);
int gisi_encode(const gisi_code* code, const uint8_t* message, size_t k,
                uint8_t* codeword_out, size_t n);
int gisi_is_codeword(const gisi_code* code, const uint8_t* bits, size_t n, int* result);

/* ---- channel --------------------------------------------------------- */

int gisi_channel_create(const double* taps, size_t num_taps, double sigma2,
                        int auto_normalize, gisi_channel** out);
void gisi_channel_destroy(gisi_channel* ch);
int gisi_channel_order(const gisi_channel* ch);
int gisi_ebn0_to_sigma2(double ebn0_db, double rate, double* sigma2_out);
/* BPSK-modulates bits and runs them through the ISI channel with a fresh
 * Gaussian stream seeded by `seed`. y_out must hold n doubles. */
int gisi_transmit(const gisi_channel* ch, const uint8_t* bits, size_t n, uint64_t seed,
                  double* y_out);

/* ---- detection ------------------------------------------------------- */

int gisi_viterbi(const gisi_channel* ch, const double* y, size_t n,
                 uint8_t* hard_out, double* weight_out);
int gisi_weight_lambda(const gisi_channel* ch, const uint8_t* bits, const double* y, size_t n,
                       double* out);

/* ---- reliability table ------------------------------------------------ */

/* Runs hard detection on y, enumerates the burst dictionary (partial-burst
 * cap g), and renders "indices;rel" CSV rows. Caller frees *csv_out with
 * gisi_string_free. */
int gisi_dump_rel_csv(const gisi_channel* ch, const double* y, size_t n, int g, char** csv_out);
void gisi_string_free(char* s);

/* ---- reliability CDF models ------------------------------------------- */

int gisi_cdf_build(const gisi_code* code, const gisi_channel* ch, int g,
                   uint64_t trials, uint64_t seed, gisi_cdf** out);
int gisi_cdf_save(const gisi_cdf* cdf, const char* path);
int gisi_cdf_load(const char* path, gisi_cdf** out);
int gisi_cdf_quantile(const gisi_cdf* cdf, double p, double* out);
void gisi_cdf_destroy(gisi_cdf* cdf);

/* ---- decoding ---------------------------------------------------------- */

typedef struct {
    int decoded; /* 1 = codeword found, 0 = abandoned */
    uint64_t candidate_queries;
    uint64_t valid_queries;
    double metric_sum;
} gisi_decode_info;

/* provider: "sgrand" | "orb" | "cdforb" | "2line" | "memoryless".
 * cdforb/2line need `cdf`. codeword_out and error_pattern_out may be NULL;
 * they are filled only when decoding succeeds. */
int gisi_decode(const gisi_code* code, const gisi_channel* ch, const double* y, size_t n,
                const char* provider, uint64_t max_valid, uint64_t max_candidates, int g,
                const gisi_cdf* cdf, uint8_t* codeword_out, uint8_t* error_pattern_out,
                gisi_decode_info* info);

/* Runs a full single trial: draws a random message from `seed`, encodes,
 * transmits, detects, decodes. Output buffers may be NULL; bit buffers need n
 * entries, y_out n doubles. When the provider needs a CDF model and cdf is
 * NULL, one is built on the fly from cdf_trials transmissions (0 = 2000). */
int gisi_decode_one_trial(const gisi_code* code, const gisi_channel* ch, const char* provider,
                          uint64_t max_valid, uint64_t max_candidates, int g, uint64_t seed,
                          const gisi_cdf* cdf, uint64_t cdf_trials,
                          uint8_t* transmitted_out, double* y_out, uint8_t* hard_out,
                          double* hard_weight_out, uint8_t* codeword_out,
                          uint8_t* error_pattern_out, gisi_decode_info* info);

/* ---- simulation --------------------------------------------------------- */

/* Runs the Monte Carlo sweep described by a key=value config file and writes
 * the results file named in it. verbose != 0 prints per-point progress to
 * stderr. Worker count comes from the config or GRAND_ISI_THREADS. */
int gisi_simulate_file(const char* config_path, int verbose);

/* ---- complexity accounting ---------------------------------------------- */

/* Exact reliability-evaluation count for the unrestricted burst set, as a
 * decimal string (values grow exponentially with n). */
int gisi_complexity_tot(int n, int l, char* decimal_out, size_t cap);
int gisi_tot_closed_form_l2(int n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* GRAND_ISI_H */
