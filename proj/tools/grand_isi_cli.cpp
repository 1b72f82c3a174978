// Command-line front end for the GRAND-ISI shared library.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grand_isi.h"

namespace {

[[noreturn]] void die(const char* what, int code) {
    std::fprintf(stderr, "error: %s: %s\n", what, gisi_last_error());
    std::exit(code ? code : 1);
}

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    const char* p = s.c_str();
    char* end = nullptr;
    while (*p) {
        const double v = std::strtod(p, &end);
        if (end == p) break;
        out.push_back(v);
        p = end;
        while (*p == ',' || *p == ' ') ++p;
    }
    return out;
}

std::string bits_str(const uint8_t* bits, size_t n) {
    std::string s(n, '0');
    for (size_t i = 0; i < n; ++i) s[i] = bits[i] ? '1' : '0';
    return s;
}

gisi_channel* open_channel(const std::string& taps_csv, double sigma2, double ebn0_db,
                           double rate) {
    const std::vector<double> taps = parse_csv_doubles(taps_csv);
    if (taps.empty()) {
        std::fprintf(stderr, "error: --taps needs a comma-separated list\n");
        std::exit(1);
    }
    double s2 = sigma2;
    if (s2 <= 0.0) {
        if (gisi_ebn0_to_sigma2(ebn0_db, rate, &s2) != GRAND_ISI_OK) die("ebn0", 1);
    }
    gisi_channel* ch = nullptr;
    if (int rc = gisi_channel_create(taps.data(), taps.size(), s2, /*auto_normalize=*/1, &ch))
        die("channel", rc);
    return ch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GRAND decoding over Gaussian ISI channels"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo BLER/query sweep from a config file");
    std::string config_path;
    bool quiet = false;
    sim->add_option("--config", config_path, "key=value config file")->required();
    sim->add_flag("--quiet", quiet, "suppress per-point progress");

    // decode-one
    auto* one = app.add_subcommand("decode-one", "run and print a single decoding trial");
    std::string code_id = "bch127_113", taps_csv = "1.0", provider = "sgrand";
    double sigma2 = -1.0, ebn0 = 7.0;
    std::uint64_t q = 10000, q1 = 150000, seed = 1, cdf_trials = 2000;
    int g = -1;
    std::string cdf_path;
    one->add_option("--code", code_id, "bch127_113 | capolar128_114_crc6 | parity file");
    one->add_option("--taps", taps_csv, "channel taps h0,h1,...")->required();
    one->add_option("--sigma2", sigma2, "noise variance (overrides --ebn0)");
    one->add_option("--ebn0", ebn0, "Eb/N0 in dB (default 7)");
    one->add_option("--provider", provider, "sgrand | orb | cdforb | 2line | memoryless");
    one->add_option("--q", q, "valid-EP query budget Q");
    one->add_option("--q1", q1, "candidate budget Q1");
    one->add_option("--g", g, "partially-decomposable burst size cap (-1: auto)");
    one->add_option("--seed", seed, "trial seed");
    one->add_option("--cdf", cdf_path, "CDF cache file for cdforb/2line");
    one->add_option("--cdf-trials", cdf_trials, "trials for an on-the-fly CDF model");

    // cdf-estimate
    auto* est = app.add_subcommand("cdf-estimate", "estimate the burst-reliability CDF and save it");
    std::string est_code = "bch127_113", est_taps, est_out;
    double est_sigma2 = -1.0, est_ebn0 = 7.0;
    std::uint64_t est_trials = 2000, est_seed = 1;
    int est_g = -1;
    est->add_option("--code", est_code, "code id or parity file");
    est->add_option("--taps", est_taps, "channel taps h0,h1,...")->required();
    est->add_option("--sigma2", est_sigma2, "noise variance (overrides --ebn0)");
    est->add_option("--ebn0", est_ebn0, "Eb/N0 in dB");
    est->add_option("--trials", est_trials, "transmissions to pool (>= 1000)");
    est->add_option("--seed", est_seed, "stream seed");
    est->add_option("--g", est_g, "partial-burst size cap (-1: auto)");
    est->add_option("--out", est_out, "output cache file")->required();

    // dump-rel
    auto* dump = app.add_subcommand("dump-rel", "hard-detect a received block and dump its reliability table as CSV");
    std::string dump_taps, dump_y;
    double dump_sigma2 = 1.0;
    int dump_g = -1;
    dump->add_option("--taps", dump_taps, "channel taps h0,h1,...")->required();
    dump->add_option("--sigma2", dump_sigma2, "noise variance");
    dump->add_option("--y", dump_y, "received samples y1,y2,...")->required();
    dump->add_option("--g", dump_g, "partial-burst size cap (-1: auto)");

    // complexity
    auto* cx = app.add_subcommand("complexity", "reliability-evaluation count for the unrestricted burst set");
    int cx_n = 0, cx_l = 1;
    bool cx_closed = false;
    cx->add_option("--n", cx_n, "block length")->required();
    cx->add_option("--l", cx_l, "channel memory order")->required();
    cx->add_flag("--closed-form", cx_closed, "also print the L=2 closed form");

    CLI11_PARSE(app, argc, argv);

    if (*sim) {
        if (int rc = gisi_simulate_file(config_path.c_str(), quiet ? 0 : 1)) die("simulate", rc);
        return 0;
    }

    if (*one) {
        gisi_code* code = nullptr;
        if (int rc = gisi_code_create(code_id.c_str(), &code)) die("code", rc);
        int n = 0, k = 0;
        gisi_code_dims(code, &n, &k);
        gisi_channel* ch = open_channel(taps_csv, sigma2, ebn0, static_cast<double>(k) / n);
        if (g < 0) g = gisi_channel_order(ch) >= 2 ? 3 : 0;

        gisi_cdf* cdf = nullptr;
        if (!cdf_path.empty()) {
            if (int rc = gisi_cdf_load(cdf_path.c_str(), &cdf)) die("cdf", rc);
        }
        std::vector<uint8_t> sent(n), hard(n), cw(n), ep(n);
        std::vector<double> y(n);
        double hard_weight = 0.0;
        gisi_decode_info info{};
        if (int rc = gisi_decode_one_trial(code, ch, provider.c_str(), q, q1, g, seed, cdf,
                                           cdf_trials, sent.data(), y.data(), hard.data(),
                                           &hard_weight, cw.data(), ep.data(), &info))
            die("decode", rc);
        std::printf("transmitted: %s\n", bits_str(sent.data(), sent.size()).c_str());
        std::printf("hard (x*):   %s   lambda=%.17g\n", bits_str(hard.data(), hard.size()).c_str(), hard_weight);
        if (info.decoded) {
            std::printf("outcome:     DECODED%s\n",
                        bits_str(cw.data(), cw.size()) == bits_str(sent.data(), sent.size()) ? " (correct)" : " (wrong codeword)");
            std::printf("codeword:    %s\n", bits_str(cw.data(), cw.size()).c_str());
            std::printf("pattern:     %s   metric=%.17g\n", bits_str(ep.data(), ep.size()).c_str(), info.metric_sum);
        } else {
            std::printf("outcome:     ABANDON\n");
        }
        std::printf("queries:     candidates q=%" PRIu64 "  valid p=%" PRIu64 "\n",
                    info.candidate_queries, info.valid_queries);
        gisi_cdf_destroy(cdf);
        gisi_channel_destroy(ch);
        gisi_code_destroy(code);
        return 0;
    }

    if (*est) {
        gisi_code* code = nullptr;
        if (int rc = gisi_code_create(est_code.c_str(), &code)) die("code", rc);
        int n = 0, k = 0;
        gisi_code_dims(code, &n, &k);
        gisi_channel* ch = open_channel(est_taps, est_sigma2, est_ebn0, static_cast<double>(k) / n);
        if (est_g < 0) est_g = gisi_channel_order(ch) >= 2 ? 3 : 0;
        gisi_cdf* cdf = nullptr;
        if (int rc = gisi_cdf_build(code, ch, est_g, est_trials, est_seed, &cdf)) die("cdf-estimate", rc);
        if (int rc = gisi_cdf_save(cdf, est_out.c_str())) die("cdf-save", rc);
        std::printf("wrote %s\n", est_out.c_str());
        gisi_cdf_destroy(cdf);
        gisi_channel_destroy(ch);
        gisi_code_destroy(code);
        return 0;
    }

    if (*dump) {
        const std::vector<double> y = parse_csv_doubles(dump_y);
        gisi_channel* ch = open_channel(dump_taps, dump_sigma2, 0.0, 1.0);
        if (dump_g < 0) dump_g = gisi_channel_order(ch) >= 2 ? 3 : 0;
        char* csv = nullptr;
        if (int rc = gisi_dump_rel_csv(ch, y.data(), y.size(), dump_g, &csv)) die("dump-rel", rc);
        std::fputs(csv, stdout);
        gisi_string_free(csv);
        gisi_channel_destroy(ch);
        return 0;
    }

    if (*cx) {
        char buf[4096];
        if (int rc = gisi_complexity_tot(cx_n, cx_l, buf, sizeof buf)) die("complexity", rc);
        std::printf("tot(N=%d, L=%d) = %s\n", cx_n, cx_l, buf);
        if (cx_closed) {
            double v = 0.0;
            if (int rc = gisi_tot_closed_form_l2(cx_n, &v)) die("closed-form", rc);
            std::printf("closed form (L=2) = %.17g\n", v);
        }
        return 0;
    }
    return 0;
}
