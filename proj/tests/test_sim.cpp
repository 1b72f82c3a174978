#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "complexity.hpp"
#include "sim.hpp"

using namespace gisi;

namespace {

const char* kParityFile = "sim_test_parity.txt";

void write_hamming74() {
    std::ofstream out(kParityFile);
    out << "1110100\n0111010\n0011101\n";
}

SimConfig small_config() {
    SimConfig cfg;
    cfg.code_id = kParityFile;
    cfg.taps = {std::sqrt(0.9), std::sqrt(0.1)};
    cfg.ebn0_grid_db = {2.0, 5.0};
    cfg.trials = 400;
    cfg.seed = 2024;
    cfg.cdf_trials = 1000;
    DecoderSetup sg;
    sg.kind = GammaKind::SGrand;
    sg.q = 64;
    sg.q1 = 512;
    DecoderSetup cdf = sg;
    cdf.kind = GammaKind::CdfOrb;
    DecoderSetup rank = sg;
    rank.kind = GammaKind::Orb;
    DecoderSetup bent = sg;
    bent.kind = GammaKind::TwoLine;
    DecoderSetup ml;
    ml.memoryless = true;
    ml.q = ml.q1 = 128;
    cfg.decoders = {sg, cdf, rank, bent, ml};
    return cfg;
}

}  // namespace

TEST_CASE("reliability-count recursion") {
    for (int n = 1; n <= 200; ++n)
        CHECK(complexity_tot(n, 1).to_u64() == static_cast<std::uint64_t>(n) * (n + 1) / 2);
    CHECK(complexity_tot(3, 2).to_u64() == 7);
    CHECK(complexity_tot(5, 2).to_u64() == 26);

    for (int n = 1; n <= 60; ++n) {
        const double exact = complexity_tot(n, 2).to_double();
        CHECK(std::abs(tot_closed_form_l2(n) - exact) / exact < 1e-6);
    }
    CHECK(tot_closed_form_l2(3) == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(tot_closed_form_l2(5) == doctest::Approx(26.0).epsilon(1e-9));

    // the growth ratio settles at the golden ratio
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double ratio = complexity_tot(41, 2).to_double() / complexity_tot(40, 2).to_double();
    CHECK(std::abs(ratio - phi) / phi < 0.01);

    // far past 64-bit territory the decimal expansion stays exact
    const BigUint big = complexity_tot(200, 2);
    CHECK_FALSE(big.fits_u64());
    const std::string dec = big.to_string();
    CHECK(dec.size() >= 40);
    CHECK(std::abs(big.to_double() - tot_closed_form_l2(200)) / big.to_double() < 1e-9);
    CHECK_THROWS_AS((void)big.to_u64(), std::overflow_error);

    CHECK_THROWS_AS(complexity_tot(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(complexity_tot(4, 0), std::invalid_argument);
}

TEST_CASE("config parsing") {
    std::istringstream in(
        "# sweep description\n"
        "code = bch127_113\n"
        "taps = 0.9486832980505138, 0.31622776601683794\n"
        "ebn0_db_grid = 3, 5, 7\n"
        "trials = 1234\n"
        "seed = 99\n"
        "out = run.csv\n"
        "format = csv\n"
        "cdf_trials = 1500\n"
        "threads = 2\n"
        "decoder = sgrand g=3 q=10000 q1=150000\n"
        "decoder = cdforb g=3\n"
        "decoder = memoryless q=150000 label=ORBGRAND\n");
    const SimConfig cfg = parse_sim_config(in);
    CHECK(cfg.code_id == "bch127_113");
    CHECK(cfg.taps.size() == 2);
    CHECK(cfg.ebn0_grid_db == std::vector<double>{3, 5, 7});
    CHECK(cfg.trials == 1234);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out_path == "run.csv");
    CHECK(cfg.cdf_trials == 1500);
    CHECK(cfg.threads == 2);
    REQUIRE(cfg.decoders.size() == 3);
    CHECK(cfg.decoders[0].kind == GammaKind::SGrand);
    CHECK(cfg.decoders[0].g == 3);
    CHECK(cfg.decoders[1].kind == GammaKind::CdfOrb);
    CHECK(cfg.decoders[2].memoryless);
    CHECK(cfg.decoders[2].q == 150000);
    CHECK(cfg.decoders[2].label == "ORBGRAND");

    std::istringstream multi("decoders = sgrand; orb q=5 q1=9\n");
    CHECK(parse_sim_config(multi).decoders.size() == 2);

    std::istringstream bad("frobnicate = 1\n");
    CHECK_THROWS_AS(parse_sim_config(bad), std::invalid_argument);
    std::istringstream bad2("decoder = warp\n");
    CHECK_THROWS_AS(parse_sim_config(bad2), std::invalid_argument);
}

TEST_CASE("decoder labels") {
    DecoderSetup d;
    d.kind = GammaKind::CdfOrb;
    CHECK(decoder_label(d, 3) == "CDF-ORBGRAND-ISI-3");
    d.kind = GammaKind::TwoLine;
    CHECK(decoder_label(d, 0) == "2line-ORBGRAND-ISI-0");
    d.memoryless = true;
    CHECK(decoder_label(d, 0) == "ORBGRAND");
    d.label = "custom";
    CHECK(decoder_label(d, 0) == "custom");
}

TEST_CASE("sweep statistics are deterministic and internally consistent") {
    write_hamming74();
    const SimConfig cfg = small_config();
    const auto stats = run_sweep(cfg);
    REQUIRE(stats.size() == 10);  // 5 decoders x 2 points

    for (const AggregateStats& s : stats) {
        CHECK(s.trials == cfg.trials);
        CHECK(s.bler >= 0.0);
        CHECK(s.bler <= 1.0);
        CHECK(s.mean_p <= s.mean_q + 1e-12);
        CHECK(s.bler >= s.abandon_rate - 1e-12);  // abandons count as block errors
        CHECK(s.bler_ci95 == doctest::Approx(1.959963984540054 *
                                             std::sqrt(s.bler * (1 - s.bler) / cfg.trials))
                                 .epsilon(1e-12));
        CHECK(std::isfinite(s.genie_bler));  // an sgrand decoder is present
    }

    // genie lower bound can never exceed the sgrand error rate: shared trials
    for (std::size_t pt = 0; pt < 2; ++pt) {
        const AggregateStats& sgrand = stats[0 * 2 + pt];
        CHECK(sgrand.decoder == "SGRAND-ISI-0");
        CHECK(sgrand.genie_bler <= sgrand.bler + 1e-12);
    }

    // same config, same numbers
    const auto again = run_sweep(cfg);
    for (std::size_t i = 0; i < stats.size(); ++i) {
        CHECK(stats[i].bler == again[i].bler);
        CHECK(stats[i].mean_q == again[i].mean_q);
        CHECK(stats[i].mean_p == again[i].mean_p);
        CHECK(stats[i].genie_bler == again[i].genie_bler);
        CHECK(stats[i].mean_logistic_weight == again[i].mean_logistic_weight);
    }

    // and independent of the worker count
    SimConfig threaded = cfg;
    threaded.threads = 3;
    const auto par = run_sweep(threaded);
    for (std::size_t i = 0; i < stats.size(); ++i) CHECK(stats[i].bler == par[i].bler);

    std::remove(kParityFile);
}

TEST_CASE("noiseless point decodes everywhere") {
    write_hamming74();
    SimConfig cfg = small_config();
    cfg.trials = 1;
    cfg.ebn0_grid_db = {60.0};  // essentially noise-free
    const auto stats = run_sweep(cfg);
    for (const AggregateStats& s : stats) {
        CHECK(s.bler == 0.0);
        CHECK(s.abandon_rate == 0.0);
    }
    std::remove(kParityFile);
}

TEST_CASE("on-disk cdf cache reproduces the in-memory sweep") {
    write_hamming74();
    SimConfig cfg = small_config();
    cfg.trials = 150;
    const auto plain = run_sweep(cfg);

    cfg.cdf_cache_dir = "sim_test_cdf_cache";
    const auto first = run_sweep(cfg);   // builds and saves the models
    CHECK(std::filesystem::exists(cfg.cdf_cache_dir));
    CHECK_FALSE(std::filesystem::is_empty(cfg.cdf_cache_dir));
    const auto second = run_sweep(cfg);  // loads them back

    REQUIRE(plain.size() == first.size());
    REQUIRE(plain.size() == second.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain[i].bler == first[i].bler);
        CHECK(plain[i].mean_q == first[i].mean_q);
        CHECK(first[i].bler == second[i].bler);
        CHECK(first[i].mean_q == second[i].mean_q);
        CHECK(first[i].mean_p == second[i].mean_p);
    }
    std::filesystem::remove_all(cfg.cdf_cache_dir);
    std::remove(kParityFile);
}

TEST_CASE("without channel memory the target patterns stay cheap to reach") {
    // On a memoryless channel the mean logistic weight of the target pattern
    // stays at most 30 over the operating range, i.e. well within an ordered
    // search budget; it also shrinks with SNR.
    SimConfig cfg;
    cfg.code_id = "bch127_113";
    cfg.taps = {1.0};
    cfg.ebn0_grid_db = {4, 5, 6, 7, 8};
    cfg.trials = 10000;
    cfg.seed = 808;
    DecoderSetup probe;  // the statistic needs no decoding work: one query only
    probe.memoryless = true;
    probe.q = probe.q1 = 1;
    cfg.decoders = {probe};
    const auto stats = run_sweep(cfg);
    REQUIRE(stats.size() == 5);
    for (std::size_t i = 0; i < stats.size(); ++i) {
        CHECK(stats[i].mean_logistic_weight >= 0.0);
        CHECK(stats[i].mean_logistic_weight <= 30.0);
        if (i) CHECK(stats[i].mean_logistic_weight < stats[i - 1].mean_logistic_weight);
    }
}

TEST_CASE("emitted files") {
    write_hamming74();
    SimConfig cfg = small_config();
    cfg.trials = 100;
    cfg.decoders.resize(2);
    const auto stats = run_sweep(cfg);

    CHECK_THROWS_AS(emit_results({}, "csv", "should_not_exist.csv"), std::invalid_argument);
    CHECK_FALSE(std::filesystem::exists("should_not_exist.csv"));
    CHECK_THROWS_AS(emit_results(stats, "yaml", "x.yaml"), std::invalid_argument);

    emit_results(stats, "csv", "sim_test_out.csv");
    emit_results(stats, "csv", "sim_test_out2.csv");
    {
        std::ifstream a("sim_test_out.csv"), b("sim_test_out2.csv");
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        REQUIRE(!sa.str().empty());
        CHECK(sa.str() == sb.str());  // byte-identical on identical stats

        // header + one row per (decoder, point); floats round-trip at 17 digits
        std::string line;
        std::getline(sa, line);
        CHECK(line == "decoder,snr_db,bler,bler_ci95,abandon_rate,mean_q,mean_p,genie_bler,trials,seed");
        std::size_t row = 0;
        while (std::getline(sa, line)) {
            std::stringstream ls(line);
            std::string field;
            std::getline(ls, field, ',');
            CHECK(field == stats[row].decoder);
            std::getline(ls, field, ',');
            CHECK(std::stod(field) == stats[row].snr_db);
            std::getline(ls, field, ',');
            CHECK(std::stod(field) == stats[row].bler);
            std::getline(ls, field, ',');
            CHECK(std::stod(field) == stats[row].bler_ci95);
            std::getline(ls, field, ',');
            CHECK(std::stod(field) == stats[row].abandon_rate);
            std::getline(ls, field, ',');
            CHECK(std::stod(field) == stats[row].mean_q);
            std::getline(ls, field, ',');
            CHECK(std::stod(field) == stats[row].mean_p);
            ++row;
        }
        CHECK(row == stats.size());
    }

    emit_results(stats, "json", "sim_test_out.json");
    {
        std::ifstream j("sim_test_out.json");
        nlohmann::json parsed = nlohmann::json::parse(j);
        REQUIRE(parsed.is_array());
        REQUIRE(parsed.size() == stats.size());
        CHECK(parsed[0]["decoder"] == stats[0].decoder);
        CHECK(parsed[0]["bler"] == stats[0].bler);
        CHECK(parsed[0].contains("mean_logistic_weight"));
    }

    std::remove("sim_test_out.csv");
    std::remove("sim_test_out2.csv");
    std::remove("sim_test_out.json");
    std::remove(kParityFile);
}
