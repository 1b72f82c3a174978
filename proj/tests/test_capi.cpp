#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "grand_isi.h"

TEST_CASE("code handles") {
    gisi_code* code = nullptr;
    REQUIRE(gisi_code_create("bch127_113", &code) == GRAND_ISI_OK);
    int n = 0, k = 0;
    CHECK(gisi_code_dims(code, &n, &k) == GRAND_ISI_OK);
    CHECK(n == 127);
    CHECK(k == 113);

    std::vector<uint8_t> msg(113, 0), cw(127, 0);
    msg[0] = msg[5] = msg[112] = 1;
    REQUIRE(gisi_encode(code, msg.data(), msg.size(), cw.data(), cw.size()) == GRAND_ISI_OK);
    int ok = 0;
    CHECK(gisi_is_codeword(code, cw.data(), cw.size(), &ok) == GRAND_ISI_OK);
    CHECK(ok == 1);
    cw[3] ^= 1;
    CHECK(gisi_is_codeword(code, cw.data(), cw.size(), &ok) == GRAND_ISI_OK);
    CHECK(ok == 0);
    gisi_code_destroy(code);

    CHECK(gisi_code_create("definitely_missing", &code) != GRAND_ISI_OK);
    CHECK(std::strlen(gisi_last_error()) > 0);
}

TEST_CASE("channel, detection and the worked instance") {
    const double taps[2] = {std::sqrt(0.9), std::sqrt(0.1)};
    gisi_channel* ch = nullptr;
    REQUIRE(gisi_channel_create(taps, 2, 1.0, 0, &ch) == GRAND_ISI_OK);
    CHECK(gisi_channel_order(ch) == 1);

    const double y[4] = {0.63, 0.87, 0.8, -1.77};
    uint8_t hard[4];
    double weight = 0.0;
    REQUIRE(gisi_viterbi(ch, y, 4, hard, &weight) == GRAND_ISI_OK);
    CHECK(hard[0] == 0);
    CHECK(hard[1] == 0);
    CHECK(hard[2] == 0);
    CHECK(hard[3] == 1);

    double lam = 0.0;
    REQUIRE(gisi_weight_lambda(ch, hard, y, 4, &lam) == GRAND_ISI_OK);
    CHECK(lam == weight);

    // reliability table dump carries all ten bursts of the N=4 dictionary
    char* csv = nullptr;
    REQUIRE(gisi_dump_rel_csv(ch, y, 4, 0, &csv) == GRAND_ISI_OK);
    std::string text(csv);
    gisi_string_free(csv);
    CHECK(text.rfind("indices;rel\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 11);  // header + 10 rows
    CHECK(text.find("1 2 3 4;") != std::string::npos);

    double s2 = 0.0;
    CHECK(gisi_ebn0_to_sigma2(0.0, 0.5, &s2) == GRAND_ISI_OK);
    CHECK(s2 == doctest::Approx(1.0).epsilon(1e-12));

    gisi_channel_destroy(ch);

    const double bad_taps[2] = {1.0, 1.0};
    CHECK(gisi_channel_create(bad_taps, 2, 1.0, 0, &ch) != GRAND_ISI_OK);
    REQUIRE(gisi_channel_create(bad_taps, 2, 1.0, 1, &ch) == GRAND_ISI_OK);
    gisi_channel_destroy(ch);
}

TEST_CASE("single-trial decode through the shared library") {
    gisi_code* code = nullptr;
    REQUIRE(gisi_code_create_bch(7, 2, &code) == GRAND_ISI_OK);
    const double taps[2] = {std::sqrt(0.9), std::sqrt(0.1)};
    gisi_channel* ch = nullptr;
    REQUIRE(gisi_channel_create(taps, 2, 1e-9, 0, &ch) == GRAND_ISI_OK);  // almost noiseless

    std::vector<uint8_t> sent(127), hard(127), cw(127), ep(127);
    std::vector<double> y(127);
    double hw = 0.0;
    gisi_decode_info info{};
    REQUIRE(gisi_decode_one_trial(code, ch, "sgrand", 1000, 10000, 0, 7, nullptr, 0, sent.data(),
                                  y.data(), hard.data(), &hw, cw.data(), ep.data(),
                                  &info) == GRAND_ISI_OK);
    CHECK(info.decoded == 1);
    CHECK(info.candidate_queries == 1);
    CHECK(info.valid_queries == 1);
    CHECK(cw == sent);

    // transmit is deterministic per seed
    std::vector<double> y1(127), y2(127);
    REQUIRE(gisi_transmit(ch, sent.data(), sent.size(), 5, y1.data()) == GRAND_ISI_OK);
    REQUIRE(gisi_transmit(ch, sent.data(), sent.size(), 5, y2.data()) == GRAND_ISI_OK);
    CHECK(y1 == y2);

    gisi_channel_destroy(ch);
    gisi_code_destroy(code);
}

TEST_CASE("cdf build, save, load") {
    gisi_code* code = nullptr;
    REQUIRE(gisi_code_create("capolar128_114_crc6", &code) == GRAND_ISI_OK);
    const double taps[2] = {std::sqrt(0.9), std::sqrt(0.1)};
    gisi_channel* ch = nullptr;
    REQUIRE(gisi_channel_create(taps, 2, 0.2, 0, &ch) == GRAND_ISI_OK);

    gisi_cdf* cdf = nullptr;
    REQUIRE(gisi_cdf_build(code, ch, 0, 1000, 11, &cdf) == GRAND_ISI_OK);
    double q50 = 0.0, q90 = 0.0;
    CHECK(gisi_cdf_quantile(cdf, 0.5, &q50) == GRAND_ISI_OK);
    CHECK(gisi_cdf_quantile(cdf, 0.9, &q90) == GRAND_ISI_OK);
    CHECK(q90 >= q50);

    REQUIRE(gisi_cdf_save(cdf, "capi_cdf_tmp.bin") == GRAND_ISI_OK);
    gisi_cdf* loaded = nullptr;
    REQUIRE(gisi_cdf_load("capi_cdf_tmp.bin", &loaded) == GRAND_ISI_OK);
    double q50b = 0.0;
    CHECK(gisi_cdf_quantile(loaded, 0.5, &q50b) == GRAND_ISI_OK);
    CHECK(q50b == q50);
    gisi_cdf_destroy(loaded);
    gisi_cdf_destroy(cdf);
    std::remove("capi_cdf_tmp.bin");

    gisi_channel_destroy(ch);
    gisi_code_destroy(code);
}

TEST_CASE("complexity counters") {
    char buf[128];
    REQUIRE(gisi_complexity_tot(4, 1, buf, sizeof buf) == GRAND_ISI_OK);
    CHECK(std::string(buf) == "10");
    REQUIRE(gisi_complexity_tot(5, 2, buf, sizeof buf) == GRAND_ISI_OK);
    CHECK(std::string(buf) == "26");
    double v = 0.0;
    REQUIRE(gisi_tot_closed_form_l2(3, &v) == GRAND_ISI_OK);
    CHECK(v == doctest::Approx(7.0).epsilon(1e-9));

    char tiny[4];
    CHECK(gisi_complexity_tot(200, 2, tiny, sizeof tiny) == GRAND_ISI_ERANGE);
}

TEST_CASE("simulation from a config file") {
    {
        std::ofstream parity("capi_parity_tmp.txt");
        parity << "1110100\n0111010\n0011101\n";
    }
    {
        std::ofstream cfg("capi_sim_tmp.cfg");
        cfg << "code = capi_parity_tmp.txt\n"
               "taps = 0.94868329805051381, 0.31622776601683794\n"
               "ebn0_db_grid = 4\n"
               "trials = 200\n"
               "seed = 5\n"
               "out = capi_sim_tmp.csv\n"
               "decoder = sgrand q=64 q1=512\n";
    }
    REQUIRE(gisi_simulate_file("capi_sim_tmp.cfg", 0) == GRAND_ISI_OK);
    std::ifstream out("capi_sim_tmp.csv");
    REQUIRE(out.good());
    std::string header;
    std::getline(out, header);
    CHECK(header == "decoder,snr_db,bler,bler_ci95,abandon_rate,mean_q,mean_p,genie_bler,trials,seed");
    std::string row;
    CHECK(std::getline(out, row).good());
    CHECK(row.rfind("SGRAND-ISI-0,", 0) == 0);

    CHECK(gisi_simulate_file("no_such_config_file.cfg", 0) != GRAND_ISI_OK);

    std::remove("capi_parity_tmp.txt");
    std::remove("capi_sim_tmp.cfg");
    std::remove("capi_sim_tmp.csv");
}
