#include "sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "detector.hpp"

namespace gisi {

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        std::stringstream ts(tok);
        double v;
        while (ts >> v) out.push_back(v);
    }
    return out;
}

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

DecoderSetup parse_decoder_entry(const std::string& text) {
    std::stringstream ss(text);
    std::string name;
    ss >> name;
    DecoderSetup d;
    if (name == "memoryless" || name == "orbgrand_memoryless") {
        d.memoryless = true;
        d.q = d.q1 = 150000;
    } else {
        d.kind = parse_gamma_kind(name);
    }
    std::string kv;
    while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("decoder option needs key=value: " + kv);
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "q") d.q = std::stoull(val);
        else if (key == "q1") d.q1 = std::stoull(val);
        else if (key == "g") d.g = std::stoi(val);
        else if (key == "label") d.label = val;
        else throw std::invalid_argument("unknown decoder option: " + key);
    }
    if (d.memoryless) d.q1 = d.q;  // single budget for the baseline
    return d;
}

std::string sanitize_token(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string decoder_label(const DecoderSetup& d, int g_resolved) {
    if (!d.label.empty()) return d.label;
    if (d.memoryless) return "ORBGRAND";
    switch (d.kind) {
        case GammaKind::SGrand: return "SGRAND-ISI-" + std::to_string(g_resolved);
        case GammaKind::Orb: return "ORBGRAND-ISI-" + std::to_string(g_resolved);
        case GammaKind::CdfOrb: return "CDF-ORBGRAND-ISI-" + std::to_string(g_resolved);
        case GammaKind::TwoLine: return "2line-ORBGRAND-ISI-" + std::to_string(g_resolved);
    }
    return "?";
}

SimConfig parse_sim_config(std::istream& in) {
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string val = trimmed(line.substr(eq + 1));
        if (key == "code") cfg.code_id = val;
        else if (key == "taps") cfg.taps = parse_double_list(val);
        else if (key == "ebn0_db_grid" || key == "grid") cfg.ebn0_grid_db = parse_double_list(val);
        else if (key == "trials") cfg.trials = std::stoull(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "out") cfg.out_path = val;
        else if (key == "format") cfg.format = val;
        else if (key == "cdf_trials") cfg.cdf_trials = std::stoull(val);
        else if (key == "cdf_cache") cfg.cdf_cache_dir = val;
        else if (key == "threads") cfg.threads = std::stoi(val);
        else if (key == "decoder") cfg.decoders.push_back(parse_decoder_entry(val));
        else if (key == "decoders") {
            std::stringstream ss(val);
            std::string entry;
            while (std::getline(ss, entry, ';')) {
                entry = trimmed(entry);
                if (!entry.empty()) cfg.decoders.push_back(parse_decoder_entry(entry));
            }
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

SimConfig parse_sim_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_sim_config(in);
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GRAND_ISI_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

struct DecoderPlan {
    DecoderSetup setup;
    std::string label;
    int g = 0;
    DecoderConfig cfg;
};

struct TrialRecord {
    std::uint8_t error = 0;
    std::uint8_t abandon = 0;
    std::uint32_t q = 0;
    std::uint32_t p = 0;
};

}  // namespace

std::vector<AggregateStats> run_sweep(const SimConfig& cfg, std::ostream* progress) {
    if (cfg.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
    if (cfg.ebn0_grid_db.empty()) throw std::invalid_argument("run_sweep: empty Eb/N0 grid");
    if (cfg.decoders.empty()) throw std::invalid_argument("run_sweep: empty decoder list");
    if (cfg.taps.empty()) throw std::invalid_argument("run_sweep: no channel taps");

    const CodeSpec code = make_code(cfg.code_id);
    bool normalized = false;
    const ChannelModel ref = ChannelModel::create_normalized(cfg.taps, 1.0, &normalized);
    if (normalized && progress)
        *progress << "warning: taps rescaled to unit energy (sum h^2 != 1)\n";
    const int order = ref.order();
    const int dict_l = std::max(1, order);

    std::vector<DecoderPlan> plans;
    bool any_isi = false;
    int genie_plan = -1;
    for (const DecoderSetup& d : cfg.decoders) {
        DecoderPlan p;
        p.setup = d;
        p.g = d.g >= 0 ? d.g : (order >= 2 ? 3 : 0);
        p.label = decoder_label(d, p.g);
        p.cfg = DecoderConfig{d.q, d.memoryless ? d.q : d.q1, p.g};
        if (p.cfg.max_valid_queries < 1 || p.cfg.max_candidates < p.cfg.max_valid_queries)
            throw std::invalid_argument("run_sweep: decoder budgets need Q >= 1 and Q1 >= Q");
        if (!d.memoryless) {
            any_isi = true;
            if (genie_plan < 0 && d.kind == GammaKind::SGrand) genie_plan = static_cast<int>(plans.size());
        }
        plans.push_back(std::move(p));
    }

    // shared dictionaries and per-burst check words, one per distinct g
    std::map<int, std::shared_ptr<const BurstDictionary>> dicts;
    std::map<int, std::vector<std::uint64_t>> burst_synds;
    for (const DecoderPlan& p : plans) {
        if (p.setup.memoryless || dicts.count(p.g)) continue;
        dicts[p.g] = shared_bursts(code.n, dict_l, p.g);
        burst_synds[p.g] = burst_syndromes(code, *dicts[p.g]);
    }

    const int nthreads = resolve_threads(cfg.threads);
    const std::size_t nd = plans.size();
    const std::size_t npoints = cfg.ebn0_grid_db.size();
    std::vector<AggregateStats> stats(nd * npoints);

    for (std::size_t si = 0; si < npoints; ++si) {
        const auto t_start = std::chrono::steady_clock::now();
        const double ebn0_db = cfg.ebn0_grid_db[si];
        const double sigma2 = ebn0_to_sigma2(ebn0_db, code.rate());
        const ChannelModel model = ChannelModel::create(ref.taps, sigma2);

        // CDF models per distinct g among companded decoders at this point
        std::map<int, CdfModel> cdfs;
        std::map<int, TwoLineFit> fits;
        for (const DecoderPlan& p : plans) {
            if (p.setup.memoryless) continue;
            if (p.setup.kind != GammaKind::CdfOrb && p.setup.kind != GammaKind::TwoLine) continue;
            if (!cdfs.count(p.g)) {
                const std::uint64_t cdf_seed = mix_seed(cfg.seed, 0xCDF0000u + si, static_cast<std::uint64_t>(p.g));
                bool loaded = false;
                std::string cache_path;
                if (!cfg.cdf_cache_dir.empty()) {
                    std::filesystem::create_directories(cfg.cdf_cache_dir);
                    cache_path = cfg.cdf_cache_dir + "/cdf_" + sanitize_token(cfg.code_id) + "_L" +
                                 std::to_string(dict_l) + "_g" + std::to_string(p.g) + "_s2" +
                                 sanitize_token(fmt_double(sigma2)) + "_t" + std::to_string(cfg.cdf_trials) +
                                 "_seed" + std::to_string(cdf_seed) + ".bin";
                    if (std::filesystem::exists(cache_path)) {
                        cdfs[p.g] = load_cdf_model(cache_path);
                        loaded = true;
                    }
                }
                if (!loaded) {
                    cdfs[p.g] = build_cdf_model(code, model, *dicts[p.g], cfg.cdf_trials, cdf_seed, cfg.code_id);
                    if (!cache_path.empty()) save_cdf_model(cdfs[p.g], cache_path);
                }
            }
            if (p.setup.kind == GammaKind::TwoLine && !fits.count(p.g)) fits[p.g] = fit_two_line(cdfs[p.g]);
        }

        // trial-independent gamma tables for the rank-based providers
        std::vector<std::vector<double>> static_gamma(nd);
        for (std::size_t d = 0; d < nd; ++d) {
            const DecoderPlan& p = plans[d];
            if (p.setup.memoryless || p.setup.kind == GammaKind::SGrand) continue;
            const CdfModel* cdf = cdfs.count(p.g) ? &cdfs.at(p.g) : nullptr;
            const TwoLineFit* fit = fits.count(p.g) ? &fits.at(p.g) : nullptr;
            static_gamma[d] = static_gamma_by_rank(p.setup.kind, dicts.at(p.g)->size(), cdf, fit);
        }

        std::vector<std::vector<TrialRecord>> rec(nd, std::vector<TrialRecord>(cfg.trials));
        std::vector<std::int64_t> lw(cfg.trials, 0);
        std::vector<std::uint8_t> genie(cfg.trials, 0);

        std::atomic<std::uint64_t> next_trial{0};
        auto worker = [&]() {
            SubsetSumGenerator gen;
            BitBlock msg(static_cast<std::size_t>(code.k));
            std::vector<GammaProvider> providers(nd);
            for (std::size_t d = 0; d < nd; ++d) {
                if (plans[d].setup.memoryless) continue;
                providers[d].kind = plans[d].setup.kind;
                if (!static_gamma[d].empty()) providers[d].gamma_by_rank = static_gamma[d];
            }
            std::vector<DecodeResult> results(nd);
            std::map<int, ReliabilityTable> tables;
            std::map<int, std::vector<std::uint32_t>> orders;

            for (std::uint64_t t = next_trial.fetch_add(1); t < cfg.trials; t = next_trial.fetch_add(1)) {
                GaussianStream stream(mix_seed(cfg.seed, si, t));
                std::uint64_t word = 0;
                for (int i = 0; i < code.k; ++i) {
                    if (i % 64 == 0) word = stream.next_u64();
                    msg[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((word >> (i % 64)) & 1);
                }
                const BitBlock cw = encode(code, msg);
                const RealBlock y = transmit(cw, model, stream);
                lw[t] = logistic_weight_of_target(y, cw, model);

                if (any_isi) {
                    const DetectionResult det = viterbi_hard(y, model);
                    const auto star_synd = code.syndrome(det.hard_sequence);
                    bool star_ok = true;
                    for (std::uint64_t w : star_synd) star_ok = star_ok && w == 0;
                    if (!star_ok) {
                        tables.clear();
                        orders.clear();
                        for (const auto& [g, dict] : dicts) {
                            tables[g] = order == 1 ? rel_table_first_order(det.hard_sequence, y, model, dict)
                                                   : rel_table_general(det.hard_sequence, y, model, dict);
                            orders[g] = reliability_argsort(tables[g]);
                        }
                    }
                    for (std::size_t d = 0; d < nd; ++d) {
                        const DecoderPlan& p = plans[d];
                        if (p.setup.memoryless) continue;
                        if (!star_ok) {
                            providers[d].rank_to_burst = orders.at(p.g);
                            if (p.setup.kind == GammaKind::SGrand) {
                                const ReliabilityTable& tb = tables.at(p.g);
                                auto& gamma = providers[d].gamma_by_rank;
                                gamma.resize(tb.values.size());
                                for (std::size_t i = 0; i < gamma.size(); ++i)
                                    gamma[i] = std::max(0.0, tb.values[providers[d].rank_to_burst[i]]);
                                for (std::size_t i = 1; i < gamma.size(); ++i)
                                    gamma[i] = std::max(gamma[i], gamma[i - 1]);
                            }
                        }
                        results[d] = grand_isi_run(det.hard_sequence, star_synd, code, *dicts.at(p.g),
                                                   providers[d], burst_synds.at(p.g), p.cfg, gen);
                    }
                    if (genie_plan >= 0)
                        genie[t] = genie_ml_error_event(results[static_cast<std::size_t>(genie_plan)], cw, y, model) ? 1 : 0;
                }
                for (std::size_t d = 0; d < nd; ++d) {
                    const DecoderPlan& p = plans[d];
                    if (p.setup.memoryless) results[d] = memoryless_orbgrand_decode(y, code, model, p.cfg);
                    const DecodeResult& r = results[d];
                    TrialRecord& out = rec[d][t];
                    out.error = (r.decoded() && r.codeword == cw) ? 0 : 1;
                    out.abandon = r.decoded() ? 0 : 1;
                    out.q = static_cast<std::uint32_t>(r.candidate_queries);
                    out.p = static_cast<std::uint32_t>(r.valid_queries);
                }
            }
        };

        std::vector<std::thread> pool;
        for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        double genie_bler = std::numeric_limits<double>::quiet_NaN();
        if (genie_plan >= 0) {
            std::uint64_t events = 0;
            for (std::uint64_t t = 0; t < cfg.trials; ++t) events += genie[t];
            genie_bler = static_cast<double>(events) / static_cast<double>(cfg.trials);
        }
        double mean_lw = 0.0;
        for (std::uint64_t t = 0; t < cfg.trials; ++t) mean_lw += static_cast<double>(lw[t]);
        mean_lw /= static_cast<double>(cfg.trials);

        for (std::size_t d = 0; d < nd; ++d) {
            std::uint64_t errors = 0, abandons = 0, sq = 0, sp = 0;
            for (std::uint64_t t = 0; t < cfg.trials; ++t) {
                errors += rec[d][t].error;
                abandons += rec[d][t].abandon;
                sq += rec[d][t].q;
                sp += rec[d][t].p;
            }
            AggregateStats& s = stats[d * npoints + si];
            s.decoder = plans[d].label;
            s.snr_db = ebn0_db;
            s.trials = cfg.trials;
            s.seed = cfg.seed;
            s.bler = static_cast<double>(errors) / static_cast<double>(cfg.trials);
            s.bler_ci95 = 1.959963984540054 * std::sqrt(s.bler * (1.0 - s.bler) / static_cast<double>(cfg.trials));
            s.abandon_rate = static_cast<double>(abandons) / static_cast<double>(cfg.trials);
            s.mean_q = static_cast<double>(sq) / static_cast<double>(cfg.trials);
            s.mean_p = static_cast<double>(sp) / static_cast<double>(cfg.trials);
            s.genie_bler = genie_bler;
            s.mean_logistic_weight = mean_lw;
        }
        if (progress) {
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            char buf[160];
            std::snprintf(buf, sizeof buf, "point %zu/%zu: Eb/N0=%g dB, sigma2=%.6g, %llu trials, %.1fs",
                          si + 1, npoints, ebn0_db, sigma2,
                          static_cast<unsigned long long>(cfg.trials), secs);
            *progress << buf << std::endl;
        }
    }
    return stats;
}

std::string format_results_csv(const std::vector<AggregateStats>& stats) {
    std::string out = "decoder,snr_db,bler,bler_ci95,abandon_rate,mean_q,mean_p,genie_bler,trials,seed\n";
    for (const AggregateStats& s : stats) {
        out += s.decoder;
        out += ',' + fmt_double(s.snr_db) + ',' + fmt_double(s.bler) + ',' + fmt_double(s.bler_ci95) +
               ',' + fmt_double(s.abandon_rate) + ',' + fmt_double(s.mean_q) + ',' + fmt_double(s.mean_p) +
               ',' + fmt_double(s.genie_bler) + ',' + std::to_string(s.trials) + ',' + std::to_string(s.seed) + '\n';
    }
    return out;
}

void emit_results(const std::vector<AggregateStats>& stats, const std::string& format,
                  const std::string& path) {
    if (stats.empty()) throw std::invalid_argument("emit_results: no rows to write");
    std::string body;
    if (format == "csv") {
        body = format_results_csv(stats);
    } else if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const AggregateStats& s : stats) {
            arr.push_back({{"decoder", s.decoder},
                           {"snr_db", s.snr_db},
                           {"bler", s.bler},
                           {"bler_ci95", s.bler_ci95},
                           {"abandon_rate", s.abandon_rate},
                           {"mean_q", s.mean_q},
                           {"mean_p", s.mean_p},
                           {"genie_bler", s.genie_bler},
                           {"trials", s.trials},
                           {"seed", s.seed},
                           {"mean_logistic_weight", s.mean_logistic_weight}});
        }
        body = arr.dump(2);
        body.push_back('\n');
    } else {
        throw std::invalid_argument("emit_results: format must be csv or json");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_results: cannot open " + path);
    out << body;
    if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

}  // namespace gisi
