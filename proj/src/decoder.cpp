#include "decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "detector.hpp"

namespace gisi {

namespace {
constexpr int kMaxCheckWords = 8;
}

const char* gamma_kind_name(GammaKind kind) {
    switch (kind) {
        case GammaKind::SGrand: return "sgrand";
        case GammaKind::Orb: return "orb";
        case GammaKind::CdfOrb: return "cdforb";
        case GammaKind::TwoLine: return "2line";
    }
    return "?";
}

GammaKind parse_gamma_kind(const std::string& name) {
    if (name == "sgrand") return GammaKind::SGrand;
    if (name == "orb" || name == "orbgrand") return GammaKind::Orb;
    if (name == "cdforb" || name == "cdf") return GammaKind::CdfOrb;
    if (name == "2line" || name == "twoline") return GammaKind::TwoLine;
    throw std::invalid_argument("unknown metric provider: " + name);
}

void SubsetSumGenerator::reset(std::span<const double> ascending_weights) {
    if (ascending_weights.size() > 65535)
        throw std::invalid_argument("SubsetSumGenerator: too many items");
    for (std::size_t i = 0; i < ascending_weights.size(); ++i) {
        if (ascending_weights[i] < 0.0 || (i && ascending_weights[i] < ascending_weights[i - 1]))
            throw std::invalid_argument("SubsetSumGenerator: weights must be ascending and non-negative");
    }
    w_ = ascending_weights;
    arena_.clear();
    heap_.clear();
    arena_.push_back(Node{0.0, 0, 0, 0});  // sentinel: the empty subset
    current_ = 0;
    started_ = false;
}

void SubsetSumGenerator::push_item(double sum, std::uint32_t rest, std::uint16_t last, std::uint16_t size) {
    arena_.push_back(Node{sum, rest, last, size});
    heap_.push_back(HeapItem{sum, static_cast<std::uint32_t>(arena_.size() - 1)});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
}

bool SubsetSumGenerator::next() {
    if (!started_) {
        started_ = true;
        current_ = 0;
        return true;
    }
    // successors of the current subset
    const Node cur = arena_[current_];
    const std::uint16_t top = cur.last;  // 0 for the empty subset
    if (top < w_.size()) {
        // extend: additionally set the next rank
        push_item(cur.sum + w_[top], current_, static_cast<std::uint16_t>(top + 1),
                  static_cast<std::uint16_t>(cur.size + 1));
        if (top > 0) {
            // swap: move the highest set rank up by one
            push_item(cur.sum + (w_[top] - w_[top - 1]), cur.rest,
                      static_cast<std::uint16_t>(top + 1), cur.size);
        }
    }
    if (heap_.empty()) return false;
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
    current_ = heap_.back().node;
    heap_.pop_back();
    return true;
}

std::vector<std::uint16_t> SubsetSumGenerator::current_ranks() const {
    std::vector<std::uint16_t> out;
    out.reserve(count());
    for_each_rank_desc([&](std::uint16_t r) { out.push_back(r); });
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> reliability_argsort(const ReliabilityTable& table) {
    std::vector<std::uint32_t> order(table.values.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return table.values[a] < table.values[b];
    });
    return order;
}

std::vector<double> static_gamma_by_rank(GammaKind kind, std::size_t m, const CdfModel* cdf,
                                         const TwoLineFit* fit) {
    std::vector<double> gamma(m);
    switch (kind) {
        case GammaKind::SGrand:
            throw std::invalid_argument("static_gamma_by_rank: SGrand gammas depend on the trial");
        case GammaKind::Orb:
            for (std::size_t i = 0; i < m; ++i) gamma[i] = static_cast<double>(i + 1);
            break;
        case GammaKind::CdfOrb:
            if (!cdf) throw std::invalid_argument("static_gamma_by_rank: CdfOrb needs a CdfModel");
            for (std::size_t i = 0; i < m; ++i)
                gamma[i] = std::max(0.0, cdf->quantile(static_cast<double>(i + 1) / (static_cast<double>(m) + 1.0)));
            break;
        case GammaKind::TwoLine:
            if (!fit) throw std::invalid_argument("static_gamma_by_rank: TwoLine needs a fit");
            for (std::size_t i = 0; i < m; ++i)
                gamma[i] = std::max(0.0, fit->eval(static_cast<double>(i + 1) / (static_cast<double>(m) + 1.0)));
            break;
    }
    // companded values are nondecreasing in exact arithmetic; enforce it
    for (std::size_t i = 1; i < m; ++i) gamma[i] = std::max(gamma[i], gamma[i - 1]);
    return gamma;
}

GammaProvider make_gamma_provider(GammaKind kind, const ReliabilityTable& table,
                                  const CdfModel* cdf, const TwoLineFit* fit) {
    GammaProvider p;
    p.kind = kind;
    p.rank_to_burst = reliability_argsort(table);
    const std::size_t m = p.rank_to_burst.size();
    if (kind == GammaKind::SGrand) {
        p.gamma_by_rank.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            p.gamma_by_rank[i] = std::max(0.0, table.values[p.rank_to_burst[i]]);
        for (std::size_t i = 1; i < m; ++i)
            p.gamma_by_rank[i] = std::max(p.gamma_by_rank[i], p.gamma_by_rank[i - 1]);
    } else {
        p.gamma_by_rank = static_gamma_by_rank(kind, m, cdf, fit);
    }
    return p;
}

bool is_valid_pattern(const BurstDictionary& dict, std::span<const std::uint32_t> burst_ids, int l) {
    std::vector<std::pair<int, int>> ranges;
    ranges.reserve(burst_ids.size());
    for (std::uint32_t id : burst_ids) {
        const Burst& b = dict.bursts.at(id);
        ranges.emplace_back(b.min(), b.max());
    }
    std::sort(ranges.begin(), ranges.end());
    for (std::size_t i = 1; i < ranges.size(); ++i)
        if (ranges[i].first <= ranges[i - 1].second + l) return false;
    return true;
}

BitBlock assemble_ep(std::span<const std::uint32_t> burst_ids, const BurstDictionary& dict) {
    if (!is_valid_pattern(dict, burst_ids, dict.l))
        throw std::invalid_argument("assemble_ep: bursts overlap or are separated by <= L");
    BitBlock e(static_cast<std::size_t>(dict.n), 0);
    for (std::uint32_t id : burst_ids)
        for (std::uint16_t i : dict.bursts[id].indices) e[static_cast<std::size_t>(i - 1)] = 1;
    return e;
}

std::vector<std::uint64_t> burst_syndromes(const CodeSpec& code, const BurstDictionary& dict) {
    if (code.n != dict.n) throw std::invalid_argument("burst_syndromes: dimension mismatch");
    const int words = code.check_words();
    std::vector<std::uint64_t> out(dict.size() * static_cast<std::size_t>(words), 0);
    for (std::size_t b = 0; b < dict.size(); ++b) {
        std::uint64_t* dst = out.data() + b * static_cast<std::size_t>(words);
        for (std::uint16_t i : dict.bursts[b].indices) {
            const std::uint64_t* col = code.check_column(i - 1);
            for (int w = 0; w < words; ++w) dst[w] ^= col[w];
        }
    }
    return out;
}

DecodeResult grand_isi_run(const BitBlock& x_star, std::span<const std::uint64_t> star_syndrome,
                           const CodeSpec& code, const BurstDictionary& dict,
                           const GammaProvider& provider, std::span<const std::uint64_t> burst_synd,
                           const DecoderConfig& cfg, SubsetSumGenerator& gen) {
    if (cfg.max_valid_queries < 1 || cfg.max_candidates < cfg.max_valid_queries)
        throw std::invalid_argument("DecoderConfig: need Q >= 1 and Q1 >= Q");
    const int words = code.check_words();
    if (words > kMaxCheckWords) throw std::invalid_argument("grand_isi_run: too many check bits");

    DecodeResult res;
    res.candidate_queries = 1;  // the empty-set candidate tests x* itself

    bool star_ok = true;
    for (int w = 0; w < words; ++w) star_ok = star_ok && star_syndrome[static_cast<std::size_t>(w)] == 0;
    if (star_ok) {
        res.outcome = DecodeResult::Outcome::Decoded;
        res.codeword = x_star;
        res.error_pattern.assign(x_star.size(), 0);
        res.valid_queries = 1;
        res.metric_sum = 0.0;
        return res;
    }
    if (cfg.max_candidates <= 1) return res;  // Abandon with q = 1, p = 0

    gen.reset(provider.gamma_by_rank);
    gen.next();  // the empty set, already accounted for above

    const int l = dict.l;
    std::vector<std::uint32_t> chosen;
    std::vector<std::pair<int, int>> ranges;
    chosen.reserve(64);
    ranges.reserve(64);
    std::uint64_t synd[kMaxCheckWords];

    while (res.candidate_queries < cfg.max_candidates && gen.next()) {
        ++res.candidate_queries;
        const std::size_t k = gen.count();

        chosen.resize(k);
        ranges.resize(k);
        std::size_t j = 0;
        gen.for_each_rank_desc([&](std::uint16_t rank) { chosen[j++] = provider.rank_to_burst[rank - 1]; });
        bool valid = true;
        for (std::size_t i = 0; i < k; ++i) {
            const Burst& b = dict.bursts[chosen[i]];
            std::pair<int, int> r{b.min(), b.max()};
            std::size_t at = i;  // insertion sort by burst start
            while (at > 0 && ranges[at - 1] > r) {
                ranges[at] = ranges[at - 1];
                --at;
            }
            ranges[at] = r;
        }
        for (std::size_t i = 1; valid && i < k; ++i)
            valid = ranges[i].first > ranges[i - 1].second + l;
        if (!valid) continue;

        ++res.valid_queries;
        for (int w = 0; w < words; ++w) synd[w] = star_syndrome[static_cast<std::size_t>(w)];
        for (std::size_t i = 0; i < k; ++i) {
            const std::uint64_t* bs = burst_synd.data() + static_cast<std::size_t>(chosen[i]) * words;
            for (int w = 0; w < words; ++w) synd[w] ^= bs[w];
        }
        bool zero = true;
        for (int w = 0; w < words; ++w) zero = zero && synd[w] == 0;
        if (zero) {
            res.outcome = DecodeResult::Outcome::Decoded;
            res.error_pattern.assign(x_star.size(), 0);
            for (std::size_t i = 0; i < k; ++i)
                for (std::uint16_t pos : dict.bursts[chosen[i]].indices)
                    res.error_pattern[static_cast<std::size_t>(pos - 1)] = 1;
            res.codeword = xor_blocks(x_star, res.error_pattern);
            res.metric_sum = gen.sum();
            return res;
        }
        if (res.valid_queries >= cfg.max_valid_queries) return res;  // Abandon at p = Q
    }
    return res;  // Abandon: candidate budget or exhaustion
}

DecodeResult grand_isi_decode(const RealBlock& y, const CodeSpec& code, const ChannelModel& model,
                              GammaKind kind, const DecoderConfig& cfg,
                              const CdfModel* cdf, const TwoLineFit* fit) {
    if (static_cast<int>(y.size()) != code.n) throw std::invalid_argument("grand_isi_decode: dimension mismatch");
    const DetectionResult det = viterbi_hard(y, model);
    const auto star_synd = code.syndrome(det.hard_sequence);

    bool star_ok = std::all_of(star_synd.begin(), star_synd.end(), [](std::uint64_t w) { return w == 0; });
    SubsetSumGenerator gen;
    if (star_ok || cfg.max_candidates <= 1) {
        // cheap paths need no table; reuse the engine's bookkeeping
        BurstDictionary empty_dict;
        empty_dict.n = code.n;
        empty_dict.l = model.order();
        GammaProvider p;
        return grand_isi_run(det.hard_sequence, star_synd, code, empty_dict, p, {}, cfg, gen);
    }

    // A memoryless channel uses the L=1 burst structure: singletons suffice,
    // contiguous bursts are redundant but harmless (their couplings are zero).
    auto dict = shared_bursts(code.n, std::max(1, model.order()), cfg.g);
    const ReliabilityTable table = model.order() == 1
                                       ? rel_table_first_order(det.hard_sequence, y, model, dict)
                                       : rel_table_general(det.hard_sequence, y, model, dict);
    TwoLineFit local_fit;
    if (kind == GammaKind::TwoLine && !fit) {
        if (!cdf) throw std::invalid_argument("grand_isi_decode: 2line needs a CdfModel or a fit");
        local_fit = fit_two_line(*cdf);
        fit = &local_fit;
    }
    const GammaProvider provider = make_gamma_provider(kind, table, cdf, fit);
    const auto bsynd = burst_syndromes(code, *dict);
    return grand_isi_run(det.hard_sequence, star_synd, code, *dict, provider, bsynd, cfg, gen);
}

namespace {

std::vector<std::uint32_t> reliability_rank_positions(const RealBlock& y) {
    std::vector<std::uint32_t> pos(y.size());
    std::iota(pos.begin(), pos.end(), 0u);
    std::stable_sort(pos.begin(), pos.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::abs(y[a]) < std::abs(y[b]);
    });
    return pos;
}

}  // namespace

DecodeResult memoryless_orbgrand_decode(const RealBlock& y, const CodeSpec& code,
                                        const ChannelModel& model, const DecoderConfig& cfg) {
    (void)model;  // the baseline deliberately ignores the channel memory
    if (static_cast<int>(y.size()) != code.n)
        throw std::invalid_argument("memoryless_orbgrand_decode: dimension mismatch");
    const int words = code.check_words();
    if (words > kMaxCheckWords) throw std::invalid_argument("memoryless_orbgrand_decode: too many check bits");
    const std::size_t n = y.size();

    BitBlock hard(n);
    for (std::size_t i = 0; i < n; ++i) hard[i] = y[i] < 0.0 ? 1 : 0;
    const std::vector<std::uint32_t> pos_by_rank = reliability_rank_positions(y);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = static_cast<double>(i + 1);

    const auto base = code.syndrome(hard);
    const std::uint64_t budget = std::min(cfg.max_valid_queries, cfg.max_candidates);

    SubsetSumGenerator gen;
    gen.reset(weights);
    DecodeResult res;
    std::uint64_t synd[kMaxCheckWords];
    while (res.candidate_queries < budget && gen.next()) {
        ++res.candidate_queries;
        for (int w = 0; w < words; ++w) synd[w] = base[static_cast<std::size_t>(w)];
        gen.for_each_rank_desc([&](std::uint16_t rank) {
            const std::uint64_t* col = code.check_column(static_cast<int>(pos_by_rank[rank - 1]));
            for (int w = 0; w < words; ++w) synd[w] ^= col[w];
        });
        bool zero = true;
        for (int w = 0; w < words; ++w) zero = zero && synd[w] == 0;
        if (zero) {
            res.outcome = DecodeResult::Outcome::Decoded;
            res.error_pattern.assign(n, 0);
            gen.for_each_rank_desc([&](std::uint16_t rank) { res.error_pattern[pos_by_rank[rank - 1]] = 1; });
            res.codeword = xor_blocks(hard, res.error_pattern);
            res.valid_queries = res.candidate_queries;
            res.metric_sum = gen.sum();
            return res;
        }
    }
    res.valid_queries = res.candidate_queries;  // every pattern is valid here
    return res;
}

std::int64_t logistic_weight_of_target(const RealBlock& y, const BitBlock& transmitted,
                                       const ChannelModel& model) {
    (void)model;
    if (y.size() != transmitted.size())
        throw std::invalid_argument("logistic_weight_of_target: dimension mismatch");
    const std::vector<std::uint32_t> pos_by_rank = reliability_rank_positions(y);
    std::int64_t lw = 0;
    for (std::size_t r = 0; r < pos_by_rank.size(); ++r) {
        const std::uint32_t i = pos_by_rank[r];
        const std::uint8_t hard = y[i] < 0.0 ? 1 : 0;
        if (hard != transmitted[i]) lw += static_cast<std::int64_t>(r + 1);
    }
    return lw;
}

bool genie_ml_error_event(const DecodeResult& result, const BitBlock& transmitted,
                          const RealBlock& y, const ChannelModel& model) {
    if (!result.decoded()) return false;
    if (result.codeword == transmitted) return false;
    return weight_lambda(result.codeword, y, model) >= weight_lambda(transmitted, y, model);
}

}  // namespace gisi
