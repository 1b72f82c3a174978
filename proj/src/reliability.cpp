#include "reliability.hpp"

#include <algorithm>
#include <stdexcept>

namespace gisi {

namespace {

bool is_contiguous(const std::vector<std::uint16_t>& idx) {
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] != idx[i - 1] + 1) return false;
    return true;
}

void collect_partials(int n, int l, int g, int target_size, std::vector<std::uint16_t>& prefix,
                      std::vector<std::vector<std::uint16_t>>& out) {
    if (static_cast<int>(prefix.size()) == target_size) {
        bool has_gap = false;
        for (std::size_t i = 1; i < prefix.size(); ++i)
            if (prefix[i] - prefix[i - 1] >= 2) has_gap = true;
        if (has_gap) out.push_back(prefix);
        return;
    }
    const int last = prefix.back();
    for (int nxt = last + 1; nxt <= std::min(last + l, n); ++nxt) {
        prefix.push_back(static_cast<std::uint16_t>(nxt));
        collect_partials(n, l, g, target_size, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

BurstDictionary enumerate_bursts(int n, int l, int g) {
    if (n < 1 || l < 1 || g < 0) throw std::invalid_argument("enumerate_bursts: bad arguments");
    if (n > 65535) throw std::invalid_argument("enumerate_bursts: block length too large");
    BurstDictionary dict;
    dict.n = n;
    dict.l = l;
    dict.g = g;
    dict.contiguous_pos_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0);

    for (int size = 1; size <= n; ++size) {
        std::vector<std::vector<std::uint16_t>> of_size;
        for (int start = 1; start + size - 1 <= n; ++start) {
            std::vector<std::uint16_t> idx(static_cast<std::size_t>(size));
            for (int j = 0; j < size; ++j) idx[static_cast<std::size_t>(j)] = static_cast<std::uint16_t>(start + j);
            of_size.push_back(std::move(idx));
        }
        if (l >= 2 && size >= 2 && size <= g) {
            std::vector<std::uint16_t> prefix(1);
            for (int start = 1; start <= n; ++start) {
                prefix[0] = static_cast<std::uint16_t>(start);
                collect_partials(n, l, g, size, prefix, of_size);
            }
        }
        std::sort(of_size.begin(), of_size.end());
        for (auto& idx : of_size) {
            Burst b;
            b.kind = is_contiguous(idx) ? BurstKind::NonDecomposable : BurstKind::PartiallyDecomposable;
            if (b.kind == BurstKind::NonDecomposable) {
                // flat (size, start) lookup used by the first-order recursion
                std::size_t off = static_cast<std::size_t>(size - 1) * n - static_cast<std::size_t>(size - 1) * (size - 2) / 2;
                dict.contiguous_pos_[off + static_cast<std::size_t>(idx[0] - 1)] = static_cast<std::uint32_t>(dict.bursts.size());
            }
            b.indices = std::move(idx);
            dict.bursts.push_back(std::move(b));
        }
    }
    return dict;
}

std::size_t BurstDictionary::contiguous_index(int start, int len) const {
    if (len < 1 || start < 1 || start + len - 1 > n) throw std::out_of_range("contiguous_index");
    std::size_t off = static_cast<std::size_t>(len - 1) * n - static_cast<std::size_t>(len - 1) * (len - 2) / 2;
    return contiguous_pos_[off + static_cast<std::size_t>(start - 1)];
}

std::shared_ptr<const BurstDictionary> shared_bursts(int n, int l, int g) {
    return std::make_shared<const BurstDictionary>(enumerate_bursts(n, l, g));
}

BitBlock flip(const BitBlock& x, std::span<const std::uint16_t> s) {
    BitBlock out = x;
    for (std::uint16_t i : s) {
        if (i < 1 || i > x.size()) throw std::out_of_range("flip: index outside the block");
        out[static_cast<std::size_t>(i - 1)] ^= 1;
    }
    return out;
}

void RelWorkspace::bind(const BitBlock& x_star, const RealBlock& y, const ChannelModel& model) {
    model_ = &model;
    y_ = &y;
    n_ = static_cast<int>(x_star.size());
    w_star_.resize(static_cast<std::size_t>(n_));
    term_star_.resize(static_cast<std::size_t>(n_));
    flipped_.assign(static_cast<std::size_t>(n_), 0);
    const int order = model.order();
    for (int i = 0; i < n_; ++i) w_star_[static_cast<std::size_t>(i)] = 1.0 - 2.0 * x_star[static_cast<std::size_t>(i)];
    for (int i = 0; i < n_; ++i) {
        double mu = 0.0;
        for (int l = 0; l <= order && l <= i; ++l) mu += model.taps[static_cast<std::size_t>(l)] * w_star_[static_cast<std::size_t>(i - l)];
        const double d = y[static_cast<std::size_t>(i)] - mu;
        term_star_[static_cast<std::size_t>(i)] = d * d;
    }
}

double RelWorkspace::rel(std::span<const std::uint16_t> s) {
    if (s.empty()) throw std::invalid_argument("rel: empty index set");
    const int order = model_->order();
    const int lo = s.front();
    const int hi = window_right(s.back(), n_, order);
    if (lo < 1 || s.back() > n_) throw std::out_of_range("rel: index outside the block");
    for (std::uint16_t i : s) flipped_[static_cast<std::size_t>(i - 1)] = 1;
    double acc = 0.0;
    for (int i = lo; i <= hi; ++i) {
        double mu = 0.0;
        for (int l = 0; l <= order && l < i; ++l) {
            const std::size_t pos = static_cast<std::size_t>(i - l - 1);
            const double w = flipped_[pos] ? -w_star_[pos] : w_star_[pos];
            mu += model_->taps[static_cast<std::size_t>(l)] * w;
        }
        const double d = (*y_)[static_cast<std::size_t>(i - 1)] - mu;
        acc += d * d - term_star_[static_cast<std::size_t>(i - 1)];
    }
    for (std::uint16_t i : s) flipped_[static_cast<std::size_t>(i - 1)] = 0;
    return acc / (2.0 * model_->noise_var);
}

double rel_direct(std::span<const std::uint16_t> s, const BitBlock& x_star, const RealBlock& y,
                  const ChannelModel& model) {
    RelWorkspace ws;
    ws.bind(x_star, y, model);
    return ws.rel(s);
}

double pair_coupling_delta(const BitBlock& x_star, int i, const ChannelModel& model) {
    if (model.order() != 1) throw std::invalid_argument("pair_coupling_delta: requires a first-order channel");
    if (i < 1 || i + 1 > static_cast<int>(x_star.size())) throw std::out_of_range("pair_coupling_delta: index");
    const double c = 4.0 * model.taps[0] * model.taps[1] / model.noise_var;
    return x_star[static_cast<std::size_t>(i - 1)] == x_star[static_cast<std::size_t>(i)] ? c : -c;
}

ReliabilityTable rel_table_first_order(const BitBlock& x_star, const RealBlock& y,
                                       const ChannelModel& model,
                                       std::shared_ptr<const BurstDictionary> dict) {
    if (model.order() != 1) throw std::invalid_argument("rel_table_first_order: requires L = 1");
    if (!dict || dict->n != static_cast<int>(x_star.size()) || dict->l != 1)
        throw std::invalid_argument("rel_table_first_order: dictionary mismatch");
    const int n = dict->n;
    ReliabilityTable table;
    table.dict = std::move(dict);
    table.values.assign(table.dict->size(), 0.0);

    RelWorkspace ws;
    ws.bind(x_star, y, model);
    for (int i = 1; i <= n; ++i) {
        const std::uint16_t s[1] = {static_cast<std::uint16_t>(i)};
        table.values[table.dict->contiguous_index(i, 1)] = ws.rel(s);
    }
    for (int len = 2; len <= n; ++len) {
        for (int start = 1; start + len - 1 <= n; ++start) {
            const int end = start + len - 1;
            table.values[table.dict->contiguous_index(start, len)] =
                table.values[table.dict->contiguous_index(start, len - 1)] +
                table.values[table.dict->contiguous_index(end, 1)] +
                pair_coupling_delta(x_star, end - 1, model);
        }
    }
    return table;
}

ReliabilityTable rel_table_general(const BitBlock& x_star, const RealBlock& y,
                                   const ChannelModel& model,
                                   std::shared_ptr<const BurstDictionary> dict) {
    if (!dict || dict->n != static_cast<int>(x_star.size()) ||
        dict->l != std::max(1, model.order()))
        throw std::invalid_argument("rel_table_general: dictionary mismatch");
    ReliabilityTable table;
    table.dict = std::move(dict);
    table.values.resize(table.dict->size());
    RelWorkspace ws;
    ws.bind(x_star, y, model);
    for (std::size_t i = 0; i < table.dict->size(); ++i)
        table.values[i] = ws.rel(table.dict->bursts[i].indices);
    return table;
}

ErrorPattern partition_into_bursts(const BitBlock& e, int l) {
    if (l < 1) throw std::invalid_argument("partition_into_bursts: order must be >= 1");
    ErrorPattern out;
    out.bits = e;
    std::vector<int> cur;
    for (int i = 1; i <= static_cast<int>(e.size()); ++i) {
        if (!e[static_cast<std::size_t>(i - 1)]) continue;
        if (!cur.empty() && i - cur.back() > l) {
            out.bursts.push_back(std::move(cur));
            cur.clear();
        }
        cur.push_back(i);
    }
    if (!cur.empty()) out.bursts.push_back(std::move(cur));
    return out;
}

}  // namespace gisi
