#include "codes.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace gisi {

namespace {

// 3GPP TS 38.212 universal polar reliability sequence restricted to indices
// below 128, least reliable first. The nesting property of the universal
// sequence makes this restriction valid for every length up to 128.
constexpr int kPolarReliability128[128] = {
    0,   1,   2,   4,   8,   16,  32,  3,   5,   64,  9,   6,   17,  10,  18,  12,
    33,  65,  20,  34,  24,  36,  7,   66,  11,  40,  68,  19,  13,  48,  14,  72,
    21,  35,  26,  80,  37,  25,  22,  38,  96,  67,  41,  28,  69,  42,  49,  74,
    70,  44,  81,  50,  73,  15,  52,  23,  76,  82,  56,  27,  97,  39,  84,  29,
    43,  98,  88,  30,  71,  45,  100, 51,  46,  75,  104, 53,  77,  54,  83,  57,
    112, 78,  85,  58,  99,  86,  60,  89,  101, 31,  90,  102, 105, 92,  47,  106,
    55,  113, 79,  108, 59,  114, 87,  116, 61,  91,  120, 62,  103, 93,  107, 94,
    109, 115, 110, 117, 118, 121, 122, 63,  124, 95,  125, 126, 111, 119, 123, 127,
};

int crc_degree_of(std::uint64_t poly) {
    int d = -1;
    for (int i = 0; i < 64; ++i)
        if (poly & (1ull << i)) d = i;
    return d;
}

void finalize_checks(CodeSpec& code);

std::vector<std::uint64_t> pack_checks(const BitBlock& raw, int words) {
    std::vector<std::uint64_t> out(static_cast<std::size_t>(words), 0);
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i]) out[i / 64] |= (1ull << (i % 64));
    return out;
}

// Native membership checks as a vector of bits; zero everywhere iff codeword.
BitBlock raw_checks(const CodeSpec& code, const BitBlock& x) {
    switch (code.kind) {
        case CodeKind::Bch: {
            // remainder of c(x) mod g(x), with bit 1 as coefficient of x^(n-1)
            Gf2Poly c(static_cast<std::size_t>(code.n), 0);
            for (int i = 0; i < code.n; ++i) c[static_cast<std::size_t>(code.n - 1 - i)] = x[static_cast<std::size_t>(i)];
            Gf2Poly r = gf2::mod(std::move(c), code.gen_poly);
            BitBlock out(static_cast<std::size_t>(code.n - code.k), 0);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = i < r.size() ? r[i] : 0;
            return out;
        }
        case CodeKind::CaPolar: {
            BitBlock u = x;
            polar_transform(u);  // involutive, recovers the pre-transform vector
            BitBlock out;
            out.reserve(code.frozen_positions.size() + static_cast<std::size_t>(code.crc_degree));
            for (int f : code.frozen_positions) out.push_back(u[static_cast<std::size_t>(f)]);
            if (code.crc_degree > 0) {
                BitBlock info(code.info_positions.size());
                for (std::size_t i = 0; i < info.size(); ++i) info[i] = u[static_cast<std::size_t>(code.info_positions[i])];
                BitBlock rem = crc_remainder(info, code.crc_poly);
                for (std::size_t i = 0; i < rem.size(); ++i)
                    out.push_back(rem[i] ^ u[static_cast<std::size_t>(code.crc_positions[i])]);
            }
            return out;
        }
        case CodeKind::ExplicitParityCheck: {
            BitBlock out(code.h_rows.size(), 0);
            for (std::size_t r = 0; r < code.h_rows.size(); ++r) {
                std::uint8_t acc = 0;
                const BitBlock& row = code.h_rows[r];
                for (int i = 0; i < code.n; ++i) acc ^= static_cast<std::uint8_t>(row[static_cast<std::size_t>(i)] & x[static_cast<std::size_t>(i)]);
                out[r] = acc;
            }
            return out;
        }
    }
    return {};
}

void finalize_checks(CodeSpec& code) {
    int bits = 0;
    switch (code.kind) {
        case CodeKind::Bch: bits = code.n - code.k; break;
        case CodeKind::CaPolar: bits = static_cast<int>(code.frozen_positions.size()) + code.crc_degree; break;
        case CodeKind::ExplicitParityCheck: bits = static_cast<int>(code.h_rows.size()); break;
    }
    code.check_words_ = (bits + 63) / 64;
    if (code.check_words_ == 0) code.check_words_ = 1;
    code.pad_bits_ = code.check_words_ * 64 - bits;
    // The checks are GF(2)-linear, so columns are the checks of unit vectors.
    code.check_cols_.assign(static_cast<std::size_t>(code.n) * code.check_words_, 0);
    BitBlock e(static_cast<std::size_t>(code.n), 0);
    for (int i = 0; i < code.n; ++i) {
        e[static_cast<std::size_t>(i)] = 1;
        auto w = pack_checks(raw_checks(code, e), code.check_words_);
        std::copy(w.begin(), w.end(), code.check_cols_.begin() + static_cast<std::size_t>(i) * code.check_words_);
        e[static_cast<std::size_t>(i)] = 0;
    }
}

}  // namespace

std::vector<std::uint64_t> CodeSpec::syndrome(const BitBlock& x) const {
    return pack_checks(raw_checks(*this, x), check_words_);
}

CodeSpec build_bch(int m, int t) {
    if (t < 1) throw std::invalid_argument("build_bch: t must be positive");
    Gf2m field(m);  // throws for unsupported m

    // g = product of the distinct minimal polynomials of alpha^(2i-1), i=1..t.
    std::set<std::uint32_t> seen_classes;
    Gf2Poly g{1};
    for (int i = 1; i <= t; ++i) {
        std::uint32_t e = static_cast<std::uint32_t>(2 * i - 1) % field.size();
        // class representative: smallest exponent in {e, 2e, 4e, ...}
        std::uint32_t rep = e, c = e;
        do {
            c = static_cast<std::uint32_t>((2ull * c) % field.size());
            rep = std::min(rep, c);
        } while (c != e);
        if (!seen_classes.insert(rep).second) continue;
        g = gf2::mul(g, field.minimal_polynomial(e));
    }

    CodeSpec code;
    code.kind = CodeKind::Bch;
    code.bch_m = m;
    code.bch_t = t;
    code.n = static_cast<int>((1u << m) - 1);
    code.k = code.n - gf2::degree(g);
    code.gen_poly = std::move(g);
    if (code.k <= 0) throw std::invalid_argument("build_bch: generator degree exhausts the block length");
    finalize_checks(code);
    return code;
}

CodeSpec build_ca_polar(int n_bits, int k_info, std::uint64_t crc_poly) {
    if (n_bits < 2 || (n_bits & (n_bits - 1)) != 0)
        throw std::invalid_argument("build_ca_polar: n_bits must be a power of two");
    if (n_bits > 128)
        throw std::invalid_argument("build_ca_polar: insufficient reliability-sequence length");
    const int crc_deg = crc_poly ? crc_degree_of(crc_poly) : 0;
    const int payload = k_info + crc_deg;
    if (k_info < 1 || payload > n_bits)
        throw std::invalid_argument("build_ca_polar: k_info + deg(crc) exceeds n_bits");

    std::vector<int> restricted;
    restricted.reserve(static_cast<std::size_t>(n_bits));
    for (int idx : kPolarReliability128)
        if (idx < n_bits) restricted.push_back(idx);

    CodeSpec code;
    code.kind = CodeKind::CaPolar;
    code.n = n_bits;
    code.k = k_info;
    code.crc_poly = crc_poly;
    code.crc_degree = crc_deg;
    code.frozen_positions.assign(restricted.begin(), restricted.end() - payload);
    code.crc_positions.assign(restricted.end() - payload, restricted.end() - payload + crc_deg);
    code.info_positions.assign(restricted.end() - payload + crc_deg, restricted.end());
    std::sort(code.frozen_positions.begin(), code.frozen_positions.end());
    std::sort(code.crc_positions.begin(), code.crc_positions.end());
    std::sort(code.info_positions.begin(), code.info_positions.end());
    finalize_checks(code);
    return code;
}

CodeSpec build_explicit(std::vector<BitBlock> h_rows) {
    if (h_rows.empty()) throw std::invalid_argument("build_explicit: empty parity-check matrix");
    const int n = static_cast<int>(h_rows[0].size());
    for (const auto& r : h_rows)
        if (static_cast<int>(r.size()) != n) throw std::invalid_argument("build_explicit: ragged rows");

    // Row-reduce a copy to find pivots; the reduced rows drive encoding.
    std::vector<BitBlock> rr = h_rows;
    std::vector<int> pivots;
    std::size_t row = 0;
    for (int col = 0; col < n && row < rr.size(); ++col) {
        std::size_t sel = row;
        while (sel < rr.size() && !rr[sel][static_cast<std::size_t>(col)]) ++sel;
        if (sel == rr.size()) continue;
        std::swap(rr[row], rr[sel]);
        for (std::size_t r2 = 0; r2 < rr.size(); ++r2) {
            if (r2 != row && rr[r2][static_cast<std::size_t>(col)])
                for (int j = 0; j < n; ++j) rr[r2][static_cast<std::size_t>(j)] ^= rr[row][static_cast<std::size_t>(j)];
        }
        pivots.push_back(col);
        ++row;
    }
    rr.resize(row);  // drop dependent rows

    CodeSpec code;
    code.kind = CodeKind::ExplicitParityCheck;
    code.n = n;
    code.k = n - static_cast<int>(pivots.size());
    if (code.k <= 0) throw std::invalid_argument("build_explicit: parity checks leave no message bits");
    code.h_rows = std::move(h_rows);
    code.h_rref_ = std::move(rr);
    code.pivot_cols_ = pivots;
    std::vector<std::uint8_t> is_pivot(static_cast<std::size_t>(n), 0);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) code.free_cols_.push_back(c);
    finalize_checks(code);
    return code;
}

CodeSpec load_parity_check(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parity-check file: " + path);
    std::vector<BitBlock> rows;
    std::string line;
    while (std::getline(in, line)) {
        BitBlock row = parse_bits(line);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("parity-check file has no rows: " + path);
    return build_explicit(std::move(rows));
}

CodeSpec make_code(const std::string& id) {
    if (id == "bch127_113") return build_bch(7, 2);
    if (id == "capolar128_114_crc6") return build_ca_polar(128, 114, 0x43);  // x^6+x+1
    return load_parity_check(id);
}

BitBlock encode(const CodeSpec& code, const BitBlock& message) {
    if (static_cast<int>(message.size()) != code.k)
        throw std::invalid_argument("encode: message length must equal K");
    switch (code.kind) {
        case CodeKind::Bch: {
            // systematic-remainder encoding: parity = m(x)*x^deg(g) mod g(x)
            const int dg = code.n - code.k;
            Gf2Poly shifted(static_cast<std::size_t>(code.n), 0);
            for (int i = 0; i < code.k; ++i)
                shifted[static_cast<std::size_t>(code.n - 1 - i)] = message[static_cast<std::size_t>(i)];
            Gf2Poly r = gf2::mod(std::move(shifted), code.gen_poly);
            BitBlock cw(static_cast<std::size_t>(code.n), 0);
            for (int i = 0; i < code.k; ++i) cw[static_cast<std::size_t>(i)] = message[static_cast<std::size_t>(i)];
            for (int i = 0; i < dg; ++i) {
                std::size_t coeff = static_cast<std::size_t>(dg - 1 - i);
                cw[static_cast<std::size_t>(code.k + i)] = coeff < r.size() ? r[coeff] : 0;
            }
            return cw;
        }
        case CodeKind::CaPolar: {
            BitBlock u(static_cast<std::size_t>(code.n), 0);
            for (std::size_t i = 0; i < code.info_positions.size(); ++i)
                u[static_cast<std::size_t>(code.info_positions[i])] = message[i];
            if (code.crc_degree > 0) {
                BitBlock rem = crc_remainder(message, code.crc_poly);
                for (std::size_t i = 0; i < rem.size(); ++i)
                    u[static_cast<std::size_t>(code.crc_positions[i])] = rem[i];
            }
            polar_transform(u);
            return u;
        }
        case CodeKind::ExplicitParityCheck: {
            BitBlock cw(static_cast<std::size_t>(code.n), 0);
            for (std::size_t i = 0; i < code.free_cols_.size(); ++i)
                cw[static_cast<std::size_t>(code.free_cols_[i])] = message[i];
            // back-substitute pivot bits from the reduced rows
            for (std::size_t r = 0; r < code.h_rref_.size(); ++r) {
                std::uint8_t acc = 0;
                for (int f : code.free_cols_) acc ^= static_cast<std::uint8_t>(code.h_rref_[r][static_cast<std::size_t>(f)] & cw[static_cast<std::size_t>(f)]);
                cw[static_cast<std::size_t>(code.pivot_cols_[r])] = acc;
            }
            return cw;
        }
    }
    throw std::logic_error("encode: unknown code kind");
}

bool is_codeword(const CodeSpec& code, const BitBlock& x) {
    if (static_cast<int>(x.size()) != code.n)
        throw std::invalid_argument("is_codeword: block length must equal N");
    const BitBlock checks = raw_checks(code, x);
    return std::all_of(checks.begin(), checks.end(), [](std::uint8_t b) { return b == 0; });
}

BitBlock crc_remainder(const BitBlock& payload, std::uint64_t poly) {
    if (payload.empty()) throw std::invalid_argument("crc_remainder: empty payload");
    const int deg = crc_degree_of(poly);
    if (deg <= 0) throw std::invalid_argument("crc_remainder: polynomial degree must be positive");
    const std::uint64_t mask = (deg == 64) ? ~0ull : ((1ull << deg) - 1);
    const std::uint64_t low = poly & mask;
    std::uint64_t reg = 0;
    for (std::uint8_t b : payload) {
        std::uint64_t fb = (reg >> (deg - 1)) ^ b;
        reg = (reg << 1) & mask;
        if (fb) reg ^= low;
    }
    BitBlock out(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((reg >> (deg - 1 - i)) & 1);
    return out;
}

void polar_transform(BitBlock& v) {
    const std::size_t n = v.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("polar_transform: length must be a power of two");
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * len)
            for (std::size_t j = 0; j < len; ++j) v[i + j] ^= v[i + j + len];
}

}  // namespace gisi
