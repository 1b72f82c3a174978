#ifndef GISI_CODES_HPP
#define GISI_CODES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bits.hpp"
#include "gf2.hpp"

namespace gisi {

enum class CodeKind { Bch, CaPolar, ExplicitParityCheck };

// A binary (N,K) block code with encoder and codeword-membership predicate.
// Membership is exposed two ways: is_codeword() evaluates the code's native
// check (remainder / transform+frozen+CRC / parity rows), and check_column()
// gives the same checks as per-position GF(2) functionals so callers can
// maintain syndromes incrementally.
struct CodeSpec {
    CodeKind kind = CodeKind::ExplicitParityCheck;
    int n = 0;
    int k = 0;

    // BCH
    int bch_m = 0;
    int bch_t = 0;
    Gf2Poly gen_poly;  // generator g(x), degree n-k

    // CA-Polar
    std::uint64_t crc_poly = 0;
    int crc_degree = 0;
    std::vector<int> frozen_positions;  // 0-based, ascending
    std::vector<int> info_positions;    // 0-based, ascending
    std::vector<int> crc_positions;     // 0-based, ascending

    // Explicit parity check
    std::vector<BitBlock> h_rows;

    double rate() const { return static_cast<double>(k) / n; }
    int check_bits() const { return static_cast<int>(check_words_ * 64 - pad_bits_); }
    int check_words() const { return check_words_; }
    const std::uint64_t* check_column(int pos) const { return &check_cols_[static_cast<std::size_t>(pos) * check_words_]; }
    std::vector<std::uint64_t> syndrome(const BitBlock& x) const;  // via native checks

    // internal, filled by the builders
    int check_words_ = 0;
    int pad_bits_ = 0;
    std::vector<std::uint64_t> check_cols_;
    std::vector<BitBlock> h_rref_;      // explicit codes: reduced rows for encoding
    std::vector<int> pivot_cols_;
    std::vector<int> free_cols_;
};

// Narrow-sense binary BCH over GF(2^m) with designed correction capability t:
// g(x) = lcm of the minimal polynomials of alpha, alpha^3, ..., alpha^(2t-1).
CodeSpec build_bch(int m, int t);

// CRC-aided polar code. Non-frozen set = the k_info + deg(crc) most reliable
// indices of the universal reliability sequence restricted to n_bits; CRC bits
// occupy the least reliable non-frozen positions. No bit-reversal permutation.
// crc_poly is a coefficient mask (bit i = coefficient of x^i); 0 disables CRC.
CodeSpec build_ca_polar(int n_bits, int k_info, std::uint64_t crc_poly);

CodeSpec build_explicit(std::vector<BitBlock> h_rows);
CodeSpec load_parity_check(const std::string& path);  // text, one 0/1 row per line

// Config-style selector: "bch127_113" | "capolar128_114_crc6" | parity file path.
CodeSpec make_code(const std::string& id);

BitBlock encode(const CodeSpec& code, const BitBlock& message);
bool is_codeword(const CodeSpec& code, const BitBlock& x);

// GF(2) remainder of payload(x) * x^deg(poly) modulo poly. Bit 1 of the
// payload is the highest-degree coefficient; the result is MSB-first.
BitBlock crc_remainder(const BitBlock& payload, std::uint64_t poly);

// Self-inverse polar butterfly (F^{(x)n}, natural order).
void polar_transform(BitBlock& v);

}  // namespace gisi

#endif
