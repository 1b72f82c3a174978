#ifndef GISI_BITS_HPP
#define GISI_BITS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gisi {

// Length-N blocks of binary symbols (values 0/1) and real channel samples.
using BitBlock = std::vector<std::uint8_t>;
using RealBlock = std::vector<double>;

inline BitBlock parse_bits(const std::string& s) {
    BitBlock b;
    b.reserve(s.size());
    for (char c : s) {
        if (c == '0' || c == '1') {
            b.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c != ' ' && c != '_') {
            throw std::invalid_argument("bit string may contain only 0/1");
        }
    }
    return b;
}

inline std::string bits_to_string(const BitBlock& b) {
    std::string s;
    s.reserve(b.size());
    for (auto v : b) s.push_back(v ? '1' : '0');
    return s;
}

inline BitBlock xor_blocks(const BitBlock& a, const BitBlock& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_blocks: length mismatch");
    BitBlock r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
    return r;
}

inline int hamming_weight(const BitBlock& b) {
    int w = 0;
    for (auto v : b) w += v;
    return w;
}

}  // namespace gisi

#endif
