#ifndef GISI_RELIABILITY_HPP
#define GISI_RELIABILITY_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bits.hpp"
#include "channel.hpp"

namespace gisi {

enum class BurstKind { NonDecomposable, PartiallyDecomposable };

// An error burst: strictly increasing 1-based indices with internal gaps of at
// most L. Consecutive indices make it non-decomposable; an internal gap of
// 2..L makes it partially decomposable (possible only for L >= 2).
struct Burst {
    std::vector<std::uint16_t> indices;
    BurstKind kind = BurstKind::NonDecomposable;

    int min() const { return indices.front(); }
    int max() const { return indices.back(); }
    int size() const { return static_cast<int>(indices.size()); }
};

// The enumerated burst set: all N(N+1)/2 contiguous bursts plus, for L >= 2,
// every index set with gaps <= L, at least one gap >= 2, and size <= g.
// Ordered by size, then lexicographically by indices.
struct BurstDictionary {
    int n = 0;
    int l = 1;
    int g = 0;
    std::vector<Burst> bursts;

    std::size_t size() const { return bursts.size(); }
    // Dictionary position of the contiguous burst {start, ..., start+len-1}.
    std::size_t contiguous_index(int start, int len) const;

    std::vector<std::uint32_t> contiguous_pos_;  // internal lookup
};

BurstDictionary enumerate_bursts(int n, int l, int g);
std::shared_ptr<const BurstDictionary> shared_bursts(int n, int l, int g);

// Window helpers L_L(S) and R_L(S) over 1-based indices.
inline int window_left(int s_min, int l) { return s_min - l > 1 ? s_min - l : 1; }
inline int window_right(int s_max, int n, int l) { return s_max + l < n ? s_max + l : n; }

// f_S(x): toggle the (1-based) positions in S.
BitBlock flip(const BitBlock& x, std::span<const std::uint16_t> s);

// Sequence reliability of S: the weight-function penalty of flipping x* at S.
// Only the terms i in [min(S), R_L(S)] differ, so only those are summed.
double rel_direct(std::span<const std::uint16_t> s, const BitBlock& x_star,
                  const RealBlock& y, const ChannelModel& model);

// First-order coupling Rel({i,i+1}) - Rel({i}) - Rel({i+1}) in closed form:
// 4 h0 h1 / sigma^2 times +1 if x*_i = x*_{i+1}, else -1. Requires L = 1.
double pair_coupling_delta(const BitBlock& x_star, int i, const ChannelModel& model);

struct ReliabilityTable {
    std::shared_ptr<const BurstDictionary> dict;
    std::vector<double> values;  // aligned with dict->bursts
};

// L = 1 fast construction: size-1 bursts directly, longer contiguous bursts by
// the telescoping pair-coupling recursion.
ReliabilityTable rel_table_first_order(const BitBlock& x_star, const RealBlock& y,
                                       const ChannelModel& model,
                                       std::shared_ptr<const BurstDictionary> dict);

// Direct windowed evaluation of every dictionary burst (any L).
ReliabilityTable rel_table_general(const BitBlock& x_star, const RealBlock& y,
                                   const ChannelModel& model,
                                   std::shared_ptr<const BurstDictionary> dict);

struct ErrorPattern {
    BitBlock bits;
    std::vector<std::vector<int>> bursts;  // the unique partition, 1-based indices
    std::size_t zeta() const { return bursts.size(); }
};

// Unique partition of an error pattern's support into bursts: internal gaps
// <= L, separation between bursts > L.
ErrorPattern partition_into_bursts(const BitBlock& e, int l);

// Reusable scratch state for computing many reliabilities against one (x*, y).
class RelWorkspace {
  public:
    RelWorkspace() = default;
    void bind(const BitBlock& x_star, const RealBlock& y, const ChannelModel& model);
    double rel(std::span<const std::uint16_t> s);

  private:
    const ChannelModel* model_ = nullptr;
    const RealBlock* y_ = nullptr;
    int n_ = 0;
    std::vector<double> w_star_;     // BPSK signs of x*
    std::vector<double> term_star_;  // (y_i - mu*_i)^2
    std::vector<std::uint8_t> flipped_;
};

}  // namespace gisi

#endif
