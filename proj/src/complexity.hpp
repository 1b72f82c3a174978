#ifndef GISI_COMPLEXITY_HPP
#define GISI_COMPLEXITY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gisi {

// Unsigned arbitrary-precision integer, addition only. The reliability-count
// recursion grows exponentially in N, past 64 bits around N = 90 for L = 2.
class BigUint {
  public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v);

    BigUint& operator+=(const BigUint& o);
    bool operator==(const BigUint& o) const { return limbs_ == o.limbs_; }

    std::string to_string() const;   // decimal
    double to_double() const;
    bool fits_u64() const;
    std::uint64_t to_u64() const;    // throws if it does not fit

  private:
    std::vector<std::uint32_t> limbs_;  // base 1e9, little-endian, trimmed
};

// Total number of sequence-reliability evaluations for the unrestricted burst
// set: F(i) = 1 + sum_{j=max(1,i-L)}^{i-1} F(j), tot = sum_i F(i).
BigUint complexity_tot(int n, int l);

// Closed form of the L = 2 total via the golden-ratio roots.
double tot_closed_form_l2(int n);

}  // namespace gisi

#endif
