#ifndef GISI_GF2_HPP
#define GISI_GF2_HPP

#include <cstdint>
#include <vector>

namespace gisi {

// Polynomials over GF(2), one coefficient per entry, index = degree.
// Kept unpacked: these run at construction time only.
using Gf2Poly = std::vector<std::uint8_t>;

namespace gf2 {

int degree(const Gf2Poly& p);  // -1 for the zero polynomial
Gf2Poly trim(Gf2Poly p);
Gf2Poly add(const Gf2Poly& a, const Gf2Poly& b);
Gf2Poly mul(const Gf2Poly& a, const Gf2Poly& b);
// Remainder of a modulo m (deg m >= 0).
Gf2Poly mod(Gf2Poly a, const Gf2Poly& m);
Gf2Poly from_mask(std::uint64_t mask);
std::uint64_t to_mask(const Gf2Poly& p);

}  // namespace gf2

// GF(2^m) arithmetic via exp/log tables over a primitive polynomial.
class Gf2m {
  public:
    // Uses a built-in primitive polynomial table, 2 <= m <= 16.
    explicit Gf2m(int m);
    Gf2m(int m, std::uint32_t primitive_poly_mask);

    int m() const { return m_; }
    std::uint32_t size() const { return (1u << m_) - 1; }  // multiplicative order
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t pow_alpha(std::uint32_t e) const { return exp_[e % size()]; }

    // Minimal polynomial of alpha^e over GF(2); coefficients are 0/1.
    Gf2Poly minimal_polynomial(std::uint32_t e) const;

  private:
    int m_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::int32_t> log_;
};

}  // namespace gisi

#endif
