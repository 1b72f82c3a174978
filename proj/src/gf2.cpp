#include "gf2.hpp"

#include <stdexcept>

namespace gisi {
namespace gf2 {

int degree(const Gf2Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i]) return i;
    return -1;
}

Gf2Poly trim(Gf2Poly p) {
    p.resize(static_cast<std::size_t>(degree(p) + 1));
    return p;
}

Gf2Poly add(const Gf2Poly& a, const Gf2Poly& b) {
    Gf2Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] ^= a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] ^= b[i];
    return trim(std::move(r));
}

Gf2Poly mul(const Gf2Poly& a, const Gf2Poly& b) {
    int da = degree(a), db = degree(b);
    if (da < 0 || db < 0) return {};
    Gf2Poly r(static_cast<std::size_t>(da + db + 1), 0);
    for (int i = 0; i <= da; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j <= db; ++j) r[i + j] ^= (a[i] & b[j]);
    }
    return r;
}

Gf2Poly mod(Gf2Poly a, const Gf2Poly& m) {
    int dm = degree(m);
    if (dm < 0) throw std::invalid_argument("gf2::mod by zero polynomial");
    for (int i = degree(a); i >= dm; --i) {
        if (!a[i]) continue;
        for (int j = 0; j <= dm; ++j) a[i - dm + j] ^= m[j];
    }
    a.resize(static_cast<std::size_t>(dm));
    return a;
}

Gf2Poly from_mask(std::uint64_t mask) {
    Gf2Poly p;
    while (mask) {
        p.push_back(static_cast<std::uint8_t>(mask & 1));
        mask >>= 1;
    }
    return p;
}

std::uint64_t to_mask(const Gf2Poly& p) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < p.size() && i < 64; ++i)
        if (p[i]) m |= (1ull << i);
    return m;
}

}  // namespace gf2

namespace {

// Default primitive polynomials x^m + ... + 1, indexed by m.
constexpr std::uint32_t kPrimitivePoly[17] = {
    0, 0,
    0x7,      // x^2+x+1
    0xB,      // x^3+x+1
    0x13,     // x^4+x+1
    0x25,     // x^5+x^2+1
    0x43,     // x^6+x+1
    0x89,     // x^7+x^3+1
    0x11D,    // x^8+x^4+x^3+x^2+1
    0x211,    // x^9+x^4+1
    0x409,    // x^10+x^3+1
    0x805,    // x^11+x^2+1
    0x1053,   // x^12+x^6+x^4+x+1
    0x201B,   // x^13+x^4+x^3+x+1
    0x4443,   // x^14+x^10+x^6+x+1
    0x8003,   // x^15+x+1
    0x1100B,  // x^16+x^12+x^3+x+1
};

}  // namespace

Gf2m::Gf2m(int m) : Gf2m(m, m >= 2 && m <= 16 ? kPrimitivePoly[m] : 0) {}

Gf2m::Gf2m(int m, std::uint32_t prim) : m_(m) {
    if (m < 2 || m > 16 || prim == 0)
        throw std::invalid_argument("Gf2m: no primitive polynomial for this m");
    const std::uint32_t order = (1u << m) - 1;
    exp_.assign(order, 0);
    log_.assign(1u << m, -1);
    std::uint32_t v = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        exp_[i] = v;
        log_[v] = static_cast<std::int32_t>(i);
        v <<= 1;
        if (v & (1u << m)) v ^= prim;
    }
    if (log_[1] != 0 || exp_[0] != 1)
        throw std::invalid_argument("Gf2m: polynomial is not primitive");
    // A primitive polynomial visits every nonzero element exactly once.
    for (std::uint32_t x = 1; x <= order; ++x)
        if (log_[x] < 0) throw std::invalid_argument("Gf2m: polynomial is not primitive");
}

std::uint32_t Gf2m::mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % size()];
}

Gf2Poly Gf2m::minimal_polynomial(std::uint32_t e) const {
    const std::uint32_t order = size();
    e %= order;
    // Conjugacy class {e, 2e, 4e, ...} mod (2^m - 1).
    std::vector<std::uint32_t> cls;
    std::uint32_t c = e;
    do {
        cls.push_back(c);
        c = static_cast<std::uint32_t>((2ull * c) % order);
    } while (c != e);

    // Product of (x - alpha^c) with coefficients in GF(2^m).
    std::vector<std::uint32_t> poly{1};
    for (std::uint32_t ce : cls) {
        const std::uint32_t root = pow_alpha(ce);
        std::vector<std::uint32_t> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] ^= poly[i];
            next[i] ^= mul(poly[i], root);
        }
        poly = std::move(next);
    }

    Gf2Poly out(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] > 1) throw std::logic_error("minimal polynomial has non-binary coefficient");
        out[i] = static_cast<std::uint8_t>(poly[i]);
    }
    return out;
}

}  // namespace gisi
