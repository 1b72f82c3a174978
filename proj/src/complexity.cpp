#include "complexity.hpp"

#include <cmath>
#include <stdexcept>

namespace gisi {

namespace {
constexpr std::uint32_t kBase = 1000000000u;
}

BigUint::BigUint(std::uint64_t v) {
    while (v) {
        limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
        v /= kBase;
    }
}

BigUint& BigUint::operator+=(const BigUint& o) {
    if (o.limbs_.size() > limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    std::uint32_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t s = static_cast<std::uint64_t>(limbs_[i]) + carry +
                          (i < o.limbs_.size() ? o.limbs_[i] : 0u);
        limbs_[i] = static_cast<std::uint32_t>(s % kBase);
        carry = static_cast<std::uint32_t>(s / kBase);
    }
    if (carry) limbs_.push_back(carry);
    return *this;
}

std::string BigUint::to_string() const {
    if (limbs_.empty()) return "0";
    std::string s = std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
        std::string part = std::to_string(limbs_[i]);
        s += std::string(9 - part.size(), '0') + part;
    }
    return s;
}

double BigUint::to_double() const {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return v;
}

bool BigUint::fits_u64() const {
    if (limbs_.size() > 3) return false;
    if (limbs_.size() < 3) return true;
    // max u64 = 18'446744073'709551615
    return limbs_[2] < 18u || (limbs_[2] == 18u && (limbs_[1] < 446744073u ||
           (limbs_[1] == 446744073u && limbs_[0] <= 709551615u)));
}

std::uint64_t BigUint::to_u64() const {
    if (!fits_u64()) throw std::overflow_error("BigUint::to_u64: value exceeds 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return v;
}

BigUint complexity_tot(int n, int l) {
    if (n < 1 || l < 1) throw std::invalid_argument("complexity_tot: need N >= 1 and L >= 1");
    std::vector<BigUint> f(static_cast<std::size_t>(n));
    BigUint tot;
    for (int i = 1; i <= n; ++i) {
        BigUint fi(1);
        for (int j = std::max(1, i - l); j <= i - 1; ++j) fi += f[static_cast<std::size_t>(j - 1)];
        f[static_cast<std::size_t>(i - 1)] = fi;
        tot += fi;
    }
    return tot;
}

double tot_closed_form_l2(int n) {
    if (n < 1) throw std::invalid_argument("tot_closed_form_l2: need N >= 1");
    const double s5 = std::sqrt(5.0);
    const double phi = (1.0 + s5) / 2.0;
    const double psi = (1.0 - s5) / 2.0;
    return ((2.0 * phi + 1.0) * std::pow(phi, n + 1) - (2.0 * psi + 1.0) * std::pow(psi, n + 1)) / s5 -
           n - 3.0;
}

}  // namespace gisi
