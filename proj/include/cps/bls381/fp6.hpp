#pragma once

#include "cps/bls381/fp2.hpp"

namespace cps::bls381 {

// Fp6 = Fp2[v]/(v^3 - xi), xi = 1 + u. Elements c0 + c1 v + c2 v^2.
struct Fp6 {
    Fp2 c0, c1, c2;

    static Fp6 zero() { return {}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }
    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6&) const = default;
};

inline Fp6 f6_add(const Fp6& a, const Fp6& b) {
    return {f2_add(a.c0, b.c0), f2_add(a.c1, b.c1), f2_add(a.c2, b.c2)};
}
inline Fp6 f6_sub(const Fp6& a, const Fp6& b) {
    return {f2_sub(a.c0, b.c0), f2_sub(a.c1, b.c1), f2_sub(a.c2, b.c2)};
}
inline Fp6 f6_neg(const Fp6& a) { return {f2_neg(a.c0), f2_neg(a.c1), f2_neg(a.c2)}; }

Fp6 f6_mul(const Fp6& a, const Fp6& b);
Fp6 f6_sqr(const Fp6& a);
Fp6 f6_inv(const Fp6& a);
// multiply by v: (c0, c1, c2) -> (xi*c2, c0, c1)
inline Fp6 f6_mul_v(const Fp6& a) { return {f2_mul_xi(a.c2), a.c0, a.c1}; }
inline Fp6 f6_mul_fp2(const Fp6& a, const Fp2& k) {
    return {f2_mul(a.c0, k), f2_mul(a.c1, k), f2_mul(a.c2, k)};
}

}  // namespace cps::bls381
