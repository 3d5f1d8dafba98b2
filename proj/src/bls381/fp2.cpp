#include "cps/bls381/fp2.hpp"

namespace cps::bls381 {

Fp2 f2_pow(const Fp2& base, BytesView exp_be) {
    Fp2 acc = Fp2::one();
    for (uint8_t byte : exp_be) {
        for (int bit = 7; bit >= 0; --bit) {
            acc = f2_sqr(acc);
            if ((byte >> bit) & 1) acc = f2_mul(acc, base);
        }
    }
    return acc;
}

bool f2_is_square(const Fp2& a) {
    if (a.is_zero()) return true;
    // a is a square in Fp2 iff its norm is a square in Fp
    Fp norm = fp_add(fp_sqr(a.c0), fp_sqr(a.c1));
    return fp_is_square(norm);
}

bool f2_sqrt(const Fp2& a, Fp2& out) {
    if (a.is_zero()) {
        out = Fp2::zero();
        return true;
    }
    // Adj / Rodriguez-Henriquez, specialization for p == 3 (mod 4):
    //   a1 = a^((p-3)/4); x0 = a1*a; alpha = a1*x0 = a^((p-1)/2)
    //   alpha == -1  -> sqrt = u * x0   (u^2 = -1)
    //   otherwise    -> sqrt = (1+alpha)^((p-1)/2) * x0
    Fp2 a1 = f2_pow(a, fp_exp_p_minus_3_div_4());
    Fp2 x0 = f2_mul(a1, a);
    Fp2 alpha = f2_mul(a1, x0);
    Fp2 cand;
    Fp2 minus_one{fp_neg(Fp::one()), Fp::zero()};
    if (alpha == minus_one) {
        cand = Fp2{fp_neg(x0.c1), x0.c0};  // u * x0
    } else {
        Fp2 b = f2_pow(f2_add(Fp2::one(), alpha), fp_exp_p_minus_1_div_2());
        cand = f2_mul(b, x0);
    }
    if (f2_sqr(cand) != a) return false;
    out = cand;
    return true;
}

bool f2_sgn0(const Fp2& a) {
    // sign of the "first" nonzero coordinate, RFC 9380 style
    bool s0 = fp_sgn0(a.c0);
    bool z0 = a.c0.is_zero();
    bool s1 = fp_sgn0(a.c1);
    return s0 || (z0 && s1);
}

bool f2_gt(const Fp2& a, const Fp2& b) {
    if (a.c1 != b.c1) return fp_gt(a.c1, b.c1);
    return fp_gt(a.c0, b.c0);
}

}  // namespace cps::bls381
