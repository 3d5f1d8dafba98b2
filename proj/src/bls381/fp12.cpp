#include "cps/bls381/fp12.hpp"

namespace cps::bls381 {

Fp12 f12_mul(const Fp12& a, const Fp12& b) {
    // Karatsuba over Fp6 with w^2 = v
    Fp6 v0 = f6_mul(a.c0, b.c0);
    Fp6 v1 = f6_mul(a.c1, b.c1);
    Fp6 s = f6_mul(f6_add(a.c0, a.c1), f6_add(b.c0, b.c1));
    return {f6_add(v0, f6_mul_v(v1)), f6_sub(f6_sub(s, v0), v1)};
}

Fp12 f12_sqr(const Fp12& a) {
    // complex squaring: (c0 + c1 w)^2 with w^2 = v
    Fp6 v0 = f6_mul(a.c0, a.c1);
    Fp6 t = f6_mul(f6_add(a.c0, a.c1), f6_add(a.c0, f6_mul_v(a.c1)));
    Fp6 c0 = f6_sub(f6_sub(t, v0), f6_mul_v(v0));
    return {c0, f6_add(v0, v0)};
}

Fp12 f12_inv(const Fp12& a) {
    // 1/(c0 + c1 w) = (c0 - c1 w) / (c0^2 - v c1^2)
    Fp6 t = f6_sub(f6_sqr(a.c0), f6_mul_v(f6_sqr(a.c1)));
    Fp6 ti = f6_inv(t);
    return {f6_mul(a.c0, ti), f6_neg(f6_mul(a.c1, ti))};
}

namespace {

// gamma[i] = xi^(i (p-1) / 6), the Frobenius twists of the w^i basis elements
const std::array<Fp2, 6>& frob_gammas() {
    static const std::array<Fp2, 6> g = [] {
        std::array<Fp2, 6> out;
        Fp2 xi{Fp::one(), Fp::one()};
        Fp2 g1 = f2_pow(xi, fp_exp_p_minus_1_div_6());
        out[0] = Fp2::one();
        for (int i = 1; i < 6; ++i) out[i] = f2_mul(out[i - 1], g1);
        return out;
    }();
    return g;
}

}  // namespace

Fp12 f12_frobenius(const Fp12& a) {
    // (sum c_i w^i)^p = sum conj(c_i) w^(ip) = sum conj(c_i) gamma_i w^i
    const auto& g = frob_gammas();
    Fp12 r;
    for (int i = 0; i < 6; ++i)
        f12_coeff(r, i) = f2_mul(f2_conj(f12_coeff(a, i)), g[i]);
    return r;
}

Fp12 f12_pow(const Fp12& base, BytesView exp_be) {
    Fp12 acc = Fp12::one();
    bool started = false;  // skip leading zero run for speed
    for (uint8_t byte : exp_be) {
        for (int bit = 7; bit >= 0; --bit) {
            if (started) acc = f12_sqr(acc);
            if ((byte >> bit) & 1) {
                acc = started ? f12_mul(acc, base) : base;
                started = true;
            }
        }
    }
    return started ? acc : Fp12::one();
}

Fp12 f12_mul_line(const Fp12& f, const Fp2& A, const Fp2& B, const Fp2& C) {
    // line = (A + B v) + (C v) w  in the Fp6-pair view
    Fp6 l0{A, B, Fp2::zero()};
    Fp6 l1{Fp2::zero(), C, Fp2::zero()};
    Fp6 v0 = f6_mul(f.c0, l0);
    Fp6 v1 = f6_mul(f.c1, l1);
    Fp6 s = f6_mul(f6_add(f.c0, f.c1), f6_add(l0, l1));
    return {f6_add(v0, f6_mul_v(v1)), f6_sub(f6_sub(s, v0), v1)};
}

}  // namespace cps::bls381
