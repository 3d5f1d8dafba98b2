#include "cps/bls381/fp.hpp"

namespace cps::bls381 {

namespace {

// limb helpers on the canonical (non-Montgomery) representation

Limbs limbs_sub_small(Limbs a, uint64_t k) {
    unsigned __int128 borrow = k;
    for (int i = 0; i < 6 && borrow; ++i) {
        unsigned __int128 d = (unsigned __int128)a[i] - borrow;
        a[i] = uint64_t(d);
        borrow = (d >> 64) & 1;
    }
    return a;
}

Limbs limbs_add_small(Limbs a, uint64_t k) {
    unsigned __int128 carry = k;
    for (int i = 0; i < 6 && carry; ++i) {
        carry += a[i];
        a[i] = uint64_t(carry);
        carry >>= 64;
    }
    return a;
}

Limbs limbs_shr(Limbs a, unsigned s) {
    for (unsigned k = 0; k < s; ++k) {
        for (int i = 0; i < 5; ++i) a[i] = (a[i] >> 1) | (a[i + 1] << 63);
        a[5] >>= 1;
    }
    return a;
}

Limbs limbs_div_small(Limbs a, uint64_t d) {
    unsigned __int128 rem = 0;
    for (int i = 5; i >= 0; --i) {
        unsigned __int128 cur = (rem << 64) | a[i];
        a[i] = uint64_t(cur / d);
        rem = cur % d;
    }
    return a;
}

Bytes limbs_to_be(const Limbs& a) {
    Bytes out(48);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 8; ++j)
            out[47 - 8 * i - j] = uint8_t(a[i] >> (8 * j));
    return out;
}

const Fp kRawOne = [] {
    Fp f;
    f.v = {1, 0, 0, 0, 0, 0};
    return f;
}();

Limbs fp_canonical(const Fp& a) {
    // Montgomery-multiplying by raw 1 strips the R factor
    return fp_mul(a, kRawOne).v;
}

}  // namespace

Fp fp_from_u64(uint64_t x) {
    Fp f;
    f.v = {x, 0, 0, 0, 0, 0};
    return fp_mul(f, Fp{kR2});
}

Fp fp_pow(const Fp& base, BytesView exp_be) {
    Fp acc = Fp::one();
    for (uint8_t byte : exp_be) {
        for (int bit = 7; bit >= 0; --bit) {
            acc = fp_sqr(acc);
            if ((byte >> bit) & 1) acc = fp_mul(acc, base);
        }
    }
    return acc;
}

Fp fp_inv(const Fp& a) { return fp_pow(a, fp_exp_p_minus_2()); }

bool fp_is_square(const Fp& a) {
    if (a.is_zero()) return true;
    return fp_pow(a, fp_exp_p_minus_1_div_2()) == Fp::one();
}

bool fp_sqrt(const Fp& a, Fp& out) {
    Fp c = fp_pow(a, fp_exp_p_plus_1_div_4());
    if (fp_sqr(c) != a) return false;
    out = c;
    return true;
}

bool fp_sgn0(const Fp& a) { return fp_canonical(a)[0] & 1; }

std::array<uint8_t, 48> fp_to_bytes(const Fp& a) {
    Bytes b = limbs_to_be(fp_canonical(a));
    std::array<uint8_t, 48> out{};
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

bool fp_from_bytes(BytesView b, Fp& out) {
    if (b.size() != 48) return false;
    Limbs raw{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 8; ++j)
            raw[i] |= uint64_t(b[47 - 8 * i - j]) << (8 * j);
    if (fpimpl::geq_p(raw)) return false;
    out = fp_mul(Fp{raw}, Fp{kR2});
    return true;
}

bool fp_gt(const Fp& a, const Fp& b) {
    Limbs ca = fp_canonical(a), cb = fp_canonical(b);
    for (int i = 5; i >= 0; --i) {
        if (ca[i] != cb[i]) return ca[i] > cb[i];
    }
    return false;
}

const Bytes& fp_exp_p_minus_2() {
    static const Bytes e = limbs_to_be(limbs_sub_small(kP, 2));
    return e;
}
const Bytes& fp_exp_p_plus_1_div_4() {
    static const Bytes e = limbs_to_be(limbs_shr(limbs_add_small(kP, 1), 2));
    return e;
}
const Bytes& fp_exp_p_minus_1_div_2() {
    static const Bytes e = limbs_to_be(limbs_shr(limbs_sub_small(kP, 1), 1));
    return e;
}
const Bytes& fp_exp_p_minus_3_div_4() {
    static const Bytes e = limbs_to_be(limbs_shr(limbs_sub_small(kP, 3), 2));
    return e;
}
const Bytes& fp_exp_p_minus_1_div_6() {
    static const Bytes e = limbs_to_be(limbs_div_small(limbs_sub_small(kP, 1), 6));
    return e;
}

}  // namespace cps::bls381
