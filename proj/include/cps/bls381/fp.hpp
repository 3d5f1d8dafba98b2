#pragma once

#include <array>
#include <cstdint>

#include "cps/bytes.hpp"

namespace cps::bls381 {

// Base field of BLS12-381: p is the 381-bit prime
// 0x1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624
//   1eabfffeb153ffffb9feffffffffaaab
// Elements are kept in Montgomery form (R = 2^384) as six 64-bit limbs,
// little-endian limb order. p == 3 (mod 4), which gives the cheap sqrt rule.

using Limbs = std::array<uint64_t, 6>;

inline constexpr Limbs kP = {0xb9feffffffffaaabull, 0x1eabfffeb153ffffull,
                             0x6730d2a0f6b0f624ull, 0x64774b84f38512bfull,
                             0x4b1ba7b6434bacd7ull, 0x1a0111ea397fe69aull};
inline constexpr uint64_t kPInv = 0x89f3fffcfffcfffdull;  // -p^-1 mod 2^64
inline constexpr Limbs kR = {0x760900000002fffdull, 0xebf4000bc40c0002ull,
                             0x5f48985753c758baull, 0x77ce585370525745ull,
                             0x5c071a97a256ec6dull, 0x15f65ec3fa80e493ull};
inline constexpr Limbs kR2 = {0xf4df1f341c341746ull, 0x0a76e6a609d104f1ull,
                              0x8de5476c4c95b6d5ull, 0x67eb88a9939d83c0ull,
                              0x9a793e85b519952dull, 0x11988fe592cae3aaull};

struct Fp {
    Limbs v{};  // Montgomery residue

    static Fp zero() { return Fp{}; }
    static Fp one() { return Fp{kR}; }

    bool is_zero() const {
        uint64_t acc = 0;
        for (auto l : v) acc |= l;
        return acc == 0;
    }
    bool operator==(const Fp& o) const { return v == o.v; }
    bool operator!=(const Fp& o) const { return v != o.v; }
};

namespace fpimpl {

inline bool geq_p(const Limbs& a) {
    for (int i = 5; i >= 0; --i) {
        if (a[i] > kP[i]) return true;
        if (a[i] < kP[i]) return false;
    }
    return true;  // equal
}

inline void sub_p(Limbs& a) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 6; ++i) {
        unsigned __int128 d = (unsigned __int128)a[i] - kP[i] - borrow;
        a[i] = uint64_t(d);
        borrow = (d >> 64) & 1;
    }
}

}  // namespace fpimpl

inline Fp fp_add(const Fp& a, const Fp& b) {
    Fp r;
    unsigned __int128 carry = 0;
    for (int i = 0; i < 6; ++i) {
        carry += a.v[i];
        carry += b.v[i];
        r.v[i] = uint64_t(carry);
        carry >>= 64;
    }
    // p < 2^381 so the limb sum cannot carry out of 384 bits
    if (fpimpl::geq_p(r.v)) fpimpl::sub_p(r.v);
    return r;
}

inline Fp fp_sub(const Fp& a, const Fp& b) {
    Fp r;
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 6; ++i) {
        unsigned __int128 d = (unsigned __int128)a.v[i] - b.v[i] - borrow;
        r.v[i] = uint64_t(d);
        borrow = (d >> 64) & 1;
    }
    if (borrow) {
        unsigned __int128 carry = 0;
        for (int i = 0; i < 6; ++i) {
            carry += r.v[i];
            carry += kP[i];
            r.v[i] = uint64_t(carry);
            carry >>= 64;
        }
    }
    return r;
}

inline Fp fp_neg(const Fp& a) {
    if (a.is_zero()) return a;
    Fp r;
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 6; ++i) {
        unsigned __int128 d = (unsigned __int128)kP[i] - a.v[i] - borrow;
        r.v[i] = uint64_t(d);
        borrow = (d >> 64) & 1;
    }
    return r;
}

inline Fp fp_dbl(const Fp& a) { return fp_add(a, a); }

// Montgomery multiplication, CIOS with 128-bit accumulators. The top limb of
// p is below 2^61, so the running value stays under 2p and a single
// conditional subtraction canonicalizes.
inline Fp fp_mul(const Fp& a, const Fp& b) {
    uint64_t t[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 6; ++i) {
        unsigned __int128 carry = 0;
        uint64_t bi = b.v[i];
        for (int j = 0; j < 6; ++j) {
            carry += t[j];
            carry += (unsigned __int128)a.v[j] * bi;
            t[j] = uint64_t(carry);
            carry >>= 64;
        }
        carry += t[6];
        t[6] = uint64_t(carry);  // carry out of this cannot exceed 64 bits

        uint64_t m = t[0] * kPInv;
        carry = (unsigned __int128)t[0] + (unsigned __int128)m * kP[0];
        carry >>= 64;
        for (int j = 1; j < 6; ++j) {
            carry += t[j];
            carry += (unsigned __int128)m * kP[j];
            t[j - 1] = uint64_t(carry);
            carry >>= 64;
        }
        carry += t[6];
        t[5] = uint64_t(carry);
        t[6] = uint64_t(carry >> 64);
    }
    Fp r;
    for (int i = 0; i < 6; ++i) r.v[i] = t[i];
    if (t[6] || fpimpl::geq_p(r.v)) fpimpl::sub_p(r.v);
    return r;
}

inline Fp fp_sqr(const Fp& a) { return fp_mul(a, a); }

Fp fp_from_u64(uint64_t x);
// exponent is big-endian bytes; not constant-time (explicit non-goal)
Fp fp_pow(const Fp& base, BytesView exp_be);
Fp fp_inv(const Fp& a);           // a^(p-2); inv(0) = 0
bool fp_is_square(const Fp& a);   // Legendre symbol != -1
bool fp_sqrt(const Fp& a, Fp& out);  // a^((p+1)/4) with verification
bool fp_sgn0(const Fp& a);        // parity of the canonical representative

std::array<uint8_t, 48> fp_to_bytes(const Fp& a);
bool fp_from_bytes(BytesView b48, Fp& out);  // false if >= p or wrong size

// canonical-value comparison: returns true if a > b as integers (used for
// the compressed-point sort bit)
bool fp_gt(const Fp& a, const Fp& b);

// big-endian byte strings of useful exponents, computed once from p
const Bytes& fp_exp_p_minus_2();
const Bytes& fp_exp_p_plus_1_div_4();
const Bytes& fp_exp_p_minus_1_div_2();
const Bytes& fp_exp_p_minus_3_div_4();
const Bytes& fp_exp_p_minus_1_div_6();

}  // namespace cps::bls381
