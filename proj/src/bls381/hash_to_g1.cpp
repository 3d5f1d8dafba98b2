#include "cps/bls381/hash_to_g1.hpp"

#include <gmp.h>

#include "cps/hash.hpp"

namespace cps::bls381 {

namespace {

Fp fp_c(const char* h) {
    Fp f;
    if (!fp_from_bytes(from_hex(h), f)) throw std::logic_error("bad Fp constant");
    return f;
}

// SvdW constants for g(x) = x^3 + 4 with Z = -3 (smallest Z passing the
// find_z criteria): c1 = g(Z), c2 = -Z/2, c3 = sqrt(-g(Z) 3Z^2) with even
// sign, c4 = -4 g(Z) / (3 Z^2).
struct SvdwCtx {
    Fp Z, c1, c2, c3, c4;
};

const SvdwCtx& svdw() {
    static const SvdwCtx ctx = {
        fp_neg(fp_from_u64(3)),
        fp_neg(fp_from_u64(23)),
        fp_c("0d0088f51cbff34d258dd3db21a5d66bb23ba5c279c2895fb39869507b587b12"
             "0f55ffff58a9ffffdcff7fffffffd557"),
        fp_c("0c855b97020fc106fa9c2de78c9f5d835bbc17c0487afe401c9cd0dcff9fd40b"
             "df8033cd3095a4cd124d794808f153aa"),
        fp_c("06bde8333e50911e85400f0953d13fc61090b4c3a76e5a319f7e6f7f108cb197"
             "962c97b3cf28bda11d421c71c71c5bab"),
    };
    return ctx;
}

constexpr uint64_t kHEff = 0xd201000000010001ull;  // 1 - x

}  // namespace

Bytes expand_message_xmd(BytesView msg, BytesView dst, size_t len) {
    constexpr size_t kBlock = 64;  // SHA-256 input block size
    const size_t ell = (len + 31) / 32;
    if (ell > 255 || dst.size() > 255) throw std::invalid_argument("xmd limits");
    Bytes dst_prime(dst.begin(), dst.end());
    dst_prime.push_back(uint8_t(dst.size()));

    Sha256 h0;
    Bytes zpad(kBlock, 0);
    h0.update(zpad).update(msg);
    Bytes lib{uint8_t(len >> 8), uint8_t(len & 0xff), 0};
    h0.update(lib).update(dst_prime);
    Digest b0 = h0.finish();

    Bytes out;
    Digest prev{};
    for (size_t i = 1; i <= ell; ++i) {
        Sha256 hi;
        if (i == 1) {
            hi.update(b0);
        } else {
            Digest x;
            for (int j = 0; j < 32; ++j) x[j] = b0[j] ^ prev[j];
            hi.update(x);
        }
        hi.update_u8(uint8_t(i)).update(dst_prime);
        prev = hi.finish();
        out.insert(out.end(), prev.begin(), prev.end());
    }
    out.resize(len);
    return out;
}

Fp hash_to_field_element(BytesView uniform64) {
    // 512-bit big-endian value reduced mod p (GMP; not on the pairing path)
    static const mpz_t* kp = [] {
        static mpz_t m;
        mpz_init(m);
        mpz_import(m, 6, -1, 8, 0, 0, kP.data());
        return &m;
    }();
    mpz_t v;
    mpz_init(v);
    mpz_import(v, uniform64.size(), 1, 1, 1, 0, uniform64.data());
    mpz_mod(v, v, *kp);
    Bytes out(48, 0);
    size_t count = 0;
    mpz_export(out.data() + (48 - (mpz_sizeinbase(v, 2) + 7) / 8), &count, 1, 1, 1,
               0, v);
    mpz_clear(v);
    Fp f;
    if (!fp_from_bytes(out, f)) throw std::logic_error("reduction out of range");
    return f;
}

G1 map_to_curve_svdw(const Fp& u) {
    const auto& k = svdw();
    auto g = [](const Fp& x) {
        return fp_add(fp_mul(fp_sqr(x), x), fp_from_u64(4));
    };
    Fp tv1 = fp_mul(fp_sqr(u), k.c1);
    Fp tv2 = fp_add(Fp::one(), tv1);
    tv1 = fp_sub(Fp::one(), tv1);
    Fp tv3 = fp_mul(tv1, tv2);
    tv3 = tv3.is_zero() ? Fp::zero() : fp_inv(tv3);  // inv0
    Fp tv4 = fp_mul(fp_mul(fp_mul(u, tv1), tv3), k.c3);
    Fp x1 = fp_sub(k.c2, tv4);
    Fp x2 = fp_add(k.c2, tv4);
    Fp x3 = fp_add(fp_mul(fp_sqr(fp_mul(fp_sqr(tv2), tv3)), k.c4), k.Z);
    Fp x;
    if (fp_is_square(g(x1))) {
        x = x1;
    } else if (fp_is_square(g(x2))) {
        x = x2;
    } else {
        x = x3;
    }
    Fp y;
    if (!fp_sqrt(g(x), y)) throw std::logic_error("svdw: no curve point");
    if (fp_sgn0(u) != fp_sgn0(y)) y = fp_neg(y);
    return G1Curve::from_affine(x, y);
}

G1 clear_cofactor(const G1& p) {
    uint8_t be[8];
    for (int i = 0; i < 8; ++i) be[i] = uint8_t(kHEff >> (8 * (7 - i)));
    return g1_mul(p, BytesView(be, 8));
}

G1 hash_to_g1(BytesView msg, BytesView dst) {
    Bytes m(msg.begin(), msg.end());
    for (int attempt = 0;; ++attempt) {
        Bytes uniform = expand_message_xmd(m, dst, 128);
        Fp u0 = hash_to_field_element(BytesView(uniform).subspan(0, 64));
        Fp u1 = hash_to_field_element(BytesView(uniform).subspan(64, 64));
        G1 q = g1_add(map_to_curve_svdw(u0), map_to_curve_svdw(u1));
        G1 out = clear_cofactor(q);
        if (!g1_is_identity(out)) return out;
        // vanishing output: retry with a counter byte (never expected in Fp)
        if (attempt == 0) m.push_back(0);
        m.back() = uint8_t(attempt + 1);
        if (attempt > 255) throw std::logic_error("hash_to_g1 retry overflow");
    }
}

}  // namespace cps::bls381
