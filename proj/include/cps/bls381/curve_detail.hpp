#pragma once

#include "cps/bytes.hpp"

namespace cps::bls381::ec {

// Jacobian-coordinate short-Weierstrass core for a = 0 curves, shared by G1
// and G2 through an Ops traits struct (field ops + curve constant). Both
// BLS12-381 source groups live on odd-order curves, so no point has Y = 0
// and the classic doubling formula has no exceptional case.
template <class Ops>
struct Curve {
    using F = typename Ops::F;

    struct Pt {
        F X, Y, Z;  // infinity <=> Z == 0
    };

    static Pt infinity() { return {Ops::one(), Ops::one(), Ops::zero()}; }
    static bool is_infinity(const Pt& p) { return p.Z.is_zero(); }
    static Pt from_affine(const F& x, const F& y) { return {x, y, Ops::one()}; }

    static Pt neg(const Pt& p) { return {p.X, Ops::neg(p.Y), p.Z}; }

    // dbl-2009-l
    static Pt dbl(const Pt& p) {
        if (is_infinity(p)) return p;
        F A = Ops::sqr(p.X);
        F B = Ops::sqr(p.Y);
        F C = Ops::sqr(B);
        F D = Ops::sqr(Ops::add(p.X, B));
        D = Ops::dbl(Ops::sub(Ops::sub(D, A), C));
        F E = Ops::add(Ops::add(A, A), A);
        F Fv = Ops::sqr(E);
        F X3 = Ops::sub(Fv, Ops::dbl(D));
        F C8 = Ops::dbl(Ops::dbl(Ops::dbl(C)));
        F Y3 = Ops::sub(Ops::mul(E, Ops::sub(D, X3)), C8);
        F Z3 = Ops::dbl(Ops::mul(p.Y, p.Z));
        return {X3, Y3, Z3};
    }

    // add-2007-bl
    static Pt add(const Pt& a, const Pt& b) {
        if (is_infinity(a)) return b;
        if (is_infinity(b)) return a;
        F Z1Z1 = Ops::sqr(a.Z);
        F Z2Z2 = Ops::sqr(b.Z);
        F U1 = Ops::mul(a.X, Z2Z2);
        F U2 = Ops::mul(b.X, Z1Z1);
        F S1 = Ops::mul(Ops::mul(a.Y, b.Z), Z2Z2);
        F S2 = Ops::mul(Ops::mul(b.Y, a.Z), Z1Z1);
        F H = Ops::sub(U2, U1);
        F rr = Ops::dbl(Ops::sub(S2, S1));
        if (H.is_zero()) {
            if (rr.is_zero()) return dbl(a);
            return infinity();
        }
        F I = Ops::sqr(Ops::dbl(H));
        F J = Ops::mul(H, I);
        F V = Ops::mul(U1, I);
        F X3 = Ops::sub(Ops::sub(Ops::sqr(rr), J), Ops::dbl(V));
        F Y3 = Ops::sub(Ops::mul(rr, Ops::sub(V, X3)),
                        Ops::dbl(Ops::mul(S1, J)));
        F Z3 = Ops::sqr(Ops::add(a.Z, b.Z));
        Z3 = Ops::mul(Ops::sub(Ops::sub(Z3, Z1Z1), Z2Z2), H);
        return {X3, Y3, Z3};
    }

    // left-to-right double-and-add; exponent is big-endian bytes
    static Pt mul(const Pt& p, BytesView k_be) {
        Pt acc = infinity();
        bool started = false;
        for (uint8_t byte : k_be) {
            for (int bit = 7; bit >= 0; --bit) {
                if (started) acc = dbl(acc);
                if ((byte >> bit) & 1) {
                    acc = started ? add(acc, p) : p;
                    started = true;
                }
            }
        }
        return started ? acc : infinity();
    }

    static bool eq(const Pt& a, const Pt& b) {
        bool ia = is_infinity(a), ib = is_infinity(b);
        if (ia || ib) return ia == ib;
        F Z1Z1 = Ops::sqr(a.Z);
        F Z2Z2 = Ops::sqr(b.Z);
        if (!(Ops::mul(a.X, Z2Z2) == Ops::mul(b.X, Z1Z1))) return false;
        return Ops::mul(Ops::mul(a.Y, b.Z), Z2Z2) ==
               Ops::mul(Ops::mul(b.Y, a.Z), Z1Z1);
    }

    static bool on_curve(const Pt& p) {
        if (is_infinity(p)) return true;
        // Y^2 = X^3 + b Z^6
        F z2 = Ops::sqr(p.Z);
        F z6 = Ops::mul(Ops::sqr(z2), z2);
        F rhs = Ops::add(Ops::mul(Ops::sqr(p.X), p.X),
                         Ops::mul(Ops::b_coeff(), z6));
        return Ops::sqr(p.Y) == rhs;
    }

    static void to_affine(const Pt& p, F& x, F& y) {
        F zi = Ops::inv(p.Z);
        F zi2 = Ops::sqr(zi);
        x = Ops::mul(p.X, zi2);
        y = Ops::mul(p.Y, Ops::mul(zi2, zi));
    }
};

}  // namespace cps::bls381::ec
