#pragma once

#include <vector>

#include "cps/bls381/fp12.hpp"
#include "cps/bls381/g1.hpp"
#include "cps/bls381/g2.hpp"

namespace cps::bls381 {

// Optimal ate pairing e: G1 x G2 -> GT (order-r subgroup of Fp12*).
// pair(identity, .) = pair(., identity) = 1.
Fp12 pairing(const G1& p, const G2& q);

// Product of pairings with a shared Miller loop and one final exponentiation.
// Identity entries contribute the neutral factor.
Fp12 pairing_product(const std::vector<std::pair<G1, G2>>& pairs);

// f^((p^12-1)/r) up to a fixed cube (a valid final exponentiation variant).
Fp12 final_exponentiation(const Fp12& f);

// Miller loop only (no final exponentiation); exposed for the test oracle.
Fp12 miller_loop(const G1& p, const G2& q);

// GT helpers. gt_pow exponent is big-endian bytes.
Fp12 gt_mul(const Fp12& a, const Fp12& b);
Fp12 gt_inv(const Fp12& a);  // generic Fp12 inversion (no subgroup assumption)
Fp12 gt_pow(const Fp12& a, BytesView exp_be);
bool gt_in_subgroup(const Fp12& a);  // z^r == 1 and z != 0

// Squaring valid only on the cyclotomic subgroup (norm-1 elements); used by
// the final exponentiation and checked against generic squaring in tests.
Fp12 cyclotomic_sqr(const Fp12& a);

}  // namespace cps::bls381
