#pragma once

#include "cps/bls381/g1.hpp"

namespace cps::bls381 {

// Hash arbitrary bytes to the G1 subgroup: expand_message_xmd(SHA-256) to two
// field elements, Shallue-van de Woestijne map on each, point addition, then
// cofactor clearing. Deterministic in (dst, msg). If the result is the
// identity (negligible probability), a one-byte retry counter is appended to
// the message and the derivation repeats.
G1 hash_to_g1(BytesView msg, BytesView dst);

// building blocks, exposed for tests
Bytes expand_message_xmd(BytesView msg, BytesView dst, size_t len);
Fp hash_to_field_element(BytesView uniform64);  // 64 bytes -> Fp (mod p)
G1 map_to_curve_svdw(const Fp& u);              // always lands on E(Fp)
G1 clear_cofactor(const G1& p);                 // multiply by h_eff = 1 - x

}  // namespace cps::bls381
