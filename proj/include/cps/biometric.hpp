#pragma once

#include "cps/bytes.hpp"
#include "cps/rng.hpp"

namespace cps::biometric {

// Classical iris-code geometry: 2048 code bits plus a 2048-bit validity mask.
inline constexpr size_t kCodeBits = 2048;
inline constexpr size_t kCodeBytes = kCodeBits / 8;
inline constexpr size_t kFeatureBytes = 2 * kCodeBytes;  // code || mask

// Normalized masked Hamming distance at or below this value counts as the
// same eye.
inline constexpr double kMatchThreshold = 0.32;

// Reference template captured at enrollment. The mask marks which code bits
// are valid (eyelid/reflection occlusion in a real capture); at least half
// the bits must be set for a usable template.
struct IrisTemplate {
    Bytes code;  // kCodeBytes
    Bytes mask;  // kCodeBytes
};

// One capture presented at authentication time; same layout as the template.
struct IrisFeature {
    Bytes code;
    Bytes mask;
};

// Deterministic synthetic enrollment: the code is a pseudorandom function of
// the seed, the mask is fully set.
IrisTemplate enroll(uint64_t seed);

// Fresh capture from a template: every code bit flips independently with
// probability noise_rate (default 0.05 models sensor noise); the mask is
// carried over. noise_rate outside [0, 1] is an error.
IrisFeature sample(const IrisTemplate& t, double noise_rate, RandomSource& rng);

// Normalized Hamming distance over the intersection of both masks.
// Throws std::invalid_argument on length mismatch or empty mask overlap.
double distance(BytesView code_a, BytesView mask_a, BytesView code_b,
                BytesView mask_b);
double distance(const IrisFeature& f, const IrisTemplate& t);

// distance(f, t) <= kMatchThreshold
bool match(const IrisFeature& f, const IrisTemplate& t);

// code and mask sizes correct, mask at least half set
bool well_formed(BytesView code, BytesView mask);
inline bool well_formed(const IrisTemplate& t) { return well_formed(t.code, t.mask); }
inline bool well_formed(const IrisFeature& f) { return well_formed(f.code, f.mask); }

// Fixed-width wire form (code || mask, kFeatureBytes total); the iris part of
// the rewritten message M' = feature || challenge.
Bytes feature_bytes(const IrisFeature& f);
// Parses and validates; throws CodecError on bad length or underfilled mask.
IrisFeature feature_from_bytes(BytesView b);

}  // namespace cps::biometric
