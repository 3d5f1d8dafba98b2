#include "cps/biometric.hpp"

#include <bit>
#include <stdexcept>

namespace cps::biometric {

IrisTemplate enroll(uint64_t seed) {
    DeterministicRandom rng(seed);
    IrisTemplate t;
    t.code = rng.bytes(kCodeBytes);
    t.mask = Bytes(kCodeBytes, 0xff);
    return t;
}

IrisFeature sample(const IrisTemplate& t, double noise_rate, RandomSource& rng) {
    if (!well_formed(t)) throw std::invalid_argument("malformed iris template");
    if (noise_rate < 0.0 || noise_rate > 1.0)
        throw std::invalid_argument("noise_rate outside [0, 1]");
    IrisFeature f;
    f.code = t.code;
    f.mask = t.mask;
    // A noiseless capture is an exact copy and consumes no randomness, so
    // scripted-randomness runs stay byte-for-byte predictable.
    if (noise_rate == 0.0) return f;
    for (size_t bit = 0; bit < kCodeBits; ++bit) {
        if (rng.uniform() < noise_rate)
            f.code[bit / 8] ^= uint8_t(0x80u >> (bit % 8));
    }
    return f;
}

double distance(BytesView code_a, BytesView mask_a, BytesView code_b,
                BytesView mask_b) {
    if (code_a.size() != code_b.size() || mask_a.size() != mask_b.size() ||
        code_a.size() != mask_a.size())
        throw std::invalid_argument("iris code length mismatch");
    size_t diff = 0, valid = 0;
    for (size_t i = 0; i < code_a.size(); ++i) {
        uint8_t m = mask_a[i] & mask_b[i];
        diff += size_t(std::popcount(uint8_t((code_a[i] ^ code_b[i]) & m)));
        valid += size_t(std::popcount(m));
    }
    if (valid == 0) throw std::invalid_argument("empty mask overlap");
    return double(diff) / double(valid);
}

double distance(const IrisFeature& f, const IrisTemplate& t) {
    return distance(f.code, f.mask, t.code, t.mask);
}

bool match(const IrisFeature& f, const IrisTemplate& t) {
    return distance(f, t) <= kMatchThreshold;
}

bool well_formed(BytesView code, BytesView mask) {
    if (code.size() != kCodeBytes || mask.size() != kCodeBytes) return false;
    size_t set = 0;
    for (uint8_t m : mask) set += size_t(std::popcount(m));
    return set >= kCodeBits / 2;
}

Bytes feature_bytes(const IrisFeature& f) {
    if (!well_formed(f)) throw std::invalid_argument("malformed iris feature");
    Bytes out;
    out.reserve(kFeatureBytes);
    out.insert(out.end(), f.code.begin(), f.code.end());
    out.insert(out.end(), f.mask.begin(), f.mask.end());
    return out;
}

IrisFeature feature_from_bytes(BytesView b) {
    if (b.size() != kFeatureBytes)
        throw CodecError("iris feature encoding has wrong length");
    IrisFeature f;
    f.code.assign(b.begin(), b.begin() + kCodeBytes);
    f.mask.assign(b.begin() + kCodeBytes, b.end());
    if (!well_formed(f)) throw CodecError("iris feature mask underfilled");
    return f;
}

}  // namespace cps::biometric
