#pragma once

#include <deque>
#include <span>

#include "cps/bytes.hpp"

namespace cps {

// All randomness flows through this interface so tests can pin every draw.
class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    uint64_t u64() {
        uint8_t b[8];
        fill(b);
        uint64_t v = 0;
        for (auto c : b) v = (v << 8) | c;
        return v;
    }
    Bytes bytes(size_t n) {
        Bytes b(n);
        fill(b);
        return b;
    }
    // uniform double in [0,1) with 53 bits of precision
    double uniform() { return double(u64() >> 11) * 0x1.0p-53; }
};

// OS entropy (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
  public:
    void fill(std::span<uint8_t> out) override;
};

// SHA-256 counter stream from a seed; reproducible across runs/platforms.
class DeterministicRandom final : public RandomSource {
  public:
    explicit DeterministicRandom(uint64_t seed);
    explicit DeterministicRandom(BytesView seed);
    void fill(std::span<uint8_t> out) override;

  private:
    Bytes seed_;
    uint64_t counter_ = 0;
    Bytes pool_;
    size_t pos_ = 0;
};

// Test-only source that hands out pre-arranged byte strings, one per fill().
// Each queued entry must match the requested size exactly; a mismatch means
// the test script and the code under test disagree about the draw sequence.
class ScriptedRandom final : public RandomSource {
  public:
    void push(Bytes draw) { queue_.push_back(std::move(draw)); }
    // convenience: big-endian value padded to `width` bytes
    void push_uint(uint64_t value, size_t width);
    void fill(std::span<uint8_t> out) override;
    bool exhausted() const { return queue_.empty(); }

  private:
    std::deque<Bytes> queue_;
};

}  // namespace cps
