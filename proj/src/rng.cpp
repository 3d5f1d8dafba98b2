#include "cps/rng.hpp"

#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

#include "cps/hash.hpp"

namespace cps {

void SystemRandom::fill(std::span<uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), int(out.size())) != 1)
        throw std::runtime_error("system RNG failure");
}

DeterministicRandom::DeterministicRandom(uint64_t seed) {
    seed_.resize(8);
    for (int i = 0; i < 8; ++i) seed_[i] = uint8_t(seed >> (56 - 8 * i));
}

DeterministicRandom::DeterministicRandom(BytesView seed) : seed_(seed.begin(), seed.end()) {}

void DeterministicRandom::fill(std::span<uint8_t> out) {
    size_t done = 0;
    while (done < out.size()) {
        if (pos_ == pool_.size()) {
            Bytes block = seed_;
            put_u64(block, counter_++);
            Digest d = sha256(block);
            pool_.assign(d.begin(), d.end());
            pos_ = 0;
        }
        size_t n = std::min(out.size() - done, pool_.size() - pos_);
        std::memcpy(out.data() + done, pool_.data() + pos_, n);
        done += n;
        pos_ += n;
    }
}

void ScriptedRandom::push_uint(uint64_t value, size_t width) {
    Bytes b(width, 0);
    for (size_t i = 0; i < 8 && i < width; ++i)
        b[width - 1 - i] = uint8_t(value >> (8 * i));
    push(std::move(b));
}

void ScriptedRandom::fill(std::span<uint8_t> out) {
    if (queue_.empty()) throw std::runtime_error("scripted RNG exhausted");
    Bytes draw = std::move(queue_.front());
    queue_.pop_front();
    if (draw.size() != out.size())
        throw std::runtime_error("scripted RNG size mismatch: have " +
                                 std::to_string(draw.size()) + " want " +
                                 std::to_string(out.size()));
    std::memcpy(out.data(), draw.data(), draw.size());
}

}  // namespace cps
