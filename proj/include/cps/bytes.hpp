#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cps {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

// Thrown whenever a wire/file encoding cannot be parsed back into a value.
struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

std::string hex(BytesView b);
Bytes from_hex(std::string_view s);

// Big-endian scalar packing used by every fixed-width field in the codecs.
inline void put_u32(Bytes& out, uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}
inline void put_u64(Bytes& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

// Sequential reader with bounds checking; all decoders are built on it.
class ByteReader {
  public:
    explicit ByteReader(BytesView data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint32_t u32() {
        auto s = take(4);
        uint32_t v = 0;
        for (auto b : s) v = (v << 8) | b;
        return v;
    }
    uint64_t u64() {
        auto s = take(8);
        uint64_t v = 0;
        for (auto b : s) v = (v << 8) | b;
        return v;
    }
    Bytes fixed(size_t n) {
        auto s = take(n);
        return Bytes(s.begin(), s.end());
    }
    // length-prefixed blob (u32 length)
    Bytes blob(size_t max_len = 1 << 24) {
        uint32_t n = u32();
        if (n > max_len) throw CodecError("blob length exceeds limit");
        return fixed(n);
    }
    bool done() const { return off_ == data_.size(); }
    size_t remaining() const { return data_.size() - off_; }
    void expect_end() const {
        if (!done()) throw CodecError("trailing bytes after value");
    }

  private:
    BytesView take(size_t n) {
        if (n > data_.size() - off_) throw CodecError("truncated encoding");
        BytesView s = data_.subspan(off_, n);
        off_ += n;
        return s;
    }
    BytesView data_;
    size_t off_ = 0;
};

class ByteWriter {
  public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u32(uint32_t v) { put_u32(out_, v); }
    void u64(uint64_t v) { put_u64(out_, v); }
    void fixed(BytesView b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void blob(BytesView b) {
        u32(uint32_t(b.size()));
        fixed(b);
    }
    Bytes take() { return std::move(out_); }
    const Bytes& peek() const { return out_; }

  private:
    Bytes out_;
};

}  // namespace cps
