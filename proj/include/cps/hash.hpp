#pragma once

#include <array>

#include "cps/bytes.hpp"

namespace cps {

using Digest = std::array<uint8_t, 32>;

Digest sha256(BytesView data);

// Incremental SHA-256 for transcript/chain digests.
class Sha256 {
  public:
    Sha256();
    Sha256& update(BytesView data);
    Sha256& update_u8(uint8_t v) { return update(BytesView(&v, 1)); }
    Digest finish();

  private:
    Bytes buf_;  // accumulated; hashing happens in finish() via one-shot EVP
};

inline Bytes to_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

}  // namespace cps
