#include "cps/hash.hpp"

#include <openssl/evp.h>

namespace cps {

Digest sha256(BytesView data) {
    Digest d;
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), d.data(), &len, EVP_sha256(), nullptr);
    return d;
}

Sha256::Sha256() = default;

Sha256& Sha256::update(BytesView data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
}

Digest Sha256::finish() {
    Digest d = sha256(buf_);
    buf_.clear();
    return d;
}

}  // namespace cps
