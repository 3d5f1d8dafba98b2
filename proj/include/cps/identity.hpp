#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cps/biometric.hpp"
#include "cps/scheme.hpp"

namespace cps::identity {

// Opaque registry-issued token tying a public record to a private identity.
using SerialNumber = std::array<uint8_t, 16>;

inline Bytes sn_bytes(const SerialNumber& sn) { return Bytes(sn.begin(), sn.end()); }

// Two-part identity: rid names the real-world person (never published),
// mid names them inside the virtual world (registry-assigned, unique).
struct UserId {
    Bytes rid;
    Bytes mid;
};

// Public identity record: serial number, dual-component key, enrolled iris
// template, free-form info, and the identity provider's endorsement (an
// original-signature wire blob over the first four fields).
struct MIT {
    SerialNumber sn{};
    scheme::PublicKey pk;
    biometric::IrisTemplate T;
    Bytes info;
    Bytes idp_sig;
};

// Virtual identity of an avatar: the description blob M (face/speech model
// descriptors) plus the check parameter R binding M to the avatar's h.
struct VID {
    Bytes M;
    bilinear::GroupElement R;
};

// Physical identity: M' = iris feature || challenge, with its check
// parameter R' binding the capture to the same h.
struct PID {
    Bytes M_prime;
    bilinear::GroupElement R_prime;
};

enum class DriverType : uint8_t { kHuman = 0, kAIProxy = 1 };

// Avatar record. sn_u names the original manipulator, sn_p the current
// driver; vid/pid are absent until the corresponding protocol phase fills
// them (an unregistered record simply lacks them).
struct Avatar {
    SerialNumber sn_u{};
    Bytes aid;
    SerialNumber sn_p{};
    bilinear::GroupElement sigma;
    bilinear::GroupElement h;
    std::optional<VID> vid;
    std::optional<PID> pid;
};

// Human iff the original manipulator still drives (sn_u == sn_p).
DriverType driver_type(const Avatar& a);

// Canonical codecs: field-declaration order, u32 length prefixes on
// variable-width fields, fixed widths elsewhere. Decoders validate group
// membership, field lengths, and mask coverage, and reject trailing bytes.
Bytes encode_user_id(const UserId& u);
UserId decode_user_id(BytesView b);

// Portion of the MIT covered by the endorsement: (sn, pk, T, info).
Bytes mit_signing_body(const bilinear::Params& p, const MIT& m);
Bytes encode_mit(const bilinear::Params& p, const MIT& m);
MIT decode_mit(const bilinear::Params& p, BytesView b);

// Checks the endorsement wire blob against the issuer's key (self-targeted
// original signature over mit_signing_body). False on any parse failure.
bool verify_endorsement(const bilinear::Params& p,
                        const scheme::PublicKey& idp_pk, const MIT& m);

Bytes encode_vid(const bilinear::Params& p, const VID& v);
VID decode_vid(const bilinear::Params& p, BytesView b);

Bytes encode_pid(const bilinear::Params& p, const PID& v);
PID decode_pid(const bilinear::Params& p, BytesView b);

Bytes encode_avatar(const bilinear::Params& p, const Avatar& a);
Avatar decode_avatar(const bilinear::Params& p, BytesView b);

// Avatar description blob M: a canonical map of named binary fields
// ("face", "speech", ...), sorted by name, hashed as raw bytes downstream.
using Description = std::vector<std::pair<std::string, Bytes>>;
Bytes encode_description(const Description& fields);
Description decode_description(BytesView b);

// Human-oriented JSON rendering for CLI output. Never fed back into any
// hash or signature; the binary codecs above are the only canonical forms.
std::string to_debug_json(const UserId& u);
std::string to_debug_json(const bilinear::Params& p, const MIT& m);
std::string to_debug_json(const bilinear::Params& p, const Avatar& a);

}  // namespace cps::identity
