#include "cps/bilinear.hpp"

#include <atomic>
#include <stdexcept>

#include "cps/bls381/hash_to_g1.hpp"
#include "cps/bls381/pairing.hpp"
#include "cps/hash.hpp"

namespace cps {
namespace detail {
OpCounters*& active_counters() {
    static thread_local OpCounters* active = nullptr;
    return active;
}
}  // namespace detail
}  // namespace cps

namespace cps::bilinear {

namespace {

constexpr char kHashDomainTag[] = "CPS-H-v1";

// prime order of the production curve's pairing subgroup
const mpz_class& production_order() {
    static const mpz_class r(
        "0x73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
    return r;
}

Bytes mpz_to_be(const mpz_class& v, size_t width = 0) {
    size_t nbits = mpz_sizeinbase(v.get_mpz_t(), 2);
    size_t need = (v == 0) ? 1 : (nbits + 7) / 8;
    if (width == 0) width = need;
    if (need > width) throw std::logic_error("scalar wider than encoding");
    Bytes out(width, 0);
    if (v != 0) {
        size_t count = 0;
        mpz_export(out.data() + width - need, &count, 1, 1, 1, 0, v.get_mpz_t());
    }
    return out;
}

mpz_class be_to_mpz(BytesView b) {
    mpz_class v;
    if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

uint32_t next_params_id() {
    static std::atomic<uint32_t> counter{1};
    return counter.fetch_add(1);
}

}  // namespace

struct Params::Impl {
    Backend backend;
    std::string suite;
    mpz_class q;
    uint32_t pid;
    size_t scalar_width;
    // number of bytes drawn for one wide-reduced uniform scalar
    size_t scalar_draw_width;
    bls381::Fp12 gt_gen;  // production only

    GroupElement elem(Group g, GroupElement::Payload v) const {
        return GroupElement(pid, g, std::move(v));
    }
    FieldScalar scalar(mpz_class v) const { return FieldScalar(pid, std::move(v)); }
};

Params Params::production() {
    auto impl = std::make_shared<Impl>();
    impl->backend = Backend::kProduction;
    impl->suite = "bls12-381";
    impl->q = production_order();
    impl->pid = next_params_id();
    impl->scalar_width = 32;
    impl->scalar_draw_width = 40;
    impl->gt_gen = bls381::pairing(bls381::g1_generator(), bls381::g2_generator());
    return Params(std::move(impl));
}

Params Params::transparent(uint64_t order) {
    mpz_class q = mpz_class(order);
    if (order < 3 || !mpz_probab_prime_p(q.get_mpz_t(), 30))
        throw std::invalid_argument("transparent group order must be an odd prime");
    auto impl = std::make_shared<Impl>();
    impl->backend = Backend::kTransparent;
    impl->suite = "toy-" + std::to_string(order);
    impl->q = std::move(q);
    impl->pid = next_params_id();
    impl->scalar_width = 8;
    impl->scalar_draw_width = (mpz_sizeinbase(impl->q.get_mpz_t(), 2) + 7) / 8 + 8;
    return Params(std::move(impl));
}

Params setup(int security_level_bits, Backend backend) {
    if (security_level_bits != 128)
        throw std::invalid_argument("unsupported security level (only 128 bits)");
    return backend == Backend::kProduction ? Params::production()
                                           : Params::transparent();
}

Backend Params::backend() const { return impl_->backend; }
bool Params::is_transparent() const { return impl_->backend == Backend::kTransparent; }
const std::string& Params::suite_name() const { return impl_->suite; }
const mpz_class& Params::order() const { return impl_->q; }

size_t Params::element_bytes(Group g) const {
    if (is_transparent()) return 8;
    switch (g) {
        case Group::kG: return 48;
        case Group::kGhat: return 96;
        case Group::kGT: return 576;
    }
    throw std::invalid_argument("bad group tag");
}

size_t Params::scalar_bytes() const { return impl_->scalar_width; }

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

GroupElement Params::generator(Group g) const {
    if (is_transparent()) return impl_->elem(g, mpz_class(1));
    switch (g) {
        case Group::kG: return impl_->elem(g, bls381::g1_generator());
        case Group::kGhat: return impl_->elem(g, bls381::g2_generator());
        case Group::kGT: return impl_->elem(g, impl_->gt_gen);
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::identity(Group g) const {
    if (is_transparent()) return impl_->elem(g, mpz_class(0));
    switch (g) {
        case Group::kG: return impl_->elem(g, bls381::g1_identity());
        case Group::kGhat: return impl_->elem(g, bls381::g2_identity());
        case Group::kGT: return impl_->elem(g, bls381::Fp12::one());
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::mul(const GroupElement& a, const GroupElement& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "element from another params");
    require(a.group_ == b.group_, "mul across groups");
    if (a.group_ == Group::kGT) count_gt_op();
    else count_mul();
    if (is_transparent())
        return impl_->elem(a.group_,
                           mpz_class((std::get<mpz_class>(a.v_) + std::get<mpz_class>(b.v_)) % impl_->q));
    switch (a.group_) {
        case Group::kG:
            return impl_->elem(a.group_, bls381::g1_add(std::get<bls381::G1>(a.v_),
                                                        std::get<bls381::G1>(b.v_)));
        case Group::kGhat:
            return impl_->elem(a.group_, bls381::g2_add(std::get<bls381::G2>(a.v_),
                                                        std::get<bls381::G2>(b.v_)));
        case Group::kGT:
            return impl_->elem(a.group_, bls381::f12_mul(std::get<bls381::Fp12>(a.v_),
                                                         std::get<bls381::Fp12>(b.v_)));
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::inverse(const GroupElement& a) const {
    require(a.pid_ == impl_->pid, "element from another params");
    if (is_transparent()) {
        mpz_class v = std::get<mpz_class>(a.v_);
        return impl_->elem(a.group_, v == 0 ? v : mpz_class(impl_->q - v));
    }
    switch (a.group_) {
        case Group::kG:
            return impl_->elem(a.group_, bls381::g1_neg(std::get<bls381::G1>(a.v_)));
        case Group::kGhat:
            return impl_->elem(a.group_, bls381::g2_neg(std::get<bls381::G2>(a.v_)));
        case Group::kGT:
            return impl_->elem(a.group_, bls381::f12_inv(std::get<bls381::Fp12>(a.v_)));
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::div(const GroupElement& a, const GroupElement& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "element from another params");
    require(a.group_ == b.group_, "div across groups");
    if (a.group_ == Group::kGT) count_gt_op();
    else count_mul();
    if (is_transparent()) {
        mpz_class v = (std::get<mpz_class>(a.v_) - std::get<mpz_class>(b.v_)) % impl_->q;
        if (v < 0) v += impl_->q;
        return impl_->elem(a.group_, std::move(v));
    }
    switch (a.group_) {
        case Group::kG:
            return impl_->elem(a.group_,
                               bls381::g1_add(std::get<bls381::G1>(a.v_),
                                              bls381::g1_neg(std::get<bls381::G1>(b.v_))));
        case Group::kGhat:
            return impl_->elem(a.group_,
                               bls381::g2_add(std::get<bls381::G2>(a.v_),
                                              bls381::g2_neg(std::get<bls381::G2>(b.v_))));
        case Group::kGT:
            return impl_->elem(a.group_,
                               bls381::f12_mul(std::get<bls381::Fp12>(a.v_),
                                               bls381::f12_inv(std::get<bls381::Fp12>(b.v_))));
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::pow(const GroupElement& a, const FieldScalar& k) const {
    require(a.pid_ == impl_->pid && k.pid_ == impl_->pid, "element from another params");
    if (a.group_ == Group::kGT) count_gt_op();
    else count_exp();
    if (is_transparent())
        return impl_->elem(a.group_, mpz_class(std::get<mpz_class>(a.v_) * k.v_ % impl_->q));
    Bytes e = mpz_to_be(k.v_);
    switch (a.group_) {
        case Group::kG:
            return impl_->elem(a.group_, bls381::g1_mul(std::get<bls381::G1>(a.v_), e));
        case Group::kGhat:
            return impl_->elem(a.group_, bls381::g2_mul(std::get<bls381::G2>(a.v_), e));
        case Group::kGT:
            return impl_->elem(a.group_, bls381::f12_pow(std::get<bls381::Fp12>(a.v_), e));
    }
    throw std::invalid_argument("bad group tag");
}

bool Params::eq(const GroupElement& a, const GroupElement& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "element from another params");
    require(a.group_ == b.group_, "eq across groups");
    if (a.group_ == Group::kGT) count_gt_compare();
    if (is_transparent()) return std::get<mpz_class>(a.v_) == std::get<mpz_class>(b.v_);
    switch (a.group_) {
        case Group::kG:
            return bls381::g1_eq(std::get<bls381::G1>(a.v_), std::get<bls381::G1>(b.v_));
        case Group::kGhat:
            return bls381::g2_eq(std::get<bls381::G2>(a.v_), std::get<bls381::G2>(b.v_));
        case Group::kGT:
            return std::get<bls381::Fp12>(a.v_) == std::get<bls381::Fp12>(b.v_);
    }
    throw std::invalid_argument("bad group tag");
}

bool Params::is_identity(const GroupElement& a) const {
    require(a.pid_ == impl_->pid, "element from another params");
    if (is_transparent()) return std::get<mpz_class>(a.v_) == 0;
    switch (a.group_) {
        case Group::kG: return bls381::g1_is_identity(std::get<bls381::G1>(a.v_));
        case Group::kGhat: return bls381::g2_is_identity(std::get<bls381::G2>(a.v_));
        case Group::kGT: return std::get<bls381::Fp12>(a.v_).is_one();
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::pair(const GroupElement& a, const GroupElement& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "element from another params");
    count_pairing();
    if (is_transparent()) {
        require(a.group_ != Group::kGT && b.group_ != Group::kGT,
                "pairing argument in target group");
        return impl_->elem(Group::kGT,
                           mpz_class(std::get<mpz_class>(a.v_) * std::get<mpz_class>(b.v_) % impl_->q));
    }
    require(a.group_ == Group::kG, "pairing: first argument not in G");
    require(b.group_ == Group::kGhat, "pairing: second argument not in Ghat");
    return impl_->elem(Group::kGT, bls381::pairing(std::get<bls381::G1>(a.v_),
                                                   std::get<bls381::G2>(b.v_)));
}

bool Params::pair_eq(const GroupElement& a1, const GroupElement& b1,
                     const GroupElement& a2, const GroupElement& b2) const {
    require(a1.pid_ == impl_->pid && b1.pid_ == impl_->pid && a2.pid_ == impl_->pid &&
                b2.pid_ == impl_->pid,
            "element from another params");
    count_pairing(2);
    count_gt_compare();
    if (is_transparent()) {
        require(a1.group_ != Group::kGT && b1.group_ != Group::kGT &&
                    a2.group_ != Group::kGT && b2.group_ != Group::kGT,
                "pairing argument in target group");
        return std::get<mpz_class>(a1.v_) * std::get<mpz_class>(b1.v_) % impl_->q ==
               std::get<mpz_class>(a2.v_) * std::get<mpz_class>(b2.v_) % impl_->q;
    }
    require(a1.group_ == Group::kG && a2.group_ == Group::kG,
            "pairing: first argument not in G");
    require(b1.group_ == Group::kGhat && b2.group_ == Group::kGhat,
            "pairing: second argument not in Ghat");
    // e(a1,b1) e(-a2,b2) == 1, one shared Miller loop + final exponentiation
    return bls381::pairing_product({{std::get<bls381::G1>(a1.v_), std::get<bls381::G2>(b1.v_)},
                                    {bls381::g1_neg(std::get<bls381::G1>(a2.v_)),
                                     std::get<bls381::G2>(b2.v_)}})
        .is_one();
}

GroupElement Params::hash_to_group(BytesView message, HashCharge charge) const {
    count_hash_to_group();
    if (charge == HashCharge::kCountExp) count_exp();
    Bytes dst = to_bytes(kHashDomainTag);
    if (!is_transparent())
        return impl_->elem(Group::kG, bls381::hash_to_g1(message, dst));
    // exponent = SHA-256(tag || message) mod q; identity retries with a
    // one-byte counter appended to the message, mirroring the curve path
    Bytes buf = dst;
    buf.insert(buf.end(), message.begin(), message.end());
    for (int counter = 0;; ++counter) {
        Digest d = sha256(buf);
        mpz_class e = be_to_mpz(d) % impl_->q;
        if (e != 0) return impl_->elem(Group::kG, std::move(e));
        if (counter >= 255) throw std::logic_error("hash_to_group retry overflow");
        buf.push_back(uint8_t(counter));
    }
}

FieldScalar Params::scalar_from_u64(uint64_t v) const {
    return impl_->scalar(mpz_class(mpz_class(v) % impl_->q));
}

FieldScalar Params::scalar_from_mpz(const mpz_class& v) const {
    mpz_class r = v % impl_->q;
    if (r < 0) r += impl_->q;
    return impl_->scalar(std::move(r));
}

FieldScalar Params::random_scalar(RandomSource& rng) const {
    // wide draw + reduction: bias below 2^-64
    Bytes b = rng.bytes(impl_->scalar_draw_width);
    return impl_->scalar(mpz_class(be_to_mpz(b) % impl_->q));
}

FieldScalar Params::random_nonzero_scalar(RandomSource& rng) const {
    for (;;) {
        FieldScalar s = random_scalar(rng);
        if (s.value() != 0) return s;
    }
}

FieldScalar Params::s_add(const FieldScalar& a, const FieldScalar& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "scalar from another params");
    return impl_->scalar(mpz_class((a.v_ + b.v_) % impl_->q));
}

FieldScalar Params::s_sub(const FieldScalar& a, const FieldScalar& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "scalar from another params");
    mpz_class v = (a.v_ - b.v_) % impl_->q;
    if (v < 0) v += impl_->q;
    return impl_->scalar(std::move(v));
}

FieldScalar Params::s_mul(const FieldScalar& a, const FieldScalar& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "scalar from another params");
    return impl_->scalar(mpz_class(a.v_ * b.v_ % impl_->q));
}

FieldScalar Params::s_neg(const FieldScalar& a) const {
    require(a.pid_ == impl_->pid, "scalar from another params");
    return impl_->scalar(a.v_ == 0 ? mpz_class(0) : mpz_class(impl_->q - a.v_));
}

FieldScalar Params::s_inv(const FieldScalar& a) const {
    require(a.pid_ == impl_->pid, "scalar from another params");
    if (a.v_ == 0) throw std::invalid_argument("inverse of zero scalar");
    count_scalar_inversion();
    mpz_class r;
    mpz_invert(r.get_mpz_t(), a.v_.get_mpz_t(), impl_->q.get_mpz_t());
    return impl_->scalar(std::move(r));
}

bool Params::s_eq(const FieldScalar& a, const FieldScalar& b) const {
    require(a.pid_ == impl_->pid && b.pid_ == impl_->pid, "scalar from another params");
    return a.v_ == b.v_;
}

bool Params::s_is_zero(const FieldScalar& a) const {
    require(a.pid_ == impl_->pid, "scalar from another params");
    return a.v_ == 0;
}

Bytes Params::scalar_to_bytes(const FieldScalar& s) const {
    require(s.pid_ == impl_->pid, "scalar from another params");
    return mpz_to_be(s.v_, impl_->scalar_width);
}

FieldScalar Params::scalar_from_bytes(BytesView b) const {
    if (b.size() != impl_->scalar_width) throw CodecError("bad scalar length");
    mpz_class v = be_to_mpz(b);
    if (v >= impl_->q) throw CodecError("scalar not reduced");
    return impl_->scalar(std::move(v));
}

Bytes Params::serialize(const GroupElement& a) const {
    require(a.pid_ == impl_->pid, "element from another params");
    if (is_transparent()) return mpz_to_be(std::get<mpz_class>(a.v_), 8);
    switch (a.group_) {
        case Group::kG: {
            auto arr = bls381::g1_serialize(std::get<bls381::G1>(a.v_));
            return Bytes(arr.begin(), arr.end());
        }
        case Group::kGhat: {
            auto arr = bls381::g2_serialize(std::get<bls381::G2>(a.v_));
            return Bytes(arr.begin(), arr.end());
        }
        case Group::kGT: {
            const auto& z = std::get<bls381::Fp12>(a.v_);
            Bytes out;
            out.reserve(576);
            for (const bls381::Fp6* h : {&z.c0, &z.c1})
                for (const bls381::Fp2* c : {&h->c0, &h->c1, &h->c2})
                    for (const bls381::Fp* f : {&c->c0, &c->c1}) {
                        auto fb = bls381::fp_to_bytes(*f);
                        out.insert(out.end(), fb.begin(), fb.end());
                    }
            return out;
        }
    }
    throw std::invalid_argument("bad group tag");
}

GroupElement Params::deserialize(Group g, BytesView b) const {
    if (b.size() != element_bytes(g)) throw CodecError("bad element length");
    if (is_transparent()) {
        mpz_class v = be_to_mpz(b);
        if (v >= impl_->q) throw CodecError("exponent not reduced");
        return impl_->elem(g, std::move(v));
    }
    switch (g) {
        case Group::kG: {
            bls381::G1 p;
            if (!bls381::g1_deserialize(b, p)) throw CodecError("invalid G element");
            return impl_->elem(g, std::move(p));
        }
        case Group::kGhat: {
            bls381::G2 p;
            if (!bls381::g2_deserialize(b, p)) throw CodecError("invalid Ghat element");
            return impl_->elem(g, std::move(p));
        }
        case Group::kGT: {
            bls381::Fp12 z;
            size_t off = 0;
            for (bls381::Fp6* h : {&z.c0, &z.c1})
                for (bls381::Fp2* c : {&h->c0, &h->c1, &h->c2})
                    for (bls381::Fp* f : {&c->c0, &c->c1}) {
                        if (!bls381::fp_from_bytes(b.subspan(off, 48), *f))
                            throw CodecError("invalid GT coefficient");
                        off += 48;
                    }
            if (!bls381::gt_in_subgroup(z))
                throw CodecError("GT element outside the pairing subgroup");
            return impl_->elem(g, std::move(z));
        }
    }
    throw std::invalid_argument("bad group tag");
}

mpz_class Params::discrete_log(const GroupElement& a) const {
    require(a.pid_ == impl_->pid, "element from another params");
    if (!is_transparent())
        throw std::logic_error("discrete logs are only known on the transparent backend");
    return std::get<mpz_class>(a.v_);
}

}  // namespace cps::bilinear
