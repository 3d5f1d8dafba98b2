#pragma once

#include <cstdint>

namespace cps {

// Abstract-operation counters in the classic E/M/P cost model: exponentiations
// and multiplications in the source groups plus pairing evaluations. Anything
// outside that taxonomy (message hashing, scalar inversions, target-group
// work) is tracked in the aux block and reported separately, never folded
// into E/M/P. Counts are taken at the bilinear API layer, so they are
// identical on both backends by construction.
struct OpCounters {
    uint64_t exps = 0;      // E: pow() on a source-group element
    uint64_t muls = 0;      // M: mul()/div() on source-group elements
    uint64_t pairings = 0;  // P: bilinear-map evaluations
    struct Aux {
        uint64_t hash_to_group = 0;      // message-to-group hashes
        uint64_t scalar_inversions = 0;  // inversions in the exponent field
        uint64_t gt_compares = 0;        // equality tests in the target group
        uint64_t gt_ops = 0;             // mul/pow in the target group
    } aux;

    OpCounters& operator+=(const OpCounters& o) {
        exps += o.exps;
        muls += o.muls;
        pairings += o.pairings;
        aux.hash_to_group += o.aux.hash_to_group;
        aux.scalar_inversions += o.aux.scalar_inversions;
        aux.gt_compares += o.aux.gt_compares;
        aux.gt_ops += o.aux.gt_ops;
        return *this;
    }
};

namespace detail {
OpCounters*& active_counters();
}

// RAII scope: while alive, bilinear operations on this thread are tallied
// into the given struct. Scopes nest; only the innermost one records.
class CounterScope {
  public:
    explicit CounterScope(OpCounters& c) : saved_(detail::active_counters()) {
        detail::active_counters() = &c;
    }
    ~CounterScope() { detail::active_counters() = saved_; }
    CounterScope(const CounterScope&) = delete;
    CounterScope& operator=(const CounterScope&) = delete;

  private:
    OpCounters* saved_;
};

inline void count_exp() {
    if (auto* c = detail::active_counters()) c->exps++;
}
inline void count_mul() {
    if (auto* c = detail::active_counters()) c->muls++;
}
inline void count_pairing(uint64_t n = 1) {
    if (auto* c = detail::active_counters()) c->pairings += n;
}
inline void count_hash_to_group() {
    if (auto* c = detail::active_counters()) c->aux.hash_to_group++;
}
inline void count_scalar_inversion() {
    if (auto* c = detail::active_counters()) c->aux.scalar_inversions++;
}
inline void count_gt_compare() {
    if (auto* c = detail::active_counters()) c->aux.gt_compares++;
}
inline void count_gt_op() {
    if (auto* c = detail::active_counters()) c->aux.gt_ops++;
}

}  // namespace cps
