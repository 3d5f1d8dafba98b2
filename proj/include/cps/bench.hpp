#pragma once

// Cost harness for the signature scheme and the protocol suite: exact E/M/P
// operation counts, serialized-size accounting, batched wall-time statistics,
// and end-to-end protocol timings, with text-table and machine-readable
// emitters. Comparison rows for other published schemes are hard-coded from
// their papers and always labeled "reported, not measured".

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cps/bilinear.hpp"
#include "cps/counters.hpp"
#include "cps/rng.hpp"

namespace cps::bench {

enum class Algorithm { kChameleonHash, kDGen, kPSig, kPVer };
const char* algorithm_name(Algorithm a);

// Exact operation tally for one invocation on fresh random inputs. Input
// preparation (keys, messages, the hash/signature being consumed) happens
// outside the counting scope. Counts are data-independent, so one invocation
// is the whole story.
OpCounters count_ops(const bilinear::Params& p, Algorithm alg,
                     RandomSource& rng);

// Serialized-size accounting, measured off real encodings: an original
// signature travels as (sigma, h, R), a proxy signature as the bare
// collision parameter R'.
struct SizeReport {
    size_t original_elements = 0;
    size_t proxy_elements = 0;
    size_t element_bytes = 0;  // one source-group element on this backend
    size_t original_bytes = 0;
    size_t proxy_bytes = 0;
    bool conformant = false;  // false for toy encodings (not size-comparable)
};
SizeReport measure_sizes(const bilinear::Params& p, RandomSource& rng);

// Per-call wall-time statistics over a batch of invocations, each on fresh
// inputs prepared outside the clock. Single sequential worker.
struct TimeStats {
    size_t batch = 0;
    double mean_ms = 0;
    double p50_ms = 0;
    double p90_ms = 0;
    double min_ms = 0;
    double max_ms = 0;
};
TimeStats time_batch(const bilinear::Params& p, Algorithm alg, size_t batch,
                     RandomSource& rng);

// End-to-end protocol timings over loopback transport against a scratch
// registry. Exchange rows give the responder-side legs as seen from the
// initiator (request out to reply in); the remainder of the total is
// initiator-side work.
struct ExchangeTiming {
    std::string step;
    double ms = 0;
};
struct ProtocolTiming {
    std::string name;  // login | delegate | mutual-ai | trace-human | trace-ai
    double total_ms = 0;
    std::vector<ExchangeTiming> exchanges;
    size_t mit_fetches = 0;  // trace rows only
};
struct ProtocolReport {
    unsigned iris_delay_ms = 0;
    std::vector<ProtocolTiming> rows;
};
ProtocolReport time_protocols(const bilinear::Params& p,
                              unsigned iris_delay_ms, RandomSource& rng);

// One suite per report. Rows are flat JSON objects so the two emitters and
// the parser share a single shape; meta carries backend + hardware metadata
// and the suite's explanatory notes.
struct BenchReport {
    std::string suite;  // ops | sizes | timing | protocols
    nlohmann::ordered_json meta;
    std::vector<nlohmann::ordered_json> rows;
};

BenchReport ops_report(const bilinear::Params& p, RandomSource& rng);
BenchReport sizes_report(const bilinear::Params& p, RandomSource& rng);
BenchReport timing_report(const bilinear::Params& p,
                          const std::vector<size_t>& batches,
                          RandomSource& rng);
BenchReport protocols_report(const bilinear::Params& p,
                             unsigned iris_delay_ms, RandomSource& rng);

enum class Format { kTable, kJsonLines };

// kTable: aligned human-readable tables. kJsonLines: one JSON object per
// line — a header object {"suite","meta"} followed by one object per row;
// parse_report consumes exactly this form and round-trips losslessly.
void emit_report(const BenchReport& r, Format f, std::ostream& out);
BenchReport parse_report(std::istream& in);

// Host description stamped into every report's meta.
nlohmann::ordered_json hardware_metadata();

}  // namespace cps::bench
