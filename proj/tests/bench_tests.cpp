#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "cps/bench.hpp"
#include "doctest.h"

using namespace cps;
using namespace cps::bench;
using bilinear::Params;

namespace {

const ProtocolTiming& row(const ProtocolReport& rep, const std::string& name) {
    for (const ProtocolTiming& t : rep.rows)
        if (t.name == name) return t;
    REQUIRE_MESSAGE(false, "missing protocol row: " << name);
    std::abort();
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("operation counts match the cost table on both backends") {
    DeterministicRandom rng(0xbe7c);
    for (bool toy : {false, true}) {
        CAPTURE(toy);
        Params p = toy ? Params::transparent(1009) : Params::production();

        OpCounters d = count_ops(p, Algorithm::kDGen, rng);
        CHECK(d.exps == 3);
        CHECK(d.muls == 1);
        CHECK(d.pairings == 0);

        OpCounters s = count_ops(p, Algorithm::kPSig, rng);
        CHECK(s.exps == 2);
        CHECK(s.muls == 1);
        CHECK(s.pairings == 0);
        CHECK(s.aux.scalar_inversions == 1);

        OpCounters v = count_ops(p, Algorithm::kPVer, rng);
        CHECK(v.exps == 1);
        CHECK(v.muls == 1);
        CHECK(v.pairings == 4);

        OpCounters h = count_ops(p, Algorithm::kChameleonHash, rng);
        CHECK(h.exps == 2);
        CHECK(h.muls == 1);
        CHECK(h.pairings == 0);
        CHECK(h.aux.hash_to_group == 1);
    }
}

TEST_CASE("counts repeat exactly across runs") {
    DeterministicRandom rng(0xbe7d);
    Params p = Params::transparent(1009);
    for (int i = 0; i < 5; i++) {
        OpCounters v = count_ops(p, Algorithm::kPVer, rng);
        CHECK(v.exps == 1);
        CHECK(v.muls == 1);
        CHECK(v.pairings == 4);
        CHECK(v.aux.gt_compares == 2);
    }
}

TEST_CASE("serialized sizes: three elements original, one element proxy") {
    DeterministicRandom rng(0xbe7e);
    SizeReport s = measure_sizes(Params::production(), rng);
    CHECK(s.original_elements == 3);
    CHECK(s.proxy_elements == 1);
    CHECK(s.element_bytes == 48);
    CHECK(s.original_bytes == 144);
    CHECK(s.proxy_bytes == 48);
    CHECK(s.conformant);
}

TEST_CASE("toy encodings keep the element counts but are flagged") {
    DeterministicRandom rng(0xbe7f);
    SizeReport s = measure_sizes(Params::transparent(1009), rng);
    CHECK(s.original_elements == 3);
    CHECK(s.proxy_elements == 1);
    CHECK(!s.conformant);
}

TEST_CASE("collision signing beats verification and batch means are stable") {
    DeterministicRandom rng(0xbe80);
    Params p = Params::production();
    TimeStats sig = time_batch(p, Algorithm::kPSig, 10, rng);
    TimeStats ver10 = time_batch(p, Algorithm::kPVer, 10, rng);
    TimeStats ver40 = time_batch(p, Algorithm::kPVer, 40, rng);

    CHECK(sig.mean_ms < ver10.mean_ms);
    double hi = std::max(ver10.mean_ms, ver40.mean_ms);
    CHECK(std::abs(ver10.mean_ms - ver40.mean_ms) <= 0.20 * hi);

    CHECK(ver10.min_ms <= ver10.p50_ms);
    CHECK(ver10.p50_ms <= ver10.p90_ms);
    CHECK(ver10.p90_ms <= ver10.max_ms);
    CHECK_THROWS_AS(time_batch(p, Algorithm::kPSig, 0, rng),
                    std::invalid_argument);
}

TEST_CASE("protocol run: tracing is fast and fetches split by driver type") {
    DeterministicRandom rng(0xbe81);
    ProtocolReport rep = time_protocols(Params::production(), 0, rng);
    REQUIRE(rep.rows.size() == 5);
    CHECK(row(rep, "login").total_ms < 100.0);
    CHECK(row(rep, "trace-human").total_ms < 500.0);
    CHECK(row(rep, "trace-ai").total_ms < 500.0);
    CHECK(row(rep, "trace-human").mit_fetches == 1);
    CHECK(row(rep, "trace-ai").mit_fetches == 2);
    CHECK(row(rep, "login").exchanges.size() == 2);
    CHECK(row(rep, "delegate").total_ms > 0.0);
    CHECK(row(rep, "mutual-ai").total_ms > 0.0);
}

TEST_CASE("capture delay lands in the human paths and skips the AI prover") {
    DeterministicRandom rng(0xbe82);
    ProtocolReport rep = time_protocols(Params::transparent(1009), 120, rng);
    CHECK(rep.iris_delay_ms == 120);
    CHECK(row(rep, "login").total_ms >= 120.0);
    CHECK(row(rep, "delegate").total_ms >= 120.0);
    // The AI prover answers from its stored capture: no pause.
    CHECK(row(rep, "mutual-ai").total_ms < 120.0);
}

TEST_CASE("json-lines reports round-trip exactly and format deterministically") {
    DeterministicRandom rng(0xbe83);
    Params p = Params::transparent(1009);
    BenchReport r = ops_report(p, rng);

    std::stringstream ss;
    emit_report(r, Format::kJsonLines, ss);
    BenchReport back = parse_report(ss);
    CHECK(back.suite == r.suite);
    CHECK(back.meta == r.meta);
    REQUIRE(back.rows.size() == r.rows.size());
    for (size_t i = 0; i < r.rows.size(); i++) CHECK(back.rows[i] == r.rows[i]);

    std::stringstream a, b;
    emit_report(r, Format::kTable, a);
    emit_report(r, Format::kTable, b);
    CHECK(a.str() == b.str());

    // Nested exchange rows survive the round trip too.
    BenchReport pr = protocols_report(p, 0, rng);
    std::stringstream ps;
    emit_report(pr, Format::kJsonLines, ps);
    BenchReport pback = parse_report(ps);
    REQUIRE(pback.rows.size() == pr.rows.size());
    for (size_t i = 0; i < pr.rows.size(); i++)
        CHECK(pback.rows[i] == pr.rows[i]);
}

TEST_CASE("text tables carry the reference rows beside measured ones") {
    DeterministicRandom rng(0xbe84);
    Params p = Params::transparent(1009);

    std::stringstream ops;
    emit_report(ops_report(p, rng), Format::kTable, ops);
    std::string text = ops.str();
    CHECK(text.find("Verma (2019)") != std::string::npos);
    CHECK(text.find("Qiao (2022)") != std::string::npos);
    CHECK(text.find("reported, not measured") != std::string::npos);
    CHECK(text.find("3E + 1M") != std::string::npos);
    CHECK(text.find("1E + 1M + 4P") != std::string::npos);

    std::stringstream sizes;
    emit_report(sizes_report(p, rng), Format::kTable, sizes);
    std::string stext = sizes.str();
    CHECK(stext.find("Verma (2020)") != std::string::npos);
    CHECK(stext.find("Yang (2020)") != std::string::npos);
    CHECK(stext.find("7|G| + 1|Z|") != std::string::npos);
    CHECK(stext.find("3|G|") != std::string::npos);
}

TEST_CASE("reports are stamped with backend and hardware metadata") {
    DeterministicRandom rng(0xbe85);
    Params p = Params::production();
    BenchReport r = sizes_report(p, rng);
    REQUIRE(r.meta.contains("backend"));
    CHECK(r.meta.at("backend").get<std::string>() == p.suite_name());
    REQUIRE(r.meta.contains("hardware"));
    CHECK(r.meta.at("hardware").contains("hardware_threads"));
    CHECK(r.meta.at("conformant").get<bool>());
}

TEST_CASE("timing report covers the figure-parity batches") {
    DeterministicRandom rng(0xbe86);
    Params p = Params::transparent(1009);
    BenchReport r = timing_report(p, {10, 20, 30, 40}, rng);
    size_t measured = 0, reference = 0;
    for (const auto& j : r.rows) {
        if (j.at("row") == "measured") measured++;
        if (j.at("row") == "reference") reference++;
    }
    CHECK(measured == 16);  // 4 algorithms x 4 batches
    CHECK(reference == 4);
}

}  // TEST_SUITE
