#include <doctest.h>

#include "markovforge/graph.hpp"

using namespace markovforge;

namespace {

LoopSpectrum counts(std::vector<long> a) {
    std::vector<BigInt> big(a.begin(), a.end());
    return LoopSpectrum::from_counts(big, GrowthModel::Finite);
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("beta = 2 realized at N = 4") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(2)), 16);
    const ExplicitGraph g = realize(s, 4);
    CHECK(g.vertex_count() == 13);
    CHECK(g.arrows().size() == 17);
    CHECK(realized_vertex_count(s, 4) == 13);
    CHECK(strongly_connected(g));
    CHECK(period(g) == 1);
    CHECK(g.vertex_name(g.root()) == "root");
}

TEST_CASE("single self-loop") {
    const ExplicitGraph g = realize(counts({1}), 1);
    CHECK(g.vertex_count() == 1);
    CHECK(g.arrows().size() == 1);
    const std::string dot = export_graph(g, ExportFormat::Dot);
    CHECK(dot.find("\"root\" -> \"root\"") != std::string::npos);
}

TEST_CASE("period lift") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(2)), 16);
    const ExplicitGraph g = realize(s, 4);
    CHECK(lift_period(g, 1) == g);
    const ExplicitGraph g3 = lift_period(g, 3);
    CHECK(g3.vertex_count() == 39);
    // Each vertex becomes a chain of 3 phases: 13 * 2 chain arrows plus the 17 originals.
    CHECK(g3.arrows().size() == 43);
    CHECK(strongly_connected(g3));
    CHECK(period(g3) == 3);
    CHECK(g3.vertex_name(g3.root()) == "root_p1");
}

TEST_CASE("period from loop support") {
    CHECK(period(realize(counts({0, 1, 0, 1}), 4)) == 2);
    CHECK(period(realize(counts({0, 0, 1, 0, 0, 1}), 6)) == 3);
    CHECK(period(realize(counts({0, 1, 1}), 3)) == 1);
}

TEST_CASE("the vertex cap is enforced") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(2)), 64);
    CHECK_THROWS_AS(realize(s, 64), GraphTooLarge);
    CHECK_THROWS_AS(realize(s, 16, 100), GraphTooLarge);
}

TEST_CASE("JSON export round trip") {
    const LoopSpectrum s = build_spectrum(BetaValue::parse("exp(7/10)"), 16);
    for (std::size_t p : {1, 2}) {
        ExplicitGraph g = realize(s, 9);
        if (p > 1) g = lift_period(g, p);
        const std::string text = export_graph(g, ExportFormat::Json);
        const ExplicitGraph back = import_graph_json(text);
        CHECK(back == g);
        CHECK(export_graph(back, ExportFormat::Json) == text);
    }
    CHECK_THROWS_AS(import_graph_json("{\"vertices\": 3}"), FormatError);
}

}
