#include <doctest.h>

#include <cmath>
#include <sstream>

#include "markovforge/oracle.hpp"

using namespace markovforge;

namespace {

std::vector<BigInt> big(std::vector<long> v) { return {v.begin(), v.end()}; }

LoopSpectrum counts(std::vector<long> a) { return LoopSpectrum::from_counts(big(a), GrowthModel::Finite); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("beta = 2 return counts") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(2)), 16);
    const ExplicitGraph g = realize(s, 16);
    const auto p = count_paths(g, g.root(), g.root(), 6);
    CHECK(p == big({1, 1, 1, 1, 5, 9, 13}));
    CHECK(enumerate_paths(g, g.root(), g.root(), 6) == p);
    const auto f = count_first_returns(g, g.root(), 12);
    CHECK(f == big({0, 1, 0, 0, 4, 0, 0, 0, 0, 64, 0, 0, 0}));
}

TEST_CASE("renewal convolution") {
    CHECK(renewal_convolve(big({0, 1}), 5) == big({1, 1, 1, 1, 1, 1}));
    CHECK(renewal_convolve(big({0, 1, 0, 0, 4}), 6) == big({1, 1, 1, 1, 5, 9, 13}));
    const auto parity = renewal_convolve(big({0, 0, 1}), 6);
    CHECK(parity == big({1, 0, 1, 0, 1, 0, 1}));
    CHECK(support_gcd(parity) == 2);
}

TEST_CASE("empty path convention") {
    const ExplicitGraph g = realize(counts({1, 1}), 2);
    const std::size_t other = 1 - g.root();
    CHECK(count_paths(g, g.root(), g.root(), 0)[0] == 1);
    CHECK(count_paths(g, g.root(), other, 0)[0] == 0);
}

TEST_CASE("lifted first returns") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(2)), 16);
    const ExplicitGraph g3 = lift_period(realize(s, 4), 3);
    const auto f = count_first_returns(g3, g3.root(), 12);
    CHECK(f[3] == 1);
    CHECK(f[12] == 4);
    CHECK(f == lifted_first_returns(s, 12, 3));
    const auto t = delete_loop(s);
    const ExplicitGraph gt = realize(t, 4);
    CHECK(count_first_returns(gt, gt.root(), 4)[4] == 3);
}

TEST_CASE("oracle equivalence on realized graphs") {
    std::vector<LoopSpectrum> spectra;
    for (const char* beta : {"2", "3", "exp(7/10)"}) {
        spectra.push_back(build_spectrum(BetaValue::parse(beta), 16));
        spectra.push_back(delete_loop(spectra.back()));
    }
    spectra.push_back(counts({0, 1, 0, 1}));
    spectra.push_back(counts({1, 2, 0, 3}));
    for (const auto& s : spectra) {
        const std::size_t n = std::min<std::size_t>(12, s.n_max());
        const ExplicitGraph g = realize(s, s.meta.model == GrowthModel::Finite ? s.n_max() : 9);
        const auto dp = count_paths(g, g.root(), g.root(), n);
        const auto first = count_first_returns(g, g.root(), n);
        CHECK(dp == renewal_convolve(first, n));
        CHECK(enumerate_paths(g, g.root(), g.root(), n) == dp);
        CHECK(support_gcd(dp) == period(g));
    }
}

TEST_CASE("enumeration cap") {
    const ExplicitGraph g = realize(counts({1, 3}), 2);
    CHECK_THROWS_AS(enumerate_paths(g, g.root(), g.root(), 30, 1000), GraphTooLarge);
}

TEST_CASE("growth rate") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(2)), 64);
    const PathCountTable t = table_from_spectrum(s, 64);
    const GrowthEstimate g = growth_rate(t.p, 4);
    CHECK(g.estimates.size() == 4);
    CHECK(g.estimates.back().first == 64);
    const double last = mpfr_get_d(g.last.midpoint().get(), MPFR_RNDN);
    CHECK(std::abs(last - std::log(2.0)) < 0.05);

    const auto ones = renewal_convolve(big({0, 1}), 10);
    CHECK(growth_rate(ones, 3).last.contains(Rational(0)));
    CHECK_THROWS_AS(growth_rate(big({1, 0, 0}), 2), InsufficientData);

    const LoopSpectrum s8 = build_spectrum(BetaValue::rational(Rational(8)), 64);
    const PathCountTable t8 = table_from_spectrum(s8, 192, 3);
    const GrowthEstimate g8 = growth_rate(t8.p, 1);
    CHECK(g8.period == 3);
    CHECK(std::abs(mpfr_get_d(g8.last.midpoint().get(), MPFR_RNDN) - std::log(2.0)) < 0.05);
}

TEST_CASE("growth CSV") {
    std::ostringstream out;
    write_growth_csv(table_from_spectrum(counts({1}), 3), out);
    const std::string csv = out.str();
    CHECK(csv.rfind("n,f,p,growth_estimate\n", 0) == 0);
    CHECK(csv.find("\n1,1,1,") != std::string::npos);
}

}
