#include <doctest.h>

#include "markovforge/spectrum.hpp"

using namespace markovforge;

namespace {

LoopSpectrum beta2(std::size_t n = 16) { return build_spectrum(BetaValue::rational(Rational(2)), n); }

// Greedy digits of x in base beta, straight MPFR at 512 bits.
std::vector<long> greedy_oracle(const Rational& x, const Rational& exponent, std::size_t count) {
    mpfr_t beta, r;
    mpfr_inits2(512, beta, r, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_q(beta, exponent.get_mpq_t(), MPFR_RNDN);
    mpfr_exp(beta, beta, MPFR_RNDN);
    mpfr_set_q(r, x.get_mpq_t(), MPFR_RNDN);
    std::vector<long> digits{0};
    for (std::size_t n = 1; n <= count; ++n) {
        mpfr_mul(r, r, beta, MPFR_RNDN);
        const long d = mpfr_get_si(r, MPFR_RNDD);
        digits.push_back(d);
        mpfr_sub_si(r, r, d, MPFR_RNDN);
    }
    mpfr_clears(beta, r, static_cast<mpfr_ptr>(nullptr));
    return digits;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("beta = 2 is built on the exact rational path") {
    const LoopSpectrum s = beta2();
    CHECK(s.meta.c.is_exact());
    CHECK(s.meta.c.contains(Rational(1)));
    CHECK(s.meta.delta.is_exact());
    CHECK(s.meta.delta.contains(Rational(0)));
    CHECK(s.meta.k == 0);
    CHECK(s.meta.L.contains(Rational(1, 2)));
    CHECK(s.meta.M.contains(Rational(2)));
    REQUIRE(s.n_max() == 16);
    for (std::size_t n = 1; n <= 16; ++n) {
        const BigInt expected = n == 1 ? 1 : n == 4 ? 4 : n == 9 ? 64 : n == 16 ? 4096 : 0;
        CHECK_MESSAGE(s.a[n] == expected, "n = " << n);
    }
    // b(1) = floor(c) = 1 and every greedy digit is 0.
    CHECK(s.trace.b[1] == 1);
    for (std::size_t n = 1; n <= 16; ++n) CHECK(s.trace.d[n] == 0);
}

TEST_CASE("beta = 3 squares") {
    const LoopSpectrum s = build_spectrum(BetaValue::rational(Rational(3)), 16);
    CHECK(s.a[1] == 1);
    CHECK(s.a[4] == 4 * 9);      // 4 * 3^2
    CHECK(s.a[9] == 4 * 729);    // 4 * 3^6
    CHECK(s.a[2] == 0);
}

TEST_CASE("beta_expansion of zero and of 1/2 in base 2") {
    const auto zero = beta_expansion(CReal(), CReal::from_integer(2L), 10);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(zero.digits[n] == 0);
    const auto half = beta_expansion(CReal::from_rational(Rational(1, 2), 64), CReal::from_integer(2L), 5);
    CHECK(half.digits[1] == 1);
    for (std::size_t n = 2; n <= 5; ++n) CHECK(half.digits[n] == 0);
    CHECK(half.remainder.contains(Rational(0)));
}

TEST_CASE("beta_expansion in base e^{7/10} matches an independent greedy oracle") {
    const Rational x(1, 3);
    const auto got = beta_expansion([&](Bits bits) { return CReal::from_rational(x, bits); }, BetaValue::parse("exp(7/10)"), 20);
    const auto expected = greedy_oracle(x, Rational(7, 10), 20);
    for (std::size_t n = 1; n <= 20; ++n) {
        CHECK_MESSAGE(got.digits[n] == expected[n], "digit " << n);
        CHECK(got.digits[n] <= 2);
    }
}

TEST_CASE("delete_loop") {
    const LoopSpectrum s = beta2();
    const LoopSpectrum t = delete_loop(s);
    REQUIRE(t.meta.deleted_loop.has_value());
    CHECK(*t.meta.deleted_loop == 4);
    CHECK(t.a[4] == 3);
    CHECK(t.a[9] == 64);
    CHECK_THROWS_AS(delete_loop(s, 3), NoDeletableLoop);
    CHECK_THROWS(delete_loop(t));
    const LoopSpectrum single = LoopSpectrum::from_counts({BigInt(1)}, GrowthModel::Finite);
    CHECK_THROWS_AS(delete_loop(single), NoDeletableLoop);
}

TEST_CASE("tail bound from 17 for beta = 2") {
    const LoopSpectrum s = beta2();
    // M 2^-16 + sum_{m >= 5} 2^-m = 2^-15 + 2^-4.
    const CReal t = spectrum_tail_bounds(s, 17, TailWeight::One);
    CHECK(t.contains(Rational(1, 32768) + Rational(1, 16)));
    CHECK(certainly_greater(spectrum_tail_bounds(s, 1, TailWeight::One), Rational(1) - Rational(1, 1000000)));
}

TEST_CASE("the sum of a(n) beta^-n is 1") {
    for (const char* beta : {"2", "3", "exp(7/10)", "8"}) {
        const LoopSpectrum s = build_spectrum(BetaValue::parse(beta), 64);
        const CReal sum = partial_sum(s, s.meta.L) + s.meta.tail_mass;
        CHECK_MESSAGE(sum.contains(Rational(1)), beta);
        CHECK_MESSAGE(certainly_less(sum.width(), Rational(BigInt(1), BigInt(10) * BigInt("1000000000000000000000000000000"))), beta);
    }
}

TEST_CASE("construction checks on integer betas all pass") {
    for (const char* beta : {"2", "3", "8"}) {
        const LoopSpectrum s = build_spectrum(BetaValue::parse(beta), 64);
        for (const auto& check : check_construction(s)) CHECK_MESSAGE(check.passed, beta << ": " << check.name << " " << check.detail);
    }
}

TEST_CASE("e^{7/10}: a(n^2) falls below c beta^(n^2-n) when d'(n^2) = 0") {
    // a(4) = floor(c beta^2) + d'(4) = 4 + 0 while c beta^2 = 4.1675...
    const LoopSpectrum s = build_spectrum(BetaValue::parse("exp(7/10)"), 64);
    CHECK(s.a[4] == 4);
    const CReal lower = s.meta.c * pow(s.meta.beta_value, 2);
    CHECK(certainly_greater(lower, Rational(4)));
    std::size_t failed = 0;
    for (const auto& check : check_construction(s)) failed += check.passed ? 0 : 1;
    CHECK(failed == 5);
}

TEST_CASE("construction is deterministic") {
    CHECK(build_spectrum(BetaValue::parse("exp(7/10)"), 64) == build_spectrum(BetaValue::parse("exp(7/10)"), 64));
}

TEST_CASE("beta <= 1 is rejected") {
    CHECK_THROWS_AS(build_spectrum(BetaValue::parse("1"), 16), NotGreaterThanOne);
    CHECK_THROWS_AS(build_spectrum(BetaValue::parse("exp(0)"), 16), NotGreaterThanOne);
}

}
