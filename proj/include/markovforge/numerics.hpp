#pragma once

// Interval reals over MPFR with outward (directed) rounding, plus the exact
// big-integer / rational types used for every count in the project.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "markovforge/errors.hpp"

namespace markovforge {

using BigInt = mpz_class;
using Rational = mpq_class;
using Bits = mpfr_prec_t;

/// RAII owner of one mpfr_t.
class BigFloat {
public:
    explicit BigFloat(Bits bits = 64);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    Bits bits() const { return mpfr_get_prec(value_); }

    /// Decimal text that reads back to exactly this value at bits().
    std::string exact_decimal() const;
    static BigFloat parse_exact(const std::string& text, Bits bits);

    friend bool operator==(const BigFloat& a, const BigFloat& b) {
        return a.bits() == b.bits() && mpfr_equal_p(a.value_, b.value_) != 0;
    }

private:
    mpfr_t value_;
};

/// A certified enclosure [lo, hi] of a real number.
///
/// Every arithmetic operation rounds lo toward -inf and hi toward +inf, so
/// the true value of any expression built from exact inputs stays inside.
/// The result precision of a binary operation is the larger operand
/// precision.
class CReal {
public:
    /// Exact zero.
    CReal();

    static CReal from_integer(const BigInt& value, Bits bits = 64);
    static CReal from_integer(long value, Bits bits = 64);
    static CReal from_rational(const Rational& value, Bits bits);
    static CReal from_bounds(BigFloat lo, BigFloat hi);
    /// Hull of two reals; neither needs to be ordered.
    static CReal hull(const CReal& a, const CReal& b);

    const BigFloat& lo() const { return lo_; }
    const BigFloat& hi() const { return hi_; }
    Bits precision_bits() const { return std::max(lo_.bits(), hi_.bits()); }

    bool is_exact() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
    bool contains(const Rational& q) const;
    bool contains(const CReal& inner) const;
    bool overlaps(const CReal& other) const;

    /// Upper bound of hi - lo.
    CReal width() const;
    /// Re-round outward to `bits`.
    CReal rounded(Bits bits) const;
    /// Midpoint, rounded to nearest; for reporting and bisection only.
    BigFloat midpoint() const;

    /// "[lo, hi]" with outward-rounded `digits` significant digits.
    std::string to_string(int digits = 25) const;
    std::string lo_string(int digits = 25) const;
    std::string hi_string(int digits = 25) const;

    friend bool operator==(const CReal& a, const CReal& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

    friend CReal operator+(const CReal& a, const CReal& b);
    friend CReal operator-(const CReal& a, const CReal& b);
    friend CReal operator*(const CReal& a, const CReal& b);
    friend CReal operator/(const CReal& a, const CReal& b);
    friend CReal operator-(const CReal& a);

private:
    CReal(BigFloat lo, BigFloat hi);

    BigFloat lo_;
    BigFloat hi_;
};

CReal pow(const CReal& base, unsigned long exponent);
CReal exp(const CReal& x);
CReal log(const CReal& x);
CReal sqrt(const CReal& x);
CReal intersect(const CReal& a, const CReal& b);
/// Enclosure of min(a, b).
CReal minimum(const CReal& a, const CReal& b);

// Certified order relations: true only when every point of the first
// enclosure relates to every point of the second.
bool certainly_less(const CReal& a, const CReal& b);
bool certainly_less_equal(const CReal& a, const CReal& b);
bool certainly_less(const CReal& a, const Rational& b);
bool certainly_greater(const CReal& a, const Rational& b);

/// Precision schedule used whenever a decision needs a sharper enclosure:
/// start, 2*start, ... up to max (inclusive).
struct PrecisionPolicy {
    Bits start = 256;
    Bits max = 4096;

    std::vector<Bits> schedule() const;
};

/// Floor of x if the enclosure decides it; nullopt otherwise.
std::optional<BigInt> decided_floor(const CReal& x);
/// Floor of x or FloorUndecidable.
BigInt certified_floor(const CReal& x);
/// Re-evaluates x along the policy until its floor is decided.
BigInt certified_floor(const std::function<CReal(Bits)>& evaluate, const PrecisionPolicy& policy = {});

enum class TailWeight { One, N, NSquared };

/// Enclosure of sum_{n >= first_exponent} w(n) * ratio^n from closed forms.
CReal geometric_tail(const CReal& ratio, unsigned long first_exponent, TailWeight weight);

/// A real beta > 1, given exactly.
class BetaValue {
public:
    enum class Kind { Rational, ExpOfRational, Decimal };

    static BetaValue rational(const Rational& value);
    /// e^{exponent}
    static BetaValue exp_of_rational(const Rational& exponent);
    /// Decimal literal, read as an exact rational.
    static BetaValue decimal(const std::string& literal);
    /// Parses "2", "3/2", "2.5", "exp(7/10)", "exp(0.7)", "e^0.7".
    static BetaValue parse(const std::string& text);

    Kind kind() const { return kind_; }
    /// The rational value (Rational/Decimal) or the exponent (ExpOfRational).
    const Rational& operand() const { return operand_; }
    const std::string& literal() const { return literal_; }
    /// Exact value when beta is rational.
    std::optional<Rational> exact_value() const;
    bool is_integer() const;

    /// Canonical descriptor text; parse(descriptor()) == *this.
    std::string descriptor() const;

    friend bool operator==(const BetaValue& a, const BetaValue& b) {
        return a.kind_ == b.kind_ && a.operand_ == b.operand_ && a.literal_ == b.literal_;
    }

private:
    BetaValue(Kind kind, Rational operand, std::string literal);

    Kind kind_;
    Rational operand_;
    std::string literal_;
};

/// Enclosure of beta at `bits` (>= 32). Rejects beta <= 1.
CReal eval_beta(const BetaValue& beta, Bits bits);

/// Exact rational value of a decimal literal like "-12.5e3" or "0.7".
Rational parse_decimal(const std::string& literal);
/// Exact rational from "p/q", an integer, or a decimal literal.
Rational parse_rational(const std::string& text);

/// Enclosure of log(value) for a positive big integer.
CReal log_of(const BigInt& value, Bits bits);

}  // namespace markovforge
