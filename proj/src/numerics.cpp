#include "markovforge/numerics.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace markovforge {

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(Bits bits) {
    mpfr_init2(value_, bits);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, other.bits());
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.bits());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    if (this != &other) mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::exact_decimal() const {
    if (mpfr_zero_p(value_)) return "0";
    if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
    if (mpfr_nan_p(value_)) return "nan";
    mpfr_exp_t exponent = 0;
    const size_t digits = mpfr_get_str_ndigits(10, bits());
    char* raw = mpfr_get_str(nullptr, &exponent, 10, digits, value_, MPFR_RNDN);
    std::string mantissa(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (mantissa.front() == '-') {
        sign = "-";
        mantissa.erase(0, 1);
    }
    while (mantissa.size() > 1 && mantissa.back() == '0') mantissa.pop_back();
    std::ostringstream out;
    out << sign << mantissa.front();
    if (mantissa.size() > 1) out << '.' << mantissa.substr(1);
    out << 'e' << (static_cast<long>(exponent) - 1);
    return out.str();
}

BigFloat BigFloat::parse_exact(const std::string& text, Bits bits) {
    BigFloat result(bits);
    if (mpfr_set_str(result.get(), text.c_str(), 10, MPFR_RNDN) != 0)
        throw FormatError("not a decimal number: '" + text + "'");
    return result;
}

// ---------------------------------------------------------------- CReal

namespace {

Bits max_bits(const CReal& a, const CReal& b) { return std::max(a.precision_bits(), b.precision_bits()); }

std::string format_bound(const BigFloat& x, int digits, mpfr_rnd_t rnd) {
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*R*e", std::max(digits - 1, 0), rnd, x.get());
    std::string text(raw);
    mpfr_free_str(raw);
    return text;
}

}  // namespace

CReal::CReal() : lo_(64), hi_(64) {}

CReal::CReal(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

CReal CReal::from_integer(const BigInt& value, Bits bits) {
    const Bits needed = static_cast<Bits>(mpz_sizeinbase(value.get_mpz_t(), 2));
    const Bits prec = std::max(bits, needed);
    BigFloat lo(prec), hi(prec);
    mpfr_set_z(lo.get(), value.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi.get(), value.get_mpz_t(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

CReal CReal::from_integer(long value, Bits bits) { return from_integer(BigInt(value), bits); }

CReal CReal::from_rational(const Rational& value, Bits bits) {
    if (value.get_den() == 1) return from_integer(value.get_num(), bits);
    BigFloat lo(bits), hi(bits);
    mpfr_set_q(lo.get(), value.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.get(), value.get_mpq_t(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

CReal CReal::from_bounds(BigFloat lo, BigFloat hi) {
    if (mpfr_nan_p(lo.get()) || mpfr_nan_p(hi.get()) || mpfr_greater_p(lo.get(), hi.get()))
        throw std::invalid_argument("interval bounds out of order");
    return CReal(std::move(lo), std::move(hi));
}

CReal CReal::hull(const CReal& a, const CReal& b) {
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_min(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

bool CReal::contains(const Rational& q) const {
    return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
}

bool CReal::contains(const CReal& inner) const {
    return mpfr_lessequal_p(lo_.get(), inner.lo_.get()) && mpfr_lessequal_p(inner.hi_.get(), hi_.get());
}

bool CReal::overlaps(const CReal& other) const {
    return mpfr_lessequal_p(lo_.get(), other.hi_.get()) && mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

CReal CReal::width() const {
    BigFloat w(precision_bits());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return CReal(w, w);
}

CReal CReal::rounded(Bits bits) const {
    BigFloat lo(bits), hi(bits);
    mpfr_set(lo.get(), lo_.get(), MPFR_RNDD);
    mpfr_set(hi.get(), hi_.get(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

BigFloat CReal::midpoint() const {
    BigFloat mid(precision_bits() + 1);
    mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    return mid;
}

std::string CReal::lo_string(int digits) const { return format_bound(lo_, digits, MPFR_RNDD); }
std::string CReal::hi_string(int digits) const { return format_bound(hi_, digits, MPFR_RNDU); }

std::string CReal::to_string(int digits) const { return "[" + lo_string(digits) + ", " + hi_string(digits) + "]"; }

CReal operator+(const CReal& a, const CReal& b) {
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

CReal operator-(const CReal& a, const CReal& b) {
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

CReal operator-(const CReal& a) {
    BigFloat lo(a.hi_.bits()), hi(a.lo_.bits());
    mpfr_neg(lo.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(hi.get(), a.lo_.get(), MPFR_RNDU);
    return CReal(std::move(lo), std::move(hi));
}

CReal operator*(const CReal& a, const CReal& b) {
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec);
    if (mpfr_sgn(a.lo_.get()) >= 0 && mpfr_sgn(b.lo_.get()) >= 0) {
        mpfr_mul(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_mul(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return CReal(std::move(lo), std::move(hi));
    }
    const std::array<mpfr_srcptr, 2> xs{a.lo_.get(), a.hi_.get()};
    const std::array<mpfr_srcptr, 2> ys{b.lo_.get(), b.hi_.get()};
    BigFloat tmp(prec);
    bool first = true;
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_mul(tmp.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(tmp.get(), lo.get())) mpfr_set(lo.get(), tmp.get(), MPFR_RNDD);
            mpfr_mul(tmp.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(tmp.get(), hi.get())) mpfr_set(hi.get(), tmp.get(), MPFR_RNDU);
            first = false;
        }
    }
    return CReal(std::move(lo), std::move(hi));
}

CReal operator/(const CReal& a, const CReal& b) {
    if (mpfr_sgn(b.lo_.get()) <= 0 && mpfr_sgn(b.hi_.get()) >= 0)
        throw std::domain_error("interval division by an enclosure containing zero");
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec), tmp(prec);
    const std::array<mpfr_srcptr, 2> xs{a.lo_.get(), a.hi_.get()};
    const std::array<mpfr_srcptr, 2> ys{b.lo_.get(), b.hi_.get()};
    bool first = true;
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_div(tmp.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(tmp.get(), lo.get())) mpfr_set(lo.get(), tmp.get(), MPFR_RNDD);
            mpfr_div(tmp.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(tmp.get(), hi.get())) mpfr_set(hi.get(), tmp.get(), MPFR_RNDU);
            first = false;
        }
    }
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal pow(const CReal& base, unsigned long exponent) {
    const Bits prec = base.precision_bits();
    if (exponent == 0) return CReal::from_integer(1L, prec);
    BigFloat lo(prec), hi(prec);
    const bool even = exponent % 2 == 0;
    if (mpfr_sgn(base.lo().get()) >= 0) {
        mpfr_pow_ui(lo.get(), base.lo().get(), exponent, MPFR_RNDD);
        mpfr_pow_ui(hi.get(), base.hi().get(), exponent, MPFR_RNDU);
    } else if (mpfr_sgn(base.hi().get()) <= 0) {
        const CReal magnitude = pow(-base, exponent);
        return even ? magnitude : -magnitude;
    } else if (even) {
        BigFloat a(prec), b(prec);
        mpfr_pow_ui(a.get(), base.lo().get(), exponent, MPFR_RNDU);
        mpfr_pow_ui(b.get(), base.hi().get(), exponent, MPFR_RNDU);
        mpfr_max(hi.get(), a.get(), b.get(), MPFR_RNDU);
    } else {
        mpfr_pow_ui(lo.get(), base.lo().get(), exponent, MPFR_RNDD);
        mpfr_pow_ui(hi.get(), base.hi().get(), exponent, MPFR_RNDU);
    }
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal exp(const CReal& x) {
    const Bits prec = x.precision_bits();
    BigFloat lo(prec), hi(prec);
    mpfr_exp(lo.get(), x.lo().get(), MPFR_RNDD);
    mpfr_exp(hi.get(), x.hi().get(), MPFR_RNDU);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal log(const CReal& x) {
    if (mpfr_sgn(x.lo().get()) <= 0) throw std::domain_error("log of an enclosure not certifiably positive");
    const Bits prec = x.precision_bits();
    BigFloat lo(prec), hi(prec);
    mpfr_log(lo.get(), x.lo().get(), MPFR_RNDD);
    mpfr_log(hi.get(), x.hi().get(), MPFR_RNDU);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal sqrt(const CReal& x) {
    if (mpfr_sgn(x.lo().get()) < 0) throw std::domain_error("sqrt of an enclosure reaching below zero");
    const Bits prec = x.precision_bits();
    BigFloat lo(prec), hi(prec);
    mpfr_sqrt(lo.get(), x.lo().get(), MPFR_RNDD);
    mpfr_sqrt(hi.get(), x.hi().get(), MPFR_RNDU);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal intersect(const CReal& a, const CReal& b) {
    if (!a.overlaps(b)) throw std::logic_error("disjoint enclosures of the same quantity");
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_max(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_min(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal minimum(const CReal& a, const CReal& b) {
    const Bits prec = max_bits(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_min(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

bool certainly_less(const CReal& a, const CReal& b) { return mpfr_less_p(a.hi().get(), b.lo().get()) != 0; }

bool certainly_less_equal(const CReal& a, const CReal& b) {
    return mpfr_lessequal_p(a.hi().get(), b.lo().get()) != 0;
}

bool certainly_less(const CReal& a, const Rational& b) { return mpfr_cmp_q(a.hi().get(), b.get_mpq_t()) < 0; }

bool certainly_greater(const CReal& a, const Rational& b) { return mpfr_cmp_q(a.lo().get(), b.get_mpq_t()) > 0; }

// ---------------------------------------------------------------- floors

std::vector<Bits> PrecisionPolicy::schedule() const {
    std::vector<Bits> steps;
    for (Bits bits = start; bits <= max; bits *= 2) steps.push_back(bits);
    if (steps.empty()) steps.push_back(start);
    return steps;
}

std::optional<BigInt> decided_floor(const CReal& x) {
    BigInt lo, hi;
    mpfr_get_z(lo.get_mpz_t(), x.lo().get(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), x.hi().get(), MPFR_RNDD);
    if (lo != hi) return std::nullopt;
    return lo;
}

BigInt certified_floor(const CReal& x) {
    if (auto m = decided_floor(x)) return *m;
    throw FloorUndecidable("enclosure " + x.to_string(20) + " straddles an integer");
}

BigInt certified_floor(const std::function<CReal(Bits)>& evaluate, const PrecisionPolicy& policy) {
    std::string last;
    for (const Bits bits : policy.schedule()) {
        const CReal x = evaluate(bits);
        if (auto m = decided_floor(x)) return *m;
        last = x.to_string(20);
    }
    throw FloorUndecidable("floor still undecided at " + std::to_string(policy.max) + " bits: " + last);
}

// ---------------------------------------------------------------- tails

namespace {

// Closed forms of sum_{n >= n0} w(n) x^n at an exact point x in [0, 1).
CReal tail_at_point(const CReal& x, unsigned long n0, TailWeight weight) {
    const Bits prec = x.precision_bits();
    const CReal one = CReal::from_integer(1L, prec);
    const CReal lead = pow(x, n0);
    const CReal gap = one - x;
    const BigInt m(n0);
    switch (weight) {
        case TailWeight::One:
            return lead / gap;
        case TailWeight::N: {
            const CReal numer = CReal::from_integer(m, prec) - CReal::from_integer(BigInt(m - 1), prec) * x;
            return lead * numer / (gap * gap);
        }
        case TailWeight::NSquared: {
            const BigInt c0 = m * m;
            const BigInt c1 = 2 * m * m - 2 * m - 1;
            const BigInt c2 = (m - 1) * (m - 1);
            const CReal numer = CReal::from_integer(c0, prec) - CReal::from_integer(c1, prec) * x +
                                CReal::from_integer(c2, prec) * x * x;
            return lead * numer / (gap * gap * gap);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

CReal geometric_tail(const CReal& ratio, unsigned long first_exponent, TailWeight weight) {
    if (mpfr_sgn(ratio.lo().get()) < 0) throw std::invalid_argument("geometric_tail needs a nonnegative ratio");
    if (mpfr_cmp_ui(ratio.hi().get(), 1) >= 0)
        throw DivergentTail("ratio " + ratio.to_string(20) + " is not certifiably below 1");
    // Every term is increasing in the ratio, so the sum is too.
    const Bits prec = ratio.precision_bits();
    const CReal at_lo = tail_at_point(CReal::from_bounds(ratio.lo(), ratio.lo()), first_exponent, weight);
    const CReal at_hi = tail_at_point(CReal::from_bounds(ratio.hi(), ratio.hi()), first_exponent, weight);
    BigFloat lo(prec), hi(prec);
    mpfr_set(lo.get(), at_lo.lo().get(), MPFR_RNDD);
    mpfr_set(hi.get(), at_hi.hi().get(), MPFR_RNDU);
    if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

// ---------------------------------------------------------------- parsing

Rational parse_decimal(const std::string& literal) {
    size_t pos = 0;
    const std::string& s = literal;
    bool negative = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
    std::string digits;
    long scale = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; pos < s.size(); ++pos) {
        const char ch = s[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            any_digit = true;
            if (seen_point) --scale;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw FormatError("not a decimal literal: '" + literal + "'");
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        size_t used = 0;
        long exponent = 0;
        try {
            exponent = std::stol(s.substr(pos), &used);
        } catch (const std::exception&) {
            throw FormatError("bad exponent in '" + literal + "'");
        }
        pos += used;
        scale += exponent;
    }
    if (pos != s.size()) throw FormatError("trailing characters in '" + literal + "'");
    Rational value{BigInt(digits)};
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale < 0)
        value /= Rational(power);
    else
        value *= Rational(power);
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_decimal(text);
    const Rational num = parse_decimal(text.substr(0, slash));
    const Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in '" + text + "'");
    Rational value = num / den;
    value.canonicalize();
    return value;
}

// ---------------------------------------------------------------- beta

BetaValue::BetaValue(Kind kind, Rational operand, std::string literal)
    : kind_(kind), operand_(std::move(operand)), literal_(std::move(literal)) {
    operand_.canonicalize();
}

BetaValue BetaValue::rational(const Rational& value) { return BetaValue(Kind::Rational, value, ""); }

BetaValue BetaValue::exp_of_rational(const Rational& exponent) { return BetaValue(Kind::ExpOfRational, exponent, ""); }

BetaValue BetaValue::decimal(const std::string& literal) {
    return BetaValue(Kind::Decimal, parse_decimal(literal), literal);
}

BetaValue BetaValue::parse(const std::string& text) {
    auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string t = strip(text);
    if (t.rfind("exp(", 0) == 0 && t.back() == ')') return exp_of_rational(parse_rational(t.substr(4, t.size() - 5)));
    if (t.rfind("e^", 0) == 0) return exp_of_rational(parse_rational(t.substr(2)));
    if (t.find('/') != std::string::npos) return rational(parse_rational(t));
    if (t.find_first_of(".eE") != std::string::npos) return decimal(t);
    return rational(parse_rational(t));
}

std::optional<Rational> BetaValue::exact_value() const {
    if (kind_ == Kind::ExpOfRational) {
        if (operand_ == 0) return Rational(1);
        return std::nullopt;
    }
    return operand_;
}

bool BetaValue::is_integer() const {
    const auto v = exact_value();
    return v && v->get_den() == 1;
}

std::string BetaValue::descriptor() const {
    switch (kind_) {
        case Kind::Rational:
            return operand_.get_str();
        case Kind::ExpOfRational:
            return "exp(" + operand_.get_str() + ")";
        case Kind::Decimal:
            return literal_;
    }
    throw std::logic_error("unreachable");
}

CReal eval_beta(const BetaValue& beta, Bits bits) {
    if (bits < 32) throw std::invalid_argument("eval_beta needs at least 32 bits");
    if (const auto exact = beta.exact_value()) {
        if (*exact <= 1) throw NotGreaterThanOne("beta = " + exact->get_str() + " is not greater than 1");
        return CReal::from_rational(*exact, bits);
    }
    if (beta.operand() <= 0)
        throw NotGreaterThanOne("beta = exp(" + beta.operand().get_str() + ") is not greater than 1");
    CReal value = exp(CReal::from_rational(beta.operand(), bits + 16)).rounded(bits);
    if (mpfr_cmp_ui(value.lo().get(), 1) <= 0)
        throw NotGreaterThanOne("enclosure " + value.to_string(20) + " of beta is not certifiably above 1");
    return value;
}

CReal log_of(const BigInt& value, Bits bits) {
    if (value <= 0) throw std::domain_error("log of a nonpositive integer");
    return log(CReal::from_integer(value, bits).rounded(bits));
}

}  // namespace markovforge
