#include "markovforge/spectrum.hpp"

#include <cmath>

namespace markovforge {

namespace {

constexpr Bits kGuard = 64;

// Rough log2(beta) used only to size working precisions.
double log2_estimate(const BetaValue& beta) {
    const CReal b = eval_beta(beta, 64);
    return std::log2(mpfr_get_d(b.lo().get(), MPFR_RNDD));
}

Bits bits_for(double magnitude_bits) { return static_cast<Bits>(std::ceil(std::max(0.0, magnitude_bits))); }

bool is_square(std::size_t n) {
    const auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    for (std::size_t s = (r > 0 ? r - 1 : 0); s <= r + 1; ++s)
        if (s * s == n) return true;
    return false;
}

std::size_t ceil_sqrt(std::size_t n) {
    std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) ++r;
    while (r > 0 && (r - 1) * (r - 1) >= n) --r;
    return r;
}

std::size_t floor_sqrt(std::size_t n) {
    std::size_t r = ceil_sqrt(n);
    while (r * r > n) --r;
    return r;
}

CReal one(Bits bits) { return CReal::from_integer(1L, bits); }

// Upper ends are all that matter for these bounds; clamp the factor x*beta
// to its true range [0, 1].
CReal clamp_unit(const CReal& u) {
    if (mpfr_cmp_ui(u.hi().get(), 1) <= 0) return u;
    BigFloat hi(u.precision_bits());
    mpfr_set_ui(hi.get(), 1, MPFR_RNDU);
    BigFloat lo = u.lo();
    if (mpfr_cmp_ui(lo.get(), 1) > 0) mpfr_set_ui(lo.get(), 1, MPFR_RNDD);
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

LoopSpectrum build_at(const BetaValue& beta, std::size_t n_max, Bits target_bits) {
    const double lb = log2_estimate(beta);
    // Absolute accuracy needed for delta so that n_max greedy digits survive
    // the beta^n error amplification.
    const Bits absolute = target_bits + kGuard + bits_for(static_cast<double>(n_max) * lb);
    const Bits working = absolute + kGuard;
    const bool integer_beta = beta.is_integer();

    const std::size_t m_sq = floor_sqrt(n_max);
    std::size_t m_hi = std::max<std::size_t>(m_sq, 2);
    while (static_cast<double>(m_hi * m_hi) * lb < static_cast<double>(absolute + 8)) ++m_hi;

    const CReal b_w = eval_beta(beta, working);
    const CReal c_w = pow(b_w - one(working), 2);
    const CReal inv_beta = one(working) / b_w;

    // b(m^2) = floor(c beta^{m^2 - m}); frac_m is the discarded part.
    std::vector<BigInt> b_square(m_hi + 1);
    CReal delta = CReal::from_integer(0L, working);
    for (std::size_t m = 2; m <= m_hi; ++m) {
        const unsigned long e = m * m - m;
        const Bits wb = working + bits_for(static_cast<double>(e) * lb) + 16;
        const CReal bm = eval_beta(beta, wb);
        const CReal x = pow(bm - one(wb), 2) * pow(bm, e);
        b_square[m] = certified_floor(x);
        if (!integer_beta) {
            const CReal frac = x - CReal::from_integer(b_square[m], wb);
            delta = delta + (frac * pow(inv_beta, m * m)).rounded(working);
        }
    }
    // Past m_hi each frac_m * beta^{-m^2} is in [0, beta^{-m^2}).
    CReal frac_tail = CReal::from_integer(0L, working);
    if (!integer_beta) {
        const CReal bound = geometric_tail(inv_beta, (m_hi + 1) * (m_hi + 1), TailWeight::One);
        frac_tail = CReal::hull(frac_tail, CReal::from_bounds(bound.hi(), bound.hi()));
    }
    delta = delta + frac_tail;
    if (mpfr_cmp_ui(delta.hi().get(), 1) >= 0)
        throw PrecisionExhausted("delta enclosure " + delta.to_string(20) + " does not separate from 1");

    const CReal beta_sq = b_w * b_w;
    const BigInt k = certified_floor(beta_sq * delta);
    const CReal x = delta - CReal::from_integer(k, working) / beta_sq;
    const BetaExpansion expansion = beta_expansion(x, b_w, n_max);
    if (expansion.digits[1] != 0)
        throw std::logic_error("greedy expansion produced d(1) != 0; precision bookkeeping is broken");

    LoopSpectrum s;
    s.a.assign(n_max + 1, BigInt(0));
    s.trace.b.assign(n_max + 1, BigInt(0));
    s.trace.d = expansion.digits;
    s.trace.d_prime = expansion.digits;
    s.trace.d_prime[1] = 0;
    if (n_max >= 2) s.trace.d_prime[2] += k;
    s.trace.b[1] = 1;
    for (std::size_t m = 2; m <= m_sq; ++m) s.trace.b[m * m] = b_square[m];
    s.a[1] = 1;
    for (std::size_t n = 2; n <= n_max; ++n) s.a[n] = s.trace.b[n] + s.trace.d_prime[n];

    // Tail of sum a(n) beta^-n past n_max: square terms plus the digit remainder.
    CReal square_tail = CReal::from_integer(0L, working);
    for (std::size_t m = m_sq + 1; m <= m_hi; ++m)
        square_tail = square_tail + (CReal::from_integer(b_square[m], working) * pow(inv_beta, m * m)).rounded(working);
    const CReal far = c_w * geometric_tail(inv_beta, m_hi + 1, TailWeight::One) - frac_tail;
    square_tail = square_tail + far;
    const CReal digit_tail = expansion.remainder * pow(inv_beta, n_max);

    // Single precision per enclosure, so files round-trip bit-exactly.
    auto normal = [](const CReal& x) { return x.rounded(x.precision_bits()); };
    s.meta.model = GrowthModel::Constructed;
    s.meta.beta = beta;
    s.meta.beta_value = normal(b_w);
    s.meta.c = normal(c_w);
    s.meta.delta = normal(delta);
    s.meta.k = k;
    s.meta.M = normal(b_w + CReal::from_integer(k, working));
    s.meta.L = normal(inv_beta);
    s.meta.tail_mass = normal(square_tail + digit_tail);
    s.meta.precision_bits = target_bits;
    return s;
}

}  // namespace

std::string to_string(GrowthModel model) {
    switch (model) {
        case GrowthModel::Constructed:
            return "constructed";
        case GrowthModel::Finite:
            return "finite";
        case GrowthModel::Unknown:
            return "unknown";
    }
    throw std::logic_error("unreachable");
}

GrowthModel growth_model_from_string(const std::string& text) {
    if (text == "constructed") return GrowthModel::Constructed;
    if (text == "finite") return GrowthModel::Finite;
    if (text == "unknown") return GrowthModel::Unknown;
    throw FormatError("unknown growth model '" + text + "'");
}

const BigInt& LoopSpectrum::at(std::size_t n) const {
    static const BigInt zero(0);
    if (n == 0) return zero;
    if (n <= n_max()) return a[n];
    if (meta.model == GrowthModel::Finite) return zero;
    throw std::out_of_range("a(" + std::to_string(n) + ") lies past the truncation N_max = " +
                            std::to_string(n_max()));
}

LoopSpectrum LoopSpectrum::from_counts(const std::vector<BigInt>& counts, GrowthModel model) {
    if (model == GrowthModel::Constructed)
        throw std::invalid_argument("constructed spectra come from build_spectrum");
    LoopSpectrum s;
    s.a.reserve(counts.size() + 1);
    s.a.emplace_back(0);
    for (const auto& value : counts) {
        if (value < 0) throw std::invalid_argument("loop counts must be nonnegative");
        s.a.push_back(value);
    }
    s.meta.model = model;
    return s;
}

bool operator==(const LoopSpectrum& x, const LoopSpectrum& y) {
    const auto& p = x.meta;
    const auto& q = y.meta;
    return x.a == y.a && p.model == q.model && p.beta == q.beta && p.beta_value == q.beta_value && p.c == q.c &&
           p.delta == q.delta && p.k == q.k && p.M == q.M && p.L == q.L && p.tail_mass == q.tail_mass &&
           p.deleted_loop == q.deleted_loop && p.precision_bits == q.precision_bits && x.trace.b == y.trace.b &&
           x.trace.d == y.trace.d && x.trace.d_prime == y.trace.d_prime;
}

BetaExpansion beta_expansion(const CReal& x, const CReal& beta, std::size_t num_digits) {
    // A lower end slightly below 0 may still enclose a true zero; the first
    // digit's floor decides.
    if (mpfr_cmp_si(x.lo().get(), -1) <= 0 || mpfr_cmp_ui(x.hi().get(), 1) >= 0)
        throw std::invalid_argument("beta_expansion needs x in [0, 1), got " + x.to_string(20));
    const BigInt max_digit = certified_floor(beta.rounded(64));
    BetaExpansion out;
    out.digits.assign(num_digits + 1, BigInt(0));
    out.bits_used = std::max(x.precision_bits(), beta.precision_bits());
    CReal r = x;
    for (std::size_t n = 1; n <= num_digits; ++n) {
        const CReal y = beta * r;
        const BigInt digit = certified_floor(y);
        if (digit < 0 || digit > max_digit)
            throw std::logic_error("greedy digit " + digit.get_str() + " out of range at n = " + std::to_string(n));
        out.digits[n] = digit;
        r = y - CReal::from_integer(digit, y.precision_bits());
    }
    out.remainder = r;
    return out;
}

BetaExpansion beta_expansion(const std::function<CReal(Bits)>& x, const BetaValue& beta, std::size_t num_digits,
                             const PrecisionPolicy& policy) {
    const double lb = log2_estimate(beta);
    std::string last;
    for (const Bits bits : policy.schedule()) {
        const Bits working = bits + bits_for(static_cast<double>(num_digits) * lb) + kGuard;
        try {
            return beta_expansion(x(working), eval_beta(beta, working), num_digits);
        } catch (const FloorUndecidable& e) {
            last = e.what();
        }
    }
    throw FloorUndecidable("beta expansion undecided at " + std::to_string(policy.max) + " bits: " + last);
}

LoopSpectrum build_spectrum(const BetaValue& beta, std::size_t n_max, const PrecisionPolicy& policy) {
    if (n_max < 4) throw std::invalid_argument("build_spectrum needs N_max >= 4");
    eval_beta(beta, 64);  // rejects beta <= 1 up front
    std::string last;
    for (const Bits bits : policy.schedule()) {
        try {
            return build_at(beta, n_max, bits);
        } catch (const FloorUndecidable& e) {
            last = e.what();
        }
    }
    throw FloorUndecidable("construction undecided at " + std::to_string(policy.max) + " bits: " + last);
}

LoopSpectrum delete_loop(const LoopSpectrum& spectrum, std::optional<std::size_t> n0) {
    if (spectrum.meta.deleted_loop) throw std::invalid_argument("spectrum already has a deleted loop");
    std::size_t chosen = 0;
    if (n0) {
        if (*n0 < 2 || *n0 > spectrum.n_max() || spectrum.a[*n0] < 1)
            throw NoDeletableLoop("no loop of length " + std::to_string(*n0) + " to delete");
        chosen = *n0;
    } else {
        for (std::size_t n = 2; n <= spectrum.n_max(); ++n) {
            if (spectrum.a[n] >= 1) {
                chosen = n;
                break;
            }
        }
        if (chosen == 0) throw NoDeletableLoop("no loop of length >= 2 within N_max");
    }
    LoopSpectrum out = spectrum;
    out.a[chosen] -= 1;
    out.meta.deleted_loop = chosen;
    return out;
}

CReal partial_sum(const LoopSpectrum& spectrum, const CReal& x, TailWeight weight) {
    if (mpfr_sgn(x.lo().get()) < 0) throw std::invalid_argument("partial_sum needs x >= 0");
    // Nonnegative coefficients: Horner at each endpoint with matching rounding.
    const Bits prec = x.precision_bits();
    BigFloat lo(prec), hi(prec), coeff(prec);
    for (std::size_t n = spectrum.n_max(); n >= 1; --n) {
        BigInt c = spectrum.a[n];
        if (weight == TailWeight::N) c *= static_cast<unsigned long>(n);
        if (weight == TailWeight::NSquared) c *= static_cast<unsigned long>(n * n);
        mpfr_set_z(coeff.get(), c.get_mpz_t(), MPFR_RNDD);
        mpfr_add(lo.get(), lo.get(), coeff.get(), MPFR_RNDD);
        mpfr_mul(lo.get(), lo.get(), x.lo().get(), MPFR_RNDD);
        mpfr_set_z(coeff.get(), c.get_mpz_t(), MPFR_RNDU);
        mpfr_add(hi.get(), hi.get(), coeff.get(), MPFR_RNDU);
        mpfr_mul(hi.get(), hi.get(), x.hi().get(), MPFR_RNDU);
    }
    return CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal spectrum_tail_bounds(const LoopSpectrum& spectrum, std::size_t from_n, TailWeight weight) {
    const auto& meta = spectrum.meta;
    if (meta.model != GrowthModel::Constructed) throw TailUnavailable("tail bounds need a constructed spectrum");
    if (weight == TailWeight::NSquared) throw std::invalid_argument("tail weight must be 1 or n");
    from_n = std::max<std::size_t>(from_n, 1);
    const std::size_t m0 = std::max<std::size_t>(2, ceil_sqrt(from_n));
    const TailWeight square_weight = weight == TailWeight::N ? TailWeight::NSquared : TailWeight::One;
    return meta.M * geometric_tail(meta.L, from_n, weight) + meta.c * geometric_tail(meta.L, m0, square_weight);
}

CReal spectrum_tail_bound_at(const LoopSpectrum& spectrum, std::size_t from_n, TailWeight weight, const CReal& x) {
    const auto& meta = spectrum.meta;
    if (meta.model != GrowthModel::Constructed) throw TailUnavailable("tail bounds need a constructed spectrum");
    if (weight == TailWeight::NSquared) throw std::invalid_argument("tail weight must be 1 or n");
    if (mpfr_sgn(x.lo().get()) < 0 || !certainly_less_equal(x, meta.L))
        throw TailUnavailable("evaluation point " + x.to_string(20) + " is not certifiably within [0, L]");
    from_n = std::max<std::size_t>(from_n, 1);
    const Bits prec = std::max(x.precision_bits(), meta.L.precision_bits());
    const CReal m_part = meta.M * geometric_tail(x, from_n, weight);

    // a(m^2) x^{m^2} <= M x^{m^2} + c beta^{-m} (x beta)^{m^2}; the M share is
    // already counted above. Sum the c share explicitly while it matters,
    // then bound the rest geometrically using (x beta)^{m^2} <= u^{m (m_end+1)}.
    const std::size_t m0 = std::max<std::size_t>(2, ceil_sqrt(from_n));
    const CReal u = clamp_unit(x * meta.beta_value);
    BigFloat cutoff(prec);
    mpfr_set_ui_2exp(cutoff.get(), 1, -static_cast<long>(prec), MPFR_RNDN);
    CReal c_part = CReal::from_integer(0L, prec);
    std::size_t m = m0;
    for (; m < m0 + 2048; ++m) {
        CReal term = meta.c * pow(meta.L, m) * pow(u, m * m);
        if (weight == TailWeight::N) term = term * CReal::from_integer(static_cast<long>(m * m), prec);
        c_part = c_part + term;
        if (mpfr_less_p(term.hi().get(), cutoff.get())) {
            ++m;
            break;
        }
    }
    const CReal q = clamp_unit(pow(u, m) * meta.L);
    const TailWeight square_weight = weight == TailWeight::N ? TailWeight::NSquared : TailWeight::One;
    c_part = c_part + meta.c * geometric_tail(q, m, square_weight);
    const CReal bound = m_part + c_part;
    return CReal::from_bounds(BigFloat(prec), bound.hi());
}

std::vector<PropertyCheck> check_construction(const LoopSpectrum& spectrum) {
    const auto& meta = spectrum.meta;
    if (meta.model != GrowthModel::Constructed || !meta.beta)
        throw std::invalid_argument("check_construction needs a constructed spectrum");
    std::vector<PropertyCheck> checks;
    const std::size_t n_max = spectrum.n_max();

    auto parent = [&](std::size_t n) {
        BigInt v = spectrum.a[n];
        if (meta.deleted_loop && *meta.deleted_loop == n) v += 1;
        return v;
    };

    checks.push_back({"a(1) = 1", spectrum.a[1] == 1, "a(1) = " + spectrum.a[1].get_str()});

    const Bits prec = meta.L.precision_bits();
    const CReal total = partial_sum(spectrum, meta.L) + meta.tail_mass;
    CReal target = CReal::from_integer(1L, prec);
    std::string target_name = "1";
    if (meta.deleted_loop) {
        target = target - pow(meta.L, *meta.deleted_loop);
        target_name = "1 - L^" + std::to_string(*meta.deleted_loop);
    }
    checks.push_back({"sum a(n) beta^-n encloses " + target_name, total.overlaps(target),
                      "sum in " + total.to_string(40) + ", width " + total.width().hi_string(3)});

    const double lb = log2_estimate(*meta.beta);
    for (std::size_t m = 2; m * m <= n_max; ++m) {
        const unsigned long e = m * m - m;
        const Bits wb = prec + bits_for(static_cast<double>(e) * lb) + 16;
        const CReal bm = eval_beta(*meta.beta, wb);
        const CReal lower = pow(bm - one(wb), 2) * pow(bm, e);
        const CReal upper = lower + meta.M;
        const CReal am = CReal::from_integer(parent(m * m), wb);
        const bool ok = certainly_less_equal(lower, am) && certainly_less_equal(am, upper);
        checks.push_back({"c beta^(n^2-n) <= a(n^2) <= c beta^(n^2-n) + M at n = " + std::to_string(m), ok,
                          "a(" + std::to_string(m * m) + ") = " + am.lo_string(30) + ", c beta^(n^2-n) in " +
                              lower.to_string(30)});
    }

    bool bounded = true;
    std::string worst;
    for (std::size_t n = 2; n <= n_max; ++n) {
        if (is_square(n)) continue;
        const CReal an = CReal::from_integer(parent(n), prec);
        if (!certainly_less_equal(an, meta.M)) {
            bounded = false;
            worst += " a(" + std::to_string(n) + ")=" + parent(n).get_str();
        }
    }
    checks.push_back({"0 <= a(n) <= M off squares", bounded, bounded ? "M in " + meta.M.to_string(20) : worst});
    return checks;
}

}  // namespace markovforge
