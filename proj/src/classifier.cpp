#include "markovforge/classifier.hpp"

#include <algorithm>

namespace markovforge {

namespace {

CReal point(const BigFloat& x, Bits bits) {
    BigFloat copy(std::max(bits, x.bits()));
    mpfr_set(copy.get(), x.get(), MPFR_RNDN);  // exact: precision only grows
    return CReal::from_bounds(copy, copy);
}

bool is_exactly_one(const CReal& x) { return x.is_exact() && mpfr_cmp_ui(x.lo().get(), 1) == 0; }

bool has_any_loop(const LoopSpectrum& s) {
    for (std::size_t n = 1; n <= s.n_max(); ++n)
        if (s.a[n] > 0) return true;
    return false;
}

struct RootSearch {
    CReal root;
    bool stalled = false;
};

// Bisection on the certified sign of F(x) - 1 over [lo, hi], where
// F(lo) < 1 < F(hi) has already been certified by the caller.
RootSearch bisect_root(const LoopSpectrum& s, BigFloat lo, BigFloat hi, const PrecisionPolicy& policy) {
    const Bits prec = policy.start;
    BigFloat target(prec);
    mpfr_set_ui_2exp(target.get(), 1, -static_cast<long>(prec / 2), MPFR_RNDN);
    BigFloat gap(2 * prec);
    RootSearch out;
    for (int iteration = 0; iteration < 4 * static_cast<int>(prec); ++iteration) {
        mpfr_sub(gap.get(), hi.get(), lo.get(), MPFR_RNDU);
        if (mpfr_lessequal_p(gap.get(), target.get())) break;
        BigFloat mid(2 * prec + 2);
        mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
        mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
        bool decided = false;
        for (const Bits bits : policy.schedule()) {
            const CReal value = F_eval(s, point(mid, bits));
            if (is_exactly_one(value)) {
                out.root = point(mid, bits);
                return out;
            }
            if (certainly_less(value, Rational(1))) {
                lo = mid;
                decided = true;
            } else if (certainly_greater(value, Rational(1))) {
                hi = mid;
                decided = true;
            }
            if (decided) break;
        }
        if (!decided) {
            out.stalled = true;
            break;
        }
    }
    out.root = CReal::from_bounds(lo, hi);
    return out;
}

CReal root_of_lift(const CReal& x, std::size_t p) {
    if (p == 1) return x;
    return exp(log(x) / CReal::from_integer(static_cast<long>(p), x.precision_bits()));
}

struct RecurrenceAnalysis {
    Verdict verdict = Verdict::Indeterminate;
    Radius L;
    std::optional<CReal> R;
    std::optional<CReal> F_at_L;
    std::optional<CReal> F_at_R;
    std::optional<CReal> mean_return;
    std::vector<std::string> notes;
};

RecurrenceAnalysis analyse(const LoopSpectrum& s, const PrecisionPolicy& policy) {
    RecurrenceAnalysis out;
    out.L = radius_L(s);
    switch (s.meta.model) {
        case GrowthModel::Constructed: {
            const CReal fl = F_at_L(s);
            out.F_at_L = fl;
            if (certainly_less(fl, Rational(1))) {
                // Transient: R = L, and the mean return series converges at L.
                out.verdict = verdict_from_certificates(Comparison::Below, Finiteness::Unknown);
                out.R = s.meta.L;
                out.mean_return = mean_return_at_L(s);
                out.notes.push_back("F(L) < 1 certified; a transient loop system has R = L");
            } else if (certainly_greater(fl, Rational(1))) {
                // R < L: F(R) = 1 with R strictly inside the disc of convergence.
                const BigFloat zero(policy.start);
                const BigFloat top = s.meta.L.lo();
                if (!certainly_greater(F_eval(s, CReal::from_bounds(top, top)), Rational(1)))
                    throw RootNotBracketed("F(L) > 1 but F at the lower end of L is not certifiably above 1");
                const RootSearch search = bisect_root(s, zero, top, policy);
                out.R = search.root;
                if (search.stalled)
                    out.notes.push_back("bisection for R stopped early: tail enclosure of F is wider than the bracket");
                out.F_at_R = F_eval(s, CReal::from_bounds(search.root.hi(), search.root.hi()));
                const CReal at = CReal::from_bounds(search.root.hi(), search.root.hi());
                const CReal partial = partial_sum(s, at, TailWeight::N);
                const CReal tail = spectrum_tail_bound_at(s, s.n_max() + 1, TailWeight::N, at);
                out.mean_return = CReal::from_bounds(partial_sum(s, search.root, TailWeight::N).lo(), (partial + tail).hi());
                out.verdict = verdict_from_certificates(Comparison::Equal, Finiteness::Finite);
                out.notes.push_back("F(L) > 1 certified, so R < L and R solves F(R) = 1");
            } else {
                out.R = s.meta.L;
                out.mean_return = mean_return_at_L(s);
                out.verdict = verdict_from_certificates(Comparison::Equal, Finiteness::Finite);
                out.notes.push_back("F(L) encloses 1 and the mean return series is bounded, so R = L");
            }
            return out;
        }
        case GrowthModel::Finite: {
            if (!has_any_loop(s)) {
                out.notes.push_back("no loops: the root lies on no closed path");
                return out;
            }
            out.R = radius_R(s, policy);
            out.F_at_R = F_eval(s, *out.R);
            out.mean_return = partial_sum(s, *out.R, TailWeight::N);
            out.verdict = verdict_from_certificates(Comparison::Equal, Finiteness::Finite);
            out.notes.push_back("finite loop system: F is a polynomial, L is infinite");
            return out;
        }
        case GrowthModel::Unknown: {
            out.notes.push_back("no growth model past the stored terms; tails are unavailable");
            if (!out.L.infinite()) {
                const CReal& l = *out.L.value;
                out.notes.push_back("Cauchy-Hadamard estimate of L (not certified): " + l.to_string(12));
                const CReal partial = partial_sum(s, l);
                out.notes.push_back("partial sum of F at the estimate (lower bound only): " + partial.lo_string(12));
            }
            return out;
        }
    }
    return out;
}

}  // namespace

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Transient:
            return "Transient";
        case Verdict::NullRecurrent:
            return "NullRecurrent";
        case Verdict::PositiveRecurrent:
            return "PositiveRecurrent";
        case Verdict::Indeterminate:
            return "Indeterminate";
    }
    throw std::logic_error("unreachable");
}

Verdict verdict_from_certificates(Comparison f_at_r, Finiteness mean_return) {
    switch (f_at_r) {
        case Comparison::Below:
            return Verdict::Transient;
        case Comparison::Equal:
            if (mean_return == Finiteness::Finite) return Verdict::PositiveRecurrent;
            if (mean_return == Finiteness::Infinite) return Verdict::NullRecurrent;
            return Verdict::Indeterminate;
        case Comparison::Above:
            // F(R) > 1 is impossible at the radius R itself.
            return Verdict::Indeterminate;
        case Comparison::Unknown:
            return Verdict::Indeterminate;
    }
    return Verdict::Indeterminate;
}

Radius radius_L(const LoopSpectrum& spectrum, bool require_certified) {
    switch (spectrum.meta.model) {
        case GrowthModel::Constructed:
            return Radius{spectrum.meta.L, true};
        case GrowthModel::Finite:
            return Radius{std::nullopt, true};
        case GrowthModel::Unknown:
            break;
    }
    if (require_certified) throw NoGrowthModel("user spectrum has no growth model; L cannot be certified");
    // limsup (1/n) log a(n), read off the upper half of the stored terms.
    const std::size_t n_max = spectrum.n_max();
    std::optional<CReal> best;
    for (std::size_t n = std::max<std::size_t>(1, n_max / 2); n <= n_max; ++n) {
        if (spectrum.a[n] <= 0) continue;
        const CReal rate = log_of(spectrum.a[n], 128) / CReal::from_integer(static_cast<long>(n), 128);
        if (!best || mpfr_greater_p(rate.hi().get(), best->hi().get())) best = rate;
    }
    if (!best) return Radius{std::nullopt, false};
    return Radius{exp(-*best), false};
}

CReal F_eval(const LoopSpectrum& spectrum, const CReal& x) {
    if (mpfr_sgn(x.lo().get()) < 0) throw std::invalid_argument("F_eval needs x >= 0");
    const CReal partial = partial_sum(spectrum, x);
    switch (spectrum.meta.model) {
        case GrowthModel::Finite:
            return partial;
        case GrowthModel::Unknown:
            if (mpfr_zero_p(x.hi().get())) return partial;
            throw TailUnavailable("user spectrum has no tail past N_max = " + std::to_string(spectrum.n_max()));
        case GrowthModel::Constructed:
            break;
    }
    const auto& meta = spectrum.meta;
    if (!certainly_less_equal(x, meta.L))
        throw TailUnavailable("x = " + x.to_string(20) + " is not certifiably <= L; use F_at_L for x = L");
    // The tail is increasing in x, so it never exceeds its value at L.
    const CReal bound = spectrum_tail_bound_at(spectrum, spectrum.n_max() + 1, TailWeight::One, x);
    BigFloat hi = bound.hi();
    if (mpfr_less_p(meta.tail_mass.hi().get(), hi.get())) hi = meta.tail_mass.hi();
    BigFloat lo(hi.bits());
    if (mpfr_greaterequal_p(x.lo().get(), meta.L.hi().get())) lo = meta.tail_mass.lo();
    return partial + CReal::from_bounds(std::move(lo), std::move(hi));
}

CReal F_at_L(const LoopSpectrum& spectrum) {
    if (spectrum.meta.model != GrowthModel::Constructed)
        throw TailUnavailable("F(L) needs a constructed spectrum with a certified tail");
    return partial_sum(spectrum, spectrum.meta.L) + spectrum.meta.tail_mass;
}

CReal mean_return_at_L(const LoopSpectrum& spectrum) {
    if (spectrum.meta.model != GrowthModel::Constructed)
        throw TailUnavailable("mean return at L needs a constructed spectrum");
    const CReal partial = partial_sum(spectrum, spectrum.meta.L, TailWeight::N);
    const CReal tail = spectrum_tail_bounds(spectrum, spectrum.n_max() + 1, TailWeight::N);
    return CReal::from_bounds(partial.lo(), (partial + tail).hi());
}

CReal radius_R(const LoopSpectrum& spectrum, const PrecisionPolicy& policy) {
    switch (spectrum.meta.model) {
        case GrowthModel::Constructed: {
            const auto analysis = analyse(spectrum, policy);
            return *analysis.R;
        }
        case GrowthModel::Finite: {
            if (!has_any_loop(spectrum)) throw EmptyLoopSet("no loops through the root");
            // F is a nonzero polynomial with F(0) = 0; double until F(hi) > 1.
            BigFloat hi(policy.start);
            mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
            for (int i = 0; i < 256; ++i) {
                const CReal value = F_eval(spectrum, point(hi, policy.start));
                if (is_exactly_one(value)) return point(hi, policy.start);
                if (certainly_greater(value, Rational(1))) break;
                mpfr_mul_2ui(hi.get(), hi.get(), 1, MPFR_RNDN);
            }
            return bisect_root(spectrum, BigFloat(policy.start), hi, policy).root;
        }
        case GrowthModel::Unknown:
            break;
    }
    throw NoGrowthModel("R of a user spectrum without a growth model cannot be certified");
}

ClassificationReport classify(const LoopSpectrum& spectrum, const ClassifyOptions& options) {
    const PrecisionPolicy policy{options.precision, std::max<Bits>(options.precision, 4096)};
    const std::size_t p = options.period_lift;
    if (p < 1) throw std::invalid_argument("period_lift must be >= 1");
    RecurrenceAnalysis analysis = analyse(spectrum, policy);

    ClassificationReport report;
    report.verdict = analysis.verdict;
    report.period_lift = p;
    report.F_at_L = analysis.F_at_L;
    report.F_at_R = analysis.F_at_R;
    report.notes = std::move(analysis.notes);
    report.L = analysis.L;
    if (report.L.value) report.L.value = root_of_lift(*report.L.value, p);
    if (analysis.mean_return)
        report.mean_return_bound = *analysis.mean_return * CReal::from_integer(static_cast<long>(p), 64);

    if (analysis.R) {
        const CReal& base_r = *analysis.R;
        report.R = root_of_lift(base_r, p);
        report.entropy = -log(base_r) / CReal::from_integer(static_cast<long>(p), base_r.precision_bits());
        if (report.verdict == Verdict::Transient && !(analysis.L.value && base_r.overlaps(*analysis.L.value)))
            throw std::logic_error("transient verdict with R != L");
        if (report.verdict == Verdict::PositiveRecurrent && analysis.L.value &&
            certainly_less(*analysis.L.value, base_r))
            throw std::logic_error("positive recurrent verdict with R > L");
    }
    if (report.entropy && mpfr_sgn(report.entropy->lo().get()) > 0 && report.verdict != Verdict::Indeterminate)
        report.has_mme = report.verdict == Verdict::PositiveRecurrent;

    if (report.R && report.verdict != Verdict::Indeterminate) {
        std::size_t depth = options.lambda_depth;
        if (depth == 0) depth = spectrum.n_max() * p;
        if (spectrum.meta.model != GrowthModel::Finite) depth = std::min(depth, spectrum.n_max() * p);
        const PathCountTable counts = table_from_spectrum(spectrum, depth, p);
        try {
            report.lambda_estimate = lambda_estimate(counts, *report.R).last;
        } catch (const InsufficientData&) {
        }
    }
    return report;
}

CReal entropy(const LoopSpectrum& spectrum, std::size_t period_lift, const PrecisionPolicy& policy) {
    const CReal r = radius_R(spectrum, policy);
    return -log(r) / CReal::from_integer(static_cast<long>(period_lift), r.precision_bits());
}

CReal entropy(const ExplicitGraph& graph) {
    if (!graph.source_spectrum()) throw std::invalid_argument("graph has no source spectrum");
    return entropy(*graph.source_spectrum(), graph.period_lift());
}

CReal truncation_entropy(const ExplicitGraph& graph) {
    if (!graph.source_spectrum()) throw std::invalid_argument("graph has no source spectrum");
    const auto& source = *graph.source_spectrum();
    std::vector<BigInt> counts;
    for (std::size_t n = 1; n <= graph.truncation(); ++n) counts.push_back(source.at(n));
    return entropy(LoopSpectrum::from_counts(counts, GrowthModel::Finite), graph.period_lift());
}

LambdaEstimate lambda_estimate(const PathCountTable& counts, const CReal& R, std::size_t window) {
    const std::size_t period = support_gcd(counts.p);
    if (period == 0) throw InsufficientData("no positive path counts");
    std::vector<std::size_t> lengths;
    for (std::size_t n = period; n <= counts.depth(); n += period)
        if (counts.p[n] > 0) lengths.push_back(n);
    if (lengths.empty()) throw InsufficientData("no positive path counts");
    if (window == 0) {
        const std::size_t half = counts.depth() / 2;
        window = static_cast<std::size_t>(std::count_if(lengths.begin(), lengths.end(),
                                                        [&](std::size_t n) { return n >= half; }));
        window = std::max<std::size_t>(window, 1);
    }
    window = std::min(window, lengths.size());
    LambdaEstimate out;
    const Bits bits = R.precision_bits();
    for (std::size_t j = lengths.size() - window; j < lengths.size(); ++j) {
        const std::size_t n = lengths[j];
        out.window.emplace_back(n, CReal::from_integer(counts.p[n], bits) * pow(R, n));
    }
    out.last = out.window.back().second;
    return out;
}

}  // namespace markovforge
