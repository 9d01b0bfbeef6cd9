#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "markovforge/numerics.hpp"

namespace markovforge {

/// How a spectrum behaves past its stored terms.
enum class GrowthModel {
    /// Built from beta; tails are bounded analytically.
    Constructed,
    /// a(n) = 0 for every n beyond the stored terms (a finite loop system).
    Finite,
    /// Nothing is known past the stored terms.
    Unknown,
};

std::string to_string(GrowthModel model);
GrowthModel growth_model_from_string(const std::string& text);

struct SpectrumMeta {
    GrowthModel model = GrowthModel::Unknown;
    std::optional<BetaValue> beta;
    // The remaining fields are meaningful for Constructed spectra only.
    CReal beta_value;
    CReal c;       // (beta - 1)^2
    CReal delta;   // 1 - sum b(n) beta^-n
    BigInt k;      // floor(beta^2 delta)
    CReal M;       // beta + k
    CReal L;       // 1 / beta
    /// Enclosure of sum_{n > N_max} a(n) L^n.
    CReal tail_mass;
    std::optional<std::size_t> deleted_loop;
    Bits precision_bits = 0;
};

/// Intermediate sequences of the construction, kept for audit. All are
/// indexed by n with slot 0 unused.
struct DigitTrace {
    std::vector<BigInt> b;
    std::vector<BigInt> d;
    std::vector<BigInt> d_prime;
};

/// Loop counts a(1..N_max) of a loop system rooted at one vertex.
struct LoopSpectrum {
    /// a[n] = a(n); a[0] is an unused zero.
    std::vector<BigInt> a;
    SpectrumMeta meta;
    DigitTrace trace;

    std::size_t n_max() const { return a.empty() ? 0 : a.size() - 1; }
    /// a(n), or zero past the truncation for Finite spectra.
    const BigInt& at(std::size_t n) const;

    /// A spectrum given directly as counts a(1..N).
    static LoopSpectrum from_counts(const std::vector<BigInt>& counts, GrowthModel model);

    friend bool operator==(const LoopSpectrum& x, const LoopSpectrum& y);
};

struct BetaExpansion {
    std::vector<BigInt> digits;  // digits[n] = d(n), slot 0 unused
    CReal remainder;             // r_N in [0, 1)
    Bits bits_used = 0;
};

/// Greedy digits at a fixed enclosure of x; raises FloorUndecidable when
/// the enclosure is too wide to decide a digit.
BetaExpansion beta_expansion(const CReal& x, const CReal& beta, std::size_t num_digits);

/// Greedy digits, re-evaluating x and beta along the policy until every
/// digit is decided.
BetaExpansion beta_expansion(const std::function<CReal(Bits)>& x, const BetaValue& beta, std::size_t num_digits,
                             const PrecisionPolicy& policy = {});

constexpr std::size_t kDefaultMaxN = 64;

LoopSpectrum build_spectrum(const BetaValue& beta, std::size_t n_max = kDefaultMaxN,
                            const PrecisionPolicy& policy = {});

/// Removes one loop of length n0 (the smallest deletable length when
/// n0 is empty).
LoopSpectrum delete_loop(const LoopSpectrum& spectrum, std::optional<std::size_t> n0 = std::nullopt);

/// Enclosure of the comparison series bounding sum_{n >= from_n} w(n) a(n) L^n
/// for a constructed spectrum: M sum w(n) beta^-n + c sum_{m^2 >= from_n} w(m^2) beta^-m.
/// Its upper end bounds the tail.
CReal spectrum_tail_bounds(const LoopSpectrum& spectrum, std::size_t from_n, TailWeight weight);

/// Upper bound (as the hi end of an enclosure) of sum_{n >= from_n} w(n) a(n) x^n
/// for x certified strictly inside [0, L]. Weight is One or N.
CReal spectrum_tail_bound_at(const LoopSpectrum& spectrum, std::size_t from_n, TailWeight weight, const CReal& x);

/// sum_{n <= N_max} w(n) a(n) x^n for x >= 0.
CReal partial_sum(const LoopSpectrum& spectrum, const CReal& x, TailWeight weight = TailWeight::One);

struct PropertyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The four defining properties of a constructed spectrum, checked with
/// interval comparisons on the truncation plus its certified tail. A
/// deleted-loop variant is checked against its parent's entries and the
/// target sum 1 - L^n0.
std::vector<PropertyCheck> check_construction(const LoopSpectrum& spectrum);

}  // namespace markovforge
