#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "markovforge/graph.hpp"
#include "markovforge/oracle.hpp"
#include "markovforge/spectrum.hpp"

namespace markovforge {

enum class Verdict { Transient, NullRecurrent, PositiveRecurrent, Indeterminate };

std::string to_string(Verdict verdict);

/// Radius of convergence; an empty value means +infinity.
struct Radius {
    std::optional<CReal> value;
    bool certified = false;

    bool infinite() const { return !value.has_value(); }
};

struct ClassificationReport {
    Verdict verdict = Verdict::Indeterminate;
    std::size_t period_lift = 1;
    /// Radius of sum f(n) z^n.
    Radius L;
    /// Radius of sum p(n) z^n.
    std::optional<CReal> R;
    /// sum f(n) L^n including the certified tail.
    std::optional<CReal> F_at_L;
    /// sum f(n) R^n when R < L.
    std::optional<CReal> F_at_R;
    /// sum n f(n) R^n including the certified tail.
    std::optional<CReal> mean_return_bound;
    /// -log R, natural units.
    std::optional<CReal> entropy;
    std::optional<bool> has_mme;
    /// p(n) R^n at the deepest computed n; never certified.
    std::optional<CReal> lambda_estimate;
    std::vector<std::string> notes;
};

struct ClassifyOptions {
    Bits precision = 256;
    std::size_t period_lift = 1;
    /// Path-count depth for the lambda estimate; 0 picks N_max * period_lift.
    std::size_t lambda_depth = 0;
};

/// Table 1 of the Vere-Jones trichotomy, from exact knowledge of how
/// sum f(n) R^n compares with 1 and whether the mean return series converges.
enum class Comparison { Below, Equal, Above, Unknown };
enum class Finiteness { Finite, Infinite, Unknown };
Verdict verdict_from_certificates(Comparison f_at_r, Finiteness mean_return);

/// L = 1/beta for constructed spectra, +infinity for finite ones, and an
/// uncertified Cauchy-Hadamard estimate otherwise (NoGrowthModel when
/// `require_certified`).
Radius radius_L(const LoopSpectrum& spectrum, bool require_certified = false);

/// Enclosure of F(x) = sum_{n>=1} a(n) x^n, tail included.
CReal F_eval(const LoopSpectrum& spectrum, const CReal& x);
/// F at exactly L, using the spectrum's certified tail mass.
CReal F_at_L(const LoopSpectrum& spectrum);
/// sum n a(n) L^n with its tail bound folded into the upper end.
CReal mean_return_at_L(const LoopSpectrum& spectrum);

/// Radius of sum p(n) z^n of the (unlifted) loop system.
CReal radius_R(const LoopSpectrum& spectrum, const PrecisionPolicy& policy = {});

ClassificationReport classify(const LoopSpectrum& spectrum, const ClassifyOptions& options = {});

/// -log R / period_lift.
CReal entropy(const LoopSpectrum& spectrum, std::size_t period_lift = 1, const PrecisionPolicy& policy = {});
/// Entropy of the infinite graph a realized graph was truncated from.
CReal entropy(const ExplicitGraph& graph);
/// Entropy of the finite truncation itself; a lower bound for entropy(graph).
CReal truncation_entropy(const ExplicitGraph& graph);

struct LambdaEstimate {
    std::vector<std::pair<std::size_t, CReal>> window;  // (n, p(n) R^n)
    CReal last;
    bool certified = false;
};

/// p(n) R^n over the last `window` lengths with positive counts.
LambdaEstimate lambda_estimate(const PathCountTable& counts, const CReal& R, std::size_t window = 0);

}  // namespace markovforge
