#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "markovforge/graph.hpp"
#include "markovforge/spectrum.hpp"

namespace markovforge {

/// Exact first-return counts f(1..N) and return counts p(0..N) at the root.
struct PathCountTable {
    enum class Source { GraphEnumeration, GraphDynamicProgram, RenewalConvolution, Spectrum };

    std::vector<BigInt> f;  // f[n], f[0] = 0
    std::vector<BigInt> p;  // p[n], p[0] = 1
    Source source = Source::RenewalConvolution;

    std::size_t depth() const { return p.empty() ? 0 : p.size() - 1; }
};

/// p_uv(0..n) by vector-times-adjacency iteration.
std::vector<BigInt> count_paths(const ExplicitGraph& graph, std::size_t u, std::size_t v, std::size_t n);

/// f_uu(1..n) (slot 0 is zero): paths that avoid u except at both ends.
std::vector<BigInt> count_first_returns(const ExplicitGraph& graph, std::size_t u, std::size_t n);

/// p_uv(0..n) by walking every path explicitly. Prefixes that cannot reach
/// v within n steps are pruned. Raises GraphTooLarge once more than
/// `max_paths` paths to v have been found.
std::vector<BigInt> enumerate_paths(const ExplicitGraph& graph, std::size_t u, std::size_t v, std::size_t n,
                                    std::size_t max_paths = 1'000'000);

/// p(0) = 1, p(n) = sum_{k=1}^{n} f(k) p(n - k).
std::vector<BigInt> renewal_convolve(const std::vector<BigInt>& f, std::size_t n);

/// First-return counts of the loop system, with every loop length scaled
/// by `period_lift`: f(n * p) = a(n).
std::vector<BigInt> lifted_first_returns(const LoopSpectrum& spectrum, std::size_t depth, std::size_t period_lift = 1);

PathCountTable table_from_graph(const ExplicitGraph& graph, std::size_t depth);
PathCountTable table_from_spectrum(const LoopSpectrum& spectrum, std::size_t depth, std::size_t period_lift = 1);

/// gcd{ n >= 1 : p(n) > 0 }, or 0 when there is none.
std::size_t support_gcd(const std::vector<BigInt>& p);

struct GrowthEstimate {
    std::size_t period = 1;
    /// (n, (1/n) log p(n)) for the trailing window, n a multiple of period.
    std::vector<std::pair<std::size_t, CReal>> estimates;
    CReal last;
};

/// (1/n) log p(n) over the last `window` indices with positive counts on
/// the period's residue class. Raises InsufficientData when fewer exist.
GrowthEstimate growth_rate(const std::vector<BigInt>& p, std::size_t window, Bits bits = 128);

/// Rows n,f,p,growth_estimate for n = 1..depth.
void write_growth_csv(const PathCountTable& table, std::ostream& out);

}  // namespace markovforge
