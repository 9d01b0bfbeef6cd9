#include "markovforge/oracle.hpp"

#include <numeric>

namespace markovforge {

std::vector<BigInt> count_paths(const ExplicitGraph& graph, std::size_t u, std::size_t v, std::size_t n) {
    const std::size_t count = graph.vertex_count();
    if (u >= count || v >= count) throw std::out_of_range("vertex index out of range");
    std::vector<BigInt> current(count, BigInt(0)), next(count, BigInt(0));
    current[u] = 1;
    std::vector<BigInt> p(n + 1, BigInt(0));
    p[0] = current[v];
    for (std::size_t step = 1; step <= n; ++step) {
        for (auto& x : next) x = 0;
        for (const auto& [from, to] : graph.arrows())
            if (current[from] != 0) next[to] += current[from];
        std::swap(current, next);
        p[step] = current[v];
    }
    return p;
}

std::vector<BigInt> count_first_returns(const ExplicitGraph& graph, std::size_t u, std::size_t n) {
    const std::size_t count = graph.vertex_count();
    if (u >= count) throw std::out_of_range("vertex index out of range");
    std::vector<BigInt> current(count, BigInt(0)), next(count, BigInt(0));
    current[u] = 1;
    std::vector<BigInt> f(n + 1, BigInt(0));
    for (std::size_t step = 1; step <= n; ++step) {
        for (auto& x : next) x = 0;
        for (const auto& [from, to] : graph.arrows())
            if (current[from] != 0) next[to] += current[from];
        // Arrivals at u are absorbed.
        f[step] = next[u];
        next[u] = 0;
        std::swap(current, next);
    }
    return f;
}

std::vector<BigInt> enumerate_paths(const ExplicitGraph& graph, std::size_t u, std::size_t v, std::size_t n,
                                    std::size_t max_paths) {
    const auto adj = graph.successors();
    // Arrow distance to v, so prefixes that cannot close in time are dropped.
    constexpr std::size_t kFar = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> back(adj.size());
    for (std::size_t x = 0; x < adj.size(); ++x)
        for (const std::size_t y : adj[x]) back[y].push_back(x);
    std::vector<std::size_t> dist(adj.size(), kFar);
    std::vector<std::size_t> queue{v};
    dist[v] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (const std::size_t x : back[queue[head]])
            if (dist[x] == kFar) {
                dist[x] = dist[queue[head]] + 1;
                queue.push_back(x);
            }

    std::vector<BigInt> p(n + 1, BigInt(0));
    std::size_t found = 0;
    struct Frame {
        std::size_t vertex;
        std::size_t length;
        std::size_t next = 0;
    };
    std::vector<Frame> stack{{u, 0}};
    if (u == v) p[0] = 1;
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.length == n || top.next == adj[top.vertex].size()) {
            stack.pop_back();
            continue;
        }
        const std::size_t w = adj[top.vertex][top.next++];
        const std::size_t length = top.length + 1;
        if (dist[w] == kFar || length + dist[w] > n) continue;
        if (w == v) {
            if (++found > max_paths)
                throw GraphTooLarge("explicit enumeration exceeded " + std::to_string(max_paths) + " paths");
            p[length] += 1;
        }
        stack.push_back({w, length});
    }
    return p;
}

std::vector<BigInt> renewal_convolve(const std::vector<BigInt>& f, std::size_t n) {
    std::vector<BigInt> p(n + 1, BigInt(0));
    p[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        BigInt total = 0;
        const std::size_t top = std::min(m, f.empty() ? 0 : f.size() - 1);
        for (std::size_t k = 1; k <= top; ++k)
            if (f[k] != 0) total += f[k] * p[m - k];
        p[m] = std::move(total);
    }
    return p;
}

std::vector<BigInt> lifted_first_returns(const LoopSpectrum& spectrum, std::size_t depth, std::size_t period_lift) {
    if (period_lift < 1) throw std::invalid_argument("period_lift must be >= 1");
    std::vector<BigInt> f(depth + 1, BigInt(0));
    for (std::size_t n = 1; n * period_lift <= depth; ++n) f[n * period_lift] = spectrum.at(n);
    return f;
}

PathCountTable table_from_graph(const ExplicitGraph& graph, std::size_t depth) {
    PathCountTable t;
    t.f = count_first_returns(graph, graph.root(), depth);
    t.p = count_paths(graph, graph.root(), graph.root(), depth);
    t.source = PathCountTable::Source::GraphDynamicProgram;
    return t;
}

PathCountTable table_from_spectrum(const LoopSpectrum& spectrum, std::size_t depth, std::size_t period_lift) {
    PathCountTable t;
    t.f = lifted_first_returns(spectrum, depth, period_lift);
    t.p = renewal_convolve(t.f, depth);
    t.source = PathCountTable::Source::Spectrum;
    return t;
}

std::size_t support_gcd(const std::vector<BigInt>& p) {
    std::size_t g = 0;
    for (std::size_t n = 1; n < p.size(); ++n)
        if (p[n] > 0) g = std::gcd(g, n);
    return g;
}

GrowthEstimate growth_rate(const std::vector<BigInt>& p, std::size_t window, Bits bits) {
    if (window == 0) throw std::invalid_argument("growth_rate window must be positive");
    GrowthEstimate out;
    out.period = support_gcd(p);
    if (out.period == 0) throw InsufficientData("no positive counts past length 0");
    std::vector<std::size_t> indices;
    for (std::size_t n = out.period; n < p.size(); n += out.period)
        if (p[n] > 0) indices.push_back(n);
    if (indices.size() < window)
        throw InsufficientData("only " + std::to_string(indices.size()) + " positive counts, window is " +
                               std::to_string(window));
    for (std::size_t j = indices.size() - window; j < indices.size(); ++j) {
        const std::size_t n = indices[j];
        const CReal rate = log_of(p[n], bits) / CReal::from_integer(static_cast<long>(n), bits);
        out.estimates.emplace_back(n, rate);
    }
    out.last = out.estimates.back().second;
    return out;
}

void write_growth_csv(const PathCountTable& table, std::ostream& out) {
    out << "n,f,p,growth_estimate\n";
    for (std::size_t n = 1; n <= table.depth(); ++n) {
        out << n << ',' << (n < table.f.size() ? table.f[n] : BigInt(0)).get_str() << ',' << table.p[n].get_str()
            << ',';
        if (table.p[n] > 0) {
            const CReal rate = log_of(table.p[n], 128) / CReal::from_integer(static_cast<long>(n), 128);
            char* raw = nullptr;
            mpfr_asprintf(&raw, "%.17Re", rate.midpoint().get());
            out << raw;
            mpfr_free_str(raw);
        }
        out << '\n';
    }
}

}  // namespace markovforge
