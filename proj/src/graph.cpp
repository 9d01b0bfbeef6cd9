#include "markovforge/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace markovforge {

namespace {

std::string tag_name(const VertexTag& tag, bool with_phase) {
    std::string name = tag.is_root() ? "root"
                                     : "v_" + std::to_string(tag.n) + "_" + std::to_string(tag.i) + "_" +
                                           std::to_string(tag.k);
    if (with_phase) name += "_p" + std::to_string(tag.phase);
    return name;
}

std::size_t parse_index(const std::string& text, const std::string& whole) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw FormatError("bad vertex name '" + whole + "'");
    return std::stoull(text);
}

VertexTag parse_name(const std::string& name, bool with_phase) {
    std::vector<std::string> parts;
    std::stringstream in(name);
    for (std::string part; std::getline(in, part, '_');) parts.push_back(part);
    VertexTag tag;
    if (with_phase) {
        if (parts.size() < 2 || parts.back().empty() || parts.back()[0] != 'p')
            throw FormatError("vertex '" + name + "' lacks a phase suffix");
        tag.phase = parse_index(parts.back().substr(1), name);
        parts.pop_back();
    }
    if (parts.size() == 1 && parts[0] == "root") return tag;
    if (parts.size() != 4 || parts[0] != "v") throw FormatError("bad vertex name '" + name + "'");
    tag.n = parse_index(parts[1], name);
    tag.i = parse_index(parts[2], name);
    tag.k = parse_index(parts[3], name);
    if (tag.n < 2 || tag.i < 1 || tag.k < 1 || tag.k >= tag.n) throw FormatError("bad vertex name '" + name + "'");
    return tag;
}

}  // namespace

ExplicitGraph ExplicitGraph::from_parts(std::vector<VertexTag> vertices,
                                        const std::vector<std::pair<VertexTag, VertexTag>>& arrows,
                                        std::size_t period_lift) {
    if (period_lift == 0) throw std::invalid_argument("period_lift must be >= 1");
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw FormatError("duplicate vertex");
    ExplicitGraph g;
    g.vertices_ = std::move(vertices);
    g.period_lift_ = period_lift;
    for (const auto& [from, to] : arrows) {
        const auto u = g.index_of(from);
        const auto v = g.index_of(to);
        if (!u || !v) throw FormatError("arrow refers to an unknown vertex");
        g.arrows_.emplace_back(*u, *v);
    }
    std::sort(g.arrows_.begin(), g.arrows_.end());
    if (std::adjacent_find(g.arrows_.begin(), g.arrows_.end()) != g.arrows_.end())
        throw FormatError("more than one arrow between the same ordered pair");
    return g;
}

std::optional<std::size_t> ExplicitGraph::index_of(const VertexTag& tag) const {
    const auto it = std::lower_bound(vertices_.begin(), vertices_.end(), tag);
    if (it == vertices_.end() || *it != tag) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t ExplicitGraph::root() const {
    const auto r = index_of(VertexTag{});
    if (!r) throw std::logic_error("graph has no root vertex");
    return *r;
}

std::string ExplicitGraph::vertex_name(std::size_t index) const {
    return tag_name(vertices_.at(index), period_lift_ > 1);
}

std::vector<std::vector<std::size_t>> ExplicitGraph::successors() const {
    std::vector<std::vector<std::size_t>> out(vertices_.size());
    for (const auto& [u, v] : arrows_) out[u].push_back(v);
    return out;
}

BigInt realized_vertex_count(const LoopSpectrum& spectrum, std::size_t n) {
    BigInt count = 1;
    for (std::size_t len = 2; len <= n; ++len) count += spectrum.at(len) * static_cast<unsigned long>(len - 1);
    return count;
}

ExplicitGraph realize(const LoopSpectrum& spectrum, std::size_t n, std::size_t max_vertices) {
    if (n < 1) throw std::invalid_argument("realize needs N >= 1");
    if (n > spectrum.n_max() && spectrum.meta.model != GrowthModel::Finite)
        throw std::invalid_argument("realize past the spectrum truncation");
    if (spectrum.at(1) > 1) throw std::invalid_argument("at most one arrow root -> root is allowed, so a(1) <= 1");
    const BigInt count = realized_vertex_count(spectrum, n);
    if (count > BigInt(static_cast<unsigned long>(max_vertices)))
        throw GraphTooLarge("realizing loops up to length " + std::to_string(n) + " needs " + count.get_str() +
                            " vertices (cap " + std::to_string(max_vertices) + ")");

    ExplicitGraph g;
    g.vertices_.reserve(count.get_ui());
    g.vertices_.push_back(VertexTag{});
    for (std::size_t len = 2; len <= n; ++len) {
        const std::size_t loops = spectrum.at(len).get_ui();
        for (std::size_t i = 1; i <= loops; ++i)
            for (std::size_t k = 1; k < len; ++k) g.vertices_.push_back(VertexTag{len, i, k, 1});
    }
    // Generated in (n, i, k) order already, which is the sorted order.
    const std::size_t root = 0;
    if (spectrum.at(1) == 1) g.arrows_.emplace_back(root, root);
    std::size_t next = 1;
    for (std::size_t len = 2; len <= n; ++len) {
        const std::size_t loops = spectrum.at(len).get_ui();
        for (std::size_t i = 1; i <= loops; ++i) {
            g.arrows_.emplace_back(root, next);
            for (std::size_t k = 1; k + 1 < len; ++k) g.arrows_.emplace_back(next + k - 1, next + k);
            g.arrows_.emplace_back(next + len - 2, root);
            next += len - 1;
        }
    }
    std::sort(g.arrows_.begin(), g.arrows_.end());
    g.source_ = std::make_shared<const LoopSpectrum>(spectrum);
    g.truncation_ = n;
    return g;
}

ExplicitGraph lift_period(const ExplicitGraph& graph, std::size_t p) {
    if (p < 1) throw std::invalid_argument("period lift needs p >= 1");
    if (graph.period_lift() != 1) throw std::invalid_argument("graph is already lifted");
    ExplicitGraph g;
    g.period_lift_ = p;
    g.source_ = graph.source_;
    g.truncation_ = graph.truncation_;
    // Phases are the last sort key, so (v, phase) sits at v * p + phase - 1.
    g.vertices_.reserve(graph.vertex_count() * p);
    for (const auto& tag : graph.vertices())
        for (std::size_t phase = 1; phase <= p; ++phase) g.vertices_.push_back(VertexTag{tag.n, tag.i, tag.k, phase});
    for (std::size_t v = 0; v < graph.vertex_count(); ++v)
        for (std::size_t phase = 1; phase < p; ++phase) g.arrows_.emplace_back(v * p + phase - 1, v * p + phase);
    for (const auto& [v, w] : graph.arrows()) g.arrows_.emplace_back(v * p + p - 1, w * p);
    std::sort(g.arrows_.begin(), g.arrows_.end());
    return g;
}

bool strongly_connected(const ExplicitGraph& graph) {
    const std::size_t count = graph.vertex_count();
    if (count == 0) return false;
    std::vector<std::vector<std::size_t>> forward(count), backward(count);
    for (const auto& [u, v] : graph.arrows()) {
        forward[u].push_back(v);
        backward[v].push_back(u);
    }
    auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(count, false);
        std::vector<std::size_t> stack{graph.root()};
        seen[graph.root()] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const std::size_t v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        return reached == count;
    };
    return reaches_all(forward) && reaches_all(backward);
}

std::size_t period(const ExplicitGraph& graph) {
    const auto adj = graph.successors();
    constexpr std::size_t unseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(graph.vertex_count(), unseen);
    std::deque<std::size_t> queue{graph.root()};
    level[graph.root()] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (const std::size_t v : adj[u]) {
            if (level[v] == unseen) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    std::size_t g = 0;
    for (const auto& [u, v] : graph.arrows()) {
        if (level[u] == unseen || level[v] == unseen) continue;
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
    }
    if (g == 0) throw EmptyLoopSet("no closed path through the root");
    return g;
}

std::string export_graph(const ExplicitGraph& graph, ExportFormat format) {
    if (format == ExportFormat::Dot) {
        std::ostringstream out;
        out << "digraph G {\n";
        for (std::size_t v = 0; v < graph.vertex_count(); ++v) out << "  \"" << graph.vertex_name(v) << "\";\n";
        for (const auto& [u, v] : graph.arrows())
            out << "  \"" << graph.vertex_name(u) << "\" -> \"" << graph.vertex_name(v) << "\";\n";
        out << "}\n";
        return out.str();
    }
    nlohmann::ordered_json doc;
    doc["vertices"] = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) doc["vertices"].push_back(graph.vertex_name(v));
    doc["arrows"] = nlohmann::ordered_json::array();
    for (const auto& [u, v] : graph.arrows())
        doc["arrows"].push_back(nlohmann::ordered_json::array({graph.vertex_name(u), graph.vertex_name(v)}));
    doc["period_lift"] = graph.period_lift();
    return doc.dump(1) + "\n";
}

ExplicitGraph import_graph_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        const auto p = doc.at("period_lift").get<std::size_t>();
        const bool with_phase = p > 1;
        std::vector<VertexTag> vertices;
        for (const auto& name : doc.at("vertices")) vertices.push_back(parse_name(name.get<std::string>(), with_phase));
        std::vector<std::pair<VertexTag, VertexTag>> arrows;
        for (const auto& arrow : doc.at("arrows")) {
            if (!arrow.is_array() || arrow.size() != 2) throw FormatError("arrow must be a [from, to] pair");
            arrows.emplace_back(parse_name(arrow[0].get<std::string>(), with_phase),
                                parse_name(arrow[1].get<std::string>(), with_phase));
        }
        return ExplicitGraph::from_parts(std::move(vertices), arrows, p);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("graph JSON: ") + e.what());
    }
}

}  // namespace markovforge
