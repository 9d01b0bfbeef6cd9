#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "markovforge/spectrum.hpp"

namespace markovforge {

/// Vertex of a realized loop system: the root (n == 0) or the k-th inner
/// vertex of the i-th loop of length n, in phase 1..p after a period lift.
struct VertexTag {
    std::size_t n = 0;
    std::size_t i = 0;
    std::size_t k = 0;
    std::size_t phase = 1;

    bool is_root() const { return n == 0; }
    auto operator<=>(const VertexTag&) const = default;
};

using Arrow = std::pair<std::size_t, std::size_t>;

/// A finite oriented graph with at most one arrow per ordered vertex pair.
/// Vertices are kept sorted by (n, i, k, phase) and arrows by endpoint
/// indices, so iteration order and exports are deterministic.
class ExplicitGraph {
public:
    /// Validates and sorts the parts; arrows refer to positions in `vertices`.
    static ExplicitGraph from_parts(std::vector<VertexTag> vertices, const std::vector<std::pair<VertexTag, VertexTag>>& arrows,
                                    std::size_t period_lift);

    const std::vector<VertexTag>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    std::size_t period_lift() const { return period_lift_; }
    std::size_t vertex_count() const { return vertices_.size(); }

    /// Spectrum the graph was realized from, and the loop-length truncation.
    const std::shared_ptr<const LoopSpectrum>& source_spectrum() const { return source_; }
    std::size_t truncation() const { return truncation_; }

    std::optional<std::size_t> index_of(const VertexTag& tag) const;
    /// Index of the distinguished vertex (root, phase 1).
    std::size_t root() const;
    std::string vertex_name(std::size_t index) const;
    std::vector<std::vector<std::size_t>> successors() const;

    friend bool operator==(const ExplicitGraph& a, const ExplicitGraph& b) {
        return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_ && a.period_lift_ == b.period_lift_;
    }

private:
    friend ExplicitGraph realize(const LoopSpectrum&, std::size_t, std::size_t);
    friend ExplicitGraph lift_period(const ExplicitGraph&, std::size_t);

    std::vector<VertexTag> vertices_;
    std::vector<Arrow> arrows_;
    std::size_t period_lift_ = 1;
    std::shared_ptr<const LoopSpectrum> source_;
    std::size_t truncation_ = 0;
};

constexpr std::size_t kDefaultVertexCap = 2'000'000;

/// The loops of length <= n through the root. Raises GraphTooLarge past
/// `max_vertices`.
ExplicitGraph realize(const LoopSpectrum& spectrum, std::size_t n, std::size_t max_vertices = kDefaultVertexCap);

/// Number of vertices realize() would create.
BigInt realized_vertex_count(const LoopSpectrum& spectrum, std::size_t n);

/// Crosses every vertex with phases 1..p so each loop length is multiplied by p.
ExplicitGraph lift_period(const ExplicitGraph& graph, std::size_t p);

bool strongly_connected(const ExplicitGraph& graph);

/// gcd of the lengths of all closed paths, via BFS levels from the root.
std::size_t period(const ExplicitGraph& graph);

enum class ExportFormat { Dot, Json };

std::string export_graph(const ExplicitGraph& graph, ExportFormat format);
ExplicitGraph import_graph_json(const std::string& text);

}  // namespace markovforge
