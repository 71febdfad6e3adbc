#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace repairkit {

using Vertex = std::uint32_t;

/// Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
public:
    explicit Graph(std::size_t vertex_count = 0) : adjacency_(vertex_count) {}

    std::size_t vertex_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Loops are ignored; parallel edges collapse.
    void add_edge(Vertex u, Vertex v);
    bool adjacent(Vertex u, Vertex v) const;
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }

    std::vector<std::pair<Vertex, Vertex>> edges() const;
    /// Connected components, each sorted, ordered by smallest vertex.
    std::vector<std::vector<Vertex>> components() const;

    /// Graphviz text; `label` names each vertex.
    std::string to_dot(const std::function<std::string(Vertex)>& label) const;

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::size_t edge_count_ = 0;
};

}  // namespace repairkit
