#include "repairkit/graph.hpp"

#include <algorithm>
#include <sstream>

namespace repairkit {

void Graph::add_edge(Vertex u, Vertex v) {
    if (u == v) return;
    auto& nu = adjacency_.at(u);
    auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it != nu.end() && *it == v) return;
    nu.insert(it, v);
    auto& nv = adjacency_.at(v);
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++edge_count_;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
    const auto& nu = adjacency_.at(u);
    return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < adjacency_.size(); ++u) {
        for (Vertex v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

std::vector<std::vector<Vertex>> Graph::components() const {
    std::vector<std::vector<Vertex>> out;
    std::vector<bool> seen(adjacency_.size(), false);
    for (Vertex start = 0; start < adjacency_.size(); ++start) {
        if (seen[start]) continue;
        std::vector<Vertex> component{start};
        seen[start] = true;
        for (std::size_t i = 0; i < component.size(); ++i) {
            for (Vertex w : adjacency_[component[i]]) {
                if (!seen[w]) {
                    seen[w] = true;
                    component.push_back(w);
                }
            }
        }
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
    }
    return out;
}

std::string Graph::to_dot(const std::function<std::string(Vertex)>& label) const {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream os;
    os << "graph primal {\n";
    for (Vertex v = 0; v < adjacency_.size(); ++v) {
        os << "  n" << v << " [label=" << quote(label(v)) << "];\n";
    }
    for (auto [u, v] : edges()) os << "  n" << u << " -- n" << v << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace repairkit
