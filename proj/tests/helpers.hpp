#pragma once

// Shared fixtures and naive reference implementations for the tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "repairkit/graph.hpp"
#include "repairkit/relational.hpp"
#include "repairkit/text_io.hpp"

namespace testkit {

using namespace repairkit;

inline Database db_of(const std::string& text) { return parse_database(text); }
inline ConstraintSet sigma_of(const std::string& text) { return parse_constraints(text); }
inline Query query_of(const std::string& text) { return parse_query(text); }

inline const char* kFivePath = "R(a,b)\nR(c,b)\nR(c,d)\nR(e,d)\nR(e,f)\n";
inline const char* kTwoKeys = "key R : 1\nkey R : 2\n";
inline const char* kWorked = "R(a,b)\nR(c,b)\nR(c,d)\n";

inline FactSet mask_set(std::uint32_t mask) {
    FactSet out;
    for (FactId i = 0; i < 32; ++i) {
        if (mask & (1u << i)) out.push_back(i);
    }
    return out;
}

// Repairs by definition: consistent and no single fact can be added.
inline std::vector<FactSet> naive_repairs(const Database& db, const ConstraintSet& sigma) {
    std::vector<FactSet> out;
    const std::uint32_t n = static_cast<std::uint32_t>(db.size());
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (!satisfies_constraints(db, mask_set(m), sigma)) continue;
        bool maximal = true;
        for (std::uint32_t v = 0; v < n && maximal; ++v) {
            if (!(m & (1u << v)) && satisfies_constraints(db, mask_set(m | (1u << v)), sigma)) {
                maximal = false;
            }
        }
        if (maximal) out.push_back(mask_set(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t naive_falsifying(const Database& db, const ConstraintSet& sigma, const Query& q) {
    std::size_t k = 0;
    for (const auto& r : naive_repairs(db, sigma)) k += evaluate_query(db, r, q) ? 0 : 1;
    return k;
}

// Treewidth as the best elimination order over all permutations.
inline std::size_t permutation_treewidth(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return 0;
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t best = n;
    do {
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
        std::vector<bool> gone(n, false);
        std::size_t width = 0;
        for (Vertex v : order) {
            std::vector<Vertex> nb;
            for (Vertex u = 0; u < n; ++u) {
                if (!gone[u] && u != v && adj[v][u]) nb.push_back(u);
            }
            width = std::max(width, nb.size());
            for (auto a : nb) {
                for (auto b : nb) {
                    if (a != b) adj[a][b] = true;
                }
            }
            gone[v] = true;
        }
        best = std::min(best, width);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
    Graph g(a + b);
    for (Vertex i = 0; i < a; ++i) {
        for (Vertex j = 0; j < b; ++j) g.add_edge(i, static_cast<Vertex>(a + j));
    }
    return g;
}

}  // namespace testkit
