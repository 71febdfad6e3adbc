#include "repairkit/treedec.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <set>

#include "repairkit/errors.hpp"

namespace repairkit {

namespace {

struct Elimination {
    std::vector<Vertex> order;
    // bags[v] = v plus its neighbours at the moment v is eliminated.
    std::vector<std::vector<Vertex>> neighbours_at_elimination;
};

Elimination eliminate(const Graph& g, Heuristic heuristic) {
    const std::size_t n = g.vertex_count();
    std::vector<std::set<Vertex>> adj(n);
    for (Vertex v = 0; v < n; ++v) adj[v].insert(g.neighbors(v).begin(), g.neighbors(v).end());

    auto score = [&](Vertex v) -> std::size_t {
        if (heuristic == Heuristic::min_degree) return adj[v].size();
        std::size_t fill = 0;
        for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
            for (auto b = std::next(a); b != adj[v].end(); ++b) {
                if (!adj[*a].contains(*b)) ++fill;
            }
        }
        return fill;
    };

    std::vector<std::size_t> current(n);
    std::set<std::pair<std::size_t, Vertex>> queue;
    for (Vertex v = 0; v < n; ++v) {
        current[v] = score(v);
        queue.emplace(current[v], v);
    }

    Elimination result;
    result.neighbours_at_elimination.resize(n);
    std::vector<bool> eliminated(n, false);
    while (!queue.empty()) {
        const Vertex v = queue.begin()->second;
        queue.erase(queue.begin());
        eliminated[v] = true;
        result.order.push_back(v);
        std::vector<Vertex> nbrs(adj[v].begin(), adj[v].end());
        result.neighbours_at_elimination[v] = nbrs;

        for (Vertex a : nbrs) adj[a].erase(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                adj[nbrs[i]].insert(nbrs[j]);
                adj[nbrs[j]].insert(nbrs[i]);
            }
        }
        adj[v].clear();

        std::set<Vertex> affected(nbrs.begin(), nbrs.end());
        if (heuristic == Heuristic::min_fill) {
            for (Vertex a : nbrs) affected.insert(adj[a].begin(), adj[a].end());
        }
        for (Vertex w : affected) {
            if (eliminated[w]) continue;
            const std::size_t s = score(w);
            if (s == current[w]) continue;
            queue.erase({current[w], w});
            current[w] = s;
            queue.emplace(s, w);
        }
    }
    return result;
}

struct TreeShape {
    std::vector<std::vector<BagIndex>> adjacency;
    std::vector<std::optional<BagIndex>> parent;
    std::vector<BagIndex> bfs_order;
    bool is_tree = false;
};

TreeShape analyse_tree(std::size_t bag_count, const std::vector<std::pair<BagIndex, BagIndex>>& edges,
                       BagIndex root) {
    TreeShape shape;
    shape.adjacency.resize(bag_count);
    shape.parent.resize(bag_count);
    if (root >= bag_count || edges.size() + 1 != bag_count) return shape;
    for (auto [a, b] : edges) {
        if (a >= bag_count || b >= bag_count || a == b) return shape;
        shape.adjacency[a].push_back(b);
        shape.adjacency[b].push_back(a);
    }
    std::vector<bool> seen(bag_count, false);
    seen[root] = true;
    shape.bfs_order.push_back(root);
    for (std::size_t i = 0; i < shape.bfs_order.size(); ++i) {
        const BagIndex b = shape.bfs_order[i];
        for (BagIndex c : shape.adjacency[b]) {
            if (seen[c]) continue;
            seen[c] = true;
            shape.parent[c] = b;
            shape.bfs_order.push_back(c);
        }
    }
    shape.is_tree = shape.bfs_order.size() == bag_count;
    return shape;
}

std::optional<std::string> check(const RootedDecomposition& t, std::size_t node_count,
                                 std::initializer_list<const std::vector<FactSet>*> edge_lists) {
    if (t.bags.empty()) return "decomposition has no bags";
    const auto shape = analyse_tree(t.bags.size(), t.tree_edges, t.root);
    if (!shape.is_tree) return "tree edges do not form a tree over all bags";
    if (t.children.size() != t.bags.size()) return "child lists do not match the bag count";
    for (BagIndex b = 0; b < t.bags.size(); ++b) {
        std::vector<BagIndex> expected;
        for (BagIndex c : shape.adjacency[b]) {
            if (shape.parent[b] != c) expected.push_back(c);
        }
        std::vector<BagIndex> actual = t.children[b];
        std::sort(expected.begin(), expected.end());
        std::sort(actual.begin(), actual.end());
        if (expected != actual) {
            return "child list of bag " + std::to_string(b) + " is not its non-parent neighbours";
        }
    }

    std::vector<std::vector<BagIndex>> bags_of(node_count);
    for (BagIndex b = 0; b < t.bags.size(); ++b) {
        const auto& bag = t.bags[b];
        if (!std::is_sorted(bag.begin(), bag.end()) ||
            std::adjacent_find(bag.begin(), bag.end()) != bag.end()) {
            return "bag " + std::to_string(b) + " is not a sorted set";
        }
        for (FactId v : bag) {
            if (v >= node_count) return "bag " + std::to_string(b) + " holds an unknown node";
            bags_of[v].push_back(b);
        }
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        if (bags_of[v].empty()) return "node " + std::to_string(v) + " is in no bag";
    }
    for (const auto* edges : edge_lists) {
        for (const auto& e : *edges) {
            if (e.empty()) continue;
            const bool covered = std::any_of(bags_of[e.front()].begin(), bags_of[e.front()].end(),
                                             [&](BagIndex b) { return is_subset(e, t.bags[b]); });
            if (!covered) return "some hyperedge is contained in no bag";
        }
    }
    // The bags holding a node induce a subforest; it is connected iff it has
    // exactly one more bag than tree edges.
    std::vector<std::size_t> inner_edges(node_count, 0);
    for (auto [a, b] : t.tree_edges) {
        const auto& x = t.bags[a];
        const auto& y = t.bags[b];
        std::vector<FactId> common;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
        for (FactId v : common) ++inner_edges[v];
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        if (bags_of[v].size() != inner_edges[v] + 1) {
            return "bags containing node " + std::to_string(v) + " are not connected";
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Heuristic> parse_heuristic(const std::string& name) {
    if (name == "min-fill") return Heuristic::min_fill;
    if (name == "min-degree") return Heuristic::min_degree;
    return std::nullopt;
}

std::string to_string(Heuristic h) { return h == Heuristic::min_fill ? "min-fill" : "min-degree"; }

std::size_t RootedDecomposition::max_bag_size() const {
    std::size_t k = 0;
    for (const auto& b : bags) k = std::max(k, b.size());
    return k;
}

std::size_t RootedDecomposition::width() const {
    const std::size_t k = max_bag_size();
    return k == 0 ? 0 : k - 1;
}

std::vector<std::optional<BagIndex>> RootedDecomposition::parents() const {
    std::vector<std::optional<BagIndex>> out(bags.size());
    for (BagIndex b = 0; b < children.size(); ++b) {
        for (BagIndex c : children[b]) out[c] = b;
    }
    return out;
}

std::vector<BagIndex> RootedDecomposition::post_order() const {
    std::vector<BagIndex> out;
    out.reserve(bags.size());
    std::vector<std::pair<BagIndex, std::size_t>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [b, next] = stack.back();
        if (next < children[b].size()) {
            const BagIndex c = children[b][next++];
            stack.emplace_back(c, 0);
        } else {
            out.push_back(b);
            stack.pop_back();
        }
    }
    return out;
}

std::vector<Vertex> elimination_order(const Graph& g, Heuristic heuristic) {
    return eliminate(g, heuristic).order;
}

RootedDecomposition decompose(const Graph& g, Heuristic heuristic) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return root_and_order(RootedDecomposition{{FactSet{}}, {}, 0, {}}, 0);

    const Elimination elim = eliminate(g, heuristic);
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[elim.order[i]] = i;

    // One bag per vertex, indexed by vertex id for now.
    std::vector<FactSet> bags(n);
    std::vector<std::set<Vertex>> tree(n);
    std::vector<Vertex> component_roots;
    for (Vertex v : elim.order) {
        const auto& nbrs = elim.neighbours_at_elimination[v];
        FactSet bag(nbrs.begin(), nbrs.end());
        bag.push_back(v);
        bags[v] = make_fact_set(std::move(bag));
        if (nbrs.empty()) {
            component_roots.push_back(v);
            continue;
        }
        const Vertex parent = *std::min_element(nbrs.begin(), nbrs.end(), [&](Vertex a, Vertex b) {
            return position[a] < position[b];
        });
        tree[v].insert(parent);
        tree[parent].insert(v);
    }
    // Separate components hang below the first component's root bag.
    for (std::size_t i = 1; i < component_roots.size(); ++i) {
        tree[component_roots[0]].insert(component_roots[i]);
        tree[component_roots[i]].insert(component_roots[0]);
    }

    // Contract every bag into a neighbour that contains it.
    std::vector<bool> alive(n, true);
    std::vector<std::pair<Vertex, Vertex>> work;
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex w : tree[v]) work.emplace_back(v, w);
    }
    while (!work.empty()) {
        auto [u, w] = work.back();
        work.pop_back();
        if (!alive[u] || !alive[w] || !tree[u].contains(w)) continue;
        if (!is_subset(bags[u], bags[w])) continue;
        for (Vertex x : tree[u]) {
            if (x == w) continue;
            tree[x].erase(u);
            tree[x].insert(w);
            tree[w].insert(x);
            work.emplace_back(x, w);
            work.emplace_back(w, x);
        }
        tree[w].erase(u);
        tree[u].clear();
        alive[u] = false;
    }

    RootedDecomposition t;
    std::vector<BagIndex> index(n, 0);
    for (Vertex v : elim.order) {
        if (!alive[v]) continue;
        index[v] = static_cast<BagIndex>(t.bags.size());
        t.bags.push_back(bags[v]);
    }
    for (Vertex v : elim.order) {
        if (!alive[v]) continue;
        for (Vertex w : tree[v]) {
            if (index[v] < index[w]) t.tree_edges.emplace_back(index[v], index[w]);
        }
    }
    std::sort(t.tree_edges.begin(), t.tree_edges.end());
    return root_and_order(std::move(t), 0);
}

RootedDecomposition decompose(const LabeledHypergraph& h, Heuristic heuristic) {
    return decompose(primal_graph(h), heuristic);
}

std::optional<std::string> find_violation(const RootedDecomposition& t, const LabeledHypergraph& h) {
    return check(t, h.node_count, {&h.conflict_edges, &h.solution_edges});
}

std::optional<std::string> find_violation(const RootedDecomposition& t, const Graph& g) {
    std::vector<FactSet> edges;
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return check(t, g.vertex_count(), {&edges});
}

RootedDecomposition root_and_order(RootedDecomposition t, BagIndex root) {
    const auto shape = analyse_tree(t.bags.size(), t.tree_edges, root);
    if (!shape.is_tree) {
        throw PreconditionError("tree edges do not form a tree over " +
                                std::to_string(t.bags.size()) + " bags rooted at " +
                                std::to_string(root));
    }
    t.root = root;
    t.children.assign(t.bags.size(), {});
    for (BagIndex b = 0; b < t.bags.size(); ++b) {
        if (auto p = shape.parent[b]) t.children[*p].push_back(b);
    }
    for (auto& c : t.children) std::sort(c.begin(), c.end());
    for (auto& [a, b] : t.tree_edges) {
        if (a > b) std::swap(a, b);
    }
    std::sort(t.tree_edges.begin(), t.tree_edges.end());
    return t;
}

std::size_t exact_treewidth(const Graph& g, std::size_t limit) {
    std::size_t width = 0;
    for (const auto& component : g.components()) {
        const std::size_t n = component.size();
        if (n <= 1) continue;
        if (n > limit || n > 30) {
            throw SizeGuardError("exact treewidth limited to components of " +
                                 std::to_string(limit) + " vertices, got " + std::to_string(n));
        }
        std::vector<std::uint32_t> adj(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (Vertex w : g.neighbors(component[i])) {
                const auto j = static_cast<std::size_t>(
                    std::lower_bound(component.begin(), component.end(), w) - component.begin());
                adj[i] |= 1u << j;
            }
        }
        // tw(S) = min over v in S of max(tw(S - v), |Q(S - v, v)|), where
        // Q(S, v) are the vertices outside S + v reachable from v through S.
        const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
        std::vector<std::uint8_t> tw(std::size_t{full} + 1, 0);
        constexpr std::uint8_t none = std::numeric_limits<std::uint8_t>::max();
        auto q_size = [&](std::uint32_t s, std::size_t v) {
            std::uint32_t reached = 0;
            std::uint32_t frontier = adj[v] & s;
            while (frontier) {
                reached |= frontier;
                std::uint32_t next = 0;
                for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
                frontier = next & s & ~reached;
            }
            std::uint32_t boundary = adj[v];
            for (std::uint32_t r = reached; r; r &= r - 1) boundary |= adj[std::countr_zero(r)];
            boundary &= ~s & ~(1u << v);
            return static_cast<std::uint8_t>(std::popcount(boundary));
        };
        tw[0] = 0;
        for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
            std::uint8_t best = none;
            for (std::uint32_t rest = s; rest; rest &= rest - 1) {
                const std::size_t v = std::countr_zero(rest);
                const std::uint32_t without = s & ~(1u << v);
                const std::uint8_t value = std::max(tw[without], q_size(without, v));
                best = std::min(best, value);
            }
            tw[s] = best;
            if (s == full) break;
        }
        width = std::max<std::size_t>(width, tw[full]);
    }
    return width;
}

}  // namespace repairkit
