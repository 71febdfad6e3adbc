#include "doctest.h"
#include "helpers.hpp"
#include "repairkit/errors.hpp"
#include "repairkit/generators.hpp"
#include "repairkit/hypergraph.hpp"
#include "repairkit/treedec.hpp"

using namespace repairkit;
using namespace testkit;

namespace {

RootedDecomposition five_path_decomposition() {
    // {R(a,b),R(c,b)} - {R(c,b),R(c,d)} - {R(c,d),R(e,d)} - {R(e,d),R(e,f)}
    RootedDecomposition t;
    t.bags = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    t.tree_edges = {{0, 1}, {1, 2}, {2, 3}};
    return root_and_order(t, 0);
}

Graph random_graph(std::uint64_t seed, std::size_t n, std::size_t permille) {
    std::uint64_t x = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    Graph g(n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            x = x * 6364136223846793005ULL + 1442695040888963407ULL;
            if ((x >> 33) % 1000 < permille) g.add_edge(u, v);
        }
    }
    return g;
}

}  // namespace

TEST_CASE("heuristic names") {
    CHECK(parse_heuristic("min-fill") == Heuristic::min_fill);
    CHECK(parse_heuristic("min-degree") == Heuristic::min_degree);
    CHECK_FALSE(parse_heuristic("best"));
    CHECK(to_string(Heuristic::min_degree) == "min-degree");
}

TEST_CASE("decompose examples") {
    const auto h = build_solution_conflict(db_of(kFivePath), sigma_of(kTwoKeys), Query::falsum());
    for (auto heur : {Heuristic::min_fill, Heuristic::min_degree}) {
        const auto t = decompose(h, heur);
        CHECK(validate(t, h));
        CHECK(t.width() == 1);
    }

    const LabeledHypergraph single{1, {}, {}};
    const auto t1 = decompose(single);
    REQUIRE(t1.bags.size() == 1);
    CHECK(t1.bags[0] == FactSet{0});
    CHECK(t1.width() == 0);

    for (std::size_t n = 2; n <= 6; ++n) {
        const Graph k = complete_bipartite(n, n);
        CHECK(decompose(k).width() >= n);
        CHECK(validate(decompose(k), k));
    }
}

TEST_CASE("isolated nodes get their own bags") {
    const LabeledHypergraph h{4, {{0, 1}}, {}};
    const auto t = decompose(h);
    CHECK(validate(t, h));
    std::size_t singletons = 0;
    for (const auto& b : t.bags) singletons += b.size() == 1;
    CHECK(singletons == 2);
}

TEST_CASE("validate examples") {
    const auto h = build_solution_conflict(db_of(kFivePath), sigma_of(kTwoKeys), Query::falsum());
    const auto path = five_path_decomposition();
    CHECK(validate(path, h));

    // Swap the last two bags: R(c,d) now sits in bags 1 and 3, which are not adjacent.
    RootedDecomposition swapped = path;
    std::swap(swapped.bags[2], swapped.bags[3]);
    CHECK_FALSE(validate(swapped, h));

    // Drop the bag covering {R(e,d),R(e,f)} and R(e,f) with it.
    RootedDecomposition missing;
    missing.bags = {{0, 1}, {1, 2}, {2, 3}, {4}};
    missing.tree_edges = {{0, 1}, {1, 2}, {2, 3}};
    missing = root_and_order(missing, 0);
    CHECK_FALSE(validate(missing, h));
    CHECK(find_violation(missing, h).has_value());

    RootedDecomposition cyclic = path;
    cyclic.tree_edges.push_back({0, 3});
    CHECK_FALSE(validate(cyclic, h));
}

TEST_CASE("root_and_order examples") {
    RootedDecomposition two;
    two.bags = {{0, 1}, {1, 2}};
    two.tree_edges = {{0, 1}};
    const auto r0 = root_and_order(two, 0);
    CHECK(r0.children[0] == std::vector<BagIndex>{1});
    CHECK(r0.children[1].empty());

    RootedDecomposition single;
    single.bags = {{0}};
    CHECK(root_and_order(single, 0).children[0].empty());

    RootedDecomposition star;
    star.bags = {{0, 1, 2, 3}, {0}, {1}, {2}, {3}};
    star.tree_edges = {{3, 0}, {0, 1}, {4, 0}, {0, 2}};
    const auto rs = root_and_order(star, 0);
    CHECK(rs.children[0] == std::vector<BagIndex>{1, 2, 3, 4});

    const auto re = root_and_order(star, 4);
    CHECK(re.children[4] == std::vector<BagIndex>{0});
    CHECK(re.children[0] == std::vector<BagIndex>{1, 2, 3});
    CHECK_THROWS_AS(root_and_order(star, 9), PreconditionError);
}

TEST_CASE("post order puts children first") {
    const auto t = decompose(complete_bipartite(3, 4));
    const auto order = t.post_order();
    const auto parents = t.parents();
    std::vector<std::size_t> pos(t.bags.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (BagIndex b = 0; b < t.bags.size(); ++b) {
        if (parents[b]) CHECK(pos[b] < pos[*parents[b]]);
    }
}

TEST_CASE("exact treewidth examples") {
    Graph p5(5);
    for (Vertex v = 0; v + 1 < 5; ++v) p5.add_edge(v, v + 1);
    CHECK(exact_treewidth(p5) == 1);
    CHECK(exact_treewidth(Graph(7)) == 0);
    CHECK(exact_treewidth(complete_bipartite(3, 3)) == 3);
    CHECK(permutation_treewidth(complete_bipartite(3, 3)) == 3);

    Graph k5(5);
    for (Vertex u = 0; u < 5; ++u) {
        for (Vertex v = u + 1; v < 5; ++v) k5.add_edge(u, v);
    }
    CHECK(exact_treewidth(k5) == 4);
    CHECK_THROWS_AS(exact_treewidth(complete_bipartite(7, 7)), SizeGuardError);
    // Components are solved one at a time.
    CHECK(exact_treewidth(complete_bipartite(5, 5), 10) == 5);
}

TEST_CASE("exact treewidth matches all elimination orders") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Graph g = random_graph(seed, 7, 200 + 25 * seed);
        CHECK(exact_treewidth(g) == permutation_treewidth(g));
    }
}

TEST_CASE("heuristics give valid decompositions no thinner than exact") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Graph g = random_graph(seed, 11, 100 + 15 * seed);
        const std::size_t exact = exact_treewidth(g);
        for (auto heur : {Heuristic::min_fill, Heuristic::min_degree}) {
            const auto t = decompose(g, heur);
            CHECK(validate(t, g));
            CHECK(t.width() >= exact);
        }
    }
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GenSpec spec;
        spec.n = 12;
        spec.seed = 77 + seed;
        spec.constraint_kind = static_cast<ConstraintKind>(seed % 3);
        spec.query_kind = seed % 2 ? QueryKind::bucq : QueryKind::bcq;
        const Instance inst = gen_random(spec);
        const auto h = build_solution_conflict(inst.db, inst.constraints, inst.query);
        for (auto heur : {Heuristic::min_fill, Heuristic::min_degree}) {
            CHECK(validate(decompose(h, heur), h));
        }
    }
}
