// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "repairkit/count.hpp"
#include "repairkit/gaifman.hpp"
#include "repairkit/generators.hpp"
#include "repairkit/hypergraph.hpp"
#include "repairkit/oracle.hpp"
#include "repairkit/text_io.hpp"
#include "repairkit/treedec.hpp"

using namespace repairkit;

namespace {

// Time limits and tolerances.
constexpr double kWorkedLimitS = 1.0;
constexpr double kFivePathLimitS = 1.0;
constexpr double kOracleLimitS = 120.0;
constexpr double kSeparationLimitS = 30.0;
constexpr double kScalingLimitS = 10.0;
constexpr std::size_t kOracleInstances = 240;
constexpr std::size_t kInvarianceInstances = 50;
constexpr std::size_t kPkInstances = 100;
constexpr std::size_t kMisInstances = 100;
constexpr std::size_t kScalingN = 10000;
constexpr int kMaxMsoExponent = 3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome with_time_limit(Outcome o, double elapsed, double limit) {
    std::ostringstream os;
    os << o.detail << "; " << elapsed << " s (limit " << limit << " s)";
    return {o.pass && elapsed < limit, os.str()};
}

GenSpec random_spec(std::uint64_t seed, std::size_t n, ConstraintKind kind, QueryKind qk) {
    GenSpec spec;
    spec.n = n;
    spec.seed = seed;
    spec.constraint_kind = kind;
    spec.query_kind = qk;
    spec.block_size = 3;
    spec.max_atoms = 3;
    return spec;
}

Outcome worked_example() {
    const Database db = parse_database("R(a,b)\nR(c,b)\nR(c,d)\n");
    const ConstraintSet sigma = parse_constraints("key R : 1\nkey R : 2\n");
    RootedDecomposition t;
    t.bags = {db.ids_of(std::vector<Fact>{{"R", {"a", "b"}}, {"R", {"c", "b"}}}),
              db.ids_of(std::vector<Fact>{{"R", {"c", "b"}}, {"R", {"c", "d"}}})};
    t.tree_edges = {{0, 1}};
    t = root_and_order(t, 0);
    CountOptions opts;
    opts.retain_tables = true;
    const DpResult res = number_falsify(db, sigma, Query::falsum(), t, opts);
    const MemoTables& m = *res.tables;
    const FactSet b = t.bags[0];
    const FactSet bc = db.ids_of(std::vector<Fact>{{"R", {"c", "b"}}});
    const FactSet b_minus_c = db.ids_of(std::vector<Fact>{{"R", {"a", "b"}}});
    struct Expect {
        const char* name;
        RepairCount got;
        int want;
    };
    const Expect values[] = {
        {"g(0,0,b,c)", m.g_value(t, 1, {}, {}), 0},
        {"g(0,bnc,b,c)", m.g_value(t, 1, {}, bc), 1},
        {"g(bnc,bnc,b,c)", m.g_value(t, 1, bc, bc), 1},
        {"f(b,b,b,(c))", m.f_value(t, 0, 1, b, b), 0},
        {"f(0,b,b,(c))", m.f_value(t, 0, 1, {}, b), 0},
        {"f(b-c,b,b,(c))", m.f_value(t, 0, 1, b_minus_c, b), 1},
        {"f(bnc,b,b,(c))", m.f_value(t, 0, 1, bc, b), 1},
    };
    bool ok = res.count == 2;
    std::ostringstream os;
    os << "output " << res.count;
    for (const auto& v : values) {
        if (v.got != v.want) {
            ok = false;
            os << ", " << v.name << " = " << v.got << " (want " << v.want << ")";
        }
    }
    if (ok) os << ", all 7 intermediate values match";
    return {ok, os.str()};
}

Outcome five_path() {
    const Database db = parse_database("R(a,b)\nR(c,b)\nR(c,d)\nR(e,d)\nR(e,f)\n");
    const ConstraintSet sigma = parse_constraints("key R : 1\nkey R : 2\n");
    const Query q = parse_query("R(a,b)");
    const RepairCounts c = count_repairs(db, sigma, q);
    const bool cqa = cqa_decide(db, sigma, q);
    std::ostringstream os;
    os << "(" << c.total << ", " << c.falsifying << ", " << c.satisfying << "), cqa "
       << (cqa ? "true" : "false");
    return {c.total == 4 && c.falsifying == 2 && c.satisfying == 2 && !cqa, os.str()};
}

Outcome oracle_equivalence() {
    const ConstraintKind kinds[] = {ConstraintKind::primary_key, ConstraintKind::fd,
                                    ConstraintKind::dc};
    const QueryKind qkinds[] = {QueryKind::bcq, QueryKind::bucq};
    std::size_t mismatches = 0, largest = 0, nonzero = 0;
    for (std::size_t i = 0; i < kOracleInstances; ++i) {
        const GenSpec spec = random_spec(10'000 + i, 4 + i % 9, kinds[i % 3], qkinds[(i / 3) % 2]);
        const Instance inst = gen_random(spec);
        largest = std::max(largest, inst.db.size());
        const RepairCounts dp = count_repairs(inst.db, inst.constraints, inst.query);
        const OracleCounts brute = oracle_counts(inst.db, inst.constraints, inst.query);
        if (dp.total != brute.total || dp.falsifying != brute.falsifying ||
            dp.satisfying != brute.satisfying) {
            ++mismatches;
        }
        nonzero += brute.falsifying != 0 && brute.satisfying != 0;
    }
    std::ostringstream os;
    os << kOracleInstances << " instances, max |db| " << largest << ", " << nonzero
       << " with both kinds of repair, " << mismatches << " mismatches";
    return {mismatches == 0 && largest <= 12, os.str()};
}

Outcome invariance() {
    std::size_t bad = 0, variants = 0;
    for (std::size_t i = 0; i < kInvarianceInstances; ++i) {
        const GenSpec spec = random_spec(20'000 + i, 12, static_cast<ConstraintKind>(i % 3),
                                         i % 2 ? QueryKind::bucq : QueryKind::bcq);
        const Instance inst = gen_random(spec);
        const auto h = build_solution_conflict(inst.db, inst.constraints, inst.query);
        const RepairCount reference = number_falsify(inst.db, h, decompose(h)).count;
        auto check = [&](const RootedDecomposition& t) {
            ++variants;
            if (number_falsify(inst.db, h, t).count != reference) ++bad;
        };
        const RootedDecomposition td = decompose(h, Heuristic::min_degree);
        check(td);
        // Three distinct roots where the tree has them.
        const std::size_t bags = td.bags.size();
        const BagIndex roots[] = {0, static_cast<BagIndex>(bags / 2), static_cast<BagIndex>(bags - 1)};
        for (BagIndex r : roots) {
            RootedDecomposition t = root_and_order(td, r);
            check(t);
            for (auto& kids : t.children) std::reverse(kids.begin(), kids.end());
            check(t);
        }
    }
    std::ostringstream os;
    os << kInvarianceInstances << " instances, " << variants << " decompositions, " << bad
       << " differing counts";
    return {bad == 0, os.str()};
}

Outcome separation() {
    std::ostringstream os;
    bool ok = true;
    for (std::size_t n = 2; n <= 5; ++n) {
        const Instance bip = gen_bipartite(n);
        const TwMeasures m = tw_measures(bip.db, bip.constraints, bip.query, Heuristic::min_fill, 12);
        const Instance chain = gen_chain(n);
        const TwMeasures mc =
            tw_measures(chain.db, chain.constraints, chain.query, Heuristic::min_fill, 12);
        const bool exact = m.tw_h_exact && m.tw_g_exact && mc.tw_h_exact && mc.tw_g_exact;
        if (!exact) {
            ok = false;
            os << "n=" << n << " exact solver refused; ";
            continue;
        }
        const bool row = *m.tw_h_exact == n && *m.tw_g_exact == 0 && *m.tw_g_exact <= 1 &&
                         *mc.tw_h_exact <= 1 && *mc.tw_g_exact == n;
        ok = ok && row;
        os << "n=" << n << ": I " << *m.tw_h_exact << "/" << *m.tw_g_exact << ", I' "
           << *mc.tw_h_exact << "/" << *mc.tw_g_exact << "; ";
    }
    os << "(tw_H/tw_G)";
    return {ok, os.str()};
}

Outcome pk_independent_sets() {
    std::size_t bad = 0, falsified = 0;
    for (std::size_t i = 0; i < kPkInstances; ++i) {
        GenSpec spec = random_spec(30'000 + i, 6 + i % 7, ConstraintKind::primary_key,
                                   i % 2 ? QueryKind::bucq : QueryKind::bcq);
        const Instance inst = gen_random(spec);
        const OracleCounts brute = oracle_counts(inst.db, inst.constraints, inst.query);
        const bool some_falsifies = brute.falsifying != 0;
        const auto h = build_solution_conflict(inst.db, inst.constraints, inst.query);
        const std::size_t blocks = key_blocks(inst.db, inst.constraints).size();
        if (some_falsifies != (max_independent_set_size(h) == blocks)) ++bad;
        falsified += some_falsifies;
    }
    std::ostringstream os;
    os << kPkInstances << " PK instances (" << falsified << " with a falsifying repair), "
       << bad << " disagreements";
    return {bad == 0, os.str()};
}

Outcome mis_correspondence() {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < kMisInstances; ++i) {
        const GenSpec spec = random_spec(40'000 + i, 4 + i % 7,
                                         i % 2 ? ConstraintKind::dc : ConstraintKind::fd,
                                         QueryKind::bcq);
        const Instance inst = gen_random(spec);
        if (inst.db.size() > 10 || !check_mis_correspondence(inst.db, inst.constraints)) ++bad;
    }
    std::ostringstream os;
    os << kMisInstances << " FD/DC instances, " << bad << " failures";
    return {bad == 0, os.str()};
}

Outcome scaling() {
    const Instance inst = gen_path(kScalingN);
    const auto start = Clock::now();
    const auto h = build_solution_conflict(inst.db, inst.constraints, inst.query);
    const RootedDecomposition t = decompose(h);
    const DpResult res = number_falsify(inst.db, h.conflicts_only(), t);
    const double elapsed = seconds_since(start);
    // Maximal independent sets of a path: p(N) = p(N-2) + p(N-3).
    std::vector<RepairCount> p = {1, 1, 2, 2};
    for (std::size_t n = 4; n <= kScalingN; ++n) p.push_back(p[n - 2] + p[n - 3]);
    bool within = res.stats.within_bound;
    for (BagIndex b = 0; b < t.bags.size(); ++b) {
        within = within && res.stats.memo_entries[b] <= static_cast<std::size_t>(std::pow(3, t.bags[b].size()));
    }
    std::ostringstream os;
    os << "N=" << kScalingN << ", width " << t.width() << ", " << t.bags.size() << " bags, count has "
       << res.count.str().size() << " digits, memo within 3^|b|: " << (within ? "yes" : "no");
    return with_time_limit({t.width() == 1 && within && res.count == p[kScalingN], os.str()}, elapsed,
                           kScalingLimitS);
}

// One relational atom per index, every atom sharing ?x, so all pairs are linked.
Query star_query(std::size_t atoms) {
    std::ostringstream os;
    for (std::size_t i = 0; i < atoms; ++i) {
        os << (i ? ", " : "") << "R" << i << "(?x,?y" << i << ")";
    }
    return parse_query(os.str());
}

Outcome mso() {
    // Byte identity across databases for a fixed q, through the same path the
    // CLI takes (encoding derived from each instance's constraint set).
    const Query q = parse_query("R(?x,?y), R(?y,?z), ?x != ?z\nS(?x,c)");
    std::string first;
    bool identical = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Instance inst = gen_random(random_spec(50'000 + seed, 6 + seed, ConstraintKind::fd,
                                                     QueryKind::bcq));
        const std::string text = emit_mso(mso_encoding_for(inst.constraints), q);
        if (seed == 0) first = text;
        identical = identical && text == first;
    }
    // Least-squares slope of log length against log atoms, atoms 1..8.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int points = 8;
    std::ostringstream lengths;
    for (int a = 1; a <= points; ++a) {
        const double len = static_cast<double>(emit_mso({false, 2}, star_query(a)).size());
        const double dc_len = static_cast<double>(emit_mso({true, 3}, star_query(a)).size());
        const double x = std::log(a), y = std::log(std::max(len, dc_len));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        lengths << (a > 1 ? "," : "") << static_cast<long>(len);
    }
    const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
    const long exponent = std::lround(slope);
    std::ostringstream os;
    os << "identical across 10 databases: " << (identical ? "yes" : "no") << ", lengths " << lengths.str()
       << ", fitted exponent " << slope << " -> " << exponent;
    return {identical && exponent <= kMaxMsoExponent, os.str()};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double limit;
    };
    const Criterion criteria[] = {
        {1, "worked-example trace", worked_example, kWorkedLimitS},
        {2, "five-fact path triple", five_path, kFivePathLimitS},
        {3, "oracle equivalence", oracle_equivalence, kOracleLimitS},
        {4, "decomposition invariance", invariance, 0},
        {5, "treewidth separation", separation, kSeparationLimitS},
        {6, "PK independent-set correspondence", pk_independent_sets, 0},
        {7, "maximal-independent-set correspondence", mis_correspondence, 0},
        {8, "path scaling", scaling, 0},
        {9, "MSO emission", mso, 0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (c.limit > 0) o = with_time_limit(o, seconds_since(start), c.limit);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
                  << "): " << o.detail << std::endl;
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
