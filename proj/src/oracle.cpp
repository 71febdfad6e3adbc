#include "repairkit/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <future>
#include <thread>

#include "repairkit/errors.hpp"

namespace repairkit {

namespace {

void guard(std::size_t n, std::size_t limit) {
    if (n > limit || n > 30) {
        throw SizeGuardError("brute-force oracle limited to " + std::to_string(limit) +
                             " facts, got " + std::to_string(n));
    }
}

FactSet mask_to_set(std::uint32_t mask) {
    FactSet out;
    for (std::uint32_t m = mask; m; m &= m - 1) out.push_back(static_cast<FactId>(std::countr_zero(m)));
    return out;
}

// Calls fn(mask) for every n-bit mask with exactly k bits set, ascending.
template <class Fn>
void for_each_k_subset(std::size_t n, std::size_t k, Fn&& fn) {
    if (k == 0) {
        fn(0u);
        return;
    }
    if (k > n) return;
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t end = std::uint64_t{1} << n;
    while (mask < end) {
        fn(static_cast<std::uint32_t>(mask));
        const std::uint64_t low = mask & -mask;
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
}

// Evaluates pred on every element, split across worker threads; results keep
// the input order.
template <class T, class Pred>
std::vector<char> parallel_flags(const std::vector<T>& items, Pred pred) {
    std::vector<char> flags(items.size(), 0);
    const std::size_t workers = std::min(worker_threads(), std::max<std::size_t>(1, items.size() / 64));
    if (workers <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) flags[i] = pred(items[i]) ? 1 : 0;
        return flags;
    }
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (items.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(items.size(), begin + chunk);
        if (begin >= end) break;
        jobs.push_back(std::async(std::launch::async, [&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) flags[i] = pred(items[i]) ? 1 : 0;
        }));
    }
    for (auto& j : jobs) j.get();
    return flags;
}

}  // namespace

std::size_t worker_threads() {
    if (const char* env = std::getenv("REPAIRKIT_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RepairList enumerate_repairs(const Database& db, const ConstraintSet& constraints,
                             std::size_t limit) {
    const std::size_t n = db.size();
    guard(n, limit);
    validate_constraints(constraints, db);

    // Largest sets first: a consistent set is a repair unless it lies inside
    // a repair found at a larger size.
    std::vector<std::uint32_t> repairs;
    for (std::size_t k = n + 1; k-- > 0;) {
        std::vector<std::uint32_t> candidates;
        for_each_k_subset(n, k, [&](std::uint32_t mask) {
            const bool covered = std::any_of(repairs.begin(), repairs.end(),
                                             [mask](std::uint32_t r) { return (mask & r) == mask; });
            if (!covered) candidates.push_back(mask);
        });
        const auto consistent = parallel_flags(candidates, [&](std::uint32_t mask) {
            return satisfies_constraints(db, mask_to_set(mask), constraints);
        });
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (consistent[i]) repairs.push_back(candidates[i]);
        }
    }
    RepairList out;
    out.reserve(repairs.size());
    for (auto mask : repairs) out.push_back(mask_to_set(mask));
    std::sort(out.begin(), out.end());
    return out;
}

OracleCounts oracle_counts(const Database& db, const ConstraintSet& constraints, const Query& query,
                           std::size_t limit) {
    const RepairList repairs = enumerate_repairs(db, constraints, limit);
    const auto satisfied = parallel_flags(
        repairs, [&](const FactSet& repair) { return evaluate_query(db, repair, query); });
    OracleCounts counts;
    counts.total = repairs.size();
    const auto sat = static_cast<std::size_t>(std::count(satisfied.begin(), satisfied.end(), 1));
    counts.satisfying = sat;
    counts.falsifying = repairs.size() - sat;
    return counts;
}

std::vector<FactSet> maximal_independent_sets(const LabeledHypergraph& h, std::size_t limit) {
    const std::size_t n = h.node_count;
    guard(n, limit);
    std::vector<std::uint32_t> edges;
    for (const auto* list : {&h.conflict_edges, &h.solution_edges}) {
        for (const auto& e : *list) {
            std::uint32_t m = 0;
            for (FactId v : e) m |= 1u << v;
            edges.push_back(m);
        }
    }
    auto independent = [&](std::uint32_t set) {
        return std::none_of(edges.begin(), edges.end(), [set](std::uint32_t e) { return (e & set) == e; });
    };
    std::vector<FactSet> out;
    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < end; ++m) {
        const auto set = static_cast<std::uint32_t>(m);
        if (!independent(set)) continue;
        bool maximal = true;
        for (std::size_t v = 0; v < n && maximal; ++v) {
            if (!(set & (1u << v)) && independent(set | (1u << v))) maximal = false;
        }
        if (maximal) out.push_back(mask_to_set(set));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool check_mis_correspondence(const Database& db, const ConstraintSet& constraints,
                              std::size_t limit) {
    const RepairList repairs = enumerate_repairs(db, constraints, limit);
    LabeledHypergraph h;
    h.node_count = db.size();
    h.conflict_edges = minimal_conflicts(db, constraints);
    return maximal_independent_sets(h, limit) == repairs;
}

}  // namespace repairkit
