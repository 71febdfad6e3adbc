#include "repairkit/matching.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace repairkit {

namespace {

std::string value_key(const std::string& relation, std::size_t position, const std::string& value) {
    std::string key;
    key.reserve(relation.size() + value.size() + 8);
    key += relation;
    key += '\x1f';
    key += std::to_string(position);
    key += '\x1f';
    key += value;
    return key;
}

// Reorders atoms so each one shares as many variables as possible with the
// atoms before it; ties keep the input order.
std::vector<std::size_t> join_order(std::span<const Atom> atoms) {
    std::vector<std::size_t> order;
    std::vector<bool> used(atoms.size(), false);
    std::set<std::string> bound;
    for (std::size_t step = 0; step < atoms.size(); ++step) {
        std::size_t best = atoms.size();
        long best_score = -1;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (used[i]) continue;
            long score = 0;
            for (const auto& t : atoms[i].terms) {
                if (t.is_constant() || bound.contains(t.name)) ++score;
            }
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        used[best] = true;
        order.push_back(best);
        for (const auto& t : atoms[best].terms) {
            if (t.is_variable()) bound.insert(t.name);
        }
    }
    return order;
}

class Matcher {
public:
    Matcher(const FactIndex& index, std::span<const Atom> atoms,
            std::span<const Comparison> comparisons, const MatchVisitor& visit)
        : index_(index),
          atoms_(atoms),
          comparisons_(comparisons),
          visit_(visit),
          order_(join_order(atoms)),
          image_(atoms.size(), 0) {}

    bool run() {
        if (!comparisons_hold()) return true;
        return extend(0);
    }

private:
    // Comparisons whose sides are both resolvable must hold.
    bool comparisons_hold() const {
        for (const auto& c : comparisons_) {
            auto l = repairkit::apply(h_, c.lhs);
            auto r = repairkit::apply(h_, c.rhs);
            if (!l || !r) continue;
            if ((*l == *r) != c.equal) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order_.size()) return visit_(image_, h_);
        const std::size_t atom_index = order_[depth];
        const Atom& atom = atoms_[atom_index];

        std::span<const FactId> candidates;
        bool narrowed = false;
        for (std::size_t p = 0; p < atom.terms.size(); ++p) {
            if (auto v = repairkit::apply(h_, atom.terms[p])) {
                candidates = index_.lookup(atom.relation, p, *v);
                narrowed = true;
                break;
            }
        }
        if (!narrowed) candidates = index_.facts_of(atom.relation);

        for (FactId id : candidates) {
            const Fact& fact = index_.db().fact(id);
            if (fact.arity() != atom.terms.size()) continue;
            std::vector<std::string> newly_bound;
            bool ok = true;
            for (std::size_t p = 0; p < atom.terms.size() && ok; ++p) {
                const Term& t = atom.terms[p];
                if (t.is_constant()) {
                    ok = t.name == fact.tuple[p];
                } else if (auto it = h_.find(t.name); it != h_.end()) {
                    ok = it->second == fact.tuple[p];
                } else {
                    h_.emplace(t.name, fact.tuple[p]);
                    newly_bound.push_back(t.name);
                }
            }
            bool keep_going = true;
            if (ok && comparisons_hold()) {
                image_[atom_index] = id;
                keep_going = extend(depth + 1);
            }
            for (const auto& v : newly_bound) h_.erase(v);
            if (!keep_going) return false;
        }
        return true;
    }

    const FactIndex& index_;
    std::span<const Atom> atoms_;
    std::span<const Comparison> comparisons_;
    const MatchVisitor& visit_;
    std::vector<std::size_t> order_;
    std::vector<FactId> image_;
    Assignment h_;
};

}  // namespace

FactIndex::FactIndex(const Database& db) : db_(&db) {
    for (FactId id = 0; id < db.size(); ++id) add(id);
}

FactIndex::FactIndex(const Database& db, const FactSet& subset) : db_(&db) {
    for (FactId id : subset) add(id);
}

void FactIndex::add(FactId id) {
    const Fact& f = db_->fact(id);
    by_relation_[f.relation].push_back(id);
    for (std::size_t p = 0; p < f.tuple.size(); ++p) {
        by_value_[value_key(f.relation, p, f.tuple[p])].push_back(id);
    }
}

std::span<const FactId> FactIndex::facts_of(const std::string& relation) const {
    auto it = by_relation_.find(relation);
    if (it == by_relation_.end()) return {};
    return it->second;
}

std::span<const FactId> FactIndex::lookup(const std::string& relation, std::size_t position,
                                          const std::string& value) const {
    auto it = by_value_.find(value_key(relation, position, value));
    if (it == by_value_.end()) return {};
    return it->second;
}

bool for_each_match(const FactIndex& index, std::span<const Atom> atoms,
                    std::span<const Comparison> comparisons, const MatchVisitor& visit) {
    return Matcher(index, atoms, comparisons, visit).run();
}

bool has_match(const FactIndex& index, std::span<const Atom> atoms,
               std::span<const Comparison> comparisons) {
    return !for_each_match(index, atoms, comparisons,
                           [](std::span<const FactId>, const Assignment&) { return false; });
}

}  // namespace repairkit
