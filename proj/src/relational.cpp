#include "repairkit/relational.hpp"

#include <algorithm>
#include <limits>

#include "repairkit/errors.hpp"
#include "repairkit/matching.hpp"

namespace repairkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join_terms(const std::vector<Term>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ',';
        out += terms[i].to_string();
    }
    return out;
}

void check_atom_arity(const Atom& atom, const Database& db, const std::string& where) {
    if (auto ar = db.arity(atom.relation); ar && *ar != atom.terms.size()) {
        throw SchemaError(where + ": atom " + atom.to_string() + " has arity " +
                          std::to_string(atom.terms.size()) + " but relation " + atom.relation +
                          " has arity " + std::to_string(*ar) + " in the database");
    }
}

void check_positions(const std::string& relation, const std::vector<std::size_t>& positions,
                     const Database& db) {
    auto ar = db.arity(relation);
    if (!ar) return;  // relation has no facts; nothing can violate the constraint
    for (auto p : positions) {
        if (p < 1 || p > *ar) {
            throw SchemaError("position " + std::to_string(p) + " out of range for relation " +
                              relation + " of arity " + std::to_string(*ar));
        }
    }
}

std::vector<std::string> project(const Fact& f, const std::vector<std::size_t>& positions) {
    std::vector<std::string> out;
    out.reserve(positions.size());
    for (auto p : positions) {
        if (p < 1 || p > f.arity()) {
            throw SchemaError("position " + std::to_string(p) + " out of range for " +
                              f.to_string());
        }
        out.push_back(f.tuple[p - 1]);
    }
    return out;
}

bool violates_fd(const Database& db, const FactSet& subset, const std::string& relation,
                 const std::vector<std::size_t>& lhs, const std::vector<std::size_t>* rhs) {
    // rhs == nullptr means a key: any two distinct facts agreeing on lhs conflict.
    std::map<std::vector<std::string>, FactId> seen;
    for (FactId id : subset) {
        const Fact& f = db.fact(id);
        if (f.relation != relation) continue;
        auto [it, inserted] = seen.emplace(project(f, lhs), id);
        if (inserted) continue;
        if (rhs == nullptr) return true;
        if (project(db.fact(it->second), *rhs) != project(f, *rhs)) return true;
    }
    return false;
}

}  // namespace

std::string Term::to_string() const { return is_variable() ? "?" + name : name; }

std::string Fact::to_string() const {
    std::string out = relation + "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out += ',';
        out += tuple[i];
    }
    return out + ")";
}

std::string Atom::to_string() const { return relation + "(" + join_terms(terms) + ")"; }

std::string Comparison::to_string() const {
    return lhs.to_string() + (equal ? " = " : " != ") + rhs.to_string();
}

FactSet make_fact_set(std::vector<FactId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

bool is_subset(const FactSet& sub, const FactSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

Database::Database(std::vector<Fact> facts) {
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    for (const auto& f : facts) {
        if (f.arity() == 0) throw SchemaError("fact " + f.to_string() + " has arity 0");
        auto [it, inserted] = arities_.emplace(f.relation, f.arity());
        if (!inserted && it->second != f.arity()) {
            throw SchemaError("relation " + f.relation + " used with arities " +
                              std::to_string(it->second) + " and " + std::to_string(f.arity()));
        }
    }
    if (facts.size() > std::numeric_limits<FactId>::max()) {
        throw SizeGuardError("database too large");
    }
    facts_ = std::move(facts);
}

std::optional<FactId> Database::find(const Fact& fact) const {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), fact);
    if (it == facts_.end() || *it != fact) return std::nullopt;
    return static_cast<FactId>(it - facts_.begin());
}

FactId Database::id_of(const Fact& fact) const {
    if (auto id = find(fact)) return *id;
    throw PreconditionError("fact " + fact.to_string() + " is not in the database");
}

FactSet Database::ids_of(std::span<const Fact> facts) const {
    std::vector<FactId> ids;
    ids.reserve(facts.size());
    for (const auto& f : facts) ids.push_back(id_of(f));
    return make_fact_set(std::move(ids));
}

FactSet Database::all_ids() const {
    FactSet ids(facts_.size());
    for (FactId i = 0; i < ids.size(); ++i) ids[i] = i;
    return ids;
}

std::optional<std::size_t> Database::arity(const std::string& relation) const {
    auto it = arities_.find(relation);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
}

std::set<std::string> Database::active_domain() const {
    std::set<std::string> adom;
    for (const auto& f : facts_) adom.insert(f.tuple.begin(), f.tuple.end());
    return adom;
}

std::vector<Fact> Database::materialize(const FactSet& ids) const {
    std::vector<Fact> out;
    out.reserve(ids.size());
    for (FactId id : ids) out.push_back(fact(id));
    return out;
}

Database Database::restrict_to(const FactSet& ids) const { return Database(materialize(ids)); }

std::string Database::describe(const FactSet& ids) const {
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += fact(ids[i]).to_string();
    }
    return out + "}";
}

std::set<std::string> Disjunct::variables() const {
    std::set<std::string> vars;
    for (const auto& a : atoms) {
        for (const auto& t : a.terms) {
            if (t.is_variable()) vars.insert(t.name);
        }
    }
    return vars;
}

Query Query::of(std::vector<Disjunct> disjuncts) {
    if (disjuncts.empty()) {
        throw PreconditionError("a query needs at least one disjunct; use Query::falsum()");
    }
    for (const auto& d : disjuncts) {
        if (d.atoms.empty()) throw PreconditionError("disjunct without relational atoms");
        const auto vars = d.variables();
        for (const auto& c : d.inequalities) {
            if (c.equal) throw PreconditionError("queries admit only inequality atoms");
            for (const Term* t : {&c.lhs, &c.rhs}) {
                if (t->is_variable() && !vars.contains(t->name)) {
                    throw PreconditionError("variable ?" + t->name +
                                            " of an inequality occurs in no relational atom");
                }
            }
        }
    }
    Query q;
    q.disjuncts_ = std::move(disjuncts);
    return q;
}

std::size_t Query::atom_count() const {
    std::size_t n = 0;
    for (const auto& d : disjuncts_) n += d.atoms.size() + d.inequalities.size();
    return n;
}

std::size_t Query::max_relational_atoms() const {
    std::size_t n = 0;
    for (const auto& d : disjuncts_) n = std::max(n, d.atoms.size());
    return n;
}

std::set<std::string> Query::constants() const {
    std::set<std::string> out;
    for (const auto& d : disjuncts_) {
        for (const auto& a : d.atoms) {
            for (const auto& t : a.terms) {
                if (t.is_constant()) out.insert(t.name);
            }
        }
        for (const auto& c : d.inequalities) {
            if (c.lhs.is_constant()) out.insert(c.lhs.name);
            if (c.rhs.is_constant()) out.insert(c.rhs.name);
        }
    }
    return out;
}

void check_well_formed(const Constraint& constraint) {
    std::visit(Overloaded{
                   [](const FunctionalDependency& fd) {
                       if (fd.rhs.empty()) {
                           throw PreconditionError("fd on " + fd.relation + " has empty rhs");
                       }
                       for (auto p : fd.lhs) {
                           if (p == 0) throw PreconditionError("positions are 1-based");
                       }
                       for (auto p : fd.rhs) {
                           if (p == 0) throw PreconditionError("positions are 1-based");
                       }
                   },
                   [](const Key& key) {
                       if (key.positions.empty()) {
                           throw PreconditionError("key on " + key.relation + " has no positions");
                       }
                       for (auto p : key.positions) {
                           if (p == 0) throw PreconditionError("positions are 1-based");
                       }
                   },
                   [](const DenialConstraint& dc) {
                       if (dc.atoms.empty()) {
                           throw PreconditionError("denial constraint without relational atoms");
                       }
                       std::set<std::string> vars;
                       for (const auto& a : dc.atoms) {
                           for (const auto& t : a.terms) {
                               if (t.is_variable()) vars.insert(t.name);
                           }
                       }
                       for (const auto& c : dc.comparisons) {
                           for (const Term* t : {&c.lhs, &c.rhs}) {
                               if (t->is_variable() && !vars.contains(t->name)) {
                                   throw PreconditionError(
                                       "unsafe denial constraint: ?" + t->name +
                                       " occurs in no relational atom");
                               }
                           }
                       }
                   },
               },
               constraint);
}

void validate_constraints(const ConstraintSet& constraints, const Database& db) {
    for (const auto& c : constraints) {
        check_well_formed(c);
        std::visit(Overloaded{
                       [&](const FunctionalDependency& fd) {
                           check_positions(fd.relation, fd.lhs, db);
                           check_positions(fd.relation, fd.rhs, db);
                       },
                       [&](const Key& key) { check_positions(key.relation, key.positions, db); },
                       [&](const DenialConstraint& dc) {
                           for (const auto& a : dc.atoms) check_atom_arity(a, db, "constraint");
                       },
                   },
                   c);
    }
}

void validate_query(const Query& query, const Database& db) {
    for (const auto& d : query.disjuncts()) {
        for (const auto& a : d.atoms) check_atom_arity(a, db, "query");
    }
}

std::size_t max_constraint_atoms(const ConstraintSet& constraints) {
    std::size_t k = 0;
    for (const auto& c : constraints) {
        if (const auto* dc = std::get_if<DenialConstraint>(&c)) {
            k = std::max(k, dc->atoms.size());
        } else {
            k = std::max<std::size_t>(k, 2);
        }
    }
    return k;
}

bool is_fd_only(const ConstraintSet& constraints) {
    return std::none_of(constraints.begin(), constraints.end(), [](const Constraint& c) {
        return std::holds_alternative<DenialConstraint>(c);
    });
}

std::optional<std::string> apply(const Assignment& h, const Term& term) {
    if (term.is_constant()) return term.name;
    auto it = h.find(term.name);
    if (it == h.end()) return std::nullopt;
    return it->second;
}

bool evaluate_query(const Database& db, const FactSet& subset, const Query& query) {
    if (query.is_false()) return false;
    validate_query(query, db);
    FactIndex index(db, subset);
    return std::any_of(query.disjuncts().begin(), query.disjuncts().end(),
                       [&](const Disjunct& d) { return has_match(index, d.atoms, d.inequalities); });
}

bool evaluate_query(const Database& db, const Query& query) {
    return evaluate_query(db, db.all_ids(), query);
}

bool satisfies_constraints(const Database& db, const FactSet& subset,
                           const ConstraintSet& constraints) {
    std::optional<FactIndex> index;
    for (const auto& c : constraints) {
        const bool violated = std::visit(
            Overloaded{
                [&](const FunctionalDependency& fd) {
                    return violates_fd(db, subset, fd.relation, fd.lhs, &fd.rhs);
                },
                [&](const Key& key) {
                    return violates_fd(db, subset, key.relation, key.positions, nullptr);
                },
                [&](const DenialConstraint& dc) {
                    if (!index) index.emplace(db, subset);
                    return has_match(*index, dc.atoms, dc.comparisons);
                },
            },
            c);
        if (violated) return false;
    }
    return true;
}

bool satisfies_constraints(const Database& db, const ConstraintSet& constraints) {
    return satisfies_constraints(db, db.all_ids(), constraints);
}

std::vector<FactSet> key_blocks(const Database& db, const ConstraintSet& keys) {
    std::map<std::string, std::vector<std::size_t>> primary;
    for (const auto& c : keys) {
        const auto* key = std::get_if<Key>(&c);
        if (!key) continue;
        auto positions = key->positions;
        std::sort(positions.begin(), positions.end());
        positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
        auto [it, inserted] = primary.emplace(key->relation, positions);
        if (!inserted && it->second != positions) {
            throw NotPrimaryKeySetError("relation " + key->relation + " has more than one key");
        }
    }
    std::map<std::pair<std::string, std::vector<std::string>>, FactSet> grouped;
    std::vector<FactSet> blocks;
    for (FactId id = 0; id < db.size(); ++id) {
        const Fact& f = db.fact(id);
        auto it = primary.find(f.relation);
        if (it == primary.end()) {
            blocks.push_back({id});
            continue;
        }
        grouped[{f.relation, project(f, it->second)}].push_back(id);
    }
    for (auto& [_, block] : grouped) blocks.push_back(std::move(block));
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

}  // namespace repairkit
