#include "repairkit/gaifman.hpp"

#include <algorithm>
#include <sstream>

#include "repairkit/errors.hpp"
#include "repairkit/hypergraph.hpp"
#include "repairkit/matching.hpp"

namespace repairkit {

namespace {

std::set<std::string> atom_variables(const Atom& a) {
    std::set<std::string> out;
    for (const auto& t : a.terms) {
        if (t.is_variable()) out.insert(t.name);
    }
    return out;
}

bool unify(const Atom& atom, const Fact& fact, Assignment& h) {
    if (atom.relation != fact.relation || atom.terms.size() != fact.arity()) return false;
    for (std::size_t p = 0; p < atom.terms.size(); ++p) {
        const Term& t = atom.terms[p];
        if (t.is_constant()) {
            if (t.name != fact.tuple[p]) return false;
            continue;
        }
        auto [it, inserted] = h.emplace(t.name, fact.tuple[p]);
        if (!inserted && it->second != fact.tuple[p]) return false;
    }
    return true;
}

std::vector<std::string> project(const Fact& f, const std::vector<std::size_t>& positions) {
    std::vector<std::string> out;
    for (auto p : positions) out.push_back(f.tuple.at(p - 1));
    return out;
}

// Pairs {f, g} with {f, g} violating Σ. Only facts that agree on the
// left-hand side of some FD or key can violate it together, so candidates
// come from those groups; each candidate is checked against Σ directly.
std::vector<FactSet> fd_depfails(const Database& db, const ConstraintSet& constraints) {
    std::set<FactSet> candidates;
    FactIndex index(db);
    for (const auto& c : constraints) {
        const std::string* relation = nullptr;
        const std::vector<std::size_t>* lhs = nullptr;
        if (const auto* fd = std::get_if<FunctionalDependency>(&c)) {
            relation = &fd->relation;
            lhs = &fd->lhs;
        } else if (const auto* key = std::get_if<Key>(&c)) {
            relation = &key->relation;
            lhs = &key->positions;
        } else {
            continue;
        }
        std::map<std::vector<std::string>, std::vector<FactId>> groups;
        for (FactId id : index.facts_of(*relation)) groups[project(db.fact(id), *lhs)].push_back(id);
        for (const auto& [_, group] : groups) {
            for (std::size_t a = 0; a < group.size(); ++a) {
                for (std::size_t b = a + 1; b < group.size(); ++b) {
                    candidates.insert({group[a], group[b]});
                }
            }
        }
    }
    std::vector<FactSet> out;
    for (const auto& pair : candidates) {
        if (!satisfies_constraints(db, pair, constraints)) out.push_back(pair);
    }
    return out;
}

// Every inconsistent set of at most k facts: supersets of minimal conflicts.
std::vector<FactSet> dc_depfails(const Database& db, const ConstraintSet& constraints,
                                 std::size_t k) {
    std::set<FactSet> out;
    const std::size_t n = db.size();
    for (const auto& conflict : minimal_conflicts(db, constraints)) {
        if (conflict.size() > k) continue;
        auto grow = [&](auto&& self, FactSet current, FactId from) -> void {
            out.insert(current);
            if (current.size() == k) return;
            for (FactId v = from; v < n; ++v) {
                if (std::binary_search(current.begin(), current.end(), v)) continue;
                FactSet next = current;
                next.insert(std::lower_bound(next.begin(), next.end(), v), v);
                self(self, std::move(next), v + 1);
            }
        };
        grow(grow, conflict, 0);
    }
    return {out.begin(), out.end()};
}

std::string var(const std::string& base, std::size_t i) { return base + std::to_string(i); }

std::string linked_name(std::size_t l, std::size_t i, std::size_t j) {
    return "linked_" + std::to_string(l + 1) + "_" + std::to_string(i + 1) + "_" +
           std::to_string(j + 1);
}

// (forall v1 (forall v2 ... body))
std::string quantify(const std::string& q, const std::vector<std::string>& vars,
                     const std::string& body) {
    std::string out;
    for (const auto& v : vars) out += "(" + q + " " + v + " ";
    out += body;
    out += std::string(vars.size(), ')');
    return out;
}

std::string conjunction(const std::vector<std::string>& items) {
    if (items.empty()) return "true";
    if (items.size() == 1) return items.front();
    std::string out = "(and";
    for (const auto& i : items) out += " " + i;
    return out + ")";
}

}  // namespace

LinkIndex q_linked(const Disjunct& disjunct) {
    LinkIndex out;
    const std::size_t s = disjunct.atoms.size();
    std::vector<std::set<std::string>> vars(s);
    for (std::size_t i = 0; i < s; ++i) vars[i] = atom_variables(disjunct.atoms[i]);
    auto bridged = [&](std::size_t i, std::size_t j) {
        for (const auto& c : disjunct.inequalities) {
            if (!c.lhs.is_variable() || !c.rhs.is_variable()) continue;
            if ((vars[i].contains(c.lhs.name) && vars[j].contains(c.rhs.name)) ||
                (vars[i].contains(c.rhs.name) && vars[j].contains(c.lhs.name))) {
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const bool shared = std::any_of(vars[i].begin(), vars[i].end(),
                                            [&](const std::string& v) { return vars[j].contains(v); });
            if (i == j || shared || bridged(i, j)) out.emplace(i, j);
        }
    }
    return out;
}

bool q_consistent(const Fact& fi, const Fact& fj, const Disjunct& disjunct, std::size_t i,
                  std::size_t j) {
    if (i >= disjunct.atoms.size() || j >= disjunct.atoms.size()) return false;
    if (!q_linked(disjunct).contains({i, j})) return false;
    Assignment h;
    if (!unify(disjunct.atoms[i], fi, h) || !unify(disjunct.atoms[j], fj, h)) return false;
    for (const auto& c : disjunct.inequalities) {
        auto l = repairkit::apply(h, c.lhs);
        auto r = repairkit::apply(h, c.rhs);
        if (l && r && *l == *r) return false;
    }
    return true;
}

MsoEncoding mso_encoding_for(const ConstraintSet& constraints) {
    if (is_fd_only(constraints)) return {false, 2};
    return {true, std::max<std::size_t>(2, max_constraint_atoms(constraints))};
}

GaifmanStructure build_structure(const Database& db, const ConstraintSet& constraints,
                                 const Query& query) {
    validate_constraints(constraints, db);
    validate_query(query, db);
    GaifmanStructure s;
    s.domain_size = db.size();
    const auto encoding = mso_encoding_for(constraints);
    s.dc_encoding = encoding.dc;
    s.depfails_arity = encoding.depfails_arity;
    s.depfails = encoding.dc ? dc_depfails(db, constraints, encoding.depfails_arity)
                             : fd_depfails(db, constraints);

    FactIndex index(db);
    for (std::size_t l = 0; l < query.disjuncts().size(); ++l) {
        const Disjunct& d = query.disjuncts()[l];
        for (auto [i, j] : q_linked(d)) {
            auto& pairs = s.linked[{l, i, j}];
            for (FactId f : index.facts_of(d.atoms[i].relation)) {
                for (FactId g : index.facts_of(d.atoms[j].relation)) {
                    if (q_consistent(db.fact(f), db.fact(g), d, i, j)) pairs.emplace_back(f, g);
                }
            }
        }
    }
    return s;
}

Graph gaifman_graph(const GaifmanStructure& structure) {
    Graph g(structure.domain_size);
    for (const auto& set : structure.depfails) {
        for (std::size_t a = 0; a < set.size(); ++a) {
            for (std::size_t b = a + 1; b < set.size(); ++b) g.add_edge(set[a], set[b]);
        }
    }
    for (const auto& [_, pairs] : structure.linked) {
        for (auto [f, h] : pairs) g.add_edge(f, h);
    }
    return g;
}

std::string emit_mso(const MsoEncoding& encoding, const Query& query) {
    const std::size_t k = encoding.dc ? encoding.depfails_arity : 2;
    std::vector<std::string> xs;
    for (std::size_t i = 1; i <= k; ++i) xs.push_back(var("x", i));

    std::ostringstream os;
    os << "; " << (encoding.dc ? "Psi" : "Phi") << ": every repair T satisfies the query\n";

    // phi_sat(T): no depfails tuple inside T.
    {
        std::vector<std::string> members;
        for (const auto& x : xs) members.push_back("(T " + x + ")");
        std::string depfails = "(depfails";
        for (const auto& x : xs) depfails += " " + x;
        depfails += ")";
        os << "(define (phi_sat T) "
           << quantify("forall", xs,
                       "(implies " + conjunction(members) + " (not " + depfails + "))")
           << ")\n";
    }

    // phi_T_q_sat_l(T): T holds facts matching the atoms of disjunct l, linked pairwise.
    const auto& disjuncts = query.disjuncts();
    for (std::size_t l = 0; l < disjuncts.size(); ++l) {
        const Disjunct& d = disjuncts[l];
        std::vector<std::string> vs;
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < d.atoms.size(); ++i) {
            vs.push_back(var("y", i + 1));
            parts.push_back("(T " + vs.back() + ")");
        }
        for (auto [i, j] : q_linked(d)) {
            parts.push_back("(" + linked_name(l, i, j) + " " + vs[i] + " " + vs[j] + ")");
        }
        os << "(define (phi_T_q_sat_" << l + 1 << " T) "
           << quantify("exists", vs, conjunction(parts)) << ")\n";
    }

    os << "(define (phi_Tt_supsetneq_T T Tt) (and (forall x (implies (T x) (Tt x)))"
          " (exists y (and (not (T y)) (Tt y)))))\n";
    os << "(define (phi_repair T) (and (phi_sat T)"
          " (forall-set Tt (or (not (phi_Tt_supsetneq_T T Tt)) (not (phi_sat Tt))))))\n";

    std::string sat = "false";
    if (!disjuncts.empty()) {
        sat = "(or";
        for (std::size_t l = 0; l < disjuncts.size(); ++l) {
            sat += " (phi_T_q_sat_" + std::to_string(l + 1) + " T)";
        }
        sat += ")";
    }
    os << "(define " << (encoding.dc ? "Psi" : "Phi") << " (forall-set T (implies (phi_repair T) "
       << sat << ")))\n";
    return os.str();
}

TwMeasures tw_measures(const Database& db, const ConstraintSet& constraints, const Query& query,
                       Heuristic heuristic, std::size_t exact_limit) {
    TwMeasures m;
    const Graph h = primal_graph(build_solution_conflict(db, constraints, query));
    const Graph g = gaifman_graph(build_structure(db, constraints, query));
    m.tw_h_upper = decompose(h, heuristic).width();
    m.tw_g_upper = decompose(g, heuristic).width();
    try {
        m.tw_h_exact = exact_treewidth(h, exact_limit);
    } catch (const SizeGuardError&) {
    }
    try {
        m.tw_g_exact = exact_treewidth(g, exact_limit);
    } catch (const SizeGuardError&) {
    }
    return m;
}

}  // namespace repairkit
