#include "repairkit/generators.hpp"

#include <algorithm>
#include <random>

#include "repairkit/errors.hpp"

namespace repairkit {

namespace {

std::string path_constant(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "k" + std::to_string(i);
}

void require_positive(std::size_t value, const char* what) {
    if (value == 0) throw PreconditionError(std::string(what) + " must be positive");
}

// Draws come straight from the engine so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(engine_() % n); }
    bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

    // k distinct values of 0..n-1, k <= n.
    std::vector<std::size_t> distinct(std::size_t n, std::size_t k) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + below(n - i)]);
        all.resize(k);
        return all;
    }

private:
    std::mt19937_64 engine_;
};

std::string constant(std::size_t i) { return "c" + std::to_string(i); }

const std::vector<std::string> kVariables = {"x", "y", "z", "w"};

struct Relation {
    std::string name;
    std::size_t arity;
};

Atom random_atom(Rng& rng, const std::vector<Relation>& schema, std::size_t domain,
                 std::size_t variables, std::size_t constant_odds,
                 const std::vector<std::string>& must_reuse) {
    const Relation& rel = schema[rng.below(schema.size())];
    Atom atom{rel.name, {}};
    for (std::size_t p = 0; p < rel.arity; ++p) {
        if (rng.chance(1, constant_odds)) {
            atom.terms.push_back(Term::constant(constant(rng.below(domain))));
        } else {
            atom.terms.push_back(Term::variable(kVariables[rng.below(variables)]));
        }
    }
    // Keep multi-atom bodies joined: the new atom shares a variable with an
    // earlier one.
    if (!must_reuse.empty()) {
        const bool joined = std::any_of(atom.terms.begin(), atom.terms.end(), [&](const Term& t) {
            return t.is_variable() &&
                   std::find(must_reuse.begin(), must_reuse.end(), t.name) != must_reuse.end();
        });
        if (!joined) {
            atom.terms[rng.below(atom.terms.size())] =
                Term::variable(must_reuse[rng.below(must_reuse.size())]);
        }
    }
    return atom;
}

std::vector<std::string> variables_of(const std::vector<Atom>& atoms) {
    std::vector<std::string> out;
    for (const auto& a : atoms) {
        for (const auto& t : a.terms) {
            if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) {
                out.push_back(t.name);
            }
        }
    }
    return out;
}

std::vector<Atom> random_body(Rng& rng, const std::vector<Relation>& schema, std::size_t domain,
                              std::size_t atoms, std::size_t constant_odds) {
    std::vector<Atom> body;
    for (std::size_t i = 0; i < atoms; ++i) {
        body.push_back(random_atom(rng, schema, domain, kVariables.size(), constant_odds,
                                   variables_of(body)));
    }
    return body;
}

std::vector<Fact> random_facts(Rng& rng, const std::vector<Relation>& schema, std::size_t count,
                               std::size_t domain) {
    std::vector<Fact> facts;
    for (std::size_t i = 0; i < count; ++i) {
        const Relation& rel = schema[rng.below(schema.size())];
        Fact f{rel.name, {}};
        for (std::size_t p = 0; p < rel.arity; ++p) f.tuple.push_back(constant(rng.below(domain)));
        facts.push_back(std::move(f));
    }
    return facts;
}

ConstraintSet random_fds(Rng& rng) {
    static const std::vector<FunctionalDependency> pool = {
        {"R", {1}, {2}}, {"R", {2}, {3}}, {"R", {1}, {3}}, {"R", {1, 2}, {3}}, {"R", {3}, {1}},
    };
    ConstraintSet out;
    for (auto i : rng.distinct(pool.size(), 1 + rng.below(2))) out.push_back(pool[i]);
    return out;
}

ConstraintSet random_dcs(Rng& rng, const std::vector<Relation>& schema, std::size_t domain,
                         std::size_t max_atoms) {
    ConstraintSet out;
    const std::size_t count = 1 + rng.below(2);
    for (std::size_t c = 0; c < count; ++c) {
        DenialConstraint dc;
        dc.atoms = random_body(rng, schema, domain, 1 + rng.below(max_atoms), 6);
        const auto vars = variables_of(dc.atoms);
        // A lone atom without comparisons would rule out a whole relation.
        const bool needs_comparison = dc.atoms.size() == 1;
        if (!vars.empty() && (needs_comparison || rng.chance(1, 2))) {
            Term lhs = Term::variable(vars[rng.below(vars.size())]);
            Term rhs = vars.size() > 1 && rng.chance(2, 3)
                           ? Term::variable(vars[rng.below(vars.size())])
                           : Term::constant(constant(rng.below(domain)));
            if (rhs == lhs) rhs = Term::constant(constant(rng.below(domain)));
            dc.comparisons.push_back({lhs, rhs, rng.chance(1, 2)});
        }
        out.push_back(std::move(dc));
    }
    return out;
}

Query random_query(Rng& rng, const std::vector<Relation>& schema, const GenSpec& spec) {
    const std::size_t disjuncts = spec.query_kind == QueryKind::bucq ? 1 + rng.below(2) : 1;
    std::vector<Disjunct> out;
    for (std::size_t d = 0; d < disjuncts; ++d) {
        Disjunct disjunct;
        disjunct.atoms = random_body(rng, schema, spec.domain_size, 1 + rng.below(spec.max_atoms), 4);
        const auto vars = variables_of(disjunct.atoms);
        if (spec.query_kind == QueryKind::bucq && !vars.empty() && rng.chance(1, 2)) {
            Term lhs = Term::variable(vars[rng.below(vars.size())]);
            Term rhs = vars.size() > 1 && rng.chance(1, 2)
                           ? Term::variable(vars[rng.below(vars.size())])
                           : Term::constant(constant(rng.below(spec.domain_size)));
            if (rhs == lhs) rhs = Term::constant(constant(rng.below(spec.domain_size)));
            disjunct.inequalities.push_back({lhs, rhs, false});
        }
        out.push_back(std::move(disjunct));
    }
    return Query::of(std::move(out));
}

// Blocks of 1..block_size facts sharing their key; distinct blocks get
// distinct keys.
std::vector<Fact> block_facts(Rng& rng, const std::vector<Relation>& schema, const GenSpec& spec) {
    std::vector<Fact> facts;
    std::vector<std::size_t> next_key(schema.size(), 0);
    while (facts.size() < spec.n) {
        const std::size_t r = rng.below(schema.size());
        const std::size_t size = std::min(1 + rng.below(spec.block_size), spec.n - facts.size());
        const std::string key = constant(next_key[r]++);
        const std::size_t values = std::max(spec.domain_size, size);
        for (auto v : rng.distinct(values, size)) {
            facts.push_back({schema[r].name, {key, constant(v)}});
        }
    }
    return facts;
}

}  // namespace

Instance gen_bipartite(std::size_t n) {
    require_positive(n, "n");
    std::vector<Fact> facts;
    for (std::size_t i = 1; i <= n; ++i) {
        facts.push_back({"R", {std::to_string(i)}});
        facts.push_back({"S", {std::to_string(i)}});
    }
    Disjunct d;
    d.atoms = {{"R", {Term::variable("x")}}, {"S", {Term::variable("y")}}};
    return {Database(std::move(facts)), {}, Query::of({d})};
}

Instance gen_chain(std::size_t n) {
    require_positive(n, "n");
    std::vector<Fact> facts;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::string c = std::to_string(i);
        facts.push_back({"R", {c, "*"}});
        facts.push_back({"S", {"*", c}});
        facts.push_back({"T", {"neg" + c}});
    }
    const Term x = Term::variable("x"), y = Term::variable("y"), z = Term::variable("z");
    Disjunct d;
    d.atoms = {{"R", {x, y}}, {"S", {y, z}}, {"T", {z}}};
    return {Database(std::move(facts)), {}, Query::of({d})};
}

Instance gen_path(std::size_t n) {
    require_positive(n, "N");
    std::vector<Fact> facts;
    facts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t odd = i % 2;
        facts.push_back({"R", {path_constant(i + odd), path_constant(i - odd + 1)}});
    }
    ConstraintSet sigma = {Key{"R", {1}}, Key{"R", {2}}};
    return {Database(std::move(facts)), std::move(sigma), Query::falsum()};
}

std::optional<Family> parse_family(const std::string& name) {
    if (name == "bipartite") return Family::bipartite;
    if (name == "chain") return Family::chain;
    if (name == "path") return Family::path;
    if (name == "random") return Family::random;
    return std::nullopt;
}

std::optional<ConstraintKind> parse_constraint_kind(const std::string& name) {
    if (name == "pk") return ConstraintKind::primary_key;
    if (name == "fd") return ConstraintKind::fd;
    if (name == "dc") return ConstraintKind::dc;
    return std::nullopt;
}

Instance gen_random(const GenSpec& spec) {
    require_positive(spec.n, "n");
    require_positive(spec.block_size, "block size");
    require_positive(spec.max_atoms, "max atoms");
    require_positive(spec.domain_size, "domain size");
    Rng rng(spec.seed);
    Instance out;
    const std::size_t dc_atoms = std::min<std::size_t>(spec.max_atoms, 3);
    switch (spec.constraint_kind) {
        case ConstraintKind::primary_key: {
            const std::vector<Relation> schema = {{"R", 2}, {"S", 2}};
            out.db = Database(block_facts(rng, schema, spec));
            out.constraints = {Key{"R", {1}}, Key{"S", {1}}};
            out.query = random_query(rng, schema, spec);
            break;
        }
        case ConstraintKind::fd: {
            const std::vector<Relation> schema = {{"R", 3}};
            out.db = Database(random_facts(rng, schema, spec.n, spec.domain_size));
            out.constraints = random_fds(rng);
            out.query = random_query(rng, schema, spec);
            break;
        }
        case ConstraintKind::dc: {
            const std::vector<Relation> schema = {{"R", 2}, {"S", 2}};
            out.db = Database(random_facts(rng, schema, spec.n, spec.domain_size));
            out.constraints = random_dcs(rng, schema, spec.domain_size, dc_atoms);
            out.query = random_query(rng, schema, spec);
            break;
        }
    }
    return out;
}

Instance generate(const GenSpec& spec) {
    switch (spec.family) {
        case Family::bipartite: return gen_bipartite(spec.n);
        case Family::chain: return gen_chain(spec.n);
        case Family::path: return gen_path(spec.n);
        case Family::random: break;
    }
    return gen_random(spec);
}

}  // namespace repairkit
