#pragma once

// Relational data model: terms, facts, databases, queries, constraints.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace repairkit {

struct Term {
    enum class Kind : std::uint8_t { variable, constant };

    Kind kind = Kind::constant;
    std::string name;

    static Term variable(std::string name) { return {Kind::variable, std::move(name)}; }
    static Term constant(std::string name) { return {Kind::constant, std::move(name)}; }

    bool is_variable() const noexcept { return kind == Kind::variable; }
    bool is_constant() const noexcept { return kind == Kind::constant; }

    /// Variables print with a leading `?`, constants verbatim.
    std::string to_string() const;

    auto operator<=>(const Term&) const = default;
};

/// A ground relational atom. Facts order by relation name, then tuple.
struct Fact {
    std::string relation;
    std::vector<std::string> tuple;

    std::size_t arity() const noexcept { return tuple.size(); }
    std::string to_string() const;

    auto operator<=>(const Fact&) const = default;
};

/// Dense index of a fact inside its Database; ids follow the canonical fact order.
using FactId = std::uint32_t;

/// Sorted, duplicate-free list of fact ids.
using FactSet = std::vector<FactId>;

FactSet make_fact_set(std::vector<FactId> ids);
bool is_subset(const FactSet& sub, const FactSet& super);

/// Finite set of facts under set semantics. Facts are stored in canonical
/// order so a FactId doubles as the fact's rank.
class Database {
public:
    Database() = default;

    /// Sorts and deduplicates. Throws SchemaError when one relation appears
    /// with two arities or a fact has arity 0.
    explicit Database(std::vector<Fact> facts);

    std::size_t size() const noexcept { return facts_.size(); }
    bool empty() const noexcept { return facts_.empty(); }
    const std::vector<Fact>& facts() const noexcept { return facts_; }
    const Fact& fact(FactId id) const { return facts_.at(id); }

    std::optional<FactId> find(const Fact& fact) const;
    /// Like find, but throws PreconditionError for facts not in the database.
    FactId id_of(const Fact& fact) const;
    FactSet ids_of(std::span<const Fact> facts) const;
    FactSet all_ids() const;

    std::optional<std::size_t> arity(const std::string& relation) const;
    const std::map<std::string, std::size_t>& schema() const noexcept { return arities_; }

    /// Constants occurring in facts.
    std::set<std::string> active_domain() const;

    std::vector<Fact> materialize(const FactSet& ids) const;
    Database restrict_to(const FactSet& ids) const;

    std::string describe(const FactSet& ids) const;

    bool operator==(const Database& other) const { return facts_ == other.facts_; }

private:
    std::vector<Fact> facts_;
    std::map<std::string, std::size_t> arities_;
};

struct Atom {
    std::string relation;
    std::vector<Term> terms;

    std::string to_string() const;
    auto operator<=>(const Atom&) const = default;
};

/// `lhs = rhs` or `lhs != rhs`.
struct Comparison {
    Term lhs;
    Term rhs;
    bool equal = false;

    std::string to_string() const;
    auto operator<=>(const Comparison&) const = default;
};

/// One conjunctive query with inequality atoms; variables are existential.
struct Disjunct {
    std::vector<Atom> atoms;
    std::vector<Comparison> inequalities;  // all with equal == false

    std::set<std::string> variables() const;
    bool operator==(const Disjunct&) const = default;
};

/// A Boolean union of conjunctive queries with inequalities, or the
/// identically false query.
class Query {
public:
    /// The query that no database satisfies.
    static Query falsum() { return Query(); }

    /// Throws PreconditionError if the disjunct list is empty, a disjunct has
    /// no relational atom, or an inequality mentions a variable that occurs in
    /// no relational atom of its disjunct.
    static Query of(std::vector<Disjunct> disjuncts);

    bool is_false() const noexcept { return disjuncts_.empty(); }
    const std::vector<Disjunct>& disjuncts() const noexcept { return disjuncts_; }

    /// Number of atoms (relational and inequality) over all disjuncts.
    std::size_t atom_count() const;
    std::size_t max_relational_atoms() const;
    std::set<std::string> constants() const;

    bool operator==(const Query&) const = default;

private:
    Query() = default;
    std::vector<Disjunct> disjuncts_;
};

/// R : lhs -> rhs, positions 1-based.
struct FunctionalDependency {
    std::string relation;
    std::vector<std::size_t> lhs;
    std::vector<std::size_t> rhs;
    auto operator<=>(const FunctionalDependency&) const = default;
};

/// R : positions. Two distinct facts agreeing on the key positions conflict.
struct Key {
    std::string relation;
    std::vector<std::size_t> positions;
    auto operator<=>(const Key&) const = default;
};

/// forall x. not (atoms and comparisons).
struct DenialConstraint {
    std::vector<Atom> atoms;
    std::vector<Comparison> comparisons;
    auto operator<=>(const DenialConstraint&) const = default;
};

using Constraint = std::variant<FunctionalDependency, Key, DenialConstraint>;
using ConstraintSet = std::vector<Constraint>;

/// Throws PreconditionError for an unsafe denial constraint or an empty
/// position list.
void check_well_formed(const Constraint& constraint);

/// Positions in range and atom arities consistent with the database schema.
void validate_constraints(const ConstraintSet& constraints, const Database& db);
void validate_query(const Query& query, const Database& db);

/// Largest number of relational atoms in any constraint when each is read as
/// a denial constraint (FDs and keys count 2).
std::size_t max_constraint_atoms(const ConstraintSet& constraints);
bool is_fd_only(const ConstraintSet& constraints);

using Assignment = std::map<std::string, std::string>;

/// Applies an assignment to a term; identity on constants. Returns nullopt for
/// an unbound variable.
std::optional<std::string> apply(const Assignment& h, const Term& term);

bool evaluate_query(const Database& db, const Query& query);
bool evaluate_query(const Database& db, const FactSet& subset, const Query& query);

bool satisfies_constraints(const Database& db, const FactSet& subset,
                           const ConstraintSet& constraints);
bool satisfies_constraints(const Database& db, const ConstraintSet& constraints);

/// Partition of the database into blocks of key-equal facts. Relations
/// without a key yield singleton blocks. Non-key constraints are ignored.
/// Throws NotPrimaryKeySetError when a relation has two distinct keys.
std::vector<FactSet> key_blocks(const Database& db, const ConstraintSet& keys);

}  // namespace repairkit
