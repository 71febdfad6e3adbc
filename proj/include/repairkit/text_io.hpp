#pragma once

// Line-oriented text formats for databases (.facts), constraint sets (.cst),
// queries (.q) and decompositions, plus the JSON run report.
//
//   facts:        R(a,b)
//   constraints:  key R : 1 2
//                 fd R : 1 -> 2
//                 dc : R(?x,?y), R(?x,?z), ?y != ?z
//   query:        one disjunct per line, e.g. R(?x,?y), S(?y), ?x != c
//                 the single line `false` is the false query
//   decomposition:
//                 bag R(a,b) R(c,b)
//                 edge 0 1
//                 root 0
//
// `#` starts a comment; blank lines are ignored. Tokens starting with `?`
// are variables, other bare tokens are constants.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "repairkit/relational.hpp"
#include "repairkit/repair_count.hpp"
#include "repairkit/treedec.hpp"

namespace repairkit {

struct Diagnostic {
    std::string file;
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;

    std::string to_string() const;
};

Database parse_database(std::string_view text, const std::string& file = {},
                        std::vector<Diagnostic>* warnings = nullptr);
ConstraintSet parse_constraints(std::string_view text, const std::string& file = {},
                                std::vector<Diagnostic>* warnings = nullptr);
Query parse_query(std::string_view text, const std::string& file = {});
/// Bags are read against `db`; child lists follow root_and_order.
RootedDecomposition parse_decomposition(std::string_view text, const Database& db,
                                        const std::string& file = {});

std::string serialize_database(const Database& db);
std::string serialize_constraint(const Constraint& constraint);
std::string serialize_constraints(const ConstraintSet& constraints);
std::string serialize_query(const Query& query);
std::string serialize_decomposition(const RootedDecomposition& t, const Database& db);

/// Reads a whole file; throws ParseError (line 0) when it cannot be opened.
std::string read_text_file(const std::string& path);

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t conflict_edges = 0;
    std::size_t solution_edges = 0;
};

struct Report {
    RepairCount total;
    RepairCount falsifying;
    RepairCount satisfying;
    bool cqa = false;
    std::size_t width_used = 0;
    std::size_t bags = 0;
    GraphStats graph;
    std::map<std::string, double> timings_ms;
};

/// JSON object with decimal-string counts. `include_timings = false` drops
/// the timings_ms field.
std::string emit_report(const Report& report, bool include_timings = true);

}  // namespace repairkit
