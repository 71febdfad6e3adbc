#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "repairkit/count.hpp"
#include "repairkit/errors.hpp"
#include "repairkit/generators.hpp"

using namespace repairkit;
using namespace testkit;

TEST_CASE("parse_database") {
    CHECK(parse_database("R(a,b)\nR(c,b)").size() == 2);

    std::vector<Diagnostic> warnings;
    CHECK(parse_database("R(a,b)\nR(a,b)", "x.facts", &warnings).size() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].line == 2);

    try {
        parse_database("R(a,b)\nR(a)", "x.facts");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.file() == "x.facts");
        CHECK(std::string(e.what()).rfind("x.facts:2:", 0) == 0);
    }
    CHECK_THROWS_AS(parse_database("R(a,b"), ParseError);
    CHECK_THROWS_AS(parse_database("R(?x)"), ParseError);
    CHECK(parse_database("# comment\n\n  R(a) # trailing\n").size() == 1);
}

TEST_CASE("parse_constraints") {
    const auto keys = parse_constraints("key R : 1\nkey R : 2");
    REQUIRE(keys.size() == 2);
    CHECK(std::get<Key>(keys[0]).positions == std::vector<std::size_t>{1});
    CHECK(std::get<Key>(keys[1]).positions == std::vector<std::size_t>{2});

    const auto fd = parse_constraints("fd R : 1 -> 2");
    REQUIRE(fd.size() == 1);
    CHECK(std::get<FunctionalDependency>(fd[0]) == FunctionalDependency{"R", {1}, {2}});

    const auto dc = parse_constraints("dc : R(?x,?y), R(?x,?z), ?y != ?z");
    REQUIRE(dc.size() == 1);
    const auto& d = std::get<DenialConstraint>(dc[0]);
    CHECK(d.atoms.size() == 2);
    CHECK(d.comparisons.size() == 1);

    // The DC encodes the FD: same verdict on every pair drawn from a small pool.
    const Database db = db_of("R(a,b)\nR(a,c)\nR(b,b)\nR(b,b2)\nR(c,a)");
    for (FactId i = 0; i < db.size(); ++i) {
        for (FactId j = i + 1; j < db.size(); ++j) {
            CHECK(satisfies_constraints(db, {i, j}, dc) == satisfies_constraints(db, {i, j}, fd));
        }
    }

    std::vector<Diagnostic> warnings;
    CHECK(parse_constraints("key R : 1\nkey R : 1", "", &warnings).size() == 1);
    CHECK(warnings.size() == 1);
    CHECK_THROWS_AS(parse_constraints("dc : R(?x), ?y != a"), ParseError);
    CHECK_THROWS_AS(parse_constraints("key R : 0"), ParseError);
    CHECK_THROWS_AS(parse_constraints("fd R : 1 ->"), ParseError);
    CHECK_THROWS_AS(parse_constraints("unique R : 1"), ParseError);
}

TEST_CASE("parse_query") {
    const Query ground = parse_query("R(a,b)");
    REQUIRE(ground.disjuncts().size() == 1);
    CHECK(ground.disjuncts()[0].atoms[0].terms[0] == Term::constant("a"));

    const Query u = parse_query("R(?x,?z)\nS(?u,?y)");
    CHECK(u.disjuncts().size() == 2);

    const Query ne = parse_query("R(?x), ?x != c");
    REQUIRE(ne.disjuncts()[0].inequalities.size() == 1);
    CHECK(ne.disjuncts()[0].inequalities[0].rhs == Term::constant("c"));

    CHECK(parse_query("false").is_false());
    CHECK(parse_query("# only false\nfalse\n").is_false());
    CHECK_THROWS_AS(parse_query(""), ParseError);
    CHECK_THROWS_AS(parse_query("R(?x), ?y != c"), ParseError);
    CHECK_THROWS_AS(parse_query("?x != c"), ParseError);
    CHECK_THROWS_AS(parse_query("R(?x), ?x = c"), ParseError);
}

TEST_CASE("parse_decomposition") {
    const Database db = db_of(kWorked);
    const auto t = parse_decomposition("bag R(a,b) R(c,b)\nbag R(c,b) R(c,d)\nedge 0 1\nroot 1\n", db);
    CHECK(t.bags.size() == 2);
    CHECK(t.root == 1);
    CHECK(t.children[1] == std::vector<BagIndex>{0});
    CHECK(parse_decomposition(serialize_decomposition(t, db), db) == t);
    CHECK_THROWS_AS(parse_decomposition("bag R(z,z)\n", db), Error);
    CHECK_THROWS_AS(parse_decomposition("bag R(a,b)\nedge 0 3\n", db), ParseError);
}

TEST_CASE("round trip on generated instances") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GenSpec spec;
        spec.n = 10;
        spec.seed = seed;
        spec.constraint_kind = static_cast<ConstraintKind>(seed % 3);
        spec.query_kind = seed % 2 ? QueryKind::bucq : QueryKind::bcq;
        const Instance inst = gen_random(spec);
        CHECK(parse_database(serialize_database(inst.db)) == inst.db);
        CHECK(parse_constraints(serialize_constraints(inst.constraints)) == inst.constraints);
        CHECK(parse_query(serialize_query(inst.query)) == inst.query);
    }
    const Query f = Query::falsum();
    CHECK(parse_query(serialize_query(f)) == f);
}

TEST_CASE("database parsing ignores line order; query keeps disjunct order") {
    CHECK(parse_database("R(a)\nS(b)") == parse_database("S(b)\nR(a)"));
    const Query q = parse_query("S(?y)\nR(?x)");
    CHECK(q.disjuncts()[0].atoms[0].relation == "S");
}

TEST_CASE("emit_report") {
    const Database path5 = db_of(kFivePath);
    const auto counts = count_repairs(path5, sigma_of(kTwoKeys), query_of("R(a,b)"));
    Report r;
    r.total = counts.total;
    r.falsifying = counts.falsifying;
    r.satisfying = counts.satisfying;
    r.cqa = counts.falsifying == 0;
    r.timings_ms["dp"] = 1.5;
    const auto j = nlohmann::json::parse(emit_report(r));
    CHECK(j["repairs_total"] == "4");
    CHECK(j["repairs_falsifying"] == "2");
    CHECK(j["repairs_satisfying"] == "2");
    CHECK(j["cqa"] == false);
    CHECK(j.contains("timings_ms"));
    CHECK_FALSE(nlohmann::json::parse(emit_report(r, false)).contains("timings_ms"));

    const auto consistent = count_repairs(db_of("R(a,b)"), sigma_of("key R : 1"), query_of("R(?x,?y)"));
    CHECK(consistent.total == 1);
    CHECK(consistent.falsifying == 0);

    const auto empty = count_repairs(Database(), {}, Query::falsum());
    CHECK(empty.total == 1);

    // Counts beyond 64 bits stay exact in the report.
    Report big;
    big.total = RepairCount(1) << 100;
    CHECK(nlohmann::json::parse(emit_report(big))["repairs_total"] == "1267650600228229401496703205376");
}
