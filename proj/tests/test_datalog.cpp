#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "datalog.hpp"
#include "parser.hpp"

using namespace ag;

TEST_CASE("parses a ground fact") {
    program p = parse_program("vulExists(dbServer, 'CVE-2012-3132', oracleDB).");
    REQUIRE(p.clauses.size() == 1);
    const clause& c = p.clauses[0];
    CHECK(c.is_fact());
    CHECK(c.head.predicate == "vulExists");
    CHECK(c.head.arity() == 3);
    CHECK(c.head.args[1].kind == term_kind::constant);
    CHECK(c.head.args[1].text == "CVE-2012-3132");
    CHECK(c.head.to_string() == "vulExists(dbServer,'CVE-2012-3132',oracleDB)");
}

TEST_CASE("empty input parses to an empty program") {
    program p = parse_program("");
    CHECK(p.clauses.empty());
    CHECK(p.goals.empty());
    CHECK(p.declarations.empty());
}

TEST_CASE("parses a rule with body") {
    program p = parse_program(
        "canAccessHost(H) :- logInService(H, Protocol, Port), netAccess(H, Protocol, Port).");
    REQUIRE(p.clauses.size() == 1);
    const clause& c = p.clauses[0];
    CHECK(!c.is_fact());
    CHECK(c.head.predicate == "canAccessHost");
    CHECK(c.head.arity() == 1);
    CHECK(c.body.size() == 2);
    CHECK(c.body[0].predicate == "logInService");
    CHECK(c.body[1].args[0] == term::variable("H"));
}

TEST_CASE("quoted constants keep their exact text") {
    program p = parse_program("located('OT Network', zone1).\nname('it''s').");
    CHECK(p.clauses[0].head.args[0].text == "OT Network");
    CHECK(p.clauses[1].head.args[0].text == "it's");
    CHECK(p.clauses[1].head.to_string() == "name('it''s')");
}

TEST_CASE("numbers and # in quotes are constants") {
    program p = parse_program("networkService(h, ssh, tcp, 22, 'user#1').");
    CHECK(p.clauses[0].head.args[3] == term::constant("22"));
    CHECK(p.clauses[0].head.args[4].text == "user#1");
}

TEST_CASE("comments are skipped and %% attaches a label") {
    program p = parse_program("/* block */ % line\n%% RULE: example label\nfoo(a) :- bar(a).");
    REQUIRE(p.clauses.size() == 1);
    CHECK(p.clauses[0].label == "RULE: example label");
}

TEST_CASE("attackGoal and attackerGoal register goals") {
    program p = parse_program(
        "attackGoal(execCode(dbServer,_)).\nattackerGoal(dos(attacker,'Generator4')).");
    CHECK(p.clauses.empty());
    REQUIRE(p.goals.size() == 2);
    CHECK(p.goals[0].to_string() == "execCode(dbServer,_)");
    CHECK(p.goals[1].to_string() == "dos(attacker,'Generator4')");
}

TEST_CASE("primitive and derived declarations are extracted") {
    program p = parse_program("primitive(located(Host, Zone, Type)).\nderived(dos(P, H)).");
    CHECK(p.clauses.empty());
    REQUIRE(p.declarations.size() == 2);
    CHECK(p.declarations[0].role == predicate_role::input_fact);
    CHECK(key_of(p.declarations[0].signature) == predicate_key{"located", 3});
    CHECK(p.declarations[1].role == predicate_role::derived);
}

TEST_CASE("same name with two arities is two predicates, not an error") {
    program p = parse_program("dataFlow(a, b, f, twoWay).\ndataFlow(a, f).");
    CHECK(key_of(p.clauses[0].head) != key_of(p.clauses[1].head));
}

TEST_CASE("syntax errors carry line and column") {
    SUBCASE("unterminated clause") {
        try {
            parse_program("foo(a)");
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.line() == 1);
            CHECK(e.column() == 7);
        }
    }
    SUBCASE("unbalanced parens") {
        CHECK_THROWS_AS(parse_program("foo(a, b."), parse_error);
    }
    SUBCASE("unterminated quote") {
        CHECK_THROWS_AS(parse_program("foo('abc)."), parse_error);
    }
    SUBCASE("empty quoted constant") {
        CHECK_THROWS_AS(parse_program("foo('')."), parse_error);
    }
    SUBCASE("unterminated block comment") {
        CHECK_THROWS_AS(parse_program("/* foo"), parse_error);
    }
    SUBCASE("negation is rejected") {
        CHECK_THROWS_WITH_AS(parse_program("p(X) :- \\+ q(X)."),
                             doctest::Contains("negation"), parse_error);
    }
    SUBCASE("infix operators are rejected") {
        CHECK_THROWS_AS(parse_program("p(X) :- X = a."), parse_error);
        CHECK_THROWS_AS(parse_program("p(X) :- q(X), X < 3."), parse_error);
    }
    SUBCASE("wildcard in a rule head") {
        CHECK_THROWS_AS(parse_program("p(_) :- q(X)."), parse_error);
    }
    SUBCASE("nested terms outside goal/declaration forms") {
        CHECK_THROWS_AS(parse_program("p(f(a))."), parse_error);
        CHECK_THROWS_AS(parse_program("p(X) :- q(f(X))."), parse_error);
    }
    SUBCASE("line numbers advance") {
        try {
            parse_program("foo(a).\nbar(b.\n");
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.line() == 2);
        }
    }
}

TEST_CASE("unify binds variables against a ground fact") {
    atom pattern = parse_atom("vulExists(dbServer, VulID, oracleDB)");
    atom fact = parse_atom("vulExists(dbServer, 'CVE-2012-3132', oracleDB)");
    auto bound = unify(pattern, fact, binding{});
    REQUIRE(bound.has_value());
    REQUIRE(bound->find("VulID") != nullptr);
    CHECK(*bound->find("VulID") == "CVE-2012-3132");
}

TEST_CASE("unify respects the seed binding") {
    auto bound = binding{};
    bound.bind("X", "b");
    CHECK(!unify(parse_atom("p(X)"), parse_atom("p(a)"), bound).has_value());
    auto same = unify(parse_atom("p(X)"), parse_atom("p(b)"), bound);
    REQUIRE(same.has_value());
    CHECK(*same == bound);
}

TEST_CASE("wildcards on either side match anything and bind nothing") {
    auto bound = unify(parse_atom("hacl(host1, dbServer, _, _)"),
                       parse_atom("hacl(host1, dbServer, tcp, 1521)"), binding{});
    REQUIRE(bound.has_value());
    CHECK(bound->empty());

    auto var_vs_wildcard = unify(parse_atom("networkService(H, P, Prot, Port, User)"),
                                 parse_atom("networkService('Historian', ssh, tcp, 22, _)"),
                                 binding{});
    REQUIRE(var_vs_wildcard.has_value());
    CHECK(var_vs_wildcard->find("User") == nullptr); // stays free
    CHECK(*var_vs_wildcard->find("H") == "Historian");
}

TEST_CASE("unify fails on predicate or arity mismatch without throwing") {
    CHECK(!unify(parse_atom("p(a)"), parse_atom("q(a)"), binding{}).has_value());
    CHECK(!unify(parse_atom("p(a)"), parse_atom("p(a, b)"), binding{}).has_value());
}

TEST_CASE("substituting a unifier reproduces a matching atom") {
    // Idempotence: applying the binding and re-unifying yields the same binding.
    std::mt19937 rng(7);
    auto random_atom = [&rng](bool allow_vars) {
        std::uniform_int_distribution<int> kind_dist(0, 9);
        atom a{"p", {}};
        for (int i = 0; i < 3; ++i) {
            int roll = kind_dist(rng);
            if (roll < 5 || !allow_vars)
                a.args.push_back(roll < 2 ? term::wildcard()
                                          : term::constant("c" + std::to_string(roll)));
            else
                a.args.push_back(term::variable("V" + std::to_string(roll % 3)));
        }
        return a;
    };
    int successes = 0;
    for (int i = 0; i < 500; ++i) {
        atom pattern = random_atom(true);
        atom fact = random_atom(false);
        auto bound = unify(pattern, fact, binding{});
        if (!bound) continue;
        ++successes;
        CHECK(matches(substitute(pattern, *bound), fact));
        auto again = unify(pattern, fact, *bound);
        REQUIRE(again.has_value());
        CHECK(*again == *bound);
    }
    CHECK(successes > 50);
}

TEST_CASE("pretty-printing and re-parsing yields a structurally identical program") {
    const char* source = R"(
primitive(hacl(Src, Dst, Prot, Port)).
derived(netAccess(H, Prot, Port)).

%% RULE 6: direct network access
netAccess(Host, Prot, Port) :-
    attackerLocated(Zone),
    hacl(Zone, Host, Prot, Port).

attackerLocated(internet).
hacl(internet, 'db server', tcp, 1521).
attackGoal(netAccess('db server', _, _)).
)";
    program first = parse_program(source);
    program second = parse_program(first.to_string());
    CHECK(first == second);
    CHECK(first.to_string() == second.to_string());
}

TEST_CASE("round-trip holds for randomly generated programs") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> dist(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        program p;
        int clause_count = 1 + dist(rng) % 5;
        for (int i = 0; i < clause_count; ++i) {
            clause c;
            c.head = atom{"pred" + std::to_string(dist(rng)), {}};
            int arity = dist(rng) % 4;
            for (int a = 0; a < arity; ++a) {
                int roll = dist(rng);
                if (roll < 4)
                    c.head.args.push_back(term::constant("c" + std::to_string(roll)));
                else if (roll < 6)
                    c.head.args.push_back(term::constant("odd text #" + std::to_string(roll)));
                else if (roll < 8)
                    c.head.args.push_back(term::wildcard());
                else
                    c.head.args.push_back(term::constant(std::to_string(roll)));
            }
            if (dist(rng) < 3) {
                atom b{"body" + std::to_string(dist(rng)), {term::variable("X")}};
                c.body.push_back(b);
                c.label = "label " + std::to_string(trial);
                // rule heads may not hold wildcards; swap them for variables
                for (auto& t : c.head.args)
                    if (t.kind == term_kind::wildcard) t = term::variable("X");
            }
            p.clauses.push_back(std::move(c));
        }
        program reparsed = parse_program(p.to_string());
        CHECK(reparsed == p);
    }
}

TEST_CASE("printing quotes only when needed") {
    CHECK(print_term(term::constant("plc1")) == "plc1");
    CHECK(print_term(term::constant("22")) == "22");
    CHECK(print_term(term::constant("PLC1")) == "'PLC1'");
    CHECK(print_term(term::constant("OT Network")) == "'OT Network'");
    CHECK(print_term(term::constant("admin_PLC2Credentials")) == "admin_PLC2Credentials");
    CHECK(print_term(term::wildcard()) == "_");
    CHECK(print_term(term::variable("Host")) == "Host");
}

TEST_CASE("string equality is exact and case-sensitive") {
    CHECK(term::constant("PLC1") != term::constant("plc1"));
    CHECK(!unify(parse_atom("p('PLC1')"), parse_atom("p(plc1)"), binding{}).has_value());
}
