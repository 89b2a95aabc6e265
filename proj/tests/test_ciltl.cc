#include <doctest.h>

#include "coin/families.hh"
#include "fixtures.hh"
#include "oracles.hh"

using namespace coin;

namespace {

std::string error_of(const std::string &text) {
    try {
        parse_formula(text);
    } catch (const ParseError &e) {
        return e.what();
    }
    return "";
}

const FormulaPtr p = ltl::act(1, "b", 1);
const FormulaPtr q = ltl::act(2, "c", 1);

} // namespace

TEST_CASE("formula parsing") {
    using namespace ltl;
    CHECK(equal(parse_formula("G (act(1,b,1) -> F act(2,c,1))"), G(implies(p, F(q)))));
    CHECK(equal(parse_formula("F en(1,a,2)"), F(en(1, "a", 2))));
    CHECK(equal(parse_formula("act(1,b,1) U act(2,c,1) U true"), U(U(p, q), truth())));
    CHECK(equal(parse_formula("true -> false -> true"), implies(truth(), implies(falsity(), truth()))));
    CHECK(equal(parse_formula("!X act(1,b,1) && act(2,c,1) || false"), disj(conj(neg(X(p)), q), falsity())));
    CHECK(equal(parse_formula("act(1, b, -) R en(-, c, 2)"), R(act(1, "b", kOpen), en(kOpen, "c", 2))));
    CHECK(equal(parse_formula("// c\nG true"), G(truth())));
}

TEST_CASE("formula errors") {
    CHECK(error_of("G (act(1,b,1)").find("unbalanced parenthesis") != std::string::npos);
    CHECK(error_of("G act(1,b,1))").find("unbalanced parenthesis") != std::string::npos);
    CHECK(error_of("act(-,b,-)").find("malformed label atom") != std::string::npos);
    CHECK(error_of("act(1,b)").find("malformed label atom") != std::string::npos);
    CHECK(error_of("en(x,b,1)").find("malformed label atom") != std::string::npos);
    CHECK(error_of("act(0,b,1)").find("malformed label atom") != std::string::npos);
    CHECK(error_of("G").find("expected formula") != std::string::npos);
    CHECK(error_of("p U q").find("1:1") == 0);
    CHECK_FALSE(error_of("").empty());
}

TEST_CASE("printing round-trips") {
    std::mt19937_64 rng(5);
    std::vector<FormulaPtr> atoms{p, q, ltl::en(kOpen, "a", 2), ltl::truth()};
    for (int k = 0; k < 500; ++k) {
        auto f = test::random_formula(rng, 1 + rng() % 4, atoms);
        auto text = format_formula(f);
        INFO(text);
        CHECK(equal(parse_formula(text), f));
    }
    CHECK(format_formula(parse_formula("G (act(1,b,1) -> F act(2,c,1))")) == "G (act(1,b,1) -> F act(2,c,1))");
}

TEST_CASE("negation normal form") {
    using namespace ltl;
    CHECK(equal(negate(G(p)), F(neg(p))));
    CHECK(equal(negate(G(implies(p, F(q)))), F(conj(p, G(neg(q))))));
    CHECK(equal(negate(p), neg(p)));
    CHECK(equal(negate(U(p, q)), R(neg(p), neg(q))));
    CHECK(equal(negate(X(p)), X(neg(p))));
    CHECK(equal(nnf(neg(neg(p))), p));
}

TEST_CASE("translation shapes") {
    auto fp = to_buchi(nnf(ltl::F(p)));
    REQUIRE(fp.size() == 2);
    CHECK(fp.initial == 0);
    CHECK(fp.accepting == std::vector<bool>{false, true});
    REQUIRE(fp.edges.size() == 3);
    CHECK(fp.edges[0] == BuchiEdge{0, 0, {}});
    CHECK(fp.edges[1] == BuchiEdge{0, 1, {{0, true}}});
    CHECK(fp.edges[2] == BuchiEdge{1, 1, {}});

    auto gp = to_buchi(nnf(ltl::G(p)));
    REQUIRE(gp.size() == 1);
    CHECK(gp.accepting == std::vector<bool>{true});
    REQUIRE(gp.edges.size() == 1);
    CHECK(gp.edges[0] == BuchiEdge{0, 0, {{0, true}}});

    auto none = to_buchi(nnf(ltl::falsity()));
    CHECK(none.size() == 1);
    CHECK(none.edges.empty());
    CHECK(none.accepting == std::vector<bool>{false});
}

TEST_CASE("never claim text round-trips") {
    for (const char *text : {"F act(1,b,1)", "G (act(1,b,1) -> F act(2,c,1))", "act(1,b,1) U en(-,a,2)",
                             "G F act(1,b,1) && F G !en(-,a,2)", "X X act(2,c,-) R act(1,b,1)", "false"}) {
        auto b = to_buchi(negate(parse_formula(text)));
        auto printed = format_never_claim(b);
        INFO(printed);
        CHECK(parse_never_claim(printed) == b);
    }
    auto fp = format_never_claim(to_buchi(nnf(ltl::F(p))));
    CHECK(fp == "never {\n    state s0, s1;\n    init s0;\n    accept s1;\n    trans\n"
                "        s0 -> s0 [true],\n        s0 -> s1 [act(1,b,1)],\n        s1 -> s1 [true];\n}\n");
    auto dnf = parse_never_claim("never { state a, b; init a; accept b; trans a -> b [act(1,x,1) || !en(1,y,-)],"
                                 " b -> b [true && false]; }");
    CHECK(dnf.edges.size() == 2);
    CHECK(dnf.accepting == std::vector<bool>{false, true});
    CHECK_THROWS_AS(parse_never_claim("never { state a; init b; accept; trans; }"), ParseError);
    CHECK_THROWS_AS(parse_never_claim("never { state a, a; init a; accept; trans; }"), ParseError);
}

TEST_CASE("model files may carry a claim") {
    auto claim = format_never_claim(to_buchi(negate(parse_formula("G true"))));
    auto file = parse_model_file(test::kAbcModel + claim);
    CHECK(file.model == parse_model(test::kAbcModel));
    REQUIRE(file.claim);
    CHECK_FALSE(parse_model_file(test::kAbcModel).claim);
    CHECK_THROWS_AS(parse_model(test::kAbcModel + claim), ParseError);
}

TEST_CASE("atom evaluation on the two-automaton model") {
    auto tree = test::load(test::kAbcModel);
    auto tables = precompute(tree);
    const auto &acts = tree.actions();
    ActionId a = *acts.find("a"), b = *acts.find("b");
    auto at0 = successors_lca(tree, tables, GlobalState{{0, 0}});
    std::vector<Label> e0;
    for (const auto &t : at0)
        e0.push_back(t.label);
    std::sort(e0.begin(), e0.end());
    Label sync{1, a, 2};
    BoundAtom act_sync{AtomDecl::Kind::Act, sync}, en_sync{AtomDecl::Kind::En, sync};
    BoundAtom act_b{AtomDecl::Kind::Act, Label{1, b, 1}};
    CHECK(eval_atom(act_sync, e0, &sync));
    CHECK(eval_atom(en_sync, e0, &sync));
    CHECK_FALSE(eval_atom(act_b, e0, &sync));

    auto at1 = successors_lca(tree, tables, GlobalState{{1, 0}});
    std::vector<Label> e1;
    for (const auto &t : at1)
        e1.push_back(t.label);
    std::sort(e1.begin(), e1.end());
    CHECK_FALSE(eval_atom(en_sync, e1, nullptr));

    // Stutter at a deadlock.
    CHECK_FALSE(eval_atom(act_sync, {}, nullptr));
    CHECK_FALSE(eval_atom(en_sync, {}, nullptr));
    CHECK_FALSE(eval_atom(BoundAtom{AtomDecl::Kind::En, std::nullopt}, e0, &sync));
}

TEST_CASE("product steps") {
    auto tree = test::load(test::kAbcModel);
    auto tables = precompute(tree);
    GlobalState s0{{0, 0}};

    auto claim = to_buchi(nnf(ltl::F(ltl::neg(ltl::act(1, "a", 2)))));
    BoundClaim bound(claim, tree.actions());
    auto succ = product_successors(tree, tables, bound, {s0, claim.initial});
    ActionId a = *tree.actions().find("a");
    bool reached = false;
    for (const auto &s : succ)
        if (s.label == Label{kOpen, a, 2} && s.accepting)
            reached = true;
    CHECK(reached);
    for (const auto &s : succ)
        if (s.label == Label{1, a, 2})
            CHECK_FALSE(s.accepting);

    auto trivial = to_buchi(nnf(ltl::G(ltl::truth())));
    BoundClaim universal(trivial, tree.actions());
    CHECK(product_successors(tree, tables, universal, {s0, 0}).size() == 3);

    auto sink = test::load("automaton A (1) { state s, t; init s; trans s -> t (1, go, 1); } system A;");
    auto sink_tables = precompute(sink);
    BoundClaim sink_claim(trivial, sink.actions());
    auto steps = product_successors(sink, sink_tables, sink_claim, {GlobalState{{1}}, 0});
    REQUIRE(steps.size() == 1);
    CHECK_FALSE(steps[0].label);
    CHECK(steps[0].state.model == GlobalState{{1}});
}

TEST_CASE("translation agrees with direct semantics on lasso runs") {
    auto tree = test::load(test::kAbcModel);
    auto lts = brute_force_compose(tree);
    auto lassos = test::model_lassos(lts, 4);
    REQUIRE(lassos.size() > 20);
    std::vector<FormulaPtr> atoms{ltl::act(1, "a", 2), ltl::en(2, "c", kOpen)};
    auto formulas = test::formulas_up_to(2, atoms);
    CHECK(formulas.size() > 4000);
    std::size_t mismatches = 0;
    for (const auto &f : formulas) {
        auto claim = to_buchi(nnf(f));
        BoundClaim bound(claim, tree.actions());
        for (const auto &w : lassos)
            if (test::holds(*f, w, tree.actions()) != test::claim_accepts(bound, w)) {
                ++mismatches;
                if (mismatches < 5)
                    MESSAGE("mismatch on " << format_formula(f));
            }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("double negation is semantically neutral") {
    std::mt19937_64 rng(9);
    auto tree = test::load(test::kAbcModel);
    auto lassos = test::model_lassos(brute_force_compose(tree), 4);
    std::vector<FormulaPtr> atoms{ltl::act(1, "b", 1), ltl::en(kOpen, "a", 2), ltl::act(2, "c", 1)};
    for (int k = 0; k < 200; ++k) {
        auto f = test::random_formula(rng, 1 + rng() % 3, atoms);
        auto g = negate(negate(f));
        for (const auto &w : lassos)
            REQUIRE(test::holds(*f, w, tree.actions()) == test::holds(*g, w, tree.actions()));
    }
}
