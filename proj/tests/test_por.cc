#include <doctest.h>

#include "coin/explorer.hh"
#include "coin/families.hh"
#include "coin/por.hh"
#include "fixtures.hh"

using namespace coin;

namespace {

SuccessorGraph graph(std::vector<std::vector<std::uint32_t>> rows, std::vector<std::uint8_t> full) {
    SuccessorGraph g;
    for (auto &r : rows) {
        g.targets.insert(g.targets.end(), r.begin(), r.end());
        g.offsets.push_back(g.targets.size());
    }
    g.full = std::move(full);
    return g;
}

HierarchyTree family(ModelFamily::Kind kind, std::uint32_t n, std::uint32_t d = 1) {
    return test::load(generate(ModelFamily{kind, n, d}));
}

const char *kTwoLoops = R"(
automaton A (1) { state a; init a; trans a -> a (1, x, 1); }
automaton B (2) { state b; init b; trans b -> b (2, y, 2); }
composite Root { A, B; }
system Root;
)";

} // namespace

TEST_CASE("ample picks one independent leaf") {
    auto tree = test::load(kTwoLoops);
    auto tables = precompute(tree);
    auto dep = analyze_dependence(tree, tables);
    CHECK(dep.sync_capable[0].empty());
    CHECK(dep.sync_capable[1].empty());
    auto s = initial_state(tree);
    auto amp = ample(tree, tables, dep, s);
    REQUIRE(amp.size() == 1);
    CHECK(amp[0].label == Label{1, *tree.actions().find("x"), 1});
    CHECK(successors_lca(tree, tables, s).size() == 2);

    // A property naming x makes leaf 0 visible, so leaf 1 is chosen.
    std::vector<AtomDecl> atoms{AtomDecl{AtomDecl::Kind::En, 1, "x", 1}};
    auto visible = analyze_dependence(tree, tables, atoms);
    CHECK(visible.visible[0]);
    CHECK_FALSE(visible.visible[1]);
    auto other = ample(tree, tables, visible, s);
    REQUIRE(other.size() == 1);
    CHECK(other[0].label.sender == 2);
}

TEST_CASE("ample falls back to full expansion") {
    auto tree = test::load(test::kAbcModel);
    auto tables = precompute(tree);
    auto dep = analyze_dependence(tree, tables);
    CHECK(dep.sync_capable[0] == std::vector<std::uint32_t>{1});
    CHECK(dep.sync_capable[1] == std::vector<std::uint32_t>{0});
    for (LocalState q = 0; q < 3; ++q) {
        GlobalState s{{q, 0}};
        CHECK(ample(tree, tables, dep, s).size() == successors_lca(tree, tables, s).size());
    }
}

TEST_CASE("reduction applicability") {
    CHECK(reduction_applicable(*parse_formula("G F en(1,a,-)")));
    CHECK_FALSE(reduction_applicable(*parse_formula("G X en(1,a,-)")));
    CHECK_FALSE(reduction_applicable(*parse_formula("F act(1,a,2)")));
}

TEST_CASE("proviso examples") {
    // Acyclic reduced graph: nothing to re-expand.
    CHECK(proviso_pass(graph({{1, 2}, {2}, {}}, {0, 0, 0})).empty());
    // Reduced self-loop must be re-expanded.
    CHECK(proviso_pass(graph({{0}}, {0})) == std::vector<std::uint32_t>{0});
    // Cycle already containing a full state.
    CHECK(proviso_pass(graph({{1}, {0}}, {0, 1})).empty());
    // Reduced 2-cycle plus a reduced state leading into it.
    CHECK(proviso_pass(graph({{1}, {2}, {1}, {}}, {0, 0, 0, 0})) == std::vector<std::uint32_t>{0, 1, 2});

    CHECK(every_cycle_has_full_state(graph({{1}, {0}}, {0, 1})));
    CHECK_FALSE(every_cycle_has_full_state(graph({{1}, {0}}, {0, 0})));
    CHECK(every_cycle_has_full_state(graph({{1, 2}, {2}, {}}, {0, 0, 0})));
}

TEST_CASE("toggles reduce to a chain") {
    auto tree = family(ModelFamily::Kind::Toggles, 8);
    auto tables = precompute(tree);
    ExploreOptions full, reduced;
    reduced.por = true;
    CHECK(reach(tree, tables, full).states == 256);
    auto m = reach(tree, tables, reduced);
    CHECK(m.states == 16);
    CHECK(m.states <= 17);
    CHECK(m.reduced_states > 0);

    auto g = explore_graph(tree, tables, nullptr, reduced);
    CHECK(g.graph.size() == 16);
    CHECK(every_cycle_has_full_state(g.graph));
}

TEST_CASE("reduction is independent of workers and algorithm") {
    for (auto [kind, n, d] : {std::tuple{ModelFamily::Kind::Toggles, 10u, 1u},
                              std::tuple{ModelFamily::Kind::PipelineTree, 3u, 2u},
                              std::tuple{ModelFamily::Kind::Ring, 5u, 1u}}) {
        auto tree = family(kind, n, d);
        auto tables = precompute(tree);
        ExploreOptions base;
        base.por = true;
        auto ref = reach(tree, tables, base);
        for (std::uint32_t w : {2u, 4u, 8u})
            for (auto a : {Algorithm::Lca, Algorithm::Recursive}) {
                ExploreOptions o = base;
                o.workers = w;
                o.algorithm = a;
                auto m = reach(tree, tables, o);
                CHECK(m.states == ref.states);
                CHECK(m.transitions == ref.transitions);
                CHECK(m.digest == ref.digest);
            }
    }
}

TEST_CASE("models with no qualifying leaf are not reduced") {
    for (auto text : {test::kAbcModel, generate(ModelFamily{ModelFamily::Kind::Ring, 4, 1})}) {
        auto tree = test::load(text);
        auto tables = precompute(tree);
        ExploreOptions full, reduced;
        reduced.por = true;
        auto a = reach(tree, tables, full), b = reach(tree, tables, reduced);
        CHECK(a.states == b.states);
        CHECK(a.transitions == b.transitions);
        CHECK(b.reduced_states == 0);
    }
}

TEST_CASE("reduced graphs keep every cycle closed by a full state") {
    RandomModelParams params;
    params.local_leaf_bias = 0.5;
    int reduced_models = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto tree = test::load(generate_random_model(seed, params));
        auto tables = precompute(tree);
        ExploreOptions o;
        o.por = true;
        auto g = explore_graph(tree, tables, nullptr, o);
        INFO("seed " << seed);
        CHECK(every_cycle_has_full_state(g.graph));
        reduced_models += g.metrics.reduced_states > 0;

        // Deadlocks survive reduction.
        ExploreOptions full;
        CHECK((check_deadlock(tree, tables, full).kind == Verdict::Kind::Deadlock) ==
              (check_deadlock(tree, tables, o).kind == Verdict::Kind::Deadlock));
    }
    CHECK(reduced_models > 0);
}

TEST_CASE("reduction preserves verdicts of en-only properties") {
    RandomModelParams params;
    params.local_leaf_bias = 0.5;
    const char *properties[] = {"G F en(1,a0,-)", "F G !en(1,a1,-)", "G (en(2,a0,-) -> F en(-,a1,2))",
                                "en(1,a0,-) U en(-,a2,1)"};
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        auto tree = test::load(generate_random_model(seed, params));
        auto tables = precompute(tree);
        for (const char *text : properties) {
            auto claim = to_buchi(negate(parse_formula(text)));
            ExploreOptions full, reduced;
            reduced.por = true;
            INFO("seed " << seed << " " << text);
            CHECK(verify(tree, tables, claim, full).kind == verify(tree, tables, claim, reduced).kind);
        }
    }
}
