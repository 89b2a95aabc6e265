#include <doctest.h>

#include <set>

#include "coin/compose.hh"
#include "coin/families.hh"
#include "coin/succgen.hh"
#include "fixtures.hh"

using namespace coin;

namespace {

Label L(ComponentId s, ActionId a, ComponentId r) { return {s, a, r}; }

std::vector<std::pair<Label, GlobalState>> pairs(const std::vector<Transition> &ts) {
    std::vector<std::pair<Label, GlobalState>> out;
    for (const auto &t : ts)
        out.emplace_back(t.label, t.successor);
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t leaf_named(const HierarchyTree &t, const std::string &name) {
    for (std::uint32_t i = 0; i < t.leaf_count(); ++i)
        if (t.leaf(i).name == name)
            return i;
    FAIL("no leaf " << name);
    return 0;
}

NodeId node_named(const HierarchyTree &t, const std::string &name) {
    for (NodeId v = 0; v < t.node_count(); ++v)
        if (t.node(v).name == name)
            return v;
    FAIL("no node " << name);
    return 0;
}

// Both generators against the brute-force oracle at every reachable state.
void check_equivalence(const HierarchyTree &tree) {
    auto lts = brute_force_compose(tree);
    auto tables = precompute(tree);
    for (const auto &s : lts.states) {
        auto rec = successors_recursive(tree, s);
        auto lca = successors_lca(tree, tables, s);
        REQUIRE(rec == lca);
        CHECK(pairs(rec) == lts.outgoing(s));
        std::set<std::tuple<std::uint32_t, std::uint32_t, Label, GlobalState>> seen;
        for (const auto &t : rec) {
            if (t.kind == TransitionKind::Sync) {
                CHECK(t.leaf != t.partner);
                CHECK(t.lca == tables.lca(t.leaf, t.partner));
            }
            CHECK(seen.insert({t.leaf, t.partner, t.label, t.successor}).second);
        }
    }
}

} // namespace

TEST_CASE("two-automaton model successors") {
    auto tree = test::load(test::kAbcModel);
    auto tables = precompute(tree);
    const auto &acts = tree.actions();
    ActionId a = *acts.find("a"), b = *acts.find("b"), c = *acts.find("c");
    GlobalState s0{{0, 0}}, s1{{1, 0}}, s2{{2, 0}};

    auto at0 = successors_recursive(tree, s0);
    CHECK(pairs(at0) == std::vector<std::pair<Label, GlobalState>>{
                            {L(kOpen, a, 2), s0}, {L(1, a, 2), s1}, {L(2, c, kOpen), s0}});
    CHECK(successors_lca(tree, tables, s0) == at0);

    auto at2 = successors_recursive(tree, s2);
    CHECK(pairs(at2) == std::vector<std::pair<Label, GlobalState>>{
                            {L(kOpen, a, 2), s2}, {L(2, c, kOpen), s2}, {L(2, c, 1), s0}});
    auto at1 = successors_lca(tree, tables, s1);
    CHECK(std::count_if(at1.begin(), at1.end(), [&](const Transition &t) { return t.label == L(1, b, 1); }) == 1);
}

TEST_CASE("two-automaton tables") {
    auto tree = test::load(test::kAbcModel);
    auto tables = precompute(tree);
    const auto &acts = tree.actions();
    ActionId a = *acts.find("a"), c = *acts.find("c");
    auto spec = FeasibleSpec::except({L(1, a, kOpen), L(kOpen, c, 1)});
    CHECK(tables.lca(0, 1) == tree.root());
    CHECK(tables.lca(1, 0) == tree.root());
    CHECK(tables.up_filter(0) == spec);
    CHECK(tables.up_filter(1) == spec);
    CHECK(tables.to_lca_filter(0, tree.root()).is_allow_all());
    CHECK(tables.from_lca_filter(tree.root()) == spec);
    CHECK(tables.from_lca_filter(tree.root()).allows(L(1, a, 2)));
    CHECK_FALSE(tables.up_filter(0).allows(L(1, a, kOpen)));
    auto p = tables.partners(0, a, Direction::Out);
    CHECK(std::vector<std::uint32_t>(p.begin(), p.end()) == std::vector<std::uint32_t>{1});
}

TEST_CASE("figure tree lowest common ancestors") {
    auto tree = test::load(test::kFigureModel);
    auto tables = precompute(tree);
    auto i = leaf_named(tree, "Si"), j = leaf_named(tree, "Sj");
    CHECK(tables.lca(i, j) == node_named(tree, "C2"));
    CHECK(tables.lca(i, leaf_named(tree, "S3")) == node_named(tree, "C3"));
    CHECK(tables.lca(leaf_named(tree, "S1"), leaf_named(tree, "S4")) == tree.root());
    for (std::uint32_t x = 0; x < tree.leaf_count(); ++x)
        for (std::uint32_t y = 0; y < tree.leaf_count(); ++y)
            CHECK(tables.lca(x, y) == tables.lca(y, x));
}

TEST_CASE("figure tree: a sync blocked for inherited use still forms at its ancestor") {
    auto tree = test::load(test::kFigureModel);
    auto tables = precompute(tree);
    ActionId m = *tree.actions().find("m");
    auto init = initial_state(tree);
    auto ts = successors_lca(tree, tables, init);
    bool found = false;
    for (const auto &t : ts) {
        CHECK(t.label != L(2, m, kOpen));
        CHECK(t.label != L(2, m, 3));
        if (t.label == L(2, m, 5)) {
            found = true;
            CHECK(t.kind == TransitionKind::Sync);
            CHECK(t.lca == node_named(tree, "C2"));
        }
    }
    CHECK(found);
    check_equivalence(tree);
}

TEST_CASE("single leaf successors are its filtered transitions") {
    auto tree = test::load("automaton A (1) { state s, t; init s; trans s -> t (1, a, -), s -> s (1, b, 1); }"
                           " composite R { A; restrictL (1, b, 1); } system R;");
    auto ts = successors_recursive(tree, initial_state(tree));
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].successor == GlobalState{{1}});
    auto bare = test::load("automaton A (1) { state s, t; init s; trans s -> t (1, a, -), s -> s (1, b, 1); }"
                           " system A;");
    CHECK(successors_recursive(bare, initial_state(bare)).size() == 2);
}

TEST_CASE("oracle equivalence on random hierarchies") {
    check_equivalence(test::load(test::kAbcModel));
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        INFO("seed " << seed);
        check_equivalence(elaborate(parse_model(generate_random_model(seed))));
    }
}

TEST_CASE("generation is deterministic and state independent") {
    auto tree = elaborate(parse_model(generate(parse_family("pipeline-tree", 3, 3))));
    auto t1 = precompute(tree), t2 = precompute(tree);
    CHECK(t1.memory_bytes() == t2.memory_bytes());
    auto s = initial_state(tree);
    auto a = successors_lca(tree, t1, s);
    CHECK(a == successors_lca(tree, t2, s));
    CHECK(a == successors_recursive(tree, s));
    CHECK(a == successors_lca(tree, t1, s));
}
