#include "coin/por.hh"

#include <algorithm>
#include <set>

namespace coin {

StaticDependence analyze_dependence(const HierarchyTree &tree, const PrecomputedTables &tables,
                                    std::span<const AtomDecl> atoms) {
    const auto n = static_cast<std::uint32_t>(tree.leaf_count());
    StaticDependence dep;
    dep.sync_capable.resize(n);
    dep.visible.assign(n, false);

    std::vector<std::vector<Label>> alphabet(n);
    for (std::uint32_t i = 0; i < n; ++i)
        alphabet[i] = tree.leaf(i).alphabet();

    std::vector<std::set<std::uint32_t>> capable(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (const auto &out : alphabet[i]) {
            if (!out.is_output())
                continue;
            for (auto j : tables.partners(i, out.action, Direction::Out))
                for (const auto &in : alphabet[j]) {
                    if (!complementary(out, in))
                        continue;
                    NodeId v = tables.lca(i, j);
                    if (tables.to_lca_filter(i, v).allows(out) && tables.to_lca_filter(j, v).allows(in) &&
                        tables.from_lca_filter(v).allows(synchronize(out, in))) {
                        capable[i].insert(j);
                        capable[j].insert(i);
                    }
                }
        }
    for (std::uint32_t i = 0; i < n; ++i)
        dep.sync_capable[i].assign(capable[i].begin(), capable[i].end());

    for (const auto &a : atoms) {
        auto id = tree.actions().find(a.action);
        if (!id)
            continue;
        for (std::uint32_t i = 0; i < n; ++i)
            for (const auto &l : alphabet[i])
                if (l.action == *id)
                    dep.visible[i] = true;
    }
    return dep;
}

bool reduction_applicable(const Formula &f) { return !uses_next(f) && !uses_act(f); }

std::uint32_t ample_leaf(const HierarchyTree &tree, const StaticDependence &dep, std::span<const LocalState> locals,
                         std::span<const Move> enabled) {
    std::uint32_t first = kNoLeaf;
    for (std::uint32_t k = 0; k < tree.leaf_count(); ++k) {
        if (dep.visible[k] || !dep.sync_capable[k].empty())
            continue;
        const auto &leaf = tree.leaf(k);
        const auto &out = leaf.outgoing[locals[k]];
        if (out.empty() || !std::all_of(out.begin(), out.end(), [](const LocalTransition &t) {
                return t.label.is_internal();
            }))
            continue;
        if (std::none_of(enabled.begin(), enabled.end(), [&](const Move &m) { return m.leaf == k; }))
            continue;
        if (locals[k] != leaf.init)
            return k;
        if (first == kNoLeaf)
            first = k;
    }
    return first;
}

std::vector<Transition> ample(const HierarchyTree &tree, const PrecomputedTables &tables, const StaticDependence &dep,
                              const GlobalState &s) {
    MoveGenerator gen(tree, tables, Algorithm::Lca);
    std::vector<Move> moves;
    gen.generate(s.locals, moves);
    auto k = ample_leaf(tree, dep, s.locals, moves);
    if (k != kNoLeaf)
        std::erase_if(moves, [&](const Move &m) { return m.leaf != k; });
    return to_transitions(s, moves);
}

std::vector<std::uint32_t> proviso_pass(const SuccessorGraph &g) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> pending(n);
    std::vector<std::vector<std::uint32_t>> preds(n);
    std::vector<std::uint32_t> queue;
    std::vector<std::uint8_t> removed(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        auto succ = g.successors(v);
        pending[v] = static_cast<std::uint32_t>(succ.size());
        for (auto t : succ)
            preds[t].push_back(v);
        if (g.full[v] || succ.empty()) {
            removed[v] = 1;
            queue.push_back(v);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (auto p : preds[queue[head]])
            if (!removed[p] && --pending[p] == 0) {
                removed[p] = 1;
                queue.push_back(p);
            }
    std::vector<std::uint32_t> survivors;
    for (std::uint32_t v = 0; v < n; ++v)
        if (!removed[v])
            survivors.push_back(v);
    return survivors;
}

bool every_cycle_has_full_state(const SuccessorGraph &g) {
    // Kahn's algorithm on the subgraph of reduced states.
    const std::size_t n = g.size();
    std::vector<std::uint32_t> indegree(n, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        if (!g.full[v])
            for (auto t : g.successors(v))
                if (!g.full[t])
                    ++indegree[t];
    std::vector<std::uint32_t> queue;
    std::size_t reduced = 0;
    for (std::uint32_t v = 0; v < n; ++v)
        if (!g.full[v]) {
            ++reduced;
            if (indegree[v] == 0)
                queue.push_back(v);
        }
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (auto t : g.successors(queue[head]))
            if (!g.full[t] && --indegree[t] == 0)
                queue.push_back(t);
    return queue.size() == reduced;
}

} // namespace coin
