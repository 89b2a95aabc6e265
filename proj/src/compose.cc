#include "coin/compose.hh"

#include <algorithm>
#include <deque>
#include <set>

namespace coin {

namespace {

// Reachable LTS of one subtree. A state is the concatenation of the local states
// of the subtree's leaves.
struct SubLts {
    std::vector<std::vector<LocalState>> states;
    std::vector<std::vector<std::pair<Label, std::uint32_t>>> out;
};

SubLts compose_leaf(const PrimitiveAutomaton &p) {
    SubLts lts;
    std::map<LocalState, std::uint32_t> index;
    std::deque<LocalState> queue{p.init};
    index[p.init] = 0;
    lts.states.push_back({p.init});
    lts.out.emplace_back();
    while (!queue.empty()) {
        LocalState s = queue.front();
        queue.pop_front();
        std::uint32_t id = index.at(s);
        for (const auto &t : p.outgoing[s]) {
            auto [it, fresh] = index.emplace(t.target, static_cast<std::uint32_t>(lts.states.size()));
            if (fresh) {
                lts.states.push_back({t.target});
                lts.out.emplace_back();
                queue.push_back(t.target);
            }
            lts.out[id].emplace_back(t.label, it->second);
        }
    }
    return lts;
}

SubLts compose_node(const HierarchyTree &tree, NodeId id) {
    const HierarchyNode &node = tree.node(id);
    if (node.is_leaf())
        return compose_leaf(tree.leaf(node.leaf));

    std::vector<SubLts> kids;
    for (NodeId c : node.children)
        kids.push_back(compose_node(tree, c));
    const std::size_t k = kids.size();

    SubLts lts;
    std::map<std::vector<std::uint32_t>, std::uint32_t> index;
    std::deque<std::vector<std::uint32_t>> queue;
    auto intern = [&](const std::vector<std::uint32_t> &tuple) {
        auto [it, fresh] = index.emplace(tuple, static_cast<std::uint32_t>(lts.states.size()));
        if (fresh) {
            std::vector<LocalState> flat;
            for (std::size_t c = 0; c < k; ++c)
                flat.insert(flat.end(), kids[c].states[tuple[c]].begin(), kids[c].states[tuple[c]].end());
            lts.states.push_back(std::move(flat));
            lts.out.emplace_back();
            queue.push_back(tuple);
        }
        return it->second;
    };
    intern(std::vector<std::uint32_t>(k, 0));

    while (!queue.empty()) {
        auto tuple = queue.front();
        queue.pop_front();
        std::uint32_t src = index.at(tuple);
        std::set<std::pair<Label, std::uint32_t>> result;

        // one child moves alone
        for (std::size_t c = 0; c < k; ++c)
            for (const auto &[label, target] : kids[c].out[tuple[c]]) {
                if (!node.spec.allows(label))
                    continue;
                auto next = tuple;
                next[c] = target;
                result.emplace(label, intern(next));
            }
        // two distinct children synchronize
        for (std::size_t c1 = 0; c1 < k; ++c1)
            for (std::size_t c2 = 0; c2 < k; ++c2) {
                if (c1 == c2)
                    continue;
                for (const auto &[l1, t1] : kids[c1].out[tuple[c1]])
                    for (const auto &[l2, t2] : kids[c2].out[tuple[c2]]) {
                        if (!complementary(l1, l2))
                            continue;
                        Label merged = synchronize(l1, l2);
                        if (!node.spec.allows(merged))
                            continue;
                        auto next = tuple;
                        next[c1] = t1;
                        next[c2] = t2;
                        result.emplace(merged, intern(next));
                    }
            }
        lts.out[src].assign(result.begin(), result.end());
    }
    return lts;
}

} // namespace

ExplicitLts brute_force_compose(const HierarchyTree &tree, std::uint64_t bound) {
    double product = 1;
    for (const auto &p : tree.leaves())
        product *= static_cast<double>(p.states.size());
    if (product > static_cast<double>(bound))
        throw BoundExceeded("state space bound exceeded: product of leaf state counts is " +
                            std::to_string(static_cast<long double>(product)));

    SubLts root = compose_node(tree, tree.root());

    ExplicitLts lts;
    std::vector<std::uint32_t> order(root.states.size());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return root.states[a] < root.states[b]; });
    std::vector<std::uint32_t> rank(order.size());
    for (std::uint32_t r = 0; r < order.size(); ++r) {
        rank[order[r]] = r;
        lts.states.push_back(GlobalState{root.states[order[r]]});
    }
    for (std::uint32_t s = 0; s < root.out.size(); ++s)
        for (const auto &[label, t] : root.out[s])
            lts.transitions.push_back({rank[s], label, rank[t]});
    std::sort(lts.transitions.begin(), lts.transitions.end());
    lts.initial = rank[0];
    return lts;
}

std::uint32_t ExplicitLts::index_of(const GlobalState &s) const {
    auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s)
        throw std::out_of_range("state not in LTS");
    return static_cast<std::uint32_t>(it - states.begin());
}

std::vector<std::pair<Label, GlobalState>> ExplicitLts::outgoing(const GlobalState &s) const {
    std::uint32_t src = index_of(s);
    auto lo = std::lower_bound(transitions.begin(), transitions.end(), src,
                               [](const LtsTransition &t, std::uint32_t v) { return t.source < v; });
    std::vector<std::pair<Label, GlobalState>> out;
    for (auto it = lo; it != transitions.end() && it->source == src; ++it)
        out.emplace_back(it->label, states[it->target]);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace coin
