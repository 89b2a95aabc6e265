#include "coin/succgen.hh"

#include <algorithm>
#include <map>
#include <set>

namespace coin {

Transition apply(const GlobalState &s, const Move &m) {
    Transition t{m.label, m.kind, m.leaf, m.partner, m.lca, s};
    t.successor.locals[m.leaf] = m.target;
    if (m.kind == TransitionKind::Sync)
        t.successor.locals[m.partner] = m.partner_target;
    return t;
}

std::vector<Transition> to_transitions(const GlobalState &s, std::span<const Move> moves) {
    std::vector<Transition> out;
    out.reserve(moves.size());
    for (const auto &m : moves)
        out.push_back(apply(s, m));
    std::sort(out.begin(), out.end(), [](const Transition &a, const Transition &b) {
        if (a.label != b.label)
            return a.label < b.label;
        return a.successor < b.successor;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Precomputation

const FeasibleSpec &PrecomputedTables::up_filter(std::uint32_t leaf) const {
    static const FeasibleSpec everything;
    NodeId parent = leaf_parent_[leaf];
    return parent == kNoNode ? everything : from_[parent];
}

const FeasibleSpec &PrecomputedTables::to_lca_filter(std::uint32_t leaf, NodeId v) const {
    return to_[leaf].at(node_depth_[v]);
}

std::span<const std::uint32_t> PrecomputedTables::partners(std::uint32_t leaf, ActionId action, Direction dir) const {
    const auto &entries = partners_[leaf];
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{action, dir},
                               [](const PartnerEntry &e, const std::pair<ActionId, Direction> &key) {
                                   return std::pair{e.action, e.dir} < key;
                               });
    if (it == entries.end() || it->action != action || it->dir != dir)
        return {};
    return it->leaves;
}

std::size_t PrecomputedTables::memory_bytes() const {
    std::size_t bytes = sizeof(*this) + lca_.capacity() * sizeof(NodeId) + leaf_node_.capacity() * sizeof(NodeId) +
                        leaf_parent_.capacity() * sizeof(NodeId) +
                        node_depth_.capacity() * sizeof(std::uint32_t);
    for (const auto &row : to_)
        for (const auto &f : row)
            bytes += f.memory_bytes();
    for (const auto &f : from_)
        bytes += f.memory_bytes();
    for (const auto &entries : partners_) {
        bytes += sizeof(entries) + entries.capacity() * sizeof(PartnerEntry);
        for (const auto &e : entries)
            bytes += e.leaves.capacity() * sizeof(std::uint32_t);
    }
    for (std::size_t i = 0; i < offsets_.size(); ++i)
        bytes += offsets_[i].capacity() * sizeof(std::uint32_t) + inherited_ok_[i].capacity() + 2 * sizeof(offsets_[i]);
    return bytes;
}

PrecomputedTables precompute(const HierarchyTree &tree) {
    PrecomputedTables t;
    const std::size_t n = tree.leaf_count();
    t.leaves_ = n;

    t.node_depth_.resize(tree.node_count());
    for (NodeId v = 0; v < tree.node_count(); ++v)
        t.node_depth_[v] = tree.node(v).depth;
    t.leaf_node_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        t.leaf_node_[i] = tree.leaf_node(i);
    t.leaf_parent_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        t.leaf_parent_[i] = tree.node(t.leaf_node_[i]).parent;

    // Pairwise lowest common ancestors.
    t.lca_.assign(n * n, kNoNode);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i; j < n; ++j) {
            NodeId a = t.leaf_node_[i], b = t.leaf_node_[j];
            while (a != b) {
                if (tree.node(a).depth >= tree.node(b).depth)
                    a = tree.node(a).parent;
                else
                    b = tree.node(b).parent;
            }
            t.lca_[i * n + j] = t.lca_[j * n + i] = a;
        }

    // Spec intersections from each node to the root (preorder: parents first).
    t.from_.resize(tree.node_count());
    for (NodeId v = 0; v < tree.node_count(); ++v) {
        const auto &node = tree.node(v);
        // Leaves are never a lowest common ancestor and keep allow-all.
        if (node.is_leaf())
            continue;
        t.from_[v] = node.parent == kNoNode ? node.spec : intersect(node.spec, t.from_[node.parent]);
    }

    // Path filters only ever see the leaf's own labels, so keep just those.
    t.to_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        NodeId leaf = t.leaf_node_[i];
        NodeId parent = tree.node(leaf).parent;
        auto own = tree.leaf(i).alphabet();
        t.to_[i].resize(tree.node(leaf).depth);
        FeasibleSpec between = FeasibleSpec::allow_all();
        for (NodeId v = parent; v != kNoNode; v = tree.node(v).parent) {
            std::vector<Label> kept;
            std::set_intersection(between.labels().begin(), between.labels().end(), own.begin(), own.end(),
                                  std::back_inserter(kept));
            t.to_[i][tree.node(v).depth] = FeasibleSpec(between.mode(), std::move(kept));
            between = intersect(between, tree.node(v).spec);
        }
    }

    // Static synchronization candidates from the leaf alphabets.
    std::vector<std::set<ActionId>> outs(n), ins(n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (const auto &l : tree.leaf(i).alphabet()) {
            if (l.is_output())
                outs[i].insert(l.action);
            else if (l.is_input())
                ins[i].insert(l.action);
        }
    t.partners_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::map<std::pair<ActionId, Direction>, std::vector<std::uint32_t>> found;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            for (ActionId a : outs[i])
                if (ins[j].count(a))
                    found[{a, Direction::Out}].push_back(j);
            for (ActionId a : ins[i])
                if (outs[j].count(a))
                    found[{a, Direction::In}].push_back(j);
        }
        for (auto &[key, leaves] : found)
            t.partners_[i].push_back({key.first, key.second, std::move(leaves)});
    }

    t.offsets_.resize(n);
    t.inherited_ok_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto &p = tree.leaf(i);
        std::uint32_t off = 0;
        for (const auto &out : p.outgoing) {
            t.offsets_[i].push_back(off);
            for (const auto &tr : out)
                t.inherited_ok_[i].push_back(t.up_filter(i).allows(tr.label) ? 1 : 0);
            off += static_cast<std::uint32_t>(out.size());
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Generators

MoveGenerator::MoveGenerator(const HierarchyTree &tree, const PrecomputedTables &tables, Algorithm algorithm)
    : tree_(tree), tables_(tables), algorithm_(algorithm), scratch_(tree.node_count()), owner_(tree.node_count()) {}

void MoveGenerator::generate(std::span<const LocalState> locals, std::vector<Move> &out) {
    if (algorithm_ == Algorithm::Lca)
        lca(locals, out);
    else
        recursive(locals, tree_.root(), out);
}

void MoveGenerator::recursive(std::span<const LocalState> locals, NodeId id, std::vector<Move> &out) {
    const HierarchyNode &node = tree_.node(id);
    if (node.is_leaf()) {
        for (const auto &t : tree_.leaf(node.leaf).outgoing[locals[node.leaf]]) {
            Move m;
            m.label = t.label;
            m.leaf = node.leaf;
            m.target = t.target;
            out.push_back(m);
        }
        return;
    }

    auto &moves = scratch_[id];
    auto &owner = owner_[id];
    moves.clear();
    owner.clear();
    for (std::uint32_t c = 0; c < node.children.size(); ++c) {
        recursive(locals, node.children[c], moves);
        owner.resize(moves.size(), c);
    }

    for (const auto &m : moves)
        if (node.spec.allows(m.label))
            out.push_back(m);

    outputs_.clear();
    inputs_.clear();
    for (std::size_t k = 0; k < moves.size(); ++k) {
        if (moves[k].label.is_output())
            outputs_.push_back(k);
        else if (moves[k].label.is_input())
            inputs_.push_back(k);
    }
    if (outputs_.empty() || inputs_.empty())
        return;
    auto by_action = [&](std::size_t a, std::size_t b) { return moves[a].label.action < moves[b].label.action; };
    std::sort(outputs_.begin(), outputs_.end(), by_action);
    std::sort(inputs_.begin(), inputs_.end(), by_action);

    std::size_t o = 0, i = 0;
    while (o < outputs_.size() && i < inputs_.size()) {
        ActionId ao = moves[outputs_[o]].label.action, ai = moves[inputs_[i]].label.action;
        if (ao < ai) {
            ++o;
            continue;
        }
        if (ai < ao) {
            ++i;
            continue;
        }
        std::size_t o_end = o, i_end = i;
        while (o_end < outputs_.size() && moves[outputs_[o_end]].label.action == ao)
            ++o_end;
        while (i_end < inputs_.size() && moves[inputs_[i_end]].label.action == ao)
            ++i_end;
        for (std::size_t x = o; x < o_end; ++x)
            for (std::size_t y = i; y < i_end; ++y) {
                const Move &mo = moves[outputs_[x]];
                const Move &mi = moves[inputs_[y]];
                if (owner[outputs_[x]] == owner[inputs_[y]])
                    continue;
                Label merged = synchronize(mo.label, mi.label);
                if (!node.spec.allows(merged))
                    continue;
                Move m;
                m.label = merged;
                m.kind = TransitionKind::Sync;
                m.leaf = mo.leaf;
                m.target = mo.target;
                m.partner = mi.leaf;
                m.partner_target = mi.target;
                m.lca = id;
                out.push_back(m);
            }
        o = o_end;
        i = i_end;
    }
}

void MoveGenerator::lca(std::span<const LocalState> locals, std::vector<Move> &out) const {
    const std::uint32_t n = static_cast<std::uint32_t>(tree_.leaf_count());
    for (std::uint32_t i = 0; i < n; ++i) {
        LocalState s = locals[i];
        const auto &trans = tree_.leaf(i).outgoing[s];
        for (std::size_t k = 0; k < trans.size(); ++k) {
            const auto &t = trans[k];
            if (tables_.inherited_ok(i, s, k)) {
                Move m;
                m.label = t.label;
                m.leaf = i;
                m.target = t.target;
                out.push_back(m);
            }
            if (!t.label.is_output())
                continue;
            for (std::uint32_t j : tables_.partners(i, t.label.action, Direction::Out)) {
                NodeId v = NodeId(-1);
                for (const auto &u : tree_.leaf(j).outgoing[locals[j]]) {
                    if (!u.label.is_input() || u.label.action != t.label.action)
                        continue;
                    if (v == NodeId(-1))
                        v = tables_.lca(i, j);
                    Label merged = synchronize(t.label, u.label);
                    if (!tables_.to_lca_filter(i, v).allows(t.label) || !tables_.to_lca_filter(j, v).allows(u.label) ||
                        !tables_.from_lca_filter(v).allows(merged))
                        continue;
                    Move m;
                    m.label = merged;
                    m.kind = TransitionKind::Sync;
                    m.leaf = i;
                    m.target = t.target;
                    m.partner = j;
                    m.partner_target = u.target;
                    m.lca = v;
                    out.push_back(m);
                }
            }
        }
    }
}

std::vector<Transition> successors_recursive(const HierarchyTree &tree, const GlobalState &s) {
    static const PrecomputedTables unused{};
    MoveGenerator gen(tree, unused, Algorithm::Recursive);
    std::vector<Move> moves;
    gen.generate(s.locals, moves);
    return to_transitions(s, moves);
}

std::vector<Transition> successors_lca(const HierarchyTree &tree, const PrecomputedTables &tables,
                                       const GlobalState &s) {
    MoveGenerator gen(tree, tables, Algorithm::Lca);
    std::vector<Move> moves;
    gen.generate(s.locals, moves);
    return to_transitions(s, moves);
}

} // namespace coin
