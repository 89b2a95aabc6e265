#include "coin/hierarchy.hh"

#include <algorithm>
#include <stdexcept>

namespace coin {

std::size_t PrimitiveAutomaton::transition_count() const {
    std::size_t n = 0;
    for (const auto &out : outgoing)
        n += out.size();
    return n;
}

std::vector<Label> PrimitiveAutomaton::alphabet() const {
    std::vector<Label> labels;
    for (const auto &out : outgoing)
        for (const auto &t : out)
            labels.push_back(t.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

HierarchyTree::HierarchyTree(ActionTable actions, std::vector<HierarchyNode> nodes,
                             std::vector<PrimitiveAutomaton> leaves)
    : actions_(std::move(actions)), nodes_(std::move(nodes)), leaves_(std::move(leaves)) {
    if (nodes_.empty())
        throw std::invalid_argument("hierarchy tree needs at least one node");
    if (nodes_[0].parent != kNoNode)
        throw std::invalid_argument("node 0 must be the root");

    leaf_nodes_.assign(leaves_.size(), kNoNode);
    leaf_ranges_.assign(nodes_.size(), {0, 0});

    // Preorder check: walking children recursively must visit ids 0,1,2,... and leaves 0,1,2,...
    NodeId expected = 0;
    std::uint32_t next_leaf = 0;
    auto visit = [&](auto &&self, NodeId id, NodeId parent, std::uint32_t depth) -> void {
        if (id != expected++)
            throw std::invalid_argument("hierarchy nodes are not in preorder");
        auto &n = nodes_[id];
        if (n.parent != parent)
            throw std::invalid_argument("inconsistent parent link at node " + n.name);
        n.depth = depth;
        std::uint32_t first = next_leaf;
        if (n.is_leaf()) {
            if (!n.children.empty())
                throw std::invalid_argument("leaf node with children: " + n.name);
            if (n.leaf != next_leaf)
                throw std::invalid_argument("leaves are not numbered left to right");
            leaf_nodes_.at(next_leaf++) = id;
        } else {
            if (n.children.empty())
                throw std::invalid_argument("composite without children: " + n.name);
            for (NodeId c : n.children) {
                if (c >= nodes_.size())
                    throw std::invalid_argument("child id out of range");
                self(self, c, id, depth + 1);
            }
        }
        leaf_ranges_[id] = {first, next_leaf};
    };
    visit(visit, 0, kNoNode, 0);
    if (expected != nodes_.size() || next_leaf != leaves_.size())
        throw std::invalid_argument("hierarchy tree is not connected");

    for (const auto &p : leaves_) {
        if (p.states.empty() || p.init >= p.states.size() || p.outgoing.size() != p.states.size())
            throw std::invalid_argument("malformed primitive automaton " + p.name);
        for (const auto &out : p.outgoing)
            for (const auto &t : out)
                if (t.target >= p.states.size() || !t.label.well_formed())
                    throw std::invalid_argument("malformed transition in " + p.name);
    }
}

GlobalState initial_state(const HierarchyTree &tree) {
    GlobalState s;
    s.locals.reserve(tree.leaf_count());
    for (const auto &p : tree.leaves())
        s.locals.push_back(p.init);
    return s;
}

bool valid_state(const HierarchyTree &tree, const GlobalState &s) {
    if (s.size() != tree.leaf_count())
        return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] >= tree.leaf(i).states.size())
            return false;
    return true;
}

std::string format_state(const HierarchyTree &tree, const GlobalState &s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i)
            out += ",";
        out += tree.leaf(i).states[s[i]];
    }
    return out + ")";
}

} // namespace coin
