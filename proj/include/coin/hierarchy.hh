#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coin/label.hh"

namespace coin {

using LocalState = std::uint32_t;
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = ~NodeId{0};
inline constexpr std::uint32_t kNoLeaf = ~std::uint32_t{0};

struct LocalTransition {
    Label label;
    LocalState target = 0;
    auto operator<=>(const LocalTransition &) const = default;
};

/// A leaf of the hierarchy: explicit finite transition system over labels.
struct PrimitiveAutomaton {
    std::string name;
    ComponentId component_id = 1;
    std::vector<std::string> states;
    LocalState init = 0;
    /// outgoing[s] sorted by (label, target), no duplicates
    std::vector<std::vector<LocalTransition>> outgoing;

    std::size_t transition_count() const;
    /// Distinct labels over all states, sorted.
    std::vector<Label> alphabet() const;
};

struct HierarchyNode {
    std::string name;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    std::uint32_t depth = 0;
    std::uint32_t leaf = kNoLeaf; // leaf index, or kNoLeaf for a composite
    FeasibleSpec spec;             // composites only

    bool is_leaf() const { return leaf != kNoLeaf; }
};

/// The model: primitives at the leaves, composites with feasible-label specs inside.
/// Nodes are stored in preorder with the root at index 0, so leaves are numbered
/// left to right and each subtree covers a contiguous leaf range.
class HierarchyTree {
public:
    HierarchyTree(ActionTable actions, std::vector<HierarchyNode> nodes, std::vector<PrimitiveAutomaton> leaves);

    NodeId root() const { return 0; }
    const HierarchyNode &node(NodeId id) const { return nodes_[id]; }
    std::span<const HierarchyNode> nodes() const { return nodes_; }
    std::size_t node_count() const { return nodes_.size(); }

    std::size_t leaf_count() const { return leaves_.size(); }
    const PrimitiveAutomaton &leaf(std::size_t i) const { return leaves_[i]; }
    std::span<const PrimitiveAutomaton> leaves() const { return leaves_; }
    NodeId leaf_node(std::size_t i) const { return leaf_nodes_[i]; }

    /// Leaf range [first, last) covered by the subtree rooted at `id`.
    std::pair<std::uint32_t, std::uint32_t> leaf_range(NodeId id) const { return leaf_ranges_[id]; }

    const ActionTable &actions() const { return actions_; }
    std::string format(const Label &l) const { return format_label(l, actions_); }

private:
    ActionTable actions_;
    std::vector<HierarchyNode> nodes_;
    std::vector<PrimitiveAutomaton> leaves_;
    std::vector<NodeId> leaf_nodes_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> leaf_ranges_;
};

/// Tuple of local states, one per leaf in leaf-index order.
struct GlobalState {
    std::vector<LocalState> locals;

    std::size_t size() const { return locals.size(); }
    LocalState operator[](std::size_t i) const { return locals[i]; }
    auto operator<=>(const GlobalState &) const = default;
};

GlobalState initial_state(const HierarchyTree &tree);
bool valid_state(const HierarchyTree &tree, const GlobalState &s);
std::string format_state(const HierarchyTree &tree, const GlobalState &s);

} // namespace coin
