#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coin/hierarchy.hh"

namespace coin {

enum class TransitionKind { Inherited, Sync };

/// A composite step described by the local moves it makes. Inherited steps move
/// `leaf` only; Sync steps move the output leaf `leaf` and the input leaf `partner`,
/// merged at `lca`.
struct Move {
    Label label;
    TransitionKind kind = TransitionKind::Inherited;
    std::uint32_t leaf = kNoLeaf;
    LocalState target = 0;
    std::uint32_t partner = kNoLeaf;
    LocalState partner_target = 0;
    NodeId lca = kNoNode;

    bool operator==(const Move &) const = default;
};

struct Transition {
    Label label;
    TransitionKind kind = TransitionKind::Inherited;
    std::uint32_t leaf = kNoLeaf;
    std::uint32_t partner = kNoLeaf;
    NodeId lca = kNoNode;
    GlobalState successor;

    bool operator==(const Transition &) const = default;
};

Transition apply(const GlobalState &s, const Move &m);
/// Sorted by (label, successor).
std::vector<Transition> to_transitions(const GlobalState &s, std::span<const Move> moves);

enum class Direction { Out, In };

/// State-independent data computed once per hierarchy for the LCA generator.
class PrecomputedTables {
public:
    std::size_t leaf_count() const { return leaves_; }

    NodeId lca(std::uint32_t i, std::uint32_t j) const { return lca_[i * leaves_ + j]; }
    /// Specs of all composites from the leaf's parent up to and including the root.
    const FeasibleSpec &up_filter(std::uint32_t leaf) const;
    /// Specs of the composites strictly between the leaf and its ancestor `v`,
    /// restricted to the labels of the leaf itself (the only ones ever tested).
    const FeasibleSpec &to_lca_filter(std::uint32_t leaf, NodeId v) const;
    /// Specs of composite `v` and all of its ancestors.
    const FeasibleSpec &from_lca_filter(NodeId v) const { return from_[v]; }
    /// Leaves (other than `leaf`) holding a complementary open label on `action`.
    std::span<const std::uint32_t> partners(std::uint32_t leaf, ActionId action, Direction dir) const;

    /// Per leaf, per local state, per outgoing transition: passes up_filter.
    bool inherited_ok(std::uint32_t leaf, LocalState s, std::size_t k) const {
        return inherited_ok_[leaf][offsets_[leaf][s] + k] != 0;
    }

    std::size_t memory_bytes() const;

private:
    friend PrecomputedTables precompute(const HierarchyTree &tree);

    struct PartnerEntry {
        ActionId action;
        Direction dir;
        std::vector<std::uint32_t> leaves;
    };

    std::size_t leaves_ = 0;
    std::vector<NodeId> lca_;
    std::vector<std::vector<FeasibleSpec>> to_;  // [leaf][depth of ancestor]
    std::vector<NodeId> leaf_node_;
    std::vector<NodeId> leaf_parent_;
    std::vector<std::uint32_t> node_depth_;
    std::vector<FeasibleSpec> from_;             // [node]
    std::vector<std::vector<PartnerEntry>> partners_; // [leaf], sorted by (action, dir)
    std::vector<std::vector<std::uint32_t>> offsets_;
    std::vector<std::vector<std::uint8_t>> inherited_ok_;
};

PrecomputedTables precompute(const HierarchyTree &tree);

/// Per-worker successor generator. The recursive algorithm composes children's
/// moves at every composite; the LCA algorithm checks each candidate against the
/// precomputed tables only. Both yield the same multiset of moves.
class MoveGenerator {
public:
    enum class Algorithm { Recursive, Lca };

    MoveGenerator(const HierarchyTree &tree, const PrecomputedTables &tables, Algorithm algorithm);

    /// Appends the moves enabled at `locals` to `out` (order unspecified).
    void generate(std::span<const LocalState> locals, std::vector<Move> &out);

    Algorithm algorithm() const { return algorithm_; }

private:
    void recursive(std::span<const LocalState> locals, NodeId id, std::vector<Move> &out);
    void lca(std::span<const LocalState> locals, std::vector<Move> &out) const;

    const HierarchyTree &tree_;
    const PrecomputedTables &tables_;
    Algorithm algorithm_;
    // Scratch per composite, reused across calls.
    std::vector<std::vector<Move>> scratch_;
    std::vector<std::vector<std::uint32_t>> owner_;
    std::vector<std::size_t> outputs_, inputs_;
};

using Algorithm = MoveGenerator::Algorithm;

std::vector<Transition> successors_recursive(const HierarchyTree &tree, const GlobalState &s);
std::vector<Transition> successors_lca(const HierarchyTree &tree, const PrecomputedTables &tables,
                                       const GlobalState &s);

} // namespace coin
