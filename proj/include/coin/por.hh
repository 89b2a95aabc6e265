#pragma once

#include <span>
#include <vector>

#include "coin/formula.hh"
#include "coin/succgen.hh"

namespace coin {

/// Structural facts used to pick ample sets, computed once per (model, property).
struct StaticDependence {
    /// Leaves that some open label of the leaf can synchronize with under the filters. Symmetric.
    std::vector<std::vector<std::uint32_t>> sync_capable;
    /// Leaves whose alphabet contains an action named by a property atom.
    std::vector<bool> visible;
};

StaticDependence analyze_dependence(const HierarchyTree &tree, const PrecomputedTables &tables,
                                    std::span<const AtomDecl> atoms = {});

/// Reduction is only sound for properties insensitive to interleaved invisible
/// steps: no X operator and no act atoms.
bool reduction_applicable(const Formula &f);

/// The leaf whose moves form the ample set at `locals`, or kNoLeaf for full expansion.
/// A leaf qualifies when it has an enabled move, all labels of its current local
/// state are internal, it cannot synchronize with anyone and it is invisible.
/// Among qualifying leaves the first one that has left its initial state wins,
/// otherwise the first one.
std::uint32_t ample_leaf(const HierarchyTree &tree, const StaticDependence &dep, std::span<const LocalState> locals,
                         std::span<const Move> enabled);

/// Ample transitions of s, sorted like successors_lca.
std::vector<Transition> ample(const HierarchyTree &tree, const PrecomputedTables &tables, const StaticDependence &dep,
                              const GlobalState &s);

/// Explored graph in compressed rows. `full[v]` is set for states expanded with
/// every enabled transition.
struct SuccessorGraph {
    std::vector<std::uint64_t> offsets{0};
    std::vector<std::uint32_t> targets;
    std::vector<std::uint8_t> full;
    std::uint32_t initial = 0;

    std::size_t size() const { return offsets.size() - 1; }
    std::span<const std::uint32_t> successors(std::uint32_t v) const {
        return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }
};

/// Topological-sort cycle proviso: repeatedly discards fully expanded states and
/// states whose successors are all discarded. Whatever survives lies on or leads
/// into a cycle of reduced states and is returned for full re-expansion.
std::vector<std::uint32_t> proviso_pass(const SuccessorGraph &g);

/// A posteriori check: every cycle of g passes through a fully expanded state.
bool every_cycle_has_full_state(const SuccessorGraph &g);

} // namespace coin
