#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coin/buchi.hh"
#include "coin/succgen.hh"

namespace coin {

/// A claim atom resolved against the model's action table. An action name the
/// model never uses leaves `label` empty and the atom is false everywhere.
struct BoundAtom {
    AtomDecl::Kind kind = AtomDecl::Kind::Act;
    std::optional<Label> label;
};

/// Never-claim prepared for product construction: atoms bound, edges indexed by source.
class BoundClaim {
public:
    BoundClaim(const BuchiAutomaton &claim, const ActionTable &actions);

    const BuchiAutomaton &automaton() const { return *claim_; }
    std::size_t size() const { return claim_->size(); }
    std::uint32_t initial() const { return claim_->initial; }
    bool accepting(std::uint32_t q) const { return claim_->accepting[q]; }
    bool needs_enabled() const { return needs_enabled_; }
    const std::vector<BoundAtom> &atoms() const { return atoms_; }

    /// Appends the targets of edges leaving q whose guard holds for the step.
    /// `enabled` is the sorted label set of the model state; `step` is null for Stutter.
    void targets(std::uint32_t q, std::span<const Label> enabled, const Label *step,
                 std::vector<std::uint32_t> &out) const;

private:
    const BuchiAutomaton *claim_;
    std::vector<BoundAtom> atoms_;
    std::vector<std::uint32_t> first_edge_; // CSR offsets into claim edges
    bool needs_enabled_ = false;
};

/// act(l) holds iff the step performs l; en(l) iff l is among `enabled`.
/// Both are false for an unbound atom; act is false on Stutter (step == nullptr).
bool eval_atom(const BoundAtom &atom, std::span<const Label> enabled, const Label *step);

/// Sorted, duplicate-free labels of the given moves.
std::vector<Label> enabled_labels(std::span<const Move> moves);

struct ProductState {
    GlobalState model;
    std::uint32_t claim = 0;
    auto operator<=>(const ProductState &) const = default;
};

struct ProductSuccessor {
    ProductState state;
    bool accepting = false;
    std::optional<Label> label; // empty for Stutter
    bool operator==(const ProductSuccessor &) const = default;
};

/// Synchronous product step: every model transition (or Stutter at a deadlock)
/// paired with every claim edge whose guard holds on it.
std::vector<ProductSuccessor> product_successors(const HierarchyTree &tree, const PrecomputedTables &tables,
                                                 const BoundClaim &claim, const ProductState &p);

} // namespace coin
