#include "coin/product.hh"

#include <algorithm>

namespace coin {

BoundClaim::BoundClaim(const BuchiAutomaton &claim, const ActionTable &actions) : claim_(&claim) {
    for (const auto &a : claim.atoms) {
        BoundAtom b{a.kind, std::nullopt};
        if (auto id = actions.find(a.action))
            b.label = Label{a.sender, *id, a.receiver};
        needs_enabled_ = needs_enabled_ || a.kind == AtomDecl::Kind::En;
        atoms_.push_back(b);
    }
    first_edge_.assign(claim.size() + 1, 0);
    for (const auto &e : claim.edges)
        ++first_edge_[e.from + 1];
    for (std::size_t q = 0; q < claim.size(); ++q)
        first_edge_[q + 1] += first_edge_[q];
}

void BoundClaim::targets(std::uint32_t q, std::span<const Label> enabled, const Label *step,
                         std::vector<std::uint32_t> &out) const {
    const std::size_t start = out.size();
    for (auto e = first_edge_[q]; e < first_edge_[q + 1]; ++e) {
        const auto &edge = claim_->edges[e];
        bool holds = true;
        for (const auto &lit : edge.guard)
            if (eval_atom(atoms_[lit.atom], enabled, step) != lit.positive) {
                holds = false;
                break;
            }
        // Parallel cubes to the same target form one disjunctive guard.
        if (holds && (out.size() == start || out.back() != edge.to))
            out.push_back(edge.to);
    }
}

bool eval_atom(const BoundAtom &atom, std::span<const Label> enabled, const Label *step) {
    if (!atom.label)
        return false;
    if (atom.kind == AtomDecl::Kind::Act)
        return step && *step == *atom.label;
    return std::binary_search(enabled.begin(), enabled.end(), *atom.label);
}

std::vector<Label> enabled_labels(std::span<const Move> moves) {
    std::vector<Label> out;
    out.reserve(moves.size());
    for (const auto &m : moves)
        out.push_back(m.label);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ProductSuccessor> product_successors(const HierarchyTree &tree, const PrecomputedTables &tables,
                                                 const BoundClaim &claim, const ProductState &p) {
    auto transitions = successors_lca(tree, tables, p.model);
    std::vector<Label> enabled;
    for (const auto &t : transitions)
        enabled.push_back(t.label);
    std::sort(enabled.begin(), enabled.end());
    enabled.erase(std::unique(enabled.begin(), enabled.end()), enabled.end());

    std::vector<ProductSuccessor> out;
    std::vector<std::uint32_t> targets;
    auto emit = [&](const GlobalState &next, const Label *step) {
        targets.clear();
        claim.targets(p.claim, enabled, step, targets);
        for (auto q : targets)
            out.push_back({{next, q}, claim.accepting(q), step ? std::optional<Label>(*step) : std::nullopt});
    };
    if (transitions.empty())
        emit(p.model, nullptr);
    for (const auto &t : transitions)
        emit(t.successor, &t.label);
    return out;
}

} // namespace coin
