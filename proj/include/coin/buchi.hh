#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coin/formula.hh"
#include "coin/model.hh"

namespace coin {

struct GuardLiteral {
    std::uint32_t atom = 0; // index into BuchiAutomaton::atoms
    bool positive = true;
    auto operator<=>(const GuardLiteral &) const = default;
};

/// Conjunction of literals sorted by atom; empty means `true`. Several edges
/// between the same pair of states form a disjunction.
using Cube = std::vector<GuardLiteral>;

struct BuchiEdge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    Cube guard;
    auto operator<=>(const BuchiEdge &) const = default;
};

/// Never-claim: a state-based Büchi automaton whose edges are guarded by act/en atoms.
struct BuchiAutomaton {
    std::vector<AtomDecl> atoms; // sorted, unique
    std::vector<std::string> names;
    std::uint32_t initial = 0;
    std::vector<bool> accepting;
    std::vector<BuchiEdge> edges; // sorted by (from, to, guard)

    std::size_t size() const { return names.size(); }
    bool operator==(const BuchiAutomaton &) const = default;

    /// Sorts atoms, literals and edges into the canonical order and drops unreachable states.
    void normalize();
};

/// Tableau translation of an NNF formula into a generalized automaton, then
/// degeneralized with a level counter. Accepts exactly the runs satisfying f.
BuchiAutomaton to_buchi(const FormulaPtr &nnf_formula);

/// never { state ...; init ...; accept ...; trans s -> t [guard], ...; }
std::string format_never_claim(const BuchiAutomaton &b);
BuchiAutomaton parse_never_claim(std::string_view text);

/// A model optionally followed by a never-claim block, as written by `property`.
struct ModelFile {
    SourceModel model;
    std::optional<BuchiAutomaton> claim;
};
ModelFile parse_model_file(std::string_view text);

namespace detail {
BuchiAutomaton parse_never_block(TokenStream &ts);
} // namespace detail

} // namespace coin
