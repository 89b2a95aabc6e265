#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coin/buchi.hh"
#include "coin/por.hh"
#include "coin/product.hh"

namespace coin {

/// Fixed-width packing of a global state (plus an optional claim state) into
/// 64-bit words. Each field gets just enough bits for its range and never
/// straddles a word boundary.
class StateCodec {
public:
    StateCodec(const HierarchyTree &tree, std::uint32_t claim_states = 0);

    std::size_t words() const { return words_; }
    bool has_claim() const { return claim_width_ > 0 || claim_states_ > 0; }

    void encode(std::span<const LocalState> locals, std::uint32_t claim, std::uint64_t *out) const;
    void decode(const std::uint64_t *in, std::span<LocalState> locals, std::uint32_t &claim) const;

private:
    struct Field {
        std::uint32_t word, shift, width;
    };
    static Field place(std::uint32_t width, std::uint32_t &word, std::uint32_t &used);

    std::vector<Field> fields_;
    Field claim_field_{0, 0, 0};
    std::uint32_t claim_width_ = 0;
    std::uint32_t claim_states_ = 0;
    std::size_t words_ = 1;
};

/// 64-bit hash of an encoded state.
std::uint64_t hash_state(std::span<const std::uint64_t> encoded, std::uint64_t seed = 0);

/// Owner shard of an encoded state: deterministic for a fixed seed.
std::uint32_t partition(std::span<const std::uint64_t> encoded, std::uint32_t workers, std::uint64_t seed = 0);

struct ExploreOptions {
    Algorithm algorithm = Algorithm::Lca;
    bool por = false;
    std::uint32_t workers = 1;
    std::uint64_t memory_limit = std::uint64_t{4} << 30;
    std::uint64_t seed = 0;
};

struct Metrics {
    std::uint64_t states = 0;
    std::uint64_t transitions = 0;
    std::uint64_t reduced_states = 0; // expanded with a proper ample subset
    std::uint64_t reexpanded = 0;     // reduced states fully expanded by the cycle proviso
    std::uint32_t proviso_rounds = 0;
    double seconds = 0;
    std::uint64_t store_bytes = 0; // peak bytes held by the state store and queues
    std::uint64_t table_bytes = 0; // precomputed tables
    std::uint64_t peak_rss = 0;    // process high-water mark, 0 where unavailable
    std::uint64_t digest = 0;      // order-independent fingerprint of the state set
    bool resource_limit = false;
};

/// Exhaustive reachability. With por the result is the reduced state space after
/// the cycle proviso reached its fixpoint.
Metrics reach(const HierarchyTree &tree, const PrecomputedTables &tables, const ExploreOptions &options);

struct TraceStep {
    ProductState from;
    std::optional<Label> label; // empty for Stutter
    ProductState to;
};

struct Verdict {
    enum class Kind { Holds, Counterexample, Deadlock, ResourceLimit };
    Kind kind = Kind::Holds;
    std::vector<TraceStep> stem;  // counterexample stem, or the path to a deadlock
    std::vector<TraceStep> cycle; // counterexample cycle, starts and ends at the same state
    Metrics metrics;
};

/// Breadth-first search for a state without successors; the trace is a shortest path.
Verdict check_deadlock(const HierarchyTree &tree, const PrecomputedTables &tables, const ExploreOptions &options);

/// Accepting-cycle search on the product with the claim for the negated property.
/// options.por is honoured only when the claim has no act atoms; the caller must
/// also rule out X operators (reduction_applicable).
Verdict verify(const HierarchyTree &tree, const PrecomputedTables &tables, const BuchiAutomaton &claim,
               const ExploreOptions &options);

/// The explored graph itself, with states decoded. Intended for analysis of
/// small systems; `claim` may be null for the plain model.
struct ExploredGraph {
    SuccessorGraph graph;
    std::vector<ProductState> states;
    std::vector<std::uint8_t> accepting;
    Metrics metrics;
};
ExploredGraph explore_graph(const HierarchyTree &tree, const PrecomputedTables &tables, const BuchiAutomaton *claim,
                            const ExploreOptions &options);

/// OWCTY elimination on an explicit graph: states that lie on or lead within
/// the remaining set to an accepting cycle. Empty iff no reachable accepting cycle.
std::vector<std::uint8_t> accepting_cycle_core(const SuccessorGraph &g, std::span<const std::uint8_t> accepting,
                                               std::uint32_t workers = 1);

/// Peak resident set size of this process in bytes, 0 where unavailable.
std::uint64_t peak_rss_bytes();

} // namespace coin
