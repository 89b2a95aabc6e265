#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "coin/hierarchy.hh"

namespace coin {

class BoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LtsTransition {
    std::uint32_t source = 0;
    Label label;
    std::uint32_t target = 0;
    auto operator<=>(const LtsTransition &) const = default;
};

/// Explicit labelled transition system over global states.
struct ExplicitLts {
    std::vector<GlobalState> states; // sorted
    std::vector<LtsTransition> transitions; // sorted by (source, label, target)
    std::uint32_t initial = 0;

    std::uint32_t index_of(const GlobalState &s) const; // throws std::out_of_range
    /// Outgoing (label, successor) pairs of s, sorted.
    std::vector<std::pair<Label, GlobalState>> outgoing(const GlobalState &s) const;
};

/// Textbook bottom-up composition of the whole hierarchy: every composite builds
/// the reachable product of its children's explicit systems, pairing exactly two
/// distinct children on complementary open labels, then filters by its spec.
/// Serves as the reference for the on-the-fly generators.
ExplicitLts brute_force_compose(const HierarchyTree &tree, std::uint64_t bound = 1'000'000);

} // namespace coin
