#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coin {

using ComponentId = std::uint32_t;
using ActionId = std::uint32_t;

/// Endpoint value standing for the open marker `-`.
inline constexpr ComponentId kOpen = 0;
inline constexpr ComponentId kMaxComponentId = (1u << 20) - 1;
inline constexpr ActionId kMaxActionId = (1u << 24) - 1;

/// Dense interning of action names. Ids are assigned in order of first use.
class ActionTable {
public:
    ActionId intern(std::string_view name);
    std::optional<ActionId> find(std::string_view name) const;
    const std::string &name(ActionId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    std::size_t memory_bytes() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ActionId> ids_;
};

enum class LabelKind { Input, Output, Internal };

/// Interaction triple (sender, action, receiver); at most one endpoint is open.
struct Label {
    ComponentId sender = kOpen;
    ActionId action = 0;
    ComponentId receiver = kOpen;

    bool is_input() const { return sender == kOpen; }
    bool is_output() const { return receiver == kOpen; }
    bool is_internal() const { return sender != kOpen && receiver != kOpen; }
    LabelKind kind() const {
        return is_input() ? LabelKind::Input : is_output() ? LabelKind::Output : LabelKind::Internal;
    }
    bool well_formed() const { return sender != kOpen || receiver != kOpen; }

    // 20 + 24 + 20 bits; order agrees with operator<=>.
    std::uint64_t key() const {
        return (std::uint64_t(sender) << 44) | (std::uint64_t(action) << 20) | receiver;
    }

    auto operator<=>(const Label &) const = default;
};

/// Output (m,a,-) and input (-,a,n) merge into (m,a,n).
inline bool complementary(const Label &out, const Label &in) {
    return out.is_output() && in.is_input() && out.action == in.action;
}
inline Label synchronize(const Label &out, const Label &in) { return {out.sender, out.action, in.receiver}; }

std::string format_label(const Label &l, const ActionTable &actions);

/// Composition parameter of a composite: a black- or whitelist of labels.
class FeasibleSpec {
public:
    enum class Mode { AllowAllExcept, AllowOnly };

    FeasibleSpec() = default;
    FeasibleSpec(Mode mode, std::vector<Label> labels);

    static FeasibleSpec allow_all() { return {}; }
    static FeasibleSpec except(std::vector<Label> labels) { return {Mode::AllowAllExcept, std::move(labels)}; }
    static FeasibleSpec only(std::vector<Label> labels) { return {Mode::AllowOnly, std::move(labels)}; }

    Mode mode() const { return mode_; }
    const std::vector<Label> &labels() const { return labels_; }
    bool is_allow_all() const { return mode_ == Mode::AllowAllExcept && labels_.empty(); }

    bool allows(const Label &l) const;
    std::size_t memory_bytes() const { return sizeof(*this) + labels_.capacity() * sizeof(Label); }

    bool operator==(const FeasibleSpec &) const = default;

private:
    Mode mode_ = Mode::AllowAllExcept;
    std::vector<Label> labels_; // sorted, unique
};

inline bool feasible(const FeasibleSpec &spec, const Label &l) { return spec.allows(l); }

/// feasible(intersect(a, b), l) == feasible(a, l) && feasible(b, l) for every l.
FeasibleSpec intersect(const FeasibleSpec &a, const FeasibleSpec &b);

} // namespace coin

template <>
struct std::hash<coin::Label> {
    std::size_t operator()(const coin::Label &l) const noexcept { return std::hash<std::uint64_t>{}(l.key()); }
};
