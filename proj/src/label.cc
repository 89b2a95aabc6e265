#include "coin/label.hh"

#include <algorithm>
#include <stdexcept>

namespace coin {

ActionId ActionTable::intern(std::string_view name) {
    if (auto it = ids_.find(std::string(name)); it != ids_.end())
        return it->second;
    if (names_.size() > kMaxActionId)
        throw std::length_error("too many distinct action names");
    auto id = static_cast<ActionId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<ActionId> ActionTable::find(std::string_view name) const {
    if (auto it = ids_.find(std::string(name)); it != ids_.end())
        return it->second;
    return std::nullopt;
}

std::size_t ActionTable::memory_bytes() const {
    std::size_t bytes = sizeof(*this) + names_.capacity() * sizeof(std::string);
    for (const auto &n : names_)
        bytes += 2 * n.capacity() + 32; // name + map node
    return bytes;
}

std::string format_label(const Label &l, const ActionTable &actions) {
    auto endpoint = [](ComponentId c) { return c == kOpen ? std::string("-") : std::to_string(c); };
    return "(" + endpoint(l.sender) + "," + actions.name(l.action) + "," + endpoint(l.receiver) + ")";
}

FeasibleSpec::FeasibleSpec(Mode mode, std::vector<Label> labels) : mode_(mode), labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

bool FeasibleSpec::allows(const Label &l) const {
    bool listed = !labels_.empty() && std::binary_search(labels_.begin(), labels_.end(), l);
    return mode_ == Mode::AllowOnly ? listed : !listed;
}

FeasibleSpec intersect(const FeasibleSpec &a, const FeasibleSpec &b) {
    using Mode = FeasibleSpec::Mode;
    const auto &x = a.labels();
    const auto &y = b.labels();
    std::vector<Label> out;
    if (a.mode() == Mode::AllowOnly && b.mode() == Mode::AllowOnly) {
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
        return FeasibleSpec::only(std::move(out));
    }
    if (a.mode() == Mode::AllowOnly) {
        std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
        return FeasibleSpec::only(std::move(out));
    }
    if (b.mode() == Mode::AllowOnly) {
        std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::back_inserter(out));
        return FeasibleSpec::only(std::move(out));
    }
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return FeasibleSpec::except(std::move(out));
}

} // namespace coin
