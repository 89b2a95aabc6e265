#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coin/hierarchy.hh"
#include "coin/syntax.hh"

namespace coin {

// Source-level declarations. Positions are carried for diagnostics only and do
// not take part in equality.

struct LabelDecl {
    ComponentId sender = kOpen; // kOpen for `-`
    std::string action;
    ComponentId receiver = kOpen;
    SourcePos pos;

    bool operator==(const LabelDecl &o) const {
        return sender == o.sender && action == o.action && receiver == o.receiver;
    }
};

struct TransDecl {
    std::string from;
    std::string to;
    LabelDecl label;
    SourcePos pos;

    bool operator==(const TransDecl &o) const { return from == o.from && to == o.to && label == o.label; }
};

struct PrimitiveDecl {
    std::string name;
    ComponentId component_id = 1;
    std::vector<std::string> states;
    std::string init;
    std::vector<TransDecl> trans;
    SourcePos pos;

    bool operator==(const PrimitiveDecl &o) const {
        return name == o.name && component_id == o.component_id && states == o.states && init == o.init &&
               trans == o.trans;
    }
};

struct FilterDecl {
    FeasibleSpec::Mode mode = FeasibleSpec::Mode::AllowAllExcept;
    std::vector<LabelDecl> labels;
    bool operator==(const FilterDecl &) const = default;
};

struct CompositeDecl {
    std::string name;
    std::vector<std::string> children;
    std::optional<FilterDecl> filter; // absent: allow everything
    SourcePos pos;

    bool operator==(const CompositeDecl &o) const {
        return name == o.name && children == o.children && filter == o.filter;
    }
};

struct SourceModel {
    std::vector<PrimitiveDecl> automata;
    std::vector<CompositeDecl> composites;
    std::string system;
    SourcePos system_pos;

    bool operator==(const SourceModel &o) const {
        return automata == o.automata && composites == o.composites && system == o.system;
    }
};

/// Parses and validates a CoIn model. Throws ParseError with the offending position.
SourceModel parse_model(std::string_view text);

/// Semantic checks run by parse_model; exposed for models assembled in code.
void validate(const SourceModel &model);

/// Builds the hierarchy rooted at the system declaration.
HierarchyTree elaborate(const SourceModel &model);

/// Canonical text; parse_model(pretty_print(m)) == m for every valid m.
std::string pretty_print(const SourceModel &model);

namespace detail {
// Used by the never-claim reader to continue after `system X;`.
SourceModel parse_model_prefix(TokenStream &ts);
LabelDecl parse_label(TokenStream &ts);
} // namespace detail

} // namespace coin
