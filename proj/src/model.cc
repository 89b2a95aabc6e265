#include "coin/model.hh"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace coin {

namespace detail {

namespace {

ComponentId parse_endpoint(TokenStream &ts) {
    if (ts.accept("-"))
        return kOpen;
    const Token &t = ts.expect_int("component id or '-'");
    if (t.value < 1)
        throw ParseError(t.pos, "component id must be >= 1");
    if (t.value > kMaxComponentId)
        throw ParseError(t.pos, "component id out of range");
    return static_cast<ComponentId>(t.value);
}

std::vector<std::string> ident_list(TokenStream &ts, std::string_view what) {
    std::vector<std::string> out;
    do {
        out.push_back(ts.expect_ident(what).text);
    } while (ts.accept(","));
    return out;
}

PrimitiveDecl parse_automaton(TokenStream &ts) {
    PrimitiveDecl a;
    a.pos = ts.expect_word("automaton").pos;
    a.name = ts.expect_ident("automaton name").text;
    ts.expect("(");
    const Token &id = ts.expect_int("component id");
    if (id.value < 1)
        throw ParseError(id.pos, "component id must be >= 1");
    if (id.value > kMaxComponentId)
        throw ParseError(id.pos, "component id out of range");
    a.component_id = static_cast<ComponentId>(id.value);
    ts.expect(")");
    ts.expect("{");
    ts.expect_word("state");
    a.states = ident_list(ts, "state name");
    ts.expect(";");
    ts.expect_word("init");
    a.init = ts.expect_ident("initial state").text;
    ts.expect(";");
    ts.expect_word("trans");
    if (!ts.peek().is(";")) {
        do {
            TransDecl t;
            t.pos = ts.peek().pos;
            t.from = ts.expect_ident("source state").text;
            ts.expect("->");
            t.to = ts.expect_ident("target state").text;
            t.label = parse_label(ts);
            a.trans.push_back(std::move(t));
        } while (ts.accept(","));
    }
    ts.expect(";");
    ts.expect("}");
    return a;
}

CompositeDecl parse_composite(TokenStream &ts) {
    CompositeDecl c;
    c.pos = ts.expect_word("composite").pos;
    c.name = ts.expect_ident("composite name").text;
    ts.expect("{");
    c.children = ident_list(ts, "automaton name");
    ts.expect(";");
    if (ts.peek().is_word("restrictL") || ts.peek().is_word("onlyL")) {
        FilterDecl f;
        f.mode = ts.next().text == "onlyL" ? FeasibleSpec::Mode::AllowOnly : FeasibleSpec::Mode::AllowAllExcept;
        do {
            f.labels.push_back(parse_label(ts));
        } while (ts.accept(","));
        ts.expect(";");
        c.filter = std::move(f);
    }
    ts.expect("}");
    return c;
}

} // namespace

LabelDecl parse_label(TokenStream &ts) {
    LabelDecl l;
    l.pos = ts.expect("(").pos;
    l.sender = parse_endpoint(ts);
    ts.expect(",");
    l.action = ts.expect_ident("action name").text;
    ts.expect(",");
    l.receiver = parse_endpoint(ts);
    ts.expect(")");
    if (l.sender == kOpen && l.receiver == kOpen)
        throw ParseError(l.pos, "label has two open endpoints");
    return l;
}

SourceModel parse_model_prefix(TokenStream &ts) {
    SourceModel m;
    bool any = false;
    for (;;) {
        const Token &t = ts.peek();
        if (t.is_word("automaton")) {
            m.automata.push_back(parse_automaton(ts));
        } else if (t.is_word("composite")) {
            m.composites.push_back(parse_composite(ts));
        } else if (t.is_word("system")) {
            if (!any)
                ts.fail("expected 'automaton' or 'composite' before 'system'");
            m.system_pos = ts.next().pos;
            m.system = ts.expect_ident("system name").text;
            ts.expect(";");
            return m;
        } else if (t.kind == TokenKind::End) {
            ts.fail("missing system declaration");
        } else {
            ts.unexpected("'automaton', 'composite' or 'system'");
        }
        any = true;
    }
}

} // namespace detail

SourceModel parse_model(std::string_view text) {
    TokenStream ts(text);
    SourceModel m = detail::parse_model_prefix(ts);
    if (!ts.at_end())
        ts.unexpected("end of input after system declaration");
    validate(m);
    return m;
}

void validate(const SourceModel &m) {
    std::map<std::string, SourcePos> declared;
    std::map<ComponentId, std::string> ids;
    auto declare = [&](const std::string &name, SourcePos pos) {
        if (!declared.emplace(name, pos).second)
            throw ParseError(pos, "duplicate declaration '" + name + "'");
    };

    for (const auto &a : m.automata) {
        declare(a.name, a.pos);
        if (a.component_id < 1 || a.component_id > kMaxComponentId)
            throw ParseError(a.pos, "component id out of range");
        if (auto [it, fresh] = ids.emplace(a.component_id, a.name); !fresh)
            throw ParseError(a.pos, "duplicate component id " + std::to_string(a.component_id) + " (also used by '" +
                                        it->second + "')");
        std::set<std::string> states;
        for (const auto &s : a.states)
            if (!states.insert(s).second)
                throw ParseError(a.pos, "duplicate state '" + s + "' in '" + a.name + "'");
        if (!states.count(a.init))
            throw ParseError(a.pos, "unknown initial state '" + a.init + "' in '" + a.name + "'");
        for (const auto &t : a.trans) {
            if (!states.count(t.from))
                throw ParseError(t.pos, "unknown state '" + t.from + "' in '" + a.name + "'");
            if (!states.count(t.to))
                throw ParseError(t.pos, "unknown state '" + t.to + "' in '" + a.name + "'");
            const auto &l = t.label;
            if (l.sender == kOpen && l.receiver == kOpen)
                throw ParseError(l.pos, "label has two open endpoints");
            for (ComponentId e : {l.sender, l.receiver})
                if (e != kOpen && e != a.component_id)
                    throw ParseError(l.pos, "label endpoint " + std::to_string(e) + " does not match component id " +
                                                std::to_string(a.component_id) + " of '" + a.name + "'");
        }
    }
    for (const auto &c : m.composites) {
        declare(c.name, c.pos);
        if (c.children.empty())
            throw ParseError(c.pos, "composite '" + c.name + "' has no children");
        if (c.filter)
            for (const auto &l : c.filter->labels)
                if (l.sender == kOpen && l.receiver == kOpen)
                    throw ParseError(l.pos, "label has two open endpoints");
    }

    if (m.system.empty())
        throw ParseError(m.system_pos, "missing system declaration");
    if (!declared.count(m.system))
        throw ParseError(m.system_pos, "undeclared reference '" + m.system + "'");

    // Each declaration is used by at most one parent, there are no cycles, and
    // everything hangs below the system root.
    std::map<std::string, std::string> parent_of;
    std::map<std::string, const CompositeDecl *> composites;
    for (const auto &c : m.composites)
        composites[c.name] = &c;
    for (const auto &c : m.composites)
        for (const auto &child : c.children) {
            if (!declared.count(child))
                throw ParseError(c.pos, "undeclared reference '" + child + "' in composite '" + c.name + "'");
            if (auto [it, fresh] = parent_of.emplace(child, c.name); !fresh)
                throw ParseError(c.pos, "non-tree hierarchy: '" + child + "' is used by both '" + it->second +
                                            "' and '" + c.name + "'");
        }
    if (parent_of.count(m.system))
        throw ParseError(m.system_pos, "non-tree hierarchy: system '" + m.system + "' is used inside composite '" +
                                           parent_of[m.system] + "'");

    std::set<std::string> reached;
    std::vector<std::string> stack{m.system};
    while (!stack.empty()) {
        std::string n = stack.back();
        stack.pop_back();
        reached.insert(n);
        if (auto it = composites.find(n); it != composites.end())
            for (const auto &child : it->second->children)
                stack.push_back(child);
    }
    for (const auto &[name, pos] : declared)
        if (!reached.count(name)) {
            // Unreached composites with a parent chain that loops back are cycles.
            std::string cur = name;
            std::set<std::string> seen;
            while (parent_of.count(cur) && seen.insert(cur).second)
                cur = parent_of[cur];
            if (seen.count(cur))
                throw ParseError(pos, "non-tree hierarchy: cyclic composition through '" + name + "'");
            throw ParseError(pos, "'" + name + "' is not reachable from system '" + m.system + "'");
        }
}

HierarchyTree elaborate(const SourceModel &m) {
    std::unordered_map<std::string, const PrimitiveDecl *> automata;
    std::unordered_map<std::string, const CompositeDecl *> composites;
    for (const auto &a : m.automata)
        automata[a.name] = &a;
    for (const auto &c : m.composites)
        composites[c.name] = &c;

    ActionTable actions;
    std::vector<HierarchyNode> nodes;
    std::vector<PrimitiveAutomaton> leaves;
    auto to_label = [&](const LabelDecl &l) { return Label{l.sender, actions.intern(l.action), l.receiver}; };

    auto build = [&](auto &&self, const std::string &name, NodeId parent) -> NodeId {
        auto id = static_cast<NodeId>(nodes.size());
        nodes.emplace_back();
        nodes[id].name = name;
        nodes[id].parent = parent;
        if (auto it = automata.find(name); it != automata.end()) {
            const PrimitiveDecl &d = *it->second;
            PrimitiveAutomaton p;
            p.name = d.name;
            p.component_id = d.component_id;
            p.states = d.states;
            std::unordered_map<std::string, LocalState> index;
            for (LocalState s = 0; s < d.states.size(); ++s)
                index[d.states[s]] = s;
            p.init = index.at(d.init);
            p.outgoing.resize(d.states.size());
            for (const auto &t : d.trans)
                p.outgoing[index.at(t.from)].push_back({to_label(t.label), index.at(t.to)});
            for (auto &out : p.outgoing) {
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
            }
            nodes[id].leaf = static_cast<std::uint32_t>(leaves.size());
            leaves.push_back(std::move(p));
            return id;
        }
        const CompositeDecl &c = *composites.at(name);
        if (c.filter) {
            std::vector<Label> labels;
            for (const auto &l : c.filter->labels)
                labels.push_back(to_label(l));
            nodes[id].spec = FeasibleSpec(c.filter->mode, std::move(labels));
        }
        for (const auto &child : c.children) {
            NodeId cid = self(self, child, id);
            nodes[id].children.push_back(cid);
        }
        return id;
    };
    build(build, m.system, kNoNode);
    return HierarchyTree(std::move(actions), std::move(nodes), std::move(leaves));
}

namespace {

std::string endpoint(ComponentId c) { return c == kOpen ? "-" : std::to_string(c); }

std::string label_text(const LabelDecl &l) {
    return "(" + endpoint(l.sender) + ", " + l.action + ", " + endpoint(l.receiver) + ")";
}

std::string join(const std::vector<std::string> &items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? ", " : "") + items[i];
    return out;
}

} // namespace

std::string pretty_print(const SourceModel &m) {
    std::ostringstream out;
    for (const auto &a : m.automata) {
        out << "automaton " << a.name << " (" << a.component_id << ") {\n";
        out << "    state " << join(a.states) << ";\n";
        out << "    init " << a.init << ";\n";
        if (a.trans.empty()) {
            out << "    trans;\n";
        } else {
            out << "    trans\n";
            for (std::size_t i = 0; i < a.trans.size(); ++i) {
                const auto &t = a.trans[i];
                out << "        " << t.from << " -> " << t.to << " " << label_text(t.label)
                    << (i + 1 < a.trans.size() ? ",\n" : ";\n");
            }
        }
        out << "}\n\n";
    }
    for (const auto &c : m.composites) {
        out << "composite " << c.name << " {\n";
        out << "    " << join(c.children) << ";\n";
        if (c.filter) {
            std::vector<std::string> labels;
            for (const auto &l : c.filter->labels)
                labels.push_back(label_text(l));
            out << "    " << (c.filter->mode == FeasibleSpec::Mode::AllowOnly ? "onlyL " : "restrictL ")
                << join(labels) << ";\n";
        }
        out << "}\n\n";
    }
    out << "system " << m.system << ";\n";
    return out.str();
}

} // namespace coin
