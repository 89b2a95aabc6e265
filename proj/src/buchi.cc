#include "coin/buchi.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace coin {

namespace {

void collect_atoms(const Formula &f, std::vector<AtomDecl> &out) {
    if (f.op == Op::Atom)
        out.push_back(f.atom);
    if (f.lhs)
        collect_atoms(*f.lhs, out);
    if (f.rhs)
        collect_atoms(*f.rhs, out);
}

struct Cover {
    std::map<std::uint32_t, bool> literals; // atom -> polarity
    std::set<std::uint32_t> next;
    std::set<std::uint32_t> postponed; // eventualities deferred on this step
};

/// Cover expansion over subformulas interned by their canonical text.
class Tableau {
public:
    explicit Tableau(const FormulaPtr &f) {
        collect_atoms(*f, atoms_);
        std::sort(atoms_.begin(), atoms_.end());
        atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
        root_ = intern(f);
    }

    std::uint32_t root() const { return root_; }
    const std::vector<AtomDecl> &atoms() const { return atoms_; }
    std::size_t eventualities() const { return eventuality_.size(); }

    /// Covers of the obligation set `state`, with redundant ones removed.
    std::vector<Cover> covers(const std::vector<std::uint32_t> &state) {
        std::vector<Cover> out;
        expand(state, {}, {}, out);
        std::vector<Cover> kept;
        for (std::size_t i = 0; i < out.size(); ++i) {
            bool redundant = false;
            for (std::size_t j = 0; j < out.size() && !redundant; ++j)
                if (i != j && subsumes(out[j], out[i]) && (!subsumes(out[i], out[j]) || j < i))
                    redundant = true;
            if (!redundant)
                kept.push_back(out[i]);
        }
        return kept;
    }

    /// Eventualities fulfilled (not deferred) by a cover, as acceptance-set indices.
    std::vector<std::uint32_t> marks(const Cover &c) const {
        std::vector<std::uint32_t> m;
        for (const auto &[id, index] : eventuality_)
            if (!c.postponed.count(id))
                m.push_back(index);
        std::sort(m.begin(), m.end());
        return m;
    }

private:
    std::uint32_t intern(const FormulaPtr &f) {
        auto key = format_formula(*f);
        auto it = ids_.find(key);
        if (it != ids_.end())
            return it->second;
        // Children first so their ids exist when the node is expanded.
        if (f->lhs)
            intern(f->lhs);
        if (f->rhs)
            intern(f->rhs);
        auto id = static_cast<std::uint32_t>(forms_.size());
        forms_.push_back(f);
        ids_.emplace(std::move(key), id);
        if (f->op == Op::Until || f->op == Op::Eventually) {
            auto index = static_cast<std::uint32_t>(eventuality_.size());
            eventuality_.emplace(id, index);
        }
        return id;
    }

    std::uint32_t id(const FormulaPtr &f) const { return ids_.at(format_formula(*f)); }

    std::uint32_t atom_index(const AtomDecl &a) const {
        return static_cast<std::uint32_t>(std::lower_bound(atoms_.begin(), atoms_.end(), a) - atoms_.begin());
    }

    static bool subset(const std::set<std::uint32_t> &a, const std::set<std::uint32_t> &b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    // a is at least as permissive as b: weaker guard, fewer obligations, fewer deferrals.
    static bool subsumes(const Cover &a, const Cover &b) {
        for (const auto &[atom, pos] : a.literals) {
            auto it = b.literals.find(atom);
            if (it == b.literals.end() || it->second != pos)
                return false;
        }
        return subset(a.next, b.next) && subset(a.postponed, b.postponed);
    }

    void expand(std::vector<std::uint32_t> todo, std::set<std::uint32_t> now, Cover c, std::vector<Cover> &out) {
        while (!todo.empty()) {
            std::uint32_t fid = todo.back();
            todo.pop_back();
            if (!now.insert(fid).second)
                continue;
            const Formula &f = *forms_[fid];
            switch (f.op) {
            case Op::True:
                break;
            case Op::False:
                return;
            case Op::Atom:
            case Op::Not: {
                bool pos = f.op == Op::Atom;
                auto [it, inserted] = c.literals.emplace(atom_index(pos ? f.atom : f.lhs->atom), pos);
                if (!inserted && it->second != pos)
                    return;
                break;
            }
            case Op::And:
                todo.push_back(id(f.rhs));
                todo.push_back(id(f.lhs));
                break;
            case Op::Or: {
                auto l = id(f.lhs), r = id(f.rhs);
                if (now.count(l) || now.count(r))
                    break;
                auto alt = todo;
                alt.push_back(r);
                expand(std::move(alt), now, c, out);
                todo.push_back(l);
                break;
            }
            case Op::Next:
                c.next.insert(id(f.lhs));
                break;
            case Op::Until:
            case Op::Eventually: {
                auto goal = id(f.op == Op::Until ? f.rhs : f.lhs);
                if (now.count(goal))
                    break;
                auto alt = todo;
                if (f.op == Op::Until)
                    alt.push_back(id(f.lhs));
                Cover deferred = c;
                deferred.next.insert(fid);
                deferred.postponed.insert(fid);
                expand(std::move(alt), now, std::move(deferred), out);
                todo.push_back(goal);
                break;
            }
            case Op::Release: {
                auto a = id(f.lhs), b = id(f.rhs);
                if (now.count(a)) {
                    todo.push_back(b);
                    break;
                }
                auto alt = todo;
                alt.push_back(b);
                Cover deferred = c;
                deferred.next.insert(fid);
                expand(std::move(alt), now, std::move(deferred), out);
                todo.push_back(b);
                todo.push_back(a);
                break;
            }
            case Op::Always:
                todo.push_back(id(f.lhs));
                c.next.insert(fid);
                break;
            case Op::Implies:
                throw std::invalid_argument("to_buchi expects a formula in negation normal form");
            }
        }
        out.push_back(std::move(c));
    }

    std::vector<AtomDecl> atoms_;
    std::vector<FormulaPtr> forms_;
    std::map<std::string, std::uint32_t> ids_;
    std::map<std::uint32_t, std::uint32_t> eventuality_; // formula id -> acceptance set
    std::uint32_t root_ = 0;
};

bool contradictory(const Cube &c) {
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i].atom == c[i - 1].atom)
            return true;
    return false;
}

std::string format_guard(const std::vector<const Cube *> &cubes, const std::vector<AtomDecl> &atoms) {
    std::string out;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (i)
            out += " || ";
        if (cubes[i]->empty())
            out += "true";
        for (std::size_t k = 0; k < cubes[i]->size(); ++k) {
            const auto &lit = (*cubes[i])[k];
            if (k)
                out += " && ";
            if (!lit.positive)
                out += "!";
            out += format_atom(atoms[lit.atom]);
        }
    }
    return out;
}

} // namespace

void BuchiAutomaton::normalize() {
    // Canonical atom order.
    std::vector<AtomDecl> sorted = atoms;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<BuchiEdge> cleaned;
    for (auto e : edges) {
        for (auto &lit : e.guard)
            lit.atom = static_cast<std::uint32_t>(
                std::lower_bound(sorted.begin(), sorted.end(), atoms[lit.atom]) - sorted.begin());
        std::sort(e.guard.begin(), e.guard.end());
        e.guard.erase(std::unique(e.guard.begin(), e.guard.end()), e.guard.end());
        if (!contradictory(e.guard))
            cleaned.push_back(std::move(e));
    }
    atoms = std::move(sorted);

    // Keep reachable states in their original relative order.
    std::vector<std::vector<std::uint32_t>> succ(names.size());
    for (const auto &e : cleaned)
        succ[e.from].push_back(e.to);
    std::vector<std::uint32_t> renumber(names.size(), ~0u);
    std::vector<bool> seen(names.size(), false);
    std::deque<std::uint32_t> queue{initial};
    seen[initial] = true;
    while (!queue.empty()) {
        auto q = queue.front();
        queue.pop_front();
        for (auto t : succ[q])
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
    }
    std::vector<std::string> kept_names;
    std::vector<bool> kept_accepting;
    for (std::uint32_t q = 0; q < names.size(); ++q)
        if (seen[q]) {
            renumber[q] = static_cast<std::uint32_t>(kept_names.size());
            kept_names.push_back(names[q]);
            kept_accepting.push_back(accepting[q]);
        }
    std::vector<BuchiEdge> renamed;
    for (auto &e : cleaned)
        if (seen[e.from])
            renamed.push_back({renumber[e.from], renumber[e.to], std::move(e.guard)});
    std::sort(renamed.begin(), renamed.end());
    renamed.erase(std::unique(renamed.begin(), renamed.end()), renamed.end());

    // Drop an edge when a weaker guard already connects the same pair.
    edges.clear();
    for (std::size_t i = 0; i < renamed.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < renamed.size() && !redundant; ++j)
            redundant = j != i && renamed[j].from == renamed[i].from && renamed[j].to == renamed[i].to &&
                        renamed[j].guard.size() < renamed[i].guard.size() &&
                        std::includes(renamed[i].guard.begin(), renamed[i].guard.end(), renamed[j].guard.begin(),
                                      renamed[j].guard.end());
        if (!redundant)
            edges.push_back(renamed[i]);
    }
    names = std::move(kept_names);
    accepting = std::move(kept_accepting);
    initial = renumber[initial];
}

BuchiAutomaton to_buchi(const FormulaPtr &f) {
    Tableau tab(f);
    const auto k = static_cast<std::uint32_t>(tab.eventualities());

    std::map<std::vector<std::uint32_t>, std::uint32_t> tableau_ids;
    std::vector<std::vector<std::uint32_t>> tableau_states;
    std::vector<std::vector<Cover>> tableau_covers;
    auto tableau_state = [&](std::vector<std::uint32_t> obligations) {
        auto [it, inserted] = tableau_ids.emplace(obligations, static_cast<std::uint32_t>(tableau_states.size()));
        if (inserted) {
            tableau_covers.push_back(tab.covers(obligations));
            tableau_states.push_back(std::move(obligations));
        }
        return it->second;
    };

    // Degeneralize: a state is (tableau state, level); level k is accepting.
    BuchiAutomaton b;
    b.atoms = tab.atoms();
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
    auto state = [&](std::uint32_t t, std::uint32_t level) {
        auto [it, inserted] = ids.emplace(std::pair{t, level}, static_cast<std::uint32_t>(b.names.size()));
        if (inserted) {
            b.names.push_back("s" + std::to_string(b.names.size()));
            b.accepting.push_back(level == k);
            queue.emplace_back(t, level);
        }
        return it->second;
    };
    b.initial = state(tableau_state({tab.root()}), 0);
    while (!queue.empty()) {
        auto [t, level] = queue.front();
        queue.pop_front();
        auto from = ids.at({t, level});
        auto covers = tableau_covers[t];
        for (const auto &c : covers) {
            auto marks = tab.marks(c);
            std::uint32_t j = level == k ? 0 : level;
            while (j < k && std::binary_search(marks.begin(), marks.end(), j))
                ++j;
            auto target = tableau_state(std::vector<std::uint32_t>(c.next.begin(), c.next.end()));
            Cube guard;
            for (const auto &[atom, pos] : c.literals)
                guard.push_back({atom, pos});
            b.edges.push_back({from, state(target, j), std::move(guard)});
        }
    }
    // A state without successors never lies on an accepting run.
    std::vector<bool> has_edge(b.names.size(), false);
    for (const auto &e : b.edges)
        has_edge[e.from] = true;
    for (std::size_t q = 0; q < b.names.size(); ++q)
        b.accepting[q] = b.accepting[q] && has_edge[q];
    b.normalize();
    return b;
}

std::string format_never_claim(const BuchiAutomaton &b) {
    auto list = [&](auto pred) {
        std::string out;
        for (std::uint32_t q = 0; q < b.names.size(); ++q)
            if (pred(q))
                out += (out.empty() ? " " : ", ") + b.names[q];
        return out;
    };
    std::string out = "never {\n";
    out += "    state" + list([](std::uint32_t) { return true; }) + ";\n";
    out += "    init " + b.names[b.initial] + ";\n";
    out += "    accept" + list([&](std::uint32_t q) { return b.accepting[q]; }) + ";\n";
    out += "    trans";
    bool first = true;
    for (std::size_t i = 0; i < b.edges.size();) {
        std::vector<const Cube *> cubes;
        std::size_t j = i;
        for (; j < b.edges.size() && b.edges[j].from == b.edges[i].from && b.edges[j].to == b.edges[i].to; ++j)
            cubes.push_back(&b.edges[j].guard);
        out += first ? "\n        " : ",\n        ";
        first = false;
        out += b.names[b.edges[i].from] + " -> " + b.names[b.edges[i].to] + " [" + format_guard(cubes, b.atoms) + "]";
        i = j;
    }
    out += ";\n}\n";
    return out;
}

namespace detail {

BuchiAutomaton parse_never_block(TokenStream &ts) {
    BuchiAutomaton b;
    ts.expect_word("never");
    ts.expect("{");
    std::map<std::string, std::uint32_t> index;
    ts.expect_word("state");
    do {
        const Token &t = ts.expect_ident("claim state name");
        if (!index.emplace(t.text, static_cast<std::uint32_t>(b.names.size())).second)
            throw ParseError(t.pos, "duplicate claim state '" + t.text + "'");
        b.names.push_back(t.text);
    } while (ts.accept(","));
    ts.expect(";");
    b.accepting.assign(b.names.size(), false);
    auto lookup = [&](const Token &t) {
        auto it = index.find(t.text);
        if (it == index.end())
            throw ParseError(t.pos, "unknown claim state '" + t.text + "'");
        return it->second;
    };
    ts.expect_word("init");
    b.initial = lookup(ts.expect_ident("claim state name"));
    ts.expect(";");
    ts.expect_word("accept");
    if (!ts.peek().is(";"))
        do {
            b.accepting[lookup(ts.expect_ident("claim state name"))] = true;
        } while (ts.accept(","));
    ts.expect(";");
    ts.expect_word("trans");
    std::map<AtomDecl, std::uint32_t> atom_ids;
    if (!ts.peek().is(";"))
        do {
            auto from = lookup(ts.expect_ident("claim state name"));
            ts.expect("->");
            auto to = lookup(ts.expect_ident("claim state name"));
            ts.expect("[");
            do {
                Cube cube;
                bool satisfiable = true;
                do {
                    if (ts.accept_word("true"))
                        continue;
                    if (ts.accept_word("false")) {
                        satisfiable = false;
                        continue;
                    }
                    bool positive = !ts.accept("!");
                    auto atom = parse_atom(ts);
                    auto [it, inserted] = atom_ids.emplace(atom, static_cast<std::uint32_t>(b.atoms.size()));
                    if (inserted)
                        b.atoms.push_back(atom);
                    cube.push_back({it->second, positive});
                } while (ts.accept("&&"));
                if (satisfiable)
                    b.edges.push_back({from, to, std::move(cube)});
            } while (ts.accept("||"));
            ts.expect("]");
        } while (ts.accept(","));
    ts.expect(";");
    ts.expect("}");
    b.normalize();
    return b;
}

} // namespace detail

BuchiAutomaton parse_never_claim(std::string_view text) {
    TokenStream ts(text);
    auto b = detail::parse_never_block(ts);
    if (!ts.at_end())
        ts.unexpected("end of input after never claim");
    return b;
}

ModelFile parse_model_file(std::string_view text) {
    TokenStream ts(text);
    ModelFile f;
    f.model = detail::parse_model_prefix(ts);
    if (ts.peek().is_word("never"))
        f.claim = detail::parse_never_block(ts);
    if (!ts.at_end())
        ts.unexpected("end of input");
    validate(f.model);
    return f;
}

} // namespace coin
