#pragma once

// Independent reference procedures shared by the unit and acceptance tests.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "coin/compose.hh"
#include "coin/formula.hh"
#include "coin/product.hh"

namespace coin::test {

/// One position of an infinite run: the labels enabled in the state and the step taken.
struct Position {
    std::vector<Label> enabled; // sorted
    std::optional<Label> step;  // empty for Stutter
};

/// positions[0..n) followed forever by positions[loop..n).
struct LassoWord {
    std::vector<Position> positions;
    std::size_t loop = 0;
    std::size_t next(std::size_t i) const { return i + 1 < positions.size() ? i + 1 : loop; }
};

inline std::optional<Label> resolve(const AtomDecl &a, const ActionTable &actions) {
    auto id = actions.find(a.action);
    if (!id)
        return std::nullopt;
    return Label{a.sender, *id, a.receiver};
}

/// Textbook fixpoint evaluation of LTL on a lasso; returns the truth value per position.
inline std::vector<bool> evaluate(const Formula &f, const LassoWord &w, const ActionTable &actions) {
    const std::size_t n = w.positions.size();
    std::vector<bool> v(n, false);
    auto fix = [&](const std::vector<bool> &a, const std::vector<bool> &b, bool least) {
        std::vector<bool> r(n, !least);
        for (std::size_t round = 0; round <= n + 1; ++round)
            for (std::size_t k = n; k-- > 0;)
                r[k] = least ? (b[k] || (a[k] && r[w.next(k)])) : (b[k] && (a[k] || r[w.next(k)]));
        return r;
    };
    std::vector<bool> all(n, true), none(n, false);
    switch (f.op) {
    case Op::True: return all;
    case Op::False: return none;
    case Op::Atom: {
        auto l = resolve(f.atom, actions);
        for (std::size_t i = 0; i < n && l; ++i) {
            const auto &p = w.positions[i];
            v[i] = f.atom.kind == AtomDecl::Kind::Act
                       ? (p.step && *p.step == *l)
                       : std::find(p.enabled.begin(), p.enabled.end(), *l) != p.enabled.end();
        }
        return v;
    }
    case Op::Not: {
        auto a = evaluate(*f.lhs, w, actions);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = !a[i];
        return v;
    }
    case Op::Next: {
        auto a = evaluate(*f.lhs, w, actions);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = a[w.next(i)];
        return v;
    }
    case Op::Eventually: return fix(all, evaluate(*f.lhs, w, actions), true);
    case Op::Always: return fix(none, evaluate(*f.lhs, w, actions), false);
    default: break;
    }
    auto a = evaluate(*f.lhs, w, actions), b = evaluate(*f.rhs, w, actions);
    switch (f.op) {
    case Op::And:
        for (std::size_t i = 0; i < n; ++i)
            v[i] = a[i] && b[i];
        return v;
    case Op::Or:
        for (std::size_t i = 0; i < n; ++i)
            v[i] = a[i] || b[i];
        return v;
    case Op::Implies:
        for (std::size_t i = 0; i < n; ++i)
            v[i] = !a[i] || b[i];
        return v;
    case Op::Until: return fix(a, b, true);
    case Op::Release: return fix(a, b, false);
    default: throw std::logic_error("unknown operator");
    }
}

inline bool holds(const Formula &f, const LassoWord &w, const ActionTable &actions) {
    return evaluate(f, w, actions)[0];
}

/// Whether the claim has an accepting run reading w: search the finite graph of
/// (position, claim state) pairs for a reachable accepting node on a cycle.
inline bool claim_accepts(const BoundClaim &claim, const LassoWord &w) {
    const std::size_t n = w.positions.size(), q = claim.size();
    auto id = [&](std::size_t i, std::uint32_t s) { return i * q + s; };
    std::vector<std::vector<std::size_t>> succ(n * q);
    std::vector<std::uint32_t> targets;
    for (std::size_t i = 0; i < n; ++i)
        for (std::uint32_t s = 0; s < q; ++s) {
            targets.clear();
            const auto &p = w.positions[i];
            claim.targets(s, p.enabled, p.step ? &*p.step : nullptr, targets);
            for (auto t : targets)
                succ[id(i, s)].push_back(id(w.next(i), t));
        }
    auto reachable_from = [&](std::size_t start, bool include_start) {
        std::vector<bool> seen(n * q, false);
        std::deque<std::size_t> queue;
        if (include_start) {
            seen[start] = true;
            queue.push_back(start);
        } else {
            for (auto t : succ[start])
                if (!seen[t]) {
                    seen[t] = true;
                    queue.push_back(t);
                }
        }
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (auto t : succ[x])
                if (!seen[t]) {
                    seen[t] = true;
                    queue.push_back(t);
                }
        }
        return seen;
    };
    auto from_init = reachable_from(id(0, claim.initial()), true);
    for (std::size_t x = 0; x < n * q; ++x)
        if (from_init[x] && claim.accepting(static_cast<std::uint32_t>(x % q)) && reachable_from(x, false)[x])
            return true;
    return false;
}

/// Every lasso of at most max_len positions through the model's composed LTS.
/// Deadlocked states continue with Stutter.
inline std::vector<LassoWord> model_lassos(const ExplicitLts &lts, std::size_t max_len, std::size_t cap = 100000) {
    std::vector<std::vector<LtsTransition>> out(lts.states.size());
    for (const auto &t : lts.transitions)
        out[t.source].push_back(t);
    auto enabled = [&](std::uint32_t s) {
        std::vector<Label> e;
        for (const auto &t : out[s])
            e.push_back(t.label);
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    };
    std::vector<LassoWord> result;
    std::vector<std::uint32_t> path{lts.initial};
    std::vector<std::optional<Label>> steps;
    std::function<void()> extend = [&] {
        if (result.size() >= cap)
            return;
        std::uint32_t last = path.back();
        auto close = [&](std::optional<Label> step, std::uint32_t target) {
            for (std::size_t l = 0; l < path.size(); ++l)
                if (path[l] == target) {
                    LassoWord w;
                    for (std::size_t i = 0; i < path.size(); ++i)
                        w.positions.push_back({enabled(path[i]), i + 1 < path.size() ? steps[i] : step});
                    w.loop = l;
                    result.push_back(std::move(w));
                }
        };
        if (out[last].empty()) {
            close(std::nullopt, last);
            return;
        }
        for (const auto &t : out[last])
            close(t.label, t.target);
        if (path.size() < max_len)
            for (const auto &t : out[last]) {
                path.push_back(t.target);
                steps.push_back(t.label);
                extend();
                path.pop_back();
                steps.pop_back();
            }
    };
    extend();
    return result;
}

/// All formulas up to the given depth over the given atoms, operators applied to
/// every combination of shallower formulas.
inline std::vector<FormulaPtr> formulas_up_to(std::size_t max_depth, const std::vector<FormulaPtr> &atoms) {
    std::vector<std::vector<FormulaPtr>> by_depth{atoms};
    for (std::size_t d = 1; d <= max_depth; ++d) {
        std::vector<FormulaPtr> shallower, exact;
        for (std::size_t k = 0; k < d; ++k)
            shallower.insert(shallower.end(), by_depth[k].begin(), by_depth[k].end());
        for (const auto &a : by_depth[d - 1])
            for (Op op : {Op::Not, Op::Next, Op::Eventually, Op::Always})
                exact.push_back(ltl::unary(op, a));
        for (const auto &a : shallower)
            for (const auto &b : shallower) {
                if (depth(*a) != d - 1 && depth(*b) != d - 1)
                    continue;
                for (Op op : {Op::And, Op::Or, Op::Implies, Op::Until, Op::Release})
                    exact.push_back(ltl::binary(op, a, b));
            }
        by_depth.push_back(std::move(exact));
    }
    std::vector<FormulaPtr> all;
    for (auto &v : by_depth)
        all.insert(all.end(), v.begin(), v.end());
    return all;
}

/// Random formula of exactly the given depth.
inline FormulaPtr random_formula(std::mt19937_64 &rng, std::size_t d, const std::vector<FormulaPtr> &atoms) {
    if (d == 0)
        return atoms[rng() % atoms.size()];
    static const Op unary_ops[] = {Op::Not, Op::Next, Op::Eventually, Op::Always};
    static const Op binary_ops[] = {Op::And, Op::Or, Op::Implies, Op::Until, Op::Release};
    if (rng() % 3 == 0)
        return ltl::unary(unary_ops[rng() % 4], random_formula(rng, d - 1, atoms));
    auto deep = random_formula(rng, d - 1, atoms);
    auto other = random_formula(rng, rng() % d, atoms);
    if (rng() % 2)
        std::swap(deep, other);
    return ltl::binary(binary_ops[rng() % 5], deep, other);
}

} // namespace coin::test
