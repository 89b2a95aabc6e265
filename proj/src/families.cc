#include "coin/families.hh"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "coin/model.hh"

namespace coin {

namespace {

LabelDecl lbl(ComponentId s, std::string a, ComponentId r) { return LabelDecl{s, std::move(a), r, {}}; }

TransDecl tr(std::string from, std::string to, LabelDecl l) { return TransDecl{std::move(from), std::move(to), std::move(l), {}}; }

SourceModel toggles(std::uint32_t n) {
    SourceModel m;
    CompositeDecl all;
    all.name = "All";
    for (std::uint32_t k = 0; k < n; ++k) {
        PrimitiveDecl p;
        p.name = "T" + std::to_string(k);
        p.component_id = k + 1;
        p.states = {"s0", "s1"};
        p.init = "s0";
        p.trans = {tr("s0", "s1", lbl(k + 1, "t", k + 1)), tr("s1", "s0", lbl(k + 1, "t", k + 1))};
        all.children.push_back(p.name);
        m.automata.push_back(std::move(p));
    }
    m.composites.push_back(std::move(all));
    m.system = "All";
    return m;
}

SourceModel ring(std::uint32_t n) {
    SourceModel m;
    CompositeDecl root;
    root.name = "Ring";
    FilterDecl closed;
    for (std::uint32_t k = 0; k < n; ++k) {
        ComponentId id = k + 1;
        std::string in = "pass" + std::to_string((k + n - 1) % n);
        std::string out = "pass" + std::to_string(k);
        PrimitiveDecl p;
        p.name = "R" + std::to_string(k);
        p.component_id = id;
        p.states = {"w", "h", "c"};
        p.init = k == 0 ? "h" : "w";
        p.trans = {tr("w", "h", lbl(kOpen, in, id)), tr("h", "c", lbl(id, "enter", id)),
                   tr("c", "w", lbl(id, out, kOpen))};
        closed.labels.push_back(lbl(kOpen, in, id));
        closed.labels.push_back(lbl(id, out, kOpen));
        root.children.push_back(p.name);
        m.automata.push_back(std::move(p));
    }
    root.filter = std::move(closed);
    m.composites.push_back(std::move(root));
    m.system = "Ring";
    return m;
}

SourceModel pipeline_tree(std::uint32_t n, std::uint32_t depth) {
    constexpr std::uint32_t kSlots = 3;
    SourceModel m;

    PrimitiveDecl sem;
    sem.name = "Sem";
    sem.component_id = 1;
    for (std::uint32_t i = 0; i <= kSlots; ++i)
        sem.states.push_back("t" + std::to_string(i));
    sem.init = "t0";
    for (std::uint32_t i = 0; i < kSlots; ++i)
        sem.trans.push_back(tr(sem.states[i], sem.states[i + 1], lbl(kOpen, "acq", 1)));
    for (std::uint32_t i = 1; i <= kSlots; ++i)
        sem.trans.push_back(tr(sem.states[i], sem.states[i - 1], lbl(kOpen, "rel", 1)));
    m.automata.push_back(std::move(sem));

    FilterDecl closed;
    closed.labels = {lbl(kOpen, "acq", 1), lbl(kOpen, "rel", 1)};
    for (std::uint32_t k = 0; k < n; ++k) {
        ComponentId p = 2 + k;
        std::string send = "send" + std::to_string(k);
        PrimitiveDecl prod;
        prod.name = "P" + std::to_string(k);
        prod.component_id = p;
        prod.states = {"idle", "prod"};
        prod.init = "idle";
        prod.trans = {tr("idle", "prod", lbl(p, "acq", kOpen)), tr("prod", "idle", lbl(p, send, kOpen)),
                      tr("prod", "idle", lbl(p, "leak", kOpen))};
        m.automata.push_back(std::move(prod));
        closed.labels.push_back(lbl(p, "acq", kOpen));
        closed.labels.push_back(lbl(p, send, kOpen));
    }
    for (std::uint32_t k = 0; k < n; ++k) {
        ComponentId c = 2 + n + k;
        PrimitiveDecl cons;
        cons.name = "C" + std::to_string(k);
        cons.component_id = c;
        cons.states = {"wait", "got", "done"};
        cons.init = "wait";
        cons.trans = {tr("wait", "got", lbl(kOpen, "send" + std::to_string(k), c)), tr("got", "done", lbl(c, "work", c)),
                      tr("done", "wait", lbl(c, "rel", kOpen))};
        m.automata.push_back(std::move(cons));
        closed.labels.push_back(lbl(kOpen, "send" + std::to_string(k), c));
        closed.labels.push_back(lbl(c, "rel", kOpen));
    }

    // Complete binary tree of composites, depth levels 0..depth-1; leaves split
    // into contiguous chunks under the bottom level.
    const std::size_t leaves = m.automata.size();
    const std::size_t bottom = std::size_t{1} << (depth - 1);
    std::vector<std::vector<std::string>> chunks(bottom);
    for (std::size_t b = 0, next = 0; b < bottom; ++b) {
        std::size_t size = leaves / bottom + (b < leaves % bottom ? 1 : 0);
        for (std::size_t k = 0; k < size; ++k)
            chunks[b].push_back(m.automata[next++].name);
    }
    std::map<std::string, ComponentId> id_of;
    for (const auto &a : m.automata)
        id_of[a.name] = a.component_id;

    auto name = [](std::uint32_t level, std::size_t index) {
        return "N" + std::to_string(level) + "_" + std::to_string(index);
    };
    // Returns the component ids in the subtree.
    auto build = [&](auto &&self, std::uint32_t level, std::size_t index) -> std::vector<ComponentId> {
        CompositeDecl c;
        c.name = name(level, index);
        std::vector<ComponentId> ids;
        if (level + 1 == depth) {
            c.children = chunks[index];
            for (const auto &leaf : c.children)
                ids.push_back(id_of[leaf]);
        } else {
            for (std::size_t k = 0; k < 2; ++k) {
                c.children.push_back(name(level + 1, 2 * index + k));
                auto sub = self(self, level + 1, 2 * index + k);
                ids.insert(ids.end(), sub.begin(), sub.end());
            }
        }
        FilterDecl f;
        if (level == 0)
            f = closed;
        for (ComponentId id : ids)
            f.labels.push_back(lbl(id, "leak", kOpen));
        c.filter = std::move(f);
        m.composites.push_back(std::move(c));
        return ids;
    };
    build(build, 0, 0);
    m.system = name(0, 0);
    return m;
}

} // namespace

ModelFamily parse_family(const std::string &name, std::uint32_t n, std::uint32_t depth) {
    ModelFamily f;
    if (name == "toggles")
        f.kind = ModelFamily::Kind::Toggles;
    else if (name == "pipeline-tree")
        f.kind = ModelFamily::Kind::PipelineTree;
    else if (name == "ring")
        f.kind = ModelFamily::Kind::Ring;
    else
        throw std::invalid_argument("unknown model family '" + name + "'");
    f.n = n;
    f.depth = depth;
    return f;
}

std::string family_name(ModelFamily::Kind kind) {
    switch (kind) {
    case ModelFamily::Kind::Toggles:
        return "toggles";
    case ModelFamily::Kind::PipelineTree:
        return "pipeline-tree";
    case ModelFamily::Kind::Ring:
        return "ring";
    }
    return "?";
}

std::string generate(const ModelFamily &f) {
    if (f.n < 1 || f.depth < 1)
        throw std::invalid_argument("family parameters must be >= 1");
    switch (f.kind) {
    case ModelFamily::Kind::Toggles:
        if (f.n > kMaxComponentId)
            throw std::invalid_argument("toggles: n too large");
        return pretty_print(toggles(f.n));
    case ModelFamily::Kind::Ring:
        if (f.n < 2 || f.n > kMaxComponentId)
            throw std::invalid_argument("ring: n must be between 2 and " + std::to_string(kMaxComponentId));
        return pretty_print(ring(f.n));
    case ModelFamily::Kind::PipelineTree:
        if (f.depth > 20 || (std::uint64_t{1} << (f.depth - 1)) > 2ull * f.n + 1)
            throw std::invalid_argument("pipeline-tree: 2^(d-1) bottom composites need at least as many leaves (2n+1)");
        if (2ull * f.n + 1 > kMaxComponentId)
            throw std::invalid_argument("pipeline-tree: n too large");
        return pretty_print(pipeline_tree(f.n, f.depth));
    }
    throw std::invalid_argument("unknown family");
}

std::string generate_random_model(std::uint64_t seed, const RandomModelParams &params) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint32_t lo, std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng); };
    auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

    const std::uint32_t leaves = pick(1, std::max(1u, params.max_leaves));
    std::vector<ComponentId> ids(leaves);
    for (std::uint32_t i = 0; i < leaves; ++i)
        ids[i] = i + 1;
    std::shuffle(ids.begin(), ids.end(), rng);
    auto action = [&] { return "a" + std::to_string(pick(0, std::max(1u, params.actions) - 1)); };

    SourceModel m;
    for (std::uint32_t i = 0; i < leaves; ++i) {
        PrimitiveDecl p;
        p.name = "P" + std::to_string(i);
        p.component_id = ids[i];
        std::uint32_t states = pick(1, std::max(1u, params.max_states));
        for (std::uint32_t s = 0; s < states; ++s)
            p.states.push_back("q" + std::to_string(s));
        p.init = p.states[0];
        bool local_only = chance(params.local_leaf_bias);
        std::uint32_t trans = pick(0, params.max_trans);
        for (std::uint32_t t = 0; t < trans; ++t) {
            std::uint32_t kind = local_only ? 0 : pick(0, 2);
            ComponentId id = p.component_id;
            LabelDecl l = kind == 0 ? lbl(id, action(), id) : kind == 1 ? lbl(id, action(), kOpen) : lbl(kOpen, action(), id);
            p.trans.push_back(tr(p.states[pick(0, states - 1)], p.states[pick(0, states - 1)], std::move(l)));
        }
        m.automata.push_back(std::move(p));
    }

    // Label universe for filters: leaf labels plus every possible synchronization.
    std::vector<LabelDecl> universe;
    for (const auto &p : m.automata)
        for (const auto &t : p.trans)
            universe.push_back(t.label);
    for (const auto &p : m.automata)
        for (const auto &t : p.trans)
            if (t.label.receiver == kOpen)
                for (const auto &q : m.automata)
                    for (const auto &u : q.trans)
                        if (&p != &q && u.label.sender == kOpen && u.label.action == t.label.action)
                            universe.push_back(lbl(t.label.sender, t.label.action, u.label.receiver));

    // Random tree shape: composites at depth < max_depth, every composite gets a leaf on creation.
    struct Comp {
        std::uint32_t depth;
        std::vector<std::string> children;
    };
    std::vector<Comp> comps;
    if (leaves == 1 && chance(0.2)) {
        m.system = m.automata[0].name;
        return pretty_print(m);
    }
    comps.push_back({0, {}});
    const std::uint32_t max_depth = std::max(1u, params.max_depth);
    for (std::uint32_t i = 0; i < leaves; ++i) {
        std::uint32_t at = pick(0, static_cast<std::uint32_t>(comps.size() - 1));
        if (comps[at].depth + 1 < max_depth && chance(0.45)) {
            comps[at].children.push_back("K" + std::to_string(comps.size()));
            comps.push_back({comps[at].depth + 1, {}});
            at = static_cast<std::uint32_t>(comps.size() - 1);
        }
        comps[at].children.push_back(m.automata[i].name);
    }
    for (std::size_t c = 0; c < comps.size(); ++c) {
        CompositeDecl d;
        d.name = "K" + std::to_string(c);
        d.children = comps[c].children;
        std::shuffle(d.children.begin(), d.children.end(), rng);
        if (!chance(0.4)) {
            FilterDecl f;
            f.mode = chance(0.6) ? FeasibleSpec::Mode::AllowAllExcept : FeasibleSpec::Mode::AllowOnly;
            std::uint32_t count = pick(1, 3);
            for (std::uint32_t k = 0; k < count; ++k) {
                if (!universe.empty() && chance(0.75)) {
                    f.labels.push_back(universe[pick(0, static_cast<std::uint32_t>(universe.size() - 1))]);
                } else {
                    ComponentId s = ids[pick(0, leaves - 1)], r = ids[pick(0, leaves - 1)];
                    switch (pick(0, 2)) {
                    case 0: s = kOpen; break;
                    case 1: r = kOpen; break;
                    default: break;
                    }
                    f.labels.push_back(lbl(s, action(), r));
                }
            }
            d.filter = std::move(f);
        }
        m.composites.push_back(std::move(d));
    }
    m.system = "K0";
    return pretty_print(m);
}

} // namespace coin
