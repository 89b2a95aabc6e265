#include "coin/explorer.hh"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <bit>
#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <thread>

namespace coin {

// ---------------------------------------------------------------------------
// Encoding and hashing

namespace {

std::uint32_t bits_for(std::uint32_t values) {
    return values <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(values - 1));
}

inline std::uint64_t fmix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

inline std::uint64_t hash_words(const std::uint64_t *w, std::size_t n, std::uint64_t seed) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ fmix(seed + n);
    for (std::size_t i = 0; i < n; ++i)
        h = fmix(h ^ (w[i] + 0x9e3779b97f4a7c15ULL * (i + 1)));
    return h;
}

inline std::uint32_t owner_of(std::uint64_t h, std::uint32_t workers) {
    return static_cast<std::uint32_t>(((h >> 32) * workers) >> 32);
}

constexpr std::uint64_t kDigestSalt = 0x5eed5eed5eed5eedULL;

} // namespace

StateCodec::Field StateCodec::place(std::uint32_t width, std::uint32_t &word, std::uint32_t &used) {
    if (used + width > 64) {
        ++word;
        used = 0;
    }
    Field f{word, used, width};
    used += width;
    return f;
}

StateCodec::StateCodec(const HierarchyTree &tree, std::uint32_t claim_states) : claim_states_(claim_states) {
    std::uint32_t word = 0, used = 0;
    for (const auto &leaf : tree.leaves())
        fields_.push_back(place(bits_for(static_cast<std::uint32_t>(leaf.states.size())), word, used));
    claim_width_ = bits_for(claim_states);
    claim_field_ = place(claim_width_, word, used);
    words_ = word + 1;
}

void StateCodec::encode(std::span<const LocalState> locals, std::uint32_t claim, std::uint64_t *out) const {
    std::memset(out, 0, words_ * sizeof(std::uint64_t));
    for (std::size_t i = 0; i < fields_.size(); ++i)
        out[fields_[i].word] |= std::uint64_t(locals[i]) << fields_[i].shift;
    out[claim_field_.word] |= std::uint64_t(claim) << claim_field_.shift;
}

void StateCodec::decode(const std::uint64_t *in, std::span<LocalState> locals, std::uint32_t &claim) const {
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        const auto &f = fields_[i];
        locals[i] = f.width ? static_cast<LocalState>((in[f.word] >> f.shift) & ((std::uint64_t{1} << f.width) - 1)) : 0;
    }
    claim = claim_width_ ? static_cast<std::uint32_t>((in[claim_field_.word] >> claim_field_.shift) &
                                                      ((std::uint64_t{1} << claim_width_) - 1))
                         : 0;
}

std::uint64_t hash_state(std::span<const std::uint64_t> encoded, std::uint64_t seed) {
    return hash_words(encoded.data(), encoded.size(), seed);
}

std::uint32_t partition(std::span<const std::uint64_t> encoded, std::uint32_t workers, std::uint64_t seed) {
    return owner_of(hash_state(encoded, seed), workers);
}

std::uint64_t peak_rss_bytes() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("VmHWM:", 0) == 0)
            return std::stoull(line.substr(6)) * 1024;
    return 0;
}

// ---------------------------------------------------------------------------
// Parallel helpers

namespace {

/// Runs body(worker) on `workers` threads, the caller acting as worker 0.
void run_workers(std::uint32_t workers, const std::function<void(std::uint32_t)> &body) {
    if (workers <= 1) {
        body(0);
        return;
    }
    std::vector<std::jthread> threads;
    for (std::uint32_t w = 1; w < workers; ++w)
        threads.emplace_back([&body, w] { body(w); });
    body(0);
}

/// Splits [0, n) into contiguous chunks, one per worker.
void parallel_for(std::uint32_t workers, std::size_t n, const std::function<void(std::uint32_t, std::size_t, std::size_t)> &body) {
    if (workers <= 1 || n < 4096) {
        body(0, 0, n);
        return;
    }
    run_workers(workers, [&](std::uint32_t w) {
        std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
        body(w, lo, hi);
    });
}

} // namespace

std::vector<std::uint8_t> accepting_cycle_core(const SuccessorGraph &g, std::span<const std::uint8_t> accepting,
                                               std::uint32_t workers) {
    const std::size_t n = g.size();
    std::vector<std::uint8_t> in_set(n, 1);
    std::vector<std::uint32_t> indegree(n);
    std::size_t previous = n + 1;
    for (;;) {
        // Reset: keep what is reachable from accepting states inside the set.
        std::vector<std::uint8_t> reached(n, 0);
        std::vector<std::uint32_t> frontier;
        for (std::uint32_t v = 0; v < n; ++v)
            if (in_set[v] && accepting[v]) {
                reached[v] = 1;
                frontier.push_back(v);
            }
        while (!frontier.empty()) {
            std::vector<std::vector<std::uint32_t>> found(std::max<std::uint32_t>(workers, 1));
            parallel_for(workers, frontier.size(), [&](std::uint32_t w, std::size_t lo, std::size_t hi) {
                for (std::size_t k = lo; k < hi; ++k)
                    for (auto t : g.successors(frontier[k])) {
                        if (!in_set[t])
                            continue;
                        std::atomic_ref<std::uint8_t> mark(reached[t]);
                        if (mark.load(std::memory_order_relaxed) == 0 &&
                            mark.exchange(1, std::memory_order_relaxed) == 0)
                            found[w].push_back(t);
                    }
            });
            frontier.clear();
            for (auto &f : found)
                frontier.insert(frontier.end(), f.begin(), f.end());
        }
        in_set.swap(reached);

        // Elimination: peel off states without a predecessor inside the set.
        std::fill(indegree.begin(), indegree.end(), 0);
        parallel_for(workers, n, [&](std::uint32_t, std::size_t lo, std::size_t hi) {
            for (std::size_t v = lo; v < hi; ++v)
                if (in_set[v])
                    for (auto t : g.successors(static_cast<std::uint32_t>(v)))
                        if (in_set[t])
                            std::atomic_ref<std::uint32_t>(indegree[t]).fetch_add(1, std::memory_order_relaxed);
        });
        for (std::uint32_t v = 0; v < n; ++v)
            if (in_set[v] && indegree[v] == 0)
                frontier.push_back(v);
        while (!frontier.empty()) {
            for (auto v : frontier)
                in_set[v] = 0;
            std::vector<std::vector<std::uint32_t>> found(std::max<std::uint32_t>(workers, 1));
            parallel_for(workers, frontier.size(), [&](std::uint32_t w, std::size_t lo, std::size_t hi) {
                for (std::size_t k = lo; k < hi; ++k)
                    for (auto t : g.successors(frontier[k]))
                        if (in_set[t] &&
                            std::atomic_ref<std::uint32_t>(indegree[t]).fetch_sub(1, std::memory_order_relaxed) == 1)
                            found[w].push_back(t);
            });
            frontier.clear();
            for (auto &f : found)
                frontier.insert(frontier.end(), f.begin(), f.end());
        }
        std::size_t size = static_cast<std::size_t>(std::count(in_set.begin(), in_set.end(), 1));
        if (size == previous || size == 0)
            break;
        previous = size;
    }
    return in_set;
}

// ---------------------------------------------------------------------------
// Sharded engine

namespace {

enum Flag : std::uint8_t { kFull = 1, kReduced = 2, kDeadlock = 4 };

constexpr std::uint64_t kNoRef = ~std::uint64_t{0};

struct Shard {
    std::vector<std::uint64_t> words;  // state i at [i * W, (i + 1) * W)
    std::vector<std::uint32_t> table;  // open addressing; 0 empty, else index + 1
    std::vector<std::uint64_t> parent; // (shard << 32) | index of the BFS parent
    std::vector<std::uint8_t> flags;
    std::vector<std::uint32_t> frontier, next, deadlocks;
    std::vector<std::vector<std::uint64_t>> outbox; // per destination: W words then the parent ref
    std::uint64_t transitions = 0;
    std::uint64_t digest = 0;

    std::size_t count() const { return flags.size(); }
    std::size_t bytes() const {
        std::size_t b = words.capacity() * 8 + table.capacity() * 4 + parent.capacity() * 8 + flags.capacity() +
                        (frontier.capacity() + next.capacity() + deadlocks.capacity()) * 4;
        for (const auto &o : outbox)
            b += o.capacity() * 8;
        return b;
    }
};

struct WorkerScratch {
    MoveGenerator gen;
    std::vector<Move> moves;
    std::vector<Label> enabled;
    std::vector<LocalState> locals;
    std::vector<std::uint32_t> targets;
    std::vector<std::uint64_t> buf;

    WorkerScratch(const HierarchyTree &tree, const PrecomputedTables &tables, Algorithm a, std::size_t words)
        : gen(tree, tables, a), locals(tree.leaf_count()), buf(words) {}
};

class Engine {
public:
    Engine(const HierarchyTree &tree, const PrecomputedTables &tables, const BuchiAutomaton *claim,
           const ExploreOptions &options, bool reduce)
        : tree_(tree), tables_(tables), options_(options), workers_(std::max<std::uint32_t>(options.workers, 1)),
          codec_(tree, claim ? static_cast<std::uint32_t>(claim->size()) : 0), W_(codec_.words()), reduce_(reduce) {
        if (claim)
            claim_.emplace(*claim, tree.actions());
        std::vector<AtomDecl> atoms;
        if (claim)
            atoms = claim->atoms;
        if (reduce_)
            dep_ = analyze_dependence(tree, tables, atoms);
        shards_.resize(workers_);
        for (auto &s : shards_) {
            s.outbox.resize(workers_);
            s.table.assign(1024, 0);
        }
        for (std::uint32_t w = 0; w < workers_; ++w)
            scratch_.emplace_back(tree, tables, options.algorithm, W_);
    }

    std::size_t words() const { return W_; }
    std::uint32_t workers() const { return workers_; }
    bool limit_hit() const { return limit_hit_; }
    std::uint64_t peak_bytes() const { return peak_bytes_; }
    const BoundClaim *claim() const { return claim_ ? &*claim_ : nullptr; }

    void seed_initial() {
        auto init = initial_state(tree_);
        std::vector<std::uint64_t> buf(W_);
        codec_.encode(init.locals, claim_ ? claim_->initial() : 0, buf.data());
        auto h = hash_words(buf.data(), W_, options_.seed);
        auto &s = shards_[owner_of(h, workers_)];
        auto [idx, fresh] = insert(s, buf.data(), h, kNoRef);
        s.frontier.push_back(idx);
        init_ref_ = (std::uint64_t(owner_of(h, workers_)) << 32) | idx;
    }

    std::uint64_t init_ref() const { return init_ref_; }

    /// Level-synchronous BFS until every frontier is empty. Returns false on the memory limit.
    bool run(bool stop_on_deadlock = false) {
        std::atomic<bool> done{false};
        auto check = [&]() noexcept {
            std::size_t pending = 0, bytes = 0;
            bool dead = false;
            for (auto &s : shards_) {
                s.frontier.swap(s.next);
                s.next.clear();
                pending += s.frontier.size();
                bytes += s.bytes();
                dead = dead || !s.deadlocks.empty();
            }
            bytes += extra_bytes_;
            peak_bytes_ = std::max<std::uint64_t>(peak_bytes_, bytes);
            if (bytes > options_.memory_limit)
                limit_hit_ = true;
            done = pending == 0 || limit_hit_ || (stop_on_deadlock && dead);
        };
        if (workers_ == 1) {
            while (!done) {
                expand_frontier(0);
                insert_inbox(0);
                check();
            }
        } else {
            std::barrier<> expanded(workers_);
            std::barrier inserted(workers_, check);
            run_workers(workers_, [&](std::uint32_t w) {
                while (!done.load()) {
                    expand_frontier(w);
                    expanded.arrive_and_wait();
                    insert_inbox(w);
                    inserted.arrive_and_wait();
                }
            });
        }
        return !limit_hit_;
    }

    /// Emits every successor of a stored state as (encoded words, label or null for Stutter).
    /// With `full` unset, the stored ample decision is reproduced.
    template <class Emit>
    void successors(WorkerScratch &wk, const std::uint64_t *in, bool full, bool &reduced, bool &deadlock, Emit &&emit) {
        std::uint32_t q = 0;
        codec_.decode(in, wk.locals, q);
        wk.moves.clear();
        wk.gen.generate(wk.locals, wk.moves);
        deadlock = wk.moves.empty();
        reduced = false;
        std::uint32_t chosen = kNoLeaf;
        if (reduce_ && !full && !deadlock) {
            chosen = ample_leaf(tree_, dep_, wk.locals, wk.moves);
            if (chosen != kNoLeaf) {
                auto own = std::count_if(wk.moves.begin(), wk.moves.end(), [&](const Move &m) { return m.leaf == chosen; });
                if (static_cast<std::size_t>(own) == wk.moves.size())
                    chosen = kNoLeaf;
            }
            reduced = chosen != kNoLeaf;
        }
        if (claim_ && claim_->needs_enabled())
            wk.enabled = enabled_labels(wk.moves);
        auto step = [&](const Label *label) {
            if (!claim_) {
                codec_.encode(wk.locals, 0, wk.buf.data());
                emit(wk.buf.data(), label);
                return;
            }
            wk.targets.clear();
            claim_->targets(q, wk.enabled, label, wk.targets);
            for (auto t : wk.targets) {
                codec_.encode(wk.locals, t, wk.buf.data());
                emit(wk.buf.data(), label);
            }
        };
        if (deadlock) {
            if (claim_)
                step(nullptr);
            return;
        }
        for (const auto &m : wk.moves) {
            if (chosen != kNoLeaf && m.leaf != chosen)
                continue;
            LocalState old = wk.locals[m.leaf], old_partner = 0;
            wk.locals[m.leaf] = m.target;
            if (m.kind == TransitionKind::Sync) {
                old_partner = wk.locals[m.partner];
                wk.locals[m.partner] = m.partner_target;
            }
            step(&m.label);
            if (m.kind == TransitionKind::Sync)
                wk.locals[m.partner] = old_partner;
            wk.locals[m.leaf] = old;
        }
    }

    // Dense numbering of stored states.
    std::vector<std::uint64_t> offsets() const {
        std::vector<std::uint64_t> off(workers_ + 1, 0);
        for (std::uint32_t w = 0; w < workers_; ++w)
            off[w + 1] = off[w] + shards_[w].count();
        return off;
    }

    std::uint32_t dense(std::uint64_t ref, const std::vector<std::uint64_t> &off) const {
        return static_cast<std::uint32_t>(off[ref >> 32] + (ref & 0xffffffffu));
    }

    std::uint64_t ref_of(std::uint32_t v, const std::vector<std::uint64_t> &off) const {
        auto w = static_cast<std::uint32_t>(std::upper_bound(off.begin(), off.end(), v) - off.begin() - 1);
        return (std::uint64_t(w) << 32) | (v - off[w]);
    }

    const std::uint64_t *state_words(std::uint64_t ref) const {
        return shards_[ref >> 32].words.data() + (ref & 0xffffffffu) * W_;
    }

    std::uint8_t flags(std::uint64_t ref) const { return shards_[ref >> 32].flags[ref & 0xffffffffu]; }
    void set_full(std::uint64_t ref) { shards_[ref >> 32].flags[ref & 0xffffffffu] = kFull; }
    std::uint64_t parent(std::uint64_t ref) const { return shards_[ref >> 32].parent[ref & 0xffffffffu]; }

    std::uint64_t find(const std::uint64_t *words) const {
        auto h = hash_words(words, W_, options_.seed);
        auto w = owner_of(h, workers_);
        const auto &s = shards_[w];
        const std::size_t mask = s.table.size() - 1;
        for (std::size_t i = h & mask;; i = (i + 1) & mask) {
            auto slot = s.table[i];
            if (slot == 0)
                return kNoRef;
            if (std::equal(words, words + W_, s.words.data() + std::size_t(slot - 1) * W_))
                return (std::uint64_t(w) << 32) | (slot - 1);
        }
    }

    /// Compressed successor graph of everything stored, following the recorded expansion mode.
    SuccessorGraph freeze() {
        auto off = offsets();
        std::vector<std::vector<std::uint64_t>> row_len(workers_);
        std::vector<std::vector<std::uint32_t>> row_targets(workers_);
        run_workers(workers_, [&](std::uint32_t w) {
            auto &wk = scratch_[w];
            const auto &s = shards_[w];
            row_len[w].resize(s.count());
            for (std::uint32_t i = 0; i < s.count(); ++i) {
                bool reduced = false, deadlock = false;
                std::size_t before = row_targets[w].size();
                successors(wk, s.words.data() + std::size_t(i) * W_, (s.flags[i] & kFull) != 0, reduced, deadlock,
                           [&](const std::uint64_t *succ, const Label *) {
                               row_targets[w].push_back(dense(find(succ), off));
                           });
                row_len[w][i] = row_targets[w].size() - before;
            }
        });
        SuccessorGraph g;
        g.offsets.reserve(off.back() + 1);
        for (std::uint32_t w = 0; w < workers_; ++w) {
            for (auto len : row_len[w])
                g.offsets.push_back(g.offsets.back() + len);
            g.targets.insert(g.targets.end(), row_targets[w].begin(), row_targets[w].end());
            for (auto f : shards_[w].flags)
                g.full.push_back((f & kFull) != 0);
        }
        g.initial = dense(init_ref_, off);
        extra_bytes_ = g.offsets.capacity() * 8 + g.targets.capacity() * 4 + g.full.capacity();
        std::uint64_t bytes = extra_bytes_;
        for (const auto &s : shards_)
            bytes += s.bytes();
        peak_bytes_ = std::max(peak_bytes_, bytes);
        if (bytes > options_.memory_limit)
            limit_hit_ = true;
        return g;
    }

    /// Explores, then applies the cycle proviso until no reduced cycle remains.
    /// Returns the final graph when `want_graph` or reduction needs it.
    std::optional<SuccessorGraph> explore(bool want_graph, Metrics &m) {
        seed_initial();
        if (!run())
            return std::nullopt;
        if (!reduce_ && !want_graph)
            return std::nullopt;
        for (;;) {
            auto g = freeze();
            if (limit_hit_)
                return std::nullopt;
            if (!reduce_)
                return g;
            auto survivors = proviso_pass(g);
            if (survivors.empty())
                return g;
            ++m.proviso_rounds;
            m.reexpanded += survivors.size();
            auto off = offsets();
            for (auto v : survivors) {
                auto ref = ref_of(v, off);
                set_full(ref);
                shards_[ref >> 32].frontier.push_back(static_cast<std::uint32_t>(ref & 0xffffffffu));
            }
            if (!run())
                return std::nullopt;
        }
    }

    void fill_metrics(Metrics &m) const {
        m.states = 0;
        m.transitions = 0;
        m.reduced_states = 0;
        m.digest = 0;
        for (const auto &s : shards_) {
            m.states += s.count();
            m.transitions += s.transitions;
            m.digest += s.digest;
            for (auto f : s.flags)
                m.reduced_states += (f & kReduced) && !(f & kFull);
        }
        m.store_bytes = peak_bytes_;
        m.resource_limit = limit_hit_;
    }

    ProductState decode_state(std::uint64_t ref) const {
        ProductState p;
        p.model.locals.resize(tree_.leaf_count());
        codec_.decode(state_words(ref), p.model.locals, p.claim);
        return p;
    }

    /// Label of some step from `from` to `to`; empty optional for Stutter.
    std::optional<Label> step_label(std::uint64_t from, std::uint64_t to) {
        auto &wk = scratch_[0];
        const std::uint64_t *target = state_words(to);
        std::optional<Label> found;
        bool matched = false, reduced = false, deadlock = false;
        successors(wk, state_words(from), true, reduced, deadlock, [&](const std::uint64_t *succ, const Label *l) {
            if (!matched && std::equal(succ, succ + W_, target)) {
                matched = true;
                if (l)
                    found = *l;
            }
        });
        if (!matched)
            throw std::logic_error("trace step is not a transition");
        return found;
    }

    TraceStep trace_step(std::uint64_t from, std::uint64_t to) {
        return {decode_state(from), step_label(from, to), decode_state(to)};
    }

    std::vector<std::uint64_t> deadlock_refs() const {
        std::vector<std::uint64_t> out;
        for (std::uint32_t w = 0; w < workers_; ++w)
            for (auto i : shards_[w].deadlocks)
                out.push_back((std::uint64_t(w) << 32) | i);
        return out;
    }

    bool less_words(std::uint64_t a, std::uint64_t b) const {
        const auto *x = state_words(a), *y = state_words(b);
        return std::lexicographical_compare(x, x + W_, y, y + W_);
    }

private:
    std::pair<std::uint32_t, bool> insert(Shard &s, const std::uint64_t *words, std::uint64_t h, std::uint64_t parent) {
        if ((s.count() + 1) * 2 > s.table.size())
            grow(s);
        const std::size_t mask = s.table.size() - 1;
        for (std::size_t i = h & mask;; i = (i + 1) & mask) {
            auto slot = s.table[i];
            if (slot == 0) {
                auto idx = static_cast<std::uint32_t>(s.count());
                s.table[i] = idx + 1;
                s.words.insert(s.words.end(), words, words + W_);
                s.parent.push_back(parent);
                s.flags.push_back(0);
                s.digest += hash_words(words, W_, kDigestSalt);
                return {idx, true};
            }
            if (std::equal(words, words + W_, s.words.data() + std::size_t(slot - 1) * W_))
                return {slot - 1, false};
        }
    }

    void grow(Shard &s) {
        std::vector<std::uint32_t> table(s.table.size() * 2, 0);
        const std::size_t mask = table.size() - 1;
        for (std::uint32_t idx = 0; idx < s.count(); ++idx) {
            auto h = hash_words(s.words.data() + std::size_t(idx) * W_, W_, options_.seed);
            std::size_t i = h & mask;
            while (table[i])
                i = (i + 1) & mask;
            table[i] = idx + 1;
        }
        s.table.swap(table);
    }

    void expand_frontier(std::uint32_t w) {
        auto &s = shards_[w];
        auto &wk = scratch_[w];
        for (auto idx : s.frontier) {
            std::uint64_t ref = (std::uint64_t(w) << 32) | idx;
            bool full = !reduce_ || (s.flags[idx] & kFull);
            bool reduced = false, deadlock = false;
            std::uint64_t count = 0;
            successors(wk, s.words.data() + std::size_t(idx) * W_, full, reduced, deadlock,
                       [&](const std::uint64_t *succ, const Label *) {
                           auto h = hash_words(succ, W_, options_.seed);
                           auto &box = s.outbox[owner_of(h, workers_)];
                           box.insert(box.end(), succ, succ + W_);
                           box.push_back(ref);
                           ++count;
                       });
            if (!(s.flags[idx] & kFull))
                s.flags[idx] = reduced ? kReduced : kFull;
            s.transitions += count;
            if (deadlock) {
                s.flags[idx] |= kDeadlock;
                s.deadlocks.push_back(idx);
            }
        }
        s.frontier.clear();
    }

    void insert_inbox(std::uint32_t w) {
        auto &s = shards_[w];
        for (std::uint32_t src = 0; src < workers_; ++src) {
            auto &box = shards_[src].outbox[w];
            for (std::size_t k = 0; k < box.size(); k += W_ + 1) {
                auto h = hash_words(box.data() + k, W_, options_.seed);
                auto [idx, fresh] = insert(s, box.data() + k, h, box[k + W_]);
                if (fresh)
                    s.next.push_back(idx);
            }
            box.clear();
        }
    }

    const HierarchyTree &tree_;
    const PrecomputedTables &tables_;
    ExploreOptions options_;
    std::uint32_t workers_;
    StateCodec codec_;
    std::size_t W_;
    bool reduce_;
    std::optional<BoundClaim> claim_;
    StaticDependence dep_;
    std::vector<Shard> shards_;
    std::vector<WorkerScratch> scratch_;
    std::uint64_t init_ref_ = 0;
    bool limit_hit_ = false;
    std::uint64_t peak_bytes_ = 0;
    std::uint64_t extra_bytes_ = 0;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool claim_has_act(const BuchiAutomaton &claim) {
    return std::any_of(claim.atoms.begin(), claim.atoms.end(),
                       [](const AtomDecl &a) { return a.kind == AtomDecl::Kind::Act; });
}

} // namespace

Metrics reach(const HierarchyTree &tree, const PrecomputedTables &tables, const ExploreOptions &options) {
    auto t0 = Clock::now();
    Metrics m;
    Engine engine(tree, tables, nullptr, options, options.por);
    auto g = engine.explore(false, m);
    engine.fill_metrics(m);
    if (g)
        m.transitions = g->targets.size();
    m.seconds = since(t0);
    m.table_bytes = tables.memory_bytes();
    m.peak_rss = peak_rss_bytes();
    return m;
}

Verdict check_deadlock(const HierarchyTree &tree, const PrecomputedTables &tables, const ExploreOptions &options) {
    auto t0 = Clock::now();
    Verdict v;
    Engine engine(tree, tables, nullptr, options, options.por);
    engine.seed_initial();
    bool ok = engine.run(true);
    engine.fill_metrics(v.metrics);
    auto dead = engine.deadlock_refs();
    if (!dead.empty()) {
        // Smallest encoding among the shallowest deadlocks, whatever the worker count.
        auto target = *std::min_element(dead.begin(), dead.end(),
                                        [&](std::uint64_t a, std::uint64_t b) { return engine.less_words(a, b); });
        std::vector<std::uint64_t> path{target};
        while (engine.parent(path.back()) != kNoRef)
            path.push_back(engine.parent(path.back()));
        std::reverse(path.begin(), path.end());
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            v.stem.push_back(engine.trace_step(path[i], path[i + 1]));
        v.kind = Verdict::Kind::Deadlock;
    } else {
        v.kind = ok ? Verdict::Kind::Holds : Verdict::Kind::ResourceLimit;
    }
    v.metrics.seconds = since(t0);
    v.metrics.table_bytes = tables.memory_bytes();
    v.metrics.peak_rss = peak_rss_bytes();
    return v;
}

namespace {

/// Shortest path from any of `sources` to `target` using only states allowed by `inside`.
std::vector<std::uint32_t> bfs_path(const SuccessorGraph &g, std::span<const std::uint32_t> sources, std::uint32_t target,
                                    const std::vector<std::uint8_t> *inside) {
    std::vector<std::uint32_t> pred(g.size(), ~0u);
    std::vector<std::uint32_t> queue;
    std::vector<std::uint8_t> seen(g.size(), 0);
    for (auto s : sources)
        if (!seen[s] && (!inside || (*inside)[s])) {
            seen[s] = 1;
            queue.push_back(s);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto v = queue[head];
        if (v == target) {
            std::vector<std::uint32_t> path{v};
            while (pred[path.back()] != ~0u)
                path.push_back(pred[path.back()]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (auto t : g.successors(v))
            if (!seen[t] && (!inside || (*inside)[t])) {
                seen[t] = 1;
                pred[t] = v;
                queue.push_back(t);
            }
    }
    return {};
}

} // namespace

Verdict verify(const HierarchyTree &tree, const PrecomputedTables &tables, const BuchiAutomaton &claim,
               const ExploreOptions &options) {
    auto t0 = Clock::now();
    Verdict v;
    Engine engine(tree, tables, &claim, options, options.por && !claim_has_act(claim));
    auto g = engine.explore(true, v.metrics);
    engine.fill_metrics(v.metrics);
    v.metrics.table_bytes = tables.memory_bytes();
    auto finish = [&] {
        v.metrics.seconds = since(t0);
        v.metrics.peak_rss = peak_rss_bytes();
        return v;
    };
    if (!g) {
        v.kind = Verdict::Kind::ResourceLimit;
        return finish();
    }
    v.metrics.transitions = g->targets.size();

    auto off = engine.offsets();
    std::vector<std::uint8_t> accepting(g->size());
    for (std::uint32_t s = 0; s < g->size(); ++s)
        accepting[s] = claim.accepting[engine.decode_state(engine.ref_of(s, off)).claim];
    auto core = accepting_cycle_core(*g, accepting, engine.workers());
    v.kind = Verdict::Kind::Holds;
    for (std::uint32_t a = 0; a < g->size() && v.kind == Verdict::Kind::Holds; ++a) {
        if (!core[a] || !accepting[a])
            continue;
        auto succ = g->successors(a);
        auto cycle = bfs_path(*g, succ, a, &core);
        if (cycle.empty())
            continue;
        cycle.insert(cycle.begin(), a);
        std::uint32_t init = g->initial;
        auto stem = bfs_path(*g, std::span<const std::uint32_t>(&init, 1), a, nullptr);
        for (std::size_t i = 0; i + 1 < stem.size(); ++i)
            v.stem.push_back(engine.trace_step(engine.ref_of(stem[i], off), engine.ref_of(stem[i + 1], off)));
        for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
            v.cycle.push_back(engine.trace_step(engine.ref_of(cycle[i], off), engine.ref_of(cycle[i + 1], off)));
        v.kind = Verdict::Kind::Counterexample;
    }
    return finish();
}

ExploredGraph explore_graph(const HierarchyTree &tree, const PrecomputedTables &tables, const BuchiAutomaton *claim,
                            const ExploreOptions &options) {
    auto t0 = Clock::now();
    ExploredGraph out;
    bool reduce = options.por && !(claim && claim_has_act(*claim));
    Engine engine(tree, tables, claim, options, reduce);
    auto g = engine.explore(true, out.metrics);
    engine.fill_metrics(out.metrics);
    out.metrics.seconds = since(t0);
    if (!g)
        return out;
    out.metrics.transitions = g->targets.size();
    auto off = engine.offsets();
    for (std::uint32_t s = 0; s < g->size(); ++s) {
        out.states.push_back(engine.decode_state(engine.ref_of(s, off)));
        out.accepting.push_back(claim && claim->accepting[out.states.back().claim]);
    }
    out.graph = std::move(*g);
    return out;
}

} // namespace coin
