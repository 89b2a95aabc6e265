#include "coin/cli.hh"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "coin/buchi.hh"
#include "coin/explorer.hh"
#include "coin/families.hh"

namespace coin {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string model_path;
    std::string formula;
    std::string formula_file;
    std::string claim_file;
    std::string algorithm = "lca";
    std::string format = "human";
    std::string mem_limit;
    bool por = false;
    bool por_stats = false;
    bool deadlock = false;
    std::uint32_t workers = 1;
    std::uint64_t seed = 0;
};

std::string read_text(const std::string &path) {
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// "4G", "512M", "1048576"
std::uint64_t parse_bytes(const std::string &text) {
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception &) {
        throw InputError("bad memory limit '" + text + "'");
    }
    std::string suffix = text.substr(used);
    if (suffix.empty() || suffix == "B")
        return value;
    int shift = suffix[0] == 'K' || suffix[0] == 'k' ? 10 : suffix[0] == 'M' || suffix[0] == 'm' ? 20
              : suffix[0] == 'G' || suffix[0] == 'g' ? 30 : -1;
    if (shift < 0 || (suffix.size() > 1 && suffix.substr(1) != "B" && suffix.substr(1) != "iB"))
        throw InputError("bad memory limit '" + text + "'");
    return value << shift;
}

ExploreOptions options_of(const RunConfig &c) {
    ExploreOptions o;
    o.algorithm = c.algorithm == "recursive" ? Algorithm::Recursive : Algorithm::Lca;
    o.por = c.por;
    o.workers = c.workers;
    o.seed = c.seed;
    if (!c.mem_limit.empty())
        o.memory_limit = parse_bytes(c.mem_limit);
    return o;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string mib(std::uint64_t bytes) { return fixed(bytes / 1048576.0, 1) + " MiB"; }

void print_metrics(std::ostream &out, const RunConfig &c, const Metrics &m) {
    if (c.format == "machine") {
        out << "states=" << m.states << " transitions=" << m.transitions << " time=" << fixed(m.seconds, 6)
            << " memory=" << m.peak_rss << " algorithm=" << c.algorithm << " workers=" << c.workers
            << " por=" << (c.por ? "on" : "off") << " store=" << m.store_bytes << " tables=" << m.table_bytes << "\n";
        return;
    }
    out << "states:       " << m.states << "\n"
        << "transitions:  " << m.transitions << "\n"
        << "time:         " << fixed(m.seconds, 3) << " s\n"
        << "memory:       " << mib(m.peak_rss) << " peak (store " << mib(m.store_bytes) << ", tables "
        << mib(m.table_bytes) << ")\n"
        << "algorithm:    " << c.algorithm << ", workers " << c.workers << ", por " << (c.por ? "on" : "off") << "\n";
    if (c.por)
        out << "reduced:      " << m.reduced_states << " states, " << m.reexpanded << " re-expanded in "
            << m.proviso_rounds << " proviso rounds\n";
}

void print_por_stats(std::ostream &out, const RunConfig &c, const Metrics &full, const Metrics &reduced) {
    double ratio = reduced.states ? double(full.states) / double(reduced.states) : 0.0;
    if (c.format == "machine") {
        out << "full_states=" << full.states << " full_transitions=" << full.transitions
            << " reduced_states=" << reduced.states << " reduced_transitions=" << reduced.transitions
            << " ratio=" << fixed(ratio, 2) << "\n";
        return;
    }
    out << std::left << std::setw(10) << "" << std::right << std::setw(14) << "states" << std::setw(14)
        << "transitions" << "\n"
        << std::left << std::setw(10) << "full" << std::right << std::setw(14) << full.states << std::setw(14)
        << full.transitions << "\n"
        << std::left << std::setw(10) << "reduced" << std::right << std::setw(14) << reduced.states << std::setw(14)
        << reduced.transitions << "\n"
        << "ratio     " << fixed(ratio, 1) << ":1\n";
}

struct Loaded {
    ModelFile file;
    HierarchyTree tree;
};

Loaded load_model(const std::string &path) {
    auto file = parse_model_file(read_text(path));
    auto tree = elaborate(file.model);
    return {std::move(file), std::move(tree)};
}

std::string describe_state(const HierarchyTree &tree, const ProductState &s, bool with_claim,
                           const BuchiAutomaton *claim) {
    std::string text = format_state(tree, s.model);
    if (with_claim && claim)
        text += " [" + claim->names[s.claim] + "]";
    return text;
}

void print_trace(std::ostream &out, const RunConfig &c, const HierarchyTree &tree, const BuchiAutomaton *claim,
                 const char *part, const std::vector<TraceStep> &steps) {
    bool machine = c.format == "machine";
    if (!machine)
        out << part << ":\n";
    for (const auto &step : steps) {
        std::string label = step.label ? tree.format(*step.label) : "stutter";
        if (machine)
            out << part << " from=" << describe_state(tree, step.from, true, claim) << " label=" << label
                << " to=" << describe_state(tree, step.to, true, claim) << "\n";
        else
            out << "  " << describe_state(tree, step.from, true, claim) << "\n    --" << label << "-->\n";
    }
    if (!machine && !steps.empty())
        out << "  " << describe_state(tree, steps.back().to, true, claim) << "\n";
}

int report_verdict(std::ostream &out, const RunConfig &c, const HierarchyTree &tree, const BuchiAutomaton *claim,
                   const Verdict &v) {
    static const char *names[] = {"holds", "counterexample", "deadlock", "resource-limit"};
    const char *name = names[static_cast<int>(v.kind)];
    if (c.format == "machine")
        out << "verdict=" << name << " stem=" << v.stem.size() << " cycle=" << v.cycle.size()
            << " states=" << v.metrics.states << " transitions=" << v.metrics.transitions
            << " time=" << fixed(v.metrics.seconds, 6) << " memory=" << v.metrics.peak_rss << "\n";
    else
        out << "verdict: " << name << " (" << v.metrics.states << " states, " << v.metrics.transitions
            << " transitions, " << fixed(v.metrics.seconds, 3) << " s)\n";
    switch (v.kind) {
    case Verdict::Kind::Holds:
        return kExitOk;
    case Verdict::Kind::Counterexample:
        print_trace(out, c, tree, claim, "stem", v.stem);
        print_trace(out, c, tree, claim, "cycle", v.cycle);
        return kExitCounterexample;
    case Verdict::Kind::Deadlock:
        print_trace(out, c, tree, nullptr, "trace", v.stem);
        if (v.stem.empty() && c.format != "machine")
            out << "  initial state " << format_state(tree, initial_state(tree)) << " has no successors\n";
        return kExitDeadlock;
    case Verdict::Kind::ResourceLimit:
        return kExitResourceLimit;
    }
    return kExitOk;
}

int cmd_metrics(const RunConfig &c, std::ostream &out) {
    auto loaded = load_model(c.model_path);
    auto tables = precompute(loaded.tree);
    auto options = options_of(c);
    if (c.por_stats) {
        auto full_options = options;
        full_options.por = false;
        auto reduced_options = options;
        reduced_options.por = true;
        auto full = reach(loaded.tree, tables, full_options);
        auto reduced = reach(loaded.tree, tables, reduced_options);
        print_por_stats(out, c, full, reduced);
        return full.resource_limit || reduced.resource_limit ? kExitResourceLimit : kExitOk;
    }
    auto m = reach(loaded.tree, tables, options);
    print_metrics(out, c, m);
    return m.resource_limit ? kExitResourceLimit : kExitOk;
}

int cmd_verify(RunConfig c, std::ostream &out, std::ostream &err) {
    auto loaded = load_model(c.model_path);
    auto tables = precompute(loaded.tree);
    if (c.deadlock) {
        auto v = check_deadlock(loaded.tree, tables, options_of(c));
        return report_verdict(out, c, loaded.tree, nullptr, v);
    }

    std::optional<BuchiAutomaton> claim;
    std::string text = c.formula;
    if (!c.formula_file.empty())
        text = read_text(c.formula_file);
    if (!text.empty()) {
        auto f = parse_formula(text);
        if (c.por && !reduction_applicable(*f)) {
            err << "note: partial-order reduction disabled, the property uses X or act atoms\n";
            c.por = false;
        }
        claim = to_buchi(negate(f));
    } else if (!c.claim_file.empty()) {
        claim = parse_never_claim(read_text(c.claim_file));
    } else if (loaded.file.claim) {
        claim = *loaded.file.claim;
    } else {
        throw InputError("no property: give a formula, --formula-file, --claim or --deadlock");
    }
    if (text.empty() && c.por) {
        err << "note: partial-order reduction disabled for a supplied never claim\n";
        c.por = false;
    }
    auto v = verify(loaded.tree, tables, *claim, options_of(c));
    return report_verdict(out, c, loaded.tree, &*claim, v);
}

int cmd_property(const RunConfig &c, std::ostream &out) {
    std::string text = c.formula_file.empty() ? c.formula : read_text(c.formula_file);
    if (text.empty())
        throw InputError("no formula given");
    out << format_never_claim(to_buchi(negate(parse_formula(text))));
    return kExitOk;
}

struct GenConfig {
    std::string family;
    std::uint32_t n = 1;
    std::uint32_t depth = 1;
};

int cmd_gen(const GenConfig &g, std::uint64_t seed, std::ostream &out) {
    try {
        if (g.family == "random")
            out << generate_random_model(seed);
        else
            out << generate(parse_family(g.family, g.n, g.depth));
    } catch (const std::invalid_argument &e) {
        throw InputError(e.what());
    }
    return kExitOk;
}

struct BenchConfig {
    std::string family = "pipeline-tree";
    std::uint32_t n = 16;
    std::uint32_t depth = 5;
    std::vector<std::uint32_t> workers{1, 2, 4};
    std::uint32_t runs = 3;
    std::string report;
};

int cmd_bench(const RunConfig &c, const BenchConfig &b, std::ostream &out) {
    HierarchyTree tree = [&] {
        try {
            return elaborate(parse_model(generate(parse_family(b.family, b.n, b.depth))));
        } catch (const std::invalid_argument &e) {
            throw InputError(e.what());
        }
    }();
    auto tables = precompute(tree);
    nlohmann::json rows = nlohmann::json::array();
    bool limited = false;
    out << b.family << "(" << b.n << (b.family == "pipeline-tree" ? "," + std::to_string(b.depth) : "") << "), "
        << b.runs << " runs, median wall time\n";
    out << std::left << std::setw(11) << "algorithm" << std::right << std::setw(8) << "workers" << std::setw(12)
        << "states" << std::setw(14) << "transitions" << std::setw(11) << "time (s)" << std::setw(14) << "store"
        << "\n";
    for (const char *algorithm : {"recursive", "lca"})
        for (auto w : b.workers) {
            RunConfig rc = c;
            rc.algorithm = algorithm;
            rc.workers = w;
            std::vector<double> times;
            Metrics last;
            for (std::uint32_t r = 0; r < std::max<std::uint32_t>(b.runs, 1); ++r) {
                last = reach(tree, tables, options_of(rc));
                times.push_back(last.seconds);
            }
            std::sort(times.begin(), times.end());
            double median = times[times.size() / 2];
            limited = limited || last.resource_limit;
            out << std::left << std::setw(11) << algorithm << std::right << std::setw(8) << w << std::setw(12)
                << last.states << std::setw(14) << last.transitions << std::setw(11) << fixed(median, 3)
                << std::setw(14) << mib(last.store_bytes) << "\n";
            rows.push_back({{"algorithm", algorithm},
                            {"workers", w},
                            {"por", c.por},
                            {"states", last.states},
                            {"transitions", last.transitions},
                            {"median_seconds", median},
                            {"seconds", times},
                            {"store_bytes", last.store_bytes},
                            {"table_bytes", last.table_bytes}});
        }
    if (!b.report.empty()) {
        std::ofstream file(b.report);
        if (!file)
            throw InputError("cannot write '" + b.report + "'");
        nlohmann::json doc{{"family", b.family}, {"n", b.n}, {"depth", b.depth}, {"runs", b.runs}, {"results", rows}};
        file << doc.dump(2) << "\n";
    }
    return limited ? kExitResourceLimit : kExitOk;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Model checker for hierarchical component-interaction automata"};
    app.require_subcommand(1);
    RunConfig c;
    GenConfig g;
    BenchConfig b;

    auto exploration_flags = [&](CLI::App *cmd) {
        cmd->add_option("--algorithm", c.algorithm, "Successor generation: recursive or lca")
            ->check(CLI::IsMember({"recursive", "lca"}));
        cmd->add_flag("--por", c.por, "Partial-order reduction");
        cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
        cmd->add_option("--mem-limit", c.mem_limit, "State store cap in bytes, K/M/G suffixes allowed");
        cmd->add_option("--format", c.format, "Output format: human or machine")
            ->check(CLI::IsMember({"human", "machine"}));
        cmd->add_option("--seed", c.seed, "Hash seed for state partitioning");
    };

    auto *metrics = app.add_subcommand("metrics", "Explore the state space and report its size");
    metrics->add_option("model", c.model_path, "Model file, - for stdin")->required();
    exploration_flags(metrics);
    metrics->add_flag("--por-stats", c.por_stats, "Compare full and reduced state spaces");

    auto *verify_cmd = app.add_subcommand("verify", "Check a CI-LTL property or look for deadlocks");
    verify_cmd->add_option("model", c.model_path, "Model file, - for stdin")->required();
    verify_cmd->add_option("formula", c.formula, "CI-LTL formula");
    verify_cmd->add_option("--formula-file", c.formula_file, "Read the formula from a file");
    verify_cmd->add_option("--claim", c.claim_file, "Never claim for the negated property");
    verify_cmd->add_flag("--deadlock", c.deadlock, "Search for a deadlock instead");
    exploration_flags(verify_cmd);

    auto *property = app.add_subcommand("property", "Translate a formula into the never claim of its negation");
    property->add_option("formula", c.formula, "CI-LTL formula");
    property->add_option("--formula-file", c.formula_file, "Read the formula from a file");

    auto *gen = app.add_subcommand("gen", "Print a generated benchmark model");
    gen->add_option("family", g.family, "toggles, pipeline-tree, ring or random")->required();
    gen->add_option("n", g.n, "Size parameter");
    gen->add_option("depth", g.depth, "Tree depth (pipeline-tree)");
    gen->add_option("--seed", c.seed, "Seed for the random family");

    auto *bench = app.add_subcommand("bench", "Time reachability over algorithms and worker counts");
    bench->add_option("--family", b.family, "Model family");
    bench->add_option("--n", b.n, "Size parameter");
    bench->add_option("--depth", b.depth, "Tree depth");
    bench->add_option("--workers-list", b.workers, "Worker counts")->delimiter(',');
    bench->add_option("--runs", b.runs, "Runs per configuration");
    bench->add_option("--report", b.report, "Write results as JSON");
    bench->add_flag("--por", c.por, "Partial-order reduction");
    bench->add_option("--mem-limit", c.mem_limit, "State store cap in bytes");
    bench->add_option("--seed", c.seed, "Hash seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*metrics)
            return cmd_metrics(c, out);
        if (*verify_cmd)
            return cmd_verify(c, out, err);
        if (*property)
            return cmd_property(c, out);
        if (*gen)
            return cmd_gen(g, c.seed, out);
        if (*bench)
            return cmd_bench(c, b, out);
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

} // namespace coin
