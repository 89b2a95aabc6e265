#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "coin/cli.hh"
#include "coin/families.hh"
#include "fixtures.hh"

using namespace coin;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run coin_run(std::vector<std::string> args) {
    args.insert(args.begin(), "coin");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string &name, const std::string &text) {
    auto path = std::filesystem::temp_directory_path() / ("coin_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

std::map<std::string, std::string> record(const std::string &line) {
    std::map<std::string, std::string> kv;
    std::istringstream in(line);
    std::string field;
    while (in >> field) {
        auto eq = field.find('=');
        REQUIRE(eq != std::string::npos);
        kv[field.substr(0, eq)] = field.substr(eq + 1);
    }
    return kv;
}

std::string first_line(const std::string &text) { return text.substr(0, text.find('\n')); }

} // namespace

TEST_CASE("metrics on the two-automaton model") {
    auto model = write_temp("abc.coin", test::kAbcModel);
    auto r = coin_run({"metrics", model, "--format", "machine"});
    CHECK(r.code == kExitOk);
    auto kv = record(first_line(r.out));
    CHECK(kv["states"] == "3");
    CHECK(kv["transitions"] == "9");
    CHECK(kv["algorithm"] == "lca");
    CHECK(kv["workers"] == "1");
    CHECK(kv["por"] == "off");
    CHECK(kv.count("time"));
    CHECK(kv.count("memory"));
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);

    auto rec = coin_run({"metrics", model, "--format", "machine", "--algorithm", "recursive", "--workers", "3"});
    auto kv2 = record(first_line(rec.out));
    CHECK(kv2["states"] == "3");
    CHECK(kv2["transitions"] == "9");
    CHECK(kv2["algorithm"] == "recursive");
    CHECK(kv2["workers"] == "3");

    auto human = coin_run({"metrics", model});
    CHECK(human.out.find("states:       3") != std::string::npos);
}

TEST_CASE("toggles with reduction") {
    auto model = write_temp("toggles8.coin", generate(ModelFamily{ModelFamily::Kind::Toggles, 8, 1}));
    auto kv = record(first_line(coin_run({"metrics", model, "--por", "--format", "machine"}).out));
    CHECK(std::stoul(kv["states"]) <= 17);
    CHECK(kv["por"] == "on");
    auto stats = record(first_line(coin_run({"metrics", model, "--por-stats", "--format", "machine"}).out));
    CHECK(stats["full_states"] == "256");
    CHECK(std::stod(stats["ratio"]) >= 15.0);

    auto ring = write_temp("ring4.coin", generate(ModelFamily{ModelFamily::Kind::Ring, 4, 1}));
    auto rs = record(first_line(coin_run({"metrics", ring, "--por-stats", "--format", "machine"}).out));
    CHECK(rs["full_states"] == rs["reduced_states"]);
}

TEST_CASE("input errors exit with 2") {
    auto missing = coin_run({"metrics", "/nonexistent/model.coin"});
    CHECK(missing.code == kExitInputError);
    CHECK(missing.out.empty());
    CHECK_FALSE(missing.err.empty());

    auto broken = write_temp("broken.coin", "automaton A (1) { state s; init t; trans s -> s (1, go, 1); } system A;");
    auto bad = coin_run({"metrics", broken});
    CHECK(bad.code == kExitInputError);
    CHECK(bad.err.find("unknown initial state") != std::string::npos);

    auto model = write_temp("abc.coin", test::kAbcModel);
    CHECK(coin_run({"verify", model, "G (act(1,b,1)"}).code == kExitInputError);
    CHECK(coin_run({"verify", model}).code == kExitInputError);
    CHECK(coin_run({"property", "act(-,b,-)"}).code == kExitInputError);
    CHECK(coin_run({"metrics", model, "--workers", "0"}).code == kExitInputError);
    CHECK(coin_run({"metrics", model, "--algorithm", "magic"}).code == kExitInputError);
    CHECK(coin_run({"metrics", model, "--mem-limit", "lots"}).code == kExitInputError);
    CHECK(coin_run({"gen", "ring", "1"}).code == kExitInputError);
    CHECK(coin_run({"gen", "spiral", "3"}).code == kExitInputError);
    CHECK(coin_run({}).code == kExitInputError);
    CHECK(coin_run({"--help"}).code == kExitOk);
}

TEST_CASE("verify exit codes") {
    auto model = write_temp("abc.coin", test::kAbcModel);
    auto cex = coin_run({"verify", model, "G (act(1,b,1) -> F act(2,c,1))"});
    CHECK(cex.code == kExitCounterexample);
    auto cycle = cex.out.substr(cex.out.find("cycle:"));
    CHECK(cycle.find("(2,c,1)") == std::string::npos);
    CHECK(cex.out.find("stem:") != std::string::npos);

    CHECK(coin_run({"verify", model, "G true"}).code == kExitOk);
    CHECK(coin_run({"verify", model, "F act(1,a,2)"}).code == kExitCounterexample);

    auto formula = write_temp("prop.ltl", "// response\nG (act(1,b,1) -> F act(2,c,1))\n");
    CHECK(coin_run({"verify", model, "--formula-file", formula}).code == kExitCounterexample);

    auto machine = coin_run({"verify", model, "F act(1,a,2)", "--format", "machine"});
    auto kv = record(first_line(machine.out));
    CHECK(kv["verdict"] == "counterexample");
    CHECK(std::stoul(kv["cycle"]) >= 1);

    // Reduction is refused for act atoms and reported.
    auto por = coin_run({"verify", model, "F act(1,a,2)", "--por"});
    CHECK(por.code == kExitCounterexample);
    CHECK(por.err.find("disabled") != std::string::npos);

    auto limited = write_temp("toggles16.coin", generate(ModelFamily{ModelFamily::Kind::Toggles, 16, 1}));
    CHECK(coin_run({"verify", limited, "G true", "--mem-limit", "64K"}).code == kExitResourceLimit);
    CHECK(coin_run({"metrics", limited, "--mem-limit", "64K"}).code == kExitResourceLimit);
}

TEST_CASE("deadlock mode") {
    auto model = write_temp("abc.coin", test::kAbcModel);
    CHECK(coin_run({"verify", model, "--deadlock"}).code == kExitOk);
    auto sink = write_temp("sink.coin", "automaton A (1) { state s, t; init s; trans s -> t (1, go, 1); } system A;");
    auto r = coin_run({"verify", sink, "--deadlock"});
    CHECK(r.code == kExitDeadlock);
    CHECK(r.out.find("(1,go,1)") != std::string::npos);
    auto m = coin_run({"verify", sink, "--deadlock", "--format", "machine"});
    CHECK(record(first_line(m.out))["stem"] == "1");
}

TEST_CASE("property output feeds verify") {
    auto model = write_temp("abc.coin", test::kAbcModel);
    auto claim = coin_run({"property", "G (act(1,b,1) -> F act(2,c,1))"});
    REQUIRE(claim.code == kExitOk);
    CHECK(claim.out.rfind("never {", 0) == 0);
    auto file = write_temp("response.never", claim.out);
    CHECK(coin_run({"verify", model, "--claim", file}).code == kExitCounterexample);

    // Archive form: model followed by its claim.
    auto archive = write_temp("archive.coin", test::kAbcModel + claim.out);
    CHECK(coin_run({"verify", archive}).code == kExitCounterexample);

    auto tautology = coin_run({"property", "true"});
    CHECK(tautology.out.find("accept;") != std::string::npos);
    CHECK(tautology.out.find("trans;") != std::string::npos);

    auto gp = coin_run({"property", "G act(1,b,1)"});
    CHECK(gp.out.find("!act(1,b,1)") != std::string::npos);
}

TEST_CASE("generated models re-parse") {
    for (auto args : std::vector<std::vector<std::string>>{
             {"gen", "toggles", "1"}, {"gen", "toggles", "8"}, {"gen", "ring", "4"}, {"gen", "pipeline-tree", "4", "3"},
             {"gen", "random", "--seed", "17"}}) {
        auto r = coin_run(args);
        REQUIRE(r.code == kExitOk);
        CHECK_NOTHROW(parse_model(r.out));
        CHECK(coin_run(args).out == r.out);
    }
    auto toggles1 = write_temp("toggles1.coin", coin_run({"gen", "toggles", "1"}).out);
    CHECK(record(first_line(coin_run({"metrics", toggles1, "--format", "machine"}).out))["states"] == "2");
}

TEST_CASE("bench prints a table and a report") {
    auto report = (std::filesystem::temp_directory_path() / "coin_cli_bench.json").string();
    auto r = coin_run({"bench", "--family", "toggles", "--n", "6", "--workers-list", "1,2", "--runs", "1", "--report",
                       report});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("recursive") != std::string::npos);
    CHECK(r.out.find("lca") != std::string::npos);
    std::ifstream in(report);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().find("\"median_seconds\"") != std::string::npos);
}
