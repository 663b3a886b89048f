#include <doctest.h>

#include <sstream>

#include "netsamp/cli.hpp"
#include "netsamp/config.hpp"
#include "netsamp/errors.hpp"
#include "support.hpp"

using namespace netsamp;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = execute(args, out, err);
    return {code, out.str(), err.str()};
}

/// Toy population on disk: edges with string labels, plus an attribute file.
fs::path toy_inputs() {
    auto dir = scratch_dir("cli_inputs");
    std::mt19937_64 gen(4);
    const Network g = random_graph(300, 0.03, gen);
    {
        std::ofstream e(dir / "toy.edges");
        e << "# toy population\n";
        for (const Edge &x : g.edges()) e << "p" << x.u << ",p" << x.v << '\n';
        // isolated-pair component
        e << "q1 q2\n";
    }
    {
        std::ofstream a(dir / "toy.csv");
        a << "age,female\n";
        for (int i = 0; i < 302; ++i) {
            if (i == 7) {
                a << "NA,1\n";
                continue;
            }
            a << 18 + (i * 7) % 40 << ',' << i % 2 << '\n';
        }
    }
    return dir;
}

const std::vector<std::string> kSmall = {"--sample-target", "80", "--seed-target", "16", "--daily-trace-prob", "0.05"};

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string> &extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

}  // namespace

TEST_CASE("stats prints counts") {
    auto dir = toy_inputs();
    auto r = run({"stats", "--edges", (dir / "toy.edges").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("nodes,302\n") != std::string::npos);
    CHECK(r.out.find("components,") != std::string::npos);
    CHECK(r.out.find("largest_component,") != std::string::npos);
}

TEST_CASE("sample is reproducible for a seed") {
    auto dir = toy_inputs();
    const std::string edges = (dir / "toy.edges").string(), attrs = (dir / "toy.csv").string();
    auto base = with({"sample", "--edges", edges, "--attrs", attrs, "--design", "sb", "--seed", "7"}, kSmall);
    auto a = run(with(base, {"--out", (dir / "run1").string()}));
    auto b = run(with(base, {"--out", (dir / "run2").string()}));
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.err.find("missing") != std::string::npos);
    for (const char *name : {"nodes.csv", "edges.csv", "node_map.csv"}) {
        CHECK(read_file(dir / "run1" / name) == read_file(dir / "run2" / name));
        CHECK_FALSE(read_file(dir / "run1" / name).empty());
    }
    CHECK(read_file(dir / "run1" / "nodes.csv").rfind("id,is_seed,degree,age,female\n", 0) == 0);

    auto c = run(with(with({"sample", "--edges", edges, "--design", "sb", "--seed", "8"}, kSmall),
                      {"--out", (dir / "run3").string()}));
    CHECK(c.code == 0);
    CHECK(read_file(dir / "run1" / "edges.csv") != read_file(dir / "run3" / "edges.csv"));
}

TEST_CASE("sample, weights and estimate chain together") {
    auto dir = toy_inputs();
    const std::string edges = (dir / "toy.edges").string(), attrs = (dir / "toy.csv").string();
    REQUIRE(run(with({"sample", "--edges", edges, "--attrs", attrs, "--design", "rds+", "--seed", "3", "--out",
                      (dir / "s").string()},
                     kSmall))
                .code == 0);
    auto w = run({"weights", "--sample", (dir / "s").string(), "--out", (dir / "w").string(), "--fast-target", "25",
                  "--iterations", "500", "--seed", "3"});
    REQUIRE(w.code == 0);
    CHECK(read_file(dir / "w" / "weights.csv").rfind("node_id,f\n", 0) == 0);
    CHECK(read_file(dir / "w" / "pairs.csv").rfind("u,v,f_ij\n", 0) == 0);

    auto e = run({"estimate", "--sample", (dir / "s").string(), "--weights", (dir / "w").string(), "--out",
                  (dir / "est").string() + "/"});
    REQUIRE(e.code == 0);
    const std::string est = read_file(dir / "est" / "estimate.csv");
    CHECK(est.rfind("variable,method,estimate,variance,ci_low,ci_high,clamped_flag\n", 0) == 0);
    CHECK(est.find("\ndegree,SIMPLE,") != std::string::npos);
    CHECK(est.find("\nage,VH,") != std::string::npos);
    CHECK(est.find("\nfemale,MEAN,") != std::string::npos);

    auto to_stdout = run({"estimate", "--sample", (dir / "s").string(), "--weights", (dir / "w").string(),
                          "--variables", "age", "--variance", "diagonal"});
    CHECK(to_stdout.code == 0);
    CHECK(to_stdout.out.find("degree,") == std::string::npos);
    CHECK(to_stdout.out.find("age,SIMPLE:conservative,") != std::string::npos);

    auto wr = run({"weights", "--sample", (dir / "s").string(), "--out", (dir / "wr").string(), "--fast-target", "25",
                   "--iterations", "300", "--fast-mode", "with_replacement"});
    REQUIRE(wr.code == 0);
    CHECK(read_file(dir / "wr" / "weights.csv").rfind("node_id,f,g\n", 0) == 0);
    CHECK(run({"estimate", "--sample", (dir / "s").string(), "--weights", (dir / "wr").string()}).code == 0);
}

TEST_CASE("simulate writes its tables") {
    auto dir = toy_inputs();
    auto r = run(with({"simulate", "--edges", (dir / "toy.edges").string(), "--attrs", (dir / "toy.csv").string(),
                       "--design", "rds", "--reps", "10", "--seed", "1", "--fast-target", "20", "--iterations", "300",
                       "--out", (dir / "eval").string()},
                      kSmall));
    CHECK(r.code == 0);
    for (const char *name : {"summary_rds.csv", "coverage_rds.csv", "replicates_rds.csv"}) {
        CHECK(fs::exists(dir / "eval" / name));
    }
    CHECK_FALSE(fs::exists(dir / "eval" / "summary_sb.csv"));
}

TEST_CASE("config file, flag precedence and diagnostics") {
    auto dir = toy_inputs();
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "# small run\nsample_target = 50\nseed_target=10\ndaily_trace_prob = 0.05\nseed = 4\n";
    }
    const std::string edges = (dir / "toy.edges").string();
    auto a = run({"sample", "--edges", edges, "--config", (dir / "run.cfg").string(), "--out", (dir / "a").string()});
    REQUIRE(a.code == 0);
    std::istringstream nodes(read_file(dir / "a" / "nodes.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(nodes, line)) ++rows;
    CHECK(rows <= 51);

    auto b = run({"sample", "--edges", edges, "--config", (dir / "run.cfg").string(), "--sample-target", "30",
                  "--out", (dir / "b").string()});
    REQUIRE(b.code == 0);
    std::istringstream nodes_b(read_file(dir / "b" / "nodes.csv"));
    rows = 0;
    while (std::getline(nodes_b, line)) ++rows;
    CHECK(rows <= 31);

    {
        std::ofstream bad(dir / "bad.cfg");
        bad << "sample_target = 50\ncoupon_lmit = 4\n";
    }
    auto c = run({"sample", "--edges", edges, "--config", (dir / "bad.cfg").string(), "--out", (dir / "c").string()});
    CHECK(c.code == 2);
    CHECK(c.err.find("coupon_lmit") != std::string::npos);

    auto d = run({"sample", "--edges", edges, "--daily-trace-prob", "2", "--out", (dir / "d").string()});
    CHECK(d.code == 2);
    CHECK(d.err.find("daily_trace_prob") != std::string::npos);

    RunConfig cfg;
    std::istringstream text("reps = 5\n\n# note\nworkers = 3 # inline\n");
    cfg.merge_stream(text);
    CHECK(cfg.get("reps") == "5");
    CHECK(cfg.get("workers") == "3");
    CHECK(cfg.design("sb").coupon_limit == 25);
    CHECK(cfg.design("rds").coupon_limit == 3);
    cfg.set("coupon_limit", "7");
    CHECK(cfg.design("sb").coupon_limit == 7);
    CHECK_THROWS_AS(cfg.set("nope", "1"), ConfigError);
    std::istringstream broken("reps 5\n");
    CHECK_THROWS_AS(cfg.merge_stream(broken), ConfigError);
}

TEST_CASE("usage and runtime errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    auto unknown = run({"stats", "--edges", "x", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("--edges") != std::string::npos);
    CHECK(run({"stats"}).code == 2);
    CHECK(run({"stats", "--edges", "/nonexistent/file.edges"}).code == 1);

    auto dir = scratch_dir("cli_bad");
    {
        std::ofstream e(dir / "bad.edges");
        e << "1 2\n3\n";
    }
    auto parse = run({"stats", "--edges", (dir / "bad.edges").string()});
    CHECK(parse.code == 1);
    CHECK(parse.err.find("line 2") != std::string::npos);
}

TEST_CASE("help documents flags and defaults") {
    for (const char *sub : {"stats", "sample", "weights", "estimate", "simulate"}) {
        auto r = run({sub, "--help"});
        CHECK(r.code == 0);
        for (const char *text : {"coupon_limit", "3 for rds", "25 for sb", "240", "1200", "28", "0.004", "0.00001",
                                 "fast_target", "400", "0.5", "0.1", "10000"}) {
            CHECK_MESSAGE(r.out.find(text) != std::string::npos, sub << " help lacks " << text);
        }
    }
    auto sim = run({"simulate", "--help"});
    CHECK(sim.out.find("--workers") != std::string::npos);
    CHECK(sim.out.find("--reps") != std::string::npos);
}
