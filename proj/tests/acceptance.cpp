// Acceptance suite: prints one PASS / FAIL / SKIP line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "netsamp/cli.hpp"
#include "netsamp/estimators.hpp"
#include "netsamp/fastproc.hpp"
#include "netsamp/harness.hpp"
#include "support.hpp"

using namespace netsamp;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome pass(std::string d) { return {Verdict::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::fail, std::move(d)}; }
Outcome skip(std::string d) { return {Verdict::skip, std::move(d)}; }

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. Frequency identities on random graphs.
Outcome frequency_identities() {
    std::mt19937_64 gen(101);
    double worst_sum = 0.0;
    std::size_t pair_violations = 0, pairs_checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + gen() % 199;
        const double density = std::uniform_real_distribution<double>(0.005, 0.2)(gen);
        const Network g = random_graph(n, density, gen);
        FastConfig cfg;
        cfg.target_size = 1 + gen() % n;
        cfg.iterations = 2000;
        cfg.trace_prob = std::uniform_real_distribution<double>(0.05, 0.95)(gen);
        cfg.reseed_prob = std::uniform_real_distribution<double>(0.01, 0.3)(gen);
        cfg.removal_mode = trial % 3 == 2 ? RemovalMode::fixed_gated : RemovalMode::adaptive;
        cfg.burn_in = trial % 5 == 0 ? 200 : 0;
        cfg.all_pairs = trial % 2 == 0;
        Rng rng(trial + 1);
        const InclusionStats s = trial % 7 == 6 ? run_with_replacement_process(g, cfg, rng)
                                                : run_markov_fast_process(g, cfg, rng);
        std::vector<double> raw(n);
        for (std::size_t i = 0; i < n; ++i) raw[i] = double(s.counts[i]) / double(s.iterations_used);
        worst_sum = std::max(worst_sum, std::abs(compensated_sum(raw) - s.mean_chain_size));
        if (s.floored == 0) worst_sum = std::max(worst_sum, std::abs(compensated_sum(s.f) - s.mean_chain_size));
        for (std::size_t k = 0; k < s.pairs.size(); ++k) {
            ++pairs_checked;
            const double cap = std::min(s.f[s.pairs[k].u], s.f[s.pairs[k].v]);
            if (s.pair_f[k] > cap) ++pair_violations;
        }
    }
    const std::string detail = fmt::format("max |sum f - mean size| = {:.3g}, {} pair violations of {} pairs",
                                           worst_sum, pair_violations, pairs_checked);
    return worst_sum <= 1e-12 && pair_violations == 0 ? pass(detail) : fail(detail);
}

// 2. Long runs on every 3-node graph against the exact 8-state chain.
Outcome exact_chain_oracle() {
    struct Case {
        const char *name;
        Network graph;
        std::size_t target;
    };
    const std::vector<Case> cases = {
        {"P3/target1", path_graph(3), 1},
        {"K3/target1", complete_graph(3), 1},
        {"K2+K1/target1", make_graph(3, {{0, 1}}), 1},
        {"P3/target2", path_graph(3), 2},
        {"K3/target2", complete_graph(3), 2},
    };
    const std::size_t T = 1000000;
    double worst = 0.0;
    std::string where;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto &cs = cases[c];
        FastConfig cfg;
        cfg.target_size = cs.target;
        cfg.iterations = T;
        Rng rng(1000 + c);
        const InclusionStats s = run_markov_fast_process(cs.graph, cfg, rng);
        const auto exact = exact_set_chain_inclusion(cs.graph, cs.target, cfg.trace_prob, cfg.reseed_prob);
        for (std::size_t i = 0; i < 3; ++i) {
            const double se = std::sqrt(exact[i] * (1.0 - exact[i]) / double(T));
            const double z = std::abs(s.raw_frequency(i) - exact[i]) / se;
            if (z > worst) {
                worst = z;
                where = fmt::format("{} node {} (f={:.5f}, exact={:.5f})", cs.name, i, s.raw_frequency(i), exact[i]);
            }
        }
    }
    const std::string detail = fmt::format("{} graphs, worst deviation {:.2f} binomial SE at {}", cases.size(), worst, where);
    return worst <= 3.0 ? pass(detail) : fail(detail);
}

// 3. Enumerated SRSWOR, N=6, n=2.
Outcome srswor_unbiasedness() {
    const std::vector<double> pop = {3.1, -2.0, 7.5, 0.25, 11.0, 4.4};
    double mu = 0.0;
    for (double y : pop) mu += y;
    mu /= 6.0;
    const double pi = 2.0 / 6.0;
    const double p_sample = 1.0 / 15.0;
    double expectation = 0.0;
    std::size_t samples = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            expectation += p_sample * gupe_mean(std::vector<double>{pop[i], pop[j]}, std::vector<double>{pi, pi});
            ++samples;
        }
    }
    const double err = std::abs(expectation - mu);
    const std::string detail = fmt::format("{} samples, |E[est] - mu| = {:.3g}", samples, err);
    return samples == 15 && err <= 1e-10 ? pass(detail) : fail(detail);
}

// 4. Estimator properties on random inputs.
Outcome estimator_properties() {
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t failures = 0, trials = 0;
    double worst_scale = 0.0, worst_full = 0.0;
    for (int t = 0; t < 2000; ++t) {
        ++trials;
        const std::size_t n = 1 + gen() % 40;
        std::vector<double> y(n), f(n), scaled(n);
        const double c = std::exp(8.0 * (unit(gen) - 0.5));
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = 100.0 * (unit(gen) - 0.3);
            f[i] = 0.001 + 0.999 * unit(gen);
            scaled[i] = f[i] * c;
        }
        const double mu = gupe_mean(y, f);
        const double scale_err = std::abs(gupe_mean(y, scaled) - mu) / std::max(1.0, std::abs(mu));
        worst_scale = std::max(worst_scale, scale_err);
        if (scale_err > 1e-12) ++failures;

        const double lo = *std::min_element(y.begin(), y.end()), hi = *std::max_element(y.begin(), y.end());
        if (mu < lo || mu > hi) ++failures;
        const double sm0 = sample_mean(y);
        if (sm0 < lo || sm0 > hi) ++failures;
        std::vector<double> degrees(n), degrees_scaled(n);
        for (std::size_t i = 0; i < n; ++i) {
            degrees[i] = 1.0 + double(gen() % 30);
            degrees_scaled[i] = degrees[i] * (1.0 + c);
        }
        const double vh = vh_mean(y, degrees);
        if (std::abs(vh_mean(y, degrees_scaled) - vh) > 1e-12 * std::max(1.0, std::abs(vh))) ++failures;
        if (vh < lo || vh > hi) ++failures;

        std::vector<double> equal(n, f[0]);
        const double sm = sample_mean(y);
        if (std::abs(gupe_mean(y, equal) - sm) > 1e-12 * std::max(1.0, std::abs(sm))) ++failures;
        std::vector<double> equal_degree(n, 1.0 + double(gen() % 9));
        if (std::abs(vh_mean(y, equal_degree) - sm) > 1e-12 * std::max(1.0, std::abs(sm))) ++failures;

        const double diag = variance_diagonal(y, f, mu, false);
        const double cons = variance_diagonal(y, f, mu, true);
        if (!(cons >= diag && diag >= 0.0)) ++failures;

        std::vector<double> pf;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pf.push_back(f[i] * f[j]);
        const VarianceResult full = variance_full(y, f, pf, mu);
        const double full_err = std::abs(full.value - diag) / std::max(1.0, diag);
        worst_full = std::max(worst_full, full_err);
        if (full_err > 1e-12 || full.clamped) ++failures;
    }
    const std::string detail = fmt::format("{} random cases, {} failures, worst scale error {:.3g}, worst full-diag {:.3g}",
                                           trials, failures, worst_scale, worst_full);
    return failures == 0 ? pass(detail) : fail(detail);
}

// 5. mse = bias^2 + sd^2 and the published degree row.
Outcome metrics_identity() {
    std::mt19937_64 gen(55);
    std::normal_distribution<double> noise(0.0, 2.0);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        std::vector<double> est(1 + gen() % 300);
        const double truth = noise(gen) * 5.0;
        for (double &e : est) e = truth + 0.7 + noise(gen);
        const MetricsRow row = compute_metrics(est, truth);
        worst = std::max(worst, std::abs(row.mse - (row.bias * row.bias + row.sd * row.sd)));
    }
    // degree row: bias 0.321723, sd 0.324316, published mse 0.208686
    const double truth = 7.88, bias = 0.321723, sd = 0.324316;
    const MetricsRow table = compute_metrics(std::vector<double>{truth + bias - sd, truth + bias + sd}, truth);
    const double table_err = std::abs(table.mse - 0.208686);
    const std::string detail = fmt::format("max identity error {:.3g}; table row mse {:.6f} (error {:.2g})", worst,
                                           table.mse, table_err);
    return worst <= 1e-12 && table_err <= 1e-6 ? pass(detail) : fail(detail);
}

// 6. Synthetic heterogeneous population, RDS-like design.
Outcome synthetic_population() {
    const Network net = heterogeneous_graph(2000, 12, 606);
    const auto comps = connected_components(net);
    EvalConfig cfg;
    DesignConfig rds = design_preset("rds");
    rds.sample_target = 400;
    rds.seed_target = 80;
    cfg.designs.push_back({"rds", rds});
    cfg.fast.target_size = 133;
    cfg.replicates = 200;
    cfg.variables = {kDegreeVariable};
    cfg.master_seed = 6;
    cfg.workers = worker_count();
    const EvalSummary summary = run_evaluation(net, AttributeTable{}, cfg);
    const DesignSummary &d = summary.designs.front();
    const MetricsRow &simple = d.simple.front();
    const MetricsRow &vh = d.vh.front();
    const std::string detail = fmt::format(
        "{} components, mean degree {:.3f}, bias simple {:.4f} vs VH {:.4f}, eff(VH) {:.2f}, mean n {:.1f}",
        comps.size(), summary.truth.front(), simple.bias, vh.bias, vh.eff, d.diagnostics.mean_sample_size);
    const bool ok = comps.size() >= 5 && std::abs(simple.bias) < std::abs(vh.bias) && vh.eff > 3.0;
    return ok ? pass(detail) : fail(detail);
}

// 7. Project 90 reproduction, only when the data is available.
Outcome project90() {
    const char *edges_env = std::getenv("NETSAMP_P90_EDGES");
    fs::path edges = edges_env ? fs::path(edges_env) : fs::path(NETSAMP_SOURCE_DIR) / "data" / "project90.edges";
    if (!fs::exists(edges)) {
        return skip("Project 90 edge list not found (set NETSAMP_P90_EDGES)");
    }
    const LoadedNetwork loaded = load_edge_list_file(edges.string());
    EvalConfig cfg;
    cfg.designs.push_back({"rds", design_preset("rds")});
    cfg.replicates = 200;
    cfg.variables = {kDegreeVariable};
    cfg.master_seed = 90;
    cfg.workers = worker_count();
    const EvalSummary summary = run_evaluation(loaded.network, AttributeTable{}, cfg);
    const DesignSummary &d = summary.designs.front();
    const double bs = d.simple.front().bias, bv = d.vh.front().bias, eff = d.vh.front().eff;
    const double cov = d.coverage.front().coverage;
    const std::string detail =
        fmt::format("bias simple {:.3f}, bias VH {:.3f}, eff {:.2f}, coverage {:.3f}", bs, bv, eff, cov);
    const bool ok = bs >= 0.1 && bs <= 0.6 && bv >= -2.8 && bv <= -2.1 && eff > 15.0 && cov >= 0.70 && cov <= 0.90;
    return ok ? pass(detail) : fail(detail);
}

// 8. Worker count does not change the summary files.
Outcome worker_determinism() {
    const auto dir = scratch_dir("acceptance_workers");
    write_network_file(dir / "pop.edges", heterogeneous_graph(800, 6, 88));
    {
        std::ofstream attrs(dir / "pop.csv");
        attrs << "group,score\n";
        for (int i = 0; i < 800; ++i) attrs << i % 3 << ',' << (i * 37) % 101 << '\n';
    }
    auto run = [&](const std::string &workers, const fs::path &out) {
        std::ostringstream o, e;
        return execute({"simulate", "--edges", (dir / "pop.edges").string(), "--attrs", (dir / "pop.csv").string(),
                        "--design", "all", "--reps", "40", "--seed", "2024", "--sample-target", "160",
                        "--seed-target", "32", "--fast-target", "60", "--iterations", "1500", "--workers", workers,
                        "--out", out.string()},
                       o, e);
    };
    if (run("1", dir / "w1") != 0 || run("8", dir / "w8") != 0) return fail("simulate exited with an error");
    std::size_t compared = 0;
    for (const char *label : {"rds", "rdsplus", "sb", "sbplus"}) {
        const std::string name = fmt::format("summary_{}.csv", label);
        const std::string a = read_file(dir / "w1" / name), b = read_file(dir / "w8" / name);
        if (a.empty() || a != b) return fail(name + " differs between 1 and 8 workers");
        ++compared;
    }
    return pass(fmt::format("{} summary files byte-identical across 1 and 8 workers", compared));
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"frequency identity suite", frequency_identities},
        {"exact-chain oracle", exact_chain_oracle},
        {"design-unbiasedness oracle", srswor_unbiasedness},
        {"estimator property suite", estimator_properties},
        {"metrics identity", metrics_identity},
        {"synthetic heterogeneous population", synthetic_population},
        {"Project 90 reproduction", project90},
        {"worker determinism", worker_determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char *tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        failures += o.verdict == Verdict::fail;
        std::cout << fmt::format("[{}] criterion {}: {} ({}) [{:.1f}s]", tag, k + 1, criteria[k].first, o.detail, secs)
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
