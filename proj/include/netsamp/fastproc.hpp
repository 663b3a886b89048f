#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netsamp/design.hpp"
#include "netsamp/graph.hpp"
#include "netsamp/rng.hpp"

namespace netsamp {

enum class RemovalMode { adaptive, fixed_gated };
enum class FastMode { without_replacement_chain, independent_replicates, with_replacement };

std::string to_string(RemovalMode mode);
std::string to_string(FastMode mode);
RemovalMode parse_removal_mode(const std::string &text);
FastMode parse_fast_mode(const std::string &text);

/// Settings of the fast sampling process run on the sample network.
struct FastConfig {
    std::size_t target_size = 400;
    double trace_prob = 0.5;
    RemovalMode removal_mode = RemovalMode::adaptive;
    double removal_prob = 0.5;  // fixed_gated only
    double reseed_prob = 0.1;
    std::size_t iterations = 10000;
    std::size_t burn_in = 0;
    FastMode mode = FastMode::without_replacement_chain;
    /// Track joint frequencies for every node pair instead of sample edges only.
    /// Memory and time grow as n^2.
    bool all_pairs = false;

    void validate(std::size_t sample_size) const;
};

/// Inclusion frequencies of the fast process, indexed by local sample index.
struct InclusionStats {
    FastMode mode = FastMode::without_replacement_chain;
    std::vector<std::uint64_t> counts;  // Σ_t Z_it over counted iterations
    /// counts / iterations_used, with zeros floored at 0.5 / iterations_used.
    std::vector<double> f;
    std::size_t floored = 0;

    /// Tracked pairs (local indices) and their joint frequencies f_ij.
    std::vector<Edge> pairs;
    std::vector<double> pair_f;
    bool all_pairs = false;

    /// Mean selections per iteration; with_replacement mode only.
    std::vector<double> g;

    double mean_chain_size = 0.0;
    std::size_t iterations_used = 0;

    std::size_t size() const { return f.size(); }
    /// Unfloored frequency counts[i] / iterations_used.
    double raw_frequency(std::size_t i) const {
        return static_cast<double>(counts[i]) / static_cast<double>(iterations_used);
    }
    /// f_ij for an arbitrary pair when all_pairs is set.
    double joint(std::size_t i, std::size_t j) const;
};

/// Index of pair (i, j), i != j, in the row-major upper triangle of an n-node
/// pair table.
inline std::size_t triangle_index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Set-valued Markov chain over subsets of the sample graph. Each iteration
/// traces every link from the current set to an outside node with
/// trace_prob, admits each outside node as a reseed with reseed_prob, then, if
/// the set exceeds target_size, removes each member with the adaptive rate
/// (n_t - target) / n_t or the fixed removal_prob.
InclusionStats run_markov_fast_process(const Network &sample_graph, const FastConfig &cfg, Rng &rng);
InclusionStats run_markov_fast_process(const SampleNetwork &sample, const FastConfig &cfg, Rng &rng);

/// Repeats the coupon recruitment design on the sample graph `replicates`
/// times; f_i is the fraction of replicate samples containing i.
InclusionStats run_independent_replicates(const Network &sample_graph, const DesignConfig &design,
                                          std::size_t replicates, Rng &rng, bool all_pairs = false);
InclusionStats run_independent_replicates(const SampleNetwork &sample, const DesignConfig &design,
                                          std::size_t replicates, Rng &rng, bool all_pairs = false);

/// The chain with re-selection allowed: present nodes can be traced to or
/// reseeded again. g_i averages the per-iteration selection count M_t(i).
InclusionStats run_with_replacement_process(const Network &sample_graph, const FastConfig &cfg, Rng &rng);
InclusionStats run_with_replacement_process(const SampleNetwork &sample, const FastConfig &cfg, Rng &rng);

/// Design used by the independent-replicates mode: the real design shrunk to
/// the fast target, seeds scaled by target / sample size.
DesignConfig scaled_design(const DesignConfig &design, const FastConfig &fast, std::size_t sample_size);

/// Dispatches on cfg.mode. `design` is only consulted for independent_replicates.
InclusionStats compute_inclusion(const SampleNetwork &sample, const FastConfig &cfg, const DesignConfig &design,
                                 Rng &rng);

}  // namespace netsamp
