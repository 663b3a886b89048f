#include "netsamp/fastproc.hpp"

#include <algorithm>
#include <cmath>

#include "netsamp/errors.hpp"

namespace netsamp {

std::string to_string(RemovalMode mode) { return mode == RemovalMode::adaptive ? "adaptive" : "fixed_gated"; }

std::string to_string(FastMode mode) {
    switch (mode) {
        case FastMode::without_replacement_chain: return "chain";
        case FastMode::independent_replicates: return "independent";
        case FastMode::with_replacement: return "with_replacement";
    }
    return "chain";
}

RemovalMode parse_removal_mode(const std::string &text) {
    if (text == "adaptive") return RemovalMode::adaptive;
    if (text == "fixed_gated" || text == "fixed") return RemovalMode::fixed_gated;
    throw ConfigError("removal_mode must be 'adaptive' or 'fixed_gated', got '" + text + "'");
}

FastMode parse_fast_mode(const std::string &text) {
    if (text == "chain" || text == "without_replacement_chain") return FastMode::without_replacement_chain;
    if (text == "independent" || text == "independent_replicates") return FastMode::independent_replicates;
    if (text == "with_replacement" || text == "wr") return FastMode::with_replacement;
    throw ConfigError("fast_mode must be 'chain', 'independent' or 'with_replacement', got '" + text + "'");
}

void FastConfig::validate(std::size_t sample_size) const {
    auto prob = [](double p, const char *key) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(key) + " must lie in [0, 1]");
    };
    prob(trace_prob, "fast_trace_prob");
    prob(removal_prob, "removal_prob");
    prob(reseed_prob, "fast_reseed_prob");
    if (iterations == 0) throw ConfigError("iterations must be positive");
    if (burn_in >= iterations) throw ConfigError("burn_in must be smaller than iterations");
    if (target_size > sample_size) throw ConfigError("fast_target exceeds the sample size");
}

double InclusionStats::joint(std::size_t i, std::size_t j) const {
    if (!all_pairs) throw DomainError("joint frequencies were tracked on sample edges only");
    if (i == j) return f[i];
    return pair_f[triangle_index(f.size(), i, j)];
}

namespace {

/// Sums Z_it, |S_t| and pair co-occurrence over counted iterations.
class Accumulator {
public:
    Accumulator(const Network &graph, bool all_pairs) : graph_(graph), all_pairs_(all_pairs) {
        const std::size_t n = graph.node_count();
        counts_.assign(n, 0);
        if (all_pairs_) {
            pair_counts_.assign(n * (n - 1) / 2, 0);
        } else {
            pair_counts_.assign(graph.edge_count(), 0);
        }
    }

    void record(std::span<const NodeId> members, const std::vector<char> &in_set) {
        ++iterations_;
        size_sum_ += members.size();
        for (NodeId i : members) ++counts_[i];
        if (all_pairs_) {
            sorted_.assign(members.begin(), members.end());
            std::sort(sorted_.begin(), sorted_.end());
            const std::size_t n = graph_.node_count();
            for (std::size_t a = 0; a < sorted_.size(); ++a) {
                const std::size_t row = triangle_index(n, sorted_[a], sorted_[a] + 1) - sorted_[a] - 1;
                for (std::size_t b = a + 1; b < sorted_.size(); ++b) ++pair_counts_[row + sorted_[b]];
            }
            return;
        }
        for (NodeId i : members) {
            const auto nbrs = graph_.neighbors(i);
            const auto ids = graph_.incident_edges(i);
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                if (i < nbrs[k] && in_set[nbrs[k]]) ++pair_counts_[ids[k]];
            }
        }
    }

    InclusionStats finish(FastMode mode) const {
        InclusionStats stats;
        stats.mode = mode;
        stats.iterations_used = iterations_;
        stats.counts = counts_;
        stats.all_pairs = all_pairs_;
        const double t = static_cast<double>(iterations_);
        stats.mean_chain_size = static_cast<double>(size_sum_) / t;
        stats.f.resize(counts_.size());
        for (std::size_t i = 0; i < counts_.size(); ++i) {
            if (counts_[i] == 0) {
                stats.f[i] = 0.5 / t;
                ++stats.floored;
            } else {
                stats.f[i] = static_cast<double>(counts_[i]) / t;
            }
        }
        if (all_pairs_) {
            const std::size_t n = counts_.size();
            stats.pairs.reserve(pair_counts_.size());
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) stats.pairs.emplace_back(NodeId(i), NodeId(j));
            }
        } else {
            stats.pairs.assign(graph_.edges().begin(), graph_.edges().end());
        }
        stats.pair_f.resize(pair_counts_.size());
        for (std::size_t k = 0; k < pair_counts_.size(); ++k) {
            stats.pair_f[k] = static_cast<double>(pair_counts_[k]) / t;
        }
        return stats;
    }

private:
    const Network &graph_;
    bool all_pairs_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> pair_counts_;
    std::vector<NodeId> sorted_;
    std::uint64_t size_sum_ = 0;
    std::size_t iterations_ = 0;
};

/// Membership of the current fast sample.
struct ChainState {
    explicit ChainState(std::size_t n) : in_set(n, 0) {}

    std::vector<char> in_set;
    std::vector<NodeId> members;

    void add(NodeId i) {
        in_set[i] = 1;
        members.push_back(i);
    }
};

void apply_removals(ChainState &state, const FastConfig &cfg, Rng &rng) {
    const std::size_t size = state.members.size();
    if (size <= cfg.target_size) return;
    const double q = cfg.removal_mode == RemovalMode::adaptive
                         ? static_cast<double>(size - cfg.target_size) / static_cast<double>(size)
                         : cfg.removal_prob;
    for_each_success(size, q, rng, [&](std::size_t k) { state.in_set[state.members[k]] = 0; });
    std::erase_if(state.members, [&](NodeId i) { return !state.in_set[i]; });
}

void require_nonempty(const Network &g) {
    if (g.node_count() == 0) throw DomainError("fast sampling process needs a non-empty sample");
}

}  // namespace

InclusionStats run_markov_fast_process(const Network &graph, const FastConfig &cfg, Rng &rng) {
    require_nonempty(graph);
    cfg.validate(graph.node_count());
    const std::size_t n = graph.node_count();

    ChainState state(n);
    for_each_success(n, cfg.reseed_prob, rng, [&](std::size_t k) { state.add(NodeId(k)); });

    Accumulator acc(graph, cfg.all_pairs);
    std::vector<char> added(n, 0);
    std::vector<NodeId> additions;

    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        additions.clear();
        for (NodeId i : state.members) {
            const auto nbrs = graph.neighbors(i);
            for_each_success(nbrs.size(), cfg.trace_prob, rng, [&](std::size_t k) {
                const NodeId j = nbrs[k];
                if (!state.in_set[j] && !added[j]) {
                    added[j] = 1;
                    additions.push_back(j);
                }
            });
        }
        for_each_success(n, cfg.reseed_prob, rng, [&](std::size_t k) {
            if (!state.in_set[k] && !added[k]) {
                added[k] = 1;
                additions.push_back(NodeId(k));
            }
        });
        for (NodeId j : additions) {
            added[j] = 0;
            state.add(j);
        }
        apply_removals(state, cfg, rng);
        if (t > cfg.burn_in) acc.record(state.members, state.in_set);
    }
    return acc.finish(FastMode::without_replacement_chain);
}

InclusionStats run_markov_fast_process(const SampleNetwork &sample, const FastConfig &cfg, Rng &rng) {
    return run_markov_fast_process(sample.local_network(), cfg, rng);
}

InclusionStats run_with_replacement_process(const Network &graph, const FastConfig &cfg, Rng &rng) {
    require_nonempty(graph);
    cfg.validate(graph.node_count());
    const std::size_t n = graph.node_count();

    ChainState state(n);
    for_each_success(n, cfg.reseed_prob, rng, [&](std::size_t k) { state.add(NodeId(k)); });

    Accumulator acc(graph, cfg.all_pairs);
    std::vector<std::uint32_t> selections(n, 0);
    std::vector<NodeId> touched;
    std::vector<std::uint64_t> selection_sum(n, 0);

    auto select = [&](NodeId j) {
        if (selections[j]++ == 0) touched.push_back(j);
    };

    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        touched.clear();
        for (NodeId i : state.members) {
            const auto nbrs = graph.neighbors(i);
            for_each_success(nbrs.size(), cfg.trace_prob, rng, [&](std::size_t k) { select(nbrs[k]); });
        }
        for_each_success(n, cfg.reseed_prob, rng, [&](std::size_t k) { select(NodeId(k)); });
        for (NodeId j : touched) {
            if (!state.in_set[j]) state.add(j);
        }
        apply_removals(state, cfg, rng);
        const bool counted = t > cfg.burn_in;
        for (NodeId j : touched) {
            if (counted) selection_sum[j] += selections[j];
            selections[j] = 0;
        }
        if (counted) acc.record(state.members, state.in_set);
    }

    InclusionStats stats = acc.finish(FastMode::with_replacement);
    stats.g.resize(n);
    const double t = static_cast<double>(stats.iterations_used);
    for (std::size_t i = 0; i < n; ++i) {
        stats.g[i] = selection_sum[i] ? static_cast<double>(selection_sum[i]) / t : 0.5 / t;
    }
    return stats;
}

InclusionStats run_with_replacement_process(const SampleNetwork &sample, const FastConfig &cfg, Rng &rng) {
    return run_with_replacement_process(sample.local_network(), cfg, rng);
}

InclusionStats run_independent_replicates(const Network &graph, const DesignConfig &design, std::size_t replicates,
                                          Rng &rng, bool all_pairs) {
    require_nonempty(graph);
    if (replicates == 0) throw ConfigError("iterations must be positive");
    design.validate(graph.node_count());

    const std::size_t n = graph.node_count();
    Accumulator acc(graph, all_pairs);
    std::vector<char> in_set(n, 0);
    for (std::size_t t = 0; t < replicates; ++t) {
        const Recruitment r = recruit(graph, design, rng);
        for (NodeId i : r.order) in_set[i] = 1;
        acc.record(r.order, in_set);
        for (NodeId i : r.order) in_set[i] = 0;
    }
    return acc.finish(FastMode::independent_replicates);
}

InclusionStats run_independent_replicates(const SampleNetwork &sample, const DesignConfig &design,
                                          std::size_t replicates, Rng &rng, bool all_pairs) {
    return run_independent_replicates(sample.local_network(), design, replicates, rng, all_pairs);
}

DesignConfig scaled_design(const DesignConfig &design, const FastConfig &fast, std::size_t sample_size) {
    DesignConfig scaled = design;
    scaled.sample_target = std::min(fast.target_size, sample_size);
    if (sample_size > 0) {
        scaled.seed_target = design.seed_target * static_cast<double>(scaled.sample_target) /
                             static_cast<double>(std::max<std::size_t>(design.sample_target, 1));
        scaled.seed_target = std::min(scaled.seed_target, static_cast<double>(scaled.sample_target));
    }
    return scaled;
}

InclusionStats compute_inclusion(const SampleNetwork &sample, const FastConfig &cfg, const DesignConfig &design,
                                 Rng &rng) {
    switch (cfg.mode) {
        case FastMode::without_replacement_chain: return run_markov_fast_process(sample, cfg, rng);
        case FastMode::with_replacement: return run_with_replacement_process(sample, cfg, rng);
        case FastMode::independent_replicates: {
            cfg.validate(sample.size());
            return run_independent_replicates(sample, scaled_design(design, cfg, sample.size()), cfg.iterations, rng,
                                              cfg.all_pairs);
        }
    }
    throw DomainError("unknown fast mode");
}

}  // namespace netsamp
