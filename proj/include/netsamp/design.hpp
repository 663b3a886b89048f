#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "netsamp/graph.hpp"
#include "netsamp/rng.hpp"

namespace netsamp {

inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();

/// Parameters of the real-world coupon survey. Defaults are the RDS setting
/// used for the Project 90 evaluations.
struct DesignConfig {
    std::size_t coupon_limit = 3;
    double seed_target = 240;  // expected seed count
    std::size_t sample_target = 1200;
    int coupon_expiry = 28;  // days
    double daily_trace_prob = 0.004;
    double reseed_prob = 0.00001;  // per unsampled node per day
    bool plus_links = false;
    int max_days = 1000;

    /// Throws ConfigError when a field is out of range. Pass the population
    /// size to also check sample_target against it.
    void validate(std::size_t population = std::numeric_limits<std::size_t>::max()) const;
};

/// Presets: "rds", "rdsplus", "sb", "sbplus" (also "rds+" and "sb+").
DesignConfig design_preset(const std::string &label);
/// Canonical label ("rds+" -> "rdsplus"); throws ConfigError on an unknown one.
std::string canonical_design_label(const std::string &label);

enum class EntryKind : unsigned char { seed, recruit, reseed };

/// A survey sample s = (U_s, E_s) with recruitment metadata. Node ids are
/// population ids; local index k refers to nodes[k].
struct SampleNetwork {
    std::vector<NodeId> nodes;  // entry order
    std::vector<EntryKind> kind;
    std::vector<NodeId> parent;  // population id of recruiter, kNoParent for seeds and reseeds
    std::vector<int> entry_day;
    std::vector<std::size_t> degree;  // population degree d_i

    std::vector<Edge> edges;  // population ids, sorted
    std::vector<char> is_recruitment;  // parallel to edges

    std::vector<std::string> variables;
    std::vector<std::vector<double>> values;  // [variable][local index]

    bool undersized = false;
    int days = 0;

    std::size_t size() const { return nodes.size(); }
    bool is_seed(std::size_t local) const { return kind[local] != EntryKind::recruit; }
    std::size_t recruitment_edge_count() const;
    std::vector<Edge> recruitment_edges() const;

    /// The sample graph on local indices [0, size()) with edges E_s.
    Network local_network() const;
    /// Same as local_network() but over an explicit edge subset.
    Network local_network(std::span<const Edge> population_edges) const;
};

/// Raw outcome of the recruitment simulation, before sample assembly.
struct Recruitment {
    std::vector<NodeId> order;
    std::vector<EntryKind> kind;
    std::vector<NodeId> parent;
    std::vector<int> entry_day;
    int days = 0;
    bool undersized = false;
};

/// Day-stepped coupon recruitment on net. Day 0 draws Bernoulli seeds at rate
/// seed_target / N; each later day every (coupon holder, link to an unsampled
/// node) pair converts with daily_trace_prob and every unsampled node may
/// enter as a reseed. A day's entries are processed in random order and the
/// process stops exactly at sample_target.
Recruitment recruit(const Network &net, const DesignConfig &cfg, Rng &rng);

/// Runs recruit() and assembles the sample with degrees and attribute rows.
/// With plus_links the edge set is every population edge inside U_s.
SampleNetwork draw_sample(const Network &net, const AttributeTable &attrs, const DesignConfig &cfg, Rng &rng);

/// Copy of sample whose edges are all population edges among its nodes.
SampleNetwork enhance_with_induced_edges(const SampleNetwork &sample, const Network &net);

}  // namespace netsamp
