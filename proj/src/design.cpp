#include "netsamp/design.hpp"

#include <algorithm>
#include <unordered_map>

#include "netsamp/errors.hpp"

namespace netsamp {

void DesignConfig::validate(std::size_t population) const {
    auto prob = [](double p, const char *key) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(key) + " must lie in [0, 1]");
    };
    prob(daily_trace_prob, "daily_trace_prob");
    prob(reseed_prob, "reseed_prob");
    if (coupon_limit < 1) throw ConfigError("coupon_limit must be at least 1");
    if (!(seed_target >= 0.0)) throw ConfigError("seed_target must be non-negative");
    if (seed_target > static_cast<double>(sample_target)) throw ConfigError("seed_target must not exceed sample_target");
    if (sample_target > population) throw ConfigError("sample_target exceeds population size");
    if (coupon_expiry < 0) throw ConfigError("coupon_expiry must be non-negative");
    if (max_days < 0) throw ConfigError("max_days must be non-negative");
}

std::string canonical_design_label(const std::string &label) {
    if (label == "rds") return "rds";
    if (label == "rdsplus" || label == "rds+") return "rdsplus";
    if (label == "sb") return "sb";
    if (label == "sbplus" || label == "sb+") return "sbplus";
    throw ConfigError("unknown design '" + label + "' (expected rds, rdsplus, sb or sbplus)");
}

DesignConfig design_preset(const std::string &label) {
    const std::string canon = canonical_design_label(label);
    DesignConfig cfg;
    cfg.coupon_limit = (canon == "sb" || canon == "sbplus") ? 25 : 3;
    cfg.plus_links = canon == "rdsplus" || canon == "sbplus";
    return cfg;
}

std::size_t SampleNetwork::recruitment_edge_count() const {
    return static_cast<std::size_t>(std::count(is_recruitment.begin(), is_recruitment.end(), 1));
}

std::vector<Edge> SampleNetwork::recruitment_edges() const {
    std::vector<Edge> out;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (is_recruitment[k]) out.push_back(edges[k]);
    }
    return out;
}

Network SampleNetwork::local_network() const { return local_network(edges); }

Network SampleNetwork::local_network(std::span<const Edge> population_edges) const {
    std::unordered_map<NodeId, NodeId> local;
    local.reserve(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) local.emplace(nodes[k], static_cast<NodeId>(k));
    std::vector<Edge> mapped;
    mapped.reserve(population_edges.size());
    for (const Edge &e : population_edges) {
        auto a = local.find(e.u);
        auto b = local.find(e.v);
        if (a == local.end() || b == local.end()) throw DomainError("sample edge endpoint is not a sample node");
        mapped.emplace_back(a->second, b->second);
    }
    return Network::from_edges(nodes.size(), mapped);
}

Recruitment recruit(const Network &net, const DesignConfig &cfg, Rng &rng) {
    const std::size_t n_pop = net.node_count();
    Recruitment out;
    const std::size_t target = std::min(cfg.sample_target, n_pop);

    std::vector<char> in_sample(n_pop, 0);
    std::vector<std::size_t> coupons(n_pop, 0);
    std::vector<int> last_day(n_pop, 0);
    std::vector<NodeId> holders;

    auto admit = [&](NodeId j, EntryKind kind, NodeId parent, int day) {
        in_sample[j] = 1;
        out.order.push_back(j);
        out.kind.push_back(kind);
        out.parent.push_back(parent);
        out.entry_day.push_back(day);
        if (cfg.coupon_expiry > 0) {
            coupons[j] = cfg.coupon_limit;
            last_day[j] = day + cfg.coupon_expiry;
            holders.push_back(j);
        }
    };

    // Day 0: Bernoulli seeds, admitted in random order up to the target.
    std::vector<NodeId> seeds;
    const double seed_rate = n_pop ? std::clamp(cfg.seed_target / static_cast<double>(n_pop), 0.0, 1.0) : 0.0;
    for_each_success(n_pop, seed_rate, rng, [&](std::size_t k) { seeds.push_back(static_cast<NodeId>(k)); });
    rng.shuffle(std::span<NodeId>(seeds));
    for (NodeId s : seeds) {
        if (out.order.size() >= target) break;
        admit(s, EntryKind::seed, kNoParent, 0);
    }

    struct Event {
        NodeId holder;  // kNoParent for a reseed
        NodeId target;
    };
    std::vector<Event> events;

    int day = 0;
    while (out.order.size() < target && day < cfg.max_days) {
        if (holders.empty() && cfg.reseed_prob <= 0.0) break;
        ++day;
        events.clear();
        for (NodeId h : holders) {
            const auto nbrs = net.neighbors(h);
            for_each_success(nbrs.size(), cfg.daily_trace_prob, rng, [&](std::size_t k) {
                if (!in_sample[nbrs[k]]) events.push_back({h, nbrs[k]});
            });
        }
        for_each_success(n_pop, cfg.reseed_prob, rng, [&](std::size_t k) {
            if (!in_sample[k]) events.push_back({kNoParent, static_cast<NodeId>(k)});
        });
        rng.shuffle(std::span<Event>(events));

        // Admissions today start redeeming coupons tomorrow.
        for (const Event &ev : events) {
            if (out.order.size() >= target) break;
            if (ev.holder == kNoParent) {
                if (!in_sample[ev.target]) admit(ev.target, EntryKind::reseed, kNoParent, day);
                continue;
            }
            if (coupons[ev.holder] == 0) continue;
            --coupons[ev.holder];
            if (in_sample[ev.target]) continue;  // coupon spent on someone already enrolled
            admit(ev.target, EntryKind::recruit, ev.holder, day);
        }

        std::size_t keep = 0;
        for (NodeId h : holders) {
            if (coupons[h] > 0 && last_day[h] > day) holders[keep++] = h;
        }
        holders.resize(keep);
    }
    out.days = day;
    out.undersized = out.order.size() < cfg.sample_target;
    return out;
}

namespace {

void attach_attributes(SampleNetwork &s, const AttributeTable &attrs) {
    s.variables = attrs.names();
    s.values.assign(attrs.variable_count(), {});
    for (std::size_t v = 0; v < attrs.variable_count(); ++v) {
        auto &col = s.values[v];
        col.reserve(s.nodes.size());
        for (NodeId i : s.nodes) col.push_back(attrs.value(i, v));
    }
}

}  // namespace

SampleNetwork draw_sample(const Network &net, const AttributeTable &attrs, const DesignConfig &cfg, Rng &rng) {
    if (net.node_count() == 0) throw DomainError("cannot sample from an empty network");
    if (attrs.variable_count() > 0 && attrs.node_count() != net.node_count()) {
        throw DomainError("attribute table row count does not match the network");
    }
    cfg.validate(net.node_count());

    Recruitment r = recruit(net, cfg, rng);

    SampleNetwork s;
    s.nodes = std::move(r.order);
    s.kind = std::move(r.kind);
    s.parent = std::move(r.parent);
    s.entry_day = std::move(r.entry_day);
    s.days = r.days;
    s.undersized = r.undersized;
    s.degree.reserve(s.nodes.size());
    for (NodeId i : s.nodes) s.degree.push_back(net.degree(i));

    for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        if (s.parent[k] != kNoParent) s.edges.emplace_back(s.parent[k], s.nodes[k]);
    }
    std::sort(s.edges.begin(), s.edges.end());
    s.is_recruitment.assign(s.edges.size(), 1);
    attach_attributes(s, attrs);

    if (cfg.plus_links) return enhance_with_induced_edges(s, net);
    return s;
}

SampleNetwork enhance_with_induced_edges(const SampleNetwork &sample, const Network &net) {
    SampleNetwork out = sample;
    const auto recruited = sample.recruitment_edges();
    out.edges = induced_edges(net, sample.nodes);
    out.is_recruitment.assign(out.edges.size(), 0);
    for (std::size_t k = 0; k < out.edges.size(); ++k) {
        out.is_recruitment[k] = std::binary_search(recruited.begin(), recruited.end(), out.edges[k]) ? 1 : 0;
    }
    return out;
}

}  // namespace netsamp
