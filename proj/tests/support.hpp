#pragma once

// Helpers shared by the unit and acceptance tests. The oracles here are
// written from the model definitions and do not call into the library's
// sampling code.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "netsamp/graph.hpp"

namespace testing_support {

using netsamp::Edge;
using netsamp::Network;
using netsamp::NodeId;

inline Network make_graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
    std::vector<Edge> edges;
    for (auto [a, b] : pairs) edges.emplace_back(a, b);
    return Network::from_edges(n, edges);
}

inline Network path_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Network::from_edges(n, edges);
}

inline Network cycle_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, NodeId((i + 1) % n));
    return Network::from_edges(n, edges);
}

inline Network complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Network::from_edges(n, edges);
}

inline Network random_graph(std::size_t n, double p, std::mt19937_64 &gen) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(gen)) edges.emplace_back(i, j);
    return Network::from_edges(n, edges);
}

/// Heterogeneous population: one large Chung-Lu component with power-law
/// expected degrees plus several small ones. Returns edges on 0..n-1.
inline Network heterogeneous_graph(std::size_t n, std::size_t small_components, std::uint64_t seed,
                                   double scale = 30.0, double exponent = 0.45, double floor = 2.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    NodeId next = 0;
    // small components: paths and stars of 3 to 12 nodes
    for (std::size_t c = 0; c < small_components; ++c) {
        const std::size_t size = 3 + c % 10;
        for (std::size_t k = 1; k < size; ++k) {
            const NodeId other = (c % 2 == 0) ? next + NodeId(k - 1) : next;
            edges.emplace_back(other, next + NodeId(k));
        }
        next += NodeId(size);
    }
    const std::size_t big = n - next;
    std::vector<double> w(big);
    for (std::size_t i = 0; i < big; ++i) w[i] = scale * std::pow(1.0 + i, -exponent) + floor;
    double total = 0.0;
    for (double x : w) total += x;
    for (std::size_t i = 0; i < big; ++i) {
        for (std::size_t j = i + 1; j < big; ++j) {
            if (unif(gen) < std::min(1.0, w[i] * w[j] / total)) edges.emplace_back(next + NodeId(i), next + NodeId(j));
        }
    }
    // attach anything left isolated in the big block to a random earlier node
    std::vector<char> touched(n, 0);
    for (const Edge &e : edges) touched[e.u] = touched[e.v] = 1;
    for (NodeId i = next + 1; i < n; ++i) {
        if (!touched[i]) {
            std::uniform_int_distribution<NodeId> pick(next, i - 1);
            edges.emplace_back(pick(gen), i);
        }
    }
    return Network::from_edges(n, edges);
}

/// Exact stationary inclusion probabilities of the set chain on a small
/// graph: trace every link out of S with probability p, reseed each outside
/// node with probability r, then remove each member with probability
/// (|S'| - target)/|S'| when |S'| exceeds target. All 2^n states.
inline std::vector<double> exact_set_chain_inclusion(const Network &g, std::size_t target, double p, double r) {
    const std::size_t n = g.node_count();
    const std::size_t states = std::size_t{1} << n;
    std::vector<std::vector<double>> P(states, std::vector<double>(states, 0.0));
    for (std::size_t s = 0; s < states; ++s) {
        std::vector<double> add(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (s >> j & 1) continue;
            int links = 0;
            for (NodeId k : g.neighbors(NodeId(j))) links += (s >> k & 1) ? 1 : 0;
            add[j] = 1.0 - std::pow(1.0 - p, links) * (1.0 - r);
        }
        for (std::size_t grown = 0; grown < states; ++grown) {
            if ((grown & s) != s) continue;
            double pr = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (s >> j & 1) continue;
                pr *= (grown >> j & 1) ? add[j] : 1.0 - add[j];
            }
            if (pr == 0.0) continue;
            const int size = __builtin_popcountll(grown);
            if (static_cast<std::size_t>(size) <= target) {
                P[s][grown] += pr;
                continue;
            }
            const double q = double(size - int(target)) / size;
            for (std::size_t kept = 0; kept < states; ++kept) {
                if ((kept & grown) != kept) continue;
                const int k = __builtin_popcountll(kept);
                P[s][kept] += pr * std::pow(q, size - k) * std::pow(1.0 - q, k);
            }
        }
    }
    std::vector<double> pi(states, 1.0 / double(states)), next(states);
    for (int it = 0; it < 100000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < states; ++a)
            for (std::size_t b = 0; b < states; ++b) next[b] += pi[a] * P[a][b];
        double change = 0.0;
        for (std::size_t a = 0; a < states; ++a) change += std::abs(next[a] - pi[a]);
        pi.swap(next);
        if (change < 1e-15) break;
    }
    std::vector<double> f(n, 0.0);
    for (std::size_t s = 0; s < states; ++s)
        for (std::size_t j = 0; j < n; ++j)
            if (s >> j & 1) f[j] += pi[s];
    return f;
}

/// Neumaier-compensated sum.
template <typename Range>
double compensated_sum(const Range &values) {
    double sum = 0.0, c = 0.0;
    for (double x : values) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_network_file(const std::filesystem::path &path, const Network &g) {
    std::ofstream out(path);
    netsamp::write_edge_list(out, g);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("netsamp_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_support
