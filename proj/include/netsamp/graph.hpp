#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace netsamp {

using NodeId = std::uint32_t;

/// Unordered node pair, normalized so that u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge &, const Edge &) = default;
    friend auto operator<=>(const Edge &, const Edge &) = default;
};

/// Immutable undirected simple graph on dense ids [0, node_count) stored as CSR.
class Network {
public:
    Network() = default;

    /// Builds a network from an arbitrary pair list. Reversed and repeated pairs
    /// collapse to one edge. Throws ValidationError on a self-loop or an id
    /// outside [0, node_count).
    static Network from_edges(std::size_t node_count, std::span<const Edge> pairs);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

    std::span<const NodeId> neighbors(NodeId i) const {
        return {targets_.data() + offsets_[i], degree(i)};
    }
    /// Edge index (into edges()) of each adjacency entry, parallel to neighbors(i).
    std::span<const std::uint32_t> incident_edges(NodeId i) const {
        return {edge_ids_.data() + offsets_[i], degree(i)};
    }
    /// Sorted, deduplicated edge list.
    std::span<const Edge> edges() const { return edges_; }

    bool has_edge(NodeId a, NodeId b) const;

    friend bool operator==(const Network &, const Network &) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<std::uint32_t> edge_ids_;
    std::vector<Edge> edges_;
};

/// Network plus the original token for each dense id.
struct LoadedNetwork {
    Network network;
    std::vector<std::string> labels;
};

/// Parses an edge list: one pair per line separated by whitespace or a comma,
/// "#" comment lines, optional "# nodes=<k>" header.
///
/// Id mapping: with a header every token must be an integer in [0, k) and is
/// used as-is, so isolated nodes are kept. Without a header, all-integer
/// tokens are ranked in ascending numeric order; otherwise tokens are numbered
/// in order of first appearance.
LoadedNetwork load_edge_list(std::istream &in);
LoadedNetwork load_edge_list_file(const std::string &path);

/// Writes "# nodes=<k>" followed by one "u v" line per edge.
void write_edge_list(std::ostream &out, const Network &net);

/// Maximal connected node sets, largest first (ties by smallest member).
/// Members of each component are ascending.
std::vector<std::vector<NodeId>> connected_components(const Network &net);

/// Edges of net with both endpoints in nodes. Throws DomainError on an unknown id.
std::vector<Edge> induced_edges(const Network &net, std::span<const NodeId> nodes);

/// Column-major numeric attribute table; one column per variable, one entry per node.
class AttributeTable {
public:
    AttributeTable() = default;
    AttributeTable(std::vector<std::string> names, std::vector<std::vector<double>> columns);

    std::size_t node_count() const { return rows_; }
    std::size_t variable_count() const { return names_.size(); }
    const std::vector<std::string> &names() const { return names_; }
    std::span<const double> column(std::size_t var) const { return columns_[var]; }
    double value(NodeId node, std::size_t var) const { return columns_[var][node]; }
    /// Index of the named variable, or variable_count() when absent.
    std::size_t find(const std::string &name) const;

    /// Missing cells found at load time, per variable.
    const std::vector<std::size_t> &missing_counts() const { return missing_; }

    friend bool operator==(const AttributeTable &, const AttributeTable &) = default;

private:
    friend AttributeTable load_attribute_table(std::istream &, std::size_t);

    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::vector<std::size_t> missing_;
    std::size_t rows_ = 0;
};

/// Reads a CSV with a header row of variable names and one numeric row per
/// node in id order. Empty cells are stored as 0 and counted as missing.
/// Throws ValidationError when the row count differs from expected_rows.
AttributeTable load_attribute_table(std::istream &in, std::size_t expected_rows);
AttributeTable load_attribute_table_file(const std::string &path, std::size_t expected_rows);

}  // namespace netsamp
