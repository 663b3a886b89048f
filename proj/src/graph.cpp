#include "netsamp/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "netsamp/errors.hpp"
#include "text_util.hpp"

namespace netsamp {

Network Network::from_edges(std::size_t node_count, std::span<const Edge> pairs) {
    if (node_count > std::numeric_limits<NodeId>::max()) {
        throw ValidationError("node count exceeds id range");
    }
    Network net;
    net.edges_.reserve(pairs.size());
    for (const Edge &e : pairs) {
        if (e.u == e.v) {
            throw ValidationError("self-loop on node " + std::to_string(e.u));
        }
        if (e.v >= node_count) {
            throw ValidationError("edge endpoint " + std::to_string(e.v) + " outside node range");
        }
        net.edges_.push_back(e);
    }
    std::sort(net.edges_.begin(), net.edges_.end());
    net.edges_.erase(std::unique(net.edges_.begin(), net.edges_.end()), net.edges_.end());

    net.offsets_.assign(node_count + 1, 0);
    for (const Edge &e : net.edges_) {
        ++net.offsets_[e.u + 1];
        ++net.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) net.offsets_[i + 1] += net.offsets_[i];

    net.targets_.resize(2 * net.edges_.size());
    net.edge_ids_.resize(2 * net.edges_.size());
    std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
    for (std::size_t k = 0; k < net.edges_.size(); ++k) {
        const Edge &e = net.edges_[k];
        net.targets_[cursor[e.u]] = e.v;
        net.edge_ids_[cursor[e.u]++] = static_cast<std::uint32_t>(k);
        net.targets_[cursor[e.v]] = e.u;
        net.edge_ids_[cursor[e.v]++] = static_cast<std::uint32_t>(k);
    }
    return net;
}

bool Network::has_edge(NodeId a, NodeId b) const {
    if (a == b) return false;
    return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

namespace {

std::optional<std::size_t> parse_node_header(std::string_view comment) {
    // comment excludes the leading '#'
    comment = detail::trim(comment);
    constexpr std::string_view key = "nodes";
    if (comment.substr(0, key.size()) != key) return std::nullopt;
    comment = detail::trim(comment.substr(key.size()));
    if (comment.empty() || comment.front() != '=') return std::nullopt;
    return detail::parse_int<std::size_t>(comment.substr(1));
}

std::vector<std::string_view> split_pair(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' && line[j] != '\r') ++j;
        tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

}  // namespace

LoadedNetwork load_edge_list(std::istream &in) {
    std::optional<std::size_t> declared;
    std::vector<std::pair<std::string, std::string>> raw;
    std::vector<std::size_t> raw_lines;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = detail::trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            if (auto k = parse_node_header(text.substr(1))) declared = *k;
            continue;
        }
        const auto tokens = split_pair(text);
        if (tokens.size() != 2) {
            throw ParseError("expected two node identifiers, found " + std::to_string(tokens.size()), line_no);
        }
        raw.emplace_back(std::string(tokens[0]), std::string(tokens[1]));
        raw_lines.push_back(line_no);
    }

    LoadedNetwork result;
    std::vector<Edge> pairs;
    pairs.reserve(raw.size());

    auto push_pair = [&](std::size_t k, NodeId a, NodeId b) {
        if (a == b) {
            throw ValidationError("line " + std::to_string(raw_lines[k]) + ": self-loop on node '" + raw[k].first + "'");
        }
        pairs.emplace_back(a, b);
    };

    bool all_integer = true;
    for (const auto &[a, b] : raw) {
        if (!detail::parse_int<std::uint64_t>(a) || !detail::parse_int<std::uint64_t>(b)) {
            all_integer = false;
            break;
        }
    }

    std::size_t node_count = 0;
    if (declared) {
        node_count = *declared;
        for (std::size_t k = 0; k < raw.size(); ++k) {
            auto a = detail::parse_int<std::uint64_t>(raw[k].first);
            auto b = detail::parse_int<std::uint64_t>(raw[k].second);
            if (!a || !b) throw ParseError("node ids must be integers when a nodes header is present", raw_lines[k]);
            if (*a >= node_count || *b >= node_count) {
                throw ParseError("node id outside declared range [0, " + std::to_string(node_count) + ")", raw_lines[k]);
            }
            push_pair(k, static_cast<NodeId>(*a), static_cast<NodeId>(*b));
        }
        result.labels.reserve(node_count);
        for (std::size_t i = 0; i < node_count; ++i) result.labels.push_back(std::to_string(i));
    } else if (all_integer) {
        std::map<std::uint64_t, NodeId> rank;
        for (const auto &[a, b] : raw) {
            rank.emplace(*detail::parse_int<std::uint64_t>(a), 0);
            rank.emplace(*detail::parse_int<std::uint64_t>(b), 0);
        }
        NodeId next = 0;
        for (auto &[value, id] : rank) {
            id = next++;
            result.labels.push_back(std::to_string(value));
        }
        node_count = rank.size();
        for (std::size_t k = 0; k < raw.size(); ++k) {
            push_pair(k, rank.at(*detail::parse_int<std::uint64_t>(raw[k].first)),
                      rank.at(*detail::parse_int<std::uint64_t>(raw[k].second)));
        }
    } else {
        std::unordered_map<std::string, NodeId> ids;
        auto id_of = [&](const std::string &token) {
            auto [it, inserted] = ids.emplace(token, static_cast<NodeId>(ids.size()));
            if (inserted) result.labels.push_back(token);
            return it->second;
        };
        for (std::size_t k = 0; k < raw.size(); ++k) {
            const NodeId a = id_of(raw[k].first);
            const NodeId b = id_of(raw[k].second);
            push_pair(k, a, b);
        }
        node_count = ids.size();
    }

    result.network = Network::from_edges(node_count, pairs);
    return result;
}

LoadedNetwork load_edge_list_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
    return load_edge_list(in);
}

void write_edge_list(std::ostream &out, const Network &net) {
    out << "# nodes=" << net.node_count() << '\n';
    for (const Edge &e : net.edges()) out << e.u << ' ' << e.v << '\n';
}

std::vector<std::vector<NodeId>> connected_components(const Network &net) {
    const std::size_t n = net.node_count();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<NodeId>> components;
    std::vector<NodeId> queue;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start]) continue;
        queue.clear();
        queue.push_back(start);
        seen[start] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (NodeId j : net.neighbors(queue[head])) {
                if (!seen[j]) {
                    seen[j] = 1;
                    queue.push_back(j);
                }
            }
        }
        std::sort(queue.begin(), queue.end());
        components.push_back(queue);
    }
    // Components were discovered in order of their smallest member, so a
    // stable sort by size keeps that as the tie-break.
    std::stable_sort(components.begin(), components.end(),
                     [](const auto &a, const auto &b) { return a.size() > b.size(); });
    return components;
}

std::vector<Edge> induced_edges(const Network &net, std::span<const NodeId> nodes) {
    std::vector<char> member(net.node_count(), 0);
    for (NodeId i : nodes) {
        if (i >= net.node_count()) throw DomainError("unknown node id " + std::to_string(i));
        member[i] = 1;
    }
    std::vector<Edge> result;
    for (NodeId i : nodes) {
        if (member[i] != 1) continue;  // duplicate in input
        member[i] = 2;
        for (NodeId j : net.neighbors(i)) {
            if (member[j] && i < j) result.emplace_back(i, j);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

AttributeTable::AttributeTable(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)), missing_(names_.size(), 0) {
    if (names_.size() != columns_.size()) throw ValidationError("attribute names and columns differ in count");
    rows_ = columns_.empty() ? 0 : columns_.front().size();
    for (const auto &col : columns_) {
        if (col.size() != rows_) throw ValidationError("attribute columns differ in length");
    }
}

std::size_t AttributeTable::find(const std::string &name) const {
    return static_cast<std::size_t>(std::find(names_.begin(), names_.end(), name) - names_.begin());
}

AttributeTable load_attribute_table(std::istream &in, std::size_t expected_rows) {
    AttributeTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv(line);
        if (!have_header) {
            for (auto f : fields) {
                if (f.empty()) throw ParseError("empty variable name in header", line_no);
                table.names_.emplace_back(f);
            }
            table.columns_.resize(table.names_.size());
            table.missing_.assign(table.names_.size(), 0);
            have_header = true;
            continue;
        }
        if (fields.size() != table.names_.size()) {
            throw ParseError("expected " + std::to_string(table.names_.size()) + " cells, found " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        for (std::size_t v = 0; v < fields.size(); ++v) {
            if (fields[v].empty() || fields[v] == "NA") {
                table.columns_[v].push_back(0.0);
                ++table.missing_[v];
                continue;
            }
            auto value = detail::parse_double(fields[v]);
            if (!value) throw ParseError("non-numeric cell '" + std::string(fields[v]) + "'", line_no);
            table.columns_[v].push_back(*value);
        }
        ++table.rows_;
    }
    if (!have_header) throw ParseError("attribute table has no header row");
    if (table.rows_ != expected_rows) {
        throw ValidationError("attribute table has " + std::to_string(table.rows_) + " rows but the network has " +
                              std::to_string(expected_rows) + " nodes");
    }
    return table;
}

AttributeTable load_attribute_table_file(const std::string &path, std::size_t expected_rows) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open attribute table '" + path + "'");
    return load_attribute_table(in, expected_rows);
}

}  // namespace netsamp
