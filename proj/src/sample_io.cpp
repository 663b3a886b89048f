#include "netsamp/sample_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "netsamp/errors.hpp"
#include "text_util.hpp"

namespace netsamp {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path &path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

std::ifstream open_in(const fs::path &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return f;
}

/// Reads a headed CSV into rows of fields; calls fn(fields, line_no) per data row.
template <typename Fn>
std::vector<std::string> read_csv(const fs::path &path, Fn &&fn) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv(line);
        if (header.empty()) {
            for (auto f : fields) header.emplace_back(f);
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError(path.filename().string() + ": expected " + std::to_string(header.size()) + " fields",
                             line_no);
        }
        fn(fields, line_no);
    }
    if (header.empty()) throw ParseError(path.string() + ": missing header row");
    return header;
}

double number(std::string_view s, std::size_t line, const char *what) {
    auto v = detail::parse_double(s);
    if (!v) throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
    return *v;
}

NodeId node_id(std::string_view s, std::size_t line) {
    auto v = detail::parse_int<NodeId>(s);
    if (!v) throw ParseError("bad node id '" + std::string(s) + "'", line);
    return *v;
}

}  // namespace

void write_sample_dir(const std::string &dir, const SampleNetwork &sample, std::span<const std::string> labels) {
    fs::create_directories(dir);
    {
        auto out = open_out(fs::path(dir) / "nodes.csv");
        out << "id,is_seed,degree";
        for (const auto &v : sample.variables) out << ',' << v;
        out << '\n';
        for (std::size_t k = 0; k < sample.size(); ++k) {
            fmt::print(out, "{},{},{}", sample.nodes[k], sample.is_seed(k) ? 1 : 0, sample.degree[k]);
            for (const auto &col : sample.values) fmt::print(out, ",{}", col[k]);
            out << '\n';
        }
    }
    {
        auto out = open_out(fs::path(dir) / "edges.csv");
        out << "u,v,is_recruitment\n";
        for (std::size_t k = 0; k < sample.edges.size(); ++k) {
            fmt::print(out, "{},{},{}\n", sample.edges[k].u, sample.edges[k].v, sample.is_recruitment[k] ? 1 : 0);
        }
    }
    if (!labels.empty()) {
        auto out = open_out(fs::path(dir) / "node_map.csv");
        out << "id,label\n";
        for (NodeId i : sample.nodes) fmt::print(out, "{},{}\n", i, labels[i]);
    }
}

SampleNetwork read_sample_dir(const std::string &dir) {
    SampleNetwork s;
    const auto header = read_csv(fs::path(dir) / "nodes.csv", [&](const auto &fields, std::size_t line) {
        s.nodes.push_back(node_id(fields[0], line));
        s.kind.push_back(number(fields[1], line, "is_seed") != 0.0 ? EntryKind::seed : EntryKind::recruit);
        s.parent.push_back(kNoParent);
        s.entry_day.push_back(0);
        s.degree.push_back(static_cast<std::size_t>(number(fields[2], line, "degree")));
        if (s.values.size() < fields.size() - 3) s.values.resize(fields.size() - 3);
        for (std::size_t v = 3; v < fields.size(); ++v) s.values[v - 3].push_back(number(fields[v], line, "value"));
    });
    if (header.size() < 3 || header[0] != "id" || header[1] != "is_seed" || header[2] != "degree") {
        throw ParseError("nodes.csv must start with id,is_seed,degree");
    }
    s.variables.assign(header.begin() + 3, header.end());
    s.values.resize(s.variables.size());

    std::vector<std::pair<Edge, char>> edges;
    read_csv(fs::path(dir) / "edges.csv", [&](const auto &fields, std::size_t line) {
        const NodeId u = node_id(fields[0], line);
        const NodeId v = node_id(fields[1], line);
        if (u == v) throw ValidationError("edges.csv line " + std::to_string(line) + ": self-loop");
        edges.emplace_back(Edge(u, v), number(fields[2], line, "is_recruitment") != 0.0 ? 1 : 0);
    });
    std::sort(edges.begin(), edges.end());
    for (const auto &[e, r] : edges) {
        s.edges.push_back(e);
        s.is_recruitment.push_back(r);
    }
    s.local_network();  // validates that endpoints are sample nodes
    return s;
}

void write_weights_dir(const std::string &dir, const SampleNetwork &sample, const InclusionStats &stats) {
    fs::create_directories(dir);
    const bool has_g = !stats.g.empty();
    {
        auto out = open_out(fs::path(dir) / "weights.csv");
        out << (has_g ? "node_id,f,g\n" : "node_id,f\n");
        for (std::size_t k = 0; k < stats.size(); ++k) {
            fmt::print(out, "{},{:.17g}", sample.nodes[k], stats.f[k]);
            if (has_g) fmt::print(out, ",{:.17g}", stats.g[k]);
            out << '\n';
        }
    }
    auto out = open_out(fs::path(dir) / "pairs.csv");
    out << "u,v,f_ij\n";
    for (std::size_t k = 0; k < stats.pairs.size(); ++k) {
        fmt::print(out, "{},{},{:.17g}\n", sample.nodes[stats.pairs[k].u], sample.nodes[stats.pairs[k].v],
                   stats.pair_f[k]);
    }
}

InclusionStats read_weights_dir(const std::string &dir, const SampleNetwork &sample) {
    std::unordered_map<NodeId, std::size_t> local;
    for (std::size_t k = 0; k < sample.size(); ++k) local.emplace(sample.nodes[k], k);
    auto local_of = [&](NodeId id, std::size_t line) {
        auto it = local.find(id);
        if (it == local.end()) throw ParseError("node " + std::to_string(id) + " is not in the sample", line);
        return it->second;
    };

    InclusionStats stats;
    const std::size_t n = sample.size();
    stats.f.assign(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<double> g(n, 0.0);
    const auto header = read_csv(fs::path(dir) / "weights.csv", [&](const auto &fields, std::size_t line) {
        const std::size_t k = local_of(node_id(fields[0], line), line);
        seen[k] = 1;
        stats.f[k] = number(fields[1], line, "f");
        if (fields.size() > 2) g[k] = number(fields[2], line, "g");
    });
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(n)) {
        throw ValidationError("weights.csv does not cover every sample node");
    }
    if (header.size() > 2) {
        stats.g = std::move(g);
        stats.mode = FastMode::with_replacement;
    }
    for (double f : stats.f) stats.mean_chain_size += f;

    std::vector<std::pair<Edge, double>> pairs;
    const fs::path pairs_path = fs::path(dir) / "pairs.csv";
    if (fs::exists(pairs_path)) {
        read_csv(pairs_path, [&](const auto &fields, std::size_t line) {
            const auto a = local_of(node_id(fields[0], line), line);
            const auto b = local_of(node_id(fields[1], line), line);
            pairs.emplace_back(Edge(NodeId(a), NodeId(b)), number(fields[2], line, "f_ij"));
        });
    }
    std::sort(pairs.begin(), pairs.end());
    stats.all_pairs = n > 1 && pairs.size() == n * (n - 1) / 2;
    if (!stats.all_pairs) {
        // Edge-tracked frequencies must line up with the sample graph's edge order.
        const Network graph = sample.local_network();
        std::unordered_map<std::uint64_t, double> by_pair;
        for (const auto &[e, f] : pairs) by_pair.emplace((std::uint64_t(e.u) << 32) | e.v, f);
        for (const Edge &e : graph.edges()) {
            auto it = by_pair.find((std::uint64_t(e.u) << 32) | e.v);
            stats.pairs.push_back(e);
            stats.pair_f.push_back(it == by_pair.end() ? 0.0 : it->second);
        }
    } else {
        for (const auto &[e, f] : pairs) {
            stats.pairs.push_back(e);
            stats.pair_f.push_back(f);
        }
    }
    stats.counts.assign(n, 0);
    return stats;
}

void write_estimates_csv(std::ostream &out, const SampleEstimates &estimates) {
    fmt::print(out, "variable,method,estimate,variance,ci_low,ci_high,clamped_flag\n");
    for (const auto &v : estimates.variables) {
        for (const auto &m : v.methods) {
            const auto &e = m.estimate;
            fmt::print(out, "{},{},{:.10g},{:.10g},{:.10g},{:.10g},{}\n", v.variable, m.method, e.value, e.variance,
                       e.ci_low, e.ci_high, e.clamped ? 1 : 0);
        }
    }
}

}  // namespace netsamp
