#include "netsamp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "netsamp/config.hpp"
#include "netsamp/errors.hpp"
#include "netsamp/sample_io.hpp"

namespace netsamp {

namespace fs = std::filesystem;

namespace {

std::string flag_name(const std::string &key) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    return flag;
}

/// Flags shared by the subcommands that take a run configuration. Values are
/// captured as text and applied over the config file after parsing.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option *> options;

    void attach(CLI::App &app, std::initializer_list<SettingGroup> groups, std::initializer_list<std::string> skip = {}) {
        app.add_option("--config", config_path, "key = value config file (flags override it)");
        for (const auto &spec : setting_specs()) {
            if (std::find(groups.begin(), groups.end(), spec.group) == groups.end()) continue;
            if (std::find(skip.begin(), skip.end(), spec.key) != skip.end()) continue;
            const std::string flag = flag_name(spec.key);
            std::string names = flag;
            if (spec.key.find('_') != std::string::npos) names += ",--" + spec.key;
            options[spec.key] = app.add_option(names, values[spec.key], spec.help)->default_str(spec.default_value);
        }
    }

    /// Adds an option that writes straight into a config key under another name.
    void alias(CLI::App &app, const std::string &name, const std::string &key, const std::string &help) {
        options[key] = app.add_option(name, values[key], help);
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg.merge_file(config_path);
        for (const auto &[key, opt] : options) {
            if (opt->count() > 0) cfg.set(key, values.at(key));
        }
        return cfg;
    }
};

void require_file(const std::string &path, const char *flag) {
    if (!fs::exists(path)) throw std::runtime_error(fmt::format("{}: no such file '{}'", flag, path));
}

std::ofstream open_output(const fs::path &path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

LoadedNetwork load_network(const std::string &path) {
    require_file(path, "--edges");
    return load_edge_list_file(path);
}

AttributeTable load_attributes(const std::string &path, std::size_t nodes, std::ostream &err) {
    if (path.empty()) return AttributeTable{};
    require_file(path, "--attrs");
    AttributeTable attrs = load_attribute_table_file(path, nodes);
    const auto missing = attrs.missing_counts();
    for (std::size_t v = 0; v < attrs.variable_count(); ++v) {
        if (missing[v] > 0) {
            fmt::print(err, "note: attribute '{}' has {} missing values, coded as 0\n", attrs.names()[v], missing[v]);
        }
    }
    return attrs;
}

void run_stats(const std::string &edges_path, std::size_t top, std::ostream &out) {
    const auto loaded = load_network(edges_path);
    const Network &net = loaded.network;
    const auto comps = connected_components(net);
    std::size_t isolated = 0;
    std::size_t max_degree = 0;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        isolated += net.degree(i) == 0;
        max_degree = std::max(max_degree, net.degree(i));
    }
    const double mean_degree =
        net.node_count() ? 2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(net.node_count()) : 0.0;
    fmt::print(out, "nodes,{}\n", net.node_count());
    fmt::print(out, "edges,{}\n", net.edge_count());
    fmt::print(out, "components,{}\n", comps.size());
    fmt::print(out, "largest_component,{}\n", comps.empty() ? 0 : comps.front().size());
    fmt::print(out, "isolated_nodes,{}\n", isolated);
    fmt::print(out, "mean_degree,{:.6f}\n", mean_degree);
    fmt::print(out, "max_degree,{}\n", max_degree);
    std::string sizes;
    for (std::size_t c = 0; c < std::min(top, comps.size()); ++c) {
        sizes += (c ? ";" : "") + std::to_string(comps[c].size());
    }
    fmt::print(out, "top_component_sizes,{}\n", sizes);
}

void run_sample(const std::string &edges_path, const std::string &attrs_path, const std::string &design_label,
                const ConfigFlags &flags, const std::string &out_dir, std::ostream &err) {
    const RunConfig cfg = flags.resolve();
    const std::string label = canonical_design_label(design_label);
    const DesignConfig design = cfg.design(label);
    const auto loaded = load_network(edges_path);
    const AttributeTable attrs = load_attributes(attrs_path, loaded.network.node_count(), err);
    Rng rng = derive_stream(cfg.seed(), label, 0, StreamPhase::design);
    const SampleNetwork sample = draw_sample(loaded.network, attrs, design, rng);
    if (sample.undersized) {
        fmt::print(err, "warning: sample reached {} of {} nodes before recruitment stopped\n", sample.size(),
                   design.sample_target);
    }
    write_sample_dir(out_dir, sample, loaded.labels);
    fmt::print(err, "sampled {} nodes ({} seeds, {} links) in {} days\n", sample.size(),
               std::count_if(sample.kind.begin(), sample.kind.end(), [](EntryKind k) { return k != EntryKind::recruit; }),
               sample.edges.size(), sample.days);
}

void run_weights(const std::string &sample_dir, const std::string &design_label, const ConfigFlags &flags,
                 const std::string &out_dir, std::ostream &err) {
    const RunConfig cfg = flags.resolve();
    FastConfig fast = cfg.fast();
    const SampleNetwork sample = read_sample_dir(sample_dir);
    if (sample.size() == 0) throw DomainError("sample is empty");
    if (fast.target_size > sample.size()) {
        fmt::print(err, "note: fast_target {} capped at the sample size {}\n", fast.target_size, sample.size());
        fast.target_size = sample.size();
    }
    const std::string label = canonical_design_label(design_label);
    Rng rng = derive_stream(cfg.seed(), label, 0, StreamPhase::fastproc);
    const InclusionStats stats = compute_inclusion(sample, fast, cfg.design(label), rng);
    if (stats.floored > 0) {
        fmt::print(err, "warning: {} nodes were never included; their f is floored at 0.5/T\n", stats.floored);
    }
    write_weights_dir(out_dir, sample, stats);
    fmt::print(err, "fast process: mode {}, {} counted iterations, mean size {:.3f}\n", to_string(stats.mode),
               stats.iterations_used, stats.mean_chain_size);
}

void run_estimate(const std::string &sample_dir, const std::string &weights_dir, const ConfigFlags &flags,
                  const std::string &out_path, std::ostream &out, std::ostream &err) {
    const RunConfig cfg = flags.resolve();
    const EvalConfig eval = cfg.eval();
    const SampleNetwork sample = read_sample_dir(sample_dir);
    const InclusionStats stats = read_weights_dir(weights_dir, sample);
    std::vector<std::string> variables = eval.variables;
    if (variables.empty()) {
        variables.emplace_back(kDegreeVariable);
        variables.insert(variables.end(), sample.variables.begin(), sample.variables.end());
    }
    const SampleEstimates est = estimate_sample(sample, stats, variables, eval.alpha, eval.ci_variance);
    if (est.vh_excluded > 0) fmt::print(err, "note: {} degree-0 nodes excluded from VH\n", est.vh_excluded);
    if (out_path.empty()) {
        write_estimates_csv(out, est);
        return;
    }
    fs::path path = out_path;
    if (fs::is_directory(path) || out_path.back() == '/') {
        fs::create_directories(path);
        path /= "estimate.csv";
    }
    auto f = open_output(path);
    write_estimates_csv(f, est);
}

void run_simulate(const std::string &edges_path, const std::string &attrs_path, const ConfigFlags &flags,
                  const std::string &out_dir, std::ostream &err) {
    const RunConfig cfg = flags.resolve();
    const EvalConfig eval = cfg.eval();
    const auto loaded = load_network(edges_path);
    const AttributeTable attrs = load_attributes(attrs_path, loaded.network.node_count(), err);
    fmt::print(err, "simulating {} designs x {} replicates on {} nodes with {} workers\n", eval.designs.size(),
               eval.replicates, loaded.network.node_count(), eval.workers);
    const EvalSummary summary = run_evaluation(loaded.network, attrs, eval);
    for (const auto &d : summary.designs) {
        const auto &diag = d.diagnostics;
        if (diag.undersized > 0) fmt::print(err, "warning: {}: {} undersized samples\n", d.label, diag.undersized);
        if (diag.empty > 0) fmt::print(err, "warning: {}: {} empty samples skipped\n", d.label, diag.empty);
        if (diag.floored > 0) fmt::print(err, "note: {}: {} floored inclusion frequencies\n", d.label, diag.floored);
    }
    write_evaluation(out_dir, summary);
    fmt::print(err, "wrote results for {} designs to {}\n", summary.designs.size(), out_dir);
}

}  // namespace

int execute(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Network sampling simulator: coupon surveys, fast inclusion estimates and evaluation tables",
                 "netsamp"};
    app.require_subcommand(1);
    app.footer(config_key_help());
    app.get_formatter()->column_width(34);

    std::string edges_path, attrs_path, out_path, sample_dir, weights_dir;
    std::string design_label = "rds";
    std::size_t top = 10;

    auto *stats = app.add_subcommand("stats", "Print node, edge and component counts of an edge list");
    stats->add_option("--edges", edges_path, "edge list file")->required();
    stats->add_option("--top", top, "number of component sizes to list")->capture_default_str();

    ConfigFlags sample_flags;
    auto *sample = app.add_subcommand("sample", "Draw one survey sample");
    sample->add_option("--edges", edges_path, "edge list file")->required();
    sample->add_option("--attrs", attrs_path, "node attribute CSV");
    sample->add_option("--design", design_label, "rds, rdsplus, sb or sbplus")->capture_default_str();
    sample->add_option("--out", out_path, "output directory")->required();
    sample_flags.attach(*sample, {SettingGroup::design});
    sample_flags.alias(*sample, "--seed", "seed", "master random seed");

    ConfigFlags weights_flags;
    auto *weights = app.add_subcommand("weights", "Estimate inclusion frequencies on a stored sample");
    weights->add_option("--sample", sample_dir, "sample directory written by 'sample'")->required();
    weights->add_option("--out", out_path, "output directory")->required();
    weights->add_option("--design", design_label, "design replayed by fast_mode=independent")->capture_default_str();
    weights_flags.attach(*weights, {SettingGroup::fast, SettingGroup::design});
    weights_flags.alias(*weights, "--seed", "seed", "master random seed");

    ConfigFlags estimate_flags;
    auto *estimate = app.add_subcommand("estimate", "Compute estimates from a sample and its weights");
    estimate->add_option("--sample", sample_dir, "sample directory")->required();
    estimate->add_option("--weights", weights_dir, "weights directory written by 'weights'")->required();
    estimate->add_option("--out", out_path, "output file or directory (default: standard output)");
    estimate_flags.alias(*estimate, "--alpha", "alpha", "interval level is 1 - alpha (default 0.05)");
    estimate_flags.alias(*estimate, "--variance", "variance",
                         "interval variance: simple, diagonal, conservative, edge, full (default simple)");
    estimate_flags.alias(*estimate, "--variables", "variables", "comma-separated variables (default: all)");
    estimate->add_option("--config", estimate_flags.config_path, "key = value config file (flags override it)");

    ConfigFlags sim_flags;
    auto *simulate = app.add_subcommand("simulate", "Run the Monte Carlo evaluation");
    simulate->add_option("--edges", edges_path, "edge list file")->required();
    simulate->add_option("--attrs", attrs_path, "node attribute CSV");
    simulate->add_option("--out", out_path, "output directory")->required();
    sim_flags.attach(*simulate, {SettingGroup::design, SettingGroup::fast, SettingGroup::eval}, {"designs"});
    sim_flags.alias(*simulate, "--design,--designs", "designs",
                    "comma-separated designs or 'all' (default rds,rdsplus,sb,sbplus)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        const CLI::App *active = &app;
        for (auto *sub : app.get_subcommands()) active = sub;
        err << active->help();
        return kExitUsage;
    }

    try {
        if (stats->parsed()) {
            run_stats(edges_path, top, out);
        } else if (sample->parsed()) {
            run_sample(edges_path, attrs_path, design_label, sample_flags, out_path, err);
        } else if (weights->parsed()) {
            run_weights(sample_dir, design_label, weights_flags, out_path, err);
        } else if (estimate->parsed()) {
            run_estimate(sample_dir, weights_dir, estimate_flags, out_path, out, err);
        } else if (simulate->parsed()) {
            run_simulate(edges_path, attrs_path, sim_flags, out_path, err);
        }
    } catch (const ConfigError &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace netsamp
