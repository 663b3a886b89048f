#include "netsamp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "netsamp/errors.hpp"

namespace netsamp {

namespace {

constexpr const char *kSimple = "SIMPLE";
constexpr const char *kVh = "VH";
constexpr const char *kMean = "MEAN";

std::string variant_name(VarianceMethod m) { return std::string(kSimple) + ":" + to_string(m); }

}  // namespace

void EvalConfig::validate(const AttributeTable &attrs) const {
    if (replicates < 1) throw ConfigError("reps must be at least 1");
    if (designs.empty()) throw ConfigError("designs must name at least one design");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    if (ci_variance == VarianceMethod::full && !fast.all_pairs) {
        throw ConfigError("variance=full requires all_pairs=true");
    }
    if (fast.mode == FastMode::with_replacement && ci_variance != VarianceMethod::simple) {
        throw ConfigError("with_replacement fast mode supports only variance=simple");
    }
    for (const auto &name : variables) {
        if (name != kDegreeVariable && attrs.find(name) == attrs.variable_count()) {
            throw ConfigError("variables: unknown variable '" + name + "'");
        }
    }
    for (const auto &d : designs) d.config.validate();
}

std::vector<std::string> EvalConfig::variable_names(const AttributeTable &attrs) const {
    if (!variables.empty()) return variables;
    std::vector<std::string> names{kDegreeVariable};
    for (const auto &n : attrs.names()) {
        if (n != kDegreeVariable) names.push_back(n);
    }
    return names;
}

const MethodResult &VariableResult::find(const std::string &method) const {
    for (const auto &m : methods) {
        if (m.method == method) return m;
    }
    throw DomainError("no estimate for method " + method);
}

std::vector<double> sample_variable(const SampleNetwork &sample, const std::string &name) {
    if (name == kDegreeVariable) return {sample.degree.begin(), sample.degree.end()};
    const auto it = std::find(sample.variables.begin(), sample.variables.end(), name);
    if (it == sample.variables.end()) throw DomainError("sample has no variable '" + name + "'");
    return sample.values[static_cast<std::size_t>(it - sample.variables.begin())];
}

std::vector<double> population_variable(const Network &net, const AttributeTable &attrs, const std::string &name) {
    if (name == kDegreeVariable) {
        std::vector<double> d(net.node_count());
        for (NodeId i = 0; i < net.node_count(); ++i) d[i] = static_cast<double>(net.degree(i));
        return d;
    }
    const std::size_t v = attrs.find(name);
    if (v == attrs.variable_count()) throw DomainError("unknown variable '" + name + "'");
    const auto col = attrs.column(v);
    return {col.begin(), col.end()};
}

SampleEstimates estimate_sample(const SampleNetwork &sample, const InclusionStats &stats,
                                std::span<const std::string> variables, double alpha, VarianceMethod ci_variance) {
    if (stats.size() != sample.size()) throw DomainError("inclusion stats do not match the sample");
    SampleEstimates out;
    const bool wr = stats.mode == FastMode::with_replacement;

    // Degree-0 nodes (isolated seeds) cannot enter VH.
    std::vector<std::size_t> vh_nodes;
    std::vector<double> vh_degrees;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        if (sample.degree[k] >= 1) {
            vh_nodes.push_back(k);
            vh_degrees.push_back(static_cast<double>(sample.degree[k]));
        }
    }
    out.vh_excluded = sample.size() - vh_nodes.size();

    // Sample-edge joint frequencies, whichever way they were tracked.
    std::vector<Edge> edge_pairs;
    std::vector<double> edge_pair_f;
    if (!wr) {
        if (stats.all_pairs) {
            const Network local = sample.local_network();
            for (const Edge &e : local.edges()) {
                edge_pairs.push_back(e);
                edge_pair_f.push_back(stats.joint(e.u, e.v));
            }
        } else {
            edge_pairs = stats.pairs;
            edge_pair_f = stats.pair_f;
        }
    }
    const std::vector<double> ones(sample.size(), 1.0);

    for (const auto &name : variables) {
        const std::vector<double> y = sample_variable(sample, name);
        VariableResult vr;
        vr.variable = name;

        std::vector<std::pair<VarianceMethod, VarianceResult>> variances;
        double mu = 0.0;
        if (wr) {
            mu = wr_mean(y, ones, stats.g);
            variances.push_back({VarianceMethod::simple, {wr_variance(y, ones, stats.g, mu), false, 0.0, 0}});
        } else {
            mu = gupe_mean(y, stats.f);
            auto plain = [](double v) { return VarianceResult{v, false, v, 0}; };
            variances.push_back({VarianceMethod::simple, plain(variance_simple(y, stats.f, mu))});
            variances.push_back({VarianceMethod::diagonal, plain(variance_diagonal(y, stats.f, mu, false))});
            variances.push_back(
                {VarianceMethod::diagonal_conservative, plain(variance_diagonal(y, stats.f, mu, true))});
            variances.push_back({VarianceMethod::edge, variance_edge(y, stats.f, edge_pairs, edge_pair_f, mu)});
            if (stats.all_pairs) variances.push_back({VarianceMethod::full, variance_full(y, stats.f, stats.pair_f, mu)});
        }

        const auto chosen = std::find_if(variances.begin(), variances.end(),
                                         [&](const auto &p) { return p.first == ci_variance; });
        if (chosen == variances.end()) {
            throw ConfigError("variance '" + to_string(ci_variance) + "' is not available for this fast process");
        }
        vr.methods.push_back({kSimple,
                              make_estimate(kSimple, mu, chosen->second.value, alpha, chosen->second.clamped),
                              true, chosen->second.skipped});

        if (vh_nodes.empty()) {
            Estimate e;
            e.method = kVh;
            e.value = e.variance = e.ci_low = e.ci_high = std::nan("");
            vr.methods.push_back({kVh, e, false, 0});
        } else {
            std::vector<double> yv;
            yv.reserve(vh_nodes.size());
            for (std::size_t k : vh_nodes) yv.push_back(y[k]);
            const double vh = vh_mean(yv, vh_degrees);
            vr.methods.push_back({kVh, make_estimate(kVh, vh, variance_simple(yv, vh_degrees, vh), alpha), false, 0});
        }

        const double ybar = sample_mean(y);
        vr.methods.push_back({kMean, make_estimate(kMean, ybar, variance_simple(y, ones, ybar), alpha), false, 0});

        for (const auto &[method, v] : variances) {
            const std::string label = variant_name(method);
            vr.methods.push_back({label, make_estimate(label, mu, v.value, alpha, v.clamped), true, v.skipped});
        }
        out.variables.push_back(std::move(vr));
    }
    return out;
}

ReplicateResult run_replicate(const Network &net, const AttributeTable &attrs, const LabeledDesign &design,
                              const EvalConfig &cfg, std::span<const std::string> variables, std::size_t replicate) {
    ReplicateResult r;
    r.replicate = replicate;

    Rng design_rng = derive_stream(cfg.master_seed, design.label, replicate, StreamPhase::design);
    const SampleNetwork sample = draw_sample(net, attrs, design.config, design_rng);

    r.sample_size = sample.size();
    r.seeds = static_cast<std::size_t>(std::count_if(sample.kind.begin(), sample.kind.end(),
                                                     [](EntryKind k) { return k != EntryKind::recruit; }));
    r.recruitment_edges = sample.recruitment_edge_count();
    r.sample_edges = sample.edges.size();
    r.induced_edges = design.config.plus_links ? sample.edges.size() : induced_edges(net, sample.nodes).size();
    r.undersized = sample.undersized;
    if (sample.size() == 0) {
        r.empty = true;
        return r;
    }

    FastConfig fast = cfg.fast;
    fast.target_size = std::min(fast.target_size, sample.size());
    Rng fast_rng = derive_stream(cfg.master_seed, design.label, replicate, StreamPhase::fastproc);
    const InclusionStats stats = compute_inclusion(sample, fast, design.config, fast_rng);
    r.mean_chain_size = stats.mean_chain_size;
    r.floored = stats.floored;
    r.estimates = estimate_sample(sample, stats, variables, cfg.alpha, cfg.ci_variance);
    return r;
}

MetricsRow compute_metrics(std::span<const double> estimates, double truth) {
    if (estimates.empty()) throw DomainError("metrics need at least one replicate");
    MetricsRow row;
    row.actual = truth;
    const double r = static_cast<double>(estimates.size());
    double sum = 0.0;
    for (double e : estimates) sum += e;
    row.expected = sum / r;
    double ss = 0.0;
    for (double e : estimates) ss += (e - row.expected) * (e - row.expected);
    row.sd = std::sqrt(ss / r);
    row.bias = row.expected - truth;
    row.mse = row.bias * row.bias + row.sd * row.sd;
    return row;
}

void relate_to_reference(MetricsRow &row, const MetricsRow &reference) {
    row.eff = row.mse / reference.mse;
    row.rbias = std::abs(row.bias) / std::abs(reference.bias);
}

double compute_coverage(std::span<const std::pair<double, double>> intervals, double truth) {
    if (intervals.empty()) throw DomainError("coverage needs at least one interval");
    std::size_t hits = 0;
    for (const auto &[low, high] : intervals) {
        if (low <= truth && truth <= high) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(intervals.size());
}

namespace {

CoverageRow coverage_row(const std::string &name, double truth, std::span<const Estimate> estimates) {
    CoverageRow row;
    row.name = name;
    row.actual = truth;
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(estimates.size());
    double half = 0.0;
    double var = 0.0;
    for (const Estimate &e : estimates) {
        intervals.emplace_back(e.ci_low, e.ci_high);
        half += (e.ci_high - e.ci_low) / 2.0;
        var += e.variance;
    }
    const double r = static_cast<double>(estimates.size());
    row.halfwidth = half / r;
    row.av_sd = std::sqrt(var / r);
    row.coverage = compute_coverage(intervals, truth);
    return row;
}

}  // namespace

DesignSummary summarize_design(const std::string &label, std::vector<ReplicateResult> replicates,
                               std::span<const std::string> variables, std::span<const double> truth) {
    DesignSummary s;
    s.label = label;

    std::vector<const ReplicateResult *> usable;
    auto &dg = s.diagnostics;
    double recruit_sum = 0.0;
    double induced_sum = 0.0;
    for (const auto &r : replicates) {
        dg.mean_sample_size += static_cast<double>(r.sample_size);
        dg.mean_seeds += static_cast<double>(r.seeds);
        dg.mean_recruitment_edges += static_cast<double>(r.recruitment_edges);
        dg.mean_sample_edges += static_cast<double>(r.sample_edges);
        dg.mean_induced_edges += static_cast<double>(r.induced_edges);
        dg.mean_chain_size += r.mean_chain_size;
        recruit_sum += static_cast<double>(r.recruitment_edges);
        induced_sum += static_cast<double>(r.induced_edges);
        dg.undersized += r.undersized ? 1 : 0;
        dg.empty += r.empty ? 1 : 0;
        dg.floored += r.floored;
        dg.vh_excluded += r.estimates.vh_excluded;
        if (!r.empty) usable.push_back(&r);
    }
    const double rn = static_cast<double>(std::max<std::size_t>(replicates.size(), 1));
    dg.mean_sample_size /= rn;
    dg.mean_seeds /= rn;
    dg.mean_recruitment_edges /= rn;
    dg.mean_sample_edges /= rn;
    dg.mean_induced_edges /= rn;
    dg.mean_chain_size /= rn;
    dg.traced_fraction = induced_sum > 0 ? recruit_sum / induced_sum : 0.0;

    if (usable.empty()) throw DomainError("design " + label + " produced no usable replicates");

    std::vector<std::string> variant_methods;
    for (const auto &m : usable.front()->estimates.variables.front().methods) {
        if (m.method.rfind(std::string(kSimple) + ":", 0) == 0) variant_methods.push_back(m.method);
    }
    s.coverage_by_variance.resize(variant_methods.size());
    for (std::size_t k = 0; k < variant_methods.size(); ++k) {
        s.coverage_by_variance[k].first = variant_methods[k].substr(std::string(kSimple).size() + 1);
    }

    std::vector<double> values;
    std::vector<Estimate> ests;
    for (std::size_t v = 0; v < variables.size(); ++v) {
        auto collect = [&](const std::string &method) {
            values.clear();
            ests.clear();
            for (const ReplicateResult *r : usable) {
                const auto &m = r->estimates.variables[v].find(method);
                values.push_back(m.estimate.value);
                ests.push_back(m.estimate);
            }
        };
        collect(kSimple);
        MetricsRow simple = compute_metrics(values, truth[v]);
        simple.name = variables[v];
        s.coverage.push_back(coverage_row(variables[v], truth[v], ests));

        collect(kVh);
        MetricsRow vh = compute_metrics(values, truth[v]);
        vh.name = variables[v];
        relate_to_reference(vh, simple);

        collect(kMean);
        MetricsRow mean = compute_metrics(values, truth[v]);
        mean.name = variables[v];
        relate_to_reference(mean, simple);

        s.simple.push_back(simple);
        s.vh.push_back(vh);
        s.mean.push_back(mean);

        for (std::size_t k = 0; k < variant_methods.size(); ++k) {
            collect(variant_methods[k]);
            s.coverage_by_variance[k].second.push_back(coverage_row(variables[v], truth[v], ests));
        }
    }
    s.replicates = std::move(replicates);
    return s;
}

EvalSummary run_evaluation(const Network &net, const AttributeTable &attrs, const EvalConfig &cfg) {
    cfg.validate(attrs);
    for (const auto &d : cfg.designs) d.config.validate(net.node_count());

    EvalSummary out;
    out.variables = cfg.variable_names(attrs);
    for (const auto &name : out.variables) {
        out.truth.push_back(sample_mean(population_variable(net, attrs, name)));
    }

    const std::size_t per_design = cfg.replicates;
    const std::size_t total = per_design * cfg.designs.size();
    std::vector<ReplicateResult> results(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= total) return;
            try {
                const auto &design = cfg.designs[task / per_design];
                results[task] = run_replicate(net, attrs, design, cfg, out.variables, task % per_design);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(total);
            }
        }
    };

    const std::size_t workers = std::min(cfg.workers, std::max<std::size_t>(total, 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t d = 0; d < cfg.designs.size(); ++d) {
        std::vector<ReplicateResult> slice(std::make_move_iterator(results.begin() + d * per_design),
                                           std::make_move_iterator(results.begin() + (d + 1) * per_design));
        out.designs.push_back(
            summarize_design(cfg.designs[d].label, std::move(slice), out.variables, out.truth));
    }
    return out;
}

void write_summary_csv(std::ostream &out, const DesignSummary &summary) {
    fmt::print(out, "method,name,actual,E.est,bias,sd,mse,eff,rbias\n");
    auto block = [&](const char *method, const std::vector<MetricsRow> &rows) {
        for (const auto &r : rows) {
            fmt::print(out, "{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", method, r.name, r.actual,
                       r.expected, r.bias, r.sd, r.mse, r.eff, r.rbias);
        }
    };
    block(kSimple, summary.simple);
    block(kVh, summary.vh);
    block(kMean, summary.mean);
}

void write_coverage_csv(std::ostream &out, const DesignSummary &summary) {
    fmt::print(out, "name,actual,halfwidth,coverage\n");
    for (const auto &r : summary.coverage) {
        fmt::print(out, "{},{:.6f},{:.6f},{:.6f}\n", r.name, r.actual, r.halfwidth, r.coverage);
    }
}

void write_coverage_variants_csv(std::ostream &out, const DesignSummary &summary) {
    fmt::print(out, "variance,name,actual,halfwidth,av_sd,coverage\n");
    for (const auto &[variance, rows] : summary.coverage_by_variance) {
        for (const auto &r : rows) {
            fmt::print(out, "{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", variance, r.name, r.actual, r.halfwidth, r.av_sd,
                       r.coverage);
        }
    }
}

void write_replicates_csv(std::ostream &out, const DesignSummary &summary) {
    fmt::print(out, "replicate_id,variable,method,estimate,ci_low,ci_high,flags\n");
    for (const auto &r : summary.replicates) {
        std::string base;
        auto add_flag = [](std::string &flags, const std::string &f) {
            if (!flags.empty()) flags += ';';
            flags += f;
        };
        if (r.undersized) add_flag(base, "undersized");
        if (r.empty) {
            add_flag(base, "empty");
            fmt::print(out, "{},,,,,,{}\n", r.replicate, base);
            continue;
        }
        if (r.floored) add_flag(base, fmt::format("floored={}", r.floored));
        if (r.estimates.vh_excluded) add_flag(base, fmt::format("vh_excluded={}", r.estimates.vh_excluded));
        for (const auto &v : r.estimates.variables) {
            for (const auto &m : v.methods) {
                std::string flags = base;
                if (m.estimate.clamped) add_flag(flags, "clamped");
                if (m.skipped_pairs) add_flag(flags, fmt::format("skipped_pairs={}", m.skipped_pairs));
                if (m.has_interval) {
                    fmt::print(out, "{},{},{},{:.17g},{:.17g},{:.17g},{}\n", r.replicate, v.variable, m.method,
                               m.estimate.value, m.estimate.ci_low, m.estimate.ci_high, flags);
                } else {
                    fmt::print(out, "{},{},{},{:.17g},,,{}\n", r.replicate, v.variable, m.method, m.estimate.value,
                               flags);
                }
            }
        }
    }
}

void write_diagnostics_csv(std::ostream &out, const DesignSummary &summary) {
    const auto &d = summary.diagnostics;
    fmt::print(out, "key,value\n");
    fmt::print(out, "replicates,{}\n", summary.replicates.size());
    fmt::print(out, "mean_sample_size,{:.6f}\n", d.mean_sample_size);
    fmt::print(out, "mean_seeds,{:.6f}\n", d.mean_seeds);
    fmt::print(out, "mean_recruitment_edges,{:.6f}\n", d.mean_recruitment_edges);
    fmt::print(out, "mean_sample_edges,{:.6f}\n", d.mean_sample_edges);
    fmt::print(out, "mean_induced_edges,{:.6f}\n", d.mean_induced_edges);
    fmt::print(out, "traced_fraction,{:.6f}\n", d.traced_fraction);
    fmt::print(out, "mean_chain_size,{:.6f}\n", d.mean_chain_size);
    fmt::print(out, "undersized,{}\n", d.undersized);
    fmt::print(out, "empty,{}\n", d.empty);
    fmt::print(out, "floored,{}\n", d.floored);
    fmt::print(out, "vh_excluded,{}\n", d.vh_excluded);
}

void write_evaluation(const std::string &dir, const EvalSummary &summary) {
    std::filesystem::create_directories(dir);
    auto open = [&](const std::string &name) {
        std::ofstream f(std::filesystem::path(dir) / name);
        if (!f) throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
        return f;
    };
    for (const auto &d : summary.designs) {
        {
            auto f = open("summary_" + d.label + ".csv");
            write_summary_csv(f, d);
        }
        {
            auto f = open("coverage_" + d.label + ".csv");
            write_coverage_csv(f, d);
        }
        {
            auto f = open("coverage_variance_" + d.label + ".csv");
            write_coverage_variants_csv(f, d);
        }
        {
            auto f = open("replicates_" + d.label + ".csv");
            write_replicates_csv(f, d);
        }
        {
            auto f = open("diagnostics_" + d.label + ".csv");
            write_diagnostics_csv(f, d);
        }
    }
}

}  // namespace netsamp
