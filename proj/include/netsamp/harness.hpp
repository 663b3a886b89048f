#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netsamp/design.hpp"
#include "netsamp/estimators.hpp"
#include "netsamp/fastproc.hpp"
#include "netsamp/graph.hpp"

namespace netsamp {

/// Name of the variable that is always available: population degree d_i.
inline constexpr const char *kDegreeVariable = "degree";

struct LabeledDesign {
    std::string label;
    DesignConfig config;
};

struct EvalConfig {
    std::vector<LabeledDesign> designs;
    FastConfig fast;
    std::size_t replicates = 1000;
    /// Empty means "degree" followed by every attribute column.
    std::vector<std::string> variables;
    double alpha = 0.05;
    VarianceMethod ci_variance = VarianceMethod::simple;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;

    void validate(const AttributeTable &attrs) const;
    /// Resolved variable list.
    std::vector<std::string> variable_names(const AttributeTable &attrs) const;
};

/// One estimator's output for one variable in one sample.
struct MethodResult {
    std::string method;  // SIMPLE, VH, MEAN, WR, or SIMPLE:<variance>
    Estimate estimate;
    bool has_interval = false;
    std::size_t skipped_pairs = 0;
};

/// Estimates for every method on one variable of one sample. The first three
/// entries are always SIMPLE (interval from the configured variance), VH and
/// MEAN; SIMPLE:<variance> entries follow for each variance form computed.
struct VariableResult {
    std::string variable;
    std::vector<MethodResult> methods;

    const MethodResult &find(const std::string &method) const;
};

/// All estimators for all variables of one sample.
struct SampleEstimates {
    std::vector<VariableResult> variables;
    std::size_t vh_excluded = 0;  // degree-0 nodes left out of VH
};

/// Values of a named variable over the sample nodes ("degree" included).
std::vector<double> sample_variable(const SampleNetwork &sample, const std::string &name);
/// Population values of a named variable.
std::vector<double> population_variable(const Network &net, const AttributeTable &attrs, const std::string &name);

/// Runs every estimator on every variable. Uses g (with m_i = 1) when the
/// inclusion stats come from the with-replacement process.
SampleEstimates estimate_sample(const SampleNetwork &sample, const InclusionStats &stats,
                                std::span<const std::string> variables, double alpha, VarianceMethod ci_variance);

struct ReplicateResult {
    std::size_t replicate = 0;
    std::size_t sample_size = 0;
    std::size_t seeds = 0;
    std::size_t recruitment_edges = 0;
    std::size_t sample_edges = 0;
    std::size_t induced_edges = 0;
    bool undersized = false;
    bool empty = false;
    double mean_chain_size = 0.0;
    std::size_t floored = 0;
    SampleEstimates estimates;
};

struct MetricsRow {
    std::string name;
    double actual = 0.0;
    double expected = 0.0;  // E.est
    double bias = 0.0;
    double sd = 0.0;
    double mse = 0.0;
    double eff = 1.0;
    double rbias = 1.0;
};

struct CoverageRow {
    std::string name;
    double actual = 0.0;
    double halfwidth = 0.0;
    double coverage = 0.0;
    double av_sd = 0.0;  // sqrt of the mean variance estimate
};

/// E.est, bias, sd (denominator R) and mse = bias² + sd². eff and rbias are 1.
MetricsRow compute_metrics(std::span<const double> estimates, double truth);
/// Fills eff = mse / reference.mse and rbias = |bias| / |reference.bias|.
void relate_to_reference(MetricsRow &row, const MetricsRow &reference);
/// Fraction of intervals with low <= truth <= high.
double compute_coverage(std::span<const std::pair<double, double>> intervals, double truth);

struct DesignDiagnostics {
    double mean_sample_size = 0.0;
    double mean_seeds = 0.0;
    double mean_recruitment_edges = 0.0;
    double mean_sample_edges = 0.0;
    double mean_induced_edges = 0.0;
    /// Σ recruitment edges / Σ induced within-sample edges over replicates.
    double traced_fraction = 0.0;
    double mean_chain_size = 0.0;
    std::size_t undersized = 0;
    std::size_t empty = 0;
    std::size_t floored = 0;
    std::size_t vh_excluded = 0;
};

struct DesignSummary {
    std::string label;
    std::vector<MetricsRow> simple;
    std::vector<MetricsRow> vh;
    std::vector<MetricsRow> mean;
    std::vector<CoverageRow> coverage;  // configured interval variance
    std::vector<std::pair<std::string, std::vector<CoverageRow>>> coverage_by_variance;
    DesignDiagnostics diagnostics;
    std::vector<ReplicateResult> replicates;
};

struct EvalSummary {
    std::vector<std::string> variables;
    std::vector<double> truth;
    std::vector<DesignSummary> designs;
};

/// Draws one sample, runs the fast process and all estimators. Uses the
/// (master, label, replicate) streams, so the result does not depend on which
/// worker runs it.
ReplicateResult run_replicate(const Network &net, const AttributeTable &attrs, const LabeledDesign &design,
                              const EvalConfig &cfg, std::span<const std::string> variables, std::size_t replicate);

/// Aggregates replicate results into the metric and coverage tables.
DesignSummary summarize_design(const std::string &label, std::vector<ReplicateResult> replicates,
                               std::span<const std::string> variables, std::span<const double> truth);

EvalSummary run_evaluation(const Network &net, const AttributeTable &attrs, const EvalConfig &cfg);

/// summary_<label>.csv: method,name,actual,E.est,bias,sd,mse,eff,rbias.
void write_summary_csv(std::ostream &out, const DesignSummary &summary);
/// coverage_<label>.csv: name,actual,halfwidth,coverage.
void write_coverage_csv(std::ostream &out, const DesignSummary &summary);
/// coverage_variance_<label>.csv: variance,name,actual,halfwidth,av_sd,coverage.
void write_coverage_variants_csv(std::ostream &out, const DesignSummary &summary);
/// replicates_<label>.csv: replicate_id,variable,method,estimate,ci_low,ci_high,flags.
void write_replicates_csv(std::ostream &out, const DesignSummary &summary);
/// diagnostics_<label>.csv: key,value.
void write_diagnostics_csv(std::ostream &out, const DesignSummary &summary);
/// Writes all of the above for every design into dir.
void write_evaluation(const std::string &dir, const EvalSummary &summary);

}  // namespace netsamp
