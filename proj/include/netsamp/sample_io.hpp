#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "netsamp/design.hpp"
#include "netsamp/fastproc.hpp"
#include "netsamp/harness.hpp"

namespace netsamp {

/// Writes nodes.csv (id,is_seed,degree,<attributes>) and edges.csv
/// (u,v,is_recruitment) into dir. Ids are dense population ids; when labels
/// is non-empty node_map.csv (id,label) maps them back to input tokens.
void write_sample_dir(const std::string &dir, const SampleNetwork &sample, std::span<const std::string> labels = {});

/// Reads a directory written by write_sample_dir. Seeds come back as
/// EntryKind::seed and parents are not restored.
SampleNetwork read_sample_dir(const std::string &dir);

/// weights.csv (node_id,f[,g]) and pairs.csv (u,v,f_ij), ids as in nodes.csv.
void write_weights_dir(const std::string &dir, const SampleNetwork &sample, const InclusionStats &stats);
InclusionStats read_weights_dir(const std::string &dir, const SampleNetwork &sample);

/// estimate.csv rows: variable,method,estimate,variance,ci_low,ci_high,clamped_flag.
void write_estimates_csv(std::ostream &out, const SampleEstimates &estimates);

}  // namespace netsamp
