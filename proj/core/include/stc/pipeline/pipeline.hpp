#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stc/common/matrix.hpp"
#include "stc/corpus/labels.hpp"
#include "stc/metrics/metrics.hpp"
#include "stc/pipeline/config.hpp"

namespace stc::pipeline {

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
  metrics::MetricSummary metrics;
  std::size_t samples = 0;
  std::size_t input_dim = 0;
  std::size_t clusters = 0;
  std::string report_json;  // contents of report.json
};

/// Loads inputs named by the config (paths made absolute).
struct PipelineInputs {
  MatrixF features;
  corpus::LabelVector labels;
};
PipelineInputs load_inputs(const PipelineConfig& config);

/// Runs the configured pipeline on in-memory inputs. With a non-empty
/// out_dir it writes:
///   report.json     metric report and effective config
///   config.cfg      effective config, loadable with load_config
///   run_<r>.jsonl   per-epoch training log of each run
///   latent.stce     final representation of run 0
///   model.stck      trained model of run 0 (not for baseline)
RunReport run_pipeline(const PipelineConfig& config, const PipelineInputs& inputs,
                       const std::filesystem::path& out_dir);

/// Validates the config, loads inputs, runs.
RunReport run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir);

enum class SweepAxis { epochs, layer_spec };
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepCell {
  std::string value;
  bool ok = false;
  std::string error;
  metrics::MetricSummary metrics;
};

struct SweepTable {
  std::vector<SweepCell> cells;
  std::string csv;  // header value,acc_mean,acc_std,nmi_mean,nmi_std
};

/// Config key a sweep axis varies for the configured pipeline.
std::string sweep_key(PipelineKind pipeline, SweepAxis axis);

/// One run_pipeline per value in out_dir/cell_<i>. Failed cells are kept
/// with NaN metrics and their error message; the sweep continues.
SweepTable run_sweep(const PipelineConfig& config, SweepAxis axis, const std::vector<std::string>& values,
                     const std::filesystem::path& out_dir);

}  // namespace stc::pipeline
