#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stc/metrics/metrics.hpp"

namespace stc::pipeline {

enum class PipelineKind { baseline, ae, stn_gae, sca_ae };
enum class FeatureSource { embeddings, bow_tfidf, bow_binary, w2v };
/// full: every run retrains with seed base_seed + r.
/// kmeans_only: train once with base_seed, re-seed only k-means.
enum class RerunMode { full, kmeans_only };

/// Every experiment setting, with defaults matching the reference setup:
/// AE d:500:500:2000:10 (lr 0.001), SCA-AE d:500:500:2000:20 (15 pretrain
/// epochs, SGD lr 0.01 momentum 0.9, batch 64), STN-GAE d:64:32 (300 epochs,
/// lr 0.002, K = 10), five runs.
struct PipelineConfig {
  PipelineKind pipeline = PipelineKind::baseline;

  FeatureSource features = FeatureSource::embeddings;
  std::string embeddings;   // STCE (or .tsv/.txt) path
  std::string corpus;       // one text per line
  std::string word_vectors; // text word-vector table
  std::string labels;       // one integer per line
  std::uint64_t oov_seed = 0;
  bool standardize = false;

  std::size_t k = 0;  // 0: number of distinct ground-truth labels
  int runs = 5;
  std::uint64_t seed = 0;
  RerunMode rerun = RerunMode::full;

  int kmeans_restarts = 10;
  int kmeans_max_iters = 300;
  double kmeans_tol = 1e-4;
  metrics::NmiNormalization nmi = metrics::NmiNormalization::geometric;

  std::string ae_layers = "d:500:500:2000:10";
  int ae_epochs = 15;
  double ae_lr = 0.001;
  int ae_batch_size = 64;
  bool ae_tied = false;

  std::string gae_layers = "d:64:32";
  int gae_epochs = 300;
  double gae_lr = 0.002;
  std::size_t gae_neighbors = 10;
  double gae_neg_ratio = 1.0;

  std::string sca_layers = "d:500:500:2000:20";
  int sca_pretrain_epochs = 15;
  double sca_pretrain_lr = 0.001;
  double sca_lr = 0.01;
  double sca_momentum = 0.9;
  int sca_batch_size = 64;
  int sca_max_epochs = 100;
  double sca_tol = 0.001;

  /// Sets one key from its text form; unknown keys and bad values throw
  /// ErrorKind::config.
  void set(const std::string& key, const std::string& value);
  /// "key=value" form used by --set.
  void apply_override(const std::string& assignment);

  /// Effective settings in a fixed key order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_text() const;

  /// Hyperparameter ranges only.
  void validate_settings() const;
  /// validate_settings plus pipeline-required inputs and file existence.
  void validate() const;
};

/// "key = value" lines; '#' starts a comment. Relative paths are resolved
/// against the file's directory.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

std::string to_string(PipelineKind kind);
std::string to_string(FeatureSource source);

}  // namespace stc::pipeline
