#include "stc/pipeline/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "stc/ae/autoencoder.hpp"
#include "stc/common/error.hpp"
#include "stc/corpus/bow.hpp"
#include "stc/corpus/stce_io.hpp"
#include "stc/corpus/word_vectors.hpp"
#include "stc/gae/stn_gae.hpp"
#include "stc/graph/text_graph.hpp"
#include "stc/nn/checkpoint.hpp"
#include "stc/sca/sca.hpp"

namespace stc::pipeline {
namespace {

using json = nlohmann::ordered_json;

struct RunOutcome {
  MatrixF latent;
  std::optional<std::vector<std::size_t>> labels;  // set when the pipeline assigns clusters itself
  std::vector<json> log;
  std::optional<nn::Checkpoint> checkpoint;
};

// Above this many nodes the KNN graph is built without the dense n x n matrix.
constexpr std::size_t kDenseSimilarityLimit = 20000;

RunOutcome train_once(const PipelineConfig& config, const MatrixF& x, std::size_t k, std::uint64_t seed,
                      const corpus::LabelVector& truth) {
  RunOutcome out;
  const auto dim = static_cast<std::size_t>(x.cols());
  switch (config.pipeline) {
    case PipelineKind::baseline:
      out.latent = x;
      break;

    case PipelineKind::ae: {
      auto spec = nn::NetworkSpec::parse(config.ae_layers, dim);
      spec.tied_decoder = config.ae_tied;
      const auto trained = ae::train_autoencoder(
          x, spec, {config.ae_epochs, config.ae_batch_size, config.ae_lr, seed});
      for (std::size_t e = 0; e < trained.loss_history.size(); ++e)
        out.log.push_back({{"phase", "pretrain"}, {"epoch", e}, {"loss", trained.loss_history[e]}});
      out.latent = ae::encode(trained.model, x);
      out.checkpoint = trained.model.to_checkpoint();
      break;
    }

    case PipelineKind::stn_gae: {
      require(config.gae_neighbors < static_cast<std::size_t>(x.rows()), ErrorKind::config,
              "gae.neighbors must be smaller than the number of texts");
      const auto graph = static_cast<std::size_t>(x.rows()) <= kDenseSimilarityLimit
                             ? graph::build_knn_graph(graph::cosine_similarity_matrix(x), config.gae_neighbors)
                             : graph::build_knn_graph_blocked(x, config.gae_neighbors);
      const auto spec = nn::NetworkSpec::parse(config.gae_layers, dim);
      const auto trained = gae::train_stn_gae(
          x, graph, spec, {config.gae_epochs, config.gae_lr, config.gae_neg_ratio, seed});
      for (std::size_t e = 0; e < trained.loss_history.size(); ++e)
        out.log.push_back({{"phase", "gae"}, {"epoch", e}, {"loss", trained.loss_history[e]}});
      out.latent = trained.latent;
      out.checkpoint = trained.model.to_checkpoint();
      break;
    }

    case PipelineKind::sca_ae: {
      const auto spec = nn::NetworkSpec::parse(config.sca_layers, dim);
      const auto pretrained = ae::train_autoencoder(
          x, spec, {config.sca_pretrain_epochs, config.sca_batch_size, config.sca_pretrain_lr, seed});
      for (std::size_t e = 0; e < pretrained.loss_history.size(); ++e)
        out.log.push_back({{"phase", "pretrain"}, {"epoch", e}, {"loss", pretrained.loss_history[e]}});
      sca::FinetuneConfig fc;
      fc.k = k;
      fc.learning_rate = config.sca_lr;
      fc.momentum = config.sca_momentum;
      fc.batch_size = config.sca_batch_size;
      fc.max_epochs = config.sca_max_epochs;
      fc.tol = config.sca_tol;
      fc.kmeans_restarts = config.kmeans_restarts;
      fc.seed = seed;
      auto tuned = sca::finetune_sca(pretrained.model, x, fc, &truth);
      for (const auto& entry : tuned.history) {
        json line = {{"phase", "finetune"},
                     {"epoch", entry.epoch},
                     {"kl_loss", entry.kl_loss},
                     {"label_change_fraction", entry.label_change_fraction}};
        if (entry.acc) line["acc"] = *entry.acc;
        if (entry.nmi) line["nmi"] = *entry.nmi;
        out.log.push_back(std::move(line));
      }
      out.log.push_back({{"phase", "finetune_end"},
                         {"converged", tuned.converged},
                         {"empty_cluster_warnings", tuned.empty_cluster_warnings}});
      out.latent = tuned.latent;
      out.labels = std::move(tuned.labels);
      auto checkpoint = tuned.model.to_checkpoint();
      checkpoint.tensors.emplace_back("centers", tuned.centers);
      out.checkpoint = std::move(checkpoint);
      break;
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << text;
  require(static_cast<bool>(out), ErrorKind::io, "write to " + path.string() + " failed");
}

void write_log(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::string text;
  for (const auto& line : lines) text += line.dump() + "\n";
  write_text(path, text);
}

std::string absolute_or_empty(const std::string& path) {
  return path.empty() ? path : std::filesystem::absolute(path).lexically_normal().string();
}

}  // namespace

PipelineInputs load_inputs(const PipelineConfig& config) {
  PipelineInputs inputs{MatrixF(), corpus::read_labels(config.labels)};
  switch (config.features) {
    case FeatureSource::embeddings: {
      const std::filesystem::path path(config.embeddings);
      const auto ext = path.extension().string();
      const auto m = (ext == ".tsv" || ext == ".txt") ? corpus::read_embeddings_tsv(path)
                                                      : corpus::read_embeddings(path);
      inputs.features = m.to_matrix<float>();
      break;
    }
    case FeatureSource::bow_tfidf:
    case FeatureSource::bow_binary: {
      const auto weighting = config.features == FeatureSource::bow_tfidf ? corpus::BowWeighting::tfidf
                                                                         : corpus::BowWeighting::binary;
      inputs.features = corpus::bow_features(corpus::read_corpus(config.corpus), weighting).features.to_matrix<float>();
      break;
    }
    case FeatureSource::w2v: {
      const auto table = corpus::read_word_vectors(config.word_vectors);
      inputs.features =
          corpus::average_word_vectors(corpus::read_corpus(config.corpus), table, config.oov_seed).features.to_matrix<float>();
      break;
    }
  }
  require(static_cast<std::size_t>(inputs.features.rows()) == inputs.labels.size(), ErrorKind::shape_mismatch,
          "feature rows (" + std::to_string(inputs.features.rows()) + ") and labels (" +
              std::to_string(inputs.labels.size()) + ") differ");
  return inputs;
}

RunReport run_pipeline(const PipelineConfig& config, const PipelineInputs& inputs,
                       const std::filesystem::path& out_dir) {
  config.validate_settings();
  require(inputs.features.rows() >= 1 && inputs.features.allFinite(), ErrorKind::non_finite,
          "features are empty or non-finite");
  require(static_cast<std::size_t>(inputs.features.rows()) == inputs.labels.size(), ErrorKind::shape_mismatch,
          "feature rows and labels differ");
  const std::size_t k = config.k != 0 ? config.k : inputs.labels.k();
  require(k >= 1 && k <= static_cast<std::size_t>(inputs.features.rows()), ErrorKind::config,
          "k must be between 1 and the number of texts");
  require(config.pipeline != PipelineKind::sca_ae || k >= 2, ErrorKind::config, "sca_ae needs k >= 2");

  const MatrixF x = config.standardize ? ae::standardize_columns(inputs.features) : inputs.features;
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  metrics::KMeansConfig km;
  km.restarts = config.kmeans_restarts;
  km.max_iters = config.kmeans_max_iters;
  km.tol = config.kmeans_tol;

  std::vector<double> acc, nmi_values;
  std::vector<std::uint64_t> seeds;
  auto score = [&](const std::vector<std::size_t>& predicted, std::uint64_t seed) {
    const corpus::LabelVector pred{std::span<const std::size_t>(predicted)};
    acc.push_back(metrics::clustering_accuracy(inputs.labels, pred));
    nmi_values.push_back(metrics::nmi(inputs.labels, pred, config.nmi));
    seeds.push_back(seed);
  };
  auto cluster = [&](const MatrixF& z, std::uint64_t seed) {
    km.k = k;
    km.seed = seed;
    return metrics::kmeans(z.cast<double>(), km).labels;
  };
  auto persist = [&](const RunOutcome& outcome, int run) {
    if (out_dir.empty()) return;
    write_log(out_dir / ("run_" + std::to_string(run) + ".jsonl"), outcome.log);
    if (run != 0) return;
    corpus::write_embeddings(corpus::EmbeddingMatrix::from_eigen(outcome.latent), out_dir / "latent.stce");
    if (outcome.checkpoint) nn::write_checkpoint(*outcome.checkpoint, out_dir / "model.stck");
  };

  if (config.rerun == RerunMode::full) {
    for (int r = 0; r < config.runs; ++r) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
      const RunOutcome outcome = train_once(config, x, k, seed, inputs.labels);
      score(outcome.labels ? *outcome.labels : cluster(outcome.latent, seed), seed);
      persist(outcome, r);
    }
  } else {
    const RunOutcome outcome = train_once(config, x, k, config.seed, inputs.labels);
    persist(outcome, 0);
    for (int r = 0; r < config.runs; ++r) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
      score(cluster(outcome.latent, seed), seed);
    }
  }

  RunReport report;
  report.metrics = metrics::summarize(std::move(acc), std::move(nmi_values), std::move(seeds));
  report.samples = static_cast<std::size_t>(x.rows());
  report.input_dim = static_cast<std::size_t>(x.cols());
  report.clusters = k;

  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["pipeline"] = to_string(config.pipeline);
  doc["n"] = report.samples;
  doc["d"] = report.input_dim;
  doc["k"] = k;
  doc["acc_mean"] = report.metrics.acc_mean;
  doc["acc_std"] = report.metrics.acc_std;
  doc["nmi_mean"] = report.metrics.nmi_mean;
  doc["nmi_std"] = report.metrics.nmi_std;
  doc["runs"] = report.metrics.runs();
  doc["seeds"] = report.metrics.seeds;
  json per_run = json::array();
  for (std::size_t r = 0; r < report.metrics.runs(); ++r)
    per_run.push_back({{"seed", report.metrics.seeds[r]}, {"acc", report.metrics.acc[r]}, {"nmi", report.metrics.nmi[r]}});
  doc["per_run"] = std::move(per_run);
  json effective = json::object();
  for (const auto& [key, value] : config.entries()) effective[key] = value;
  doc["config"] = std::move(effective);
  report.report_json = doc.dump(2) + "\n";

  if (!out_dir.empty()) {
    write_text(out_dir / "report.json", report.report_json);
    write_text(out_dir / "config.cfg", config.to_text());
  }
  return report;
}

RunReport run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir) {
  PipelineConfig effective = config;
  effective.embeddings = absolute_or_empty(config.embeddings);
  effective.corpus = absolute_or_empty(config.corpus);
  effective.word_vectors = absolute_or_empty(config.word_vectors);
  effective.labels = absolute_or_empty(config.labels);
  effective.validate();
  return run_pipeline(effective, load_inputs(effective), out_dir);
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "epochs") return SweepAxis::epochs;
  if (name == "layer_spec" || name == "layers") return SweepAxis::layer_spec;
  fail(ErrorKind::config, "unknown sweep axis '" + name + "' (expected epochs or layer_spec)");
}

std::string sweep_key(PipelineKind pipeline, SweepAxis axis) {
  const bool epochs = axis == SweepAxis::epochs;
  switch (pipeline) {
    case PipelineKind::ae: return epochs ? "ae.epochs" : "ae.layers";
    case PipelineKind::stn_gae: return epochs ? "gae.epochs" : "gae.layers";
    case PipelineKind::sca_ae: return epochs ? "sca.pretrain_epochs" : "sca.layers";
    case PipelineKind::baseline: break;
  }
  fail(ErrorKind::config, "the baseline pipeline has nothing to sweep");
}

SweepTable run_sweep(const PipelineConfig& config, SweepAxis axis, const std::vector<std::string>& values,
                     const std::filesystem::path& out_dir) {
  require(!values.empty(), ErrorKind::config, "sweep needs at least one value");
  const std::string key = sweep_key(config.pipeline, axis);
  // Surface bad values before any training starts.
  for (const auto& value : values) {
    PipelineConfig probe = config;
    probe.set(key, value);
    probe.validate_settings();
  }

  SweepTable table;
  std::ostringstream csv;
  csv.precision(17);
  csv << "value,acc_mean,acc_std,nmi_mean,nmi_std\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepCell cell;
    cell.value = values[i];
    try {
      PipelineConfig cell_config = config;
      cell_config.set(key, values[i]);
      const auto cell_dir = out_dir.empty() ? out_dir : out_dir / ("cell_" + std::to_string(i));
      cell.metrics = run_pipeline(cell_config, cell_dir).metrics;
      cell.ok = true;
    } catch (const Error& e) {
      cell.error = e.what();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      cell.metrics.acc_mean = cell.metrics.acc_std = cell.metrics.nmi_mean = cell.metrics.nmi_std = nan;
    }
    const auto& m = cell.metrics;
    csv << cell.value << ',' << m.acc_mean << ',' << m.acc_std << ',' << m.nmi_mean << ',' << m.nmi_std << '\n';
    table.cells.push_back(std::move(cell));
  }
  table.csv = csv.str();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir / "sweep.csv", table.csv);
  }
  return table;
}

}  // namespace stc::pipeline
