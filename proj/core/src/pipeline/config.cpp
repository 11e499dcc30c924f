#include "stc/pipeline/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "stc/common/error.hpp"
#include "stc/nn/network.hpp"

namespace stc::pipeline {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is not available everywhere; strtod is enough.
    char* stop = nullptr;
    const double v = std::strtod(value.c_str(), &stop);
    require(!value.empty() && stop == value.c_str() + value.size() && std::isfinite(v), ErrorKind::config,
            "'" + key + "' expects a number, got '" + value + "'");
    out = static_cast<T>(v);
  } else {
    auto [ptr, ec] = std::from_chars(begin, end, out);
    require(ec == std::errc() && ptr == end && !value.empty(), ErrorKind::config,
            "'" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorKind::config, "'" + key + "' expects true/false, got '" + value + "'");
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  // Prefer the shortest text that round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream candidate;
    candidate.precision(p);
    candidate << v;
    if (std::strtod(candidate.str().c_str(), nullptr) == v) return candidate.str();
  }
  return out.str();
}

std::string nmi_name(metrics::NmiNormalization n) {
  switch (n) {
    case metrics::NmiNormalization::geometric: return "geometric";
    case metrics::NmiNormalization::arithmetic: return "arithmetic";
    case metrics::NmiNormalization::min: return "min";
    case metrics::NmiNormalization::max: return "max";
  }
  return "geometric";
}

void check_layers(const std::string& key, const std::string& text) {
  try {
    const auto spec = nn::NetworkSpec::parse(text, 1000000);
    require(spec.layer_sizes.front() == 1000000, ErrorKind::config,
            "'" + key + "' must start with 'd' (the input dimension)");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    fail(ErrorKind::config, "'" + key + "': " + e.what());
  }
}

}  // namespace

std::string to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::baseline: return "baseline";
    case PipelineKind::ae: return "ae";
    case PipelineKind::stn_gae: return "stn_gae";
    case PipelineKind::sca_ae: return "sca_ae";
  }
  return "baseline";
}

std::string to_string(FeatureSource source) {
  switch (source) {
    case FeatureSource::embeddings: return "embeddings";
    case FeatureSource::bow_tfidf: return "bow_tfidf";
    case FeatureSource::bow_binary: return "bow_binary";
    case FeatureSource::w2v: return "w2v";
  }
  return "embeddings";
}

void PipelineConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"pipeline",
       [&](const std::string& v) {
         if (v == "baseline") pipeline = PipelineKind::baseline;
         else if (v == "ae") pipeline = PipelineKind::ae;
         else if (v == "stn_gae") pipeline = PipelineKind::stn_gae;
         else if (v == "sca_ae") pipeline = PipelineKind::sca_ae;
         else fail(ErrorKind::config, "unknown pipeline '" + v + "'");
       }},
      {"features",
       [&](const std::string& v) {
         if (v == "embeddings") features = FeatureSource::embeddings;
         else if (v == "bow_tfidf" || v == "bow") features = FeatureSource::bow_tfidf;
         else if (v == "bow_binary") features = FeatureSource::bow_binary;
         else if (v == "w2v") features = FeatureSource::w2v;
         else fail(ErrorKind::config, "unknown feature source '" + v + "'");
       }},
      {"embeddings", [&](const std::string& v) { embeddings = v; }},
      {"corpus", [&](const std::string& v) { corpus = v; }},
      {"word_vectors", [&](const std::string& v) { word_vectors = v; }},
      {"labels", [&](const std::string& v) { labels = v; }},
      {"oov_seed", [&](const std::string& v) { oov_seed = parse_number<std::uint64_t>(key, v); }},
      {"standardize", [&](const std::string& v) { standardize = parse_bool(key, v); }},
      {"k", [&](const std::string& v) { k = parse_number<std::size_t>(key, v); }},
      {"runs", [&](const std::string& v) { runs = parse_number<int>(key, v); }},
      {"seed", [&](const std::string& v) { seed = parse_number<std::uint64_t>(key, v); }},
      {"rerun",
       [&](const std::string& v) {
         if (v == "full") rerun = RerunMode::full;
         else if (v == "kmeans_only") rerun = RerunMode::kmeans_only;
         else fail(ErrorKind::config, "rerun must be full or kmeans_only");
       }},
      {"kmeans.restarts", [&](const std::string& v) { kmeans_restarts = parse_number<int>(key, v); }},
      {"kmeans.max_iters", [&](const std::string& v) { kmeans_max_iters = parse_number<int>(key, v); }},
      {"kmeans.tol", [&](const std::string& v) { kmeans_tol = parse_number<double>(key, v); }},
      {"nmi",
       [&](const std::string& v) {
         if (v == "geometric") nmi = metrics::NmiNormalization::geometric;
         else if (v == "arithmetic") nmi = metrics::NmiNormalization::arithmetic;
         else if (v == "min") nmi = metrics::NmiNormalization::min;
         else if (v == "max") nmi = metrics::NmiNormalization::max;
         else fail(ErrorKind::config, "unknown NMI normalization '" + v + "'");
       }},
      {"ae.layers", [&](const std::string& v) { check_layers(key, v); ae_layers = v; }},
      {"ae.epochs", [&](const std::string& v) { ae_epochs = parse_number<int>(key, v); }},
      {"ae.lr", [&](const std::string& v) { ae_lr = parse_number<double>(key, v); }},
      {"ae.batch_size", [&](const std::string& v) { ae_batch_size = parse_number<int>(key, v); }},
      {"ae.tied", [&](const std::string& v) { ae_tied = parse_bool(key, v); }},
      {"gae.layers", [&](const std::string& v) { check_layers(key, v); gae_layers = v; }},
      {"gae.epochs", [&](const std::string& v) { gae_epochs = parse_number<int>(key, v); }},
      {"gae.lr", [&](const std::string& v) { gae_lr = parse_number<double>(key, v); }},
      {"gae.neighbors", [&](const std::string& v) { gae_neighbors = parse_number<std::size_t>(key, v); }},
      {"gae.neg_ratio", [&](const std::string& v) { gae_neg_ratio = parse_number<double>(key, v); }},
      {"sca.layers", [&](const std::string& v) { check_layers(key, v); sca_layers = v; }},
      {"sca.pretrain_epochs", [&](const std::string& v) { sca_pretrain_epochs = parse_number<int>(key, v); }},
      {"sca.pretrain_lr", [&](const std::string& v) { sca_pretrain_lr = parse_number<double>(key, v); }},
      {"sca.lr", [&](const std::string& v) { sca_lr = parse_number<double>(key, v); }},
      {"sca.momentum", [&](const std::string& v) { sca_momentum = parse_number<double>(key, v); }},
      {"sca.batch_size", [&](const std::string& v) { sca_batch_size = parse_number<int>(key, v); }},
      {"sca.max_epochs", [&](const std::string& v) { sca_max_epochs = parse_number<int>(key, v); }},
      {"sca.tol", [&](const std::string& v) { sca_tol = parse_number<double>(key, v); }},
  };
  const auto it = setters.find(key);
  require(it != setters.end(), ErrorKind::config, "unknown config key '" + key + "'");
  it->second(value);
}

void PipelineConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos, ErrorKind::config, "override '" + assignment + "' is not key=value");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  return {
      {"pipeline", to_string(pipeline)},
      {"features", to_string(features)},
      {"embeddings", embeddings},
      {"corpus", corpus},
      {"word_vectors", word_vectors},
      {"labels", labels},
      {"oov_seed", std::to_string(oov_seed)},
      {"standardize", standardize ? "true" : "false"},
      {"k", std::to_string(k)},
      {"runs", std::to_string(runs)},
      {"seed", std::to_string(seed)},
      {"rerun", rerun == RerunMode::full ? "full" : "kmeans_only"},
      {"kmeans.restarts", std::to_string(kmeans_restarts)},
      {"kmeans.max_iters", std::to_string(kmeans_max_iters)},
      {"kmeans.tol", format_double(kmeans_tol)},
      {"nmi", nmi_name(nmi)},
      {"ae.layers", ae_layers},
      {"ae.epochs", std::to_string(ae_epochs)},
      {"ae.lr", format_double(ae_lr)},
      {"ae.batch_size", std::to_string(ae_batch_size)},
      {"ae.tied", ae_tied ? "true" : "false"},
      {"gae.layers", gae_layers},
      {"gae.epochs", std::to_string(gae_epochs)},
      {"gae.lr", format_double(gae_lr)},
      {"gae.neighbors", std::to_string(gae_neighbors)},
      {"gae.neg_ratio", format_double(gae_neg_ratio)},
      {"sca.layers", sca_layers},
      {"sca.pretrain_epochs", std::to_string(sca_pretrain_epochs)},
      {"sca.pretrain_lr", format_double(sca_pretrain_lr)},
      {"sca.lr", format_double(sca_lr)},
      {"sca.momentum", format_double(sca_momentum)},
      {"sca.batch_size", std::to_string(sca_batch_size)},
      {"sca.max_epochs", std::to_string(sca_max_epochs)},
      {"sca.tol", format_double(sca_tol)},
  };
}

std::string PipelineConfig::to_text() const {
  std::string out;
  for (const auto& [key, value] : entries()) {
    if (value.empty()) continue;
    out += key + " = " + value + "\n";
  }
  return out;
}

void PipelineConfig::validate_settings() const {
  auto check = [](bool ok, const std::string& message) { require(ok, ErrorKind::config, message); };
  check(runs >= 1, "runs must be >= 1");
  check(k == 0 || k >= 1, "k must be positive");
  check(kmeans_restarts >= 1 && kmeans_max_iters >= 1 && kmeans_tol >= 0.0, "k-means settings out of range");
  check(ae_epochs >= 1 && ae_batch_size >= 1 && ae_lr > 0.0, "ae settings out of range");
  check(gae_epochs >= 0 && gae_lr > 0.0 && gae_neighbors >= 1 && gae_neg_ratio >= 0.0,
        "gae settings out of range");
  check(sca_pretrain_epochs >= 1 && sca_pretrain_lr > 0.0 && sca_lr > 0.0 && sca_momentum >= 0.0 &&
            sca_momentum < 1.0 && sca_batch_size >= 1 && sca_max_epochs >= 1 && sca_tol >= 0.0,
        "sca settings out of range");
  check_layers("ae.layers", ae_layers);
  check_layers("gae.layers", gae_layers);
  check_layers("sca.layers", sca_layers);
}

void PipelineConfig::validate() const {
  validate_settings();
  auto check = [](bool ok, const std::string& message) { require(ok, ErrorKind::config, message); };
  auto need_file = [&](const std::string& key, const std::string& path) {
    check(!path.empty(), "'" + key + "' is required for this pipeline");
    check(std::filesystem::is_regular_file(path), "'" + key + "' file does not exist: " + path);
  };
  need_file("labels", labels);
  switch (features) {
    case FeatureSource::embeddings: need_file("embeddings", embeddings); break;
    case FeatureSource::bow_tfidf:
    case FeatureSource::bow_binary: need_file("corpus", corpus); break;
    case FeatureSource::w2v:
      need_file("corpus", corpus);
      need_file("word_vectors", word_vectors);
      break;
  }
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::config,
            "config line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const bool is_path = key == "embeddings" || key == "corpus" || key == "word_vectors" || key == "labels";
    if (is_path && !value.empty() && !base_dir.empty() && std::filesystem::path(value).is_relative())
      value = (base_dir / value).lexically_normal().string();
    config.set(key, value);
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::config, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

}  // namespace stc::pipeline
