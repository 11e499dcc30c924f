// stc: command-line entry point for the short-text clustering pipelines.
//
//   stc run --config exp.cfg --out results/ [--set key=value ...] [--seed N]
//   stc sweep --config exp.cfg --axis epochs --values 5,15 --out sweep/
//   stc export-graph --embeddings emb.stce --k 10 --out edges.txt
//   stc inspect-embeddings emb.stce
//
// Exit codes: 0 ok, 1 usage, 2 invalid config, 3 training diverged, 4 I/O or data error.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stc/common/error.hpp"
#include "stc/corpus/stce_io.hpp"
#include "stc/graph/text_graph.hpp"
#include "stc/pipeline/config.hpp"
#include "stc/pipeline/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value experiment file");
  cmd->add_option("--set", opts.overrides, "override a config key (key=value), repeatable");
  cmd->add_option("--out", opts.out_dir, "output directory")->required();
  cmd->add_option("--seed", opts.seed, "base seed (same as --set seed=N)");
}

stc::pipeline::PipelineConfig resolve(const CommonOptions& opts) {
  auto config = opts.config_path.empty() ? stc::pipeline::PipelineConfig{}
                                         : stc::pipeline::load_config(opts.config_path);
  for (const auto& o : opts.overrides) config.apply_override(o);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

int exit_code(stc::ErrorKind kind) {
  switch (kind) {
    case stc::ErrorKind::config:
    case stc::ErrorKind::invalid_argument:
      return 2;
    case stc::ErrorKind::diverged:
      return 3;
    default:
      return 4;
  }
}

std::vector<std::string> split_values(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto piece = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

stc::corpus::EmbeddingMatrix load_any(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  return (ext == ".tsv" || ext == ".txt") ? stc::corpus::read_embeddings_tsv(path)
                                          : stc::corpus::read_embeddings(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-text embedding fine-tuning and clustering"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "run one pipeline and write its report");
  add_common(run, run_opts);

  CommonOptions sweep_opts;
  std::string axis;
  std::vector<std::string> raw_values;
  auto* sweep = app.add_subcommand("sweep", "run one pipeline per value of an axis and write a CSV table");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "epochs or layer_spec")->required();
  sweep->add_option("--values", raw_values, "comma-separated values")->required();

  std::string graph_input;
  std::size_t graph_k = 10;
  std::string graph_out;
  bool blocked = false;
  auto* export_graph = app.add_subcommand("export-graph", "build the KNN text graph and write its edge list");
  export_graph->add_option("--embeddings", graph_input, "STCE or TSV embeddings")->required();
  export_graph->add_option("--k", graph_k, "neighbours per text");
  export_graph->add_option("--out", graph_out, "edge-list file")->required();
  export_graph->add_flag("--blocked", blocked, "do not materialize the n x n similarity matrix");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect-embeddings", "validate an embedding file and print a summary");
  inspect->add_option("path", inspect_path, "STCE or TSV embeddings")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      const auto report = stc::pipeline::run_pipeline(resolve(run_opts), run_opts.out_dir);
      std::cout << report.report_json;
    } else if (*sweep) {
      const auto values = split_values(raw_values);
      const auto table = stc::pipeline::run_sweep(resolve(sweep_opts), stc::pipeline::parse_sweep_axis(axis),
                                                  values, sweep_opts.out_dir);
      std::cout << table.csv;
      for (const auto& cell : table.cells)
        if (!cell.ok) std::cerr << "cell " << cell.value << " failed: " << cell.error << '\n';
    } else if (*export_graph) {
      const auto m = load_any(graph_input).to_matrix<float>();
      const auto graph = blocked ? stc::graph::build_knn_graph_blocked(m, graph_k)
                                 : stc::graph::build_knn_graph(stc::graph::cosine_similarity_matrix(m), graph_k);
      stc::graph::write_edge_list(graph, graph_out);
      std::cout << graph.nodes() << " nodes, " << graph.edge_count() << " edges\n";
    } else if (*inspect) {
      const auto m = load_any(inspect_path);
      double min = m.data()[0], max = m.data()[0], norm_sum = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        double sq = 0.0;
        for (float v : m.row(i)) {
          min = std::min(min, static_cast<double>(v));
          max = std::max(max, static_cast<double>(v));
          sq += static_cast<double>(v) * v;
        }
        norm_sum += std::sqrt(sq);
      }
      nlohmann::ordered_json summary = {{"n", m.rows()},
                                        {"d", m.cols()},
                                        {"has_ids", m.has_ids()},
                                        {"min", min},
                                        {"max", max},
                                        {"mean_row_norm", norm_sum / static_cast<double>(m.rows())}};
      std::cout << summary.dump(2) << '\n';
    }
  } catch (const stc::Error& e) {
    std::cerr << "stc: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "stc: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
