#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stc/common/error.hpp"
#include "stc/corpus/labels.hpp"
#include "stc/corpus/stce_io.hpp"
#include "stc/pipeline/config.hpp"
#include "stc/pipeline/pipeline.hpp"
#include "stc/pipeline/synthetic.hpp"

namespace stc::pipeline {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = STC_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stc_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  /// Three separated blobs written as STCE + labels, for file-driven runs.
  PipelineConfig blob_config(std::size_t n = 90) {
    BlobSpec spec;
    spec.n = n;
    spec.dim = 24;
    spec.clusters = 3;
    spec.signal_dim = 4;
    spec.center_scale = 3.0;
    spec.signal_noise = 0.3;
    spec.seed = 5;
    const auto data = gaussian_blobs(spec);
    corpus::write_embeddings(corpus::EmbeddingMatrix::from_eigen(data.x), dir_ / "blobs.stce");
    corpus::write_labels(data.labels, dir_ / "blobs_labels.txt");
    PipelineConfig c;
    c.embeddings = (dir_ / "blobs.stce").string();
    c.labels = (dir_ / "blobs_labels.txt").string();
    c.runs = 2;
    c.ae_layers = "d:16:3";
    c.ae_epochs = 10;
    c.sca_layers = "d:16:3";
    c.sca_pretrain_epochs = 10;
    c.sca_max_epochs = 5;
    c.gae_layers = "d:8:4";
    c.gae_epochs = 20;
    c.gae_neighbors = 5;
    return c;
  }

  fs::path dir_;
};

TEST(Config, DefaultsMirrorTheReferenceSetup) {
  const PipelineConfig c;
  EXPECT_EQ(c.ae_layers, "d:500:500:2000:10");
  EXPECT_EQ(c.sca_layers, "d:500:500:2000:20");
  EXPECT_EQ(c.gae_layers, "d:64:32");
  EXPECT_EQ(c.gae_epochs, 300);
  EXPECT_DOUBLE_EQ(c.gae_lr, 0.002);
  EXPECT_EQ(c.gae_neighbors, 10u);
  EXPECT_EQ(c.sca_pretrain_epochs, 15);
  EXPECT_DOUBLE_EQ(c.sca_pretrain_lr, 0.001);
  EXPECT_DOUBLE_EQ(c.sca_lr, 0.01);
  EXPECT_DOUBLE_EQ(c.sca_momentum, 0.9);
  EXPECT_EQ(c.runs, 5);
}

TEST(Config, ParsesCommentsOverridesAndRejectsUnknownKeys) {
  auto c = parse_config("# comment\npipeline = ae  # trailing\nae.epochs=3\n\nseed = 12\n");
  EXPECT_EQ(c.pipeline, PipelineKind::ae);
  EXPECT_EQ(c.ae_epochs, 3);
  EXPECT_EQ(c.seed, 12u);
  c.apply_override("ae.lr=0.05");
  EXPECT_DOUBLE_EQ(c.ae_lr, 0.05);
  auto kind = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  EXPECT_EQ(kind([] { parse_config("bogus = 1\n"); }), ErrorKind::config);
  EXPECT_EQ(kind([] { parse_config("runs = many\n"); }), ErrorKind::config);
  EXPECT_EQ(kind([] { parse_config("ae.layers = d:0:4\n"); }), ErrorKind::config);
  EXPECT_EQ(kind([&] { c.apply_override("novalue"); }), ErrorKind::config);
}

TEST(Config, TextRoundTripReproducesEveryEntry) {
  PipelineConfig c;
  c.pipeline = PipelineKind::sca_ae;
  c.sca_layers = "d:256:512:20";
  c.nmi = metrics::NmiNormalization::arithmetic;
  c.kmeans_tol = 1.25e-7;
  c.ae_lr = 0.1 + 0.2;  // not exactly representable in short decimal
  const auto back = parse_config(c.to_text());
  EXPECT_EQ(back.entries(), c.entries());
  EXPECT_EQ(back.ae_lr, c.ae_lr);
}

TEST(Config, ValidationChecksRangesAndFiles) {
  PipelineConfig c;
  c.runs = 0;
  EXPECT_THROW(c.validate_settings(), Error);
  c = PipelineConfig{};
  c.embeddings = "/definitely/missing.stce";
  c.labels = "/definitely/missing.txt";
  EXPECT_THROW(c.validate(), Error);
}

TEST(Config, LoadResolvesRelativePaths) {
  const auto c = load_config(kFixtures / "baseline.cfg");
  EXPECT_EQ(fs::path(c.corpus), kFixtures / "toy_corpus.txt");
  EXPECT_NO_THROW(c.validate());
}

TEST_F(PipelineTest, BaselineOnToyCorpus) {
  const auto report = run_pipeline(load_config(kFixtures / "baseline.cfg"), dir_);
  EXPECT_EQ(report.samples, 20u);
  EXPECT_EQ(report.clusters, 2u);
  EXPECT_EQ(report.metrics.runs(), 3u);
  for (double a : report.metrics.acc) {
    EXPECT_GE(a, 0.5);
    EXPECT_LE(a, 1.0);
  }
  const auto doc = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(doc["seeds"], nlohmann::json::array({7, 8, 9}));
  for (const char* key : {"acc_mean", "nmi_mean"}) {
    EXPECT_GE(doc[key].get<double>(), 0.0);
    EXPECT_LE(doc[key].get<double>(), 1.0);
  }
  EXPECT_GE(doc["acc_std"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir_ / "config.cfg"));
  EXPECT_TRUE(fs::exists(dir_ / "latent.stce"));
}

TEST_F(PipelineTest, EffectiveConfigReproducesTheRun) {
  auto config = blob_config();
  config.pipeline = PipelineKind::ae;
  const auto first = run_pipeline(config, dir_ / "a");
  const auto replay = run_pipeline(load_config(dir_ / "a" / "config.cfg"), dir_ / "b");
  EXPECT_EQ(first.report_json, replay.report_json);
}

TEST_F(PipelineTest, ReportsAreByteIdenticalAcrossRuns) {
  for (auto kind : {PipelineKind::baseline, PipelineKind::ae, PipelineKind::stn_gae, PipelineKind::sca_ae}) {
    auto config = blob_config();
    config.pipeline = kind;
    run_pipeline(config, dir_ / "x");
    run_pipeline(config, dir_ / "y");
    EXPECT_EQ(slurp(dir_ / "x" / "report.json"), slurp(dir_ / "y" / "report.json")) << to_string(kind);
    EXPECT_EQ(slurp(dir_ / "x" / "run_0.jsonl"), slurp(dir_ / "y" / "run_0.jsonl")) << to_string(kind);
    EXPECT_EQ(slurp(dir_ / "x" / "latent.stce"), slurp(dir_ / "y" / "latent.stce")) << to_string(kind);
  }
}

TEST_F(PipelineTest, KmeansOnlyRerunTrainsOnce) {
  auto config = blob_config();
  config.pipeline = PipelineKind::ae;
  config.rerun = RerunMode::kmeans_only;
  config.runs = 3;
  run_pipeline(config, dir_);
  EXPECT_TRUE(fs::exists(dir_ / "run_0.jsonl"));
  EXPECT_FALSE(fs::exists(dir_ / "run_1.jsonl"));
}

TEST_F(PipelineTest, ScaDoesNotTrailAeOnSeparatedBlobs) {
  auto config = blob_config(150);
  config.runs = 3;
  config.pipeline = PipelineKind::ae;
  const auto ae = run_pipeline(config, {});
  config.pipeline = PipelineKind::sca_ae;
  const auto sca = run_pipeline(config, {});
  EXPECT_GE(sca.metrics.acc_mean, ae.metrics.acc_mean);
  EXPECT_GE(sca.metrics.nmi_mean, ae.metrics.nmi_mean);
}

TEST_F(PipelineTest, EpochSweepWritesOneRowPerValue) {
  auto config = blob_config();
  config.pipeline = PipelineKind::sca_ae;
  config.runs = 1;
  const auto table = run_sweep(config, SweepAxis::epochs, {"2", "5"}, dir_);
  std::istringstream csv(table.csv);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "value,acc_mean,acc_std,nmi_mean,nmi_std");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(0, 2), "2,");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(0, 2), "5,");
  EXPECT_FALSE(std::getline(csv, line));
  EXPECT_EQ(slurp(dir_ / "sweep.csv"), table.csv);
  EXPECT_EQ(parse_config(slurp(dir_ / "cell_1" / "config.cfg")).sca_pretrain_epochs, 5);
}

TEST_F(PipelineTest, LayerSweepOverTheFourArchitectures) {
  auto config = blob_config(40);
  config.pipeline = PipelineKind::sca_ae;
  config.runs = 1;
  config.sca_pretrain_epochs = 1;
  config.sca_max_epochs = 1;
  const std::vector<std::string> specs{"d:500:500:2000:20", "d:500:2000:500:20", "d:500:2000:20", "d:256:512:20"};
  const auto table = run_sweep(config, SweepAxis::layer_spec, specs, dir_);
  ASSERT_EQ(table.cells.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(table.cells[i].ok) << table.cells[i].error;
    EXPECT_EQ(table.cells[i].value, specs[i]);
  }
  EXPECT_EQ(std::count(table.csv.begin(), table.csv.end(), '\n'), 5);
}

TEST_F(PipelineTest, FailedCellIsRecordedAndSweepContinues) {
  auto config = blob_config();
  config.pipeline = PipelineKind::ae;
  config.runs = 1;
  // 30 is wider than the 24-d input, so that cell cannot build its autoencoder.
  const auto table = run_sweep(config, SweepAxis::layer_spec, {"d:30", "d:8:3"}, dir_);
  EXPECT_FALSE(table.cells[0].ok);
  EXPECT_TRUE(std::isnan(table.cells[0].metrics.acc_mean));
  EXPECT_TRUE(table.cells[1].ok);
}

TEST_F(PipelineTest, SweepRejectsEmptyValuesAndBaselineAxis) {
  auto config = blob_config();
  config.pipeline = PipelineKind::ae;
  EXPECT_THROW(run_sweep(config, SweepAxis::epochs, {}, dir_), Error);
  EXPECT_EQ(sweep_key(PipelineKind::ae, SweepAxis::epochs), "ae.epochs");
  EXPECT_EQ(sweep_key(PipelineKind::sca_ae, SweepAxis::epochs), "sca.pretrain_epochs");
  EXPECT_EQ(sweep_key(PipelineKind::stn_gae, SweepAxis::layer_spec), "gae.layers");
  EXPECT_THROW(sweep_key(PipelineKind::baseline, SweepAxis::epochs), Error);
  EXPECT_THROW(parse_sweep_axis("width"), Error);
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + STC_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PipelineTest, CliExitCodes) {
  const auto cfg = (kFixtures / "baseline.cfg").string();
  const auto out = (dir_ / "cli").string();
  EXPECT_EQ(cli("run --config " + cfg + " --out " + out + " --seed 3"), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "cli" / "report.json"))["seeds"][0], 3);
  EXPECT_EQ(cli("run --config " + cfg + " --out " + out + " --set runs=0"), 2);
  EXPECT_EQ(cli("run --config " + cfg + " --out " + out + " --set nope=1"), 2);
  EXPECT_EQ(cli("sweep --config " + cfg + " --out " + out + " --axis epochs --values ,"), 2);
  EXPECT_EQ(cli("inspect-embeddings " + (dir_ / "missing.stce").string()), 4);
  EXPECT_NE(cli("frobnicate"), 0);
}

TEST_F(PipelineTest, CliInspectAndExportGraph) {
  const auto config = blob_config();
  EXPECT_EQ(cli("inspect-embeddings " + config.embeddings), 0);
  const auto edges = dir_ / "edges.txt";
  EXPECT_EQ(cli("export-graph --embeddings " + config.embeddings + " --k 4 --out " + edges.string()), 0);
  const auto blocked = dir_ / "edges_blocked.txt";
  EXPECT_EQ(cli("export-graph --blocked --embeddings " + config.embeddings + " --k 4 --out " + blocked.string()), 0);
  EXPECT_FALSE(slurp(edges).empty());
  EXPECT_EQ(slurp(edges), slurp(blocked));
}

}  // namespace
}  // namespace stc::pipeline
