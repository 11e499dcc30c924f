#include <benchmark/benchmark.h>

#include "stc/ae/autoencoder.hpp"
#include "stc/common/rng.hpp"
#include "stc/gae/stn_gae.hpp"
#include "stc/graph/text_graph.hpp"
#include "stc/metrics/kmeans.hpp"
#include "stc/pipeline/synthetic.hpp"
#include "stc/sca/sca.hpp"

namespace {

using namespace stc;

MatrixF blob_matrix(std::size_t n, std::size_t dim) {
  pipeline::BlobSpec spec;
  spec.n = n;
  spec.dim = dim;
  spec.seed = 1;
  return pipeline::gaussian_blobs(spec).x;
}

void BM_KnnGraphDense(benchmark::State& state) {
  const MatrixF x = blob_matrix(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) benchmark::DoNotOptimize(graph::build_knn_graph(graph::cosine_similarity_matrix(x), 10));
}
BENCHMARK(BM_KnnGraphDense)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KnnGraphBlocked(benchmark::State& state) {
  const MatrixF x = blob_matrix(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) benchmark::DoNotOptimize(graph::build_knn_graph_blocked(x, 10));
}
BENCHMARK(BM_KnnGraphBlocked)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const MatrixD x = blob_matrix(static_cast<std::size_t>(state.range(0)), 20).cast<double>();
  metrics::KMeansConfig cfg;
  cfg.k = 4;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::kmeans(x, cfg));
}
BENCHMARK(BM_KMeans)->Arg(800)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_AutoencoderForward(benchmark::State& state) {
  const MatrixF x = blob_matrix(64, 768);
  const auto model = ae::AutoencoderModel::initialize(nn::NetworkSpec::parse("d:500:500:2000:20", 768), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ae::reconstruct(model, x));
}
BENCHMARK(BM_AutoencoderForward)->Unit(benchmark::kMillisecond);

void BM_GcnForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MatrixF x = blob_matrix(n, 256);
  const auto a = graph::normalize_adjacency(graph::build_knn_graph_blocked(x, 10));
  const auto model = gae::GaeModel::initialize(nn::NetworkSpec::parse("d:64:32", 256), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gae::gae_encode(model, a, x));
}
BENCHMARK(BM_GcnForward)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SoftAssignTarget(benchmark::State& state) {
  Rng rng(2);
  MatrixD z(4000, 20), u(8, 20);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(sca::target_distribution(sca::soft_assign(z, u)));
}
BENCHMARK(BM_SoftAssignTarget)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
