#include "hsap/clustering.hpp"
#include "hsap/dataset.hpp"
#include "hsap/engine.hpp"
#include "hsap/linalg.hpp"
#include "hsap/rng.hpp"
#include "hsap/secant.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>

namespace {

using namespace hsap;

Matrix random_points(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix random_frame(Index n, Index k, std::uint64_t seed) {
  return mgs_orthonormalize(random_points(n, k, seed));
}

SecantSet random_pool(Index rows, Index n, std::uint64_t seed) {
  Rng rng(seed);
  SecantSet s;
  s.directions.resize(rows, n);
  for (Index i = 0; i < rows; ++i) {
    Vector v(n);
    for (Index j = 0; j < n; ++j) v(j) = rng.normal();
    s.directions.row(i) = v.normalized().transpose();
  }
  s.provenance.resize(static_cast<std::size_t>(rows));
  return s;
}

void BM_MinProjectedLength(benchmark::State& state) {
  const Index rows = state.range(0);
  const SecantSet pool = random_pool(rows, 10, 1);
  const Matrix p = random_frame(10, 3, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(min_projected_length(p, pool.directions, 1));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_MinProjectedLength)->Range(1 << 10, 1 << 17);

void BM_EvaluateCandidates(benchmark::State& state) {
  const Index rows = state.range(0);
  const SecantSet pool = random_pool(rows, 10, 3);
  const Matrix p = random_frame(10, 3, 4);
  std::vector<ClusterModel> models(3);
  for (int j = 0; j < 3; ++j) {
    models[static_cast<std::size_t>(j)].index = j;
    models[static_cast<std::size_t>(j)].basis =
        random_frame(10, 2, 5 + static_cast<std::uint64_t>(j));
    models[static_cast<std::size_t>(j)].mean = Vector::Zero(10);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_candidates(p, models, pool, false, 1));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_EvaluateCandidates)->Range(1 << 10, 1 << 16);

void BM_UpdateProjection(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(6);
  Matrix p = random_frame(n, 3, 7);
  Candidate cand;
  Vector w(n);
  for (Index i = 0; i < n; ++i) w(i) = rng.normal();
  cand.w = w.normalized();
  cand.w_p = p * (p.transpose() * cand.w);
  cand.value = cand.w_p.norm();
  for (auto _ : state) benchmark::DoNotOptimize(update_projection(p, cand, 0.01));
}
BENCHMARK(BM_UpdateProjection)->Arg(8)->Arg(64)->Arg(256);

void BM_FullSecants(benchmark::State& state) {
  const Index points = state.range(0);
  const Matrix pts = random_points(points, 10, 8);
  for (auto _ : state) benchmark::DoNotOptimize(full_secants(pts));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(full_secant_count(
                              static_cast<std::uint64_t>(points))));
}
BENCHMARK(BM_FullSecants)->Arg(100)->Arg(400)->Arg(1000);

void BM_Kmeans(benchmark::State& state) {
  const Index points = state.range(0);
  const Matrix pts = random_points(points, 10, 9);
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(pts, 5, Metric::Euclidean, 10));
}
BENCHMARK(BM_Kmeans)->Arg(500)->Arg(2000);

void BM_PcaBasis(benchmark::State& state) {
  const Index points = state.range(0);
  const Matrix pts = random_points(points, 20, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(pca_basis(pts, PcaTarget::energy(0.95)));
}
BENCHMARK(BM_PcaBasis)->Arg(200)->Arg(1000);

void BM_HsapRun(benchmark::State& state) {
  const DataMatrix d = gen_synthetic({});
  HsapConfig config;
  config.k = 2;
  config.clusters = 3;
  config.labels = d.labels;
  config.max_iters = state.range(0);
  config.stop_tol = 0.0;
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_hsap(d, config));
}
BENCHMARK(BM_HsapRun)->Arg(10)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
