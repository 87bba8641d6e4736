#include <benchmark/benchmark.h>

#include <random>

#include "tcs/diamond.hpp"
#include "tcs/embeddings.hpp"
#include "tcs/projections.hpp"
#include "tcs/transport.hpp"

using namespace tcs;

namespace {

EdgeVector random_sparse(std::mt19937_64& rng, std::size_t dim, int terms) {
  std::uniform_int_distribution<std::size_t> edge(0, dim - 1);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  std::vector<EdgeVector::Entry> e;
  for (int i = 0; i < terms; ++i)
    e.emplace_back(static_cast<std::uint32_t>(edge(rng)), Rational(num(rng), den(rng)));
  return EdgeVector(dim, e);
}

void BM_BuildLaakso(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(build_laakso(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_BuildLaakso)->DenseRange(2, 6);

void BM_OrthogonalBasis(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(OrthogonalBasis(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_OrthogonalBasis)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_BuildPn(benchmark::State& st) {
  auto b = std::make_shared<const OrthogonalBasis>(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_Pn(b, true));
}
BENCHMARK(BM_BuildPn)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_PnNorm(benchmark::State& st) {
  auto p = build_Pn(static_cast<int>(st.range(0))).op;
  for (auto _ : st) benchmark::DoNotOptimize(operator_l1_norm(p));
}
BENCHMARK(BM_PnNorm)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Commutation(benchmark::State& st) {
  auto b = std::make_shared<const OrthogonalBasis>(static_cast<int>(st.range(0)));
  auto p = build_Pn(b).op;
  auto gens = isometry_generators(*b);
  for (auto _ : st) benchmark::DoNotOptimize(check_commutation(p, gens));
}
BENCHMARK(BM_Commutation)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_TcNormLaakso(benchmark::State& st) {
  auto g = build_laakso(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(1);
  std::vector<TransportProblem> ps;
  for (int i = 0; i < 16; ++i) ps.push_back(boundary(g, random_sparse(rng, g.edge_count(), 8)));
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(tc_norm(g, ps[i++ % ps.size()]));
}
BENCHMARK(BM_TcNormLaakso)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_TcNormDouble(benchmark::State& st) {
  auto g = build_laakso(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(2);
  std::vector<TransportProblem> ps;
  for (int i = 0; i < 16; ++i) ps.push_back(boundary(g, random_sparse(rng, g.edge_count(), 8)));
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(tc_norm_double(g, ps[i++ % ps.size()]));
}
BENCHMARK(BM_TcNormDouble)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_QuotientNorm(benchmark::State& st) {
  auto g = build_laakso(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(3);
  std::vector<EdgeVector> xs;
  for (int i = 0; i < 8; ++i) xs.push_back(random_sparse(rng, g.edge_count(), 6));
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(quotient_norm(g, xs[i++ % xs.size()]));
}
BENCHMARK(BM_QuotientNorm)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_LambdaDiamond(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0)), k = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(lambda_diamond(n, k));
}
BENCHMARK(BM_LambdaDiamond)->Args({4, 2})->Args({4, 3})->Args({4, 4})->Unit(benchmark::kMillisecond);

void BM_LinftyF(benchmark::State& st) {
  auto s = metric_F();
  auto ps = problems_F();
  for (auto _ : st) benchmark::DoNotOptimize(verify_linfty(s, ps));
}
BENCHMARK(BM_LinftyF)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
