#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "balcast/dtw.hpp"
#include "balcast/nnls.hpp"
#include "balcast/search.hpp"

using namespace balcast;

namespace {

std::vector<double> walk(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  double x = 0.0;
  for (auto& y : v) y = (x += g(rng));
  return v;
}

Corpus make_corpus(std::size_t accounts, std::size_t length) {
  std::mt19937_64 rng(1);
  std::vector<BalanceSeries> series;
  for (std::size_t a = 0; a < accounts; ++a) {
    series.push_back({"acct" + std::to_string(a), Date::from_ymd(2016, 1, 1), Step::Daily, walk(rng, length)});
  }
  return Corpus(std::move(series));
}

}  // namespace

static void BM_DtwBanded(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = walk(rng, n);
  const auto b = walk(rng, n);
  const DtwConfig cfg{static_cast<std::size_t>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(dtw_squared(a, b, cfg));
}
BENCHMARK(BM_DtwBanded)->Args({20, 2})->Args({20, 5})->Args({100, 10});

static void BM_Search(benchmark::State& state) {
  const Corpus corpus = make_corpus(20, 360);
  std::mt19937_64 rng(3);
  const auto query = standardize(walk(rng, 20)).values;
  SearchOptions opt;
  opt.prune = state.range(0) != 0;
  std::size_t pruned = 0;
  for (auto _ : state) {
    const auto r = subsequence_search(query, corpus, opt);
    pruned = r.pruned;
    benchmark::DoNotOptimize(r.matches.data());
  }
  state.counters["pruned"] = static_cast<double>(pruned);
  state.SetLabel(opt.prune ? "pruned" : "exhaustive");
}
BENCHMARK(BM_Search)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_PenalizedNnls(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  const Eigen::Index n = 31;
  const auto m = static_cast<Eigen::Index>(state.range(0));
  Eigen::MatrixXd X(n, m);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = g(rng);
    for (Eigen::Index j = 0; j < m; ++j) X(i, j) = g(rng);
  }
  Eigen::VectorXd v(m);
  for (auto& x : v) x = g(rng);
  Eigen::MatrixXd D(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) D(i, j) = std::abs(v[i] - v[j]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_weighted_penalized_nnls(y, X, w, D, 0.5).objective);
}
BENCHMARK(BM_PenalizedNnls)->Arg(5)->Arg(10)->Arg(20);
BENCHMARK_MAIN();
