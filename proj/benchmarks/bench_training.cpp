/*
 * Copyright 2026 The spamforest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <benchmark/benchmark.h>

#include "spamforest/data_io.hpp"
#include "spamforest/stats.hpp"
#include "spamforest/synthetic.hpp"
#include "spamforest/training.hpp"

namespace sf = spamforest;

namespace {

const sf::Dataset& gaussians() {
  static const sf::Dataset data = [] {
    const sf::LabeledDataset raw = sf::two_gaussians(500, 2);
    return sf::to_dataset(sf::normalize(raw.features, sf::Normalization::zscore).features,
                          raw.labels);
  }();
  return data;
}

// One epoch per iteration; the per-epoch cost should grow linearly in the
// tree count at fixed depth.
void BM_EpochByTreeCount(benchmark::State& state) {
  sf::TrainConfig c;
  c.n_tree = static_cast<std::size_t>(state.range(0));
  c.n_epoch = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sf::train(gaussians(), c));
  state.counters["trees"] = static_cast<double>(c.n_tree);
}
BENCHMARK(BM_EpochByTreeCount)->Arg(1)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_EpochByDepth(benchmark::State& state) {
  sf::TrainConfig c;
  c.n_depth = static_cast<std::size_t>(state.range(0));
  c.n_epoch = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sf::train(gaussians(), c));
}
BENCHMARK(BM_EpochByDepth)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_GradientBatch(benchmark::State& state) {
  sf::TrainConfig c;
  sf::Rng rng(1);
  const sf::Model model = sf::init_model(gaussians().width(), c, rng);
  std::vector<std::size_t> batch(50);
  for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(sf::gradients(gaussians(), batch, model));
}
BENCHMARK(BM_GradientBatch);

void BM_RankSumNormal(benchmark::State& state) {
  sf::Rng rng(3);
  const sf::Vector a = sf::rng_normal_vector(rng, static_cast<std::size_t>(state.range(0)), 1.0);
  const sf::Vector b = sf::rng_normal_vector(rng, static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sf::rank_sum_test(a, b));
}
BENCHMARK(BM_RankSumNormal)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
