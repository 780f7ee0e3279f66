// Copyright 2026 The blastgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blastgp/config.hpp"
#include "blastgp/fitness.hpp"
#include "blastgp/gplang.hpp"

namespace blastgp {

using Population = std::vector<Individual>;

enum class Operator { Crossover = 0, PointMutation, ConstantSwap, Shrink, SubtreeMutation };

inline constexpr int kOperatorCount = 5;

struct RunConfig {
  std::size_t population = 10000;
  std::size_t generations = 100;
  std::size_t tournament = 4;
  // crossover, point, constant swap, shrink, subtree
  std::array<double, kOperatorCount> operator_mix{0.50, 0.225, 0.225, 0.025, 0.025};
  std::size_t max_tree_size = kMaxTreeSize;
  int init_min_depth = 2;
  int init_max_depth = 6;
  int subtree_mutation_depth = 4;
  std::uint64_t seed = 1;
  TaskKind task = TaskKind::EValueRegression;
  std::size_t draw_per_bin = 0;  // 0 = task default
  bool result_admits_m = true;
  int workers = 1;
  std::vector<std::size_t> snapshot_generations{10};  // the final generation is always kept

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  /// Keys: population, generations, tournament, p_crossover, p_point,
  /// p_constant, p_shrink, p_subtree, max_size, init_min_depth,
  /// init_max_depth, subtree_depth, seed, task, draw_per_bin,
  /// result_admits_m, workers. Unknown keys are rejected.
  static RunConfig from_key_values(const KeyValues& kv, RunConfig base);
  static RunConfig from_key_values(const KeyValues& kv);
  KeyValues to_key_values() const;
};

inline RunConfig RunConfig::from_key_values(const KeyValues& kv) { return from_key_values(kv, RunConfig{}); }

// -- population evaluation kernels -------------------------------------------

/// Reference implementation: one individual after another.
std::vector<double> evaluate_population_serial(std::span<const Individual> pop, const Interpreter& interp,
                                               const TrainingSet& data, std::span<const std::size_t> sample,
                                               TaskKind task);

/// OpenMP fan-out over individuals. Each fitness depends only on its own
/// individual, so the result is identical to the serial kernel for any
/// worker count.
std::vector<double> evaluate_population_parallel(std::span<const Individual> pop, const Interpreter& interp,
                                                 const TrainingSet& data, std::span<const std::size_t> sample,
                                                 TaskKind task, int workers);

// -- initialisation, selection, variation --------------------------------------

/// Ramped half-and-half over depths [init_min_depth, init_max_depth]: the
/// tree slots cycle through depths, alternating grow and full at each depth.
Population init_population(const RunConfig& cfg, Rng& rng, const PrimitiveSet& ps);

/// k uniform draws with replacement; highest fitness wins, ties go to the
/// smaller individual and then to the earlier draw.
std::size_t tournament_select(std::span<const Individual> pop, std::span<const double> fitness, std::size_t k,
                              Rng& rng);

struct Variation {
  const PrimitiveSet& ps;
  std::size_t max_size = kMaxTreeSize;
  int subtree_depth = 4;

  Individual crossover(const Individual& mum, const Individual& dad, Rng& rng) const;
  Individual point_mutation(const Individual& parent, Rng& rng) const;
  Individual constant_swap(const Individual& parent, Rng& rng) const;
  Individual shrink(const Individual& parent, Rng& rng) const;
  Individual subtree_mutation(const Individual& parent, Rng& rng) const;
};

Operator choose_operator(const std::array<double, kOperatorCount>& mix, Rng& rng);

// -- the run -------------------------------------------------------------------

struct GenerationRecord {
  std::size_t generation = 0;  // 1-based
  double sample_fitness = 0.0;
  double train_fitness = 0.0;
  std::array<std::size_t, 3> best_sizes{};
  std::uint64_t sample_digest = 0;
  std::size_t best_index = 0;
};

struct Snapshot {
  std::size_t generation = 0;
  Individual best;
  double sample_fitness = 0.0;
  double train_fitness = 0.0;
};

struct RunResult {
  std::vector<GenerationRecord> history;
  std::vector<Snapshot> snapshots;  // configured generations, then the final one
  ConstantTable constants;
  std::vector<std::vector<std::size_t>> samples;  // per generation
  Bins bins;
};

/// Called after each generation has been recorded.
using GenerationObserver = std::function<void(const GenerationRecord&)>;

/// Generational, panmictic loop with no elitism: draw a sample, evaluate the
/// population, record the best (smallest among ties) including its fitness
/// on all training data, then breed the whole next generation.
RunResult run_evolution(const RunConfig& cfg, const TrainingSet& data, std::span<const BlastLabel> labels,
                        const GenerationObserver& observer = {});

std::uint64_t digest_indices(std::span<const std::size_t> idx);

/// Index of the best fitness; ties go to the smallest individual, then the lowest index.
std::size_t best_of(std::span<const Individual> pop, std::span<const double> fitness);

}  // namespace blastgp
