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

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blastgp/config.hpp"
#include "blastgp/gplang.hpp"
#include "blastgp/interpreter.hpp"
#include "blastgp/seqdata.hpp"

namespace blastgp {

enum class TaskKind { EValueRegression, LengthRegression, MatchClassify, RepeatClassify };

std::string_view task_name(TaskKind k);  // evalue, length, match, repeat
TaskKind parse_task(std::string_view name);
bool is_classification(TaskKind k);

/// Regression: log10 E or best length. Classification: 1 positive, 0 negative.
double task_target(TaskKind k, const BlastLabel& l);
std::vector<double> task_targets(TaskKind k, std::span<const BlastLabel> labels);

struct TaskSpec {
  TaskKind kind = TaskKind::EValueRegression;
  std::size_t draw_per_bin = 35;

  static TaskSpec defaults(TaskKind k);  // 35 per bin for regression, 300 for classification
};

struct Bins {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> members;

  std::size_t count() const { return members.size(); }
};

/// Partitions example indices by target. The E task gets one bin per occupied
/// floor(log10 E) plus the no-match bin; length uses {0}, {18,19}, ...,
/// {34,35}, {36}; classification uses positive / negative. Throws
/// ConfigError naming any empty fixed bin or any label that fits no bin.
Bins assign_bins(std::span<const BlastLabel> labels, const TaskSpec& task);

/// Per-bin queues in random order. Each call takes the next `draw` examples
/// (or the whole bin when it is smaller) from every bin. When a bin has too
/// few untaken examples left, the leftovers are taken first and the rest of
/// the bin is put in a new random order, least recently used first, so an
/// example is not reused for at least floor(size / draw) generations.
/// Samples are returned in ascending index order.
class BinnedSampler {
 public:
  BinnedSampler(Bins bins, std::size_t draw_per_bin, std::uint64_t seed);

  std::vector<std::size_t> next_sample();
  std::size_t sample_size() const;
  const Bins& bins() const { return bins_; }
  std::uint64_t generation() const { return generation_; }

 private:
  struct Queue {
    std::vector<std::size_t> order;
    std::size_t cursor = 0;
  };
  void refill(std::size_t b);

  Bins bins_;
  std::size_t draw_;
  Rng rng_;
  std::vector<Queue> queues_;
  std::vector<std::int64_t> last_used_;  // by example index; -1 = never
  std::uint64_t generation_ = 0;
};

struct Correlation {
  double r = 0.0;
  bool degenerate = true;
};

/// Pearson product-moment correlation. Sums are accumulated about the first
/// element and each variance term is clamped at zero before the square root.
/// Zero variance, fewer than two points or non-finite input gives degenerate.
Correlation pearson(std::span<const double> xs, std::span<const double> ys);

inline constexpr double kDegenerateFitness = -1.0;

/// Regression: correlation, -1 when degenerate or any prediction is
/// non-finite. Classification: number of cases where (prediction > 0)
/// matches the label; non-finite predictions count as wrong.
double score(TaskKind k, std::span<const double> predictions, std::span<const double> targets);

/// Training data prepared once for repeated evaluation.
struct TrainingSet {
  std::vector<PreparedRead> reads;
  std::vector<double> targets;

  std::size_t size() const { return reads.size(); }
};

TrainingSet make_training_set(std::span<const DnaRecord> records, std::span<const BlastLabel> labels, TaskKind k);

/// Fitness of one individual on the examples listed in `sample`
/// (all examples when `sample` is empty). `scratch` receives predictions.
double fitness(const Individual& ind, const Interpreter& interp, const TrainingSet& data,
               std::span<const std::size_t> sample, TaskKind k, std::vector<double>& scratch_pred,
               std::vector<double>& scratch_target);

double fitness(const Individual& ind, const Interpreter& interp, const TrainingSet& data,
               std::span<const std::size_t> sample, TaskKind k);

}  // namespace blastgp
