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

#include "blastgp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace blastgp {

namespace {

constexpr std::array<const char*, kOperatorCount> kMixKeys{"p_crossover", "p_point", "p_constant", "p_shrink",
                                                           "p_subtree"};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::size_t kv_count(const KeyValues& kv, const std::string& key, std::size_t fallback) {
  const long long v = kv_int(kv, key, static_cast<long long>(fallback));
  if (v < 0) throw ConfigError(key + " must not be negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

void RunConfig::validate() const {
  if (population == 0) throw ConfigError("population must be positive");
  if (generations == 0) throw ConfigError("generations must be positive");
  if (tournament == 0) throw ConfigError("tournament must be positive");
  if (max_tree_size == 0 || max_tree_size > kMaxTreeSize) {
    throw ConfigError("max_size must be in 1.." + std::to_string(kMaxTreeSize));
  }
  if (init_min_depth < 1 || init_max_depth < init_min_depth) throw ConfigError("init depths must satisfy 1 <= min <= max");
  if (subtree_mutation_depth < 1) throw ConfigError("subtree_depth must be positive");
  if (workers < 1) throw ConfigError("workers must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < operator_mix.size(); ++i) {
    const double p = operator_mix[i];
    if (!std::isfinite(p) || p < 0.0) throw ConfigError(std::string(kMixKeys[i]) + " must be a non-negative number");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("operator probabilities must sum to 1 (got " + format_double(sum) + ")");
}

RunConfig RunConfig::from_key_values(const KeyValues& kv, RunConfig c) {
  static const std::vector<std::string> known{
      "population", "generations", "tournament", "p_crossover", "p_point", "p_constant", "p_shrink", "p_subtree",
      "max_size", "init_min_depth", "init_max_depth", "subtree_depth", "seed", "task", "draw_per_bin",
      "result_admits_m", "workers"};
  for (const auto& [k, v] : kv) {
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
  }
  c.population = kv_count(kv, "population", c.population);
  c.generations = kv_count(kv, "generations", c.generations);
  c.tournament = kv_count(kv, "tournament", c.tournament);
  for (std::size_t i = 0; i < kOperatorCount; ++i) c.operator_mix[i] = kv_double(kv, kMixKeys[i], c.operator_mix[i]);
  c.max_tree_size = kv_count(kv, "max_size", c.max_tree_size);
  c.init_min_depth = static_cast<int>(kv_int(kv, "init_min_depth", c.init_min_depth));
  c.init_max_depth = static_cast<int>(kv_int(kv, "init_max_depth", c.init_max_depth));
  c.subtree_mutation_depth = static_cast<int>(kv_int(kv, "subtree_depth", c.subtree_mutation_depth));
  c.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", static_cast<long long>(c.seed)));
  if (kv.count("task")) c.task = parse_task(kv.at("task"));
  c.draw_per_bin = kv_count(kv, "draw_per_bin", c.draw_per_bin);
  c.result_admits_m = kv_bool(kv, "result_admits_m", c.result_admits_m);
  c.workers = static_cast<int>(kv_int(kv, "workers", c.workers));
  return c;
}

KeyValues RunConfig::to_key_values() const {
  KeyValues kv;
  kv["population"] = std::to_string(population);
  kv["generations"] = std::to_string(generations);
  kv["tournament"] = std::to_string(tournament);
  for (std::size_t i = 0; i < kOperatorCount; ++i) kv[kMixKeys[i]] = format_double(operator_mix[i]);
  kv["max_size"] = std::to_string(max_tree_size);
  kv["init_min_depth"] = std::to_string(init_min_depth);
  kv["init_max_depth"] = std::to_string(init_max_depth);
  kv["subtree_depth"] = std::to_string(subtree_mutation_depth);
  kv["seed"] = std::to_string(seed);
  kv["task"] = std::string(task_name(task));
  kv["draw_per_bin"] = std::to_string(draw_per_bin);
  kv["result_admits_m"] = result_admits_m ? "true" : "false";
  return kv;
}

std::uint64_t digest_indices(std::span<const std::size_t> idx) {
  // FNV-1a over the little-endian bytes of each index
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : idx) {
    auto x = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= x & 0xff;
      h *= 0x100000001b3ULL;
      x >>= 8;
    }
  }
  return h;
}

RunResult run_evolution(const RunConfig& cfg, const TrainingSet& data, std::span<const BlastLabel> labels,
                        const GenerationObserver& observer) {
  cfg.validate();
  if (labels.size() != data.size()) throw ConfigError("labels and training data differ in size");
  TaskSpec task = TaskSpec::defaults(cfg.task);
  if (cfg.draw_per_bin > 0) task.draw_per_bin = cfg.draw_per_bin;
  Bins bins = assign_bins(labels, task);

  Rng rng(cfg.seed);
  const ConstantTable constants = ConstantTable::build(rng);
  const PrimitiveSet ps(cfg.result_admits_m);
  const Interpreter interp(constants);
  const Variation var{ps, cfg.max_tree_size, cfg.subtree_mutation_depth};
  BinnedSampler sampler(bins, task.draw_per_bin, rng());

  Population pop = init_population(cfg, rng, ps);

  RunResult out{{}, {}, constants, {}, std::move(bins)};
  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<std::size_t> sample = sampler.next_sample();
    const std::vector<double> fit =
        evaluate_population_parallel(pop, interp, data, sample, cfg.task, cfg.workers);
    const std::size_t b = best_of(pop, fit);

    GenerationRecord rec;
    rec.generation = gen;
    rec.sample_fitness = fit[b];
    rec.train_fitness = fitness(pop[b], interp, data, {}, cfg.task);
    for (std::size_t r = 0; r < 3; ++r) rec.best_sizes[r] = pop[b].trees()[r].size();
    rec.sample_digest = digest_indices(sample);
    rec.best_index = b;
    out.history.push_back(rec);
    out.samples.push_back(std::move(sample));

    const bool wanted = std::find(cfg.snapshot_generations.begin(), cfg.snapshot_generations.end(), gen) !=
                        cfg.snapshot_generations.end();
    if (wanted || gen == cfg.generations) out.snapshots.push_back({gen, pop[b], rec.sample_fitness, rec.train_fitness});
    if (observer) observer(rec);
    if (gen == cfg.generations) break;

    Population next;
    next.reserve(pop.size());
    while (next.size() < cfg.population) {
      const Operator op = choose_operator(cfg.operator_mix, rng);
      const Individual& mum = pop[tournament_select(pop, fit, cfg.tournament, rng)];
      switch (op) {
        case Operator::Crossover: {
          const Individual& dad = pop[tournament_select(pop, fit, cfg.tournament, rng)];
          next.push_back(var.crossover(mum, dad, rng));
          break;
        }
        case Operator::PointMutation: next.push_back(var.point_mutation(mum, rng)); break;
        case Operator::ConstantSwap: next.push_back(var.constant_swap(mum, rng)); break;
        case Operator::Shrink: next.push_back(var.shrink(mum, rng)); break;
        case Operator::SubtreeMutation: next.push_back(var.subtree_mutation(mum, rng)); break;
      }
    }
    pop = std::move(next);
  }
  return out;
}

}  // namespace blastgp
