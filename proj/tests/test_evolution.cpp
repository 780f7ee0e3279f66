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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "blastgp/evolution.hpp"

using namespace blastgp;

namespace {

const PrimitiveSet kPs;

Individual random_individual(Rng& rng, int depth = 6) {
  return Individual(random_tree(Role::Prepass0, InitMethod::Grow, depth, rng, kPs),
                    random_tree(Role::Prepass1, InitMethod::Grow, depth, rng, kPs),
                    random_tree(Role::Result, InitMethod::Grow, depth, rng, kPs));
}

Individual leaf_team(Primitive p0, Primitive p1, Primitive r) {
  return Individual(Tree(Role::Prepass0, {{p0}}), Tree(Role::Prepass1, {{p1}}), Tree(Role::Result, {{r}}));
}

bool valid(const Individual& ind) {
  for (const auto& t : ind.trees()) {
    if (t.size() > kMaxTreeSize || !kPs.legal(t)) return false;
  }
  return true;
}

struct SmallRun {
  SyntheticDataset d = generate_synthetic(400, OracleSpec{}, 21);
  TrainingSet data = make_training_set(d.records, d.labels, TaskKind::EValueRegression);
  RunConfig cfg;
  SmallRun() {
    cfg.population = 150;
    cfg.generations = 12;
    cfg.seed = 5;
  }
};

}  // namespace

TEST_CASE("run configuration") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  double sum = 0;
  for (double p : c.operator_mix) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK(c.population == 10000);
  CHECK(c.generations == 100);
  CHECK(c.tournament == 4);

  const RunConfig back = RunConfig::from_key_values(c.to_key_values());
  CHECK(back.operator_mix == c.operator_mix);
  CHECK(back.population == c.population);
  CHECK(back.task == c.task);

  CHECK_THROWS_AS(RunConfig::from_key_values({{"populaton", "5"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_key_values({{"p_crossover", "0.6"}}).validate(), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_key_values({{"population", "0"}}).validate(), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_key_values({{"task", "bogus"}}), ConfigError);
  const RunConfig t = RunConfig::from_key_values({{"population", "12"}, {"task", "length"}});
  CHECK(t.population == 12);
  CHECK(t.task == TaskKind::LengthRegression);
}

TEST_CASE("initial population") {
  RunConfig cfg;
  cfg.population = 500;
  Rng a(1), b(1);
  const Population p = init_population(cfg, a, kPs);
  CHECK(p.size() == 500);
  CHECK(p == init_population(cfg, b, kPs));
  std::set<int> depths;
  for (const auto& ind : p) {
    CHECK(valid(ind));
    for (const auto& t : ind.trees()) {
      CHECK(t.depth() <= 6);
      depths.insert(t.depth());
    }
  }
  CHECK(depths.count(6) == 1);  // full trees reach every ramp depth
  CHECK(depths.count(2) == 1);
}

TEST_CASE("tournament selection") {
  Rng rng(3);
  const Population pop{leaf_team(Primitive::Pos, Primitive::Pos, Primitive::Len),
                       leaf_team(Primitive::Pos, Primitive::Pos, Primitive::Len),
                       leaf_team(Primitive::Pos, Primitive::Pos, Primitive::Len),
                       leaf_team(Primitive::Pos, Primitive::Pos, Primitive::Len)};
  SUBCASE("the fittest of the draws wins") {
    const std::vector<double> fit{1, 5, 3, 2};
    for (int i = 0; i < 100; ++i) CHECK(tournament_select(pop, fit, 64, rng) == 1);
    for (int i = 0; i < 1000; ++i) {
      // with four draws the winner is never the unique worst unless all draws hit it
      const auto w = tournament_select(pop, fit, 4, rng);
      CHECK(w < 4);
    }
  }
  SUBCASE("ties go to the smallest individual") {
    Population mixed = pop;
    mixed[2] = Individual(Tree(Role::Prepass0, {{Primitive::Add}, {Primitive::Pos}, {Primitive::Pos}}),
                          Tree(Role::Prepass1, {{Primitive::Pos}}), Tree(Role::Result, {{Primitive::Len}}));
    mixed[0] = mixed[2];
    mixed[3] = mixed[2];
    const std::vector<double> fit(4, 1.0);
    for (int i = 0; i < 100; ++i) CHECK(tournament_select(mixed, fit, 64, rng) == 1);
    CHECK(best_of(mixed, fit) == 1);
  }
  SUBCASE("k = 1 is uniform") {
    const std::vector<double> fit{1, 5, 3, 2};
    std::array<int, 4> count{};
    for (int i = 0; i < 40000; ++i) ++count[tournament_select(pop, fit, 1, rng)];
    for (int c : count) CHECK(std::abs(c - 10000) < 3 * 87);  // sd = sqrt(40000 * 0.25 * 0.75)
  }
}

TEST_CASE("operator mix frequencies") {
  const RunConfig cfg;
  Rng rng(4);
  std::array<int, kOperatorCount> count{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++count[static_cast<std::size_t>(choose_operator(cfg.operator_mix, rng))];
  for (std::size_t k = 0; k < kOperatorCount; ++k) {
    const double p = cfg.operator_mix[k];
    const double sd = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(count[k] - n * p) <= 3 * sd);
  }
  CHECK(choose_operator({1, 0, 0, 0, 0}, rng) == Operator::Crossover);
  CHECK(choose_operator({0, 0, 0, 0, 1}, rng) == Operator::SubtreeMutation);
}

TEST_CASE("variation operators") {
  Rng rng(12);
  const Variation var{kPs, kMaxTreeSize, 4};

  SUBCASE("offspring are always valid") {
    for (int i = 0; i < 2000; ++i) {
      const Individual a = random_individual(rng), b = random_individual(rng);
      CHECK(valid(var.crossover(a, b, rng)));
      CHECK(valid(var.point_mutation(a, rng)));
      CHECK(valid(var.constant_swap(a, rng)));
      CHECK(valid(var.shrink(a, rng)));
      CHECK(valid(var.subtree_mutation(a, rng)));
    }
  }
  SUBCASE("crossover changes one role and copies the rest from mum") {
    for (int i = 0; i < 500; ++i) {
      const Individual a = random_individual(rng), b = random_individual(rng);
      const Individual c = var.crossover(a, b, rng);
      int same = 0;
      for (std::size_t r = 0; r < 3; ++r) same += c.trees()[r] == a.trees()[r];
      CHECK(same >= 2);
    }
  }
  SUBCASE("crossing identical one-node parents reproduces the parent") {
    const Individual p = leaf_team(Primitive::Qual, Primitive::M, Primitive::Sum1);
    for (int i = 0; i < 20; ++i) CHECK(var.crossover(p, p, rng) == p);
  }
  SUBCASE("oversized crossover offspring are replaced by mum") {
    const Individual big(random_tree_of_size(Role::Prepass0, 1000, rng, kPs),
                         random_tree_of_size(Role::Prepass1, 1000, rng, kPs),
                         random_tree_of_size(Role::Result, 1000, rng, kPs));
    int copies = 0;
    for (int i = 0; i < 200; ++i) {
      const Individual c = var.crossover(big, big, rng);
      for (const auto& t : c.trees()) CHECK(t.size() <= kMaxTreeSize);
      copies += c == big;
    }
    CHECK(copies > 0);
  }
  SUBCASE("point mutation keeps shape and picks another legal primitive") {
    const Individual p = leaf_team(Primitive::Qual, Primitive::M, Primitive::Sum1);
    for (int i = 0; i < 200; ++i) {
      const Individual c = var.point_mutation(p, rng);
      CHECK(c.total_size() == 3);
      CHECK(valid(c));
      CHECK_FALSE(c == p);
    }
    for (int i = 0; i < 300; ++i) {
      const Individual a = random_individual(rng);
      const Individual c = var.point_mutation(a, rng);
      int diffs = 0;
      for (std::size_t r = 0; r < 3; ++r) {
        const auto& x = a.trees()[r];
        const auto& y = c.trees()[r];
        REQUIRE(x.size() == y.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
          CHECK(arity(x[k].op) == arity(y[k].op));
          diffs += !(x[k] == y[k]);
        }
      }
      CHECK(diffs <= 1);
    }
  }
  SUBCASE("constant swap only changes a constant index") {
    for (int i = 0; i < 300; ++i) {
      const Individual a = random_individual(rng);
      const Individual c = var.constant_swap(a, rng);
      for (std::size_t r = 0; r < 3; ++r) {
        const auto& x = a.trees()[r];
        const auto& y = c.trees()[r];
        REQUIRE(x.size() == y.size());
        for (std::size_t k = 0; k < x.size(); ++k) CHECK(x[k].op == y[k].op);
      }
    }
    const Individual none = leaf_team(Primitive::Qual, Primitive::M, Primitive::Sum1);
    CHECK(var.constant_swap(none, rng) == none);
  }
  SUBCASE("shrink strictly reduces size when there is a function") {
    for (int i = 0; i < 300; ++i) {
      const Individual a(random_tree(Role::Prepass0, InitMethod::Full, 3, rng, kPs),
                         random_tree(Role::Prepass1, InitMethod::Full, 3, rng, kPs),
                         random_tree(Role::Result, InitMethod::Full, 3, rng, kPs));
      CHECK(var.shrink(a, rng).total_size() < a.total_size());
    }
    const Individual leaves = leaf_team(Primitive::Qual, Primitive::M, Primitive::Sum1);
    CHECK(var.shrink(leaves, rng) == leaves);
  }
  SUBCASE("subtree mutation inserts at most a depth-4 tree") {
    const Individual p = leaf_team(Primitive::Qual, Primitive::M, Primitive::Sum1);
    for (int i = 0; i < 300; ++i) {
      const Individual c = var.subtree_mutation(p, rng);
      for (const auto& t : c.trees()) CHECK(t.depth() <= 4);
    }
  }
}

TEST_CASE("evolution runs") {
  SmallRun s;
  SUBCASE("history and snapshots") {
    const RunResult r = run_evolution(s.cfg, s.data, s.d.labels);
    REQUIRE(r.history.size() == 12);
    for (std::size_t g = 0; g < 12; ++g) {
      CHECK(r.history[g].generation == g + 1);
      CHECK(std::isfinite(r.history[g].sample_fitness));
      CHECK(r.history[g].train_fitness >= -1.0);
      CHECK(r.history[g].train_fitness <= 1.0);
      CHECK(r.history[g].sample_digest == digest_indices(r.samples[g]));
    }
    REQUIRE(r.snapshots.size() == 2);
    CHECK(r.snapshots[0].generation == 10);
    CHECK(r.snapshots[1].generation == 12);
    for (const auto& snap : r.snapshots) CHECK(valid(snap.best));
    const Interpreter interp(r.constants);
    CHECK(fitness(r.snapshots[1].best, interp, s.data, {}, s.cfg.task) == r.history.back().train_fitness);
  }
  SUBCASE("the breeding stream ignores the worker count") {
    RunConfig one = s.cfg, two = s.cfg;
    one.workers = 1;
    two.workers = 3;
    const RunResult a = run_evolution(one, s.data, s.d.labels);
    const RunResult b = run_evolution(two, s.data, s.d.labels);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t g = 0; g < a.history.size(); ++g) {
      CHECK(a.history[g].sample_fitness == b.history[g].sample_fitness);
      CHECK(a.history[g].train_fitness == b.history[g].train_fitness);
      CHECK(a.history[g].best_sizes == b.history[g].best_sizes);
    }
    CHECK(a.snapshots.back().best == b.snapshots.back().best);
  }
  SUBCASE("a whole-population tournament with crossover only never loses the best on a fixed sample") {
    // every bin is smaller than the draw, so each generation sees the same examples
    RunConfig cfg = s.cfg;
    cfg.population = 60;
    cfg.generations = 15;
    cfg.tournament = 60 * 20;
    cfg.operator_mix = {1, 0, 0, 0, 0};
    cfg.draw_per_bin = 1000;
    const RunResult r = run_evolution(cfg, s.data, s.d.labels);
    for (std::size_t g = 1; g < r.history.size(); ++g) {
      CHECK(r.samples[g].size() == s.data.size());
      CHECK(r.history[g].sample_fitness >= r.history[g - 1].sample_fitness);
    }
  }
  SUBCASE("configuration errors surface before the first generation") {
    RunConfig cfg = s.cfg;
    cfg.task = TaskKind::LengthRegression;
    int calls = 0;
    CHECK_THROWS_AS(run_evolution(cfg, s.data, s.d.labels, [&](const GenerationRecord&) { ++calls; }), ConfigError);
    CHECK(calls == 0);
  }
}

TEST_CASE("serial and parallel kernels agree") {
  SmallRun s;
  Rng rng(2);
  const ConstantTable table = ConstantTable::build(rng);
  RunConfig cfg;
  cfg.population = 200;
  const Population pop = init_population(cfg, rng, kPs);
  const Interpreter interp(table);
  const std::vector<std::size_t> sample{1, 5, 9, 30, 100, 250, 399};
  const auto a = evaluate_population_serial(pop, interp, s.data, sample, TaskKind::EValueRegression);
  for (int w : {1, 2, 4}) {
    CHECK(evaluate_population_parallel(pop, interp, s.data, sample, TaskKind::EValueRegression, w) == a);
  }
}
