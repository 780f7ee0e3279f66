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

#include <algorithm>
#include <numeric>

#include "blastgp/evolution.hpp"

namespace blastgp {

namespace {

std::size_t uniform_index(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  return d(rng);
}

Role random_role(Rng& rng) { return static_cast<Role>(uniform_index(3, rng)); }

std::uint16_t random_constant(Rng& rng) {
  std::uniform_int_distribution<std::uint16_t> d(0, kConstantCount - 1);
  return d(rng);
}

}  // namespace

Population init_population(const RunConfig& cfg, Rng& rng, const PrimitiveSet& ps) {
  const int depths = cfg.init_max_depth - cfg.init_min_depth + 1;
  Population pop;
  pop.reserve(cfg.population);
  std::size_t slot = 0;
  auto next_tree = [&](Role role) {
    const int depth = cfg.init_min_depth + static_cast<int>((slot / 2) % static_cast<std::size_t>(depths));
    const InitMethod method = slot % 2 == 0 ? InitMethod::Grow : InitMethod::Full;
    ++slot;
    return random_tree(role, method, depth, rng, ps);
  };
  for (std::size_t i = 0; i < cfg.population; ++i) {
    Tree p0 = next_tree(Role::Prepass0);
    Tree p1 = next_tree(Role::Prepass1);
    Tree r = next_tree(Role::Result);
    pop.emplace_back(std::move(p0), std::move(p1), std::move(r));
  }
  return pop;
}

std::size_t tournament_select(std::span<const Individual> pop, std::span<const double> fitness, std::size_t k,
                              Rng& rng) {
  std::size_t best = uniform_index(pop.size(), rng);
  for (std::size_t draw = 1; draw < k; ++draw) {
    const std::size_t c = uniform_index(pop.size(), rng);
    if (fitness[c] > fitness[best] ||
        (fitness[c] == fitness[best] && pop[c].total_size() < pop[best].total_size())) {
      best = c;
    }
  }
  return best;
}

std::size_t best_of(std::span<const Individual> pop, std::span<const double> fitness) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (fitness[i] > fitness[best] ||
        (fitness[i] == fitness[best] && pop[i].total_size() < pop[best].total_size())) {
      best = i;
    }
  }
  return best;
}

Operator choose_operator(const std::array<double, kOperatorCount>& mix, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng);
  double acc = 0.0;
  for (int i = 0; i < kOperatorCount; ++i) {
    acc += mix[static_cast<std::size_t>(i)];
    if (x < acc) return static_cast<Operator>(i);
  }
  // rounding in the running sum; fall back to the last operator with weight
  for (int i = kOperatorCount - 1; i >= 0; --i) {
    if (mix[static_cast<std::size_t>(i)] > 0.0) return static_cast<Operator>(i);
  }
  return Operator::Crossover;
}

Individual Variation::crossover(const Individual& mum, const Individual& dad, Rng& rng) const {
  const Role role = random_role(rng);
  const Tree& a = mum.tree(role);
  const Tree& b = dad.tree(role);
  const std::size_t at = uniform_index(a.size(), rng);
  const std::size_t from = uniform_index(b.size(), rng);
  std::vector<Node> nodes = a.splice(at, b.subtree(from));
  if (nodes.size() > max_size) return mum;
  return mum.with_tree(Tree(role, std::move(nodes)));
}

Individual Variation::point_mutation(const Individual& parent, Rng& rng) const {
  const Role role = random_role(rng);
  const Tree& t = parent.tree(role);
  const std::size_t at = uniform_index(t.size(), rng);
  const Node old = t[at];
  const auto choices = ps.with_arity(role, arity(old.op));
  Primitive p = old.op;
  if (choices.size() > 1) {
    // a different primitive, except that Const may move to another constant
    do {
      p = choices[uniform_index(choices.size(), rng)];
    } while (p == old.op && p != Primitive::Const);
  }
  Node n{p, 0, 1};
  if (p == Primitive::Const) n.constant = random_constant(rng);
  std::vector<Node> nodes(t.nodes().begin(), t.nodes().end());
  nodes[at].op = n.op;
  nodes[at].constant = n.constant;
  return parent.with_tree(Tree(role, std::move(nodes)));
}

Individual Variation::constant_swap(const Individual& parent, Rng& rng) const {
  const Role role = random_role(rng);
  const Tree& t = parent.tree(role);
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].op == Primitive::Const) leaves.push_back(i);
  }
  if (leaves.empty()) return parent;
  const std::size_t at = leaves[uniform_index(leaves.size(), rng)];
  std::vector<Node> nodes(t.nodes().begin(), t.nodes().end());
  nodes[at].constant = random_constant(rng);
  return parent.with_tree(Tree(role, std::move(nodes)));
}

Individual Variation::shrink(const Individual& parent, Rng& rng) const {
  const Role role = random_role(rng);
  const Tree& t = parent.tree(role);
  std::vector<std::size_t> funcs;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (arity(t[i].op) > 0) funcs.push_back(i);
  }
  if (funcs.empty()) return parent;
  const std::size_t at = funcs[uniform_index(funcs.size(), rng)];
  const auto which = uniform_index(static_cast<std::size_t>(arity(t[at].op)), rng);
  std::size_t child = at + 1;
  for (std::size_t k = 0; k < which; ++k) child += t[child].span;
  return parent.with_tree(Tree(role, t.splice(at, t.subtree(child))));
}

Individual Variation::subtree_mutation(const Individual& parent, Rng& rng) const {
  const Role role = random_role(rng);
  const Tree& t = parent.tree(role);
  const std::size_t at = uniform_index(t.size(), rng);
  const Tree fresh = random_tree(role, InitMethod::Grow, subtree_depth, rng, ps);
  std::vector<Node> nodes = t.splice(at, fresh.nodes());
  if (nodes.size() > max_size) return parent;
  return parent.with_tree(Tree(role, std::move(nodes)));
}

}  // namespace blastgp
