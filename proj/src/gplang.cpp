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

#include "blastgp/gplang.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace blastgp {

namespace {

struct PrimitiveInfo {
  std::string_view name;
  int arity;
};

constexpr std::array<PrimitiveInfo, kPrimitiveCount> kInfo{{
    {"ADD", 2}, {"SUB", 2}, {"MUL", 2}, {"DIV", 2}, {"IFLTE", 4}, {"ORN", 2},
    {"LOOK", 1}, {"set_Aux1", 1}, {"set_Aux2", 1}, {"sum_Aux1", 1}, {"sum_Aux2", 1},
    {"A", 0}, {"C", 0}, {"G", 0}, {"T", 0}, {"N", 0},
    {"Self", 0}, {"Complement", 0}, {"Samesize", 0}, {"Opposite", 0},
    {"Qual", 0}, {"Run", 0}, {"CountN", 0}, {"S", 0}, {"X", 0}, {"Y", 0},
    {"pos", 0}, {"len", 0}, {"Aux1", 0}, {"Aux2", 0}, {"M", 0}, {"Sum0", 0}, {"Sum1", 0},
    {"<const>", 0},
}};

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

template <typename T>
const T& pick(std::span<const T> v, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

Node make_node(Primitive p, Rng& rng) {
  Node n{p, 0, 1};
  if (p == Primitive::Const) {
    std::uniform_int_distribution<std::uint16_t> d(0, kConstantCount - 1);
    n.constant = d(rng);
  }
  return n;
}

}  // namespace

int arity(Primitive p) { return kInfo[static_cast<std::size_t>(p)].arity; }

std::string_view primitive_name(Primitive p) { return kInfo[static_cast<std::size_t>(p)].name; }

std::optional<Primitive> primitive_from_name(std::string_view name) {
  for (int i = 0; i + 1 < kPrimitiveCount; ++i) {
    if (iequal(kInfo[static_cast<std::size_t>(i)].name, name)) return static_cast<Primitive>(i);
  }
  return std::nullopt;
}

std::string_view role_name(Role r) {
  switch (r) {
    case Role::Prepass0: return "prepas0";
    case Role::Prepass1: return "prepas1";
    case Role::Result: return "expect";
  }
  return "?";
}

// -- ConstantTable -------------------------------------------------------------

ConstantTable ConstantTable::build(Rng& rng) {
  ConstantTable t;
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (std::size_t i = 0; i < kRandomConstantCount; ++i) {
    double v;
    do {
      v = std::tan(angle(rng));
    } while (!std::isfinite(v) || std::abs(v) > 1e15);  // at pi/2 the tangent is meaningless
    t.values_[i] = v;
  }
  for (std::size_t k = 0; k + kRandomConstantCount < kConstantCount; ++k) {
    t.values_[kRandomConstantCount + k] = static_cast<double>(k);
  }
  return t;
}

ConstantTable ConstantTable::from_values(std::span<const double> values) {
  if (values.size() != kConstantCount) {
    throw std::invalid_argument("constant table needs " + std::to_string(kConstantCount) + " values, got " +
                                std::to_string(values.size()));
  }
  ConstantTable t;
  for (std::size_t i = 0; i < kConstantCount; ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("non-finite constant at " + std::to_string(i));
    if (i >= kRandomConstantCount && values[i] != static_cast<double>(i - kRandomConstantCount)) {
      throw std::invalid_argument("constant " + std::to_string(i) + " must be the integer " +
                                  std::to_string(i - kRandomConstantCount));
    }
    t.values_[i] = values[i];
  }
  return t;
}

std::optional<std::uint16_t> ConstantTable::find(double v) const {
  // integer slots first so small integers always print and parse to the same index
  if (v >= 0 && v <= 36 && v == std::floor(v)) return integer_constant(static_cast<int>(v));
  for (std::size_t i = 0; i < kRandomConstantCount; ++i) {
    if (values_[i] == v) return static_cast<std::uint16_t>(i);
  }
  return std::nullopt;
}

std::uint16_t ConstantTable::intern(double v) {
  if (auto k = find(v)) return *k;
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite constant");
  if (interned_ >= kRandomConstantCount) throw std::length_error("constant table full");
  const auto slot = kRandomConstantCount - 1 - interned_++;
  values_[slot] = v;
  return static_cast<std::uint16_t>(slot);
}

// -- Tree ----------------------------------------------------------------------

Tree::Tree(Role role, std::vector<Node> nodes) : role_(role), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("empty tree");
  if (nodes_.size() > kMaxTreeSize) {
    throw std::length_error("tree of " + std::to_string(nodes_.size()) + " nodes exceeds cap " +
                            std::to_string(kMaxTreeSize));
  }
  // spans from the right: each node consumes its children's spans
  std::vector<std::uint16_t> stack;
  stack.reserve(nodes_.size());
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    auto& n = nodes_[i];
    if (static_cast<int>(n.op) >= kPrimitiveCount) throw std::invalid_argument("bad primitive id");
    if (n.op == Primitive::Const) {
      if (n.constant >= kConstantCount) throw std::invalid_argument("constant index out of range");
    } else {
      n.constant = 0;
    }
    const auto a = static_cast<std::size_t>(arity(n.op));
    if (stack.size() < a) throw std::invalid_argument("malformed prefix: missing arguments at node " + std::to_string(i));
    std::uint16_t span = 1;
    for (std::size_t k = 0; k < a; ++k) {
      span = static_cast<std::uint16_t>(span + stack.back());
      stack.pop_back();
    }
    n.span = span;
    stack.push_back(span);
  }
  if (stack.size() != 1) throw std::invalid_argument("malformed prefix: trailing nodes");
}

int Tree::depth() const {
  // depth of node i = 1 + number of open ancestors; track remaining-children counts
  int best = 0;
  std::vector<int> open;
  for (const auto& n : nodes_) {
    const int d = static_cast<int>(open.size()) + 1;
    best = std::max(best, d);
    if (arity(n.op) > 0) {
      open.push_back(arity(n.op));
    } else {
      while (!open.empty() && --open.back() == 0) open.pop_back();
    }
  }
  return best;
}

std::vector<Node> Tree::splice(std::size_t at, std::span<const Node> replacement) const {
  std::vector<Node> out;
  out.reserve(nodes_.size() - nodes_[at].span + replacement.size());
  out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(at));
  out.insert(out.end(), replacement.begin(), replacement.end());
  out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(at + nodes_[at].span), nodes_.end());
  return out;
}

// -- Individual ----------------------------------------------------------------

Individual::Individual(Tree prepass0, Tree prepass1, Tree result)
    : trees_{std::move(prepass0), std::move(prepass1), std::move(result)} {
  for (std::size_t i = 0; i < 3; ++i) {
    if (trees_[i].role() != static_cast<Role>(i)) throw std::invalid_argument("tree roles out of order");
  }
}

Individual Individual::with_tree(Tree t) const {
  Individual out = *this;
  out.trees_[static_cast<std::size_t>(t.role())] = std::move(t);
  return out;
}

std::size_t Individual::total_size() const {
  return trees_[0].size() + trees_[1].size() + trees_[2].size();
}

// -- PrimitiveSet --------------------------------------------------------------

PrimitiveSet::PrimitiveSet(bool result_admits_m) : result_admits_m_(result_admits_m) {
  using P = Primitive;
  functions_ = {P::Iflte, P::Orn, P::Add, P::Sub, P::Mul, P::Div,
                P::Look, P::SetAux1, P::SetAux2, P::SumAux1, P::SumAux2};
  std::vector<P> scan = {P::Const, P::Pos, P::Len, P::A, P::C, P::G, P::T, P::Self, P::Complement,
                         P::Samesize, P::Opposite, P::N, P::Qual, P::S, P::Run, P::CountN,
                         P::X, P::Y, P::Aux1, P::Aux2};
  terminals_[0] = scan;
  terminals_[1] = scan;
  terminals_[1].push_back(P::M);
  terminals_[1].push_back(P::Sum0);
  terminals_[2] = {P::Const, P::Len, P::S, P::Run, P::CountN, P::X, P::Y, P::Aux1, P::Aux2, P::Sum0, P::Sum1};
  if (result_admits_m) terminals_[2].push_back(P::M);

  for (std::size_t r = 0; r < 3; ++r) {
    for (auto p : functions_) by_arity_[r][static_cast<std::size_t>(arity(p))].push_back(p);
    by_arity_[r][0] = terminals_[r];
  }
}

bool PrimitiveSet::legal(Role r, Primitive p) const {
  if (arity(p) > 0) return true;
  const auto& t = terminals_[static_cast<std::size_t>(r)];
  return std::find(t.begin(), t.end(), p) != t.end();
}

std::span<const Primitive> PrimitiveSet::with_arity(Role r, int a) const {
  if (a < 0 || a > 4) return {};
  return by_arity_[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)];
}

std::optional<std::size_t> PrimitiveSet::first_illegal(const Tree& t) const {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!legal(t.role(), t[i].op)) return i;
  }
  return std::nullopt;
}

// -- random generation ---------------------------------------------------------

Node random_terminal(Role role, Rng& rng, const PrimitiveSet& ps) {
  return make_node(pick(ps.terminals(role), rng), rng);
}

namespace {

void grow_into(std::vector<Node>& out, Role role, InitMethod method, int depth, int max_depth, Rng& rng,
               const PrimitiveSet& ps) {
  const auto funcs = ps.functions();
  const auto terms = ps.terminals(role);
  Primitive p;
  if (depth >= max_depth) {
    p = pick(terms, rng);
  } else if (method == InitMethod::Full) {
    p = pick(funcs, rng);
  } else {
    std::uniform_int_distribution<std::size_t> d(0, funcs.size() + terms.size() - 1);
    const auto k = d(rng);
    p = k < funcs.size() ? funcs[k] : terms[k - funcs.size()];
  }
  out.push_back(make_node(p, rng));
  for (int a = 0; a < arity(p); ++a) grow_into(out, role, method, depth + 1, max_depth, rng, ps);
}

void sized_into(std::vector<Node>& out, Role role, std::size_t size, Rng& rng, const PrimitiveSet& ps) {
  if (size == 1) {
    out.push_back(random_terminal(role, rng, ps));
    return;
  }
  std::vector<Primitive> fit;
  for (auto f : ps.functions()) {
    if (static_cast<std::size_t>(arity(f)) <= size - 1) fit.push_back(f);
  }
  const Primitive p = pick(std::span<const Primitive>(fit), rng);
  out.push_back(make_node(p, rng));
  const auto a = static_cast<std::size_t>(arity(p));
  // random composition of size-1 into `a` positive parts
  std::vector<std::size_t> cuts;
  std::uniform_int_distribution<std::size_t> d(1, size - 2 == 0 ? 1 : size - 2);
  while (cuts.size() + 1 < a) {
    const auto c = d(rng);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::size_t prev = 0;
  for (std::size_t k = 0; k < a; ++k) {
    const std::size_t end = k + 1 < a ? cuts[k] : size - 1;
    sized_into(out, role, end - prev, rng, ps);
    prev = end;
  }
}

}  // namespace

Tree random_tree(Role role, InitMethod method, int max_depth, Rng& rng, const PrimitiveSet& ps) {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  std::vector<Node> nodes;
  for (;;) {
    nodes.clear();
    grow_into(nodes, role, method, 1, max_depth, rng, ps);
    if (nodes.size() <= kMaxTreeSize) return Tree(role, std::move(nodes));
  }
}

Tree random_tree_of_size(Role role, std::size_t size, Rng& rng, const PrimitiveSet& ps) {
  if (size < 1 || size > kMaxTreeSize) throw std::invalid_argument("size out of range");
  std::vector<Node> nodes;
  nodes.reserve(size);
  sized_into(nodes, role, size, rng, ps);
  return Tree(role, std::move(nodes));
}

}  // namespace blastgp
