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
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blastgp/seqdata.hpp"

namespace blastgp {

// Functions first, then terminals. Keep in sync with the arity and name tables.
enum class Primitive : std::uint8_t {
  Add, Sub, Mul, Div, Iflte, Orn, Look, SetAux1, SetAux2, SumAux1, SumAux2,
  A, C, G, T, N, Self, Complement, Samesize, Opposite,
  Qual, Run, CountN, S, X, Y, Pos, Len, Aux1, Aux2, M, Sum0, Sum1, Const,
};

inline constexpr int kPrimitiveCount = static_cast<int>(Primitive::Const) + 1;

int arity(Primitive p);
std::string_view primitive_name(Primitive p);
std::optional<Primitive> primitive_from_name(std::string_view name);  // case-insensitive; never Const

enum class Role : std::uint8_t { Prepass0 = 0, Prepass1 = 1, Result = 2 };

std::string_view role_name(Role r);  // prepas0, prepas1, expect

inline constexpr std::size_t kMaxTreeSize = 1022;
inline constexpr std::size_t kConstantCount = 1037;
inline constexpr std::size_t kRandomConstantCount = 1000;

/// The run-global constant table: 1000 tangent-distributed values followed by
/// the integers 0..36. Trees refer to entries by index.
class ConstantTable {
 public:
  static ConstantTable build(Rng& rng);
  /// Throws std::invalid_argument unless `values` has 1037 finite entries
  /// ending in 0..36.
  static ConstantTable from_values(std::span<const double> values);

  double operator[](std::size_t i) const { return values_[i]; }
  const double* data() const { return values_.data(); }
  std::span<const double> values() const { return values_; }

  std::optional<std::uint16_t> find(double v) const;
  /// Returns the index holding `v`, overwriting the next free random slot
  /// (counting down from 999) when `v` is not present.
  std::uint16_t intern(double v);

  friend bool operator==(const ConstantTable&, const ConstantTable&) = default;

 private:
  ConstantTable() = default;
  std::array<double, kConstantCount> values_{};
  std::size_t interned_ = 0;
};

inline constexpr std::uint16_t integer_constant(int k) {
  return static_cast<std::uint16_t>(kRandomConstantCount + k);
}

struct Node {
  Primitive op = Primitive::Len;
  std::uint16_t constant = 0;  // table index when op == Const
  std::uint16_t span = 1;      // nodes in the subtree rooted here

  friend bool operator==(const Node& a, const Node& b) {
    return a.op == b.op && (a.op != Primitive::Const || a.constant == b.constant);
  }
};

/// A prefix-ordered expression tree. Construction checks prefix
/// well-formedness and the size cap and fills in subtree spans; role legality
/// is checked against a PrimitiveSet separately.
class Tree {
 public:
  Tree(Role role, std::vector<Node> nodes);

  Role role() const { return role_; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  int depth() const;

  /// Copy of this tree with the subtree at `at` replaced. No cap check.
  std::vector<Node> splice(std::size_t at, std::span<const Node> replacement) const;
  std::span<const Node> subtree(std::size_t at) const {
    return std::span<const Node>(nodes_).subspan(at, nodes_[at].span);
  }

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  Role role_;
  std::vector<Node> nodes_;
};

/// A team of three trees: prepass0, prepass1 and the result tree.
class Individual {
 public:
  Individual(Tree prepass0, Tree prepass1, Tree result);

  const Tree& tree(Role r) const { return trees_[static_cast<std::size_t>(r)]; }
  const std::array<Tree, 3>& trees() const { return trees_; }
  Individual with_tree(Tree t) const;
  std::size_t total_size() const;

  friend bool operator==(const Individual&, const Individual&) = default;

 private:
  std::array<Tree, 3> trees_;
};

/// Legal primitives per tree role. The function set is shared; terminal sets
/// differ by which memory a tree may read.
class PrimitiveSet {
 public:
  explicit PrimitiveSet(bool result_admits_m = true);

  bool legal(Role r, Primitive p) const;
  bool result_admits_m() const { return result_admits_m_; }
  std::span<const Primitive> functions() const { return functions_; }
  std::span<const Primitive> terminals(Role r) const { return terminals_[static_cast<std::size_t>(r)]; }
  /// Role-legal primitives with the given arity (terminals include Const).
  std::span<const Primitive> with_arity(Role r, int a) const;

  /// Returns the first illegal node position, if any.
  std::optional<std::size_t> first_illegal(const Tree& t) const;
  bool legal(const Tree& t) const { return !first_illegal(t); }

 private:
  bool result_admits_m_;
  std::vector<Primitive> functions_;
  std::array<std::vector<Primitive>, 3> terminals_;
  std::array<std::array<std::vector<Primitive>, 5>, 3> by_arity_;
};

enum class InitMethod { Grow, Full };

/// Random tree with depth <= max_depth (== max_depth for Full); a lone
/// terminal has depth 1. Redraws until the tree fits the 1022-node cap.
Tree random_tree(Role role, InitMethod method, int max_depth, Rng& rng, const PrimitiveSet& ps);

/// Random tree with exactly `size` nodes (benchmarks).
Tree random_tree_of_size(Role role, std::size_t size, Rng& rng, const PrimitiveSet& ps);

Node random_terminal(Role role, Rng& rng, const PrimitiveSet& ps);

// -- S-expressions -------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error("at " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

std::string format_constant(double v);

std::string to_sexpr(const Tree& t, const ConstantTable& table);

/// Parses prefix S-expression text such as "(ADD pos 1)". Numeric literals
/// resolve to table entries, interning values the table does not hold.
/// Throws ParseError on unknown symbols, arity mismatch or role-illegal
/// primitives.
Tree from_sexpr(std::string_view text, Role role, ConstantTable& table, const PrimitiveSet& ps);

/// Node-by-node equality comparing constants by value rather than index.
bool same_structure(const Tree& a, const ConstantTable& ta, const Tree& b, const ConstantTable& tb);

struct Model {
  ConstantTable constants;
  Individual team;
};

/// Model file: a `constants:` section with all 1037 values, then one line per
/// tree labelled `prepas0:`, `prepas1:` and `expect:`.
void write_model(std::ostream& out, const Model& m);
Model read_model(std::istream& in, const PrimitiveSet& ps);
Model load_model_file(const std::string& path, const PrimitiveSet& ps);
void save_model_file(const std::string& path, const Model& m);

}  // namespace blastgp
