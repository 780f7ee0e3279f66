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
#include <span>
#include <vector>

#include "blastgp/gplang.hpp"
#include "blastgp/seqdata.hpp"

namespace blastgp {

/// Per-read derived features. Arrays are indexed by 0-based position.
struct FeatureTable {
  std::array<int, kReadLength> run_len{};
  std::array<double, kReadLength> entropy_prefix{};  // bits, over positions 1..i+1
  int count_n = 0;
  double entropy_total = 0.0;
};

FeatureTable precompute_features(const DnaRecord& r);

/// Everything the interpreter reads from one record, flattened to doubles.
struct PreparedRead {
  std::array<Base, kReadLength> bases{};
  std::array<double, kReadLength> qual{};
  std::array<double, kReadLength> run{};
  std::array<double, kReadLength> entropy{};
  double count_n = 0.0;
  double x = 0.0;
  double y = 0.0;
};

PreparedRead prepare(const DnaRecord& r);
std::vector<PreparedRead> prepare_all(std::span<const DnaRecord> records);

enum class Phase : std::uint8_t { Pass0, Pass1, Result };

struct EvalContext {
  const PreparedRead* read = nullptr;
  int base_pos = 1;  // 1..36
  int look_offset = 0;
  double aux1 = 0.0;
  double aux2 = 0.0;
  std::array<double, kReadLength> m{};
  double sum0 = 0.0;
  double sum1 = 0.0;
  Phase phase = Phase::Pass0;
  std::uint64_t op_counter = 0;

  int effective_position() const { return std::min(base_pos + look_offset, kReadLength); }
  void reset(const PreparedRead& r);
};

/// Return values of every tree call made for one record.
struct EvalTrace {
  std::array<double, kReadLength> pass0{};
  std::array<double, kReadLength> pass1{};
  double result = 0.0;
};

/// Evaluates expression trees against a constant table. Stateless apart from
/// the table reference, so one instance may be shared by any number of threads.
class Interpreter {
 public:
  explicit Interpreter(const ConstantTable& table) : constants_(table.data()) {}

  /// One tree call at ctx.base_pos / ctx.look_offset. Updates memory cells and
  /// ctx.op_counter; does not touch sum0, sum1 or m.
  double eval_node(const Tree& t, EvalContext& ctx) const;

  /// Full 36 + 36 + 1 call schedule on a fresh context.
  double eval_individual(const Individual& ind, const PreparedRead& r, EvalContext& ctx,
                         EvalTrace* trace = nullptr) const;

  double predict(const Individual& ind, const PreparedRead& r) const {
    EvalContext ctx;
    return eval_individual(ind, r, ctx);
  }

 private:
  const double* constants_;
};

struct BenchResult {
  std::uint64_t ops_per_repeat = 0;
  std::vector<double> rates;  // primitives per second, one per repeat
  double mean = 0.0;
  double stddev = 0.0;
};

/// Single-threaded interpreter throughput over `records`, repeated.
BenchResult throughput_bench(const Individual& ind, const ConstantTable& table,
                             std::span<const PreparedRead> records, int repeats);

}  // namespace blastgp
