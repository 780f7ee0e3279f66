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

#include "blastgp/interpreter.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace blastgp {

namespace {

constexpr int kLast = kReadLength - 1;

// [home][looked] for the four comparison terminals, +1 true / -1 false.
struct Relation {
  std::array<std::array<double, 5>, 5> self{}, complement{}, samesize{}, opposite{};
};

constexpr Relation make_relation() {
  constexpr int rings[5] = {2, 1, 2, 1, 0};  // A C G T N
  Relation rel{};
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      const bool same = a == b;
      const bool comp = (a == 0 && b == 3) || (a == 3 && b == 0) || (a == 1 && b == 2) || (a == 2 && b == 1);
      const bool size = rings[a] == rings[b];
      rel.self[a][b] = same ? 1.0 : -1.0;
      rel.complement[a][b] = comp ? 1.0 : -1.0;
      rel.samesize[a][b] = size ? 1.0 : -1.0;
      rel.opposite[a][b] = (!same && !comp && !size) ? 1.0 : -1.0;
    }
  }
  return rel;
}

constexpr Relation kRelation = make_relation();

struct Machine {
  const Node* ip;
  const double* k;
  const PreparedRead& r;
  EvalContext& c;
  int home;
  int pos;
  std::uint64_t ops = 0;

  void skip() { ip += ip->span; }

  double is(Base b) const { return r.bases[static_cast<std::size_t>(pos)] == b ? 1.0 : -1.0; }
  double rel(const std::array<std::array<double, 5>, 5>& t) const {
    return t[static_cast<std::size_t>(r.bases[static_cast<std::size_t>(home)])]
            [static_cast<std::size_t>(r.bases[static_cast<std::size_t>(pos)])];
  }

  double run() {
    const Node& n = *ip++;
    ++ops;
    const auto p = static_cast<std::size_t>(pos);
    switch (n.op) {
      case Primitive::Add: { const double a = run(); return a + run(); }
      case Primitive::Sub: { const double a = run(); return a - run(); }
      case Primitive::Mul: { const double a = run(); return a * run(); }
      case Primitive::Div: {
        const double a = run();
        const double b = run();
        return b == 0.0 ? 1.0 : a / b;
      }
      case Primitive::Iflte: {
        const double a = run();
        const double b = run();
        if (a <= b) {
          const double v = run();
          skip();
          return v;
        }
        skip();
        return run();
      }
      case Primitive::Orn: {
        if (run() > 0.0) {
          skip();
          return 1.0;
        }
        return run() > 0.0 ? 1.0 : -1.0;
      }
      case Primitive::Look: {
        const int saved = pos;
        pos = std::min(pos + 1, kLast);
        const double v = run();
        pos = saved;
        return v;
      }
      case Primitive::SetAux1: return c.aux1 = run();
      case Primitive::SetAux2: return c.aux2 = run();
      case Primitive::SumAux1: { const double v = run(); return c.aux1 += v; }
      case Primitive::SumAux2: { const double v = run(); return c.aux2 += v; }
      case Primitive::A: return is(Base::A);
      case Primitive::C: return is(Base::C);
      case Primitive::G: return is(Base::G);
      case Primitive::T: return is(Base::T);
      case Primitive::N: return is(Base::N);
      case Primitive::Self: return rel(kRelation.self);
      case Primitive::Complement: return rel(kRelation.complement);
      case Primitive::Samesize: return rel(kRelation.samesize);
      case Primitive::Opposite: return rel(kRelation.opposite);
      case Primitive::Qual: return r.qual[p];
      case Primitive::Run: return r.run[p];
      case Primitive::CountN: return r.count_n;
      case Primitive::S: return r.entropy[p];
      case Primitive::X: return r.x;
      case Primitive::Y: return r.y;
      case Primitive::Pos: return static_cast<double>(pos + 1);
      case Primitive::Len: return static_cast<double>(kReadLength);
      case Primitive::Aux1: return c.aux1;
      case Primitive::Aux2: return c.aux2;
      case Primitive::M: return c.m[p];
      case Primitive::Sum0: return c.sum0;
      case Primitive::Sum1: return c.sum1;
      case Primitive::Const: return k[n.constant];
    }
    return 0.0;
  }
};

}  // namespace

FeatureTable precompute_features(const DnaRecord& r) {
  FeatureTable f;
  std::array<double, 4> counts{};
  for (int i = 0; i < kReadLength; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Base b = r.bases[k];
    f.run_len[k] = (i > 0 && b == r.bases[k - 1]) ? f.run_len[k - 1] + 1 : 1;
    if (b == Base::N) {
      ++f.count_n;
      for (double& c : counts) c += 0.25;
    } else {
      counts[static_cast<std::size_t>(b)] += 1.0;
    }
    const double total = i + 1;
    double h = 0.0;
    for (double c : counts) {
      if (c > 0.0) {
        const double p = c / total;
        h -= p * std::log2(p);
      }
    }
    f.entropy_prefix[k] = std::max(0.0, h);
  }
  f.entropy_total = f.entropy_prefix[kLast];
  return f;
}

PreparedRead prepare(const DnaRecord& r) {
  const FeatureTable f = precompute_features(r);
  PreparedRead p;
  p.bases = r.bases;
  for (int i = 0; i < kReadLength; ++i) {
    const auto k = static_cast<std::size_t>(i);
    p.qual[k] = r.qual(i);
    p.run[k] = f.run_len[k];
    p.entropy[k] = f.entropy_prefix[k];
  }
  p.count_n = f.count_n;
  p.x = r.x;
  p.y = r.y;
  return p;
}

std::vector<PreparedRead> prepare_all(std::span<const DnaRecord> records) {
  std::vector<PreparedRead> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(prepare(r));
  return out;
}

void EvalContext::reset(const PreparedRead& r) {
  *this = EvalContext{};
  read = &r;
}

double Interpreter::eval_node(const Tree& t, EvalContext& ctx) const {
  const int home = std::clamp(ctx.base_pos, 1, kReadLength) - 1;
  Machine mc{t.nodes().data(), constants_, *ctx.read, ctx, home, std::min(home + ctx.look_offset, kLast)};
  const double v = mc.run();
  ctx.op_counter += mc.ops;
  return v;
}

double Interpreter::eval_individual(const Individual& ind, const PreparedRead& r, EvalContext& ctx,
                                    EvalTrace* trace) const {
  ctx.reset(r);
  const Tree& t0 = ind.tree(Role::Prepass0);
  const Tree& t1 = ind.tree(Role::Prepass1);

  ctx.phase = Phase::Pass0;
  for (int p = 1; p <= kReadLength; ++p) {
    ctx.base_pos = p;
    const double v = eval_node(t0, ctx);
    ctx.m[static_cast<std::size_t>(p - 1)] = v;
    ctx.sum0 += v;
    if (trace) trace->pass0[static_cast<std::size_t>(p - 1)] = v;
  }

  ctx.phase = Phase::Pass1;
  for (int p = 1; p <= kReadLength; ++p) {
    ctx.base_pos = p;
    const double v = eval_node(t1, ctx);
    ctx.sum1 += v;
    if (trace) trace->pass1[static_cast<std::size_t>(p - 1)] = v;
  }

  // position-dependent terminals in the result tree read the final base
  ctx.phase = Phase::Result;
  ctx.base_pos = kReadLength;
  const double out = eval_node(ind.tree(Role::Result), ctx);
  if (trace) trace->result = out;
  return out;
}

BenchResult throughput_bench(const Individual& ind, const ConstantTable& table,
                             std::span<const PreparedRead> records, int repeats) {
  BenchResult res;
  const Interpreter interp(table);
  volatile double sink = 0.0;
  for (int rep = 0; rep < repeats; ++rep) {
    std::uint64_t ops = 0;
    double acc = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& r : records) {
      EvalContext ctx;
      acc += interp.eval_individual(ind, r, ctx);
      ops += ctx.op_counter;
    }
    const auto t1 = std::chrono::steady_clock::now();
    sink = sink + acc;
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    res.ops_per_repeat = ops;
    res.rates.push_back(secs > 0.0 ? static_cast<double>(ops) / secs : 0.0);
  }
  if (!res.rates.empty()) {
    double s = 0.0;
    for (double v : res.rates) s += v;
    res.mean = s / static_cast<double>(res.rates.size());
    double ss = 0.0;
    for (double v : res.rates) ss += (v - res.mean) * (v - res.mean);
    res.stddev = res.rates.size() > 1 ? std::sqrt(ss / static_cast<double>(res.rates.size() - 1)) : 0.0;
  }
  return res;
}

}  // namespace blastgp
