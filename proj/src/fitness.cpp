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

#include "blastgp/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace blastgp {

std::string_view task_name(TaskKind k) {
  switch (k) {
    case TaskKind::EValueRegression: return "evalue";
    case TaskKind::LengthRegression: return "length";
    case TaskKind::MatchClassify: return "match";
    case TaskKind::RepeatClassify: return "repeat";
  }
  return "?";
}

TaskKind parse_task(std::string_view name) {
  for (auto k : {TaskKind::EValueRegression, TaskKind::LengthRegression, TaskKind::MatchClassify,
                 TaskKind::RepeatClassify}) {
    if (task_name(k) == name) return k;
  }
  throw ConfigError("unknown task '" + std::string(name) + "' (expected evalue, length, match or repeat)");
}

bool is_classification(TaskKind k) {
  return k == TaskKind::MatchClassify || k == TaskKind::RepeatClassify;
}

double task_target(TaskKind k, const BlastLabel& l) {
  switch (k) {
    case TaskKind::EValueRegression: return l.log10_e;
    case TaskKind::LengthRegression: return l.best_len;
    case TaskKind::MatchClassify: return l.has_hq_match ? 1.0 : 0.0;
    case TaskKind::RepeatClassify: return l.has_multi_hq ? 1.0 : 0.0;
  }
  return 0.0;
}

std::vector<double> task_targets(TaskKind k, std::span<const BlastLabel> labels) {
  std::vector<double> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(task_target(k, l));
  return out;
}

TaskSpec TaskSpec::defaults(TaskKind k) {
  TaskSpec t;
  t.kind = k;
  t.draw_per_bin = is_classification(k) ? 300 : 35;
  return t;
}

Bins assign_bins(std::span<const BlastLabel> labels, const TaskSpec& task) {
  if (labels.empty()) throw ConfigError("no training examples");
  Bins bins;
  switch (task.kind) {
    case TaskKind::EValueRegression: {
      std::map<long, std::vector<std::size_t>> by_decade;
      std::vector<std::size_t> no_match;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const double v = labels[i].log10_e;
        if (!std::isfinite(v)) throw ConfigError("label " + std::to_string(i) + " has non-finite log10_e");
        if (v == kNoMatchLog10E) {
          no_match.push_back(i);
        } else {
          by_decade[static_cast<long>(std::floor(v))].push_back(i);
        }
      }
      for (auto& [decade, idx] : by_decade) {
        bins.names.push_back("log10E[" + std::to_string(decade) + "," + std::to_string(decade + 1) + ")");
        bins.members.push_back(std::move(idx));
      }
      if (!no_match.empty()) {
        bins.names.push_back("no-match");
        bins.members.push_back(std::move(no_match));
      }
      return bins;
    }
    case TaskKind::LengthRegression: {
      bins.names.push_back("len 0");
      for (int lo = 18; lo <= 34; lo += 2) bins.names.push_back("len " + std::to_string(lo) + "-" + std::to_string(lo + 1));
      bins.names.push_back("len 36");
      bins.members.resize(bins.names.size());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const int len = labels[i].best_len;
        std::size_t b;
        if (len == 0) {
          b = 0;
        } else if (len >= 18 && len <= 35) {
          b = 1 + static_cast<std::size_t>((len - 18) / 2);
        } else if (len == 36) {
          b = 10;
        } else {
          throw ConfigError("label " + std::to_string(i) + " has length " + std::to_string(len) +
                            ", which fits no length bin");
        }
        bins.members[b].push_back(i);
      }
      break;
    }
    case TaskKind::MatchClassify:
    case TaskKind::RepeatClassify: {
      bins.names = {"positive", "negative"};
      bins.members.resize(2);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        bins.members[task_target(task.kind, labels[i]) > 0.5 ? 0 : 1].push_back(i);
      }
      break;
    }
  }
  for (std::size_t b = 0; b < bins.count(); ++b) {
    if (bins.members[b].empty()) {
      throw ConfigError("bin '" + bins.names[b] + "' is empty; the per-bin draw plan cannot be honoured");
    }
  }
  return bins;
}

// -- correlation and scoring ----------------------------------------------------

Correlation pearson(std::span<const double> xs, std::span<const double> ys) {
  Correlation c;
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) return c;
  const double x0 = xs[0], y0 = ys[0];
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) return c;
    const double dx = xs[i] - x0;
    const double dy = ys[i] - y0;
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double nn = static_cast<double>(n);
  // rounding can push a tiny variance below zero
  const double vx = std::max(0.0, sxx - sx * sx / nn);
  const double vy = std::max(0.0, syy - sy * sy / nn);
  const double cov = sxy - sx * sy / nn;
  if (!(vx > 0.0) || !(vy > 0.0)) return c;
  const double r = cov / (std::sqrt(vx) * std::sqrt(vy));
  if (!std::isfinite(r)) return c;
  c.r = std::clamp(r, -1.0, 1.0);
  c.degenerate = false;
  return c;
}

double score(TaskKind k, std::span<const double> predictions, std::span<const double> targets) {
  if (is_classification(k)) {
    double correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      if (!std::isfinite(predictions[i])) continue;
      if ((predictions[i] > 0.0) == (targets[i] > 0.5)) correct += 1;
    }
    return correct;
  }
  for (double p : predictions) {
    if (!std::isfinite(p)) return kDegenerateFitness;
  }
  const Correlation c = pearson(predictions, targets);
  return c.degenerate ? kDegenerateFitness : c.r;
}

TrainingSet make_training_set(std::span<const DnaRecord> records, std::span<const BlastLabel> labels, TaskKind k) {
  if (records.size() != labels.size()) throw std::invalid_argument("records/labels size mismatch");
  TrainingSet t;
  t.reads = prepare_all(records);
  t.targets = task_targets(k, labels);
  return t;
}

double fitness(const Individual& ind, const Interpreter& interp, const TrainingSet& data,
               std::span<const std::size_t> sample, TaskKind k, std::vector<double>& pred,
               std::vector<double>& target) {
  pred.clear();
  target.clear();
  EvalContext ctx;
  if (sample.empty()) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      pred.push_back(interp.eval_individual(ind, data.reads[i], ctx));
    }
    return score(k, pred, data.targets);
  }
  for (auto i : sample) {
    pred.push_back(interp.eval_individual(ind, data.reads[i], ctx));
    target.push_back(data.targets[i]);
  }
  return score(k, pred, target);
}

double fitness(const Individual& ind, const Interpreter& interp, const TrainingSet& data,
               std::span<const std::size_t> sample, TaskKind k) {
  std::vector<double> p, t;
  return fitness(ind, interp, data, sample, k, p, t);
}

}  // namespace blastgp
