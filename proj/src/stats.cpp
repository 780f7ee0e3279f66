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

#include "blastgp/stats.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace blastgp {

namespace {

std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

}  // namespace

ValidationReport make_report(TaskKind task, std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) throw std::invalid_argument("predictions and targets differ in length");
  if (predictions.size() < 2) throw std::invalid_argument("validation needs at least two examples");
  ValidationReport rep;
  rep.task = task;
  rep.n = predictions.size();
  const double n = static_cast<double>(rep.n);
  if (!is_classification(task)) {
    const Correlation c = pearson(predictions, targets);
    rep.degenerate = c.degenerate;
    rep.r = c.r;
    rep.se = (1.0 - c.r * c.r) / std::sqrt(n - 1.0);
    return rep;
  }
  Confusion& m = rep.confusion;
  for (std::size_t i = 0; i < rep.n; ++i) {
    const bool pred = std::isfinite(predictions[i]) && predictions[i] > 0.0;
    const bool truth = targets[i] > 0.5;
    if (pred && truth) ++m.tp;
    else if (pred) ++m.fp;
    else if (truth) ++m.fn;
    else ++m.tn;
  }
  const double correct = static_cast<double>(m.tp + m.tn);
  rep.accuracy = correct / n;
  const std::size_t pos = m.tp + m.fn;
  const std::size_t neg = m.tn + m.fp;
  rep.minority_is_positive = pos <= neg;
  const std::size_t minority = rep.minority_is_positive ? pos : neg;
  const std::size_t hit = rep.minority_is_positive ? m.tp : m.tn;
  rep.minority_recall = minority == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(minority);
  const double expect = n / 2.0;
  const double wrong = n - correct;
  rep.chi2 = (correct - expect) * (correct - expect) / expect + (wrong - expect) * (wrong - expect) / expect;
  return rep;
}

std::vector<double> predict_all(const Individual& ind, const Interpreter& interp, std::span<const PreparedRead> reads) {
  std::vector<double> out;
  out.reserve(reads.size());
  EvalContext ctx;
  for (const auto& r : reads) out.push_back(interp.eval_individual(ind, r, ctx));
  return out;
}

ValidationReport validate(const Individual& ind, const ConstantTable& constants, std::span<const DnaRecord> records,
                          std::span<const BlastLabel> labels, TaskKind task) {
  const TrainingSet data = make_training_set(records, labels, task);
  const Interpreter interp(constants);
  return make_report(task, predict_all(ind, interp, data.reads), data.targets);
}

std::string scan_of(const std::string& read_id) {
  const auto dot = read_id.find('.');
  return dot == std::string::npos ? std::string() : read_id.substr(0, dot);
}

std::map<std::string, ValidationReport> per_scan_reports(TaskKind task, std::span<const DnaRecord> records,
                                                         std::span<const double> predictions,
                                                         std::span<const double> targets) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& g = groups[scan_of(records[i].id)];
    g.first.push_back(predictions[i]);
    g.second.push_back(targets[i]);
  }
  std::map<std::string, ValidationReport> out;
  if (groups.size() < 2) return out;
  for (const auto& [scan, g] : groups) {
    if (g.first.size() >= 2) out.emplace(scan, make_report(task, g.first, g.second));
  }
  return out;
}

void write_report_tsv_header(std::ostream& out) {
  out << "group\ttask\tn\tr\tse\tdegenerate\taccuracy\ttp\tfp\ttn\tfn\tminority_recall\tchi2\n";
}

void write_report_tsv_row(std::ostream& out, const std::string& group, const ValidationReport& r) {
  const auto& m = r.confusion;
  out << group << '\t' << task_name(r.task) << '\t' << r.n << '\t';
  if (is_classification(r.task)) {
    out << "NA\tNA\tNA\t" << num(r.accuracy) << '\t' << m.tp << '\t' << m.fp << '\t' << m.tn << '\t' << m.fn << '\t'
        << num(r.minority_recall) << '\t' << num(r.chi2) << '\n';
  } else {
    out << num(r.r) << '\t' << num(r.se) << '\t' << (r.degenerate ? 1 : 0) << "\tNA\tNA\tNA\tNA\tNA\tNA\tNA\n";
  }
}

void write_report_text(std::ostream& out, const ValidationReport& r) {
  out << "task: " << task_name(r.task) << "\nn: " << r.n << '\n';
  if (!is_classification(r.task)) {
    if (r.degenerate) out << "correlation: degenerate (constant or non-finite predictions)\n";
    else out << "correlation r: " << r.r << " (standard error " << r.se << ")\n";
    return;
  }
  const auto& m = r.confusion;
  out << "accuracy: " << r.accuracy << '\n'
      << "confusion: tp=" << m.tp << " fp=" << m.fp << " tn=" << m.tn << " fn=" << m.fn << '\n'
      << "minority class (" << (r.minority_is_positive ? "positive" : "negative") << ") recall: " << r.minority_recall
      << '\n'
      << "chi-squared vs 50% chance on (correct, incorrect), 1 dof: " << r.chi2 << '\n';
}

}  // namespace blastgp
