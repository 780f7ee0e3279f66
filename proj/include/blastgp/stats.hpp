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

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "blastgp/fitness.hpp"

namespace blastgp {

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

struct ValidationReport {
  TaskKind task = TaskKind::EValueRegression;
  std::size_t n = 0;
  // regression
  double r = 0.0;
  double se = 0.0;
  bool degenerate = false;
  // classification
  Confusion confusion;
  double accuracy = 0.0;
  double minority_recall = 0.0;
  bool minority_is_positive = true;
  double chi2 = 0.0;
};

/// Regression: r and the large-sample standard error (1 - r^2) / sqrt(n - 1).
/// Classification: positive means prediction > 0; chi-squared compares
/// (correct, incorrect) against (n/2, n/2). Throws std::invalid_argument
/// when n < 2 or the spans differ in length.
ValidationReport make_report(TaskKind task, std::span<const double> predictions, std::span<const double> targets);

std::vector<double> predict_all(const Individual& ind, const Interpreter& interp, std::span<const PreparedRead> reads);

ValidationReport validate(const Individual& ind, const ConstantTable& constants, std::span<const DnaRecord> records,
                          std::span<const BlastLabel> labels, TaskKind task);

/// Scan identifier of a read id: everything before the first '.', or "" when absent.
std::string scan_of(const std::string& read_id);

/// One report per scan, for groups with at least two reads.
std::map<std::string, ValidationReport> per_scan_reports(TaskKind task, std::span<const DnaRecord> records,
                                                         std::span<const double> predictions,
                                                         std::span<const double> targets);

void write_report_tsv_header(std::ostream& out);
void write_report_tsv_row(std::ostream& out, const std::string& group, const ValidationReport& r);
void write_report_text(std::ostream& out, const ValidationReport& r);

}  // namespace blastgp
