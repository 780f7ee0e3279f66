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
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blastgp {

using Rng = std::mt19937_64;

inline constexpr int kReadLength = 36;
inline constexpr int kMaxQual10 = 40;        // 4.0 on the 0..4 scale
inline constexpr double kNoMatchLog10E = 2.0;  // E = 100
inline constexpr double kHighQualityE = 1e-5;

enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3, N = 4 };

char base_char(Base b);
// Returns false for anything outside {A,C,G,T,N} (case-insensitive).
bool parse_base(char c, Base& out);

/// One fixed-length read. Quality is stored in tenths so every value is an
/// exact multiple of 0.1 on the 0..4.0 scale.
struct DnaRecord {
  std::string id;
  std::array<Base, kReadLength> bases{};
  std::array<std::uint8_t, kReadLength> qual10{};
  double x = 0.0;
  double y = 0.0;

  double qual(int i) const { return qual10[static_cast<std::size_t>(i)] / 10.0; }
  std::string sequence() const;

  friend bool operator==(const DnaRecord&, const DnaRecord&) = default;
};

struct BlastLabel {
  double log10_e = kNoMatchLog10E;
  int best_len = 0;
  bool has_hq_match = false;
  bool has_multi_hq = false;

  friend bool operator==(const BlastLabel&, const BlastLabel&) = default;
};

struct Hit {
  std::string subject_id;
  double e_value = 0.0;
  int match_len = 0;
};

struct HitSummary {
  std::string query_id;
  std::vector<Hit> hits;  // ascending e_value
};

struct QualityConfig {
  int offset = 33;              // 33 (Sanger/Illumina 1.8+) or 64 (Solexa/Illumina 1.3)
  double tile_extent = 2048.0;  // pixels
};

struct FastqResult {
  std::vector<DnaRecord> records;
  std::size_t skipped_length = 0;     // sequence length != kReadLength
  std::size_t skipped_malformed = 0;  // truncated record, bad separator, seq/qual length mismatch
  std::size_t skipped_symbol = 0;     // base outside {A,C,G,T,N}
  std::size_t coordinate_warnings = 0;
  std::vector<std::string> diagnostics;
};

FastqResult parse_fastq(std::istream& in, const QualityConfig& cfg = {});
void write_fastq(std::ostream& out, const std::vector<DnaRecord>& records,
                 const QualityConfig& cfg = {});

/// Column positions (0-based) in a tab-separated hit table. The defaults
/// follow the common 12-column tabular layout
/// (qseqid sseqid pident length mismatch gapopen qstart qend sstart send evalue bitscore).
struct HitColumns {
  int query = 0;
  int subject = 1;
  int length = 3;
  int evalue = 10;
};

struct HitParseResult {
  std::map<std::string, HitSummary> summaries;
  std::size_t rows = 0;
  std::size_t skipped_unparseable = 0;
  std::size_t skipped_nonpositive_e = 0;
  std::size_t filtered_subject = 0;
};

/// An empty allowlist accepts every subject.
HitParseResult parse_hits(std::istream& in, const std::set<std::string>& allowed_subjects,
                          const HitColumns& cols = {});

BlastLabel build_label(const HitSummary& h);

// -- synthetic data ---------------------------------------------------------

enum class OracleKind { EValue, Length, Match, Repeat };

std::string_view oracle_name(OracleKind k);
OracleKind parse_oracle_kind(std::string_view name);  // throws std::invalid_argument

// Auto picks affine for the E oracle and rank for the length oracle.
enum class TargetMapping { Auto, Affine, Rank };

/// Per-read quality is a read-level mean that decays towards the 3' end plus
/// per-base Gaussian jitter, rounded to 0.1 and floored.
struct QualityModel {
  double level_lo = 0.6;
  double level_hi = 2.6;
  double decay_max = 1.0;
  double jitter_sd = 0.4;
  double floor = 0.2;
};

struct OracleSpec {
  OracleKind kind = OracleKind::EValue;
  double noise = 0.0;  // Gaussian noise sd as a fraction of the oracle's sample sd
  double n_rate = 0.01;
  QualityModel quality;
  TargetMapping mapping = TargetMapping::Auto;  // regression oracles only
};

struct SyntheticDataset {
  std::vector<DnaRecord> records;
  std::vector<BlastLabel> labels;
  std::vector<double> oracle_values;  // noise-free oracle output per read
  std::map<std::string, std::string> manifest;
};

// Raw oracle formulas on a single read.
double e_value_oracle(const DnaRecord& r);
double length_oracle(const DnaRecord& r);
double match_oracle(const DnaRecord& r);
double repeat_oracle(const DnaRecord& r);
double oracle_value(OracleKind k, const DnaRecord& r);

inline constexpr double kMatchThreshold = 72.0;

SyntheticDataset generate_synthetic(std::size_t n, const OracleSpec& spec, std::uint64_t seed);

DnaRecord random_record(Rng& rng, const QualityModel& q, double n_rate, std::string id);

// -- dataset files ------------------------------------------------------------

void write_labels(std::ostream& out, const std::vector<std::string>& ids,
                  const std::vector<BlastLabel>& labels);
std::vector<std::pair<std::string, BlastLabel>> read_labels(std::istream& in);

void write_records(std::ostream& out, const std::vector<DnaRecord>& records);
std::vector<DnaRecord> read_records(std::istream& in);

struct LabeledDataset {
  std::vector<DnaRecord> records;
  std::vector<BlastLabel> labels;
  std::map<std::string, std::string> manifest;
};

/// A dataset directory holds records.tsv, labels.tsv and manifest.txt.
void save_dataset(const std::string& dir, const LabeledDataset& d);
LabeledDataset load_dataset(const std::string& dir);

}  // namespace blastgp
