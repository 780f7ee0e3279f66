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

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "blastgp/config.hpp"
#include "blastgp/seqdata.hpp"

namespace blastgp {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= line.size(); ++k) {
    if (k == line.size() || line[k] == '\t') {
      out.push_back(line.substr(start, k - start));
      start = k + 1;
    }
  }
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::runtime_error(where + ": bad number '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& where) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::runtime_error(where + ": bad integer '" + s + "'");
  return v;
}

bool to_flag(const std::string& s, const std::string& where) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::runtime_error(where + ": expected 0/1, got '" + s + "'");
}

}  // namespace

void write_labels(std::ostream& out, const std::vector<std::string>& ids,
                  const std::vector<BlastLabel>& labels) {
  if (ids.size() != labels.size()) throw std::invalid_argument("ids/labels size mismatch");
  out << "#read_id\tlog10_e\tbest_len\thq\tmulti\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& l = labels[i];
    out << ids[i] << '\t' << shortest(l.log10_e) << '\t' << l.best_len << '\t'
        << (l.has_hq_match ? 1 : 0) << '\t' << (l.has_multi_hq ? 1 : 0) << '\n';
  }
}

std::vector<std::pair<std::string, BlastLabel>> read_labels(std::istream& in) {
  std::vector<std::pair<std::string, BlastLabel>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto where = "labels line " + std::to_string(lineno);
    auto f = split_tabs(line);
    if (f.size() != 5) throw std::runtime_error(where + ": expected 5 columns");
    BlastLabel l;
    l.log10_e = to_double(f[1], where);
    l.best_len = to_int(f[2], where);
    l.has_hq_match = to_flag(f[3], where);
    l.has_multi_hq = to_flag(f[4], where);
    out.emplace_back(f[0], l);
  }
  return out;
}

void write_records(std::ostream& out, const std::vector<DnaRecord>& records) {
  out << "#read_id\tbases\tqual\tx\ty\n";
  for (const auto& r : records) {
    out << r.id << '\t' << r.sequence() << '\t';
    for (int i = 0; i < kReadLength; ++i) {
      const int q = r.qual10[static_cast<std::size_t>(i)];
      out << (i ? "," : "") << q / 10 << '.' << q % 10;
    }
    out << '\t' << shortest(r.x) << '\t' << shortest(r.y) << '\n';
  }
}

std::vector<DnaRecord> read_records(std::istream& in) {
  std::vector<DnaRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto where = "records line " + std::to_string(lineno);
    auto f = split_tabs(line);
    if (f.size() != 5) throw std::runtime_error(where + ": expected 5 columns");
    DnaRecord r;
    r.id = f[0];
    if (f[1].size() != static_cast<std::size_t>(kReadLength)) throw std::runtime_error(where + ": read length");
    for (int i = 0; i < kReadLength; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (!parse_base(f[1][k], r.bases[k])) throw std::runtime_error(where + ": bad base");
    }
    std::istringstream qs(f[2]);
    std::string tok;
    int i = 0;
    while (std::getline(qs, tok, ',')) {
      if (i >= kReadLength) throw std::runtime_error(where + ": too many quality values");
      const double q = to_double(tok, where);
      const long q10 = std::lround(q * 10.0);
      if (q10 < 0 || q10 > kMaxQual10 || std::abs(q * 10.0 - q10) > 1e-6) {
        throw std::runtime_error(where + ": quality must be a multiple of 0.1 in [0,4]");
      }
      r.qual10[static_cast<std::size_t>(i++)] = static_cast<std::uint8_t>(q10);
    }
    if (i != kReadLength) throw std::runtime_error(where + ": expected 36 quality values");
    r.x = to_double(f[3], where);
    r.y = to_double(f[4], where);
    if (r.x < 0 || r.x > 1 || r.y < 0 || r.y > 1) throw std::runtime_error(where + ": x/y outside [0,1]");
    out.push_back(std::move(r));
  }
  return out;
}

void save_dataset(const std::string& dir, const LabeledDataset& d) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> ids;
  ids.reserve(d.records.size());
  for (const auto& r : d.records) ids.push_back(r.id);
  {
    std::ofstream out(fs::path(dir) / "records.tsv");
    write_records(out, d.records);
  }
  {
    std::ofstream out(fs::path(dir) / "labels.tsv");
    write_labels(out, ids, d.labels);
  }
  std::ofstream out(fs::path(dir) / "manifest.txt");
  write_key_values(out, d.manifest);
  if (!out) throw std::runtime_error("failed writing dataset to " + dir);
}

LabeledDataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  LabeledDataset d;
  std::ifstream rin(fs::path(dir) / "records.tsv");
  if (!rin) throw std::runtime_error("cannot open " + (fs::path(dir) / "records.tsv").string());
  d.records = read_records(rin);
  std::ifstream lin(fs::path(dir) / "labels.tsv");
  if (!lin) throw std::runtime_error("cannot open " + (fs::path(dir) / "labels.tsv").string());
  std::unordered_map<std::string, BlastLabel> by_id;
  for (auto& [id, l] : read_labels(lin)) by_id[id] = l;
  d.labels.reserve(d.records.size());
  for (const auto& r : d.records) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) throw std::runtime_error("no label for read " + r.id);
    d.labels.push_back(it->second);
  }
  const auto manifest = fs::path(dir) / "manifest.txt";
  if (fs::exists(manifest)) d.manifest = read_key_values_file(manifest.string());
  return d;
}

}  // namespace blastgp
