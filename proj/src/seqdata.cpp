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

#include "blastgp/seqdata.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace blastgp {

char base_char(Base b) {
  static constexpr char kChars[] = {'A', 'C', 'G', 'T', 'N'};
  return kChars[static_cast<int>(b)];
}

bool parse_base(char c, Base& out) {
  switch (c) {
    case 'A': case 'a': out = Base::A; return true;
    case 'C': case 'c': out = Base::C; return true;
    case 'G': case 'g': out = Base::G; return true;
    case 'T': case 't': out = Base::T; return true;
    case 'N': case 'n': out = Base::N; return true;
    default: return false;
  }
}

std::string DnaRecord::sequence() const {
  std::string s(kReadLength, 'N');
  for (int i = 0; i < kReadLength; ++i) s[static_cast<std::size_t>(i)] = base_char(bases[static_cast<std::size_t>(i)]);
  return s;
}

namespace {

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool parse_uint(std::string_view s, long& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && out >= 0;
}

// Finds the first header token shaped like `...:x:y` (optionally with a
// trailing /1 or /2 mate suffix) and returns its last two integer fields.
bool header_coordinates(std::string_view header, long& px, long& py) {
  std::size_t i = 0;
  while (i < header.size()) {
    while (i < header.size() && std::isspace(static_cast<unsigned char>(header[i]))) ++i;
    std::size_t j = i;
    while (j < header.size() && !std::isspace(static_cast<unsigned char>(header[j]))) ++j;
    std::string_view tok = header.substr(i, j - i);
    i = j;
    if (auto slash = tok.rfind('/'); slash != std::string_view::npos) tok = tok.substr(0, slash);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= tok.size(); ++k) {
      if (k == tok.size() || tok[k] == ':') {
        fields.push_back(tok.substr(start, k - start));
        start = k + 1;
      }
    }
    if (fields.size() < 4) continue;
    if (parse_uint(fields[fields.size() - 2], px) && parse_uint(fields.back(), py)) return true;
  }
  return false;
}

}  // namespace

FastqResult parse_fastq(std::istream& in, const QualityConfig& cfg) {
  FastqResult res;
  std::string header, seq, plus, qual;
  std::size_t lineno = 0;
  auto diag = [&](std::size_t line, const std::string& msg) {
    res.diagnostics.push_back("line " + std::to_string(line) + ": " + msg);
  };

  while (read_line(in, header)) {
    ++lineno;
    if (header.empty()) continue;
    const std::size_t record_line = lineno;
    if (header[0] != '@') {
      ++res.skipped_malformed;
      diag(record_line, "expected '@' header");
      continue;
    }
    const bool have_seq = read_line(in, seq);
    const bool have_plus = have_seq && read_line(in, plus);
    const bool have_qual = have_plus && read_line(in, qual);
    lineno += static_cast<std::size_t>(have_seq) + have_plus + have_qual;
    if (!have_qual) {
      ++res.skipped_malformed;
      diag(record_line, "truncated record");
      break;
    }
    if (plus.empty() || plus[0] != '+') {
      ++res.skipped_malformed;
      diag(record_line, "missing '+' separator");
      continue;
    }
    if (seq.size() != qual.size()) {
      ++res.skipped_malformed;
      diag(record_line, "sequence and quality lengths differ");
      continue;
    }
    if (seq.size() != static_cast<std::size_t>(kReadLength)) {
      ++res.skipped_length;
      continue;
    }

    DnaRecord r;
    std::string_view h(header);
    h.remove_prefix(1);
    const auto sp = h.find_first_of(" \t");
    r.id = std::string(h.substr(0, sp));

    bool ok = true;
    for (int i = 0; i < kReadLength && ok; ++i) {
      const auto k = static_cast<std::size_t>(i);
      ok = parse_base(seq[k], r.bases[k]);
      const int phred = static_cast<unsigned char>(qual[k]) - cfg.offset;
      r.qual10[k] = static_cast<std::uint8_t>(std::clamp(phred, 0, kMaxQual10));
    }
    if (!ok) {
      ++res.skipped_symbol;
      diag(record_line, "base outside {A,C,G,T,N}");
      continue;
    }

    long px = 0, py = 0;
    if (header_coordinates(h, px, py)) {
      r.x = std::clamp(static_cast<double>(px) / cfg.tile_extent, 0.0, 1.0);
      r.y = std::clamp(static_cast<double>(py) / cfg.tile_extent, 0.0, 1.0);
    } else {
      ++res.coordinate_warnings;
      diag(record_line, "no tile coordinates in header; x=y=0");
    }
    res.records.push_back(std::move(r));
  }
  return res;
}

void write_fastq(std::ostream& out, const std::vector<DnaRecord>& records, const QualityConfig& cfg) {
  for (const auto& r : records) {
    const auto px = std::lround(r.x * cfg.tile_extent);
    const auto py = std::lround(r.y * cfg.tile_extent);
    out << '@' << r.id << " 0:1:1:" << px << ':' << py << '\n' << r.sequence() << "\n+\n";
    for (auto q : r.qual10) out << static_cast<char>(cfg.offset + q);
    out << '\n';
  }
}

HitParseResult parse_hits(std::istream& in, const std::set<std::string>& allowed_subjects,
                          const HitColumns& cols) {
  HitParseResult res;
  const int needed = std::max({cols.query, cols.subject, cols.length, cols.evalue}) + 1;
  std::string line;
  std::vector<std::string> fields;
  while (read_line(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++res.rows;
    fields.clear();
    std::size_t start = 0;
    for (std::size_t k = 0; k <= line.size(); ++k) {
      if (k == line.size() || line[k] == '\t') {
        fields.push_back(line.substr(start, k - start));
        start = k + 1;
      }
    }
    if (static_cast<int>(fields.size()) < needed) {
      ++res.skipped_unparseable;
      continue;
    }
    const auto& query = fields[static_cast<std::size_t>(cols.query)];
    const auto& subject = fields[static_cast<std::size_t>(cols.subject)];
    double e = 0.0;
    long len = 0;
    try {
      std::size_t used = 0;
      const auto& es = fields[static_cast<std::size_t>(cols.evalue)];
      e = std::stod(es, &used);
      if (used != es.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      ++res.skipped_unparseable;
      continue;
    }
    if (query.empty() || !parse_uint(fields[static_cast<std::size_t>(cols.length)], len)) {
      ++res.skipped_unparseable;
      continue;
    }
    if (!(e > 0.0)) {
      ++res.skipped_nonpositive_e;
      continue;
    }
    auto& summary = res.summaries[query];
    summary.query_id = query;
    if (!allowed_subjects.empty() && !allowed_subjects.contains(subject)) {
      ++res.filtered_subject;
      continue;
    }
    summary.hits.push_back(Hit{subject, e, static_cast<int>(len)});
  }
  for (auto& [q, s] : res.summaries) {
    std::stable_sort(s.hits.begin(), s.hits.end(),
                     [](const Hit& a, const Hit& b) { return a.e_value < b.e_value; });
  }
  return res;
}

BlastLabel build_label(const HitSummary& h) {
  BlastLabel l;
  if (h.hits.empty()) return l;
  const auto& best = h.hits.front();
  l.log10_e = std::log10(best.e_value);
  l.best_len = best.match_len;
  l.has_hq_match = best.e_value < kHighQualityE;
  const auto hq = std::count_if(h.hits.begin(), h.hits.end(),
                                [](const Hit& x) { return x.e_value < kHighQualityE; });
  l.has_multi_hq = hq >= 2;
  return l;
}

}  // namespace blastgp
