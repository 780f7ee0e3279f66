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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "blastgp/seqdata.hpp"

using namespace blastgp;

namespace {

std::string fixture(const char* name) { return std::string(BLASTGP_FIXTURES) + "/" + name; }

std::string fastq_record(const std::string& header, const std::string& seq, const std::string& qual) {
  return header + "\n" + seq + "\n+\n" + qual + "\n";
}

DnaRecord uniform_record(Base b, int q10) {
  DnaRecord r;
  r.bases.fill(b);
  r.qual10.fill(static_cast<std::uint8_t>(q10));
  return r;
}

}  // namespace

TEST_CASE("fixture FASTQ decodes to the hand-decoded arrays") {
  std::ifstream in(fixture("two_reads.fastq"));
  const FastqResult res = parse_fastq(in);
  REQUIRE(res.records.size() == 2);
  CHECK(res.skipped_length + res.skipped_malformed + res.skipped_symbol == 0);
  CHECK(res.coordinate_warnings == 0);

  const DnaRecord& a = res.records[0];
  CHECK(a.id == "SRR001770.1");
  CHECK(a.sequence() == "ACGTACGTACGTACGTACGTACGTACGTACGTACGT");
  for (int i = 0; i < 34; ++i) CHECK(a.qual(i) == doctest::Approx(4.0));
  CHECK(a.qual(34) == 0.0);  // '!' = phred 0
  CHECK(a.qual(35) == doctest::Approx(1.0));  // '+' = phred 10
  CHECK(a.x == 0.5);     // 1024 / 2048
  CHECK(a.y == 0.25);    // 512 / 2048

  const DnaRecord& b = res.records[1];
  CHECK(b.id == "SRR001771.2");
  CHECK(b.bases[0] == Base::N);
  CHECK(b.bases[35] == Base::T);
  CHECK(b.qual(0) == doctest::Approx(1.0));
  CHECK(b.qual(5) == doctest::Approx(2.0));   // '5' = phred 20
  CHECK(b.qual(10) == doctest::Approx(3.0));  // '?' = phred 30
  CHECK(b.qual(15) == doctest::Approx(4.0));
  CHECK(b.x == 0.0);
  CHECK(b.y == 1.0);  // 4096 clamps to the tile edge
}

TEST_CASE("quality decoding bounds and offsets") {
  const std::string seq(36, 'A');
  std::istringstream in(fastq_record("@r1 a:1:2:3:4", seq, std::string(36, 'I')) +
                        fastq_record("@r2 a:1:2:3:4", seq, std::string(36, '!')) +
                        fastq_record("@r3 a:1:2:3:4", seq, std::string(36, 'J')));
  const auto res = parse_fastq(in);
  REQUIRE(res.records.size() == 3);
  CHECK(res.records[0].qual(0) == doctest::Approx(4.0));  // phred 40
  CHECK(res.records[1].qual(0) == 0.0);                   // phred 0
  CHECK(res.records[2].qual(0) == doctest::Approx(4.0));  // phred 41 caps at 40

  QualityConfig solexa;
  solexa.offset = 64;
  std::istringstream in64(fastq_record("@r a:1:2:3:4", seq, std::string(36, 'h')));  // 104 - 64 = 40
  CHECK(parse_fastq(in64, solexa).records.at(0).qual(0) == doctest::Approx(4.0));
}

TEST_CASE("malformed, short and foreign-symbol records are skipped and counted") {
  const std::string seq(36, 'C');
  const std::string q(36, 'I');
  std::istringstream in(fastq_record("@ok a:1:2:3:4", seq, q) + fastq_record("@short a:1:2:3:4", seq.substr(1), q.substr(1)) +
                        fastq_record("@mismatch a:1:2:3:4", seq, q.substr(1)) +
                        fastq_record("@symbol a:1:2:3:4", std::string(35, 'C') + "X", q) +
                        "@nosep a:1:2:3:4\n" + seq + "\n-\n" + q + "\n" + fastq_record("@nocoord", seq, q) +
                        "@truncated\n" + seq + "\n");
  const auto res = parse_fastq(in);
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].id == "ok");
  CHECK(res.records[1].id == "nocoord");
  CHECK(res.records[1].x == 0.0);
  CHECK(res.skipped_length == 1);
  CHECK(res.skipped_malformed == 3);
  CHECK(res.skipped_symbol == 1);
  CHECK(res.coordinate_warnings == 1);
  CHECK(!res.diagnostics.empty());
}

TEST_CASE("write_fastq then parse_fastq is the identity on well-formed records") {
  const auto d = generate_synthetic(200, OracleSpec{}, 5);
  std::stringstream ss;
  write_fastq(ss, d.records);
  const auto back = parse_fastq(ss);
  REQUIRE(back.records.size() == d.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) CHECK(back.records[i] == d.records[i]);
}

TEST_CASE("hit table fixture matches the hand count") {
  std::ifstream in(fixture("hits_10.tsv"));
  const auto res = parse_hits(in, {"chr1", "chr7", "chrX"});
  CHECK(res.rows == 10);
  CHECK(res.skipped_unparseable == 1);
  CHECK(res.skipped_nonpositive_e == 1);
  CHECK(res.filtered_subject == 3);
  REQUIRE(res.summaries.size() == 4);

  const auto& q1 = res.summaries.at("SRR001770.1").hits;
  REQUIRE(q1.size() == 2);
  CHECK(q1[0].e_value == 1e-10);
  CHECK(q1[1].e_value == 3e-7);
  CHECK(res.summaries.at("SRR001771.2").hits.size() == 2);
  CHECK(res.summaries.at("SRR001770.3").hits.empty());
  CHECK(res.summaries.at("SRR001770.5").hits.size() == 1);
  CHECK(res.summaries.count("SRR001770.4") == 0);

  const BlastLabel l1 = build_label(res.summaries.at("SRR001770.1"));
  CHECK(l1.log10_e == doctest::Approx(-10.0));
  CHECK(l1.best_len == 36);
  CHECK(l1.has_hq_match);
  CHECK(l1.has_multi_hq);
  const BlastLabel l2 = build_label(res.summaries.at("SRR001771.2"));
  CHECK(l2.log10_e == doctest::Approx(std::log10(0.004)));
  CHECK(l2.best_len == 24);
  CHECK(!l2.has_hq_match);
  const BlastLabel l3 = build_label(res.summaries.at("SRR001770.3"));
  CHECK(l3.log10_e == 2.0);
  CHECK(l3.best_len == 0);

  std::ifstream again(fixture("hits_10.tsv"));
  const auto all = parse_hits(again, {});
  CHECK(all.filtered_subject == 0);
  CHECK(all.summaries.at("SRR001770.1").hits.front().e_value == 1e-12);
}

TEST_CASE("hits are ordered best first") {
  std::istringstream in("q\ts\t0\t36\t0\t0\t0\t0\t0\t0\t1e-7\t0\nq\ts\t0\t30\t0\t0\t0\t0\t0\t0\t1e-10\t0\n");
  const auto res = parse_hits(in, {});
  const auto& h = res.summaries.at("q").hits;
  REQUIRE(h.size() == 2);
  CHECK(h[0].e_value == 1e-10);
  CHECK(h[1].e_value == 1e-7);
}

TEST_CASE("build_label rules") {
  CHECK(build_label(HitSummary{"q", {}}).log10_e == 2.0);
  const auto multi = build_label(HitSummary{"q", {{"a", 1e-6, 30}, {"b", 1e-6, 29}}});
  CHECK(multi.has_multi_hq);
  CHECK(multi.best_len == 30);
  const auto weak = build_label(HitSummary{"q", {{"a", 1e-4, 30}}});
  CHECK(!weak.has_hq_match);
  CHECK(!weak.has_multi_hq);
}

TEST_CASE("property: multi implies hq for any sorted summary") {
  Rng rng(3);
  std::uniform_real_distribution<double> expo(-12, 2);
  std::uniform_int_distribution<int> count(0, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    HitSummary h{"q", {}};
    const int n = count(rng);
    for (int k = 0; k < n; ++k) h.hits.push_back({"s", std::pow(10.0, expo(rng)), 30});
    std::sort(h.hits.begin(), h.hits.end(), [](const Hit& a, const Hit& b) { return a.e_value < b.e_value; });
    const auto l = build_label(h);
    if (l.has_multi_hq) CHECK(l.has_hq_match);
    if (l.has_hq_match) CHECK(l.log10_e < -5.0);
    CHECK((l.best_len == 0) == (l.log10_e == 2.0));
  }
}

TEST_CASE("oracle formulas on hand-checked reads") {
  // all quality 4.0 and no G: each of 35 terms is (4 - (-1)) / 4
  CHECK(match_oracle(uniform_record(Base::A, 40)) == doctest::Approx(43.75));
  CHECK(match_oracle(uniform_record(Base::A, 40)) < kMatchThreshold);
  CHECK(length_oracle(uniform_record(Base::C, 20)) == 666.0);
  CHECK(length_oracle(uniform_record(Base::C, 10)) == -666.0);  // Qual 1.0 is not > 1
  // Sum i*4 = 2664; Sum i/4 = 166.5
  CHECK(e_value_oracle(uniform_record(Base::T, 40)) == doctest::Approx(2664.0 * 166.5));
  // zero quality: i*0 = 0, and i/0 is protected to 1
  CHECK(e_value_oracle(uniform_record(Base::T, 0)) == 0.0);
}

TEST_CASE("synthetic datasets") {
  SUBCASE("same seed gives identical data") {
    const auto a = generate_synthetic(300, OracleSpec{}, 9);
    const auto b = generate_synthetic(300, OracleSpec{}, 9);
    CHECK(a.records == b.records);
    CHECK(a.oracle_values == b.oracle_values);
    for (std::size_t i = 0; i < a.labels.size(); ++i) CHECK(a.labels[i].log10_e == b.labels[i].log10_e);
    CHECK(a.manifest == b.manifest);
  }
  SUBCASE("records respect the domain invariants") {
    const auto d = generate_synthetic(500, OracleSpec{}, 1);
    for (const auto& r : d.records) {
      for (int i = 0; i < kReadLength; ++i) {
        CHECK(r.qual10[static_cast<std::size_t>(i)] <= 40);
      }
      CHECK(r.x >= 0.0);
      CHECK(r.x <= 1.0);
      CHECK(r.y >= 0.0);
      CHECK(r.y <= 1.0);
    }
  }
  SUBCASE("E labels are an order-preserving map of the oracle") {
    const auto d = generate_synthetic(400, OracleSpec{}, 2);
    CHECK(d.manifest.at("mapping") == "affine");
    for (std::size_t i = 1; i < d.records.size(); ++i) {
      if (d.oracle_values[i] < d.oracle_values[0]) CHECK(d.labels[i].log10_e <= d.labels[0].log10_e);
      if (d.oracle_values[i] > d.oracle_values[0]) CHECK(d.labels[i].log10_e >= d.labels[0].log10_e);
    }
  }
  SUBCASE("the highest length-oracle read lands in the length-36 bin") {
    OracleSpec s;
    s.kind = OracleKind::Length;
    const auto d = generate_synthetic(600, s, 4);
    const auto top = std::max_element(d.oracle_values.begin(), d.oracle_values.end()) - d.oracle_values.begin();
    CHECK(d.labels[static_cast<std::size_t>(top)].best_len == 36);
    for (const auto& l : d.labels) CHECK((l.best_len == 0 || (l.best_len >= 18 && l.best_len <= 36)));
  }
  SUBCASE("length labels fill all eleven length groups despite the tie at the maximum") {
    OracleSpec s;
    s.kind = OracleKind::Length;
    const auto d = generate_synthetic(2357, s, 3);
    std::map<int, int> groups;
    for (const auto& l : d.labels) groups[l.best_len == 0 ? 0 : l.best_len == 36 ? 36 : 18 + (l.best_len - 18) / 2 * 2]++;
    CHECK(groups.size() == 11);
    for (const auto& [g, count] : groups) CHECK_MESSAGE(count >= 35, "group " << g);
    const double top = *std::max_element(d.oracle_values.begin(), d.oracle_values.end());
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
      if (d.oracle_values[i] == top) CHECK(d.labels[i].best_len == 36);
    }
  }
  SUBCASE("match labels follow the threshold") {
    OracleSpec s;
    s.kind = OracleKind::Match;
    const auto d = generate_synthetic(500, s, 4);
    for (std::size_t i = 0; i < d.labels.size(); ++i) {
      CHECK(d.labels[i].has_hq_match == (d.oracle_values[i] > kMatchThreshold));
    }
  }
  SUBCASE("bad arguments") {
    OracleSpec s;
    s.noise = -1;
    CHECK_THROWS(generate_synthetic(10, s, 1));
    CHECK_THROWS(parse_oracle_kind("nope"));
  }
}

TEST_CASE("dataset directory round trip") {
  const auto d = generate_synthetic(50, OracleSpec{}, 8);
  const auto dir = std::filesystem::temp_directory_path() / "blastgp_test_dataset";
  std::filesystem::remove_all(dir);
  save_dataset(dir.string(), LabeledDataset{d.records, d.labels, d.manifest});
  const auto back = load_dataset(dir.string());
  CHECK(back.records == d.records);
  REQUIRE(back.labels.size() == d.labels.size());
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    CHECK(back.labels[i].log10_e == d.labels[i].log10_e);
    CHECK(back.labels[i].best_len == d.labels[i].best_len);
    CHECK(back.labels[i].has_hq_match == d.labels[i].has_hq_match);
  }
  CHECK(back.manifest == d.manifest);
  std::filesystem::remove_all(dir);
}
