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

#include <cmath>
#include <limits>
#include <set>

#include "blastgp/fitness.hpp"
#include "oracles.hpp"

using namespace blastgp;

namespace {

BlastLabel e_label(double log10_e) {
  BlastLabel l;
  l.log10_e = log10_e;
  l.best_len = log10_e == kNoMatchLog10E ? 0 : 36;
  return l;
}

BlastLabel len_label(int len) {
  BlastLabel l;
  l.best_len = len;
  if (len > 0) l.log10_e = -8;
  return l;
}

BlastLabel class_label(bool pos) {
  BlastLabel l;
  l.log10_e = -10;
  l.best_len = 36;
  l.has_hq_match = true;
  l.has_multi_hq = pos;
  return l;
}

std::vector<BlastLabel> classification_labels(std::size_t pos, std::size_t neg) {
  std::vector<BlastLabel> v;
  for (std::size_t i = 0; i < pos; ++i) v.push_back(class_label(true));
  for (std::size_t i = 0; i < neg; ++i) v.push_back(class_label(false));
  return v;
}

}  // namespace

TEST_CASE("task targets") {
  const BlastLabel l = e_label(-7.5);
  CHECK(task_target(TaskKind::EValueRegression, l) == -7.5);  // log10 E, not E
  CHECK(task_target(TaskKind::LengthRegression, len_label(24)) == 24);
  CHECK(task_target(TaskKind::RepeatClassify, class_label(true)) == 1);
  CHECK(task_target(TaskKind::MatchClassify, e_label(2.0)) == 0);
  CHECK(parse_task("length") == TaskKind::LengthRegression);
  CHECK_THROWS_AS(parse_task("nope"), ConfigError);
}

TEST_CASE("bin assignment") {
  SUBCASE("the E sentinel has its own bin") {
    const std::vector<BlastLabel> labels{e_label(2.0), e_label(-3.2), e_label(-3.9), e_label(-0.5)};
    const Bins b = assign_bins(labels, TaskSpec::defaults(TaskKind::EValueRegression));
    REQUIRE(b.count() == 3);
    CHECK(b.names.back() == "no-match");
    CHECK(b.members.back() == std::vector<std::size_t>{0});
    CHECK(b.members[0] == std::vector<std::size_t>{1, 2});
  }
  SUBCASE("length bins pair adjacent lengths") {
    std::vector<BlastLabel> labels{len_label(0), len_label(36)};
    for (int l = 18; l <= 35; ++l) labels.push_back(len_label(l));
    const Bins b = assign_bins(labels, TaskSpec::defaults(TaskKind::LengthRegression));
    REQUIRE(b.count() == 11);
    for (const auto& m : b.members) CHECK((m.size() == 1 || m.size() == 2));
    CHECK(b.members[1] == std::vector<std::size_t>{2, 3});  // 18 and 19
    CHECK(b.members[2] == std::vector<std::size_t>{4, 5});  // 20 and 21
  }
  SUBCASE("empty fixed bins and unbinnable labels are configuration errors") {
    CHECK_THROWS_AS(assign_bins(std::vector<BlastLabel>{len_label(0), len_label(36)},
                                TaskSpec::defaults(TaskKind::LengthRegression)),
                    ConfigError);
    std::vector<BlastLabel> labels{len_label(0), len_label(36), len_label(12)};
    for (int l = 18; l <= 35; ++l) labels.push_back(len_label(l));
    CHECK_THROWS_AS(assign_bins(labels, TaskSpec::defaults(TaskKind::LengthRegression)), ConfigError);
    CHECK_THROWS_AS(assign_bins(classification_labels(0, 5), TaskSpec::defaults(TaskKind::RepeatClassify)),
                    ConfigError);
    CHECK_THROWS_AS(assign_bins(std::vector<BlastLabel>{}, TaskSpec::defaults(TaskKind::RepeatClassify)), ConfigError);
  }
  SUBCASE("repeat partition matches a hand count") {
    std::vector<BlastLabel> labels;
    std::size_t expected = 0;
    for (int i = 0; i < 40; ++i) {
      const bool pos = i % 3 == 0 || i % 7 == 0;
      expected += pos;
      labels.push_back(class_label(pos));
    }
    const Bins b = assign_bins(labels, TaskSpec::defaults(TaskKind::RepeatClassify));
    CHECK(b.members[0].size() == expected);
    CHECK(expected == 18);  // 14 multiples of 3, 6 of 7, 2 of 21 counted twice
  }
}

TEST_CASE("sampler") {
  SUBCASE("draws are without replacement within a generation") {
    const Bins b = assign_bins(classification_labels(700, 900), TaskSpec::defaults(TaskKind::RepeatClassify));
    BinnedSampler s(b, 300, 1);
    for (int g = 0; g < 20; ++g) {
      const auto v = s.next_sample();
      CHECK(v.size() == 600);
      CHECK(std::set<std::size_t>(v.begin(), v.end()).size() == 600);
    }
  }
  SUBCASE("a bin at the draw count is used whole every generation") {
    Bins b{{"only"}, {{}}};
    for (std::size_t i = 0; i < 35; ++i) b.members[0].push_back(i);
    BinnedSampler s(b, 35, 2);
    for (int g = 0; g < 5; ++g) {
      auto v = s.next_sample();
      std::sort(v.begin(), v.end());
      CHECK(v == b.members[0]);
    }
  }
  SUBCASE("small bins contribute everything they hold") {
    Bins b{{"big", "small"}, {{}, {}}};
    for (std::size_t i = 0; i < 100; ++i) b.members[0].push_back(i);
    for (std::size_t i = 100; i < 111; ++i) b.members[1].push_back(i);
    BinnedSampler s(b, 35, 3);
    CHECK(s.sample_size() == 46);
    CHECK(s.next_sample().size() == 46);
  }
  SUBCASE("property: disjoint consecutive samples and a minimum reuse gap") {
    Rng rng(11);
    std::uniform_int_distribution<std::size_t> size(1, 400), draw(1, 60);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = size(rng), d = draw(rng);
      Bins b{{"bin"}, {{}}};
      for (std::size_t i = 0; i < n; ++i) b.members[0].push_back(i);
      BinnedSampler s(b, d, rng());
      const std::size_t gap = std::max<std::size_t>(1, n / d);
      std::vector<long> last(n, -1'000'000);
      std::vector<std::size_t> prev;
      for (long g = 0; g < 50; ++g) {
        const auto v = s.next_sample();
        CHECK(v.size() == std::min(n, d));
        for (auto i : v) {
          if (n >= d) CHECK(g - last[i] >= static_cast<long>(gap));
          last[i] = g;
        }
        if (n >= 2 * d) {
          for (auto i : v) CHECK(std::find(prev.begin(), prev.end(), i) == prev.end());
        }
        prev = v;
      }
    }
  }
  SUBCASE("same seed, same samples") {
    const Bins b = assign_bins(classification_labels(400, 500), TaskSpec::defaults(TaskKind::RepeatClassify));
    BinnedSampler a(b, 300, 5), c(b, 300, 5);
    for (int g = 0; g < 10; ++g) CHECK(a.next_sample() == c.next_sample());
  }
}

TEST_CASE("pearson") {
  const std::vector<double> xs{1, 2, 3, 4, 5.5};
  std::vector<double> neg;
  for (double x : xs) neg.push_back(-x);
  CHECK(pearson(xs, xs).r == doctest::Approx(1.0));
  CHECK(pearson(xs, neg).r == doctest::Approx(-1.0));
  CHECK(pearson(xs, std::vector<double>(5, 3.0)).degenerate);
  CHECK(pearson(std::vector<double>{1.0}, std::vector<double>{2.0}).degenerate);
  std::vector<double> bad = xs;
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK(pearson(xs, bad).degenerate);
  bad[2] = std::numeric_limits<double>::infinity();
  CHECK(pearson(bad, xs).degenerate);

  SUBCASE("properties against the two-pass reference") {
    Rng rng(6);
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> scale(0.1, 100), shift(-50, 50);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> a(30), b(30);
      for (std::size_t i = 0; i < 30; ++i) {
        a[i] = g(rng);
        b[i] = 0.5 * a[i] + g(rng);
      }
      const double r = pearson(a, b).r;
      CHECK(std::abs(r - oracle::two_pass_pearson(a, b)) < 1e-12);
      CHECK(pearson(b, a).r == doctest::Approx(r).epsilon(1e-14));
      const double s = scale(rng), t = shift(rng);
      std::vector<double> a2;
      for (double v : a) a2.push_back(s * v + t);
      CHECK(std::abs(pearson(a2, b).r - r) < 1e-12);
    }
  }
}

TEST_CASE("scores") {
  const std::vector<double> targets{1, 0, 1, 0};
  CHECK(score(TaskKind::MatchClassify, std::vector<double>{1, 1, 1, 1}, targets) == 2);
  CHECK(score(TaskKind::MatchClassify, std::vector<double>{2, -1, 0.5, 0}, targets) == 4);  // 0 is negative
  CHECK(score(TaskKind::MatchClassify, std::vector<double>{std::nan(""), -1, 1, -1}, targets) == 3);
  CHECK(score(TaskKind::EValueRegression, std::vector<double>{1, 2, std::nan(""), 4}, targets) == kDegenerateFitness);
  CHECK(score(TaskKind::EValueRegression, std::vector<double>{1, 1, 1, 1}, targets) == kDegenerateFitness);

  SUBCASE("classification fitness depends only on the sign") {
    Rng rng(8);
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> k(0.001, 1000);
    std::vector<double> p(200), t(200);
    for (std::size_t i = 0; i < 200; ++i) {
      p[i] = g(rng);
      t[i] = g(rng) > 0 ? 1 : 0;
    }
    const double base = score(TaskKind::RepeatClassify, p, t);
    for (int trial = 0; trial < 20; ++trial) {
      const double c = k(rng);
      std::vector<double> q;
      for (double v : p) q.push_back(c * v);
      CHECK(score(TaskKind::RepeatClassify, q, t) == base);
    }
  }
}

TEST_CASE("fitness of whole individuals") {
  Rng rng(1);
  ConstantTable table = ConstantTable::build(rng);
  const PrimitiveSet ps;
  const Interpreter interp(table);
  auto team = [&](const char* result) {
    return Individual(from_sexpr("0", Role::Prepass0, table, ps), from_sexpr("0", Role::Prepass1, table, ps),
                      from_sexpr(result, Role::Result, table, ps));
  };
  OracleSpec spec;
  spec.kind = OracleKind::Repeat;
  const auto d = generate_synthetic(1000, spec, 3);
  const TrainingSet data = make_training_set(d.records, d.labels, TaskKind::RepeatClassify);
  const Bins b = assign_bins(d.labels, TaskSpec::defaults(TaskKind::RepeatClassify));
  REQUIRE(b.members[0].size() >= 300);
  REQUIRE(b.members[1].size() >= 300);
  BinnedSampler s(b, 300, 4);
  const auto sample = s.next_sample();
  CHECK(fitness(team("1"), interp, data, sample, TaskKind::RepeatClassify) == 300);
  CHECK(fitness(team("0"), interp, data, sample, TaskKind::RepeatClassify) == 300);

  const TrainingSet edata = make_training_set(d.records, d.labels, TaskKind::EValueRegression);
  CHECK(fitness(team("1"), interp, edata, {}, TaskKind::EValueRegression) == kDegenerateFitness);
  CHECK(fitness(team("(DIV 0 0)"), interp, edata, {}, TaskKind::EValueRegression) == kDegenerateFitness);
}
