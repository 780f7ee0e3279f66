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
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace blastgp {

namespace {

// Protected division, identical to the interpreter's DIV.
double pdiv(double a, double b) { return b == 0.0 ? 1.0 : a / b; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const double kMaxLog10E = std::log10(6.6);
constexpr double kMinLog10E = -10.0;

// Label consistent with a regression target on the E scale.
BlastLabel label_from_log10e(double log10_e) {
  BlastLabel l;
  l.log10_e = log10_e;
  l.best_len = 36;
  l.has_hq_match = log10_e < std::log10(kHighQualityE);
  return l;
}

BlastLabel label_from_length(int len) {
  BlastLabel l;
  if (len == 0) return l;  // no match, E = 100
  l.log10_e = -8.0;
  l.best_len = len;
  l.has_hq_match = true;
  return l;
}

// Empirical CDF position of each value in (0, 1]; ties share the largest rank.
std::vector<double> ecdf(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> u(v.size());
  const double n = static_cast<double>(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) u[order[k]] = static_cast<double>(j + 1) / n;
    i = j + 1;
  }
  return u;
}

// Equal-frequency assignment onto {0, 18..35, 36}. The largest values (at
// least the top eleventh, and always the whole tie block at the maximum, which
// holds every read whose qualities all exceed 1) become 36; the rest is split
// evenly over {0} and the nine two-wide groups, the upper half of a group's
// ranks taking the odd length.
std::vector<int> lengths_by_rank(const std::vector<double>& v) {
  std::vector<int> out(v.size(), 36);
  if (v.empty()) return out;
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = v.size();
  const std::size_t top = std::max<std::size_t>(1, (n + 5) / 11);
  const double cut = sorted[n - top];
  std::vector<double> rest;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] < cut) {
      rest.push_back(v[i]);
      where.push_back(i);
    }
  }
  const auto u = ecdf(rest);
  for (std::size_t k = 0; k < rest.size(); ++k) {
    const double scaled = u[k] * 10.0;
    const int group = std::min(9, static_cast<int>(std::ceil(scaled)) - 1);
    const double frac = scaled - group;
    out[where[k]] = group <= 0 ? 0 : 18 + 2 * (group - 1) + (frac > 0.5 ? 1 : 0);
  }
  return out;
}

int length_from_affine(double v) {
  // theoretical oracle range [-666, 666] onto [17, 36]; 17 means no match
  const double len = 17.0 + (v + 666.0) / 1332.0 * 19.0;
  const int rounded = static_cast<int>(std::lround(std::clamp(len, 17.0, 36.0)));
  return rounded <= 17 ? 0 : rounded;
}

}  // namespace

std::string_view oracle_name(OracleKind k) {
  switch (k) {
    case OracleKind::EValue: return "evalue";
    case OracleKind::Length: return "length";
    case OracleKind::Match: return "match";
    case OracleKind::Repeat: return "repeat";
  }
  return "?";
}

OracleKind parse_oracle_kind(std::string_view name) {
  for (auto k : {OracleKind::EValue, OracleKind::Length, OracleKind::Match, OracleKind::Repeat}) {
    if (oracle_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown oracle: " + std::string(name));
}

double e_value_oracle(const DnaRecord& r) {
  double weighted = 0.0, inverse = 0.0;
  for (int i = 1; i <= kReadLength; ++i) {
    const double q = r.qual(i - 1);
    weighted += i * q;
    inverse += pdiv(i, q);
  }
  return weighted * inverse;
}

double length_oracle(const DnaRecord& r) {
  double s = 0.0;
  for (int i = 1; i <= kReadLength; ++i) s += r.qual(i - 1) > 1.0 ? i : -i;
  return s;
}

double match_oracle(const DnaRecord& r) {
  double s = 0.0;
  for (int i = 0; i + 1 < kReadLength; ++i) {
    const double g = r.bases[static_cast<std::size_t>(i + 1)] == Base::G ? 1.0 : -1.0;
    s += pdiv(r.qual(i + 1) - g, r.qual(i));
  }
  return s;
}

// Stand-in for the unsimplified repeat classifier: sign of Sum1 - 2*M36 where
// the first scan records Run - Qual and the second adds a weak G signal.
double repeat_oracle(const DnaRecord& r) {
  std::array<int, kReadLength> run{};
  double sum1 = 0.0, m = 0.0;
  for (int i = 0; i < kReadLength; ++i) {
    const auto k = static_cast<std::size_t>(i);
    run[k] = (i > 0 && r.bases[k] == r.bases[k - 1]) ? run[k - 1] + 1 : 1;
    m = run[k] - r.qual(i);
    const double g = r.bases[k] == Base::G ? 1.0 : -1.0;
    sum1 += m + 0.25 * g;
  }
  return sum1 - 2.0 * m;
}

double oracle_value(OracleKind k, const DnaRecord& r) {
  switch (k) {
    case OracleKind::EValue: return e_value_oracle(r);
    case OracleKind::Length: return length_oracle(r);
    case OracleKind::Match: return match_oracle(r);
    case OracleKind::Repeat: return repeat_oracle(r);
  }
  return 0.0;
}

DnaRecord random_record(Rng& rng, const QualityModel& q, double n_rate, std::string id) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, q.jitter_sd);
  std::uniform_int_distribution<int> acgt(0, 3);
  std::uniform_int_distribution<int> pixel(0, 2047);

  DnaRecord r;
  r.id = std::move(id);
  const double level = q.level_lo + (q.level_hi - q.level_lo) * unit(rng);
  const double decay = q.decay_max * unit(rng);
  const int floor10 = static_cast<int>(std::lround(q.floor * 10.0));
  for (int i = 0; i < kReadLength; ++i) {
    const auto k = static_cast<std::size_t>(i);
    r.bases[k] = unit(rng) < n_rate ? Base::N : static_cast<Base>(acgt(rng));
    const double v = level - decay * (i + 1) / kReadLength + jitter(rng);
    const int q10 = static_cast<int>(std::lround(v * 10.0));
    r.qual10[k] = static_cast<std::uint8_t>(std::clamp(q10, floor10, kMaxQual10));
  }
  r.x = pixel(rng) / 2048.0;
  r.y = pixel(rng) / 2048.0;
  return r;
}

SyntheticDataset generate_synthetic(std::size_t n, const OracleSpec& spec, std::uint64_t seed) {
  if (!(spec.noise >= 0.0)) throw std::invalid_argument("noise must be >= 0");
  if (!(spec.n_rate >= 0.0 && spec.n_rate <= 1.0)) throw std::invalid_argument("n_rate must lie in [0,1]");
  const auto& q = spec.quality;
  if (!(q.level_lo <= q.level_hi) || q.floor < 0.0 || q.floor > 4.0 || q.jitter_sd < 0.0) {
    throw std::invalid_argument("bad quality model");
  }

  Rng rng(seed);
  SyntheticDataset d;
  d.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.records.push_back(random_record(rng, q, spec.n_rate, "syn" + std::to_string(i)));
  }
  d.oracle_values.reserve(n);
  for (const auto& r : d.records) d.oracle_values.push_back(oracle_value(spec.kind, r));

  // noise is scaled by the oracle's own spread so one knob fits every task
  double sd = 0.0;
  if (n > 1) {
    const double mean = std::accumulate(d.oracle_values.begin(), d.oracle_values.end(), 0.0) / n;
    for (double v : d.oracle_values) sd += (v - mean) * (v - mean);
    sd = std::sqrt(sd / (n - 1));
  }
  const double noise_sd = spec.noise * sd;
  std::vector<double> noisy = d.oracle_values;
  if (noise_sd > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sd);
    for (double& v : noisy) v += noise(rng);
  }

  auto& m = d.manifest;
  m["seed"] = std::to_string(seed);
  m["oracle"] = std::string(oracle_name(spec.kind));
  m["n"] = std::to_string(n);
  m["noise"] = fmt(spec.noise);
  m["noise_sd"] = fmt(noise_sd);
  m["n_rate"] = fmt(spec.n_rate);
  m["quality.level_lo"] = fmt(q.level_lo);
  m["quality.level_hi"] = fmt(q.level_hi);
  m["quality.decay_max"] = fmt(q.decay_max);
  m["quality.jitter_sd"] = fmt(q.jitter_sd);
  m["quality.floor"] = fmt(q.floor);

  d.labels.resize(n);
  switch (spec.kind) {
    case OracleKind::EValue: {
      m["target"] = "log10_e";
      if (spec.mapping != TargetMapping::Rank) {
        const auto [lo_it, hi_it] = std::minmax_element(noisy.begin(), noisy.end());
        const double lo = n ? *lo_it : 0.0, hi = n ? *hi_it : 0.0;
        m["mapping"] = "affine";
        m["mapping.from_lo"] = fmt(lo);
        m["mapping.from_hi"] = fmt(hi);
        for (std::size_t i = 0; i < n; ++i) {
          const double t = hi > lo ? (noisy[i] - lo) / (hi - lo) : 0.0;
          d.labels[i] = label_from_log10e(kMinLog10E + t * (kMaxLog10E - kMinLog10E));
        }
      } else {
        m["mapping"] = "rank";
        const auto u = ecdf(noisy);
        for (std::size_t i = 0; i < n; ++i) {
          d.labels[i] = label_from_log10e(kMinLog10E + u[i] * (kMaxLog10E - kMinLog10E));
        }
      }
      m["mapping.to_lo"] = fmt(kMinLog10E);
      m["mapping.to_hi"] = fmt(kMaxLog10E);
      break;
    }
    case OracleKind::Length: {
      m["target"] = "best_len";
      if (spec.mapping != TargetMapping::Affine) {
        m["mapping"] = "rank";
        const auto len = lengths_by_rank(noisy);
        for (std::size_t i = 0; i < n; ++i) d.labels[i] = label_from_length(len[i]);
      } else {
        m["mapping"] = "affine";
        m["mapping.from_lo"] = "-666";
        m["mapping.from_hi"] = "666";
        for (std::size_t i = 0; i < n; ++i) d.labels[i] = label_from_length(length_from_affine(noisy[i]));
      }
      break;
    }
    case OracleKind::Match: {
      m["target"] = "hq";
      m["mapping"] = "threshold";
      m["mapping.threshold"] = fmt(kMatchThreshold);
      for (std::size_t i = 0; i < n; ++i) {
        BlastLabel l;
        if (noisy[i] > kMatchThreshold) {
          l.log10_e = -10.0;
          l.best_len = 36;
          l.has_hq_match = true;
        } else {
          l.log10_e = -3.0;
          l.best_len = 24;
        }
        d.labels[i] = l;
      }
      break;
    }
    case OracleKind::Repeat: {
      m["target"] = "multi";
      m["mapping"] = "sign";
      for (std::size_t i = 0; i < n; ++i) {
        BlastLabel l;
        l.log10_e = -10.0;
        l.best_len = 36;
        l.has_hq_match = true;
        l.has_multi_hq = noisy[i] > 0.0;
        d.labels[i] = l;
      }
      break;
    }
  }
  return d;
}

}  // namespace blastgp
