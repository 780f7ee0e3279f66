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

// Independent reference computations used as test oracles. Nothing here
// calls into the library's numeric code.
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

// Textbook two-pass correlation in long double.
inline double two_pass_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Shannon entropy in bits of bases[0..upto], with N spread evenly over A, C, G, T.
inline double entropy(const std::string& bases, std::size_t upto) {
  std::map<char, double> count{{'A', 0}, {'C', 0}, {'G', 0}, {'T', 0}};
  for (std::size_t i = 0; i <= upto; ++i) {
    if (bases[i] == 'N') {
      for (auto& [b, c] : count) c += 0.25;
    } else {
      count[bases[i]] += 1;
    }
  }
  double h = 0;
  for (const auto& [b, c] : count) {
    if (c > 0) {
      const double p = c / static_cast<double>(upto + 1);
      h -= p * std::log2(p);
    }
  }
  return h;
}

inline int run_length(const std::string& bases, std::size_t at) {
  int n = 1;
  while (at >= static_cast<std::size_t>(n) && bases[at - static_cast<std::size_t>(n)] == bases[at]) ++n;
  return n;
}

inline double protected_div(double a, double b) { return b == 0 ? 1.0 : a / b; }

// Sum over positions of i*Qual times the sum of i/Qual (positions 1-based).
inline double quality_product(const std::vector<double>& qual) {
  double a = 0, b = 0;
  for (std::size_t i = 0; i < qual.size(); ++i) {
    const double pos = static_cast<double>(i + 1);
    a += pos * qual[i];
    b += protected_div(pos, qual[i]);
  }
  return a * b;
}

// Chi-squared of (correct, wrong) against an even split.
inline double chi2_even(double correct, double n) {
  const double e = n / 2;
  return (correct - e) * (correct - e) / e + ((n - correct) - e) * ((n - correct) - e) / e;
}

}  // namespace oracle
