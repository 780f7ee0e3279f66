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

#include <algorithm>

#include "blastgp/fitness.hpp"

namespace blastgp {

BinnedSampler::BinnedSampler(Bins bins, std::size_t draw_per_bin, std::uint64_t seed)
    : bins_(std::move(bins)), draw_(draw_per_bin), rng_(seed) {
  if (draw_ == 0) throw ConfigError("draw per bin must be positive");
  std::size_t max_index = 0;
  for (std::size_t b = 0; b < bins_.count(); ++b) {
    if (bins_.members[b].empty()) throw ConfigError("bin '" + bins_.names[b] + "' is empty");
    for (auto i : bins_.members[b]) max_index = std::max(max_index, i);
  }
  last_used_.assign(max_index + 1, -1);
  queues_.resize(bins_.count());
  for (std::size_t b = 0; b < bins_.count(); ++b) {
    queues_[b].order = bins_.members[b];
    std::shuffle(queues_[b].order.begin(), queues_[b].order.end(), rng_);
  }
}

std::size_t BinnedSampler::sample_size() const {
  std::size_t n = 0;
  for (const auto& m : bins_.members) n += std::min(draw_, m.size());
  return n;
}

void BinnedSampler::refill(std::size_t b) {
  auto& q = queues_[b];
  // leftovers keep their place at the front; everything already taken this
  // round is reshuffled behind them, least recently used first
  std::vector<std::size_t> rest(q.order.begin(), q.order.begin() + static_cast<std::ptrdiff_t>(q.cursor));
  std::shuffle(rest.begin(), rest.end(), rng_);
  std::stable_sort(rest.begin(), rest.end(),
                   [&](std::size_t a, std::size_t c) { return last_used_[a] < last_used_[c]; });
  std::vector<std::size_t> order(q.order.begin() + static_cast<std::ptrdiff_t>(q.cursor), q.order.end());
  order.insert(order.end(), rest.begin(), rest.end());
  q.order = std::move(order);
  q.cursor = 0;
}

std::vector<std::size_t> BinnedSampler::next_sample() {
  std::vector<std::size_t> out;
  out.reserve(sample_size());
  for (std::size_t b = 0; b < queues_.size(); ++b) {
    auto& q = queues_[b];
    const std::size_t want = std::min(draw_, q.order.size());
    if (q.order.size() - q.cursor < want) refill(b);
    for (std::size_t k = 0; k < want; ++k) {
      const auto idx = q.order[q.cursor++];
      last_used_[idx] = static_cast<std::int64_t>(generation_);
      out.push_back(idx);
    }
  }
  ++generation_;
  // canonical order, so a fitness depends only on which examples were drawn
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace blastgp
