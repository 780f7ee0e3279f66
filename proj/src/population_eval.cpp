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

#include <omp.h>

#include "blastgp/evolution.hpp"

namespace blastgp {

std::vector<double> evaluate_population_serial(std::span<const Individual> pop, const Interpreter& interp,
                                               const TrainingSet& data, std::span<const std::size_t> sample,
                                               TaskKind task) {
  std::vector<double> out(pop.size());
  std::vector<double> pred, target;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    out[i] = fitness(pop[i], interp, data, sample, task, pred, target);
  }
  return out;
}

std::vector<double> evaluate_population_parallel(std::span<const Individual> pop, const Interpreter& interp,
                                                 const TrainingSet& data, std::span<const std::size_t> sample,
                                                 TaskKind task, int workers) {
  if (workers <= 1) return evaluate_population_serial(pop, interp, data, sample, task);
  std::vector<double> out(pop.size());
  const auto n = static_cast<std::ptrdiff_t>(pop.size());
#pragma omp parallel num_threads(workers)
  {
    std::vector<double> pred, target;
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      out[k] = fitness(pop[k], interp, data, sample, task, pred, target);
    }
  }
  return out;
}

}  // namespace blastgp
