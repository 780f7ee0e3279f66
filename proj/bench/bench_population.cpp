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

// Times the serial and OpenMP population evaluation kernels on the same
// synthetic workload and checks that they agree.

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "blastgp/evolution.hpp"

using namespace blastgp;

int main(int argc, char** argv) {
  const std::size_t pop_size = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
  const std::size_t n_records = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 431;
  const int workers = argc > 3 ? std::atoi(argv[3]) : omp_get_max_threads();

  const SyntheticDataset ds = generate_synthetic(n_records, OracleSpec{}, 7);
  const TrainingSet data = make_training_set(ds.records, ds.labels, TaskKind::EValueRegression);
  RunConfig cfg;
  cfg.population = pop_size;
  Rng rng(11);
  const ConstantTable table = ConstantTable::build(rng);
  const PrimitiveSet ps;
  const Population pop = init_population(cfg, rng, ps);
  const Interpreter interp(table);

  auto time = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto v = fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::make_pair(std::move(v), std::chrono::duration<double>(t1 - t0).count());
  };
  const auto [serial, ts] = time([&] { return evaluate_population_serial(pop, interp, data, {}, cfg.task); });
  const auto [parallel, tp] =
      time([&] { return evaluate_population_parallel(pop, interp, data, {}, cfg.task, workers); });

  std::cout << "population " << pop_size << ", records " << n_records << ", workers " << workers << '\n'
            << "serial:   " << ts << " s\n"
            << "parallel: " << tp << " s (speedup " << (tp > 0 ? ts / tp : 0.0) << ")\n";
  if (serial != parallel) {
    std::cerr << "serial and parallel fitness differ\n";
    return 1;
  }
  std::cout << "results identical\n";
  return 0;
}
