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

#include "blastgp/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "blastgp/evolution.hpp"
#include "blastgp/stats.hpp"

namespace blastgp {

namespace fs = std::filesystem;

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.insert(item.substr(b, e - b + 1));
  }
  return out;
}

// -- ingest ---------------------------------------------------------------------

struct IngestOptions {
  std::string fastq, hits, restrict_list, out;
  int qual_offset = 33;
  int tile_extent = 2048;
};

int cmd_ingest(const IngestOptions& o, std::ostream& out, std::ostream& err) {
  QualityConfig qc;
  qc.offset = o.qual_offset;
  qc.tile_extent = o.tile_extent;
  auto fin = open_in(o.fastq);
  FastqResult fq = parse_fastq(fin, qc);
  for (const auto& d : fq.diagnostics) err << o.fastq << ": " << d << '\n';

  auto hin = open_in(o.hits);
  const HitParseResult hits = parse_hits(hin, split_list(o.restrict_list));

  LabeledDataset ds;
  std::size_t labelled = 0;
  for (auto& r : fq.records) {
    const auto it = hits.summaries.find(r.id);
    BlastLabel l;
    if (it != hits.summaries.end()) {
      l = build_label(it->second);
      if (!it->second.hits.empty()) ++labelled;
    }
    ds.labels.push_back(l);
    ds.records.push_back(std::move(r));
  }
  ds.manifest = {{"source", "ingest"},
                 {"fastq", o.fastq},
                 {"hits", o.hits},
                 {"restrict", o.restrict_list},
                 {"qual_offset", std::to_string(o.qual_offset)},
                 {"tile_extent", std::to_string(o.tile_extent)},
                 {"n", std::to_string(ds.records.size())}};
  save_dataset(o.out, ds);
  out << "records: " << ds.records.size() << "\n"
      << "with hits: " << labelled << "\n"
      << "skipped (length): " << fq.skipped_length << "\n"
      << "skipped (malformed): " << fq.skipped_malformed << "\n"
      << "skipped (symbol): " << fq.skipped_symbol << "\n"
      << "coordinate warnings: " << fq.coordinate_warnings << "\n"
      << "hit rows: " << hits.rows << "\n"
      << "hit rows skipped (unparseable): " << hits.skipped_unparseable << "\n"
      << "hit rows skipped (E <= 0): " << hits.skipped_nonpositive_e << "\n"
      << "hit rows filtered (subject): " << hits.filtered_subject << "\n";
  return 0;
}

// -- synth ----------------------------------------------------------------------

struct SynthOptions {
  std::string oracle = "evalue";
  std::size_t n = 2357;
  std::uint64_t seed = 0;
  double noise = 0.0;
  double n_rate = 0.01;
  std::string mapping = "auto";
  std::string out;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  OracleSpec spec;
  spec.kind = parse_oracle_kind(o.oracle);
  spec.noise = o.noise;
  spec.n_rate = o.n_rate;
  if (o.mapping == "affine") spec.mapping = TargetMapping::Affine;
  else if (o.mapping == "rank") spec.mapping = TargetMapping::Rank;
  else if (o.mapping != "auto") throw ConfigError("unknown mapping '" + o.mapping + "' (expected auto, affine or rank)");
  SyntheticDataset s = generate_synthetic(o.n, spec, o.seed);
  LabeledDataset ds{std::move(s.records), std::move(s.labels), std::move(s.manifest)};
  save_dataset(o.out, ds);
  out << "wrote " << ds.records.size() << " records to " << o.out << '\n';
  return 0;
}

// -- evolve ---------------------------------------------------------------------

struct EvolveOptions {
  std::string task, data, config, out;
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t population = 0, generations = 0;
};

void write_history(std::ostream& os, const std::vector<GenerationRecord>& h) {
  os << "generation\tsample_fitness\ttrain_fitness\tsize_prepas0\tsize_prepas1\tsize_expect\tsample_digest\n";
  for (const auto& r : h) {
    std::ostringstream dig;
    dig << std::hex << std::setw(16) << std::setfill('0') << r.sample_digest;
    os << r.generation << '\t' << shortest(r.sample_fitness) << '\t' << shortest(r.train_fitness) << '\t'
       << r.best_sizes[0] << '\t' << r.best_sizes[1] << '\t' << r.best_sizes[2] << '\t' << dig.str() << '\n';
  }
}

int cmd_evolve(const EvolveOptions& o, std::ostream& out) {
  RunConfig cfg;
  if (!o.config.empty()) cfg = RunConfig::from_key_values(read_key_values_file(o.config));
  cfg.task = parse_task(o.task);
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  if (o.population) cfg.population = o.population;
  if (o.generations) cfg.generations = o.generations;
  cfg.validate();

  const LabeledDataset ds = load_dataset(o.data);
  const TrainingSet data = make_training_set(ds.records, ds.labels, cfg.task);
  fs::create_directories(o.out);

  const RunResult res = run_evolution(cfg, data, ds.labels, [&](const GenerationRecord& r) {
    out << "generation " << r.generation << ": sample " << shortest(r.sample_fitness) << ", training "
        << shortest(r.train_fitness) << ", sizes " << r.best_sizes[0] << '/' << r.best_sizes[1] << '/'
        << r.best_sizes[2] << '\n';
  });

  {
    auto f = open_out(fs::path(o.out) / "history.tsv");
    write_history(f, res.history);
  }
  {
    auto f = open_out(fs::path(o.out) / "config.txt");
    write_key_values(f, cfg.to_key_values());
  }
  {
    auto f = open_out(fs::path(o.out) / "samples.tsv");
    f << "generation\tindices\n";
    for (std::size_t g = 0; g < res.samples.size(); ++g) {
      f << g + 1 << '\t';
      for (std::size_t k = 0; k < res.samples[g].size(); ++k) f << (k ? "," : "") << res.samples[g][k];
      f << '\n';
    }
  }
  for (const auto& s : res.snapshots) {
    const std::string name = s.generation == cfg.generations ? "best_final.model"
                                                              : "best_gen" + std::to_string(s.generation) + ".model";
    save_model_file((fs::path(o.out) / name).string(), Model{res.constants, s.best});
  }
  out << "wrote " << o.out << '\n';
  return 0;
}

// -- validate -------------------------------------------------------------------

struct ValidateOptions {
  std::string model, data, task, out;
};

int cmd_validate(const ValidateOptions& o, std::ostream& out) {
  const TaskKind task = parse_task(o.task);
  const PrimitiveSet ps(true);
  const Model m = load_model_file(o.model, ps);
  const LabeledDataset ds = load_dataset(o.data);
  const TrainingSet data = make_training_set(ds.records, ds.labels, task);
  const Interpreter interp(m.constants);
  const std::vector<double> pred = predict_all(m.team, interp, data.reads);
  const ValidationReport rep = make_report(task, pred, data.targets);
  const auto scans = per_scan_reports(task, ds.records, pred, data.targets);

  write_report_text(out, rep);
  for (const auto& [scan, r] : scans) {
    out << "scan " << scan << ": n=" << r.n << ' ';
    if (is_classification(task)) out << "accuracy=" << r.accuracy << '\n';
    else out << "r=" << r.r << " se=" << r.se << '\n';
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    auto tsv = open_out(fs::path(o.out) / "report.tsv");
    write_report_tsv_header(tsv);
    write_report_tsv_row(tsv, "all", rep);
    for (const auto& [scan, r] : scans) write_report_tsv_row(tsv, scan, r);
    auto txt = open_out(fs::path(o.out) / "report.txt");
    write_report_text(txt, rep);
    auto pf = open_out(fs::path(o.out) / "predictions.tsv");
    pf << "read_id\tprediction\ttarget\n";
    for (std::size_t i = 0; i < pred.size(); ++i) {
      pf << ds.records[i].id << '\t' << shortest(pred[i]) << '\t' << shortest(data.targets[i]) << '\n';
    }
  }
  return 0;
}

// -- bench ----------------------------------------------------------------------

struct BenchOptions {
  std::string model;
  std::size_t random_size = 0;
  std::size_t records = 10000;
  int repeats = 5;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.model.empty() == (o.random_size == 0)) throw ConfigError("bench needs exactly one of --model or --random-size");
  if (!o.seed_given) throw ConfigError("bench draws random records and needs --seed");
  if (o.repeats < 1 || o.records == 0) throw ConfigError("--records and --repeats must be positive");
  Rng rng(o.seed);
  const PrimitiveSet ps(true);
  std::optional<Model> m;
  if (!o.model.empty()) {
    m.emplace(load_model_file(o.model, ps));
  } else {
    if (o.random_size < 3 || o.random_size > 3 * kMaxTreeSize) {
      throw ConfigError("--random-size must be in 3.." + std::to_string(3 * kMaxTreeSize));
    }
    ConstantTable table = ConstantTable::build(rng);
    // split the team size as evenly as possible over the three trees
    std::array<std::size_t, 3> sizes{};
    for (std::size_t r = 0; r < 3; ++r) sizes[r] = o.random_size / 3 + (r < o.random_size % 3 ? 1 : 0);
    Tree t0 = random_tree_of_size(Role::Prepass0, sizes[0], rng, ps);
    Tree t1 = random_tree_of_size(Role::Prepass1, sizes[1], rng, ps);
    Tree t2 = random_tree_of_size(Role::Result, sizes[2], rng, ps);
    m.emplace(Model{std::move(table), Individual(std::move(t0), std::move(t1), std::move(t2))});
  }
  std::vector<DnaRecord> recs;
  recs.reserve(o.records);
  for (std::size_t i = 0; i < o.records; ++i) recs.push_back(random_record(rng, QualityModel{}, 0.01, "r" + std::to_string(i)));
  const auto prepared = prepare_all(recs);
  const BenchResult b = throughput_bench(m->team, m->constants, prepared, o.repeats);
  out << "team size: " << m->team.total_size() << " (" << m->team.tree(Role::Prepass0).size() << '/'
      << m->team.tree(Role::Prepass1).size() << '/' << m->team.tree(Role::Result).size() << ")\n"
      << "records: " << o.records << "\n"
      << "primitives per repeat: " << b.ops_per_repeat << "\n"
      << "primitives/s: " << std::fixed << std::setprecision(0) << b.mean << " (sd " << b.stddev << " over "
      << b.rates.size() << " repeats)\n"
      << std::defaultfloat << std::setprecision(6);
  return 0;
}

// -- export ---------------------------------------------------------------------

struct ExportOptions {
  std::string model, data, fastq;
};

int cmd_export(const ExportOptions& o, std::ostream& out) {
  if (o.model.empty() == o.data.empty()) throw ConfigError("export needs exactly one of --model or --data");
  if (!o.model.empty()) {
    const Model m = load_model_file(o.model, PrimitiveSet(true));
    for (const auto& t : m.team.trees()) {
      out << role_name(t.role()) << " (size " << t.size() << ", depth " << t.depth() << "): "
          << to_sexpr(t, m.constants) << '\n';
    }
    return 0;
  }
  if (o.fastq.empty()) throw ConfigError("export --data needs --fastq");
  const LabeledDataset ds = load_dataset(o.data);
  auto f = open_out(o.fastq);
  write_fastq(f, ds.records);
  out << "wrote " << ds.records.size() << " records to " << o.fastq << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genetic programming predictors of short-read alignment outcomes"};
  app.require_subcommand(1);

  IngestOptions ing;
  auto* c_ing = app.add_subcommand("ingest", "Join FASTQ reads with a tabular hit file into a labelled dataset");
  c_ing->add_option("--fastq", ing.fastq, "FASTQ file of 36-base reads")->required();
  c_ing->add_option("--hits", ing.hits, "Tab-separated hit table")->required();
  c_ing->add_option("--restrict", ing.restrict_list, "Comma-separated subject allowlist (empty = all)");
  c_ing->add_option("--out", ing.out, "Output dataset directory")->required();
  c_ing->add_option("--qual-offset", ing.qual_offset, "Quality character offset")->check(CLI::IsMember({33, 64}));
  c_ing->add_option("--tile-extent", ing.tile_extent, "Tile coordinate range for X/Y scaling")
      ->check(CLI::PositiveNumber);

  SynthOptions syn;
  auto* c_syn = app.add_subcommand("synth", "Generate a synthetic dataset labelled by an oracle formula");
  c_syn->add_option("--oracle", syn.oracle, "evalue, length, match or repeat");
  c_syn->add_option("--n", syn.n, "Number of reads")->check(CLI::PositiveNumber);
  c_syn->add_option("--seed", syn.seed, "Random seed")->required();
  c_syn->add_option("--noise", syn.noise, "Label noise sd as a fraction of the oracle sd")->check(CLI::NonNegativeNumber);
  c_syn->add_option("--n-rate", syn.n_rate, "Probability of an N base")->check(CLI::Range(0.0, 1.0));
  c_syn->add_option("--mapping", syn.mapping, "Regression target mapping: auto, affine or rank");
  c_syn->add_option("--out", syn.out, "Output dataset directory")->required();

  EvolveOptions evo;
  auto* c_evo = app.add_subcommand("evolve", "Evolve a three-tree predictor");
  c_evo->add_option("--task", evo.task, "evalue, length, match or repeat")->required();
  c_evo->add_option("--data", evo.data, "Training dataset directory")->required();
  c_evo->add_option("--config", evo.config, "key = value run configuration");
  c_evo->add_option("--seed", evo.seed, "Master seed")->required();
  c_evo->add_option("--out", evo.out, "Output directory")->required();
  c_evo->add_option("--workers", evo.workers, "Evaluation threads")->check(CLI::PositiveNumber);
  c_evo->add_option("--population", evo.population, "Override population size")->check(CLI::PositiveNumber);
  c_evo->add_option("--generations", evo.generations, "Override generation count")->check(CLI::PositiveNumber);

  ValidateOptions val;
  auto* c_val = app.add_subcommand("validate", "Score a saved model on held-out data");
  c_val->add_option("--model", val.model, "Model file")->required();
  c_val->add_option("--data", val.data, "Dataset directory")->required();
  c_val->add_option("--task", val.task, "evalue, length, match or repeat")->required();
  c_val->add_option("--out", val.out, "Directory for report.tsv, report.txt and predictions.tsv");

  BenchOptions ben;
  auto* c_ben = app.add_subcommand("bench", "Measure interpreter throughput");
  c_ben->add_option("--model", ben.model, "Model file");
  c_ben->add_option("--random-size", ben.random_size, "Total nodes of a random team");
  c_ben->add_option("--records", ben.records, "Random records to evaluate")->check(CLI::PositiveNumber);
  c_ben->add_option("--repeats", ben.repeats, "Timed repeats")->check(CLI::PositiveNumber);
  auto* seed_opt = c_ben->add_option("--seed", ben.seed, "Random seed");

  ExportOptions exp;
  auto* c_exp = app.add_subcommand("export", "Print a model's trees or write a dataset as FASTQ");
  c_exp->add_option("--model", exp.model, "Model file");
  c_exp->add_option("--data", exp.data, "Dataset directory");
  c_exp->add_option("--fastq", exp.fastq, "FASTQ output path (with --data)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*c_ing) return cmd_ingest(ing, out, err);
    if (*c_syn) return cmd_synth(syn, out);
    if (*c_evo) return cmd_evolve(evo, out);
    if (*c_val) return cmd_validate(val, out);
    if (*c_ben) {
      ben.seed_given = seed_opt->count() > 0;
      return cmd_bench(ben, out);
    }
    if (*c_exp) return cmd_export(exp, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace blastgp
