// Copyright 2026 The Toporank Authors.
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

// Command-line driver: fixture, build-index, query, synth, train, parse and
// evaluate. Every failure exits nonzero with a one-line cause on stderr.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "toporank/corpus.h"
#include "toporank/error.h"
#include "toporank/evaluation.h"
#include "toporank/fixture.h"
#include "toporank/gazetteer.h"
#include "toporank/index.h"
#include "toporank/pipeline.h"
#include "toporank/ranker.h"
#include "toporank/synthgen.h"

namespace toporank {
namespace {

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kNotFound, "cannot write " + path);
  return out;
}

void CheckWritten(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIngestion, "write failed for " + path);
}

std::vector<std::string> CountryVocabulary(const GazetteerIndex& index) {
  std::set<std::string> codes;
  for (const auto& e : index.entries()) {
    if (!e.country_code.empty()) codes.insert(e.country_code);
  }
  return {codes.begin(), codes.end()};
}

// ---------------------------------------------------------------- fixture

struct FixtureArgs {
  std::string out;
  FixtureOptions options;
};

void RunFixture(const FixtureArgs& args) {
  auto entries = MakeFixtureGazetteer(args.options);
  auto out = OpenOutput(args.out);
  WriteGazetteer(out, entries);
  CheckWritten(out, args.out);
  std::cout << "wrote " << entries.size() << " gazetteer entries to " << args.out << "\n";
}

// ------------------------------------------------------------ build-index

struct BuildIndexArgs {
  std::string gazetteer;
  std::string out;
  std::string classes;
  IndexConfig config;
};

void RunBuildIndex(const BuildIndexArgs& args) {
  ParseOptions options;
  for (char c : args.classes) {
    if (c != ',' && c != ' ') options.feature_classes.push_back(c);
  }
  ParseStats stats;
  auto entries = LoadGazetteerFile(args.gazetteer, options, &stats);
  auto index = GazetteerIndex::Build(std::move(entries), args.config);
  index.Save(args.out);
  std::cout << "indexed " << index.entries().size() << " entries, " << index.key_count()
            << " names, " << index.ngram_count() << " n-grams (" << stats.lines << " lines, "
            << stats.malformed << " malformed, " << stats.filtered << " filtered)\n";
}

// ------------------------------------------------------------------ query

struct QueryArgs {
  std::string index;
  std::string name;
  int k = 50;
  std::string format = "table";
};

void RunQuery(const QueryArgs& args) {
  auto index = GazetteerIndex::Load(args.index);
  auto set = index.Query(args.name, args.k);
  if (args.format == "jsonl") {
    for (const auto& c : set.candidates) {
      nlohmann::json j = {{"geoname_id", c.entry.geoname_id},
                          {"name", c.entry.name},
                          {"country", c.entry.country_code},
                          {"admin1", c.entry.admin1_code},
                          {"lat", c.entry.latitude},
                          {"lon", c.entry.longitude},
                          {"population", c.entry.population},
                          {"retrieval_score", c.retrieval_score}};
      std::cout << j.dump() << "\n";
    }
    return;
  }
  std::printf("%-4s %-10s %-28s %-3s %-6s %10s %11s %12s %9s\n", "rank", "id", "name", "cc",
              "adm1", "lat", "lon", "population", "score");
  for (size_t i = 0; i < set.candidates.size(); ++i) {
    const auto& c = set.candidates[i];
    std::printf("%-4zu %-10lld %-28s %-3s %-6s %10.5f %11.5f %12lld %9.3f\n", i + 1,
                static_cast<long long>(c.entry.geoname_id), c.entry.name.c_str(),
                c.entry.country_code.c_str(), c.entry.admin1_code.c_str(), c.entry.latitude,
                c.entry.longitude, static_cast<long long>(c.entry.population), c.retrieval_score);
  }
  if (set.candidates.empty()) std::cout << "(no candidates)\n";
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string index;
  std::string gazetteer;
  size_t n = 1000;
  std::uint64_t seed = 0;
  double impossible_fraction = kDefaultImpossibleFraction;
  std::string out;
};

void RunSynth(const SynthArgs& args) {
  std::vector<GazetteerEntry> entries;
  if (!args.index.empty()) {
    entries = GazetteerIndex::Load(args.index).entries();
  } else if (!args.gazetteer.empty()) {
    entries = LoadGazetteerFile(args.gazetteer);
  } else {
    throw Error(ErrorCode::kConfiguration, "synth needs --index or --gazetteer");
  }
  auto admin = BuildAdminTables(entries);
  auto corpus = AugmentImpossible(GenerateCorpus(entries, admin, args.n, args.seed),
                                  args.impossible_fraction, args.seed + 1);
  WriteCorpusFile(args.out, corpus);
  size_t toponyms = 0, flagged = 0;
  for (const auto& d : corpus) {
    for (const auto& t : d.toponyms) {
      ++toponyms;
      flagged += t.gold && t.gold->exclude_gold;
    }
  }
  std::cout << "wrote " << corpus.size() << " documents (" << toponyms << " toponyms, " << flagged
            << " impossible) to " << args.out << "\n";
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  std::string index;
  std::string corpus;
  std::string heldout;
  std::string out;
  RankerConfig config;
  int k = 50;
  bool logit_softmax = false;
  bool no_population = false;
};

void RunTrain(TrainArgs args) {
  auto index = GazetteerIndex::Load(args.index);
  auto admin = BuildAdminTables(index.entries());
  args.config.provider_seed = args.config.seed;
  if (args.logit_softmax) args.config.score_mode = ScoreMode::kLogitSoftmax;
  if (args.no_population) args.config.use_population_feature = false;
  args.config.Validate();
  HashedBowProvider provider(args.config.context_dim, args.config.provider_seed);
  ResolveOptions resolve;
  resolve.k = args.k;

  auto corpus = ReadCorpusFile(args.corpus);
  auto examples = BuildTrainingExamples(corpus, index, provider, admin, resolve);
  std::vector<TrainingExample> heldout;
  if (!args.heldout.empty()) {
    auto docs = ReadCorpusFile(args.heldout);
    heldout = BuildTrainingExamples(docs, index, provider, admin, resolve);
  }
  std::cout << "training on " << examples.size() << " toponyms from " << corpus.size()
            << " documents\n";

  auto model = RankerModel::Create(args.config, CountryVocabulary(index));
  auto history = Train(model, examples, args.config, heldout);
  for (const auto& s : history) {
    std::printf("epoch %2d  loss %.6f  train_acc %.4f", s.epoch, s.train_loss, s.train_accuracy);
    if (s.heldout_accuracy) std::printf("  heldout_acc %.4f", *s.heldout_accuracy);
    std::printf("\n");
  }
  model.Save(args.out);
  std::cout << "saved model to " << args.out << "\n";
}

// ------------------------------------------------------------------ parse

struct ParseArgs {
  std::string index;
  std::string model;
  std::string corpus;
  std::string out;
  std::string events_out;
  int k = 50;
  int jobs = 1;
  bool population_baseline = false;
};

struct DocumentOutput {
  std::vector<ResolutionRecord> records;
  EventLocation event;
};

void RunParse(const ParseArgs& args) {
  if (args.jobs < 1) throw Error(ErrorCode::kParameter, "--jobs must be >= 1");
  auto index = GazetteerIndex::Load(args.index);
  auto admin = BuildAdminTables(index.entries());
  std::optional<RankerModel> model;
  std::optional<HashedBowProvider> provider;
  if (!args.population_baseline) {
    if (args.model.empty()) throw Error(ErrorCode::kConfiguration, "parse needs --model");
    model = RankerModel::Load(args.model);
    provider.emplace(model->config().context_dim, model->config().provider_seed);
  }
  auto corpus = ReadCorpusFile(args.corpus);
  DictionaryExtractor extractor(index);
  ProximityEventLocator locator;
  ResolveOptions resolve;
  resolve.k = args.k;

  // Documents are independent; workers claim them from a shared counter and
  // write into fixed slots so output order never depends on scheduling.
  std::vector<DocumentOutput> outputs(corpus.size());
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::string> failure;
  auto worker = [&] {
    for (size_t i = next++; i < corpus.size(); i = next++) {
      try {
        Document doc = corpus[i];
        if (doc.toponyms.empty()) ExtractToponyms(doc, extractor);
        auto& out = outputs[i];
        if (args.population_baseline) {
          out.records = PopulationBaseline(doc, index, resolve);
        } else {
          out.records = ResolveForEvaluation(doc, index, *model, *provider, admin, resolve);
        }
        out.event = LocateEvent(doc, out.records, locator);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = corpus[i].doc_id + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  const int n = std::min<int>(args.jobs, std::max<size_t>(corpus.size(), 1));
  for (int t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) throw Error(ErrorCode::kInput, *failure);

  auto out = OpenOutput(args.out);
  size_t total = 0, abstained = 0;
  for (const auto& o : outputs) {
    WriteRecords(out, o.records);
    total += o.records.size();
    for (const auto& r : o.records) abstained += r.abstained();
  }
  CheckWritten(out, args.out);

  if (!args.events_out.empty()) {
    auto events = OpenOutput(args.events_out);
    for (size_t i = 0; i < corpus.size(); ++i) {
      const auto& ev = outputs[i].event;
      nlohmann::json j = {{"doc_id", corpus[i].doc_id}};
      switch (ev.status) {
        case EventLocation::Status::kLocated: {
          const auto& r = outputs[i].records[*ev.record_index];
          j["status"] = "located";
          j["start"] = r.span.start;
          j["end"] = r.span.end;
          j["geoname_id"] = *r.predicted_geoname_id;
          j["lat"] = *r.predicted_latitude;
          j["lon"] = *r.predicted_longitude;
          break;
        }
        case EventLocation::Status::kNone: j["status"] = "none"; break;
        case EventLocation::Status::kNotApplicable: j["status"] = "not_applicable"; break;
      }
      events << j.dump() << "\n";
    }
    CheckWritten(events, args.events_out);
  }
  std::cout << "resolved " << total << " toponyms in " << corpus.size() << " documents ("
            << abstained << " abstentions) to " << args.out << "\n";
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string records;
  std::string index;
  std::string corpus;
  std::vector<int> k_values = {50, 500};
  std::string report_out;
  double threshold_km = kAccuracyThresholdKm;
  std::string label = "corpus";
};

void RunEvaluate(const EvaluateArgs& args) {
  auto records = ReadRecordsFile(args.records);
  auto report = Evaluate(records, args.threshold_km);
  if (!args.index.empty() || !args.corpus.empty()) {
    if (args.index.empty() || args.corpus.empty()) {
      throw Error(ErrorCode::kConfiguration, "query recall needs both --index and --corpus");
    }
    auto index = GazetteerIndex::Load(args.index);
    auto corpus = ReadCorpusFile(args.corpus);
    report.recall_at_k = QueryRecall(index, corpus, args.k_values);
  }
  PrintReportTable(std::cout, report, args.label);
  if (!args.report_out.empty()) {
    auto out = OpenOutput(args.report_out);
    out << ReportToJson(report).dump(2) << "\n";
    CheckWritten(out, args.report_out);
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"toporank: gazetteer-backed toponym resolution"};
  app.set_config("--config", "", "key = value file; [command] sections, flags take precedence");
  app.require_subcommand(1);

  FixtureArgs fixture;
  auto* fixture_cmd = app.add_subcommand("fixture", "Write the synthetic fixture gazetteer");
  fixture_cmd->add_option("--out", fixture.out, "Output TSV path")->required();
  fixture_cmd->add_option("--countries", fixture.options.countries)->capture_default_str();
  fixture_cmd->add_option("--adm1-per-country", fixture.options.adm1_per_country)
      ->capture_default_str();
  fixture_cmd->add_option("--places-per-adm1", fixture.options.places_per_adm1)
      ->capture_default_str();
  fixture_cmd->add_option("--homonym-rate", fixture.options.homonym_rate)->capture_default_str();
  fixture_cmd->add_option("--seed", fixture.options.seed)->capture_default_str();

  BuildIndexArgs build;
  auto* build_cmd = app.add_subcommand("build-index", "Build the candidate index from a gazetteer");
  build_cmd->add_option("--gazetteer", build.gazetteer, "Geonames-format TSV")->required();
  build_cmd->add_option("--out", build.out, "Index output path")->required();
  build_cmd->add_option("--classes", build.classes, "Feature classes to keep, e.g. A,P");
  build_cmd->add_option("--k", build.config.max_candidates, "Default candidates per query")
      ->capture_default_str();
  build_cmd->add_option("--ngram", build.config.ngram_size)->capture_default_str();
  build_cmd->add_option("--max-edit", build.config.max_edit_distance)->capture_default_str();

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Print candidates for a name");
  query_cmd->add_option("--index", query.index)->required();
  query_cmd->add_option("--name", query.name)->required();
  query_cmd->add_option("--k", query.k)->capture_default_str();
  query_cmd->add_option("--format", query.format)
      ->check(CLI::IsMember({"jsonl", "table"}))
      ->capture_default_str();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a templated corpus");
  synth_cmd->add_option("--index", synth.index, "Index to draw places from");
  synth_cmd->add_option("--gazetteer", synth.gazetteer, "Gazetteer TSV to draw places from");
  synth_cmd->add_option("--n", synth.n, "Number of documents")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--impossible-fraction", synth.impossible_fraction)
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out)->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the ranking model");
  train_cmd->add_option("--index", train.index)->required();
  train_cmd->add_option("--corpus", train.corpus)->required();
  train_cmd->add_option("--heldout", train.heldout, "Corpus scored after each epoch");
  train_cmd->add_option("--out", train.out, "Model output path")->required();
  train_cmd->add_option("--epochs", train.config.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", train.config.batch_size)->capture_default_str();
  train_cmd->add_option("--dropout", train.config.dropout)->capture_default_str();
  train_cmd->add_option("--learning-rate,--lr", train.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--embedding-dim", train.config.embedding_dim)->capture_default_str();
  train_cmd->add_option("--hidden-dim", train.config.hidden_dim)->capture_default_str();
  train_cmd->add_option("--dim", train.config.context_dim, "Context provider dimension")
      ->capture_default_str();
  train_cmd->add_option("--accumulation-steps", train.config.gradient_accumulation_steps)
      ->capture_default_str();
  train_cmd->add_option("--multitask-country-weight", train.config.multitask_country_weight)
      ->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed)->capture_default_str();
  train_cmd->add_option("--k", train.k)->capture_default_str();
  train_cmd->add_flag("--logit-softmax", train.logit_softmax, "Softmax over logits");
  train_cmd->add_flag("--no-population", train.no_population, "Zero the population feature");

  ParseArgs parse;
  auto* parse_cmd = app.add_subcommand("parse", "Resolve the toponyms of a corpus");
  parse_cmd->add_option("--index", parse.index)->required();
  parse_cmd->add_option("--model", parse.model);
  parse_cmd->add_option("--corpus", parse.corpus)->required();
  parse_cmd->add_option("--out", parse.out, "Resolution records JSONL")->required();
  parse_cmd->add_option("--events-out", parse.events_out, "Event locations JSONL");
  parse_cmd->add_option("--k", parse.k)->capture_default_str();
  parse_cmd->add_option("--jobs", parse.jobs)->capture_default_str();
  parse_cmd->add_flag("--population-baseline", parse.population_baseline,
                      "Pick the most populous candidate instead of the model");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score resolution records");
  eval_cmd->add_option("--records", eval.records)->required();
  eval_cmd->add_option("--index", eval.index, "Index for query recall");
  eval_cmd->add_option("--corpus", eval.corpus, "Corpus for query recall");
  eval_cmd->add_option("--k-values", eval.k_values)->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--threshold-km", eval.threshold_km)->capture_default_str();
  eval_cmd->add_option("--label", eval.label)->capture_default_str();
  eval_cmd->add_option("--report-out", eval.report_out, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fixture_cmd) RunFixture(fixture);
    if (*build_cmd) RunBuildIndex(build);
    if (*query_cmd) RunQuery(query);
    if (*synth_cmd) RunSynth(synth);
    if (*train_cmd) RunTrain(train);
    if (*parse_cmd) RunParse(parse);
    if (*eval_cmd) RunEvaluate(eval);
  } catch (const Error& e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace toporank

int main(int argc, char** argv) { return toporank::Main(argc, argv); }
