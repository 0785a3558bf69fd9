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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Measured values are printed alongside each verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "toporank/evaluation.h"
#include "toporank/fixture.h"
#include "toporank/index.h"
#include "toporank/pipeline.h"
#include "toporank/ranker.h"
#include "toporank/synthgen.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void Report(int criterion, const std::string& title, const std::function<Verdict()>& check) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s criterion %d: %s (%s; %.1fs)\n", v.pass ? "PASS" : "FAIL", criterion,
              title.c_str(), v.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

std::string ReadBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// One document per entry whose text is exactly the entry's primary name.
std::vector<Document> ExactNameCorpus(const std::vector<GazetteerEntry>& entries) {
  std::vector<Document> corpus;
  for (const auto& e : entries) {
    Document doc;
    doc.doc_id = std::to_string(e.geoname_id);
    doc.text = e.name;
    Toponym t;
    t.span = {0, CodePointLength(e.name)};
    t.surface = e.name;
    t.gold = GoldAnnotation{};
    t.gold->geoname_id = e.geoname_id;
    doc.toponyms.push_back(t);
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::string Mutate(const std::string& name, std::mt19937_64& rng) {
  std::u32string cps = DecodeUtf8(name);
  const size_t pos = std::uniform_int_distribution<size_t>(0, cps.size() - 1)(rng);
  const char32_t letter = U'a' + static_cast<char32_t>(rng() % 26);
  switch (rng() % 3) {
    case 0: cps[pos] = cps[pos] == letter ? U'z' : letter; break;
    case 1: cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(pos), letter); break;
    default:
      if (cps.size() > 1) cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(pos));
      break;
  }
  return EncodeUtf8(cps);
}

std::vector<std::vector<Document>> monotonicity_corpora;
std::vector<std::string> monotonicity_names;

void RememberCorpus(const std::string& name, std::vector<Document> corpus) {
  if (std::find(monotonicity_names.begin(), monotonicity_names.end(), name) !=
      monotonicity_names.end()) {
    return;
  }
  monotonicity_names.push_back(name);
  monotonicity_corpora.push_back(std::move(corpus));
}

// ---------------------------------------------------------------------------

Verdict IndexOracleEquivalence() {
  FixtureOptions options;
  options.places_per_adm1 = 40;
  auto entries = MakeFixtureGazetteer(options);
  if (entries.size() < 5000) return {false, Format("fixture has only %zu entries", entries.size())};
  entries.resize(5000);
  auto index = GazetteerIndex::Build(entries);
  std::mt19937_64 rng(2024);
  size_t mismatches = 0, queries = 0, nonempty = 0;
  std::vector<Document> typo_corpus;
  for (int q = 0; q < 200; ++q) {
    const auto& e = entries[rng() % entries.size()];
    const std::string name = q < 100 ? e.name : Mutate(e.name, rng);
    const auto got = index.Query(name, 50);
    const auto want = oracle::BruteForceQuery(entries, index.config(), name, 50);
    ++queries;
    nonempty += !want.empty();
    bool same = got.candidates.size() == want.size();
    for (size_t i = 0; same && i < want.size(); ++i) {
      same = got.candidates[i].entry.geoname_id == want[i].id &&
             got.candidates[i].exact == want[i].exact &&
             got.candidates[i].edit_distance == want[i].distance;
    }
    mismatches += !same;

    Document doc;
    doc.doc_id = "typo-" + std::to_string(q);
    doc.text = name;
    Toponym t;
    t.span = {0, CodePointLength(name)};
    t.gold = GoldAnnotation{};
    t.gold->geoname_id = e.geoname_id;
    doc.toponyms.push_back(t);
    typo_corpus.push_back(std::move(doc));
  }
  RememberCorpus("5k-fixture exact+typo queries", std::move(typo_corpus));
  return {mismatches == 0, Format("%zu/%zu queries identical to brute force, %zu non-empty, 5000 entries",
                                  queries - mismatches, queries, nonempty)};
}

Verdict ExactNameRecall() {
  auto entries = MakeFixtureGazetteer();
  auto index = GazetteerIndex::Build(entries);
  auto corpus = ExactNameCorpus(entries);
  const std::vector<int> ks = {50, 500};
  auto recall = QueryRecall(index, corpus, ks);
  RememberCorpus("exact-name corpus", corpus);
  return {recall.at(50) == 0.0,
          Format("missing@50 = %.4f%%, missing@500 = %.4f%% over %zu names", 100 * recall.at(50),
                 100 * recall.at(500), corpus.size())};
}

Eigen::VectorXd RandomUnit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = normal(rng);
  return v.normalized();
}

CandidateFeatures RandomFeatures(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  static const char* kCountries[] = {"US", "FR", "DE", "XX"};
  static const char kClasses[] = {'P', 'A', 'H', 'T'};
  CandidateFeatures f;
  f.min_edit_distance = 0.5 * unit(rng);
  f.avg_edit_distance = f.min_edit_distance + 0.5 * unit(rng);
  f.exact_match_flag = unit(rng) < 0.5;
  f.alt_name_count_log = unit(rng);
  f.population_log = 7.0 * unit(rng);
  f.is_adm1_of_other_toponym = unit(rng) < 0.3;
  f.has_adm1_parent_in_doc = unit(rng) < 0.3;
  f.shared_country_fraction = unit(rng);
  f.candidate_country = kCountries[rng() % 4];
  f.candidate_feature_class = kClasses[rng() % 4];
  return f;
}

Verdict GradientCorrectness() {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    RankerConfig config;
    config.embedding_dim = 3 + trial % 4;
    config.hidden_dim = 4 + trial % 5;
    config.context_dim = 16 + trial % 3;
    config.seed = 1000 + trial;
    config.dropout = 0.0;
    config.score_mode = trial % 3 == 2 ? ScoreMode::kLogitSoftmax : ScoreMode::kSigmoidSoftmax;
    config.multitask_country_weight = trial % 2 ? 0.5 : 0.0;
    auto model = RankerModel::Create(config, {"US", "FR", "DE"});
    TrainingExample ex;
    for (size_t i = 0, n = 1 + rng() % 6; i < n; ++i) ex.features.push_back(RandomFeatures(rng));
    ex.context = {RandomUnit(config.context_dim, rng), RandomUnit(config.context_dim, rng),
                  RandomUnit(config.context_dim, rng)};
    ex.gold_slot = rng() % (ex.features.size() + 1);
    ex.gold_country = "FR";
    worst = std::max(worst, GradientCheck(model, ex, 1e-5));
  }
  return {worst < 1e-4, Format("max relative error %.3e over 20 instances (bound 1e-4)", worst)};
}

Verdict SoftmaxInvariants() {
  std::mt19937_64 rng(41);
  double worst_sum = 0.0;
  size_t argmax_violations = 0, shift_violations = 0;
  RankerConfig sigmoid_config;
  RankerConfig logit_config;
  logit_config.score_mode = ScoreMode::kLogitSoftmax;
  for (int call = 0; call < 1000; ++call) {
    const bool logit = call % 2;
    auto config = logit ? logit_config : sigmoid_config;
    config.seed = static_cast<std::uint64_t>(call / 50);
    static std::vector<RankerModel> cache(40);
    auto& model = cache[call / 25];
    if (model.parameters().size() == 0) model = RankerModel::Create(config, {"US", "FR", "DE"});
    std::vector<CandidateFeatures> feats;
    for (size_t i = 0, n = 1 + rng() % 20; i < n; ++i) feats.push_back(RandomFeatures(rng));
    ContextVectors ctx{RandomUnit(64, rng), RandomUnit(64, rng), RandomUnit(64, rng)};
    auto scored = model.Score(feats, ctx);
    double sum = 0.0;
    for (double p : scored.probabilities) sum += p;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    size_t best = 0;
    for (size_t i = 1; i < scored.probabilities.size(); ++i) {
      if (scored.probabilities[i] > scored.probabilities[best]) best = i;
    }
    argmax_violations += best != scored.predicted;

    // Adding one constant to every softmax input: shift the shared output
    // bias and the null bias together in logit mode; in sigmoid mode the
    // slot scores are shifted directly.
    size_t shifted_pred;
    const double c = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    if (model.config().score_mode == ScoreMode::kLogitSoftmax) {
      auto shifted = model;
      shifted.mutable_parameters()[model.layout().b2] += c;
      shifted.mutable_parameters()[model.layout().null_bias] += c;
      shifted_pred = shifted.Score(feats, ctx).predicted;
    } else {
      std::vector<double> s = scored.slot_scores;
      for (double& v : s) v += c;
      shifted_pred = static_cast<size_t>(std::max_element(s.begin(), s.end()) - s.begin());
    }
    shift_violations += shifted_pred != scored.predicted;
  }
  const bool pass = worst_sum <= 1e-9 && argmax_violations == 0 && shift_violations == 0;
  return {pass, Format("max |sum-1| = %.2e, argmax violations %zu, shift violations %zu over 1000 calls",
                       worst_sum, argmax_violations, shift_violations)};
}

Verdict HaversineCorrectness() {
  const double lp = HaversineKm(51.5074, -0.1278, 48.8566, 2.3522);
  const double anti = HaversineKm(0, 0, 0, 180);
  const double lp_oracle = oracle::ChordDistanceKm(51.5074, -0.1278, 48.8566, 2.3522);
  const double anti_oracle = std::numbers::pi * 6371.0088;
  const bool pass = std::abs(lp - 343.6) <= 0.005 * 343.6 && std::abs(anti - 20015.1) <= 0.001 * 20015.1 &&
                    std::abs(lp - lp_oracle) <= 1e-6 * lp_oracle &&
                    std::abs(anti - anti_oracle) <= 1e-9 * anti_oracle;
  return {pass, Format("London-Paris %.3f km (oracle %.3f), antipodal %.3f km (oracle %.3f)", lp,
                       lp_oracle, anti, anti_oracle)};
}

// ---------------------------------------------------------------------------
// Full fixture pipeline shared by the synthetic reproduction, abstention and
// determinism criteria.

struct PipelineRun {
  size_t gazetteer_size = 0;
  size_t countries = 0;
  size_t train_docs = 0;
  size_t heldout_docs = 0;
  size_t impossible_annotations = 0;
  size_t annotations = 0;
  // Held-out impossible cases whose candidate set was empty after the gold
  // entry was removed; abstention there needs no model decision.
  size_t impossible_without_candidates = 0;
  MetricsReport model_report;
  MetricsReport baseline_report;
  std::string model_bytes;
  TrainingHistory history;
};

constexpr size_t kDocuments = 2000;
constexpr size_t kTrainDocuments = 1600;

PipelineRun RunFixturePipeline(const std::filesystem::path& dir, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  PipelineRun run;
  auto entries = MakeFixtureGazetteer();
  run.gazetteer_size = entries.size();
  std::set<std::string> countries;
  for (const auto& e : entries) countries.insert(e.country_code);
  run.countries = countries.size();

  const std::string index_path = (dir / "fixture.idx").string();
  GazetteerIndex::Build(entries).Save(index_path);
  auto index = GazetteerIndex::Load(index_path);
  auto admin = BuildAdminTables(index.entries());

  auto corpus = AugmentImpossible(GenerateCorpus(index.entries(), admin, kDocuments, seed),
                                  kDefaultImpossibleFraction, seed + 1);
  for (const auto& d : corpus) {
    for (const auto& t : d.toponyms) {
      ++run.annotations;
      run.impossible_annotations += t.gold->exclude_gold;
    }
  }
  // Documents are generated independently, so a prefix split is a random split.
  std::vector<Document> train(corpus.begin(), corpus.begin() + kTrainDocuments);
  std::vector<Document> heldout(corpus.begin() + kTrainDocuments, corpus.end());
  run.train_docs = train.size();
  run.heldout_docs = heldout.size();
  RememberCorpus("synthetic train split", train);
  RememberCorpus("synthetic held-out split", heldout);

  RankerConfig config;  // epochs 15, batch 60, dropout 0.3, learning rate 0.4
  config.seed = seed + 2;
  config.provider_seed = seed + 3;
  HashedBowProvider provider(config.context_dim, config.provider_seed);
  auto examples = BuildTrainingExamples(train, index, provider, admin);
  std::vector<std::string> vocab(countries.begin(), countries.end());
  auto model = RankerModel::Create(config, vocab);
  run.history = Train(model, examples, config);

  const std::string model_path = (dir / "model.bin").string();
  model.Save(model_path);
  run.model_bytes = ReadBytes(model_path);
  auto loaded = RankerModel::Load(model_path);

  std::vector<ResolutionRecord> records, baseline;
  for (const auto& doc : heldout) {
    for (auto& r : ResolveForEvaluation(doc, index, loaded, provider, admin)) {
      run.impossible_without_candidates += r.impossible() && r.candidate_count == 0;
      records.push_back(r);
    }
    for (auto& r : PopulationBaseline(doc, index)) baseline.push_back(r);
  }
  run.model_report = Evaluate(records);
  run.baseline_report = Evaluate(baseline);
  const std::vector<int> ks = {50, 500};
  run.model_report.recall_at_k = QueryRecall(index, heldout, ks);
  return run;
}

}  // namespace
}  // namespace toporank

int main() {
  using namespace toporank;
  const auto scratch = std::filesystem::temp_directory_path() /
                       ("toporank_acceptance_" + std::to_string(std::random_device{}()));

  Report(1, "index query equals brute-force scan on a 5,000-entry fixture", IndexOracleEquivalence);
  Report(2, "exact-name recall missing@50 = 0", ExactNameRecall);
  Report(3, "analytic gradients match central differences", GradientCorrectness);
  Report(4, "softmax normalization and argmax invariance", SoftmaxInvariants);

  std::optional<PipelineRun> first, second;
  Report(5, "synthetic reproduction: held-out exact match >= 90% and >= population baseline", [&] {
    first = RunFixturePipeline(scratch / "run1", 2026);
    const auto& r = *first;
    const bool sized = r.gazetteer_size >= 2000 && r.countries >= 20;
    const double em = r.model_report.exact_match, base = r.baseline_report.exact_match;
    return Verdict{sized && em >= 0.90 && em >= base,
                   Format("exact match %.2f%% vs baseline %.2f%%; %zu entries, %zu countries, %zu docs "
                          "(%zu/%zu annotations impossible), final train loss %.4f",
                          100 * em, 100 * base, r.gazetteer_size, r.countries, r.train_docs + r.heldout_docs,
                          r.impossible_annotations, r.annotations, r.history.back().train_loss)};
  });
  Report(6, "abstention recall >= 80% on held-out impossible cases", [&] {
    if (!first) return Verdict{false, "pipeline run unavailable"};
    const auto& m = first->model_report;
    return Verdict{m.n_impossible > 0 && m.abstention_recall >= 0.80,
                   Format("abstention recall %.2f%% over %zu impossible cases (%zu with no candidates left); "
                          "false abstention %.2f%%",
                          100 * m.abstention_recall, m.n_impossible,
                          first->impossible_without_candidates, 100 * m.abstention_false_rate)};
  });
  Report(7, "haversine London-Paris and antipodal distances", HaversineCorrectness);
  Report(8, "identical seeds give byte-identical models and identical reports", [&] {
    if (!first) return Verdict{false, "first pipeline run unavailable"};
    second = RunFixturePipeline(scratch / "run2", 2026);
    const bool bytes = first->model_bytes == second->model_bytes;
    const bool reports = first->model_report == second->model_report &&
                         first->baseline_report == second->baseline_report;
    return Verdict{bytes && reports && !first->model_bytes.empty(),
                   Format("model files %s (%zu bytes), reports %s", bytes ? "identical" : "differ",
                          first->model_bytes.size(), reports ? "identical" : "differ")};
  });
  Report(9, "evaluate equals brute-force recomputation on 100 hand-built records", [] {
    // 20 each of exact hits, 100 km near misses, country-only hits,
    // abstentions on retrievable gold, and impossible cases (half abstained).
    std::vector<ResolutionRecord> records;
    const double off = 100.0 / (kEarthRadiusKm * std::numbers::pi / 180.0);
    for (int i = 0; i < 100; ++i) {
      ResolutionRecord r;
      r.doc_id = "hand-" + std::to_string(i);
      r.gold = GoldAnnotation{};
      r.gold->geoname_id = 1000 + i;
      r.gold->latitude = -60.0 + 1.1 * i;
      r.gold->longitude = -170.0 + 3.3 * i;
      r.gold->country = "US";
      r.gold->admin1 = "TX";
      r.gold->feature_class = 'P';
      r.gold_in_candidates = true;
      auto predict = [&](GeonameId id, double lat, double lon, const char* adm1, char cls) {
        r.predicted_geoname_id = id;
        r.predicted_latitude = lat;
        r.predicted_longitude = lon;
        r.predicted_country = "US";
        r.predicted_admin1 = adm1;
        r.predicted_feature_class = cls;
      };
      switch (i / 20) {
        case 0: predict(*r.gold->geoname_id, *r.gold->latitude, *r.gold->longitude, "TX", 'P'); break;
        case 1: predict(5000 + i, *r.gold->latitude + off, *r.gold->longitude, "TX", 'P'); break;
        case 2: predict(6000 + i, *r.gold->latitude + 8.0, *r.gold->longitude, "OH", 'A'); break;
        case 3: break;
        case 4:
          r.gold_in_candidates = false;
          if (i % 2) predict(7000 + i, *r.gold->latitude, *r.gold->longitude + 2.0, "CA", 'P');
          break;
      }
      records.push_back(r);
    }
    const auto got = Evaluate(records);
    const auto want = oracle::BruteForceMetrics(records, kAccuracyThresholdKm);
    const bool counts = got.n_eval == want.n_eval && got.n_resolvable == want.n_resolvable &&
                        got.n_distance == want.n_distance && got.n_impossible == want.n_impossible;
    const bool fractions = got.exact_match == want.exact_match &&
                           got.correct_country == want.correct_country &&
                           got.correct_feature_class == want.correct_feature_class &&
                           got.correct_adm1 == want.correct_adm1 &&
                           got.acc_at_161km == want.acc_at_161km &&
                           got.abstention_recall == want.abstention_recall &&
                           got.abstention_false_rate == want.abstention_false_rate;
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    const bool distances = close(got.mean_error_km, want.mean_error_km) &&
                           close(got.median_error_km, want.median_error_km);
    return Verdict{counts && fractions && distances,
                   Format("exact %.2f acc@161 %.4f mean %.6f km (oracle %.6f) median %.6f km (oracle %.6f) "
                          "abstention recall %.2f false rate %.2f",
                          got.exact_match, got.acc_at_161km, got.mean_error_km, want.mean_error_km,
                          got.median_error_km, want.median_error_km, got.abstention_recall,
                          got.abstention_false_rate)};
  });
  Report(10, "missing@500 <= missing@50 on every suite corpus", [] {
    auto entries5k = [] {
      FixtureOptions options;
      options.places_per_adm1 = 40;
      auto e = MakeFixtureGazetteer(options);
      e.resize(5000);
      return e;
    }();
    auto index5k = GazetteerIndex::Build(entries5k);
    auto index = GazetteerIndex::Build(MakeFixtureGazetteer());
    const std::vector<int> ks = {50, 500};
    std::string detail;
    bool pass = !monotonicity_corpora.empty();
    for (size_t i = 0; i < monotonicity_corpora.size(); ++i) {
      const auto& idx = i == 0 ? index5k : index;
      auto recall = QueryRecall(idx, monotonicity_corpora[i], ks);
      pass &= recall.at(500) <= recall.at(50);
      detail += Format("%s%s %.3f%%/%.3f%%", detail.empty() ? "" : "; ",
                       monotonicity_names[i].c_str(), 100 * recall.at(50), 100 * recall.at(500));
    }
    return Verdict{pass, "missing@50/missing@500: " + detail};
  });

  std::error_code ec;
  std::filesystem::remove_all(scratch, ec);
  std::printf("%s: %d criterion failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
