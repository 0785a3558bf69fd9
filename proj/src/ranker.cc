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

#include "toporank/ranker.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "binary_io.h"
#include "toporank/error.h"

namespace toporank {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

constexpr std::string_view kModelMagic = "TRNK";
constexpr std::string_view kFeatureClasses = "AHLPRSTUV";
// Keeps cosine smooth at the zero vector.
constexpr double kCosineEpsilon = 1e-12;
constexpr size_t kPopulationInput = RankerModel::kSimilarityCount + 4;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double SmoothNorm(const Eigen::VectorXd& v) { return std::sqrt(v.squaredNorm() + kCosineEpsilon); }

struct Cosine {
  double value;
  double norm_a;
  double norm_b;
};

Cosine SmoothCosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double na = SmoothNorm(a);
  double nb = SmoothNorm(b);
  return {a.dot(b) / (na * nb), na, nb};
}

// Adds upstream * d cos / d a into grad_a and likewise for b.
void CosineBackward(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Cosine& c,
                    double upstream, Eigen::Ref<Eigen::VectorXd> grad_a,
                    Eigen::Ref<Eigen::VectorXd> grad_b) {
  if (upstream == 0.0) return;
  double inv = 1.0 / (c.norm_a * c.norm_b);
  grad_a += upstream * (b * inv - a * (c.value / (c.norm_a * c.norm_a)));
  grad_b += upstream * (a * inv - b * (c.value / (c.norm_b * c.norm_b)));
}

size_t Argmax(const std::vector<double>& values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> Softmax(const std::vector<double>& u, double* log_sum_exp = nullptr) {
  double max = *std::max_element(u.begin(), u.end());
  std::vector<double> p(u.size());
  double sum = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    p[i] = std::exp(u[i] - max);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  if (log_sum_exp) *log_sum_exp = max + std::log(sum);
  return p;
}

bool SameArchitecture(const RankerConfig& a, const RankerConfig& b) {
  return a.embedding_dim == b.embedding_dim && a.hidden_dim == b.hidden_dim &&
         a.context_dim == b.context_dim;
}

}  // namespace

void RankerConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kParameter, "epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kParameter, "batch_size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error(ErrorCode::kParameter, "dropout must be in [0, 1)");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kParameter, "learning_rate must be finite and non-negative");
  }
  if (embedding_dim < 1 || hidden_dim < 1 || context_dim < 1) {
    throw Error(ErrorCode::kParameter, "dimensions must be positive");
  }
  if (gradient_accumulation_steps < 1) {
    throw Error(ErrorCode::kParameter, "gradient_accumulation_steps must be >= 1");
  }
  if (!(multitask_country_weight >= 0.0)) {
    throw Error(ErrorCode::kParameter, "multitask_country_weight must be >= 0");
  }
}

struct RankerModel::Forward {
  Eigen::VectorXd pm, po, pd;
  struct Slot {
    Eigen::VectorXd z;      // assembled input before dropout
    Eigen::VectorXd scale;  // dropout multipliers (empty in inference)
    Eigen::VectorXd h;
    Cosine sims[kSimilarityCount];
    size_t country_row = 0;
    size_t class_row = 0;
    double logit = 0.0;
    double sigmoid = 0.0;
  };
  std::vector<Slot> slots;
  double null_sigmoid = 0.0;
  std::vector<double> slot_scores;
  std::vector<double> probabilities;
  double log_sum_exp = 0.0;
};

RankerModel RankerModel::Create(const RankerConfig& config, std::vector<std::string> country_vocab) {
  config.Validate();
  std::sort(country_vocab.begin(), country_vocab.end());
  country_vocab.erase(std::unique(country_vocab.begin(), country_vocab.end()), country_vocab.end());
  std::erase(country_vocab, std::string());

  RankerModel model;
  model.config_ = config;
  model.country_vocab_ = std::move(country_vocab);
  model.ComputeLayout();
  model.params_ = Eigen::VectorXd::Zero(model.layout_.total);

  std::mt19937_64 rng(config.seed);
  auto fill = [&](Eigen::Index offset, Eigen::Index count, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < count; ++i) model.params_[offset + i] = dist(rng);
  };
  const auto& l = model.layout_;
  const int e = config.embedding_dim;
  fill(l.country_emb, l.class_emb - l.country_emb, 1.0);
  fill(l.class_emb, l.projection - l.class_emb, 1.0);
  fill(l.projection, l.w1 - l.projection, 1.0 / std::sqrt(config.context_dim));
  fill(l.w1, l.b1 - l.w1, 1.0 / std::sqrt(kInputWidth));
  fill(l.w2, l.b2 - l.w2, 1.0 / std::sqrt(config.hidden_dim));
  fill(l.country_head_w, l.country_head_b - l.country_head_w, 1.0 / std::sqrt(e));
  return model;
}

void RankerModel::ComputeLayout() {
  const Eigen::Index e = config_.embedding_dim;
  const Eigen::Index d = config_.context_dim;
  const Eigen::Index h = config_.hidden_dim;
  const Eigen::Index countries = static_cast<Eigen::Index>(country_vocab_.size()) + 1;
  Eigen::Index at = 0;
  auto take = [&](Eigen::Index n) {
    Eigen::Index start = at;
    at += n;
    return start;
  };
  layout_.country_emb = take(countries * e);
  layout_.class_emb = take(static_cast<Eigen::Index>(kClassRows) * e);
  layout_.projection = take(e * d);
  layout_.w1 = take(h * kInputWidth);
  layout_.b1 = take(h);
  layout_.w2 = take(h);
  layout_.b2 = take(1);
  layout_.null_bias = take(1);
  layout_.country_head_w = take(countries * e);
  layout_.country_head_b = take(countries);
  layout_.total = at;
}

size_t RankerModel::CountryRow(std::string_view code) const {
  if (code.empty()) return 0;
  auto it = std::lower_bound(country_vocab_.begin(), country_vocab_.end(), code);
  if (it == country_vocab_.end() || *it != code) return 0;
  return static_cast<size_t>(it - country_vocab_.begin()) + 1;
}

size_t RankerModel::ClassRow(char feature_class) {
  auto pos = kFeatureClasses.find(feature_class);
  return pos == std::string_view::npos ? 0 : pos + 1;
}

void RankerModel::Run(std::span<const CandidateFeatures> features, const ContextVectors& context,
                      std::mt19937_64* dropout_rng, Forward& fwd) const {
  const int e = config_.embedding_dim;
  const int d = config_.context_dim;
  const int h = config_.hidden_dim;
  if (context.mention_vector.size() != d || context.other_mentions_vector.size() != d ||
      context.document_vector.size() != d) {
    throw Error(ErrorCode::kConfiguration,
                "context dimension does not match model (expected " + std::to_string(d) + ")");
  }
  if (!context.mention_vector.allFinite() || !context.other_mentions_vector.allFinite() ||
      !context.document_vector.allFinite()) {
    throw Error(ErrorCode::kInput, "non-finite context vector");
  }
  const double* p = params_.data();
  const int countries = static_cast<int>(country_vocab_.size()) + 1;
  ConstMatrixMap country_emb(p + layout_.country_emb, countries, e);
  ConstMatrixMap class_emb(p + layout_.class_emb, kClassRows, e);
  ConstMatrixMap projection(p + layout_.projection, e, d);
  ConstMatrixMap w1(p + layout_.w1, h, kInputWidth);
  ConstVectorMap b1(p + layout_.b1, h);
  ConstVectorMap w2(p + layout_.w2, h);
  const double b2 = p[layout_.b2];
  const double null_bias = p[layout_.null_bias];

  fwd.pm = projection * context.mention_vector;
  fwd.po = projection * context.other_mentions_vector;
  fwd.pd = projection * context.document_vector;

  const double keep = 1.0 - config_.dropout;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  fwd.slots.assign(features.size(), {});
  fwd.slot_scores.assign(features.size() + 1, 0.0);
  for (size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    auto& s = fwd.slots[i];
    s.country_row = CountryRow(f.candidate_country);
    s.class_row = ClassRow(f.candidate_feature_class);
    Eigen::VectorXd ce = country_emb.row(static_cast<Eigen::Index>(s.country_row)).transpose();
    Eigen::VectorXd te = class_emb.row(static_cast<Eigen::Index>(s.class_row)).transpose();
    s.sims[0] = SmoothCosine(ce, fwd.pm);
    s.sims[1] = SmoothCosine(ce, fwd.po);
    s.sims[2] = SmoothCosine(ce, fwd.pd);
    s.sims[3] = SmoothCosine(te, fwd.pm);
    s.sims[4] = SmoothCosine(te, fwd.po);
    s.sims[5] = SmoothCosine(te, fwd.pd);

    s.z.resize(kInputWidth);
    for (int k = 0; k < kSimilarityCount; ++k) s.z[k] = s.sims[k].value;
    auto numeric = f.Numeric();
    for (int k = 0; k < CandidateFeatures::kNumericCount; ++k) {
      if (!std::isfinite(numeric[k])) throw Error(ErrorCode::kInput, "non-finite candidate feature");
      s.z[kSimilarityCount + k] = numeric[k];
    }
    if (!config_.use_population_feature) s.z[kPopulationInput] = 0.0;

    Eigen::VectorXd input = s.z;
    if (dropout_rng && config_.dropout > 0.0) {
      s.scale.resize(kInputWidth);
      for (int k = 0; k < kInputWidth; ++k) s.scale[k] = unit(*dropout_rng) < keep ? 1.0 / keep : 0.0;
      input = input.cwiseProduct(s.scale);
    }
    s.h = (w1 * input + b1).array().tanh().matrix();
    s.logit = w2.dot(s.h) + b2;
    s.sigmoid = Sigmoid(s.logit);
    fwd.slot_scores[i] =
        config_.score_mode == ScoreMode::kSigmoidSoftmax ? s.sigmoid : s.logit;
  }
  fwd.null_sigmoid = Sigmoid(null_bias);
  fwd.slot_scores.back() =
      config_.score_mode == ScoreMode::kSigmoidSoftmax ? fwd.null_sigmoid : null_bias;
  fwd.probabilities = Softmax(fwd.slot_scores, &fwd.log_sum_exp);
}

ScoredCandidateSet RankerModel::Score(std::span<const CandidateFeatures> features,
                                      const ContextVectors& context,
                                      std::mt19937_64* dropout_rng) const {
  Forward fwd;
  Run(features, context, dropout_rng, fwd);
  ScoredCandidateSet out;
  out.probabilities = std::move(fwd.probabilities);
  out.slot_scores = std::move(fwd.slot_scores);
  out.raw_scores.reserve(features.size());
  for (const auto& s : fwd.slots) out.raw_scores.push_back(s.sigmoid);
  out.predicted = Argmax(out.probabilities);
  return out;
}

double RankerModel::Loss(const TrainingExample& example, Eigen::VectorXd* gradient,
                         std::mt19937_64* dropout_rng) const {
  if (example.gold_slot > example.features.size()) {
    throw Error(ErrorCode::kParameter, "gold slot out of range");
  }
  Forward fwd;
  Run(example.features, example.context, dropout_rng, fwd);
  double loss = fwd.log_sum_exp - fwd.slot_scores[example.gold_slot];

  const int e = config_.embedding_dim;
  const int d = config_.context_dim;
  const int h = config_.hidden_dim;
  const int countries = static_cast<int>(country_vocab_.size()) + 1;
  const double* p = params_.data();
  const double lambda = config_.multitask_country_weight;
  const bool multitask = lambda > 0.0 && example.gold_country.has_value();

  Eigen::VectorXd head_q;
  size_t head_gold = 0;
  if (multitask) {
    ConstMatrixMap head_w(p + layout_.country_head_w, countries, e);
    ConstVectorMap head_b(p + layout_.country_head_b, countries);
    Eigen::VectorXd logits = head_w * fwd.pd + head_b;
    std::vector<double> u(logits.data(), logits.data() + logits.size());
    double lse = 0.0;
    auto q = Softmax(u, &lse);
    head_gold = CountryRow(*example.gold_country);
    loss += lambda * (lse - u[head_gold]);
    head_q = Eigen::Map<Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
  }
  if (!gradient) return loss;

  Eigen::VectorXd& g = *gradient;
  double* gp = g.data();
  MatrixMap g_country(gp + layout_.country_emb, countries, e);
  MatrixMap g_class(gp + layout_.class_emb, kClassRows, e);
  MatrixMap g_projection(gp + layout_.projection, e, d);
  MatrixMap g_w1(gp + layout_.w1, h, kInputWidth);
  VectorMap g_b1(gp + layout_.b1, h);
  VectorMap g_w2(gp + layout_.w2, h);
  ConstMatrixMap country_emb(p + layout_.country_emb, countries, e);
  ConstMatrixMap class_emb(p + layout_.class_emb, kClassRows, e);
  ConstMatrixMap w1(p + layout_.w1, h, kInputWidth);
  ConstVectorMap w2(p + layout_.w2, h);

  const bool sigmoid_mode = config_.score_mode == ScoreMode::kSigmoidSoftmax;
  Eigen::VectorXd g_pm = Eigen::VectorXd::Zero(e);
  Eigen::VectorXd g_po = Eigen::VectorXd::Zero(e);
  Eigen::VectorXd g_pd = Eigen::VectorXd::Zero(e);
  Eigen::VectorXd g_ce(e), g_te(e);

  for (size_t i = 0; i < fwd.slots.size(); ++i) {
    const auto& s = fwd.slots[i];
    double g_u = fwd.probabilities[i] - (i == example.gold_slot ? 1.0 : 0.0);
    double g_logit = sigmoid_mode ? g_u * s.sigmoid * (1.0 - s.sigmoid) : g_u;
    if (g_logit == 0.0) continue;

    g_w2 += g_logit * s.h;
    gp[layout_.b2] += g_logit;
    Eigen::VectorXd g_pre = (g_logit * w2).cwiseProduct((1.0 - s.h.array().square()).matrix());
    Eigen::VectorXd input = s.scale.size() ? s.z.cwiseProduct(s.scale) : s.z;
    g_w1 += g_pre * input.transpose();
    g_b1 += g_pre;
    Eigen::VectorXd g_z = w1.transpose() * g_pre;
    if (s.scale.size()) g_z = g_z.cwiseProduct(s.scale);

    Eigen::VectorXd ce = country_emb.row(static_cast<Eigen::Index>(s.country_row)).transpose();
    Eigen::VectorXd te = class_emb.row(static_cast<Eigen::Index>(s.class_row)).transpose();
    g_ce.setZero();
    g_te.setZero();
    CosineBackward(ce, fwd.pm, s.sims[0], g_z[0], g_ce, g_pm);
    CosineBackward(ce, fwd.po, s.sims[1], g_z[1], g_ce, g_po);
    CosineBackward(ce, fwd.pd, s.sims[2], g_z[2], g_ce, g_pd);
    CosineBackward(te, fwd.pm, s.sims[3], g_z[3], g_te, g_pm);
    CosineBackward(te, fwd.po, s.sims[4], g_z[4], g_te, g_po);
    CosineBackward(te, fwd.pd, s.sims[5], g_z[5], g_te, g_pd);
    g_country.row(static_cast<Eigen::Index>(s.country_row)) += g_ce.transpose();
    g_class.row(static_cast<Eigen::Index>(s.class_row)) += g_te.transpose();
  }

  const size_t null_slot = fwd.slots.size();
  double g_null = fwd.probabilities[null_slot] - (example.gold_slot == null_slot ? 1.0 : 0.0);
  gp[layout_.null_bias] +=
      sigmoid_mode ? g_null * fwd.null_sigmoid * (1.0 - fwd.null_sigmoid) : g_null;

  if (multitask) {
    MatrixMap g_head_w(gp + layout_.country_head_w, countries, e);
    VectorMap g_head_b(gp + layout_.country_head_b, countries);
    ConstMatrixMap head_w(p + layout_.country_head_w, countries, e);
    Eigen::VectorXd delta = head_q;
    delta[static_cast<Eigen::Index>(head_gold)] -= 1.0;
    delta *= lambda;
    g_head_w += delta * fwd.pd.transpose();
    g_head_b += delta;
    g_pd += head_w.transpose() * delta;
  }

  g_projection += g_pm * example.context.mention_vector.transpose();
  g_projection += g_po * example.context.other_mentions_vector.transpose();
  g_projection += g_pd * example.context.document_vector.transpose();
  return loss;
}

bool RankerModel::operator==(const RankerModel& other) const {
  const auto& a = config_;
  const auto& b = other.config_;
  bool same_config = a.epochs == b.epochs && a.batch_size == b.batch_size &&
                     a.dropout == b.dropout && a.learning_rate == b.learning_rate &&
                     a.embedding_dim == b.embedding_dim && a.hidden_dim == b.hidden_dim &&
                     a.gradient_accumulation_steps == b.gradient_accumulation_steps &&
                     a.multitask_country_weight == b.multitask_country_weight &&
                     a.seed == b.seed && a.score_mode == b.score_mode &&
                     a.use_population_feature == b.use_population_feature &&
                     a.context_dim == b.context_dim && a.provider_seed == b.provider_seed;
  return same_config && country_vocab_ == other.country_vocab_ &&
         params_.size() == other.params_.size() && params_ == other.params_;
}

void RankerModel::Save(const std::string& path) const {
  internal::BinaryWriter w;
  w.Put<int32_t>(config_.embedding_dim);
  w.Put<int32_t>(config_.hidden_dim);
  w.Put<int32_t>(config_.context_dim);
  w.Put<int32_t>(kInputWidth);
  w.Put<uint64_t>(config_.provider_seed);
  w.Put<uint8_t>(static_cast<uint8_t>(config_.score_mode));
  w.Put<uint8_t>(config_.use_population_feature ? 1 : 0);
  w.Put<int32_t>(config_.epochs);
  w.Put<int32_t>(config_.batch_size);
  w.Put<double>(config_.dropout);
  w.Put<double>(config_.learning_rate);
  w.Put<int32_t>(config_.gradient_accumulation_steps);
  w.Put<double>(config_.multitask_country_weight);
  w.Put<uint64_t>(config_.seed);
  w.Put<uint64_t>(country_vocab_.size());
  for (const auto& code : country_vocab_) w.PutString(code);
  w.PutDoubles(params_.data(), static_cast<size_t>(params_.size()));
  w.WriteFile(path, kModelMagic, kModelFormatVersion);
}

RankerModel RankerModel::Load(const std::string& path) {
  internal::BinaryReader r(path, kModelMagic, kModelFormatVersion);
  RankerModel model;
  auto& c = model.config_;
  c.embedding_dim = r.Get<int32_t>();
  c.hidden_dim = r.Get<int32_t>();
  c.context_dim = r.Get<int32_t>();
  if (r.Get<int32_t>() != kInputWidth) {
    throw Error(ErrorCode::kIncompatible, "model input width differs from this build: " + path);
  }
  c.provider_seed = r.Get<uint64_t>();
  auto mode = r.Get<uint8_t>();
  if (mode > 1) throw Error(ErrorCode::kCorruption, "unknown score mode in " + path);
  c.score_mode = static_cast<ScoreMode>(mode);
  c.use_population_feature = r.Get<uint8_t>() != 0;
  c.epochs = r.Get<int32_t>();
  c.batch_size = r.Get<int32_t>();
  c.dropout = r.Get<double>();
  c.learning_rate = r.Get<double>();
  c.gradient_accumulation_steps = r.Get<int32_t>();
  c.multitask_country_weight = r.Get<double>();
  c.seed = r.Get<uint64_t>();
  try {
    c.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruption, std::string("stored config invalid: ") + e.what());
  }
  auto n = r.Get<uint64_t>();
  if (n > r.remaining()) throw Error(ErrorCode::kCorruption, "bad vocabulary size");
  for (uint64_t i = 0; i < n; ++i) model.country_vocab_.push_back(r.GetString());
  if (!std::is_sorted(model.country_vocab_.begin(), model.country_vocab_.end())) {
    throw Error(ErrorCode::kCorruption, "country vocabulary not sorted");
  }
  model.ComputeLayout();
  model.params_.resize(model.layout_.total);
  r.GetDoubles(model.params_.data(), static_cast<size_t>(model.layout_.total));
  r.ExpectEnd();
  if (!model.params_.allFinite()) throw Error(ErrorCode::kCorruption, "non-finite parameters");
  return model;
}

ScoredCandidateSet ScoreCandidates(const RankerModel& model,
                                   std::span<const CandidateFeatures> features,
                                   const ContextVectors& context, bool training_mode,
                                   std::uint64_t dropout_seed) {
  if (!training_mode) return model.Score(features, context);
  std::mt19937_64 rng(dropout_seed);
  return model.Score(features, context, &rng);
}

double Accuracy(const RankerModel& model, std::span<const TrainingExample> data) {
  if (data.empty()) return 0.0;
  size_t correct = 0;
  for (const auto& ex : data) {
    if (model.Score(ex.features, ex.context).predicted == ex.gold_slot) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainingHistory Train(RankerModel& model, std::span<const TrainingExample> data,
                      const RankerConfig& config, std::span<const TrainingExample> heldout) {
  config.Validate();
  if (!SameArchitecture(config, model.config())) {
    throw Error(ErrorCode::kConfiguration, "training config does not match model dimensions");
  }
  if (data.empty()) throw Error(ErrorCode::kParameter, "empty training set");
  for (const auto& ex : data) {
    if (ex.gold_slot > ex.features.size()) throw Error(ErrorCode::kParameter, "gold slot out of range");
  }
  model.mutable_config() = config;

  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(config.seed);
  std::mt19937_64 dropout_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  Eigen::VectorXd batch_grad(model.parameters().size());
  Eigen::VectorXd pending(model.parameters().size());

  TrainingHistory history;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    pending.setZero();
    int accumulated = 0;
    auto step = [&] {
      model.mutable_parameters() -= (config.learning_rate / accumulated) * pending;
      pending.setZero();
      accumulated = 0;
    };
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      batch_grad.setZero();
      for (size_t i = start; i < end; ++i) {
        double loss = model.Loss(data[order[i]], &batch_grad, &dropout_rng);
        if (!std::isfinite(loss)) {
          throw Error(ErrorCode::kNumerical, "non-finite loss at epoch " + std::to_string(epoch) +
                                                 ", example " + std::to_string(order[i]));
        }
      }
      pending += batch_grad / static_cast<double>(end - start);
      if (++accumulated == config.gradient_accumulation_steps) step();
    }
    if (accumulated > 0) step();
    if (!model.parameters().allFinite()) {
      throw Error(ErrorCode::kNumerical, "parameters diverged at epoch " + std::to_string(epoch));
    }

    EpochStats stats;
    stats.epoch = epoch;
    size_t correct = 0;
    for (const auto& ex : data) {
      stats.train_loss += model.Loss(ex, nullptr);
      if (model.Score(ex.features, ex.context).predicted == ex.gold_slot) ++correct;
    }
    stats.train_loss /= static_cast<double>(data.size());
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    if (!heldout.empty()) stats.heldout_accuracy = Accuracy(model, heldout);
    history.push_back(stats);
  }
  return history;
}

double GradientCheck(const RankerModel& model, const TrainingExample& example, double epsilon) {
  if (epsilon < 1e-6 || epsilon > 1e-3) throw Error(ErrorCode::kParameter, "epsilon outside [1e-6, 1e-3]");
  RankerModel probe = model;
  probe.mutable_config().dropout = 0.0;
  Eigen::VectorXd analytic = Eigen::VectorXd::Zero(probe.parameters().size());
  probe.Loss(example, &analytic);

  // Gradients below this magnitude are compared absolutely.
  constexpr double kFloor = 1e-6;
  double worst = 0.0;
  auto& params = probe.mutable_parameters();
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + epsilon;
    double plus = probe.Loss(example, nullptr);
    params[i] = saved - epsilon;
    double minus = probe.Loss(example, nullptr);
    params[i] = saved;
    double numeric = (plus - minus) / (2.0 * epsilon);
    double denom = std::max({std::abs(analytic[i]), std::abs(numeric), kFloor});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace toporank
