// Copyright 2026 The liveredact Authors.
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

// Digit-triggered entity typing: sparse n-gram plus dialog-state features,
// L2-regularized multinomial logistic regression trained with L-BFGS, and
// uncertainty-aware self-training.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "liveredact/common.hpp"

namespace liveredact::nlu {

inline constexpr std::size_t kHistoryLen = 20;

// ---------------------------------------------------------------------------
// Dialog state

enum class TimeBucket : std::uint8_t { kUnder1Min, k1To3Min, k3To10Min, kOver10Min };

inline TimeBucket time_bucket(Millis call_time_ms) {
  if (call_time_ms < 60'000) return TimeBucket::kUnder1Min;
  if (call_time_ms < 180'000) return TimeBucket::k1To3Min;
  if (call_time_ms < 600'000) return TimeBucket::k3To10Min;
  return TimeBucket::kOver10Min;
}

/// Binary conversation-state features. `detected` and the transaction bits
/// only ever turn on within a call.
struct DialogState {
  TimeBucket bucket = TimeBucket::kUnder1Min;
  EntitySet detected;
  bool payment_in_progress = false;
  bool payment_completed = false;

  void advance_time(Millis call_time_ms) { bucket = time_bucket(call_time_ms); }

  // Transaction bits are a guess at "transaction history": any payment entity
  // starts a payment; a full card (number, date, code) or a full bank pair
  // (routing, account) completes it.
  void record_capture(EntityType t) {
    if (t == EntityType::kOther) return;
    detected.insert(t);
    if (t != EntityType::kZip) payment_in_progress = true;
    const bool card = detected.contains(EntityType::kCcNum) &&
                      detected.contains(EntityType::kExpDate) && detected.contains(EntityType::kCvv);
    const bool bank = detected.contains(EntityType::kRouting) && detected.contains(EntityType::kBankAcc);
    if (card || bank) payment_completed = true;
  }

  friend bool operator==(const DialogState&, const DialogState&) = default;
};

/// Everything the classifier sees when a digit triggers it.
struct NluContext {
  std::string trigger;
  std::vector<std::string> history;  // oldest first, at most kHistoryLen
  DialogState dialog;
  // Where the trigger came from; only oracles look at these.
  Channel channel = Channel::kCaller;
  Millis trigger_start_ms = 0;
  Millis trigger_end_ms = 0;
  Millis call_time_ms = 0;
};

// ---------------------------------------------------------------------------
// Features

/// Fixed feature ids: 4 time buckets, 7 detected-entity bits, 2 transaction
/// bits, then one OOV id per n-gram order 1..3.
inline constexpr std::uint32_t kTimeBucketBase = 0;
inline constexpr std::uint32_t kDetectedBase = 4;
inline constexpr std::uint32_t kPaymentInProgress = kDetectedBase + kNumEntityTypes;
inline constexpr std::uint32_t kPaymentCompleted = kPaymentInProgress + 1;
inline constexpr std::uint32_t kOovBase = kPaymentCompleted + 1;
inline constexpr int kMaxOrder = 3;
inline constexpr std::uint32_t kFirstNgramId = kOovBase + kMaxOrder;

inline std::uint32_t oov_id(int order) { return kOovBase + static_cast<std::uint32_t>(order - 1); }

struct Feature {
  std::uint32_t id = 0;
  double value = 1.0;
  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Sparse feature vector, sorted by id with no duplicates.
struct FeatureVector {
  std::vector<Feature> entries;

  bool contains(std::uint32_t id) const {
    return std::binary_search(entries.begin(), entries.end(), Feature{id, 0.0},
                              [](const Feature& a, const Feature& b) { return a.id < b.id; });
  }

  static FeatureVector from_ids(std::vector<std::uint32_t> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    FeatureVector fv;
    fv.entries.reserve(ids.size());
    for (auto id : ids) fv.entries.push_back({id, 1.0});
    return fv;
  }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline std::vector<std::string> window_of(const NluContext& ctx) {
  std::vector<std::string> w;
  const std::size_t skip = ctx.history.size() > kHistoryLen ? ctx.history.size() - kHistoryLen : 0;
  w.assign(ctx.history.begin() + static_cast<std::ptrdiff_t>(skip), ctx.history.end());
  w.push_back(ctx.trigger);
  return w;
}

/// All n-grams of the given orders over history + trigger, space-joined.
inline std::vector<std::pair<int, std::string>> ngrams_of(const NluContext& ctx,
                                                           const std::vector<int>& orders) {
  const auto w = window_of(ctx);
  std::vector<std::pair<int, std::string>> out;
  for (int n : orders) {
    if (n < 1 || n > kMaxOrder) continue;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= w.size(); ++i) {
      std::string g = w[i];
      for (int k = 1; k < n; ++k) g += " " + w[i + static_cast<std::size_t>(k)];
      out.emplace_back(n, std::move(g));
    }
  }
  return out;
}

inline void append_dialog_ids(const DialogState& d, std::vector<std::uint32_t>& ids) {
  ids.push_back(kTimeBucketBase + static_cast<std::uint32_t>(d.bucket));
  for (EntityType t : kAllEntityTypes)
    if (d.detected.contains(t)) ids.push_back(kDetectedBase + static_cast<std::uint32_t>(index_of(t)));
  if (d.payment_in_progress) ids.push_back(kPaymentInProgress);
  if (d.payment_completed) ids.push_back(kPaymentCompleted);
}

/// n-gram -> feature id map. N-grams below the frequency cutoff share their
/// order's OOV id.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<int> orders) : orders_(std::move(orders)) {}

  static Vocabulary build(const std::vector<NluContext>& contexts, std::vector<int> orders = {1, 2, 3},
                          std::size_t min_freq = 2) {
    Vocabulary v(std::move(orders));
    std::map<std::string, std::size_t> counts;
    for (const auto& ctx : contexts)
      for (auto& [n, g] : ngrams_of(ctx, v.orders_)) ++counts[g];
    std::uint32_t next = kFirstNgramId;
    for (const auto& [g, c] : counts)
      if (c >= min_freq) v.ids_.emplace(g, next++);
    return v;
  }

  std::uint32_t lookup(int order, const std::string& gram) const {
    auto it = ids_.find(gram);
    return it == ids_.end() ? oov_id(order) : it->second;
  }

  std::size_t num_features() const { return kFirstNgramId + ids_.size(); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<int>& orders() const { return orders_; }
  const std::map<std::string, std::uint32_t>& ids() const { return ids_; }

  nlohmann::json to_json() const { return {{"orders", orders_}, {"ngrams", ids_}}; }
  static Vocabulary from_json(const nlohmann::json& j) {
    Vocabulary v(j.at("orders").get<std::vector<int>>());
    v.ids_ = j.at("ngrams").get<std::map<std::string, std::uint32_t>>();
    for (const auto& [g, id] : v.ids_)
      if (id < kFirstNgramId || id >= v.num_features())
        throw FormatError("vocabulary id out of range for '" + g + "'");
    return v;
  }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<int> orders_ = {1, 2, 3};
  std::map<std::string, std::uint32_t> ids_;
};

inline FeatureVector extract_features(const NluContext& ctx, const Vocabulary& vocab) {
  std::vector<std::uint32_t> ids;
  for (const auto& [n, g] : ngrams_of(ctx, vocab.orders())) ids.push_back(vocab.lookup(n, g));
  append_dialog_ids(ctx.dialog, ids);
  return FeatureVector::from_ids(std::move(ids));
}

// ---------------------------------------------------------------------------
// Model

using Distribution = std::array<double, kNumEntityTypes>;

struct Prediction {
  EntityType type = EntityType::kRouting;
  Distribution probs{};
};

/// First index of the maximum, so ties resolve in class declaration order.
inline EntityType argmax(const Distribution& p) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c)
    if (p[c] > p[best]) best = c;
  return kAllEntityTypes[best];
}

inline double entropy(const Distribution& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

inline void softmax_inplace(Distribution& s) {
  const double m = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (double& x : s) z += (x = std::exp(x - m));
  for (double& x : s) x /= z;
}

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "liveredact-logreg";

struct LogRegModel {
  Vocabulary vocab;
  std::vector<double> weights;  // row-major, classes x features
  std::array<double, kNumEntityTypes> biases{};
  double l2_lambda = 1.0;

  static LogRegModel zeros(Vocabulary vocab, double lambda = 1.0) {
    LogRegModel m;
    m.weights.assign(kNumEntityTypes * vocab.num_features(), 0.0);
    m.vocab = std::move(vocab);
    m.l2_lambda = lambda;
    return m;
  }

  std::size_t num_features() const { return vocab.num_features(); }
  double& w(std::size_t cls, std::uint32_t feature) { return weights[cls * num_features() + feature]; }
  double w(std::size_t cls, std::uint32_t feature) const { return weights[cls * num_features() + feature]; }

  Distribution scores(const FeatureVector& fv) const {
    Distribution s = biases;
    const std::size_t nf = num_features();
    for (const auto& f : fv.entries) {
      if (f.id >= nf) continue;
      for (std::size_t c = 0; c < kNumEntityTypes; ++c) s[c] += weights[c * nf + f.id] * f.value;
    }
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json classes = nlohmann::json::array();
    for (EntityType t : kAllEntityTypes) classes.push_back(entity_name(t));
    std::vector<std::vector<double>> rows(kNumEntityTypes);
    for (std::size_t c = 0; c < kNumEntityTypes; ++c)
      rows[c].assign(weights.begin() + static_cast<std::ptrdiff_t>(c * num_features()),
                     weights.begin() + static_cast<std::ptrdiff_t>((c + 1) * num_features()));
    return {{"format", kModelFormatName}, {"version", kModelFormatVersion},
            {"classes", classes},         {"lambda", l2_lambda},
            {"vocabulary", vocab.to_json()}, {"biases", biases},
            {"weights", rows}};
  }

  static LogRegModel from_json(const nlohmann::json& j) {
    if (j.value("format", std::string()) != kModelFormatName)
      throw FormatError("not a logistic-regression model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw FormatError("model version " + std::to_string(version) + " does not match supported version " +
                        std::to_string(kModelFormatVersion));
    const auto classes = j.at("classes").get<std::vector<std::string>>();
    if (classes.size() != kNumEntityTypes) throw FormatError("model class list has wrong length");
    for (std::size_t c = 0; c < kNumEntityTypes; ++c)
      if (classes[c] != entity_name(kAllEntityTypes[c]))
        throw FormatError("model class order differs at '" + classes[c] + "'");
    LogRegModel m = zeros(Vocabulary::from_json(j.at("vocabulary")), j.at("lambda").get<double>());
    m.biases = j.at("biases").get<std::array<double, kNumEntityTypes>>();
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    if (rows.size() != kNumEntityTypes) throw FormatError("model weight matrix has wrong row count");
    for (std::size_t c = 0; c < kNumEntityTypes; ++c) {
      if (rows[c].size() != m.num_features()) throw FormatError("model weight row has wrong length");
      std::copy(rows[c].begin(), rows[c].end(), m.weights.begin() + static_cast<std::ptrdiff_t>(c * m.num_features()));
    }
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot write model " + path);
    out << to_json().dump() << "\n";
  }

  static LogRegModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open model " + path);
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("model " + path + ": " + e.what());
    }
  }
};

/// Softmax of the linear scores.
inline Prediction predict(const LogRegModel& model, const FeatureVector& fv) {
  Prediction p;
  p.probs = model.scores(fv);
  softmax_inplace(p.probs);
  p.type = argmax(p.probs);
  return p;
}

// ---------------------------------------------------------------------------
// Training

struct Example {
  FeatureVector features;
  EntityType label = EntityType::kOther;
};

using Dataset = std::vector<Example>;

/// Cross-entropy summed over examples plus (lambda/2)|theta|^2, where theta
/// stacks the weight matrix and the biases. Parameters are flat:
/// [weights (classes x features), biases].
class Objective {
 public:
  Objective(const Dataset& data, std::size_t num_features, double lambda)
      : data_(data), nf_(num_features), lambda_(lambda) {}

  std::size_t dimension() const { return kNumEntityTypes * nf_ + kNumEntityTypes; }

  double evaluate(const std::vector<double>& theta, std::vector<double>& grad) const {
    grad.assign(theta.size(), 0.0);
    const double* b = theta.data() + kNumEntityTypes * nf_;
    double* gb = grad.data() + kNumEntityTypes * nf_;
    double loss = 0.0;
    for (const auto& ex : data_) {
      Distribution s;
      for (std::size_t c = 0; c < kNumEntityTypes; ++c) s[c] = b[c];
      for (const auto& f : ex.features.entries)
        for (std::size_t c = 0; c < kNumEntityTypes; ++c) s[c] += theta[c * nf_ + f.id] * f.value;
      const double m = *std::max_element(s.begin(), s.end());
      double z = 0.0;
      for (double x : s) z += std::exp(x - m);
      const auto y = static_cast<std::size_t>(index_of(ex.label));
      loss += std::log(z) + m - s[y];
      for (std::size_t c = 0; c < kNumEntityTypes; ++c) {
        const double r = std::exp(s[c] - m) / z - (c == y ? 1.0 : 0.0);
        gb[c] += r;
        for (const auto& f : ex.features.entries) grad[c * nf_ + f.id] += r * f.value;
      }
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      sq += theta[i] * theta[i];
      grad[i] += lambda_ * theta[i];
    }
    return loss + 0.5 * lambda_ * sq;
  }

 private:
  const Dataset& data_;
  std::size_t nf_;
  double lambda_;
};

struct TrainOptions {
  double lambda = 1.0;
  double tol = 1e-4;
  int max_iterations = 1000;
  int history = 10;
};

struct TrainReport {
  std::vector<double> losses;  // one per accepted iterate, starting at theta = 0
  double final_grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Limited-memory BFGS with Armijo backtracking; every accepted step lowers
/// the objective. Starts from zero.
inline std::vector<double> minimize_lbfgs(const Objective& f, const TrainOptions& opt, TrainReport& report) {
  const std::size_t n = f.dimension();
  std::vector<double> x(n, 0.0), g, x_new(n), g_new, d(n);
  double fx = f.evaluate(x, g);
  report.losses.push_back(fx);
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    const double gnorm = norm2(g);
    report.final_grad_norm = gnorm;
    if (gnorm <= opt.tol) {
      report.converged = true;
      break;
    }
    // Two-loop recursion.
    d = g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * y_hist[k][i];
    }
    if (m > 0) {
      const double gamma = dot(s_hist[m - 1], y_hist[m - 1]) / dot(y_hist[m - 1], y_hist[m - 1]);
      for (double& v : d) v *= gamma;
    } else {
      for (double& v : d) v /= std::max(1.0, gnorm);
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    for (double& v : d) v = -v;
    double slope = dot(g, d);
    if (slope >= 0.0) {  // not a descent direction; restart from steepest descent
      s_hist.clear(), y_hist.clear(), rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / std::max(1.0, gnorm);
      slope = dot(g, d);
    }
    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = f.evaluate(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12) {
      if (s_hist.size() == static_cast<std::size_t>(opt.history)) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    report.losses.push_back(fx);
    report.iterations = iter + 1;
  }
  report.final_grad_norm = norm2(g);
  if (report.final_grad_norm <= opt.tol) report.converged = true;
  return x;
}

inline void validate_dataset(const Dataset& data, std::size_t num_features) {
  if (data.empty()) throw DataError("training set is empty");
  for (std::size_t n = 0; n < data.size(); ++n)
    for (const auto& f : data[n].features.entries) {
      if (!std::isfinite(f.value))
        throw DataError("example " + std::to_string(n) + " has a non-finite feature value");
      if (f.id >= num_features)
        throw DataError("example " + std::to_string(n) + " has feature id outside the vocabulary");
    }
}

inline LogRegModel train(const Dataset& data, Vocabulary vocab, const TrainOptions& opt = {},
                         TrainReport* report = nullptr) {
  validate_dataset(data, vocab.num_features());
  LogRegModel model = LogRegModel::zeros(std::move(vocab), opt.lambda);
  Objective f(data, model.num_features(), opt.lambda);
  TrainReport local;
  const auto theta = minimize_lbfgs(f, opt, report ? *report : local);
  const std::size_t nw = kNumEntityTypes * model.num_features();
  std::copy(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(nw), model.weights.begin());
  std::copy(theta.begin() + static_cast<std::ptrdiff_t>(nw), theta.end(), model.biases.begin());
  return model;
}

// ---------------------------------------------------------------------------
// Classifier interface

class EntityClassifier {
 public:
  virtual ~EntityClassifier() = default;
  virtual Prediction classify(const NluContext& ctx) const = 0;
};

class LogRegClassifier : public EntityClassifier {
 public:
  explicit LogRegClassifier(std::shared_ptr<const LogRegModel> model) : model_(std::move(model)) {}
  Prediction classify(const NluContext& ctx) const override {
    return predict(*model_, extract_features(ctx, model_->vocab));
  }
  const LogRegModel& model() const { return *model_; }

 private:
  std::shared_ptr<const LogRegModel> model_;
};

// ---------------------------------------------------------------------------
// Self-training

struct UnlabeledSample {
  NluContext context;
  std::optional<EntityType> gold;  // present when the corpus carries annotation
};

enum class SampleKind : std::uint8_t { kNeither, kEasy, kHard };

struct SelfTrainOptions {
  double easy_conf = 0.9;
  double hard_entropy = 1.2;  // nats
  double hard_fraction = 0.25;
};

struct AugmentedExample {
  Example example;
  SampleKind provenance = SampleKind::kEasy;
  std::size_t source_index = 0;
};

struct SelfTrainResult {
  std::vector<SampleKind> kinds;  // per unlabeled sample
  std::vector<AugmentedExample> augmentation;
};

/// Easy samples (confident teacher) join with the teacher's label. Hard
/// samples (high entropy) join with their gold label when one exists, at most
/// floor(hard_fraction * batch) of them, highest entropy first.
inline SelfTrainResult self_train(const LogRegModel& teacher, const std::vector<UnlabeledSample>& batch,
                                  const SelfTrainOptions& opt = {}) {
  SelfTrainResult r;
  r.kinds.resize(batch.size(), SampleKind::kNeither);
  struct Hard { double h; std::size_t i; };
  std::vector<Hard> hard;
  std::vector<FeatureVector> features(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    features[i] = extract_features(batch[i].context, teacher.vocab);
    const Prediction p = predict(teacher, features[i]);
    const double conf = *std::max_element(p.probs.begin(), p.probs.end());
    const double h = entropy(p.probs);
    if (conf >= opt.easy_conf) {
      r.kinds[i] = SampleKind::kEasy;
      r.augmentation.push_back({{features[i], p.type}, SampleKind::kEasy, i});
    } else if (h >= opt.hard_entropy) {
      r.kinds[i] = SampleKind::kHard;
      hard.push_back({h, i});
    }
  }
  std::stable_sort(hard.begin(), hard.end(), [](const Hard& a, const Hard& b) { return a.h > b.h; });
  const auto cap = static_cast<std::size_t>(std::floor(opt.hard_fraction * static_cast<double>(batch.size())));
  std::size_t taken = 0;
  for (const auto& hs : hard) {
    if (taken >= cap) break;
    if (!batch[hs.i].gold) continue;
    r.augmentation.push_back({{features[hs.i], *batch[hs.i].gold}, SampleKind::kHard, hs.i});
    ++taken;
  }
  return r;
}

}  // namespace liveredact::nlu
