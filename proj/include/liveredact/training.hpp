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

// Turning a labelled corpus into NLU training data. Contexts are harvested
// by running the redactor over each call with the gold-type oracle, so the
// model sees exactly the trigger contexts it will be asked about at run time.

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "liveredact/bundle.hpp"
#include "liveredact/nlu.hpp"
#include "liveredact/pipeline.hpp"

namespace liveredact::harness {

struct LabeledContext {
  nlu::NluContext context;
  std::optional<EntityType> gold;  // empty for unannotated calls
};

/// Runs a transcript-only session per call and records every NLU query.
/// A call without annotations yields unlabelled contexts.
inline std::vector<LabeledContext> collect_contexts(const std::vector<CallBundle>& corpus,
                                                    const pipeline::SessionConfig& cfg,
                                                    const norm::Lexicon* lexicon = nullptr) {
  std::vector<LabeledContext> out;
  for (const auto& b : corpus) {
    OracleClassifier oracle(b);
    RecordingClassifier rec(oracle, &oracle);
    pipeline::SessionInputs in;
    in.lexicon = lexicon;
    (void)pipeline::run_session(b, cfg, rec, in);
    const bool annotated = !b.entities.empty();
    for (auto& e : rec.entries)
      out.push_back({std::move(e.context),
                     annotated ? std::optional(e.gold.value_or(EntityType::kOther)) : std::nullopt});
  }
  return out;
}

inline nlu::Dataset to_dataset(const std::vector<LabeledContext>& data, const nlu::Vocabulary& vocab) {
  nlu::Dataset ds;
  for (const auto& d : data)
    if (d.gold) ds.push_back({nlu::extract_features(d.context, vocab), *d.gold});
  return ds;
}

inline nlu::LogRegModel train_on_contexts(const std::vector<LabeledContext>& data, const pipeline::NluSettings& s,
                                          nlu::TrainReport* report = nullptr) {
  std::vector<nlu::NluContext> labelled;
  for (const auto& d : data)
    if (d.gold) labelled.push_back(d.context);
  auto vocab = nlu::Vocabulary::build(labelled, s.ngram_orders, s.min_freq);
  const auto ds = to_dataset(data, vocab);
  return nlu::train(ds, std::move(vocab), s.train, report);
}

/// Classifier chosen by the session settings; `bundle` feeds the oracle.
inline std::unique_ptr<nlu::EntityClassifier> make_classifier(const pipeline::NluSettings& s,
                                                              const CallBundle& bundle,
                                                              std::shared_ptr<const nlu::LogRegModel> model) {
  if (s.classifier == "oracle") return std::make_unique<OracleClassifier>(bundle);
  if (!model) throw ConfigError("nlu.classifier is 'logreg' but no model was given (nlu.model)");
  return std::make_unique<nlu::LogRegClassifier>(std::move(model));
}

}  // namespace liveredact::harness
