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

// liveredact command line: redact, gen-corpus, eval, train-nlu, self-train.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liveredact/liveredact.hpp"

namespace fs = std::filesystem;
using namespace liveredact;

namespace {

struct ConfigArgs {
  std::string file;
  std::vector<std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", overrides, "override a config key, e.g. --set pipeline.holdback_ms=0");
  }

  ConfigMap load() const {
    ConfigMap m = file.empty() ? ConfigMap{} : ConfigMap::load(file);
    for (const auto& o : overrides) m.set_override(o);
    return m;
  }
};

pipeline::SessionConfig session_config(const ConfigMap& m) {
  pipeline::SessionConfig cfg;
  cfg.apply(m);
  return cfg;
}

std::optional<norm::Lexicon> load_lexicon(const pipeline::SessionConfig& cfg) {
  if (cfg.lexicon_path.empty()) return std::nullopt;
  return norm::Lexicon::load(cfg.lexicon_path);
}

struct CorpusFile {
  std::string path;
  std::vector<harness::CallBundle> calls;
};

std::vector<CorpusFile> load_corpus_files(const std::string& path, const norm::Lexicon& lx) {
  std::vector<CorpusFile> out;
  for (const auto& f : harness::bundle_files(path)) out.push_back({f, harness::read_bundle_file(f, lx)});
  return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

struct RedactArgs {
  std::string bundle, out_dir, audio;
  bool reveal = false;
  ConfigArgs config;
};

int run_redact(const RedactArgs& a) {
  const auto cfg = session_config(a.config.load());
  const auto lexicon = load_lexicon(cfg);
  const norm::Lexicon& lx = lexicon ? *lexicon : norm::Lexicon::defaults();
  const auto files = load_corpus_files(a.bundle, lx);
  std::size_t total = 0;
  for (const auto& f : files) total += f.calls.size();
  if (!a.audio.empty() && total != 1) throw ArgumentError("--audio needs a bundle holding exactly one call");

  std::shared_ptr<const nlu::LogRegModel> model;
  if (cfg.nlu.classifier == "logreg") {
    if (cfg.nlu.model_path.empty()) throw ConfigError("nlu.model is required with the logreg classifier");
    model = std::make_shared<const nlu::LogRegModel>(nlu::LogRegModel::load(cfg.nlu.model_path));
  }

  for (const auto& f : files) {
    for (const auto& b : f.calls) {
      const fs::path dir = fs::path(a.out_dir) / b.call_id;
      fs::create_directories(dir);
      const std::string cap_path = (dir / "captures.jsonl").string();
      std::ofstream(cap_path, std::ios::trunc).close();
      lar::JsonlCaptureLog log(cap_path, a.reveal);

      std::optional<audio::PcmBuffer> pcm;
      std::string source = "none";
      if (!a.audio.empty()) {
        pcm = audio::read_wav(a.audio);
        source = a.audio;
      } else if (auto p = harness::resolve_audio(b, f.path)) {
        pcm = audio::read_wav(*p);
        source = *p;
      } else if (cfg.synthesize_audio) {
        pcm = harness::render_call_audio(b);
        source = "synthesized";
      }

      const auto classifier = harness::make_classifier(cfg.nlu, b, model);
      pipeline::SessionInputs in;
      in.audio = pcm ? &*pcm : nullptr;
      in.sink = &log;
      in.lexicon = &lx;
      const auto out = pipeline::run_session(b, cfg, *classifier, in);
      pipeline::write_session_outputs(out, cfg, dir.string());
      std::printf("%s: %zu captures, %zu mask spans, audio %s, cpu/audio %.5f\n", b.call_id.c_str(),
                  out.captures.size(), out.mask_spans.size(), source.c_str(), out.metrics.cpu_vs_audio);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string out;
  ConfigArgs config;
};

int run_gen(const GenArgs& a) {
  harness::GenConfig g;
  g.apply(a.config.load());
  fs::create_directories(a.out);
  auto corpus = harness::generate_corpus(g);
  if (g.render_audio) {
    fs::create_directories(fs::path(a.out) / "audio");
    for (auto& b : corpus) {
      const std::string rel = "audio/" + b.call_id + ".wav";
      audio::write_wav((fs::path(a.out) / rel).string(), harness::render_call_audio(b));
      b.audio = rel;
    }
  }
  const auto path = (fs::path(a.out) / "corpus.jsonl").string();
  harness::write_bundle_file(path, corpus);
  std::size_t entities = 0;
  for (const auto& b : corpus) entities += b.entities.size();
  std::printf("wrote %zu calls (%zu entities) to %s\n", corpus.size(), entities, path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string gold, pred, report, baseline;
  ConfigArgs config;
};

harness::EvalReport evaluate_dir(const std::vector<harness::CallBundle>& gold, const std::string& pred,
                                 EntitySet sensitive, const norm::Lexicon& lx) {
  std::vector<harness::CallEval> evals;
  for (const auto& b : gold)
    evals.push_back(harness::evaluate_call(b, harness::load_prediction(pred, b.call_id), sensitive, lx));
  return harness::aggregate(evals);
}

int run_eval(const EvalArgs& a) {
  const auto cfg = session_config(a.config.load());
  const auto lexicon = load_lexicon(cfg);
  const norm::Lexicon& lx = lexicon ? *lexicon : norm::Lexicon::defaults();
  const auto gold = harness::load_corpus(a.gold, lx);
  auto report = evaluate_dir(gold, a.pred, cfg.lar.sensitive, lx);
  if (!a.baseline.empty()) report.baseline_prf = evaluate_dir(gold, a.baseline, cfg.lar.sensitive, lx).prf;
  if (auto parent = fs::path(a.report).parent_path(); !parent.empty()) fs::create_directories(parent);
  write_json(a.report, harness::report_json(report));
  const std::string table = harness::report_table(report);
  std::ofstream(fs::path(a.report).replace_extension(".txt"), std::ios::trunc) << table;
  std::cout << table;
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string corpus, model;
  std::optional<double> lambda;
  ConfigArgs config;
};

pipeline::SessionConfig harvest_config(const ConfigMap& m) {
  auto cfg = session_config(m);
  cfg.nlu.classifier = "oracle";
  return cfg;
}

void print_train_report(const nlu::TrainReport& r, const nlu::LogRegModel& m, std::size_t n) {
  std::printf("trained on %zu examples, %zu features: %d iterations, loss %.4f -> %.4f, |grad| %.2e%s\n", n,
              m.num_features(), r.iterations, r.losses.empty() ? 0.0 : r.losses.front(),
              r.losses.empty() ? 0.0 : r.losses.back(), r.final_grad_norm, r.converged ? "" : " (not converged)");
}

int run_train(const TrainArgs& a) {
  const auto cfg = harvest_config(a.config.load());
  auto settings = cfg.nlu;
  if (a.lambda) settings.train.lambda = *a.lambda;
  const auto lexicon = load_lexicon(cfg);
  const auto corpus = harness::load_corpus(a.corpus, lexicon ? *lexicon : norm::Lexicon::defaults());
  const auto data = harness::collect_contexts(corpus, cfg, lexicon ? &*lexicon : nullptr);
  nlu::TrainReport report;
  const auto model = harness::train_on_contexts(data, settings, &report);
  model.save(a.model);
  print_train_report(report, model, data.size());
  return 0;
}

struct SelfTrainArgs {
  std::string model, unlabeled, out_model, corpus;
  ConfigArgs config;
};

int run_self_train(const SelfTrainArgs& a) {
  const auto cfg = harvest_config(a.config.load());
  const auto lexicon = load_lexicon(cfg);
  const norm::Lexicon& lx = lexicon ? *lexicon : norm::Lexicon::defaults();
  const auto teacher = nlu::LogRegModel::load(a.model);

  std::vector<nlu::UnlabeledSample> batch;
  for (auto& c : harness::collect_contexts(harness::load_corpus(a.unlabeled, lx), cfg, &lx))
    batch.push_back({std::move(c.context), c.gold});
  const auto result = nlu::self_train(teacher, batch, cfg.nlu.self_train);

  nlu::Dataset data;
  if (!a.corpus.empty())
    data = harness::to_dataset(harness::collect_contexts(harness::load_corpus(a.corpus, lx), cfg, &lx), teacher.vocab);
  std::size_t easy = 0, hard = 0;
  for (const auto& aug : result.augmentation) {
    data.push_back(aug.example);
    (aug.provenance == nlu::SampleKind::kEasy ? easy : hard) += 1;
  }
  nlu::TrainOptions opt = cfg.nlu.train;
  opt.lambda = teacher.l2_lambda;
  nlu::TrainReport report;
  const auto student = nlu::train(data, teacher.vocab, opt, &report);
  student.save(a.out_model);
  std::printf("unlabelled samples %zu: %zu easy, %zu hard added\n", batch.size(), easy, hard);
  print_train_report(report, student, data.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liveredact: streaming redaction of spoken payment data"};
  app.require_subcommand(1);

  RedactArgs ra;
  auto* redact = app.add_subcommand("redact", "redact calls and write masked audio, events and captures");
  redact->add_option("--bundle", ra.bundle, "bundle file or directory of *.jsonl")->required();
  redact->add_option("--out-dir", ra.out_dir, "output directory (one subdirectory per call)")->required();
  redact->add_option("--audio", ra.audio, "stereo 8 kHz WAV for a single-call bundle")->check(CLI::ExistingFile);
  redact->add_flag("--reveal-captures", ra.reveal, "write captured values in clear");
  ra.config.attach(redact);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic annotated corpus");
  gen->add_option("--out", ga.out, "output directory")->required();
  ga.config.attach(gen);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "score redact output against gold bundles");
  eval->add_option("--gold", ea.gold, "gold bundle file or directory")->required();
  eval->add_option("--pred", ea.pred, "redact --out-dir to score")->required();
  eval->add_option("--report", ea.report, "report JSON path; a .txt table is written beside it")->required();
  eval->add_option("--baseline", ea.baseline, "second redact --out-dir to compare against");
  ea.config.attach(eval);

  TrainArgs ta;
  auto* train = app.add_subcommand("train-nlu", "train the entity classifier on an annotated corpus");
  train->add_option("--corpus", ta.corpus, "annotated bundle file or directory")->required();
  train->add_option("--model", ta.model, "model file to write")->required();
  train->add_option("--lambda", ta.lambda, "L2 strength (overrides nlu.lambda)");
  ta.config.attach(train);

  SelfTrainArgs sa;
  auto* self = app.add_subcommand("self-train", "augment a model with easy and hard samples from new calls");
  self->add_option("--model", sa.model, "teacher model")->required()->check(CLI::ExistingFile);
  self->add_option("--unlabeled", sa.unlabeled, "bundle file or directory; annotations, if any, label hard samples")
      ->required();
  self->add_option("--out-model", sa.out_model, "student model file to write")->required();
  self->add_option("--corpus", sa.corpus, "the teacher's labelled corpus, retrained together with the augmentation");
  sa.config.attach(self);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*redact) return run_redact(ra);
    if (*gen) return run_gen(ga);
    if (*eval) return run_eval(ea);
    if (*train) return run_train(ta);
    if (*self) return run_self_train(sa);
  } catch (const liveredact::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
