// Copyright 2026 The aaetag Authors
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

#include "aaetag/cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "aaetag/agreement.h"
#include "aaetag/annotation_service.h"
#include "aaetag/bilstm.h"
#include "aaetag/corpus.h"
#include "aaetag/crf.h"
#include "aaetag/dialect_rules.h"
#include "aaetag/error.h"
#include "aaetag/evaluation.h"
#include "aaetag/model_io.h"
#include "aaetag/preprocess.h"
#include "aaetag/synthetic.h"

namespace aaetag {
namespace {

struct Options {
  std::string input;
  std::string output;
  std::string model = "crf";
  std::string model_path;
  std::string tagset;
  double l1 = 0.25;
  double l2 = 0.3;
  int epochs = 40;
  double lr = 0.001;
  uint64_t seed = 0;
  int k = 5;
  std::string rules;
  double apply_prob = 1.0;
  int port = 8080;
  int top_k = 5;

  std::string direction = "to-aae";
  std::string pred;
  std::string svg;
  std::string channel = "gold";
  std::string grammar = "default";
  size_t sentences = 2000;
  std::string journal;
  std::string host = "127.0.0.1";
  std::string label_a;
  std::string label_b;
  bool lowercase = false;
  int max_letter_run = 3;
  std::vector<std::string> positional;

  bool epochs_given = false;
};

// Output goes to --output when set and to stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& get() { return *out_; }
  void Finish() {
    out_->flush();
    if (!*out_) throw Error("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void Require(const std::string& value, const char* flag,
             const char* command) {
  if (value.empty()) {
    throw Error(std::string(command) + " needs " + flag);
  }
}

TagSet LoadTagSet(const Options& o) {
  if (o.tagset.empty()) return TagSet::Default();
  std::ifstream in(o.tagset);
  if (in) {
    std::stringstream buf;
    buf << in.rdbuf();
    return TagSet::Parse(buf.str());
  }
  return TagSet::Parse(o.tagset);
}

RuleCatalog LoadRules(const Options& o, const TagSet& tagset) {
  if (o.rules.empty()) return RuleCatalog::Default();
  return LoadCatalog(o.rules, tagset);
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AnyModel Train(const Options& o, const Corpus& corpus) {
  if (o.model == "crf") {
    CrfTrainConfig cfg;
    cfg.l1 = o.l1;
    cfg.l2 = o.l2;
    cfg.seed = o.seed;
    if (o.epochs_given) cfg.epochs = o.epochs;
    return TrainCrf(corpus, cfg);
  }
  if (o.model == "bilstm") {
    BiLstmTrainConfig cfg;
    cfg.epochs = o.epochs;
    cfg.learning_rate = o.lr;
    cfg.seed = o.seed;
    return TrainBiLstm(corpus, cfg);
  }
  throw Error("unknown model type \"" + o.model + "\" (expected crf or bilstm)");
}

std::string Stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void CmdPreprocess(const Options& o, std::ostream& out) {
  Require(o.input, "--input", "preprocess");
  PreprocessConfig cfg;
  cfg.lowercase = o.lowercase;
  cfg.max_letter_run = o.max_letter_run;
  cfg.Validate();
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw Error("cannot open " + o.input);
  Sink sink(o.output, out);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    sink.get() << Normalize(line, cfg) << '\n';
  }
  sink.Finish();
}

void CmdTranslate(const Options& o, std::ostream& out, std::ostream& err) {
  Require(o.input, "--input", "translate");
  const TagSet tagset = LoadTagSet(o);
  const RuleCatalog catalog = LoadRules(o, tagset);
  const Corpus corpus = ReadConll(o.input, tagset);
  Corpus result(tagset);
  if (o.direction == "to-aae") {
    result = SynthesizeParallel(corpus, catalog, o.apply_prob, o.seed).second;
  } else if (o.direction == "to-mae") {
    size_t residue = 0;
    for (const auto& s : corpus) {
      MaeResult r = s.has_gold() ? ToMae(s, catalog) : ToMae(s.tokens, catalog);
      residue += r.residue.size();
      result.Add(std::move(r.sentence));
    }
    if (residue > 0) {
      err << "aaetag: " << residue
          << " token(s) match non-invertible rules and were left as is\n";
    }
  } else {
    throw Error("unknown direction \"" + o.direction +
                "\" (expected to-aae or to-mae)");
  }
  Sink sink(o.output, out);
  WriteConll(result, sink.get(), TagChannel::kGold);
  sink.Finish();
}

void CmdSynthesize(const Options& o, std::ostream& out) {
  Require(o.input, "--input", "synthesize");
  const TagSet tagset = LoadTagSet(o);
  const RuleCatalog catalog = LoadRules(o, tagset);
  const Corpus mae = ReadConll(o.input, tagset);
  const Corpus aae = SynthesizeParallel(mae, catalog, o.apply_prob, o.seed).second;
  Sink sink(o.output, out);
  WriteConll(aae, sink.get(), TagChannel::kGold);
  sink.Finish();
}

void CmdGenerate(const Options& o, std::ostream& out) {
  const ToyGrammar* grammar = nullptr;
  if (o.grammar == "default") {
    grammar = &DefaultToyGrammar();
  } else if (o.grammar == "pronoun-verb") {
    grammar = &PronounVerbGrammar();
  } else {
    throw Error("unknown grammar \"" + o.grammar +
                "\" (expected default or pronoun-verb)");
  }
  const Corpus corpus = GenerateCorpus(*grammar, o.sentences, o.seed);
  Sink sink(o.output, out);
  WriteConll(corpus, sink.get(), TagChannel::kGold);
  sink.Finish();
}

void CmdTrain(const Options& o) {
  Require(o.input, "--input", "train");
  Require(o.model_path, "--model-path", "train");
  const Corpus corpus = ReadConll(o.input, LoadTagSet(o));
  SaveModel(Train(o, corpus), o.model_path);
}

void CmdTag(const Options& o, std::ostream& out) {
  Require(o.input, "--input", "tag");
  Require(o.model_path, "--model-path", "tag");
  const AnyModel model = LoadModel(o.model_path);
  const Corpus corpus = ReadConll(o.input, ModelTagSet(model));
  Sink sink(o.output, out);
  WriteConll(Predict(model, corpus), sink.get(), TagChannel::kPredicted);
  sink.Finish();
}

void CmdEval(const Options& o, std::ostream& out) {
  Require(o.input, "--input", "eval");
  Corpus pred;
  if (!o.pred.empty()) {
    Corpus gold = ReadConll(o.input, LoadTagSet(o));
    Corpus file = ReadConll(o.pred, gold.tagset());
    Corpus moved(gold.tagset());
    if (file.size() != gold.size()) {
      throw Error("prediction file has " + std::to_string(file.size()) +
                  " sentences, gold has " + std::to_string(gold.size()));
    }
    for (size_t i = 0; i < file.size(); ++i) {
      TaggedSentence s = file[i];
      s.pred_tags = s.gold_tags;
      s.gold_tags.reset();
      moved.Add(std::move(s));
    }
    pred = std::move(moved);
    const EvalReport report = Score(gold, pred);
    out << FormatReport(report);
    if (!o.output.empty()) {
      Sink sink(o.output, out);
      sink.get() << report.ToJson().dump(2) << '\n';
      sink.Finish();
    }
    return;
  }
  Require(o.model_path, "--pred or --model-path", "eval");
  const AnyModel model = LoadModel(o.model_path);
  const Corpus gold = ReadConll(o.input, ModelTagSet(model));
  const EvalReport report = Score(gold, Predict(model, gold));
  out << FormatReport(report);
  if (!o.output.empty()) {
    Sink sink(o.output, out);
    sink.get() << report.ToJson().dump(2) << '\n';
    sink.Finish();
  }
}

void CmdCompare(const Options& o, std::ostream& out) {
  if (o.positional.size() != 2) {
    throw Error("compare needs two report files");
  }
  const auto a = EvalReport::FromJson(nlohmann::json::parse(ReadAll(o.positional[0])));
  const auto b = EvalReport::FromJson(nlohmann::json::parse(ReadAll(o.positional[1])));
  const std::string la = o.label_a.empty() ? Stem(o.positional[0]) : o.label_a;
  const std::string lb = o.label_b.empty() ? Stem(o.positional[1]) : o.label_b;
  Sink sink(o.output, out);
  sink.get() << FormatDiff(Compare(a, b), la, lb);
  sink.Finish();
}

void CmdTransitions(const Options& o, std::ostream& out) {
  Require(o.model_path, "--model-path", "transitions");
  const AnyModel model = LoadModel(o.model_path);
  const auto* crf = std::get_if<CrfModel>(&model);
  if (!crf) throw Error("transitions needs a crf model");
  Sink sink(o.output, out);
  sink.get() << FormatTransitionReport(*crf, TopTransitions(*crf, o.top_k));
  sink.Finish();
}

void CmdHistogram(const Options& o, std::ostream& out) {
  if (o.positional.size() != 2) {
    throw Error("histogram needs two corpus files");
  }
  TagChannel channel;
  if (o.channel == "gold") {
    channel = TagChannel::kGold;
  } else if (o.channel == "pred") {
    channel = TagChannel::kPredicted;
  } else {
    throw Error("unknown channel \"" + o.channel + "\" (expected gold or pred)");
  }
  const TagSet tagset = LoadTagSet(o);
  const Corpus a = ReadConll(o.positional[0], tagset);
  const Corpus b = ReadConll(o.positional[1], tagset);
  const std::string la = o.label_a.empty() ? Stem(o.positional[0]) : o.label_a;
  const std::string lb = o.label_b.empty() ? Stem(o.positional[1]) : o.label_b;
  const auto counts = TagHistogram(a, b, channel);
  Sink sink(o.output, out);
  sink.get() << FormatHistogram(counts, la, lb);
  sink.Finish();
  if (!o.svg.empty()) {
    Sink svg(o.svg, out);
    svg.get() << HistogramSvg(counts, la, lb);
    svg.Finish();
  }
}

void CmdAgreement(const Options& o, std::ostream& out) {
  Require(o.input, "--input", "agreement");
  const AgreementTable table = ReadAgreementTable(o.input, LoadTagSet(o));
  const AlphaResult r = KrippendorffAlpha(table);
  Sink sink(o.output, out);
  char alpha[32];
  std::snprintf(alpha, sizeof(alpha), "%.6f", r.alpha);
  sink.get() << "alpha\t" << alpha << '\n'
             << "annotators\t" << table.annotators().size() << '\n'
             << "items\t" << table.items().size() << '\n'
             << "pairable_items\t" << table.pairable_items() << '\n';
  if (r.degenerate) sink.get() << "note\tsingle category, alpha set to 1\n";
  sink.Finish();
}

void CmdCv(const Options& o, std::ostream& out) {
  Require(o.input, "--input", "cv");
  const Corpus corpus = ReadConll(o.input, LoadTagSet(o));
  TrainerFn trainer = [&o](const Corpus& train) -> TaggerFn {
    auto model = std::make_shared<AnyModel>(Train(o, train));
    return [model](const Corpus& c) { return Predict(*model, c); };
  };
  const CrossValidationResult cv = CrossValidate(corpus, trainer, o.k, o.seed);
  Sink sink(o.output, out);
  char buf[64];
  for (size_t i = 0; i < cv.folds.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "fold %zu\t%.2f\n", i + 1,
                  100.0 * cv.folds[i].token_accuracy);
    sink.get() << buf;
  }
  std::snprintf(buf, sizeof(buf), "mean\t%.2f\n", 100.0 * cv.mean_fold_accuracy);
  sink.get() << buf << '\n' << FormatReport(cv.pooled);
  sink.Finish();
}

void CmdServe(const Options& o, std::ostream& err) {
  const TagSet tagset = LoadTagSet(o);
  std::optional<std::filesystem::path> journal;
  if (!o.journal.empty()) journal = o.journal;
  AnnotationStore store(tagset, journal);
  if (!o.model_path.empty()) {
    store.RegisterModel(Stem(o.model_path), LoadModel(o.model_path));
  }
  AnnotationServer server(store);
  err << "aaetag: serving on http://" << o.host << ":" << o.port << "\n";
  err.flush();
  if (!server.Listen(o.host, o.port)) {
    throw Error("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Options o;
  CLI::App app{"POS tagging tools for dialectal English tweets", "aaetag"};
  app.set_config("--config", "", "Read key=value settings from a file");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--input", o.input, "Input file");
  app.add_option("--output", o.output, "Output file (default stdout)");
  app.add_option("--model", o.model, "Model type: crf or bilstm")
      ->capture_default_str();
  app.add_option("--model-path", o.model_path, "Model document path");
  app.add_option("--tagset", o.tagset,
                 "Tag inventory: a file or a comma-separated list");
  app.add_option("--l1", o.l1, "CRF L1 strength")->capture_default_str();
  app.add_option("--l2", o.l2, "CRF L2 strength")->capture_default_str();
  auto* epochs = app.add_option("--epochs", o.epochs, "Training epochs")
                     ->capture_default_str();
  app.add_option("--lr", o.lr, "Bi-LSTM learning rate")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--k", o.k, "Cross-validation folds")->capture_default_str();
  app.add_option("--rules", o.rules, "Dialect rule catalog (TSV)");
  app.add_option("--apply-prob", o.apply_prob, "Rule firing probability")
      ->capture_default_str();
  app.add_option("--port", o.port, "Service port")->capture_default_str();
  app.add_option("--top-k", o.top_k, "Transitions to list")
      ->capture_default_str();
  app.add_option("--direction", o.direction, "to-aae or to-mae")
      ->capture_default_str();
  app.add_option("--pred", o.pred, "CoNLL file holding predicted tags");
  app.add_option("--svg", o.svg, "Write a bar chart to this file");
  app.add_option("--channel", o.channel, "gold or pred")->capture_default_str();
  app.add_option("--grammar", o.grammar, "default or pronoun-verb")
      ->capture_default_str();
  app.add_option("--sentences", o.sentences, "Sentences to generate")
      ->capture_default_str();
  app.add_option("--journal", o.journal, "Annotation journal file");
  app.add_option("--host", o.host, "Service address")->capture_default_str();
  app.add_option("--label-a", o.label_a, "Name of the first input");
  app.add_option("--label-b", o.label_b, "Name of the second input");
  app.add_flag("--lowercase", o.lowercase, "Case-fold during preprocessing");
  app.add_option("--max-letter-run", o.max_letter_run,
                 "Longest run of one repeated letter")
      ->capture_default_str();

  auto* preprocess = app.add_subcommand("preprocess", "Normalize raw tweets");
  auto* translate = app.add_subcommand("translate", "Apply dialect rules");
  auto* synthesize =
      app.add_subcommand("synthesize", "Build an AAE corpus from MAE");
  auto* generate = app.add_subcommand("generate", "Write a toy corpus");
  auto* train = app.add_subcommand("train", "Train a tagger");
  auto* tag = app.add_subcommand("tag", "Tag a corpus");
  auto* eval = app.add_subcommand("eval", "Score predictions");
  auto* compare = app.add_subcommand("compare", "Diff two reports");
  compare->add_option("reports", o.positional, "Two report files")
      ->expected(2);
  auto* transitions =
      app.add_subcommand("transitions", "Rank CRF tag transitions");
  auto* histogram = app.add_subcommand("histogram", "Per-tag counts");
  histogram->add_option("corpora", o.positional, "Two corpus files")
      ->expected(2);
  auto* agreement = app.add_subcommand("agreement", "Krippendorff's alpha");
  auto* cv = app.add_subcommand("cv", "K-fold cross-validation");
  auto* serve = app.add_subcommand("serve", "Run the annotation service");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "aaetag: " << e.what() << '\n';
    return 2;
  }
  o.epochs_given = epochs->count() > 0;

  try {
    if (preprocess->parsed()) {
      CmdPreprocess(o, out);
    } else if (translate->parsed()) {
      CmdTranslate(o, out, err);
    } else if (synthesize->parsed()) {
      CmdSynthesize(o, out);
    } else if (generate->parsed()) {
      CmdGenerate(o, out);
    } else if (train->parsed()) {
      CmdTrain(o);
    } else if (tag->parsed()) {
      CmdTag(o, out);
    } else if (eval->parsed()) {
      CmdEval(o, out);
    } else if (compare->parsed()) {
      CmdCompare(o, out);
    } else if (transitions->parsed()) {
      CmdTransitions(o, out);
    } else if (histogram->parsed()) {
      CmdHistogram(o, out);
    } else if (agreement->parsed()) {
      CmdAgreement(o, out);
    } else if (cv->parsed()) {
      CmdCv(o, out);
    } else if (serve->parsed()) {
      CmdServe(o, err);
    }
  } catch (const nlohmann::json::exception& e) {
    err << "aaetag: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "aaetag: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int RunCli(int argc, const char* const* argv) {
  return RunCli(argc, argv, std::cout, std::cerr);
}

}  // namespace aaetag
