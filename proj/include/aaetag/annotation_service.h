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
//
// Human-in-the-loop annotation sessions.
//
// State lives in memory and every mutation is appended to a journal first.
// Each journal line is one tab-separated record that starts with a UTC
// timestamp:
//
//   <time>  create  <session>  <annotators>  <model|->  <items>
//   <time>  labels  <session>  <annotator>   <item>     <tags>  <mae|->
//
// <annotators>, <items> and <mae> are single-line JSON arrays; <items> holds
// {"tokens": [...], "pre": [...] | null} per item and <tags> is the label
// sequence joined by single spaces. Replaying a journal rebuilds the same
// state without re-running any model.

#ifndef AAETAG_ANNOTATION_SERVICE_H_
#define AAETAG_ANNOTATION_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaetag/agreement.h"
#include "aaetag/corpus.h"
#include "aaetag/error.h"
#include "aaetag/model_io.h"
#include "aaetag/tagset.h"

namespace aaetag {

// Unknown session, annotator, item or model.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

enum class ItemStatus { kUnseen, kInProgress, kComplete };
std::string ItemStatusName(ItemStatus status);

struct NextItem {
  bool done = false;  // every item already labeled by this annotator
  size_t item = 0;
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> pre_annotations;
  ItemStatus status = ItemStatus::kUnseen;
};

struct LiveAgreement {
  // Empty while no token has labels from two annotators.
  std::optional<AlphaResult> alpha;
  size_t pairable_tokens = 0;
};

struct SubmitResult {
  bool accepted = true;
  ItemStatus status = ItemStatus::kUnseen;
  LiveAgreement agreement;
};

enum class ExportStrategy { kMajorityVote, kPerAnnotator };
ExportStrategy ParseExportStrategy(const std::string& name);

struct TokenRef {
  size_t item = 0;
  size_t token = 0;
  bool operator==(const TokenRef&) const = default;
};

struct SessionExport {
  // Majority vote over the items with at least one submission. Ties go to
  // the label that comes first in the tag inventory and are listed in ties.
  std::optional<Corpus> majority;
  std::vector<TokenRef> ties;
  // Items each annotator labeled, keyed by annotator.
  std::map<std::string, Corpus> per_annotator;
};

class AnnotationStore {
 public:
  // With a journal path, an existing journal is replayed and new mutations
  // are appended to it. Without one, the store is memory-only.
  explicit AnnotationStore(
      TagSet tagset = TagSet::Default(),
      std::optional<std::filesystem::path> journal = std::nullopt);
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  const TagSet& tagset() const { return tagset_; }

  // Models available for pre-annotation, by name.
  void RegisterModel(const std::string& name, AnyModel model);
  std::vector<std::string> model_names() const;

  // Returns the new session id ("s1", "s2", ...).
  std::string CreateSession(const Corpus& corpus,
                            const std::vector<std::string>& annotators,
                            const std::optional<std::string>& model = {});
  std::vector<std::string> session_ids() const;

  // Lowest-index item the annotator has not labeled yet. Never includes
  // other annotators' labels.
  NextItem Next(const std::string& session, const std::string& annotator) const;

  // Resubmission replaces the annotator's earlier labels for the item.
  SubmitResult Submit(
      const std::string& session, const std::string& annotator, size_t item,
      const std::vector<std::string>& tags,
      const std::optional<std::vector<std::string>>& mae_equivalents = {});

  LiveAgreement Agreement(const std::string& session) const;
  // Token-level table; items are "<item>:<token>".
  AgreementTable Table(const std::string& session) const;

  SessionExport Export(const std::string& session,
                       ExportStrategy strategy) const;

  // Canonical document of a session's full state (roster, items,
  // pre-annotations, labels, MAE equivalents, statuses).
  nlohmann::json State(const std::string& session) const;
  // Progress counts per status.
  nlohmann::json Progress(const std::string& session) const;

 private:
  struct Item {
    std::vector<std::string> tokens;
    std::optional<std::vector<std::string>> pre;
    std::map<std::string, std::vector<std::string>> labels;
    std::map<std::string, std::vector<std::string>> mae;
  };
  struct Session {
    std::string id;
    std::vector<std::string> annotators;
    std::optional<std::string> model;
    std::vector<Item> items;
    mutable std::shared_mutex mu;
  };

  std::shared_ptr<Session> Find(const std::string& id) const;
  static void CheckAnnotator(const Session& s, const std::string& annotator);
  ItemStatus StatusOf(const Session& s, const Item& item) const;
  AgreementTable TableLocked(const Session& s) const;
  LiveAgreement AgreementLocked(const Session& s) const;

  std::string CreateLocked(std::vector<Item> items,
                           std::vector<std::string> annotators,
                           std::optional<std::string> model,
                           const std::string& id);
  void ApplyLabels(Session& s, const std::string& annotator, size_t item,
                   std::vector<std::string> tags,
                   std::optional<std::vector<std::string>> mae);
  void ValidateLabels(const Session& s, const std::string& annotator,
                      size_t item, const std::vector<std::string>& tags,
                      const std::optional<std::vector<std::string>>& mae) const;

  void Replay(const std::filesystem::path& path);
  void AppendJournal(const std::string& record);

  TagSet tagset_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  uint64_t next_session_ = 1;

  mutable std::shared_mutex models_mu_;
  std::map<std::string, std::shared_ptr<const AnyModel>> models_;

  std::mutex journal_mu_;
  std::optional<std::ofstream> journal_;
};

// JSON-over-HTTP front end for a store.
//
//   POST /sessions                        {"conll"|"sentences", "annotators",
//                                          "model"?}
//   GET  /sessions/{id}                   progress
//   GET  /sessions/{id}/next?annotator=A
//   POST /sessions/{id}/items/{item}/labels
//                                         {"annotator", "tags",
//                                          "mae_equivalents"?}
//   GET  /sessions/{id}/agreement
//   GET  /sessions/{id}/export?strategy=majority_vote|per_annotator
//   GET  /health
//
// Errors come back as {"error": message} with status 400 or 404.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationStore& store);
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Binds and serves until Stop(); returns false if binding fails.
  bool Listen(const std::string& host, int port);
  // Binds to a free port and returns it (or -1); then call ListenAfterBind.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aaetag

#endif  // AAETAG_ANNOTATION_SERVICE_H_
