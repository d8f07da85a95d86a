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

#include "aaetag/annotation_service.h"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>
#include <sstream>

namespace aaetag {
namespace {

using nlohmann::json;

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch())
                      .count() %
                  1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

bool IsPlainId(const std::string& s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](unsigned char c) {
    return c <= ' ' || c == 0x7f;
  });
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string JoinSpaces(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

std::vector<std::string> SplitSpaces(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

std::string ItemStatusName(ItemStatus status) {
  switch (status) {
    case ItemStatus::kUnseen:
      return "unseen";
    case ItemStatus::kInProgress:
      return "in_progress";
    case ItemStatus::kComplete:
      return "complete";
  }
  return "unseen";
}

ExportStrategy ParseExportStrategy(const std::string& name) {
  if (name == "majority_vote") return ExportStrategy::kMajorityVote;
  if (name == "per_annotator") return ExportStrategy::kPerAnnotator;
  throw Error("unknown export strategy \"" + name +
              "\" (expected majority_vote or per_annotator)");
}

AnnotationStore::AnnotationStore(TagSet tagset,
                                 std::optional<std::filesystem::path> journal)
    : tagset_(std::move(tagset)) {
  if (!journal) return;
  if (std::filesystem::exists(*journal)) Replay(*journal);
  journal_.emplace(*journal, std::ios::app | std::ios::binary);
  if (!*journal_) throw Error("cannot open journal " + journal->string());
}

AnnotationStore::~AnnotationStore() = default;

void AnnotationStore::RegisterModel(const std::string& name, AnyModel model) {
  if (!IsPlainId(name)) throw Error("model names must be non-empty words");
  if (!(ModelTagSet(model) == tagset_)) {
    throw Error("model \"" + name + "\" uses a different tag inventory");
  }
  std::unique_lock lock(models_mu_);
  models_[name] = std::make_shared<const AnyModel>(std::move(model));
}

std::vector<std::string> AnnotationStore::model_names() const {
  std::shared_lock lock(models_mu_);
  std::vector<std::string> names;
  for (const auto& [name, model] : models_) names.push_back(name);
  return names;
}

std::string AnnotationStore::CreateSession(
    const Corpus& corpus, const std::vector<std::string>& annotators,
    const std::optional<std::string>& model) {
  if (corpus.empty()) throw Error("cannot create a session over an empty corpus");
  if (annotators.empty()) throw Error("a session needs at least one annotator");
  std::set<std::string> seen;
  for (const auto& a : annotators) {
    if (!IsPlainId(a)) throw Error("annotator ids must be non-empty words");
    if (!seen.insert(a).second) {
      throw Error("duplicate annotator \"" + a + "\"");
    }
  }

  std::vector<Item> items;
  items.reserve(corpus.size());
  for (const auto& s : corpus) {
    Item item;
    item.tokens = s.tokens;
    items.push_back(std::move(item));
  }
  if (model) {
    std::shared_ptr<const AnyModel> m;
    {
      std::shared_lock lock(models_mu_);
      auto it = models_.find(*model);
      if (it == models_.end()) {
        throw NotFoundError("unknown model \"" + *model + "\"");
      }
      m = it->second;
    }
    Corpus plain(ModelTagSet(*m));
    for (const auto& s : corpus) {
      TaggedSentence t;
      t.tokens = s.tokens;
      t.source_id = s.source_id;
      plain.Add(std::move(t));
    }
    const Corpus tagged = Predict(*m, plain);
    for (size_t i = 0; i < items.size(); ++i) items[i].pre = tagged[i].pred_tags;
  }

  std::unique_lock lock(sessions_mu_);
  const std::string id = "s" + std::to_string(next_session_);
  json items_doc = json::array();
  for (const auto& item : items) {
    items_doc.push_back({{"tokens", item.tokens},
                         {"pre", item.pre ? json(*item.pre) : json(nullptr)}});
  }
  AppendJournal(UtcTimestamp() + "\tcreate\t" + id + "\t" +
                json(annotators).dump() + "\t" + model.value_or("-") + "\t" +
                items_doc.dump());
  return CreateLocked(std::move(items), annotators, model, id);
}

std::string AnnotationStore::CreateLocked(std::vector<Item> items,
                                          std::vector<std::string> annotators,
                                          std::optional<std::string> model,
                                          const std::string& id) {
  auto s = std::make_shared<Session>();
  s->id = id;
  s->annotators = std::move(annotators);
  s->model = std::move(model);
  s->items = std::move(items);
  if (sessions_.count(id)) throw Error("duplicate session id " + id);
  sessions_[id] = std::move(s);
  if (id.size() > 1 && id[0] == 's') {
    try {
      next_session_ = std::max<uint64_t>(next_session_,
                                         std::stoull(id.substr(1)) + 1);
    } catch (const std::exception&) {
    }
  }
  return id;
}

std::vector<std::string> AnnotationStore::session_ids() const {
  std::shared_lock lock(sessions_mu_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  return ids;
}

std::shared_ptr<AnnotationStore::Session> AnnotationStore::Find(
    const std::string& id) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session \"" + id + "\"");
  return it->second;
}

void AnnotationStore::CheckAnnotator(const Session& s,
                                     const std::string& annotator) {
  if (std::find(s.annotators.begin(), s.annotators.end(), annotator) ==
      s.annotators.end()) {
    throw NotFoundError("annotator \"" + annotator + "\" is not on the roster");
  }
}

ItemStatus AnnotationStore::StatusOf(const Session& s, const Item& item) const {
  if (item.labels.empty()) return ItemStatus::kUnseen;
  if (item.labels.size() == s.annotators.size()) return ItemStatus::kComplete;
  return ItemStatus::kInProgress;
}

NextItem AnnotationStore::Next(const std::string& session,
                               const std::string& annotator) const {
  auto s = Find(session);
  std::shared_lock lock(s->mu);
  CheckAnnotator(*s, annotator);
  NextItem next;
  for (size_t i = 0; i < s->items.size(); ++i) {
    const Item& item = s->items[i];
    if (item.labels.count(annotator)) continue;
    next.item = i;
    next.tokens = item.tokens;
    next.pre_annotations = item.pre;
    next.status = StatusOf(*s, item);
    return next;
  }
  next.done = true;
  return next;
}

void AnnotationStore::ValidateLabels(
    const Session& s, const std::string& annotator, size_t item,
    const std::vector<std::string>& tags,
    const std::optional<std::vector<std::string>>& mae) const {
  CheckAnnotator(s, annotator);
  if (item >= s.items.size()) {
    throw NotFoundError("unknown item " + std::to_string(item));
  }
  const size_t n = s.items[item].tokens.size();
  if (tags.size() != n) {
    throw Error("expected " + std::to_string(n) + " tags, got " +
                std::to_string(tags.size()));
  }
  for (const auto& t : tags) {
    if (!tagset_.Contains(t)) throw Error("unknown tag \"" + t + "\"");
  }
  if (mae && mae->size() != n) {
    throw Error("expected " + std::to_string(n) + " MAE equivalents, got " +
                std::to_string(mae->size()));
  }
}

void AnnotationStore::ApplyLabels(Session& s, const std::string& annotator,
                                  size_t item, std::vector<std::string> tags,
                                  std::optional<std::vector<std::string>> mae) {
  Item& it = s.items[item];
  it.labels[annotator] = std::move(tags);
  if (mae) {
    it.mae[annotator] = std::move(*mae);
  } else {
    it.mae.erase(annotator);
  }
}

SubmitResult AnnotationStore::Submit(
    const std::string& session, const std::string& annotator, size_t item,
    const std::vector<std::string>& tags,
    const std::optional<std::vector<std::string>>& mae_equivalents) {
  auto s = Find(session);
  std::unique_lock lock(s->mu);
  ValidateLabels(*s, annotator, item, tags, mae_equivalents);
  AppendJournal(UtcTimestamp() + "\tlabels\t" + s->id + "\t" + annotator +
                "\t" + std::to_string(item) + "\t" + JoinSpaces(tags) + "\t" +
                (mae_equivalents ? json(*mae_equivalents).dump() : "-"));
  ApplyLabels(*s, annotator, item, tags, mae_equivalents);
  SubmitResult result;
  result.status = StatusOf(*s, s->items[item]);
  result.agreement = AgreementLocked(*s);
  return result;
}

AgreementTable AnnotationStore::TableLocked(const Session& s) const {
  AgreementTable table(tagset_);
  for (size_t i = 0; i < s.items.size(); ++i) {
    for (const auto& [annotator, tags] : s.items[i].labels) {
      for (size_t j = 0; j < tags.size(); ++j) {
        table.Set(annotator, std::to_string(i) + ":" + std::to_string(j),
                  tags[j]);
      }
    }
  }
  return table;
}

LiveAgreement AnnotationStore::AgreementLocked(const Session& s) const {
  LiveAgreement live;
  const AgreementTable table = TableLocked(s);
  live.pairable_tokens = table.pairable_items();
  if (live.pairable_tokens > 0) live.alpha = KrippendorffAlpha(table);
  return live;
}

AgreementTable AnnotationStore::Table(const std::string& session) const {
  auto s = Find(session);
  std::shared_lock lock(s->mu);
  return TableLocked(*s);
}

LiveAgreement AnnotationStore::Agreement(const std::string& session) const {
  auto s = Find(session);
  std::shared_lock lock(s->mu);
  return AgreementLocked(*s);
}

SessionExport AnnotationStore::Export(const std::string& session,
                                      ExportStrategy strategy) const {
  auto s = Find(session);
  std::shared_lock lock(s->mu);
  bool any = false;
  for (const auto& item : s->items) any |= !item.labels.empty();
  if (!any) throw Error("nothing has been labeled in session " + s->id);

  SessionExport out;
  if (strategy == ExportStrategy::kPerAnnotator) {
    for (const auto& a : s->annotators) {
      Corpus corpus(tagset_);
      for (size_t i = 0; i < s->items.size(); ++i) {
        auto it = s->items[i].labels.find(a);
        if (it == s->items[i].labels.end()) continue;
        TaggedSentence t;
        t.tokens = s->items[i].tokens;
        t.gold_tags = it->second;
        t.source_id = std::to_string(i);
        corpus.Add(std::move(t));
      }
      if (!corpus.empty()) out.per_annotator.emplace(a, std::move(corpus));
    }
    return out;
  }

  Corpus corpus(tagset_);
  for (size_t i = 0; i < s->items.size(); ++i) {
    const Item& item = s->items[i];
    if (item.labels.empty()) continue;
    TaggedSentence t;
    t.tokens = item.tokens;
    t.gold_tags.emplace();
    t.source_id = std::to_string(i);
    for (size_t j = 0; j < item.tokens.size(); ++j) {
      std::vector<int> votes(tagset_.size(), 0);
      for (const auto& [annotator, tags] : item.labels) {
        ++votes[tagset_.Id(tags[j])];
      }
      const int best = *std::max_element(votes.begin(), votes.end());
      const auto winner =
          std::find(votes.begin(), votes.end(), best) - votes.begin();
      if (std::count(votes.begin(), votes.end(), best) > 1) {
        out.ties.push_back({i, j});
      }
      t.gold_tags->push_back(tagset_.Name(static_cast<TagId>(winner)));
    }
    corpus.Add(std::move(t));
  }
  out.majority = std::move(corpus);
  return out;
}

json AnnotationStore::State(const std::string& session) const {
  auto s = Find(session);
  std::shared_lock lock(s->mu);
  json items = json::array();
  for (const auto& item : s->items) {
    items.push_back({{"tokens", item.tokens},
                     {"pre", item.pre ? json(*item.pre) : json(nullptr)},
                     {"labels", item.labels},
                     {"mae_equivalents", item.mae},
                     {"status", ItemStatusName(StatusOf(*s, item))}});
  }
  return {{"session_id", s->id},
          {"annotators", s->annotators},
          {"model", s->model ? json(*s->model) : json(nullptr)},
          {"items", std::move(items)}};
}

json AnnotationStore::Progress(const std::string& session) const {
  auto s = Find(session);
  std::shared_lock lock(s->mu);
  std::map<std::string, size_t> counts{
      {"unseen", 0}, {"in_progress", 0}, {"complete", 0}};
  json per_annotator = json::object();
  for (const auto& a : s->annotators) per_annotator[a] = 0;
  for (const auto& item : s->items) {
    ++counts[ItemStatusName(StatusOf(*s, item))];
    for (const auto& [a, tags] : item.labels) {
      per_annotator[a] = per_annotator[a].get<size_t>() + 1;
    }
  }
  return {{"session_id", s->id},
          {"items", s->items.size()},
          {"status_counts", counts},
          {"labeled_by_annotator", std::move(per_annotator)}};
}

void AnnotationStore::AppendJournal(const std::string& record) {
  if (!journal_) return;
  std::lock_guard lock(journal_mu_);
  *journal_ << record << '\n';
  journal_->flush();
  if (!*journal_) throw Error("journal write failed");
}

void AnnotationStore::Replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read journal " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto f = SplitFields(line);
      if (f.size() < 3) throw Error("truncated record");
      if (f[1] == "create") {
        if (f.size() != 6) throw Error("create records have 6 fields");
        std::vector<Item> items;
        for (const auto& doc : json::parse(f[5])) {
          Item item;
          item.tokens = doc.at("tokens").get<std::vector<std::string>>();
          if (!doc.at("pre").is_null()) {
            item.pre = doc.at("pre").get<std::vector<std::string>>();
          }
          items.push_back(std::move(item));
        }
        auto annotators = json::parse(f[3]).get<std::vector<std::string>>();
        std::optional<std::string> model;
        if (f[4] != "-") model = f[4];
        CreateLocked(std::move(items), std::move(annotators), std::move(model),
                     f[2]);
      } else if (f[1] == "labels") {
        if (f.size() != 7) throw Error("labels records have 7 fields");
        auto s = Find(f[2]);
        const size_t item = std::stoull(f[4]);
        std::vector<std::string> tags = SplitSpaces(f[5]);
        std::optional<std::vector<std::string>> mae;
        if (f[6] != "-") {
          mae = json::parse(f[6]).get<std::vector<std::string>>();
        }
        ValidateLabels(*s, f[3], item, tags, mae);
        ApplyLabels(*s, f[3], item, std::move(tags), std::move(mae));
      } else {
        throw Error("unknown record type \"" + f[1] + "\"");
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("journal: ") + e.what(), line_no);
    } catch (const std::logic_error& e) {
      throw ParseError(std::string("journal: ") + e.what(), line_no);
    } catch (const Error& e) {
      throw ParseError(std::string("journal: ") + e.what(), line_no);
    }
  }
}

// ---------------------------------------------------------------------------
// HTTP

struct AnnotationServer::Impl {
  explicit Impl(AnnotationStore& s) : store(s) {}
  void Routes();

  AnnotationStore& store;
  httplib::Server server;
};

namespace {

void Reply(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json AgreementJson(const LiveAgreement& live) {
  json doc = {{"pairable_tokens", live.pairable_tokens}};
  if (live.alpha) {
    doc["alpha"] = live.alpha->alpha;
    doc["degenerate"] = live.alpha->degenerate;
    doc["observed_disagreement"] = live.alpha->observed_disagreement;
    doc["expected_disagreement"] = live.alpha->expected_disagreement;
  } else {
    doc["alpha"] = nullptr;
    doc["degenerate"] = false;
  }
  return doc;
}

std::string ConllText(const Corpus& corpus) {
  std::ostringstream out;
  WriteConll(corpus, out, TagChannel::kGold);
  return out.str();
}

template <typename Fn>
httplib::Server::Handler Guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const NotFoundError& e) {
      Reply(res, {{"error", e.what()}}, 404);
    } catch (const json::exception& e) {
      Reply(res, {{"error", std::string("bad request body: ") + e.what()}},
            400);
    } catch (const std::exception& e) {
      Reply(res, {{"error", e.what()}}, 400);
    }
  };
}

json ParseBody(const httplib::Request& req) {
  json body = json::parse(req.body);
  if (!body.is_object()) throw Error("request body must be a JSON object");
  return body;
}

}  // namespace

void AnnotationServer::Impl::Routes() {
  server.set_default_headers(
      {{"Access-Control-Allow-Origin", "*"},
       {"Access-Control-Allow-Headers", "Content-Type"},
       {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    Reply(res, {{"status", "ok"}});
  });

  server.Post("/sessions", Guarded([this](const httplib::Request& req,
                                          httplib::Response& res) {
    const json body = ParseBody(req);
    Corpus corpus(store.tagset());
    if (body.contains("conll")) {
      std::istringstream in(body.at("conll").get<std::string>());
      corpus = ReadConll(in, store.tagset());
    } else if (body.contains("sentences")) {
      size_t i = 0;
      for (const auto& tokens : body.at("sentences")) {
        TaggedSentence s;
        s.tokens = tokens.get<std::vector<std::string>>();
        s.source_id = std::to_string(i++);
        corpus.Add(std::move(s));
      }
    } else {
      throw Error("request needs \"conll\" or \"sentences\"");
    }
    const auto annotators =
        body.at("annotators").get<std::vector<std::string>>();
    std::optional<std::string> model;
    if (body.contains("model") && !body["model"].is_null()) {
      model = body["model"].get<std::string>();
    }
    const std::string id = store.CreateSession(corpus, annotators, model);
    Reply(res, {{"session_id", id}, {"items", corpus.size()}}, 201);
  }));

  server.Get(R"(/sessions/([^/]+))", Guarded([this](const httplib::Request& req,
                                                    httplib::Response& res) {
    Reply(res, store.Progress(req.matches[1]));
  }));

  server.Get(R"(/sessions/([^/]+)/next)",
             Guarded([this](const httplib::Request& req,
                            httplib::Response& res) {
               if (!req.has_param("annotator")) {
                 throw Error("missing annotator parameter");
               }
               const NextItem next = store.Next(
                   req.matches[1], req.get_param_value("annotator"));
               json doc = {{"done", next.done},
                           {"tagset", store.tagset().names()}};
               if (!next.done) {
                 doc["item"] = next.item;
                 doc["tokens"] = next.tokens;
                 doc["pre_annotations"] = next.pre_annotations
                                              ? json(*next.pre_annotations)
                                              : json(nullptr);
                 doc["status"] = ItemStatusName(next.status);
               }
               Reply(res, doc);
             }));

  server.Post(R"(/sessions/([^/]+)/items/([0-9]+)/labels)",
              Guarded([this](const httplib::Request& req,
                             httplib::Response& res) {
                const json body = ParseBody(req);
                std::optional<std::vector<std::string>> mae;
                if (body.contains("mae_equivalents") &&
                    !body["mae_equivalents"].is_null()) {
                  mae = body["mae_equivalents"].get<std::vector<std::string>>();
                }
                size_t item = 0;
                try {
                  item = std::stoull(std::string(req.matches[2]));
                } catch (const std::exception&) {
                  throw NotFoundError("unknown item " +
                                      std::string(req.matches[2]));
                }
                const SubmitResult r = store.Submit(
                    req.matches[1], body.at("annotator").get<std::string>(),
                    item, body.at("tags").get<std::vector<std::string>>(), mae);
                Reply(res, {{"accepted", r.accepted},
                            {"status", ItemStatusName(r.status)},
                            {"agreement", AgreementJson(r.agreement)}});
              }));

  server.Get(R"(/sessions/([^/]+)/agreement)",
             Guarded([this](const httplib::Request& req,
                            httplib::Response& res) {
               Reply(res, AgreementJson(store.Agreement(req.matches[1])));
             }));

  server.Get(R"(/sessions/([^/]+)/export)",
             Guarded([this](const httplib::Request& req,
                            httplib::Response& res) {
               const std::string name =
                   req.has_param("strategy") ? req.get_param_value("strategy")
                                             : "majority_vote";
               const ExportStrategy strategy = ParseExportStrategy(name);
               const SessionExport ex = store.Export(req.matches[1], strategy);
               json doc = {{"strategy", name}};
               if (strategy == ExportStrategy::kMajorityVote) {
                 doc["conll"] = ConllText(*ex.majority);
                 json ties = json::array();
                 for (const auto& t : ex.ties) {
                   ties.push_back({{"item", t.item}, {"token", t.token}});
                 }
                 doc["ties"] = std::move(ties);
               } else {
                 json per = json::object();
                 for (const auto& [a, corpus] : ex.per_annotator) {
                   per[a] = ConllText(corpus);
                 }
                 doc["annotators"] = std::move(per);
               }
               Reply(res, doc);
             }));
}

AnnotationServer::AnnotationServer(AnnotationStore& store)
    : impl_(std::make_unique<Impl>(store)) {
  impl_->Routes();
}

AnnotationServer::~AnnotationServer() { Stop(); }

bool AnnotationServer::Listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int AnnotationServer::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool AnnotationServer::ListenAfterBind() {
  return impl_->server.listen_after_bind();
}

void AnnotationServer::Stop() { impl_->server.stop(); }

void AnnotationServer::WaitUntilReady() const {
  impl_->server.wait_until_ready();
}

}  // namespace aaetag
