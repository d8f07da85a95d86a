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

#include "aaetag/model_io.h"

#include <cmath>
#include <fstream>

#include "aaetag/error.h"

namespace aaetag {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "aaetag-model";

json Header(const char* type) {
  return {{"format", kFormatName},
          {"version", kModelFormatVersion},
          {"type", type}};
}

void CheckHeader(const json& doc, const std::string& type) {
  if (!doc.is_object()) throw Error("model document is not an object");
  if (doc.value("format", "") != kFormatName) {
    throw Error("not an aaetag model document");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kModelFormatVersion) {
    throw Error("unsupported model format version");
  }
  if (doc.value("type", "") != type) {
    throw Error("expected a " + type + " model, found \"" +
                doc.value("type", "") + "\"");
  }
}

double CheckedNumber(const json& v) {
  if (!v.is_number()) throw Error("expected a number in model document");
  return v.get<double>();
}

void RequireFinite(double v) {
  if (!std::isfinite(v)) throw Error("model contains a non-finite weight");
}

json MatrixToJson(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      RequireFinite(m(i, j));
      data.push_back(m(i, j));
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

void MatrixFromJson(const json& doc, Eigen::MatrixXd& m,
                    std::string_view name) {
  const auto where = " for tensor " + std::string(name);
  if (!doc.is_object() || !doc.contains("data")) {
    throw Error("missing data" + where);
  }
  if (doc.value("rows", -1) != m.rows() || doc.value("cols", -1) != m.cols()) {
    throw Error("shape mismatch" + where);
  }
  const json& data = doc["data"];
  if (!data.is_array() || data.size() != static_cast<size_t>(m.size())) {
    throw Error("wrong element count" + where);
  }
  size_t k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = CheckedNumber(data[k++]);
    }
  }
}

}  // namespace

json CrfToJson(const CrfModel& model) {
  json doc = Header("crf");
  const int T = model.num_tags();
  doc["tagset"] = model.tagset().names();
  doc["l1"] = model.l1();
  doc["l2"] = model.l2();
  json transitions = json::array();
  for (int a = 0; a < T; ++a) {
    json row = json::array();
    for (int b = 0; b < T; ++b) {
      RequireFinite(model.transition(a, b));
      row.push_back(model.transition(a, b));
    }
    transitions.push_back(std::move(row));
  }
  doc["transitions"] = std::move(transitions);
  doc["features"] = model.feature_names();
  json state = json::array();
  for (size_t f = 0; f < model.num_features(); ++f) {
    for (int t = 0; t < T; ++t) {
      const double w = model.state(static_cast<int>(f), t);
      RequireFinite(w);
      if (w != 0.0) state.push_back({f, t, w});
    }
  }
  doc["state"] = std::move(state);
  return doc;
}

CrfModel CrfFromJson(const json& doc) {
  CheckHeader(doc, "crf");
  try {
    CrfModel model(TagSet(doc.at("tagset").get<std::vector<std::string>>()),
                   CheckedNumber(doc.at("l1")), CheckedNumber(doc.at("l2")));
    const int T = model.num_tags();
    const json& transitions = doc.at("transitions");
    if (!transitions.is_array() || transitions.size() != static_cast<size_t>(T)) {
      throw Error("transition matrix must be " + std::to_string(T) + " x " +
                  std::to_string(T));
    }
    for (int a = 0; a < T; ++a) {
      const json& row = transitions[a];
      if (!row.is_array() || row.size() != static_cast<size_t>(T)) {
        throw Error("transition matrix must be square");
      }
      for (int b = 0; b < T; ++b) model.transition(a, b) = CheckedNumber(row[b]);
    }
    for (const auto& name : doc.at("features")) {
      const auto s = name.get<std::string>();
      const size_t before = model.num_features();
      model.AddFeature(s);
      if (model.num_features() == before) {
        throw Error("duplicate feature \"" + s + "\"");
      }
    }
    for (const auto& entry : doc.at("state")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw Error("state entries are [feature, tag, weight] triples");
      }
      const auto f = entry[0].get<long long>();
      const auto t = entry[1].get<long long>();
      if (f < 0 || f >= static_cast<long long>(model.num_features()) || t < 0 ||
          t >= T) {
        throw Error("state entry out of range");
      }
      model.state(static_cast<int>(f), static_cast<int>(t)) =
          CheckedNumber(entry[2]);
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed crf model: ") + e.what());
  }
}

json BiLstmToJson(const BiLstmModel& model) {
  json doc = Header("bilstm");
  doc["tagset"] = model.tagset().names();
  doc["vocab"] = model.vocab().words();
  doc["embed_dim"] = model.dims().embed;
  doc["hidden_dim"] = model.dims().hidden;
  json tensors = json::object();
  const auto names = BiLstmParams::TensorNames();
  const auto ptrs = model.params().tensors();
  for (size_t i = 0; i < BiLstmParams::kNumTensors; ++i) {
    tensors[std::string(names[i])] = MatrixToJson(*ptrs[i]);
  }
  doc["tensors"] = std::move(tensors);
  return doc;
}

BiLstmModel BiLstmFromJson(const json& doc) {
  CheckHeader(doc, "bilstm");
  try {
    BiLstmDims dims{doc.at("embed_dim").get<int>(),
                    doc.at("hidden_dim").get<int>()};
    BiLstmModel model(TagSet(doc.at("tagset").get<std::vector<std::string>>()),
                      Vocabulary(doc.at("vocab").get<std::vector<std::string>>()),
                      dims);
    const json& tensors = doc.at("tensors");
    const auto names = BiLstmParams::TensorNames();
    const auto ptrs = model.params().tensors();
    for (size_t i = 0; i < BiLstmParams::kNumTensors; ++i) {
      const std::string name(names[i]);
      if (!tensors.contains(name)) throw Error("missing tensor " + name);
      MatrixFromJson(tensors[name], *ptrs[i], name);
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed bilstm model: ") + e.what());
  }
}

std::string ModelType(const AnyModel& model) {
  return std::holds_alternative<CrfModel>(model) ? "crf" : "bilstm";
}

const TagSet& ModelTagSet(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> const TagSet& { return m.tagset(); }, model);
}

json ModelToJson(const AnyModel& model) {
  if (const auto* crf = std::get_if<CrfModel>(&model)) return CrfToJson(*crf);
  return BiLstmToJson(std::get<BiLstmModel>(model));
}

AnyModel ModelFromJson(const json& doc) {
  if (!doc.is_object()) throw Error("model document is not an object");
  const std::string type = doc.value("type", "");
  if (type == "crf") return CrfFromJson(doc);
  if (type == "bilstm") return BiLstmFromJson(doc);
  throw Error("unknown model type \"" + type + "\"");
}

void SaveModel(const AnyModel& model, const std::filesystem::path& path) {
  const std::string text = ModelToJson(model).dump(1) + "\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

AnyModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return ModelFromJson(doc);
}

Corpus Predict(const AnyModel& model, const Corpus& corpus) {
  if (const auto* crf = std::get_if<CrfModel>(&model)) {
    return PredictCrf(*crf, corpus);
  }
  return PredictBiLstm(std::get<BiLstmModel>(model), corpus);
}

}  // namespace aaetag
