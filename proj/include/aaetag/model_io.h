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
// Versioned JSON model documents. Doubles are written in shortest
// round-trip form, so a loaded model predicts exactly like the saved one.
//
//   {"format": "aaetag-model", "version": 1, "type": "crf", ...}
//   {"format": "aaetag-model", "version": 1, "type": "bilstm", ...}

#ifndef AAETAG_MODEL_IO_H_
#define AAETAG_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "aaetag/bilstm.h"
#include "aaetag/corpus.h"
#include "aaetag/crf.h"

namespace aaetag {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json CrfToJson(const CrfModel& model);
CrfModel CrfFromJson(const nlohmann::json& doc);

nlohmann::json BiLstmToJson(const BiLstmModel& model);
BiLstmModel BiLstmFromJson(const nlohmann::json& doc);

using AnyModel = std::variant<CrfModel, BiLstmModel>;

// "crf" or "bilstm".
std::string ModelType(const AnyModel& model);
const TagSet& ModelTagSet(const AnyModel& model);

nlohmann::json ModelToJson(const AnyModel& model);
AnyModel ModelFromJson(const nlohmann::json& doc);

void SaveModel(const AnyModel& model, const std::filesystem::path& path);
AnyModel LoadModel(const std::filesystem::path& path);

// Fills pred_tags with the model's predictions.
Corpus Predict(const AnyModel& model, const Corpus& corpus);

}  // namespace aaetag

#endif  // AAETAG_MODEL_IO_H_
