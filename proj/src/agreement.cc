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

#include "aaetag/agreement.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "aaetag/error.h"

namespace aaetag {

void AgreementTable::Set(const std::string& annotator, const std::string& item,
                         const std::string& label) {
  if (annotator.empty()) throw Error("empty annotator id");
  if (item.empty()) throw Error("empty item id");
  if (!tagset_.Contains(label)) throw Error("unknown tag \"" + label + "\"");
  auto [it, inserted] = labels_.try_emplace(item);
  if (inserted) items_.push_back(item);
  it->second[annotator] = label;
}

std::vector<std::string> AgreementTable::annotators() const {
  std::set<std::string> seen;
  for (const auto& [item, row] : labels_) {
    for (const auto& [annotator, label] : row) seen.insert(annotator);
  }
  return {seen.begin(), seen.end()};
}

size_t AgreementTable::pairable_items() const {
  size_t n = 0;
  for (const auto& [item, row] : labels_) {
    if (row.size() >= 2) ++n;
  }
  return n;
}

AgreementTable ReadAgreementTable(std::istream& in, const TagSet& tagset) {
  AgreementTable table(tagset);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      throw ParseError("expected annotator, item and label columns", line_no);
    }
    try {
      table.Set(fields[0], fields[1], fields[2]);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return table;
}

AgreementTable ReadAgreementTable(const std::filesystem::path& path,
                                  const TagSet& tagset) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return ReadAgreementTable(in, tagset);
}

double CoincidenceMatrix::at(const std::string& a, const std::string& b) const {
  auto ia = std::lower_bound(categories.begin(), categories.end(), a);
  auto ib = std::lower_bound(categories.begin(), categories.end(), b);
  if (ia == categories.end() || *ia != a || ib == categories.end() ||
      *ib != b) {
    return 0.0;
  }
  return counts[ia - categories.begin()][ib - categories.begin()];
}

CoincidenceMatrix BuildCoincidenceMatrix(const AgreementTable& table) {
  CoincidenceMatrix m;
  std::set<std::string> cats;
  for (const auto& [item, row] : table.labels()) {
    if (row.size() < 2) continue;
    for (const auto& [annotator, label] : row) cats.insert(label);
  }
  if (cats.empty()) {
    throw Error("no item has labels from two or more annotators");
  }
  m.categories.assign(cats.begin(), cats.end());
  const size_t c = m.categories.size();
  m.counts.assign(c, std::vector<double>(c, 0.0));

  auto index = [&](const std::string& label) {
    return static_cast<size_t>(
        std::lower_bound(m.categories.begin(), m.categories.end(), label) -
        m.categories.begin());
  };
  for (const auto& [item, row] : table.labels()) {
    const size_t mu = row.size();
    if (mu < 2) continue;
    std::vector<size_t> values;
    values.reserve(mu);
    for (const auto& [annotator, label] : row) values.push_back(index(label));
    const double w = 1.0 / static_cast<double>(mu - 1);
    for (size_t i = 0; i < mu; ++i) {
      for (size_t j = 0; j < mu; ++j) {
        if (i != j) m.counts[values[i]][values[j]] += w;
      }
    }
    m.total += static_cast<double>(mu);
  }
  return m;
}

AlphaResult KrippendorffAlpha(const AgreementTable& table) {
  const CoincidenceMatrix m = BuildCoincidenceMatrix(table);
  const size_t c = m.categories.size();
  std::vector<double> marginal(c, 0.0);
  double off_diagonal = 0.0;
  for (size_t a = 0; a < c; ++a) {
    for (size_t b = 0; b < c; ++b) {
      marginal[a] += m.counts[a][b];
      if (a != b) off_diagonal += m.counts[a][b];
    }
  }
  double expected_pairs = 0.0;
  for (size_t a = 0; a < c; ++a) {
    for (size_t b = 0; b < c; ++b) {
      if (a != b) expected_pairs += marginal[a] * marginal[b];
    }
  }

  AlphaResult result;
  const double n = m.total;
  result.observed_disagreement = off_diagonal / n;
  result.expected_disagreement = n > 1 ? expected_pairs / (n * (n - 1)) : 0.0;
  if (expected_pairs <= 0.0) {
    result.alpha = 1.0;
    result.degenerate = true;
    return result;
  }
  result.alpha = 1.0 - (n - 1.0) * off_diagonal / expected_pairs;
  return result;
}

}  // namespace aaetag
