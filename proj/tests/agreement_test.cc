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
#include <random>
#include <sstream>

#include "aaetag/error.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace aaetag {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using testing::DirectAlpha;

const TagSet& Digits() {
  static const TagSet kDigits{"1", "2", "3", "4", "5"};
  return kDigits;
}

// Rows are coders, columns are units, "." marks a missing value.
AgreementTable FromGrid(const std::vector<std::string>& rows,
                        const TagSet& tagset = Digits()) {
  AgreementTable table(tagset);
  for (size_t c = 0; c < rows.size(); ++c) {
    std::istringstream in(rows[c]);
    std::string value;
    for (int unit = 0; in >> value; ++unit) {
      if (value != ".") {
        table.Set("coder" + std::to_string(c), "u" + std::to_string(unit), value);
      }
    }
  }
  return table;
}

// The four-coder, twelve-unit nominal reliability example with missing data
// that appears in Krippendorff's own worked computations. Its nominal alpha
// is 113/152 = 0.743421...
AgreementTable CanonicalExample() {
  return FromGrid({"1 2 3 3 2 1 4 1 2 . . .",
                   "1 2 3 3 2 2 4 1 2 5 . 3",
                   ". 3 3 3 2 3 4 2 2 5 1 .",
                   "1 2 3 3 2 4 4 1 2 5 1 ."});
}

AgreementTable RandomTable(std::mt19937_64& rng, int categories) {
  const int annotators = 2 + static_cast<int>(rng() % 4);
  const int items = 2 + static_cast<int>(rng() % 20);
  AgreementTable table(Digits());
  for (int i = 0; i < items; ++i) {
    const std::string truth = Digits().Name(static_cast<int>(rng() % categories));
    for (int a = 0; a < annotators; ++a) {
      if (rng() % 5 == 0) continue;  // missing
      const std::string label =
          rng() % 3 == 0 ? Digits().Name(static_cast<int>(rng() % categories))
                         : truth;
      table.Set("a" + std::to_string(a), "i" + std::to_string(i), label);
    }
  }
  table.Set("a0", "anchor", "1");
  table.Set("a1", "anchor", "2");
  return table;
}

TEST(AgreementTableTest, SetOverwritesAndOrdersItems) {
  AgreementTable t;
  t.Set("bob", "x", "NN");
  t.Set("amy", "y", "VB");
  t.Set("bob", "x", "VB");
  EXPECT_THAT(t.items(), ElementsAre("x", "y"));
  EXPECT_THAT(t.annotators(), ElementsAre("amy", "bob"));
  EXPECT_EQ(t.labels().at("x").at("bob"), "VB");
  EXPECT_EQ(t.pairable_items(), 0u);
  t.Set("amy", "x", "VB");
  EXPECT_EQ(t.pairable_items(), 1u);
  EXPECT_THROW(t.Set("", "x", "NN"), Error);
  EXPECT_THROW(t.Set("bob", "", "NN"), Error);
  EXPECT_THROW(t.Set("bob", "x", "XX"), Error);
}

TEST(CoincidenceTest, ThreeValuesInOneUnit) {
  AgreementTable t;
  t.Set("a", "u", "NN");
  t.Set("b", "u", "NN");
  t.Set("c", "u", "VB");
  const CoincidenceMatrix m = BuildCoincidenceMatrix(t);
  EXPECT_THAT(m.categories, ElementsAre("NN", "VB"));
  EXPECT_DOUBLE_EQ(m.at("NN", "NN"), 1.0);
  EXPECT_DOUBLE_EQ(m.at("NN", "VB"), 1.0);
  EXPECT_DOUBLE_EQ(m.at("VB", "NN"), 1.0);
  EXPECT_DOUBLE_EQ(m.at("VB", "VB"), 0.0);
  EXPECT_DOUBLE_EQ(m.total, 3.0);
}

TEST(CoincidenceTest, SingleValuedUnitsContributeNothing) {
  AgreementTable t;
  t.Set("a", "u", "NN");
  t.Set("b", "u", "NN");
  t.Set("a", "lonely", "VB");
  const CoincidenceMatrix m = BuildCoincidenceMatrix(t);
  EXPECT_THAT(m.categories, ElementsAre("NN"));
  EXPECT_DOUBLE_EQ(m.at("NN", "NN"), 2.0);
  EXPECT_DOUBLE_EQ(m.at("VB", "VB"), 0.0);
  EXPECT_DOUBLE_EQ(m.total, 2.0);
}

TEST(CoincidenceTest, NothingPairable) {
  AgreementTable t;
  EXPECT_THROW(BuildCoincidenceMatrix(t), Error);
  t.Set("a", "u", "NN");
  EXPECT_THROW(KrippendorffAlpha(t), Error);
}

TEST(CoincidenceTest, MarginsMatchValueCounts) {
  const CoincidenceMatrix m = BuildCoincidenceMatrix(CanonicalExample());
  EXPECT_DOUBLE_EQ(m.total, 40.0);
  // Column sums equal how often each value occurs among pairable units.
  const std::vector<double> expected = {9, 13, 10, 5, 3};
  for (size_t k = 0; k < m.categories.size(); ++k) {
    double col = 0.0;
    for (size_t c = 0; c < m.categories.size(); ++c) col += m.counts[c][k];
    EXPECT_NEAR(col, expected[k], 1e-12) << m.categories[k];
  }
}

TEST(AlphaTest, PerfectAgreementIsExactlyOne) {
  AgreementTable t;
  const std::vector<std::string> tags = {"NN", "VB", "DT", "NN", "JJ"};
  for (size_t i = 0; i < tags.size(); ++i) {
    for (const char* a : {"x", "y", "z"}) t.Set(a, std::to_string(i), tags[i]);
  }
  const AlphaResult r = KrippendorffAlpha(t);
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(r.observed_disagreement, 0.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(AlphaTest, SingleCategoryIsDegenerate) {
  AgreementTable t;
  t.Set("x", "1", "NN");
  t.Set("y", "1", "NN");
  t.Set("x", "2", "NN");
  t.Set("y", "2", "NN");
  const AlphaResult r = KrippendorffAlpha(t);
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.expected_disagreement, 0.0);
}

TEST(AlphaTest, CanonicalNominalExample) {
  const AgreementTable t = CanonicalExample();
  const AlphaResult r = KrippendorffAlpha(t);
  EXPECT_NEAR(r.alpha, DirectAlpha(t), 1e-6);
  EXPECT_NEAR(r.alpha, 113.0 / 152.0, 1e-6);
  EXPECT_NEAR(r.alpha, 0.743, 5e-4);
  EXPECT_FALSE(r.degenerate);
}

TEST(AlphaTest, TwoCodersNineUnits) {
  const AgreementTable t = FromGrid({"1 1 2 2 3 3 1 2 3",
                                     "1 2 2 2 3 1 1 2 3"});
  const AlphaResult r = KrippendorffAlpha(t);
  EXPECT_NEAR(r.alpha, DirectAlpha(t), 1e-6);
  EXPECT_LT(r.alpha, 1.0);
  EXPECT_GT(r.alpha, 0.0);
}

TEST(AlphaTest, SystematicDisagreementIsNegative) {
  const AgreementTable t = FromGrid({"1 2 1 2", "2 1 2 1"});
  EXPECT_LT(KrippendorffAlpha(t).alpha, 0.0);
  EXPECT_NEAR(KrippendorffAlpha(t).alpha, DirectAlpha(t), 1e-12);
}

TEST(AlphaPropertyTest, MatchesDirectOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const AgreementTable t = RandomTable(rng, 2 + trial % 4);
    EXPECT_NEAR(KrippendorffAlpha(t).alpha, DirectAlpha(t), 1e-9);
  }
}

TEST(AlphaPropertyTest, InvariantUnderRelabelingAndPermutation) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const AgreementTable t = RandomTable(rng, 5);
    const double alpha = KrippendorffAlpha(t).alpha;

    std::vector<std::string> labels = Digits().names();
    std::vector<std::string> image = labels;
    std::shuffle(image.begin(), image.end(), rng);
    std::vector<std::string> annotators = t.annotators();
    std::vector<std::string> renamed = annotators;
    std::shuffle(renamed.begin(), renamed.end(), rng);
    std::vector<std::string> items = t.items();
    std::shuffle(items.begin(), items.end(), rng);

    AgreementTable relabeled(Digits());
    AgreementTable permuted(Digits());
    for (const auto& item : items) {
      for (const auto& [a, label] : t.labels().at(item)) {
        const size_t li = std::find(labels.begin(), labels.end(), label) - labels.begin();
        const size_t ai =
            std::find(annotators.begin(), annotators.end(), a) - annotators.begin();
        relabeled.Set(a, item, image[li]);
        permuted.Set(renamed[ai], "p" + item, label);
      }
    }
    EXPECT_NEAR(KrippendorffAlpha(relabeled).alpha, alpha, 1e-12);
    EXPECT_NEAR(KrippendorffAlpha(permuted).alpha, alpha, 1e-12);
  }
}

TEST(AlphaPropertyTest, RandomLabelsNearZero) {
  std::mt19937_64 rng(3);
  AgreementTable t(Digits());
  for (int i = 0; i < 10000; ++i) {
    for (const char* a : {"x", "y", "z"}) {
      t.Set(a, std::to_string(i), Digits().Name(static_cast<int>(rng() % 5)));
    }
  }
  EXPECT_NEAR(KrippendorffAlpha(t).alpha, 0.0, 0.1);
}

TEST(ReadAgreementTableTest, ParsesTsv) {
  std::istringstream in(
      "# annotator\titem\tlabel\n"
      "a\t0:0\tNN\n"
      "b\t0:0\tNN\n"
      "\n"
      "a\t0:1\tVB\n"
      "b\t0:1\tVBP\n");
  const AgreementTable t = ReadAgreementTable(in);
  EXPECT_THAT(t.items(), ElementsAre("0:0", "0:1"));
  EXPECT_EQ(t.pairable_items(), 2u);
  EXPECT_NEAR(KrippendorffAlpha(t).alpha, DirectAlpha(t), 1e-12);
}

TEST(ReadAgreementTableTest, ReportsLine) {
  std::istringstream bad_label("a\t1\tNN\nb\t1\tXX\n");
  try {
    ReadAgreementTable(bad_label);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_THAT(e.what(), HasSubstr("XX"));
  }
  std::istringstream short_row("a\t1\n");
  EXPECT_THROW(ReadAgreementTable(short_row), ParseError);
  EXPECT_THROW(ReadAgreementTable(std::filesystem::path("/nonexistent.tsv")),
               Error);
}

}  // namespace
}  // namespace aaetag
