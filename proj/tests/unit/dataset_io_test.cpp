#include "patchrank/dataset_io.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "patchrank/errors.hpp"
#include "patchrank/quality.hpp"

namespace patchrank {
namespace {

using testing::data_dir;
using testing::worked_example;

const std::string kHeader =
    R"({"bug_id":"B-1","tool_id":"t","tests":["t1","t2"],"baseline":{"t1":"fail","t2":"pass"},"matrix_kind":"full"})";

std::string patch_line(const std::string &id, int index, const std::string &results) {
  return R"({"patch_id":")" + id + R"(","original_index":)" + std::to_string(index) +
         R"j(,"modified":{"package":["p"],"class":["p.C"],"method":["p.C.m()"],"statement":["C.java:1"]},"patterns":[],"results":)j" +
         results + "}";
}

bool has_kind(const std::vector<Issue> &issues, IssueKind k) {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue &i) { return i.kind == k; });
}

TEST(LoadDatasetTest, WorkedExampleFile) {
  const BugDataset ds = load_dataset(data_dir() / "worked_example_partial.jsonl");
  EXPECT_EQ(ds, worked_example(MatrixKind::Partial));
  EXPECT_EQ(ds.patches.size(), 4u);
  EXPECT_EQ(ds.matrix_kind, MatrixKind::Partial);
  EXPECT_EQ(load_dataset(data_dir() / "worked_example_full.jsonl"),
            worked_example(MatrixKind::Full));
}

TEST(LoadDatasetTest, MissingFileIsIoError) {
  EXPECT_THROW(load_dataset(data_dir() / "does_not_exist.jsonl"), IoError);
}

TEST(LoadDatasetTest, HeaderOnlyIsEmptyPool) {
  const BugDataset ds = parse_corpus(kHeader + "\n");
  EXPECT_TRUE(ds.patches.empty());
  EXPECT_EQ(ds.tests.size(), 2u);
}

TEST(LoadDatasetTest, PatchesSortedByOriginalIndex) {
  const std::string text = kHeader + "\n" +
                           patch_line("b", 5, R"({"t1":"fail","t2":"pass"})") + "\n" +
                           patch_line("a", 1, R"({"t1":"pass","t2":"pass"})") + "\n";
  const BugDataset ds = parse_corpus(text);
  EXPECT_EQ(ds.patches[0].patch_id, "a");
  EXPECT_EQ(ds.patches[1].patch_id, "b");
}

TEST(LoadDatasetTest, MissingCellsAreUnknown) {
  std::string header = kHeader;
  header.replace(header.find("full"), 4, "partial");
  const BugDataset ds = parse_corpus(header + "\n" + patch_line("a", 0, R"({"t1":"fail"})"));
  EXPECT_EQ(ds.patches[0].results, testing::row("F?"));
}

TEST(LoadDatasetTest, ParseErrorCarriesLineNumber) {
  const std::string text = kHeader + "\n" + patch_line("a", 0, R"({"t1":"fail","t2":"pass"})") +
                           "\n{not json\n";
  try {
    parse_corpus(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadDatasetTest, SchemaErrorNamesField) {
  std::string line = patch_line("a", 0, R"({"t1":"fail","t2":"pass"})");
  line.replace(line.find("0,"), 1, "\"zero\"");
  try {
    parse_corpus(kHeader + "\n" + line);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError &e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "original_index");
  }
}

TEST(LoadDatasetTest, BadOutcomeIsSchemaError) {
  EXPECT_THROW(parse_corpus(kHeader + "\n" + patch_line("a", 0, R"({"t1":"maybe"})")),
               SchemaError);
}

TEST(LoadDatasetTest, InvariantViolationThrows) {
  const std::string text = kHeader + "\n" + patch_line("a", 0, R"({"t1":"fail","t2":"pass"})") +
                           "\n" + patch_line("a", 1, R"({"t1":"fail","t2":"pass"})");
  EXPECT_THROW(parse_corpus(text), InvariantError);
}

TEST(CheckCorpusTest, UnknownTestReference) {
  const auto issues =
      check_corpus(kHeader + "\n" + patch_line("a", 0, R"({"t1":"fail","t2":"pass","t9":"pass"})"));
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].kind, IssueKind::UnknownTestRef);
  EXPECT_EQ(issues[0].patch_id, "a");
  EXPECT_THROW(parse_corpus(kHeader + "\n" +
                            patch_line("a", 0, R"({"t1":"fail","t2":"pass","t9":"pass"})")),
               InvariantError);
}

TEST(CheckCorpusTest, CleanFileHasNoIssues) {
  EXPECT_TRUE(check_corpus(read_file(data_dir() / "worked_example_full.jsonl")).empty());
}

TEST(ValidateDatasetTest, Examples) {
  EXPECT_TRUE(validate_dataset(worked_example(MatrixKind::Partial)).empty());

  BugDataset dup = worked_example(MatrixKind::Partial);
  dup.patches[1].original_index = 0;
  EXPECT_TRUE(has_kind(validate_dataset(dup), IssueKind::DuplicateIndex));

  BugDataset no_fail = worked_example(MatrixKind::Partial);
  no_fail.baseline = testing::row("PPP");
  EXPECT_TRUE(has_kind(validate_dataset(no_fail), IssueKind::NoFailingTest));

  BugDataset unknown_full = worked_example(MatrixKind::Partial);
  unknown_full.matrix_kind = MatrixKind::Full;
  EXPECT_TRUE(has_kind(validate_dataset(unknown_full), IssueKind::UnknownInFullMatrix));

  BugDataset short_row = worked_example(MatrixKind::Full);
  short_row.patches[0].results.pop_back();
  EXPECT_TRUE(has_kind(validate_dataset(short_row), IssueKind::RowSizeMismatch));

  BugDataset missing = worked_example(MatrixKind::Full);
  missing.patches[2].modified.erase(Granularity::Class);
  EXPECT_TRUE(has_kind(validate_dataset(missing), IssueKind::MissingGranularity));

  BugDataset mismatch = worked_example(MatrixKind::Full);
  mismatch.patches[0].modified[Granularity::Package].insert({Granularity::Method, "x"});
  EXPECT_TRUE(has_kind(validate_dataset(mismatch), IssueKind::GranularityMismatch));
}

TEST(ValidateDatasetTest, DescribeFormat) {
  const Issue issue{IssueKind::DuplicatePatchId, "p1", "seen twice"};
  EXPECT_EQ(describe(issue), "DuplicatePatchId [patch p1]: seen twice");
}

TEST(SerializeCorpusTest, ExampleFilesRoundTripByteForByte) {
  for (const char *name : {"worked_example_partial.jsonl", "worked_example_full.jsonl"}) {
    const std::string text = read_file(data_dir() / name);
    EXPECT_EQ(serialize_corpus(parse_corpus(text)), text) << name;
  }
}

TEST(SerializeCorpusTest, RandomCorporaRoundTrip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SynthParams params;
    params.n_patches = 1 + seed % 60;
    params.n_tests = 1 + seed % 12;
    const BugDataset ds = generate_synthetic(seed, params);
    const std::string text = serialize_corpus(ds);
    const BugDataset back = parse_corpus(text);
    EXPECT_EQ(back, ds) << "seed " << seed;
    EXPECT_EQ(serialize_corpus(back), text);
  }
}

TEST(SerializeCorpusTest, UnlabelledPatchOmitsCorrect) {
  BugDataset ds = worked_example(MatrixKind::Full);
  for (auto &p : ds.patches) p.correct.reset();
  const std::string text = serialize_corpus(ds);
  EXPECT_EQ(text.find("correct"), std::string::npos);
  EXPECT_EQ(parse_corpus(text), ds);
}

TEST(DerivePartialTest, WorkedExample) {
  EXPECT_EQ(derive_partial(worked_example(MatrixKind::Full)), worked_example(MatrixKind::Partial));
}

TEST(DerivePartialTest, SingleRows) {
  BugDataset ds = worked_example(MatrixKind::Full);
  ds.patches.resize(1);
  ds.patches[0].results = testing::row("PFP");
  EXPECT_EQ(derive_partial(ds).patches[0].results, testing::row("PF?"));
  ds.patches[0].results = testing::row("PPP");
  EXPECT_EQ(derive_partial(ds).patches[0].results, testing::row("PPP"));
}

TEST(DerivePartialTest, AlreadyPartialThrows) {
  EXPECT_THROW(derive_partial(worked_example(MatrixKind::Partial)), AlreadyPartial);
}

TEST(DerivePartialPropertyTest, RowShapeAndPlausibility) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const BugDataset full = generate_synthetic(seed, SynthParams{});
    const BugDataset part = derive_partial(full);
    EXPECT_TRUE(validate_dataset(part).empty());
    for (std::size_t i = 0; i < full.patches.size(); ++i) {
      const auto &row = part.patches[i].results;
      bool after_fail = false;
      for (std::size_t t = 0; t < row.size(); ++t) {
        if (after_fail) {
          EXPECT_EQ(row[t], Outcome::Unknown);
        } else {
          EXPECT_EQ(row[t], full.patches[i].results[t]);
        }
        after_fail = after_fail || row[t] == Outcome::Fail;
      }
      EXPECT_EQ(is_plausible(part.patches[i], part), is_plausible(full.patches[i], full));
    }
  }
}

TEST(DerivePartialPropertyTest, QualityCanFlipWhenAFailPrecedesTheFix) {
  BugDataset ds;
  ds.bug_id = "B-1";
  ds.tests = {{"t1"}, {"t2"}};
  ds.baseline = testing::row("PF");
  ds.matrix_kind = MatrixKind::Full;
  ds.patches.push_back(testing::make_patch("a", 0, {"e1"}, "FP"));
  const BugDataset part = derive_partial(ds);
  EXPECT_EQ(classify_quality(ds.patches[0], ds), Quality::High);
  EXPECT_EQ(classify_quality(part.patches[0], part), Quality::Low);
}

TEST(GenerateSyntheticTest, Deterministic) {
  EXPECT_EQ(serialize_corpus(generate_synthetic(42, SynthParams{})),
            serialize_corpus(generate_synthetic(42, SynthParams{})));
  EXPECT_NE(serialize_corpus(generate_synthetic(42, SynthParams{})),
            serialize_corpus(generate_synthetic(43, SynthParams{})));
}

TEST(GenerateSyntheticTest, ZeroPlausibleRate) {
  SynthParams params;
  params.plausible_rate = 0;
  const BugDataset ds = generate_synthetic(1, params);
  for (const auto &p : ds.patches) {
    EXPECT_FALSE(is_plausible(p, ds));
    EXPECT_FALSE(is_correct(p));
  }
}

TEST(GenerateSyntheticTest, LargeCorpusIsValidFullMatrix) {
  SynthParams params;
  params.n_patches = 1000;
  const BugDataset ds = generate_synthetic(3, params);
  EXPECT_EQ(ds.patches.size(), 1000u);
  EXPECT_EQ(ds.matrix_kind, MatrixKind::Full);
  EXPECT_TRUE(validate_dataset(ds).empty());
}

// Every finer element maps into a coarser element of the same patch.
TEST(GenerateSyntheticTest, FinerSetsRefineCoarserSets) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BugDataset ds = generate_synthetic(seed, SynthParams{});
    for (const auto &p : ds.patches) {
      for (std::size_t g = 1; g < 4; ++g) {
        const auto &finer = elements_of(p, kAllGranularities[g]);
        const auto &coarser = elements_of(p, kAllGranularities[g - 1]);
        EXPECT_EQ(finer.empty(), coarser.empty());
        EXPECT_LE(coarser.size(), finer.size());
      }
    }
  }
}

TEST(GenerateSyntheticTest, BadParamsThrow) {
  SynthParams params;
  params.n_tests = 0;
  EXPECT_THROW(generate_synthetic(1, params), BadParams);
  params = SynthParams{};
  params.plausible_rate = 1.5;
  EXPECT_THROW(generate_synthetic(1, params), BadParams);
}

}  // namespace
}  // namespace patchrank
