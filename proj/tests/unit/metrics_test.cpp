#include "patchrank/metrics.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "patchrank/errors.hpp"

namespace patchrank {
namespace {

using testing::worked_example;

TEST(ReductionTest, Examples) {
  EXPECT_DOUBLE_EQ(reduction(4, 2), 0.5);
  EXPECT_NEAR(reduction(616, 63), 0.898, 0.0005);
  EXPECT_DOUBLE_EQ(reduction(3, 3), 0.0);
  EXPECT_DOUBLE_EQ(reduction(2, 4), -1.0);
  EXPECT_EQ(displacement(4, 2), -2);
  EXPECT_EQ(displacement(2, 5), 3);
}

TEST(FirstPositionTest, WorkedExample) {
  const BugDataset ds = worked_example(MatrixKind::Partial);
  EXPECT_EQ(first_position(run_baseline(ds), Target::Plausible), 4u);
  EXPECT_EQ(first_position(replay(ds, RunConfig{}), Target::Plausible), 2u);
  EXPECT_EQ(first_position(replay(ds, RunConfig{}), Target::Correct), 2u);
  BugDataset none = ds;
  none.patches.pop_back();
  EXPECT_FALSE(first_position(run_baseline(none), Target::Plausible));
}

TEST(CompareSchedulesTest, WorkedExample) {
  const BugDataset ds = worked_example(MatrixKind::Partial);
  const BugResult r = compare_schedules("Example-1", "example", run_baseline(ds),
                                        replay(ds, RunConfig{}), Target::Plausible);
  EXPECT_EQ(r.p_baseline, 4u);
  EXPECT_EQ(r.p_new, 2u);
  EXPECT_DOUBLE_EQ(*r.reduction, 0.5);
  EXPECT_EQ(r.displacement, -2);
}

TEST(AggregateTest, SumBasedReduction) {
  const std::vector<BugResult> bugs{
      make_bug_result("A-1", "t", Target::Plausible, 10, 5),
      make_bug_result("A-2", "t", Target::Plausible, 2, 4),
      make_bug_result("A-3", "t", Target::Plausible, 3, 3),
      make_bug_result("A-4", "t", Target::Plausible, std::nullopt, std::nullopt)};
  const AggregateResult agg = aggregate(bugs, "t", Target::Plausible);
  EXPECT_EQ(agg.included, 3u);
  EXPECT_EQ(agg.sum_baseline, 15u);
  EXPECT_EQ(agg.sum_new, 12u);
  EXPECT_DOUBLE_EQ(*agg.overall_reduction, 0.2);
  EXPECT_EQ(agg.count_better, 1u);
  EXPECT_EQ(agg.count_worse, 1u);
  EXPECT_EQ(agg.count_ties, 1u);
  EXPECT_DOUBLE_EQ(*agg.avg_displacement, -1.0);
  EXPECT_EQ(agg.bugs.size(), 4u);
}

TEST(AggregateTest, NoIncludedBugs) {
  const AggregateResult agg = aggregate({}, "t", Target::Correct);
  EXPECT_EQ(agg.included, 0u);
  EXPECT_FALSE(agg.overall_reduction);
  EXPECT_FALSE(agg.avg_displacement);
}

TEST(MetricsPropertyTest, IdentitiesOnRandomPairs) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t pb = 1 + gen() % 1000;
    const std::size_t pn = 1 + gen() % 1000;
    EXPECT_NEAR(reduction(pb, pn), -static_cast<double>(displacement(pb, pn)) / pb, 1e-12);
    EXPECT_LE(reduction(pb, pn), 1.0);
    EXPECT_EQ(reduction(pb, pn) > 0, pn < pb);
    EXPECT_EQ(displacement(pb, pb), 0);
  }
}

TEST(MetricsPropertyTest, AggregateIsPermutationInvariant) {
  std::mt19937_64 gen(9);
  std::vector<BugResult> bugs;
  for (int i = 0; i < 40; ++i) {
    bugs.push_back(make_bug_result("B-" + std::to_string(i), "t", Target::Plausible,
                                   1 + gen() % 50, 1 + gen() % 50));
  }
  const AggregateResult a = aggregate(bugs, "t", Target::Plausible);
  std::shuffle(bugs.begin(), bugs.end(), gen);
  const AggregateResult b = aggregate(bugs, "t", Target::Plausible);
  EXPECT_EQ(a.sum_baseline, b.sum_baseline);
  EXPECT_EQ(a.sum_new, b.sum_new);
  EXPECT_EQ(a.overall_reduction, b.overall_reduction);
  EXPECT_EQ(a.count_better, b.count_better);
  EXPECT_EQ(a.count_worse + a.count_ties + a.count_better, 40u);
}

TEST(MetricsPropertyTest, IdentityPrioritizerHasZeroReduction) {
  const BugDataset ds = worked_example(MatrixKind::Partial);
  const Schedule b = run_baseline(ds);
  const BugResult r = compare_schedules("x", "y", b, b, Target::Plausible);
  EXPECT_EQ(*r.reduction, 0.0);
  EXPECT_EQ(*r.displacement, 0);
}

AggregateResult example_aggregate() {
  const BugDataset ds = worked_example(MatrixKind::Partial);
  return aggregate({compare_schedules("Example-1", "example", run_baseline(ds),
                                      replay(ds, RunConfig{}), Target::Plausible)},
                   "example", Target::Plausible);
}

TEST(RenderReportTest, Markdown) {
  const std::string md = render_report(example_aggregate(), ReportFormat::Markdown);
  EXPECT_NE(md.find("| Example-1 | 4 | 2 | 50.00% | -2 |"), std::string::npos) << md;
  EXPECT_NE(md.find("**Overall**"), std::string::npos);
}

TEST(RenderReportTest, Csv) {
  const std::string csv = render_report(example_aggregate(), ReportFormat::Csv);
  EXPECT_EQ(csv,
            "scope,bug_id,target,p_baseline,p_new,reduction,displacement\n"
            "example,Example-1,plausible,4,2,50.00%,-2\n"
            "example,Overall,plausible,4,2,50.00%,-2\n");
}

TEST(RenderReportTest, EmptyPoolRendersHeaderOnly) {
  const AggregateResult empty = aggregate({}, "none", Target::Plausible);
  EXPECT_EQ(render_report(empty, ReportFormat::Csv),
            "scope,bug_id,target,p_baseline,p_new,reduction,displacement\n");
  const std::string md = render_report(empty, ReportFormat::Markdown);
  EXPECT_EQ(md.find("Overall"), std::string::npos);
  EXPECT_NE(md.find("| Bug |"), std::string::npos);
}

TEST(RenderReportTest, MissingPositionsRenderAsDashes) {
  const AggregateResult agg = aggregate(
      {make_bug_result("C-1", "t", Target::Correct, std::nullopt, 3)}, "t", Target::Correct);
  EXPECT_NE(render_report(agg, ReportFormat::Csv).find("t,C-1,correct,---,3,---,---"),
            std::string::npos);
}

TEST(RenderReportTest, JsonRoundTrip) {
  const AggregateResult agg = example_aggregate();
  EXPECT_EQ(aggregate_from_json(render_report(agg, ReportFormat::Json)), agg);

  std::mt19937_64 gen(2);
  std::vector<BugResult> bugs;
  for (int i = 0; i < 25; ++i) {
    std::optional<std::size_t> pb = 1 + gen() % 300;
    if (i % 7 == 0) pb.reset();
    bugs.push_back(make_bug_result("R-" + std::to_string(i), "t", Target::Correct, pb,
                                   1 + gen() % 300));
  }
  const AggregateResult random = aggregate(bugs, "t", Target::Correct);
  EXPECT_EQ(aggregate_from_json(render_report(random, ReportFormat::Json)), random);
}

TEST(RenderReportTest, UnknownFormatThrows) {
  EXPECT_THROW(render_report(example_aggregate(), static_cast<ReportFormat>(9)), UnknownFormat);
  EXPECT_FALSE(parse_report_format("xml"));
  EXPECT_EQ(parse_report_format("md"), ReportFormat::Markdown);
}

TEST(RenderSweepTest, OneColumnPerConfiguration) {
  std::vector<SweepColumn> cols;
  for (FormulaId f : kAllFormulas) cols.push_back({std::string(to_string(f)), example_aggregate()});
  const std::string csv = render_sweep("formulas", cols, ReportFormat::Csv);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 8);
  EXPECT_NE(csv.find("Overall"), std::string::npos);
}

}  // namespace
}  // namespace patchrank
