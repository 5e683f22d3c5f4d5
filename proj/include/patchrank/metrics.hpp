#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patchrank/scheduler.hpp"

namespace patchrank {

enum class Target : std::uint8_t { Plausible, Correct };

std::string_view to_string(Target t);
std::optional<Target> parse_target(std::string_view text);

// 1-based position of the first step flagged with `target`.
std::optional<std::size_t> first_position(const Schedule &s, Target target);

// (baseline - prioritized) / baseline. Negative when prioritization hurts.
double reduction(std::size_t p_baseline, std::size_t p_new);
// prioritized - baseline. Negative is an improvement.
long long displacement(std::size_t p_baseline, std::size_t p_new);

struct BugResult {
  std::string bug_id;
  std::string tool_id;
  Target target = Target::Plausible;
  std::optional<std::size_t> p_baseline;
  std::optional<std::size_t> p_new;
  std::optional<double> reduction;
  std::optional<long long> displacement;

  bool operator==(const BugResult &) const = default;
};

BugResult compare_schedules(std::string bug_id, std::string tool_id,
                            const Schedule &baseline, const Schedule &prioritized,
                            Target target);
BugResult make_bug_result(std::string bug_id, std::string tool_id, Target target,
                          std::optional<std::size_t> p_baseline,
                          std::optional<std::size_t> p_new);

struct AggregateResult {
  std::string scope;
  Target target = Target::Plausible;
  std::vector<BugResult> bugs;
  // Over bugs with both positions present.
  std::size_t included = 0;
  std::size_t sum_baseline = 0;
  std::size_t sum_new = 0;
  std::optional<double> overall_reduction;
  std::size_t count_better = 0;
  std::size_t count_worse = 0;
  std::size_t count_ties = 0;
  std::optional<double> avg_displacement;

  bool operator==(const AggregateResult &) const = default;
};

// Overall reduction is (Σ baseline − Σ new) / Σ baseline over bugs that have
// both positions. The per-bug list is kept as given.
AggregateResult aggregate(std::vector<BugResult> results, std::string scope,
                          Target target);

enum class ReportFormat : std::uint8_t { Csv, Markdown, Json };

std::optional<ReportFormat> parse_report_format(std::string_view text);

// Absent positions render as "---"; percentages use two decimals.
// Throws UnknownFormat for values outside the enum.
std::string render_report(const AggregateResult &agg, ReportFormat format);
std::string render_report(std::span<const AggregateResult> aggs, ReportFormat format);

// Inverse of the JSON rendering of a single aggregate.
AggregateResult aggregate_from_json(std::string_view json);

// One column per configuration label, one row per bug plus an overall row;
// cells hold reductions.
struct SweepColumn {
  std::string label;
  AggregateResult result;
};
std::string render_sweep(std::string_view title, std::span<const SweepColumn> columns,
                         ReportFormat format);

std::string format_percent(double ratio);

}  // namespace patchrank
