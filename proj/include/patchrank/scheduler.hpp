#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchrank/formulas.hpp"
#include "patchrank/model.hpp"
#include "patchrank/quality.hpp"
#include "patchrank/similarity.hpp"

namespace patchrank {

enum class StopCriterion : std::uint8_t { Exhaust, FirstPlausible, FirstCorrect };
enum class StopReason : std::uint8_t { Exhausted, FirstPlausible, FirstCorrect };

std::string_view to_string(StopCriterion s);
// Accepts "exhaust", "plausible", "correct" (and the first-* spellings).
std::optional<StopCriterion> parse_stop_criterion(std::string_view text);
std::string_view to_string(StopReason s);

// Validated patches of another tool on the same bug. Entries labelled correct
// are dropped before use.
struct WarmStartHistory {
  struct Entry {
    std::map<Granularity, ElementSet> modified;
    PatternSet patterns;
    Quality quality = Quality::Low;
    bool correct = false;
  };
  std::string bug_id;
  std::string source_tool;
  std::vector<Entry> validated;
};

// Builds a history from another tool's corpus, classified under `view` (a
// Full corpus is truncated for a Partial view; a Partial corpus cannot serve
// a Full view and throws IncompatibleMatrix). Correct-labelled patches are
// filtered out.
WarmStartHistory history_from_dataset(const BugDataset &foreign, MatrixKind view);

struct RunConfig {
  FormulaId formula = FormulaId::Ochiai;
  Granularity granularity = Granularity::Method;
  MatrixKind matrix_kind = MatrixKind::Partial;
  bool pattern_augmented = false;
  std::vector<WarmStartHistory> warm_start;
  StopCriterion stop = StopCriterion::Exhaust;
};

struct ScheduleStep {
  std::size_t step = 0;  // 1-based
  std::string patch_id;
  std::size_t original_index = 0;
  double score_at_pop = 0.0;
  Quality quality = Quality::Low;
  bool plausible = false;
  bool correct = false;

  bool operator==(const ScheduleStep &) const = default;
};

struct ScheduleTiming {
  // Time spent in pop/update bookkeeping, excluding the outcome lookups.
  std::chrono::nanoseconds bookkeeping{0};
  std::chrono::nanoseconds max_step{0};
};

struct Schedule {
  RunConfig config;
  std::vector<ScheduleStep> steps;
  StopReason stop_reason = StopReason::Exhausted;
  ScheduleTiming timing;

  // Compares the trace only; config and timings are ignored.
  bool same_trace(const Schedule &other) const {
    return steps == other.steps && stop_reason == other.stop_reason;
  }
};

// Steps in original_index order; every step scores 0.
Schedule run_baseline(const BugDataset &ds);

// Removes and returns the position of the highest-priority remaining patch;
// ties go to the smallest original_index. Throws EmptyPool.
std::size_t pop_highest(TupleStore &store, FormulaId formula,
                        double *score_at_pop = nullptr);

// Store for `ds` under `cfg`, preloaded with the foreign evidence of
// `histories`. Throws GranularityMissing if an entry has no element set at
// cfg.granularity, ConfigError if a history belongs to another bug.
TupleStore warm_start(const BugDataset &ds,
                      std::span<const WarmStartHistory> histories,
                      const RunConfig &cfg);

// Deterministic replay of on-the-fly prioritization. "Executing" a patch
// looks up its recorded row. A Full dataset replayed with a Partial config is
// truncated first; a Partial dataset with a Full config throws
// IncompatibleMatrix. An empty pool yields an empty schedule.
Schedule replay(const BugDataset &ds, const RunConfig &cfg);

}  // namespace patchrank
