#include "patchrank/scheduler.hpp"

#include <algorithm>
#include <numeric>

#include "patchrank/dataset_io.hpp"
#include "patchrank/errors.hpp"

namespace patchrank {

std::string_view to_string(StopCriterion s) {
  switch (s) {
    case StopCriterion::Exhaust: return "exhaust";
    case StopCriterion::FirstPlausible: return "plausible";
    case StopCriterion::FirstCorrect: return "correct";
  }
  return "?";
}

std::optional<StopCriterion> parse_stop_criterion(std::string_view text) {
  if (text == "exhaust") return StopCriterion::Exhaust;
  if (text == "plausible" || text == "first-plausible") {
    return StopCriterion::FirstPlausible;
  }
  if (text == "correct" || text == "first-correct") {
    return StopCriterion::FirstCorrect;
  }
  return std::nullopt;
}

std::string_view to_string(StopReason s) {
  switch (s) {
    case StopReason::Exhausted: return "exhausted";
    case StopReason::FirstPlausible: return "first-plausible";
    case StopReason::FirstCorrect: return "first-correct";
  }
  return "?";
}

WarmStartHistory history_from_dataset(const BugDataset &input, MatrixKind view) {
  if (view == MatrixKind::Full && input.matrix_kind == MatrixKind::Partial) {
    throw IncompatibleMatrix("warm-start corpus of " + input.tool_id +
                             " holds a partial matrix");
  }
  const BugDataset foreign =
      view == MatrixKind::Partial && input.matrix_kind == MatrixKind::Full
          ? derive_partial(input)
          : input;
  WarmStartHistory h;
  h.bug_id = foreign.bug_id;
  h.source_tool = foreign.tool_id;
  const auto failing = originally_failing_indices(foreign);
  for (const PatchRecord &p : foreign.patches) {
    if (is_correct(p)) continue;
    h.validated.push_back({p.modified, p.patterns, classify_quality(p, failing),
                           false});
  }
  return h;
}

Schedule run_baseline(const BugDataset &ds) {
  Schedule s;
  s.config.stop = StopCriterion::Exhaust;
  if (ds.patches.empty()) return s;

  const auto failing = originally_failing_indices(ds);
  std::vector<std::size_t> order(ds.patches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ds.patches[a].original_index < ds.patches[b].original_index;
  });
  for (std::size_t pos : order) {
    const PatchRecord &p = ds.patches[pos];
    s.steps.push_back({s.steps.size() + 1, p.patch_id, p.original_index, 0.0,
                       classify_quality(p, failing), is_plausible(p, ds),
                       is_correct(p)});
  }
  return s;
}

std::size_t pop_highest(TupleStore &store, FormulaId formula,
                        double *score_at_pop) {
  return store.pop_highest(formula, score_at_pop);
}

TupleStore warm_start(const BugDataset &ds,
                      std::span<const WarmStartHistory> histories,
                      const RunConfig &cfg) {
  TupleStore store(ds.patches, {cfg.granularity, cfg.pattern_augmented});
  for (const WarmStartHistory &h : histories) {
    if (!h.bug_id.empty() && !ds.bug_id.empty() && h.bug_id != ds.bug_id) {
      throw ConfigError("warm-start history from " + h.source_tool +
                        " is for bug " + h.bug_id + ", not " + ds.bug_id);
    }
    for (const auto &entry : h.validated) {
      if (entry.correct) continue;
      const auto it = entry.modified.find(cfg.granularity);
      if (it == entry.modified.end()) {
        throw GranularityMissing("warm-start history from " + h.source_tool +
                                 " has no " +
                                 std::string(to_string(cfg.granularity)) +
                                 " element sets");
      }
      store.update(it->second, entry.patterns, entry.quality);
    }
  }
  return store;
}

Schedule replay(const BugDataset &input, const RunConfig &cfg) {
  if (cfg.matrix_kind == MatrixKind::Full &&
      input.matrix_kind == MatrixKind::Partial) {
    throw IncompatibleMatrix("full-matrix replay requested on a partial matrix (" +
                             input.bug_id + ")");
  }
  if (cfg.stop == StopCriterion::FirstCorrect && !input.patches.empty() &&
      !input.has_correctness_labels()) {
    throw ConfigError("stop at first correct patch requires correctness labels");
  }

  BugDataset truncated;
  const bool truncate = cfg.matrix_kind == MatrixKind::Partial &&
                        input.matrix_kind == MatrixKind::Full;
  if (truncate) truncated = derive_partial(input);
  const BugDataset &ds = truncate ? truncated : input;

  Schedule s;
  s.config = cfg;
  if (ds.patches.empty()) return s;

  using Clock = std::chrono::steady_clock;
  const auto failing = originally_failing_indices(ds);

  auto t0 = Clock::now();
  TupleStore store = warm_start(ds, cfg.warm_start, cfg);
  s.timing.bookkeeping += Clock::now() - t0;

  while (store.remaining() > 0) {
    t0 = Clock::now();
    double score_at_pop = 0.0;
    const std::size_t pos = pop_highest(store, cfg.formula, &score_at_pop);
    auto spent = Clock::now() - t0;

    // Execution: the recorded row stands in for running the tests.
    const PatchRecord &p = ds.patches[pos];
    const Quality q = classify_quality(p, failing);
    const ScheduleStep &step = s.steps.emplace_back(ScheduleStep{
        s.steps.size() + 1, p.patch_id, p.original_index, score_at_pop, q,
        is_plausible(p, ds), is_correct(p)});

    if (cfg.stop == StopCriterion::FirstPlausible && step.plausible) {
      s.stop_reason = StopReason::FirstPlausible;
    } else if (cfg.stop == StopCriterion::FirstCorrect && step.correct) {
      s.stop_reason = StopReason::FirstCorrect;
    }

    if (s.stop_reason == StopReason::Exhausted && store.remaining() > 0) {
      t0 = Clock::now();
      store.update_from_patch(pos, q);
      spent += Clock::now() - t0;
    }
    const auto spent_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(spent);
    s.timing.bookkeeping += spent_ns;
    s.timing.max_step = std::max(s.timing.max_step, spent_ns);
    if (s.stop_reason != StopReason::Exhausted) break;
  }
  return s;
}

}  // namespace patchrank
