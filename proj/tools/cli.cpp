#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "patchrank/dataset_io.hpp"
#include "patchrank/errors.hpp"
#include "patchrank/metrics.hpp"
#include "patchrank/scheduler.hpp"

namespace patchrank::cli {

namespace fs = std::filesystem;

namespace {

// Raised for bad flag values; maps to kExitInvalid.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct ReplayFlags {
  std::string formula = "ochiai";
  std::string granularity = "method";
  std::string matrix = "partial";
  bool plus_plus = false;
  std::string stop = "exhaust";
  std::vector<std::string> warm_start;
  std::string report = "markdown";
  std::string out;
  bool timings = false;
};

void add_replay_flags(CLI::App &cmd, ReplayFlags &f) {
  cmd.add_option("--formula", f.formula,
                 "Tarantula, Ochiai, Ochiai2, Op2, SBI, Jaccard, Kulczynski, Dstar2")
      ->capture_default_str();
  cmd.add_option("--granularity", f.granularity, "package|class|method|statement")
      ->capture_default_str();
  cmd.add_option("--matrix", f.matrix, "partial|full")->capture_default_str();
  cmd.add_flag("--plus-plus", f.plus_plus, "Also compare applied fix patterns");
  cmd.add_option("--stop", f.stop, "exhaust|plausible|correct")->capture_default_str();
  cmd.add_option("--warm-start", f.warm_start,
                 "Directories with other tools' corpora for the same bug")
      ->expected(1, -1);
  cmd.add_option("--report", f.report, "csv|markdown|json")->capture_default_str();
  cmd.add_option("--out", f.out, "Write the report here instead of stdout");
  cmd.add_flag("--timings", f.timings, "Print prioritization bookkeeping time to stderr");
}

RunConfig config_from(const ReplayFlags &f) {
  RunConfig cfg;
  const auto formula = parse_formula(f.formula);
  if (!formula) throw UsageError("unknown formula '" + f.formula + "'");
  cfg.formula = *formula;
  const auto g = parse_granularity(f.granularity);
  if (!g) throw UsageError("unknown granularity '" + f.granularity + "'");
  cfg.granularity = *g;
  const auto mk = parse_matrix_kind(f.matrix);
  if (!mk) throw UsageError("unknown matrix kind '" + f.matrix + "'");
  cfg.matrix_kind = *mk;
  cfg.pattern_augmented = f.plus_plus;
  const auto stop = parse_stop_criterion(f.stop);
  if (!stop) throw UsageError("unknown stop criterion '" + f.stop + "'");
  cfg.stop = *stop;
  return cfg;
}

ReportFormat format_from(const std::string &text) {
  const auto fmt = parse_report_format(text);
  if (!fmt) throw UsageError("unknown report format '" + text + "'");
  return *fmt;
}

std::vector<fs::path> corpora_in(const fs::path &dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<WarmStartHistory> histories_for(const BugDataset &ds,
                                            const std::vector<BugDataset> &pool,
                                            MatrixKind view) {
  std::vector<WarmStartHistory> out;
  for (const BugDataset &foreign : pool) {
    if (foreign.bug_id != ds.bug_id || foreign.tool_id == ds.tool_id) continue;
    out.push_back(history_from_dataset(foreign, view));
  }
  return out;
}

std::vector<BugDataset> load_warm_dirs(const std::vector<std::string> &dirs) {
  std::vector<BugDataset> pool;
  for (const std::string &dir : dirs) {
    for (const fs::path &p : corpora_in(dir)) pool.push_back(load_dataset(p));
  }
  return pool;
}

struct CorpusRun {
  BugDataset dataset;
  Schedule baseline;
  Schedule prioritized;
};

CorpusRun run_corpus(BugDataset ds, const RunConfig &cfg) {
  CorpusRun r;
  r.baseline = run_baseline(ds);
  r.prioritized = replay(ds, cfg);
  r.dataset = std::move(ds);
  return r;
}

void emit(const std::string &report, const std::string &out_path, std::ostream &out) {
  if (out_path.empty()) {
    out << report;
  } else {
    write_file(out_path, report);
  }
}

std::string timing_line(const CorpusRun &r) {
  std::ostringstream os;
  os << "timing " << r.dataset.tool_id << '/' << r.dataset.bug_id << ": "
     << r.prioritized.steps.size() << " steps, bookkeeping "
     << std::chrono::duration<double, std::milli>(r.prioritized.timing.bookkeeping).count()
     << " ms, max step "
     << std::chrono::duration<double, std::micro>(r.prioritized.timing.max_step).count()
     << " us\n";
  return os.str();
}

int cmd_replay(const std::string &corpus, const ReplayFlags &flags, std::ostream &out,
               std::ostream &err) {
  RunConfig cfg = config_from(flags);
  const ReportFormat fmt = format_from(flags.report);
  BugDataset ds = load_dataset(corpus);
  cfg.warm_start = histories_for(ds, load_warm_dirs(flags.warm_start), cfg.matrix_kind);

  const CorpusRun r = run_corpus(std::move(ds), cfg);
  std::vector<AggregateResult> aggs;
  aggs.push_back(aggregate({compare_schedules(r.dataset.bug_id, r.dataset.tool_id,
                                              r.baseline, r.prioritized,
                                              Target::Plausible)},
                           r.dataset.tool_id, Target::Plausible));
  if (r.dataset.has_correctness_labels()) {
    aggs.push_back(aggregate({compare_schedules(r.dataset.bug_id, r.dataset.tool_id,
                                                r.baseline, r.prioritized,
                                                Target::Correct)},
                             r.dataset.tool_id, Target::Correct));
  }
  emit(render_report(aggs, fmt), flags.out, out);
  if (flags.timings) err << timing_line(r);
  return kExitOk;
}

int exit_code_for(const std::exception &e) {
  if (dynamic_cast<const IoError *>(&e)) return kExitIo;
  if (dynamic_cast<const fs::filesystem_error *>(&e)) return kExitIo;
  return kExitInvalid;
}

std::vector<fs::path> read_manifest(const fs::path &manifest) {
  const std::string text = read_file(manifest);
  std::vector<fs::path> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    fs::path p = line.substr(first, last - first + 1);
    if (p.is_relative()) p = manifest.parent_path() / p;
    out.push_back(std::move(p));
  }
  return out;
}

std::string scope_key(const BugDataset &ds, const std::string &scope) {
  if (scope == "tool") return ds.tool_id;
  if (scope == "project") return ds.bug_id.substr(0, ds.bug_id.find('-'));
  return "overall";
}

struct BatchFlags {
  ReplayFlags replay;
  std::string sweep;
  unsigned jobs = 0;
  std::string scope = "overall";
  bool warm_from_manifest = false;
};

struct SweepPoint {
  std::string label;
  RunConfig config;
};

std::vector<SweepPoint> sweep_points(const std::string &sweep, const RunConfig &base) {
  std::vector<SweepPoint> out;
  if (sweep.empty()) {
    out.push_back({"", base});
  } else if (sweep == "formulas") {
    for (FormulaId f : kAllFormulas) {
      RunConfig c = base;
      c.formula = f;
      out.push_back({std::string(to_string(f)), c});
    }
  } else if (sweep == "granularities") {
    for (Granularity g : kAllGranularities) {
      RunConfig c = base;
      c.granularity = g;
      out.push_back({std::string(to_string(g)), c});
    }
  } else if (sweep == "matrices") {
    for (MatrixKind k : {MatrixKind::Partial, MatrixKind::Full}) {
      RunConfig c = base;
      c.matrix_kind = k;
      out.push_back({std::string(to_string(k)), c});
    }
  } else {
    throw UsageError("unknown sweep '" + sweep + "'");
  }
  return out;
}

unsigned default_jobs() {
  if (const char *env = std::getenv(kJobsEnv)) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception &) {
    }
  }
  return 1;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto &t : workers) t.join();
}

int cmd_batch(const std::string &manifest, const BatchFlags &flags, std::ostream &out,
              std::ostream &err) {
  const RunConfig base = config_from(flags.replay);
  const ReportFormat fmt = format_from(flags.replay.report);
  if (flags.scope != "overall" && flags.scope != "tool" && flags.scope != "project") {
    throw UsageError("unknown scope '" + flags.scope + "'");
  }
  const std::vector<SweepPoint> points = sweep_points(flags.sweep, base);
  const std::vector<fs::path> paths = read_manifest(manifest);
  const unsigned jobs = flags.jobs > 0 ? flags.jobs : default_jobs();

  int status = kExitOk;
  std::mutex err_mutex;
  auto fail = [&](const std::string &what, const std::exception &e) {
    std::lock_guard lock(err_mutex);
    err << "error: " << what << ": " << e.what() << '\n';
    status = std::max(status, exit_code_for(e));
  };

  // Load every corpus once; failures are reported and the corpus skipped.
  std::vector<std::optional<BugDataset>> datasets(paths.size());
  parallel_for(paths.size(), jobs, [&](std::size_t i) {
    try {
      datasets[i] = load_dataset(paths[i]);
    } catch (const std::exception &e) {
      fail(paths[i].string(), e);
    }
  });

  std::vector<BugDataset> warm_pool = load_warm_dirs(flags.replay.warm_start);
  if (flags.warm_from_manifest) {
    for (const auto &ds : datasets) {
      if (ds) warm_pool.push_back(*ds);
    }
  }

  // runs[point][corpus]
  std::vector<std::vector<std::optional<CorpusRun>>> runs(
      points.size(), std::vector<std::optional<CorpusRun>>(paths.size()));
  parallel_for(points.size() * paths.size(), jobs, [&](std::size_t k) {
    const std::size_t pi = k / paths.size();
    const std::size_t ci = k % paths.size();
    if (!datasets[ci]) return;
    try {
      RunConfig cfg = points[pi].config;
      cfg.warm_start = histories_for(*datasets[ci], warm_pool, cfg.matrix_kind);
      runs[pi][ci] = run_corpus(*datasets[ci], cfg);
    } catch (const std::exception &e) {
      fail(paths[ci].string() + (points[pi].label.empty() ? "" : " [" + points[pi].label + "]"), e);
    }
  });

  bool any_labels = false;
  for (const auto &ds : datasets) any_labels = any_labels || (ds && ds->has_correctness_labels());
  std::vector<Target> targets{Target::Plausible};
  if (any_labels) targets.push_back(Target::Correct);

  std::string report;
  if (flags.sweep.empty()) {
    std::vector<AggregateResult> aggs;
    for (Target t : targets) {
      std::map<std::string, std::vector<BugResult>> groups;
      for (const auto &r : runs[0]) {
        if (!r) continue;
        groups[scope_key(r->dataset, flags.scope)].push_back(compare_schedules(
            r->dataset.bug_id, r->dataset.tool_id, r->baseline, r->prioritized, t));
      }
      for (auto &[key, bugs] : groups) aggs.push_back(aggregate(std::move(bugs), key, t));
    }
    report = render_report(aggs, fmt);
  } else {
    for (Target t : targets) {
      std::vector<SweepColumn> columns;
      for (std::size_t pi = 0; pi < points.size(); ++pi) {
        std::vector<BugResult> bugs;
        for (const auto &r : runs[pi]) {
          if (!r) continue;
          bugs.push_back(compare_schedules(r->dataset.bug_id, r->dataset.tool_id,
                                           r->baseline, r->prioritized, t));
        }
        columns.push_back({points[pi].label, aggregate(std::move(bugs), "overall", t)});
      }
      if (!report.empty() && fmt != ReportFormat::Json) report += '\n';
      report += render_sweep("Impact of " + flags.sweep + ": first " +
                                 std::string(to_string(t)) + " patch",
                             columns, fmt);
    }
  }
  emit(report, flags.replay.out, out);

  if (flags.replay.timings) {
    for (const auto &point_runs : runs) {
      for (const auto &r : point_runs) {
        if (r) err << timing_line(*r);
      }
    }
  }
  return status;
}

struct SynthFlags {
  std::uint64_t seed = 0;
  SynthParams params;
  std::string out;
};

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Replay harness for on-the-fly patch prioritization", "patchrank"};
  app.require_subcommand(1);

  ReplayFlags replay_flags;
  std::string replay_corpus;
  CLI::App *replay_cmd =
      app.add_subcommand("replay", "Baseline vs prioritized replay of one corpus");
  replay_cmd->add_option("corpus", replay_corpus, "Corpus file (.jsonl)")->required();
  add_replay_flags(*replay_cmd, replay_flags);

  BatchFlags batch_flags;
  std::string manifest;
  CLI::App *batch_cmd = app.add_subcommand("batch", "Replay every corpus of a manifest");
  batch_cmd->add_option("manifest", manifest, "One corpus path per line")->required();
  add_replay_flags(*batch_cmd, batch_flags.replay);
  batch_cmd->add_option("--sweep", batch_flags.sweep, "formulas|granularities|matrices");
  batch_cmd->add_option("--jobs", batch_flags.jobs,
                        std::string("Concurrent corpora (default $") + kJobsEnv + " or 1)");
  batch_cmd->add_option("--scope", batch_flags.scope, "overall|tool|project")
      ->capture_default_str();
  batch_cmd->add_flag("--warm-from-manifest", batch_flags.warm_from_manifest,
                      "Warm-start each corpus from the other tools in the manifest");

  SynthFlags synth;
  CLI::App *synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  synth_cmd->add_option("--seed", synth.seed)->required();
  synth_cmd->add_option("--patches", synth.params.n_patches)->capture_default_str();
  synth_cmd->add_option("--tests", synth.params.n_tests)->capture_default_str();
  synth_cmd->add_option("--packages", synth.params.n_packages)->capture_default_str();
  synth_cmd->add_option("--classes", synth.params.n_classes)->capture_default_str();
  synth_cmd->add_option("--methods", synth.params.n_methods)->capture_default_str();
  synth_cmd->add_option("--statements", synth.params.n_statements)->capture_default_str();
  synth_cmd->add_option("--patterns", synth.params.n_patterns)->capture_default_str();
  synth_cmd->add_option("--plausible-rate", synth.params.plausible_rate)->capture_default_str();
  synth_cmd->add_option("--high-rate", synth.params.high_rate)->capture_default_str();
  synth_cmd->add_option("--sites", synth.params.n_site_classes,
                        "Distinct modified-statement sets")
      ->capture_default_str();
  synth_cmd->add_option("--max-failing", synth.params.max_failing)->capture_default_str();
  synth_cmd->add_option("--bug-id", synth.params.bug_id)->capture_default_str();
  synth_cmd->add_option("--tool-id", synth.params.tool_id)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output file (default stdout)");

  std::string validate_corpus;
  CLI::App *validate_cmd = app.add_subcommand("validate", "Check a corpus");
  validate_cmd->add_option("corpus", validate_corpus)->required();

  std::string derive_corpus;
  std::string derive_out;
  CLI::App *derive_cmd = app.add_subcommand(
      "derive-partial", "Truncate a full matrix at each patch's first failure");
  derive_cmd->add_option("corpus", derive_corpus)->required();
  derive_cmd->add_option("--out", derive_out, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (*replay_cmd) return cmd_replay(replay_corpus, replay_flags, out, err);
    if (*batch_cmd) return cmd_batch(manifest, batch_flags, out, err);
    if (*synth_cmd) {
      emit(serialize_corpus(generate_synthetic(synth.seed, synth.params)), synth.out, out);
      return kExitOk;
    }
    if (*validate_cmd) {
      const auto issues = check_corpus(read_file(validate_corpus));
      for (const Issue &issue : issues) out << describe(issue) << '\n';
      out << issues.size() << (issues.size() == 1 ? " issue" : " issues") << '\n';
      return issues.empty() ? kExitOk : kExitInvalid;
    }
    if (*derive_cmd) {
      emit(serialize_corpus(derive_partial(load_dataset(derive_corpus))), derive_out, out);
      return kExitOk;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitInvalid;
}

}  // namespace patchrank::cli
