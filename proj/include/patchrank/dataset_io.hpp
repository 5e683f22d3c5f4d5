#pragma once

// Line-delimited corpus format: the first non-empty line is a header object
// (bug_id, tool_id, tests, baseline, matrix_kind); every following line is one
// patch object (patch_id, original_index, modified.{package,class,method,
// statement}, patterns, results, correct). Cells are "pass" | "fail" |
// "unknown". Serialization is canonical: fixed field order, tests and result
// cells in header order, element and pattern names sorted, patches sorted by
// original_index.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "patchrank/model.hpp"

namespace patchrank {

enum class IssueKind : std::uint8_t {
  NoFailingTest,
  UnknownTestRef,
  EmptyTestName,
  DuplicateTest,
  BaselineSizeMismatch,
  UnknownInBaseline,
  DuplicatePatchId,
  DuplicateIndex,
  EmptyPatchId,
  MissingGranularity,
  GranularityMismatch,
  EmptyElementName,
  EmptyPatternName,
  RowSizeMismatch,
  UnknownInFullMatrix,
};

std::string_view to_string(IssueKind k);

struct Issue {
  IssueKind kind;
  std::string patch_id;  // empty for dataset-level issues
  std::string detail;

  bool operator==(const Issue &) const = default;
};

// One line per issue: "<Kind> [patch <id>]: <detail>".
std::string describe(const Issue &issue);

// Every invariant of the in-memory model. Empty iff the dataset is valid.
std::vector<Issue> validate_dataset(const BugDataset &ds);

// Parses corpus text. Throws ParseError (malformed line), SchemaError
// (missing or mistyped field) or InvariantError (validate_dataset failed or a
// result cell names a test outside the header). Patches are sorted by
// original_index.
BugDataset parse_corpus(std::string_view text);

// Like parse_corpus but reports invariant violations, including result cells
// that reference unknown tests, as issues instead of throwing. Parse and
// schema errors still throw.
std::vector<Issue> check_corpus(std::string_view text);

std::string serialize_corpus(const BugDataset &ds);

// Throws IoError when the file cannot be read, then as parse_corpus.
BugDataset load_dataset(const std::filesystem::path &path);
void save_dataset(const BugDataset &ds, const std::filesystem::path &path);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

// Simulates a tool that stops testing a patch at its first failure: walking
// tests in canonical order, cells after the first Fail become Unknown.
// Throws AlreadyPartial.
BugDataset derive_partial(const BugDataset &ds);

struct SynthParams {
  std::size_t n_patches = 100;
  std::size_t n_tests = 20;
  std::size_t n_packages = 3;
  std::size_t n_classes = 8;
  std::size_t n_methods = 30;
  std::size_t n_statements = 120;
  std::size_t n_patterns = 10;
  double plausible_rate = 0.02;
  // Probability that a non-plausible patch is high quality.
  double high_rate = 0.2;
  // Distinct modified-statement sets patches are drawn from.
  std::size_t n_site_classes = 20;
  // Upper bound on originally failing tests; the count is drawn per corpus.
  std::size_t max_failing = 3;
  std::string bug_id = "Synth-1";
  std::string tool_id = "synth";
};

// Deterministic in (seed, params) on every platform. Emits a Full matrix
// whose finer element sets refine the coarser ones, with correctness labels on
// every patch (at most one correct). Plausible and high-quality patches favour
// a small group of "fix site" classes. Throws BadParams.
BugDataset generate_synthetic(std::uint64_t seed, const SynthParams &params);

}  // namespace patchrank
