#pragma once

// Data model for recorded patch pools: tests, program elements, fix patterns,
// per-patch validation rows and the buggy baseline row.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace patchrank {

enum class Granularity : std::uint8_t { Package, Class, Method, Statement };

inline constexpr std::array<Granularity, 4> kAllGranularities = {
    Granularity::Package, Granularity::Class, Granularity::Method,
    Granularity::Statement};

std::string_view to_string(Granularity g);
// Case-insensitive; accepts "stmt" as an alias for "statement".
std::optional<Granularity> parse_granularity(std::string_view text);

enum class Outcome : std::uint8_t { Pass, Fail, Unknown };

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view text);

enum class MatrixKind : std::uint8_t { Partial, Full };

std::string_view to_string(MatrixKind k);
std::optional<MatrixKind> parse_matrix_kind(std::string_view text);

struct TestId {
  std::string name;
  auto operator<=>(const TestId &) const = default;
};

struct ElementId {
  Granularity granularity = Granularity::Method;
  std::string name;
  auto operator<=>(const ElementId &) const = default;
};

struct PatternId {
  std::string name;
  auto operator<=>(const PatternId &) const = default;
};

using ElementSet = std::set<ElementId>;
using PatternSet = std::set<PatternId>;

struct PatchRecord {
  std::string patch_id;
  // Position in the tool's own validation order; also the tie-break key.
  std::size_t original_index = 0;
  std::map<Granularity, ElementSet> modified;
  PatternSet patterns;
  // Dense row aligned with BugDataset::tests.
  std::vector<Outcome> results;
  std::optional<bool> correct;

  bool operator==(const PatchRecord &) const = default;
};

struct BugDataset {
  std::string bug_id;
  std::string tool_id;
  // Canonical order; also the truncation order when deriving partial rows.
  std::vector<TestId> tests;
  std::vector<Outcome> baseline;
  std::vector<PatchRecord> patches;
  MatrixKind matrix_kind = MatrixKind::Full;

  bool operator==(const BugDataset &) const = default;

  // Index of `test` in `tests`, or nullopt. Linear scan.
  std::optional<std::size_t> test_index(std::string_view test) const;
  // Cell lookup by test name; Unknown when the row is short or the test is
  // not part of the dataset.
  Outcome outcome(const PatchRecord &patch, std::string_view test) const;
  bool has_correctness_labels() const;
};

// Modified elements of `patch` at granularity `g`. Empty when the patch
// touches nothing at that level or the map lacks the key.
const ElementSet &elements_of(const PatchRecord &patch, Granularity g);

// Tests failing on the buggy baseline, in canonical order.
// Throws EmptyFailingSet when there are none.
std::vector<TestId> originally_failing(const BugDataset &ds);
// Same set as positions into BugDataset::tests.
std::vector<std::size_t> originally_failing_indices(const BugDataset &ds);

}  // namespace patchrank
