#include "patchrank/model.hpp"

#include <algorithm>
#include <cctype>

#include "patchrank/errors.hpp"

namespace patchrank {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Package: return "package";
    case Granularity::Class: return "class";
    case Granularity::Method: return "method";
    case Granularity::Statement: return "statement";
  }
  return "?";
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  const std::string t = lower(text);
  if (t == "package") return Granularity::Package;
  if (t == "class") return Granularity::Class;
  if (t == "method") return Granularity::Method;
  if (t == "statement" || t == "stmt") return Granularity::Statement;
  return std::nullopt;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  // Wire encoding is exact lowercase.
  if (text == "pass") return Outcome::Pass;
  if (text == "fail") return Outcome::Fail;
  if (text == "unknown") return Outcome::Unknown;
  return std::nullopt;
}

std::string_view to_string(MatrixKind k) {
  return k == MatrixKind::Partial ? "partial" : "full";
}

std::optional<MatrixKind> parse_matrix_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "partial") return MatrixKind::Partial;
  if (t == "full") return MatrixKind::Full;
  return std::nullopt;
}

std::optional<std::size_t> BugDataset::test_index(std::string_view test) const {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (tests[i].name == test) return i;
  }
  return std::nullopt;
}

Outcome BugDataset::outcome(const PatchRecord &patch,
                            std::string_view test) const {
  const auto idx = test_index(test);
  if (!idx || *idx >= patch.results.size()) return Outcome::Unknown;
  return patch.results[*idx];
}

bool BugDataset::has_correctness_labels() const {
  return std::any_of(patches.begin(), patches.end(),
                     [](const PatchRecord &p) { return p.correct.has_value(); });
}

const ElementSet &elements_of(const PatchRecord &patch, Granularity g) {
  static const ElementSet kEmpty;
  const auto it = patch.modified.find(g);
  return it == patch.modified.end() ? kEmpty : it->second;
}

std::vector<std::size_t> originally_failing_indices(const BugDataset &ds) {
  std::vector<std::size_t> out;
  const std::size_t n = std::min(ds.tests.size(), ds.baseline.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.baseline[i] == Outcome::Fail) out.push_back(i);
  }
  if (out.empty()) throw EmptyFailingSet();
  return out;
}

std::vector<TestId> originally_failing(const BugDataset &ds) {
  std::vector<TestId> out;
  for (std::size_t i : originally_failing_indices(ds)) out.push_back(ds.tests[i]);
  return out;
}

}  // namespace patchrank
