#include "patchrank/quality.hpp"

#include <algorithm>

namespace patchrank {

std::string_view to_string(Quality q) {
  return q == Quality::High ? "high" : "low";
}

std::string_view to_string(FixCategory c) {
  switch (c) {
    case FixCategory::CleanFix: return "CleanFix";
    case FixCategory::NoisyFix: return "NoisyFix";
    case FixCategory::NoneFix: return "NoneFix";
    case FixCategory::NoFix: return "NoFix";
  }
  return "?";
}

Quality classify_quality(const PatchRecord &patch,
                         std::span<const std::size_t> failing_indices) {
  for (std::size_t i : failing_indices) {
    if (i < patch.results.size() && patch.results[i] == Outcome::Pass) {
      return Quality::High;
    }
  }
  return Quality::Low;
}

Quality classify_quality(const PatchRecord &patch, const BugDataset &ds) {
  return classify_quality(patch, originally_failing_indices(ds));
}

bool is_plausible(const PatchRecord &patch, const BugDataset &ds) {
  if (patch.results.size() < ds.tests.size()) return false;
  return std::all_of(patch.results.begin(),
                     patch.results.begin() +
                         static_cast<std::ptrdiff_t>(ds.tests.size()),
                     [](Outcome o) { return o == Outcome::Pass; });
}

bool is_correct(const PatchRecord &patch) { return patch.correct.value_or(false); }

FixCategory classify_category(const PatchRecord &patch, const BugDataset &ds) {
  bool improves = false;
  bool compromises = false;
  const std::size_t n =
      std::min({ds.tests.size(), ds.baseline.size(), patch.results.size()});
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome before = ds.baseline[i];
    const Outcome after = patch.results[i];
    if (before == Outcome::Fail && after == Outcome::Pass) improves = true;
    if (before == Outcome::Pass && after == Outcome::Fail) compromises = true;
  }
  if (improves) return compromises ? FixCategory::NoisyFix : FixCategory::CleanFix;
  return compromises ? FixCategory::NoneFix : FixCategory::NoFix;
}

}  // namespace patchrank
