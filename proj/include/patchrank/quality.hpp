#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "patchrank/model.hpp"

namespace patchrank {

enum class Quality : std::uint8_t { High, Low };

// CleanFix: some originally failing test now passes, no originally passing
// test fails. NoisyFix: improves and regresses. NoneFix: regresses only.
// NoFix: neither. Unknown cells count as neither pass nor fail.
enum class FixCategory : std::uint8_t { CleanFix, NoisyFix, NoneFix, NoFix };

std::string_view to_string(Quality q);
std::string_view to_string(FixCategory c);

// High iff some originally failing test passes on the patch. Unknown and Fail
// both count as "not pass". The number of newly passing tests is ignored.
Quality classify_quality(const PatchRecord &patch, const BugDataset &ds);
// Variant for hot loops with the failing set precomputed.
Quality classify_quality(const PatchRecord &patch,
                         std::span<const std::size_t> failing_indices);

// Every test of the dataset passes. A row with any Unknown is not plausible.
bool is_plausible(const PatchRecord &patch, const BugDataset &ds);

// The external correctness label; false when absent.
bool is_correct(const PatchRecord &patch);

FixCategory classify_category(const PatchRecord &patch, const BugDataset &ds);

}  // namespace patchrank
