#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace patchrank {

// Accumulated overlap with validated patches. ef/nf: matching/differing
// elements against high-quality patches; ep/np: against low-quality ones.
struct SimilarityTuple {
  std::uint64_t ef = 1;
  std::uint64_t nf = 1;
  std::uint64_t ep = 1;
  std::uint64_t np = 1;

  static constexpr SimilarityTuple initial() { return {1, 1, 1, 1}; }
  bool operator==(const SimilarityTuple &) const = default;
};

enum class FormulaId : std::uint8_t {
  Tarantula,
  Ochiai,
  Ochiai2,
  Op2,
  SBI,
  Jaccard,
  Kulczynski,
  Dstar2,
};

inline constexpr std::array<FormulaId, 8> kAllFormulas = {
    FormulaId::Tarantula, FormulaId::Ochiai,  FormulaId::Ochiai2,
    FormulaId::Op2,       FormulaId::SBI,     FormulaId::Jaccard,
    FormulaId::Kulczynski, FormulaId::Dstar2};

// Canonical spelling, e.g. "Ochiai2", "Dstar2".
std::string_view to_string(FormulaId f);
// Case-insensitive match against the canonical spellings.
std::optional<FormulaId> parse_formula(std::string_view text);

// Priority of a patch with tuple `t`. Finite for every input: a zero
// denominator yields 0. Throws UnknownFormula for values outside the enum.
double score(FormulaId f, const SimilarityTuple &t);

// Relative tolerance under which two scores are treated as tied, so that
// algebraically equal scores computed through different roundings
// (e.g. 1/sqrt(2) vs 2/sqrt(8)) fall back to the original-order tie-break.
inline constexpr double kScoreTieTolerance = 1e-12;

bool scores_tied(double a, double b);

}  // namespace patchrank
