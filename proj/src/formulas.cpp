#include "patchrank/formulas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "patchrank/errors.hpp"

namespace patchrank {

std::string_view to_string(FormulaId f) {
  switch (f) {
    case FormulaId::Tarantula: return "Tarantula";
    case FormulaId::Ochiai: return "Ochiai";
    case FormulaId::Ochiai2: return "Ochiai2";
    case FormulaId::Op2: return "Op2";
    case FormulaId::SBI: return "SBI";
    case FormulaId::Jaccard: return "Jaccard";
    case FormulaId::Kulczynski: return "Kulczynski";
    case FormulaId::Dstar2: return "Dstar2";
  }
  throw UnknownFormula("formula id " + std::to_string(static_cast<int>(f)));
}

std::optional<FormulaId> parse_formula(std::string_view text) {
  auto iequals = [](std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return std::tolower(static_cast<unsigned char>(x)) ==
                    std::tolower(static_cast<unsigned char>(y));
           });
  };
  for (FormulaId f : kAllFormulas) {
    if (iequals(text, to_string(f))) return f;
  }
  return std::nullopt;
}

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

double score(FormulaId f, const SimilarityTuple &t) {
  const auto ef = static_cast<double>(t.ef);
  const auto nf = static_cast<double>(t.nf);
  const auto ep = static_cast<double>(t.ep);
  const auto np = static_cast<double>(t.np);

  switch (f) {
    case FormulaId::Tarantula: {
      if (ef + nf == 0.0 || ep + np == 0.0) return 0.0;
      const double fail_ratio = ef / (ef + nf);
      const double pass_ratio = ep / (ep + np);
      return ratio(fail_ratio, fail_ratio + pass_ratio);
    }
    case FormulaId::Ochiai:
      if (t.ef == 0) return 0.0;
      return ratio(ef, std::sqrt((ef + nf) * (ef + ep)));
    case FormulaId::Ochiai2:
      if (t.ef == 0) return 0.0;
      return ratio(ef * np,
                   std::sqrt((ef + ep) * (nf + np) * (ef + nf) * (ep + np)));
    case FormulaId::Op2:
      return ef - ep / (ep + np + 1.0);
    case FormulaId::SBI:
      return ratio(ef, ef + ep);
    case FormulaId::Jaccard:
      return ratio(ef, ef + nf + ep);
    case FormulaId::Kulczynski:
      return ratio(ef, nf + ep);
    case FormulaId::Dstar2:
      if (t.ef == 0) return 0.0;
      return ratio(ef * ef, ep + nf);
  }
  throw UnknownFormula("formula id " + std::to_string(static_cast<int>(f)));
}

bool scores_tied(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= kScoreTieTolerance * scale;
}

}  // namespace patchrank
