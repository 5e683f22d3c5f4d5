#include "patchrank/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "patchrank/errors.hpp"

namespace patchrank {

using Json = nlohmann::ordered_json;

std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::NoFailingTest: return "NoFailingTest";
    case IssueKind::UnknownTestRef: return "UnknownTestRef";
    case IssueKind::EmptyTestName: return "EmptyTestName";
    case IssueKind::DuplicateTest: return "DuplicateTest";
    case IssueKind::BaselineSizeMismatch: return "BaselineSizeMismatch";
    case IssueKind::UnknownInBaseline: return "UnknownInBaseline";
    case IssueKind::DuplicatePatchId: return "DuplicatePatchId";
    case IssueKind::DuplicateIndex: return "DuplicateIndex";
    case IssueKind::EmptyPatchId: return "EmptyPatchId";
    case IssueKind::MissingGranularity: return "MissingGranularity";
    case IssueKind::GranularityMismatch: return "GranularityMismatch";
    case IssueKind::EmptyElementName: return "EmptyElementName";
    case IssueKind::EmptyPatternName: return "EmptyPatternName";
    case IssueKind::RowSizeMismatch: return "RowSizeMismatch";
    case IssueKind::UnknownInFullMatrix: return "UnknownInFullMatrix";
  }
  return "?";
}

std::string describe(const Issue &issue) {
  std::string out(to_string(issue.kind));
  if (!issue.patch_id.empty()) out += " [patch " + issue.patch_id + "]";
  if (!issue.detail.empty()) out += ": " + issue.detail;
  return out;
}

std::vector<Issue> validate_dataset(const BugDataset &ds) {
  std::vector<Issue> issues;
  auto add = [&](IssueKind k, std::string patch, std::string detail) {
    issues.push_back({k, std::move(patch), std::move(detail)});
  };

  std::unordered_set<std::string> seen_tests;
  for (const TestId &t : ds.tests) {
    if (t.name.empty()) add(IssueKind::EmptyTestName, "", "");
    if (!seen_tests.insert(t.name).second) {
      add(IssueKind::DuplicateTest, "", t.name);
    }
  }

  if (ds.baseline.size() != ds.tests.size()) {
    add(IssueKind::BaselineSizeMismatch, "",
        std::to_string(ds.baseline.size()) + " cells for " +
            std::to_string(ds.tests.size()) + " tests");
  }
  bool any_fail = false;
  for (std::size_t i = 0; i < ds.baseline.size(); ++i) {
    if (ds.baseline[i] == Outcome::Fail) any_fail = true;
    if (ds.baseline[i] == Outcome::Unknown) {
      add(IssueKind::UnknownInBaseline, "",
          i < ds.tests.size() ? ds.tests[i].name : std::to_string(i));
    }
  }
  if (!any_fail) add(IssueKind::NoFailingTest, "", "");

  std::unordered_set<std::string> seen_ids;
  std::unordered_set<std::size_t> seen_indices;
  for (const PatchRecord &p : ds.patches) {
    const std::string &id = p.patch_id;
    if (id.empty()) add(IssueKind::EmptyPatchId, "", "index " + std::to_string(p.original_index));
    if (!seen_ids.insert(id).second) add(IssueKind::DuplicatePatchId, id, "");
    if (!seen_indices.insert(p.original_index).second) {
      add(IssueKind::DuplicateIndex, id, std::to_string(p.original_index));
    }
    for (Granularity g : kAllGranularities) {
      const auto it = p.modified.find(g);
      if (it == p.modified.end()) {
        add(IssueKind::MissingGranularity, id, std::string(to_string(g)));
        continue;
      }
      for (const ElementId &e : it->second) {
        if (e.granularity != g) {
          add(IssueKind::GranularityMismatch, id,
              e.name + " is " + std::string(to_string(e.granularity)) +
                  " under " + std::string(to_string(g)));
        }
        if (e.name.empty()) add(IssueKind::EmptyElementName, id, std::string(to_string(g)));
      }
    }
    for (const PatternId &r : p.patterns) {
      if (r.name.empty()) add(IssueKind::EmptyPatternName, id, "");
    }
    if (p.results.size() != ds.tests.size()) {
      add(IssueKind::RowSizeMismatch, id,
          std::to_string(p.results.size()) + " cells for " +
              std::to_string(ds.tests.size()) + " tests");
    }
    if (ds.matrix_kind == MatrixKind::Full) {
      for (std::size_t i = 0; i < p.results.size(); ++i) {
        if (p.results[i] == Outcome::Unknown) {
          add(IssueKind::UnknownInFullMatrix, id,
              i < ds.tests.size() ? ds.tests[i].name : std::to_string(i));
          break;
        }
      }
    }
  }
  return issues;
}

namespace {

struct LineContext {
  std::size_t line;
};

const Json &require(const Json &obj, const char *field, LineContext ctx) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(ctx.line, field, "missing");
  return *it;
}

std::string require_string(const Json &obj, const char *field, LineContext ctx) {
  const Json &v = require(obj, field, ctx);
  if (!v.is_string()) throw SchemaError(ctx.line, field, "expected a string");
  return v.get<std::string>();
}

void reject_unknown_fields(const Json &obj,
                           std::initializer_list<std::string_view> allowed,
                           LineContext ctx) {
  for (const auto &[key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(ctx.line, key, "unknown field");
    }
  }
}

Outcome outcome_from(const Json &v, const std::string &field, LineContext ctx) {
  if (!v.is_string()) throw SchemaError(ctx.line, field, "expected an outcome string");
  const auto o = parse_outcome(v.get<std::string>());
  if (!o) {
    throw SchemaError(ctx.line, field,
                      "expected \"pass\", \"fail\" or \"unknown\", got " + v.dump());
  }
  return *o;
}

// Dense row aligned with `index`; cells for tests outside it are reported.
std::vector<Outcome> parse_row(const Json &obj, const char *field,
                               const std::unordered_map<std::string, std::size_t> &index,
                               const std::string &patch_id, LineContext ctx,
                               std::vector<Issue> &issues) {
  if (!obj.is_object()) throw SchemaError(ctx.line, field, "expected an object");
  std::vector<Outcome> row(index.size(), Outcome::Unknown);
  for (const auto &[test, value] : obj.items()) {
    const Outcome o = outcome_from(value, std::string(field) + "." + test, ctx);
    const auto it = index.find(test);
    if (it == index.end()) {
      issues.push_back({IssueKind::UnknownTestRef, patch_id, test});
      continue;
    }
    row[it->second] = o;
  }
  return row;
}

Json parse_line(std::string_view text, std::size_t line) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error &e) {
    throw ParseError(line, e.what());
  }
  if (!j.is_object()) throw ParseError(line, "expected a JSON object");
  return j;
}

BugDataset parse_impl(std::string_view text, std::vector<Issue> &issues) {
  BugDataset ds;
  std::unordered_map<std::string, std::size_t> test_index;
  bool have_header = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }

    const LineContext ctx{line_no};
    const Json j = parse_line(line, line_no);

    if (!have_header) {
      reject_unknown_fields(j, {"bug_id", "tool_id", "tests", "baseline", "matrix_kind"}, ctx);
      ds.bug_id = require_string(j, "bug_id", ctx);
      ds.tool_id = require_string(j, "tool_id", ctx);
      const Json &tests = require(j, "tests", ctx);
      if (!tests.is_array()) throw SchemaError(line_no, "tests", "expected an array");
      for (const Json &t : tests) {
        if (!t.is_string()) throw SchemaError(line_no, "tests", "expected test names");
        ds.tests.push_back({t.get<std::string>()});
        test_index.emplace(ds.tests.back().name, ds.tests.size() - 1);
      }
      ds.baseline = parse_row(require(j, "baseline", ctx), "baseline", test_index,
                              "", ctx, issues);
      const std::string kind = require_string(j, "matrix_kind", ctx);
      const auto mk = parse_matrix_kind(kind);
      if (!mk || (kind != "partial" && kind != "full")) {
        throw SchemaError(line_no, "matrix_kind", "expected \"partial\" or \"full\"");
      }
      ds.matrix_kind = *mk;
      have_header = true;
      continue;
    }

    reject_unknown_fields(j, {"patch_id", "original_index", "modified", "patterns",
                              "results", "correct"},
                          ctx);
    PatchRecord p;
    p.patch_id = require_string(j, "patch_id", ctx);
    const Json &idx = require(j, "original_index", ctx);
    if (!idx.is_number_unsigned() && !(idx.is_number_integer() && idx.get<long long>() >= 0)) {
      throw SchemaError(line_no, "original_index", "expected a non-negative integer");
    }
    p.original_index = idx.get<std::size_t>();

    const Json &modified = require(j, "modified", ctx);
    if (!modified.is_object()) throw SchemaError(line_no, "modified", "expected an object");
    for (const auto &[key, value] : modified.items()) {
      const auto g = parse_granularity(key);
      if (!g || key != to_string(*g)) {
        throw SchemaError(line_no, "modified." + key, "unknown granularity");
      }
      if (!value.is_array()) {
        throw SchemaError(line_no, "modified." + key, "expected an array");
      }
      ElementSet &set = p.modified[*g];
      for (const Json &e : value) {
        if (!e.is_string()) {
          throw SchemaError(line_no, "modified." + key, "expected element names");
        }
        set.insert({*g, e.get<std::string>()});
      }
    }

    if (const auto it = j.find("patterns"); it != j.end()) {
      if (!it->is_array()) throw SchemaError(line_no, "patterns", "expected an array");
      for (const Json &r : *it) {
        if (!r.is_string()) throw SchemaError(line_no, "patterns", "expected pattern names");
        p.patterns.insert({r.get<std::string>()});
      }
    }

    p.results = parse_row(require(j, "results", ctx), "results", test_index,
                          p.patch_id, ctx, issues);

    if (const auto it = j.find("correct"); it != j.end() && !it->is_null()) {
      if (!it->is_boolean()) throw SchemaError(line_no, "correct", "expected a boolean");
      p.correct = it->get<bool>();
    }
    ds.patches.push_back(std::move(p));
  }

  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, "missing header line");

  std::stable_sort(ds.patches.begin(), ds.patches.end(),
                   [](const PatchRecord &a, const PatchRecord &b) {
                     return a.original_index < b.original_index;
                   });
  auto more = validate_dataset(ds);
  issues.insert(issues.end(), more.begin(), more.end());
  return ds;
}

}  // namespace

BugDataset parse_corpus(std::string_view text) {
  std::vector<Issue> issues;
  BugDataset ds = parse_impl(text, issues);
  if (!issues.empty()) {
    std::string msg = std::to_string(issues.size()) + " invariant violation(s): ";
    msg += describe(issues.front());
    throw InvariantError(msg);
  }
  return ds;
}

std::vector<Issue> check_corpus(std::string_view text) {
  std::vector<Issue> issues;
  parse_impl(text, issues);
  return issues;
}

std::string serialize_corpus(const BugDataset &ds) {
  std::string out;
  Json header;
  header["bug_id"] = ds.bug_id;
  header["tool_id"] = ds.tool_id;
  header["tests"] = Json::array();
  for (const TestId &t : ds.tests) header["tests"].push_back(t.name);
  header["baseline"] = Json::object();
  for (std::size_t i = 0; i < ds.tests.size() && i < ds.baseline.size(); ++i) {
    header["baseline"][ds.tests[i].name] = std::string(to_string(ds.baseline[i]));
  }
  header["matrix_kind"] = std::string(to_string(ds.matrix_kind));
  out += header.dump();
  out += '\n';

  std::vector<const PatchRecord *> sorted;
  for (const PatchRecord &p : ds.patches) sorted.push_back(&p);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto *a, const auto *b) {
    return a->original_index < b->original_index;
  });

  for (const PatchRecord *p : sorted) {
    Json j;
    j["patch_id"] = p->patch_id;
    j["original_index"] = p->original_index;
    Json modified = Json::object();
    for (Granularity g : kAllGranularities) {
      Json names = Json::array();
      for (const ElementId &e : elements_of(*p, g)) names.push_back(e.name);
      modified[std::string(to_string(g))] = std::move(names);
    }
    j["modified"] = std::move(modified);
    j["patterns"] = Json::array();
    for (const PatternId &r : p->patterns) j["patterns"].push_back(r.name);
    j["results"] = Json::object();
    for (std::size_t i = 0; i < ds.tests.size() && i < p->results.size(); ++i) {
      j["results"][ds.tests[i].name] = std::string(to_string(p->results[i]));
    }
    if (p->correct) j["correct"] = *p->correct;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

BugDataset load_dataset(const std::filesystem::path &path) {
  return parse_corpus(read_file(path));
}

void save_dataset(const BugDataset &ds, const std::filesystem::path &path) {
  write_file(path, serialize_corpus(ds));
}

BugDataset derive_partial(const BugDataset &ds) {
  if (ds.matrix_kind == MatrixKind::Partial) throw AlreadyPartial();
  BugDataset out = ds;
  out.matrix_kind = MatrixKind::Partial;
  for (PatchRecord &p : out.patches) {
    const auto first_fail = std::find(p.results.begin(), p.results.end(), Outcome::Fail);
    if (first_fail != p.results.end()) {
      std::fill(first_fail + 1, p.results.end(), Outcome::Unknown);
    }
  }
  return out;
}

namespace {

// std:: distributions are implementation-defined; draws are built directly
// from the engine output so corpora match across standard libraries.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  // `k` distinct values from [0, n), in draw order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    k = std::min(k, n);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below(n - i)]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

BugDataset generate_synthetic(std::uint64_t seed, const SynthParams &params) {
  if (params.n_patches == 0 || params.n_tests == 0 || params.n_packages == 0 ||
      params.n_classes == 0 || params.n_methods == 0 || params.n_statements == 0 ||
      params.n_site_classes == 0 || params.max_failing == 0) {
    throw BadParams("counts must be positive");
  }
  if (!(params.plausible_rate >= 0.0 && params.plausible_rate <= 1.0) ||
      !(params.high_rate >= 0.0 && params.high_rate <= 1.0)) {
    throw BadParams("rates must lie in [0, 1]");
  }

  SynthRng rng(seed);
  BugDataset ds;
  ds.bug_id = params.bug_id;
  ds.tool_id = params.tool_id;
  ds.matrix_kind = MatrixKind::Full;

  for (std::size_t i = 0; i < params.n_tests; ++i) {
    ds.tests.push_back({"SynthTest::t" + std::to_string(i)});
  }
  ds.baseline.assign(params.n_tests, Outcome::Pass);
  const std::size_t n_failing =
      1 + rng.below(std::min(params.max_failing, params.n_tests));
  std::vector<std::size_t> failing = rng.sample(params.n_tests, n_failing);
  std::sort(failing.begin(), failing.end());
  for (std::size_t i : failing) ds.baseline[i] = Outcome::Fail;
  std::vector<std::size_t> passing;
  for (std::size_t i = 0; i < params.n_tests; ++i) {
    if (ds.baseline[i] == Outcome::Pass) passing.push_back(i);
  }

  // Element hierarchy: statement -> method -> class -> package.
  auto package_name = [&](std::size_t k) { return "org.synth.p" + std::to_string(k); };
  auto class_name = [&](std::size_t c) {
    return package_name(c % params.n_packages) + ".C" + std::to_string(c);
  };
  auto method_name = [&](std::size_t m) {
    return class_name(m % params.n_classes) + ".m" + std::to_string(m) + "()";
  };
  auto statement_name = [&](std::size_t s) {
    return method_name(s % params.n_methods) + ":" + std::to_string(s);
  };

  struct Site {
    std::vector<std::size_t> statements;
  };
  std::vector<Site> sites(params.n_site_classes);
  for (Site &site : sites) {
    site.statements = rng.sample(params.n_statements, 1 + rng.below(3));
  }
  const std::size_t n_fix_sites = std::max<std::size_t>(1, params.n_site_classes / 10);

  const bool can_be_noisy_high = params.n_tests > 1;
  std::vector<std::size_t> plausible_positions;
  for (std::size_t i = 0; i < params.n_patches; ++i) {
    PatchRecord p;
    p.patch_id = "p" + std::to_string(i);
    p.original_index = i;

    enum class Kind { Plausible, High, Low } kind = Kind::Low;
    if (rng.chance(params.plausible_rate)) {
      kind = Kind::Plausible;
    } else if (rng.chance(params.high_rate) && can_be_noisy_high) {
      kind = Kind::High;
    }

    const bool near_fix = kind != Kind::Low && rng.chance(0.8);
    const Site &site = sites[near_fix ? rng.below(n_fix_sites) : rng.below(sites.size())];
    for (std::size_t s : site.statements) {
      const std::size_t m = s % params.n_methods;
      const std::size_t c = m % params.n_classes;
      p.modified[Granularity::Statement].insert({Granularity::Statement, statement_name(s)});
      p.modified[Granularity::Method].insert({Granularity::Method, method_name(m)});
      p.modified[Granularity::Class].insert({Granularity::Class, class_name(c)});
      p.modified[Granularity::Package].insert(
          {Granularity::Package, package_name(c % params.n_packages)});
    }
    if (params.n_patterns > 0) {
      for (std::size_t r : rng.sample(params.n_patterns, 1 + rng.below(2))) {
        p.patterns.insert({"pattern" + std::to_string(r)});
      }
    }

    p.results.assign(params.n_tests, Outcome::Pass);
    switch (kind) {
      case Kind::Plausible:
        plausible_positions.push_back(i);
        break;
      case Kind::High: {
        const std::size_t keep = failing[rng.below(failing.size())];
        for (std::size_t t : failing) {
          if (t != keep && rng.chance(0.5)) p.results[t] = Outcome::Fail;
        }
        for (std::size_t t : passing) {
          if (rng.chance(0.15)) p.results[t] = Outcome::Fail;
        }
        if (std::find(p.results.begin(), p.results.end(), Outcome::Fail) ==
            p.results.end()) {
          if (!passing.empty()) {
            p.results[passing[rng.below(passing.size())]] = Outcome::Fail;
          } else {
            std::vector<std::size_t> others;
            for (std::size_t t : failing) {
              if (t != keep) others.push_back(t);
            }
            p.results[others[rng.below(others.size())]] = Outcome::Fail;
          }
        }
        break;
      }
      case Kind::Low:
        for (std::size_t t : failing) p.results[t] = Outcome::Fail;
        for (std::size_t t : passing) {
          if (rng.chance(0.15)) p.results[t] = Outcome::Fail;
        }
        break;
    }
    p.correct = false;
    ds.patches.push_back(std::move(p));
  }

  for (PatchRecord &p : ds.patches) {
    for (Granularity g : kAllGranularities) p.modified[g];
  }
  if (!plausible_positions.empty()) {
    ds.patches[plausible_positions[rng.below(plausible_positions.size())]].correct = true;
  }
  return ds;
}

}  // namespace patchrank
