#pragma once

// Shared fixtures: the four-patch worked example (three tests, elements
// e1..e4, patterns r1..r3) and helpers to build small datasets by hand.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "patchrank/model.hpp"

namespace patchrank::testing {

inline std::filesystem::path data_dir() { return PATCHRANK_TEST_DATA; }

inline std::vector<Outcome> row(std::string_view cells) {
  std::vector<Outcome> out;
  for (char c : cells) {
    out.push_back(c == 'P' ? Outcome::Pass : c == 'F' ? Outcome::Fail : Outcome::Unknown);
  }
  return out;
}

inline ElementSet elements(Granularity g, std::initializer_list<std::string> names) {
  ElementSet out;
  for (const auto &n : names) out.insert({g, n});
  return out;
}

// Patch with the same names at method granularity and an "s"-prefixed copy at
// statement granularity; one package and one class.
inline PatchRecord make_patch(std::string id, std::size_t index,
                              std::initializer_list<std::string> methods,
                              std::string_view results,
                              std::initializer_list<std::string> patterns = {},
                              std::optional<bool> correct = std::nullopt) {
  PatchRecord p;
  p.patch_id = std::move(id);
  p.original_index = index;
  p.modified[Granularity::Package] = elements(Granularity::Package, {"org.example"});
  p.modified[Granularity::Class] = elements(Granularity::Class, {"org.example.Foo"});
  p.modified[Granularity::Method] = elements(Granularity::Method, methods);
  ElementSet stmts;
  for (const auto &m : methods) stmts.insert({Granularity::Statement, "s" + m.substr(1)});
  p.modified[Granularity::Statement] = std::move(stmts);
  for (const auto &r : patterns) p.patterns.insert({r});
  p.results = row(results);
  p.correct = correct;
  return p;
}

inline BugDataset worked_example(MatrixKind kind) {
  BugDataset ds;
  ds.bug_id = "Example-1";
  ds.tool_id = "example";
  ds.tests = {{"t1"}, {"t2"}, {"t3"}};
  ds.baseline = row("FPF");
  ds.matrix_kind = kind;
  const bool full = kind == MatrixKind::Full;
  ds.patches.push_back(make_patch("p1", 0, {"e1", "e2", "e3"}, full ? "FFF" : "F??", {"r1"}, false));
  ds.patches.push_back(make_patch("p2", 1, {"e1", "e2", "e3", "e4"}, full ? "FFF" : "F??", {"r2"}, false));
  ds.patches.push_back(make_patch("p3", 2, {"e2", "e3"}, full ? "PFP" : "PF?", {"r3"}, false));
  ds.patches.push_back(make_patch("p4", 3, {"e1"}, "PPP", {"r2"}, true));
  return ds;
}

}  // namespace patchrank::testing
