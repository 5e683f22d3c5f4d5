#include "patchrank/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "patchrank/errors.hpp"

namespace patchrank {

using Json = nlohmann::ordered_json;

std::string_view to_string(Target t) {
  return t == Target::Plausible ? "plausible" : "correct";
}

std::optional<Target> parse_target(std::string_view text) {
  if (text == "plausible") return Target::Plausible;
  if (text == "correct") return Target::Correct;
  return std::nullopt;
}

std::optional<std::size_t> first_position(const Schedule &s, Target target) {
  for (const ScheduleStep &step : s.steps) {
    const bool hit = target == Target::Plausible ? step.plausible : step.correct;
    if (hit) return step.step;
  }
  return std::nullopt;
}

double reduction(std::size_t p_baseline, std::size_t p_new) {
  return (static_cast<double>(p_baseline) - static_cast<double>(p_new)) /
         static_cast<double>(p_baseline);
}

long long displacement(std::size_t p_baseline, std::size_t p_new) {
  return static_cast<long long>(p_new) - static_cast<long long>(p_baseline);
}

BugResult make_bug_result(std::string bug_id, std::string tool_id, Target target,
                          std::optional<std::size_t> p_baseline,
                          std::optional<std::size_t> p_new) {
  BugResult r{std::move(bug_id), std::move(tool_id), target, p_baseline, p_new,
              std::nullopt, std::nullopt};
  if (p_baseline && p_new) {
    r.reduction = reduction(*p_baseline, *p_new);
    r.displacement = displacement(*p_baseline, *p_new);
  }
  return r;
}

BugResult compare_schedules(std::string bug_id, std::string tool_id,
                            const Schedule &baseline, const Schedule &prioritized,
                            Target target) {
  return make_bug_result(std::move(bug_id), std::move(tool_id), target,
                         first_position(baseline, target),
                         first_position(prioritized, target));
}

AggregateResult aggregate(std::vector<BugResult> results, std::string scope,
                          Target target) {
  AggregateResult agg;
  agg.scope = std::move(scope);
  agg.target = target;
  long long displacement_sum = 0;
  for (const BugResult &r : results) {
    if (!r.p_baseline || !r.p_new) continue;
    ++agg.included;
    agg.sum_baseline += *r.p_baseline;
    agg.sum_new += *r.p_new;
    const long long d = displacement(*r.p_baseline, *r.p_new);
    displacement_sum += d;
    if (d < 0) {
      ++agg.count_better;
    } else if (d > 0) {
      ++agg.count_worse;
    } else {
      ++agg.count_ties;
    }
  }
  if (agg.sum_baseline > 0) {
    agg.overall_reduction = reduction(agg.sum_baseline, agg.sum_new);
  }
  if (agg.included > 0) {
    agg.avg_displacement =
        static_cast<double>(displacement_sum) / static_cast<double>(agg.included);
  }
  agg.bugs = std::move(results);
  return agg;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "markdown" || text == "md") return ReportFormat::Markdown;
  if (text == "json") return ReportFormat::Json;
  return std::nullopt;
}

std::string format_percent(double ratio) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f%%", ratio * 100.0);
  return buf;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

template <class T>
std::string or_dashes(const std::optional<T> &v) {
  if (!v) return "---";
  if constexpr (std::is_floating_point_v<T>) {
    return format_percent(*v);
  } else {
    return std::to_string(*v);
  }
}

// RFC 4180 quoting for fields that need it.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

constexpr std::string_view kCsvHeader =
    "scope,bug_id,target,p_baseline,p_new,reduction,displacement\n";

void csv_rows(std::ostringstream &os, const AggregateResult &agg) {
  const std::string scope = csv_field(agg.scope);
  const std::string_view target = to_string(agg.target);
  for (const BugResult &r : agg.bugs) {
    os << scope << ',' << csv_field(r.bug_id) << ',' << target << ','
       << or_dashes(r.p_baseline) << ',' << or_dashes(r.p_new) << ','
       << or_dashes(r.reduction) << ',' << or_dashes(r.displacement) << '\n';
  }
  if (!agg.bugs.empty()) {
    os << scope << ",Overall," << target << ',' << agg.sum_baseline << ','
       << agg.sum_new << ',' << or_dashes(agg.overall_reduction) << ','
       << displacement(agg.sum_baseline, agg.sum_new) << '\n';
  }
}

void markdown_table(std::ostringstream &os, const AggregateResult &agg) {
  os << "### " << md_cell(agg.scope) << ": first " << to_string(agg.target)
     << " patch\n\n";
  os << "| Bug | P_baseline | P_new | Reduction | DeltaP |\n";
  os << "|---|---:|---:|---:|---:|\n";
  if (agg.bugs.empty()) return;
  for (const BugResult &r : agg.bugs) {
    os << "| " << md_cell(r.bug_id) << " | " << or_dashes(r.p_baseline) << " | "
       << or_dashes(r.p_new) << " | " << or_dashes(r.reduction) << " | "
       << or_dashes(r.displacement) << " |\n";
  }
  os << "| **Overall** | " << agg.sum_baseline << " | " << agg.sum_new << " | "
     << or_dashes(agg.overall_reduction) << " | "
     << (agg.avg_displacement ? fixed2(*agg.avg_displacement) + " avg" : "---")
     << " |\n\n";
  os << "Included bugs: " << agg.included << "; better: " << agg.count_better
     << "; worse: " << agg.count_worse << "; ties: " << agg.count_ties << "\n";
}

template <class T>
Json opt_json(const std::optional<T> &v) {
  return v ? Json(*v) : Json(nullptr);
}

Json to_json(const AggregateResult &agg) {
  Json j;
  j["scope"] = agg.scope;
  j["target"] = std::string(to_string(agg.target));
  j["bugs"] = Json::array();
  for (const BugResult &r : agg.bugs) {
    Json b;
    b["bug_id"] = r.bug_id;
    b["tool_id"] = r.tool_id;
    b["target"] = std::string(to_string(r.target));
    b["p_baseline"] = opt_json(r.p_baseline);
    b["p_new"] = opt_json(r.p_new);
    b["reduction"] = opt_json(r.reduction);
    b["displacement"] = opt_json(r.displacement);
    j["bugs"].push_back(std::move(b));
  }
  j["included"] = agg.included;
  j["sum_baseline"] = agg.sum_baseline;
  j["sum_new"] = agg.sum_new;
  j["overall_reduction"] = opt_json(agg.overall_reduction);
  j["count_better"] = agg.count_better;
  j["count_worse"] = agg.count_worse;
  j["count_ties"] = agg.count_ties;
  j["avg_displacement"] = opt_json(agg.avg_displacement);
  return j;
}

template <class T>
std::optional<T> opt_from(const Json &j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

Target target_from(const Json &j) {
  const auto t = parse_target(j.get<std::string>());
  if (!t) throw Error("unknown target " + j.dump());
  return *t;
}

}  // namespace

std::string render_report(std::span<const AggregateResult> aggs,
                          ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::Csv:
      os << kCsvHeader;
      for (const AggregateResult &agg : aggs) csv_rows(os, agg);
      return os.str();
    case ReportFormat::Markdown:
      for (std::size_t i = 0; i < aggs.size(); ++i) {
        if (i > 0) os << '\n';
        markdown_table(os, aggs[i]);
      }
      return os.str();
    case ReportFormat::Json: {
      Json arr = Json::array();
      for (const AggregateResult &agg : aggs) arr.push_back(to_json(agg));
      return arr.dump(2) + "\n";
    }
  }
  throw UnknownFormat("report format " + std::to_string(static_cast<int>(format)));
}

std::string render_report(const AggregateResult &agg, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(agg).dump(2) + "\n";
  return render_report(std::span<const AggregateResult>(&agg, 1), format);
}

AggregateResult aggregate_from_json(std::string_view text) {
  const Json j = Json::parse(text.begin(), text.end());
  AggregateResult agg;
  agg.scope = j.at("scope").get<std::string>();
  agg.target = target_from(j.at("target"));
  for (const Json &b : j.at("bugs")) {
    BugResult r;
    r.bug_id = b.at("bug_id").get<std::string>();
    r.tool_id = b.at("tool_id").get<std::string>();
    r.target = target_from(b.at("target"));
    r.p_baseline = opt_from<std::size_t>(b.at("p_baseline"));
    r.p_new = opt_from<std::size_t>(b.at("p_new"));
    r.reduction = opt_from<double>(b.at("reduction"));
    r.displacement = opt_from<long long>(b.at("displacement"));
    agg.bugs.push_back(std::move(r));
  }
  agg.included = j.at("included").get<std::size_t>();
  agg.sum_baseline = j.at("sum_baseline").get<std::size_t>();
  agg.sum_new = j.at("sum_new").get<std::size_t>();
  agg.overall_reduction = opt_from<double>(j.at("overall_reduction"));
  agg.count_better = j.at("count_better").get<std::size_t>();
  agg.count_worse = j.at("count_worse").get<std::size_t>();
  agg.count_ties = j.at("count_ties").get<std::size_t>();
  agg.avg_displacement = opt_from<double>(j.at("avg_displacement"));
  return agg;
}

std::string render_sweep(std::string_view title, std::span<const SweepColumn> columns,
                         ReportFormat format) {
  // Row order: bugs in order of first appearance across columns.
  std::vector<std::string> rows;
  std::vector<std::map<std::string, std::optional<double>>> cells(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const BugResult &r : columns[c].result.bugs) {
      const std::string key = r.tool_id.empty() ? r.bug_id : r.tool_id + "/" + r.bug_id;
      if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
      cells[c][key] = r.reduction;
    }
  }
  auto cell = [&](std::size_t c, const std::string &row) -> std::optional<double> {
    const auto it = cells[c].find(row);
    return it == cells[c].end() ? std::nullopt : it->second;
  };

  std::ostringstream os;
  switch (format) {
    case ReportFormat::Csv:
      os << "bug";
      for (const SweepColumn &col : columns) os << ',' << csv_field(col.label);
      os << '\n';
      for (const std::string &row : rows) {
        os << csv_field(row);
        for (std::size_t c = 0; c < columns.size(); ++c) os << ',' << or_dashes(cell(c, row));
        os << '\n';
      }
      if (!rows.empty()) {
        os << "Overall";
        for (const SweepColumn &col : columns) os << ',' << or_dashes(col.result.overall_reduction);
        os << '\n';
      }
      return os.str();
    case ReportFormat::Markdown:
      os << "### " << md_cell(title) << "\n\n| Bug |";
      for (const SweepColumn &col : columns) os << ' ' << md_cell(col.label) << " |";
      os << "\n|---|";
      for (std::size_t c = 0; c < columns.size(); ++c) os << "---:|";
      os << '\n';
      for (const std::string &row : rows) {
        os << "| " << md_cell(row) << " |";
        for (std::size_t c = 0; c < columns.size(); ++c) os << ' ' << or_dashes(cell(c, row)) << " |";
        os << '\n';
      }
      if (!rows.empty()) {
        os << "| **Overall** |";
        for (const SweepColumn &col : columns) {
          os << ' ' << or_dashes(col.result.overall_reduction) << " |";
        }
        os << '\n';
      }
      return os.str();
    case ReportFormat::Json: {
      Json j;
      j["title"] = std::string(title);
      j["columns"] = Json::array();
      for (const SweepColumn &col : columns) j["columns"].push_back(col.label);
      j["rows"] = Json::array();
      for (const std::string &row : rows) {
        Json r;
        r["bug"] = row;
        r["reductions"] = Json::array();
        for (std::size_t c = 0; c < columns.size(); ++c) r["reductions"].push_back(opt_json(cell(c, row)));
        j["rows"].push_back(std::move(r));
      }
      j["overall"] = Json::array();
      for (const SweepColumn &col : columns) j["overall"].push_back(opt_json(col.result.overall_reduction));
      return j.dump(2) + "\n";
    }
  }
  throw UnknownFormat("report format " + std::to_string(static_cast<int>(format)));
}

}  // namespace patchrank
