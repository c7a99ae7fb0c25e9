#include "autopatch/report.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "autopatch/text.hpp"

namespace autopatch {

using nlohmann::json;

double improvement_raw(double baseline_avg_s, double candidate_avg_s) {
  if (!(baseline_avg_s > 0.0)) throw Error(ErrorCode::NonpositiveBaseline, fmt::format("baseline {}", baseline_avg_s));
  return (baseline_avg_s - candidate_avg_s) / baseline_avg_s * 100.0;
}

double improvement(double baseline_avg_s, double candidate_avg_s) {
  const double r = std::round(improvement_raw(baseline_avg_s, candidate_avg_s) * 10.0) / 10.0;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

const ModeSummary* EvaluationReport::find(PromptMode mode) const noexcept {
  for (const auto& m : modes) {
    if (m.mode == mode) return &m;
  }
  return nullptr;
}

EvaluationReport aggregate_report(std::vector<EvaluationResult> results, json metadata) {
  if (results.empty()) throw Error(ErrorCode::Usage, "no evaluation results");
  std::sort(results.begin(), results.end(), [](const EvaluationResult& a, const EvaluationResult& b) {
    return std::tie(a.target_id, a.mode) < std::tie(b.target_id, b.mode);
  });

  EvaluationReport report;
  report.metadata = std::move(metadata);
  report.metadata["averaging"] = "per program: mean over testcases of the median rep time; then mean over programs";

  std::set<PromptMode> present;
  for (const auto& r : results) present.insert(r.mode);

  // target -> mode -> result
  std::map<std::string, std::map<PromptMode, const EvaluationResult*>> by_target;
  for (const auto& r : results) by_target[r.target_id][r.mode] = &r;

  for (const auto& [id, per_mode] : by_target) {
    bool all_ok = per_mode.size() == present.size();
    for (const auto& [mode, r] : per_mode) all_ok = all_ok && r->outcome.status == RunStatus::Ok;
    if (all_ok) report.common_ids.push_back(id);
  }
  if (report.common_ids.empty()) report.timing_guard = ErrorCode::NoCommonExecutableSet;

  for (PromptMode mode : kAllPromptModes) {
    if (present.count(mode) == 0) continue;
    ModeSummary s;
    s.mode = mode;
    for (RunStatus st : kAllRunStatuses) s.status_counts[st] = 0;
    LexicalScores sum;
    std::size_t scored = 0;
    for (const auto& r : results) {
      if (r.mode != mode) continue;
      ++s.evaluated;
      ++s.status_counts[r.outcome.status];
      if (r.lexical) {
        sum.line_overlap_pct += r.lexical->line_overlap_pct;
        sum.eds += r.lexical->eds;
        sum.token_overlap_pct += r.lexical->token_overlap_pct;
        ++scored;
      }
    }
    if (scored > 0) {
      const auto n = static_cast<double>(scored);
      s.mean_lexical = LexicalScores{sum.line_overlap_pct / n, sum.eds / n, sum.token_overlap_pct / n};
    }
    if (!report.common_ids.empty()) {
      double total = 0.0;
      for (const auto& id : report.common_ids) total += by_target[id][mode]->outcome.mean_s;
      s.avg_time_s = total / static_cast<double>(report.common_ids.size());
    }
    report.modes.push_back(std::move(s));
  }

  if (const ModeSummary* base = report.find(PromptMode::ZeroShot); base != nullptr && base->avg_time_s) {
    const double b = *base->avg_time_s;
    for (auto& s : report.modes) {
      if (s.avg_time_s && b > 0.0) s.improvement_pct = improvement(b, *s.avg_time_s);
    }
  }

  for (OptimizationType type : kAllOptimizationTypes) {
    TypeSummary t;
    t.type = type;
    std::map<PromptMode, double> totals;
    for (const auto& id : report.common_ids) {
      const auto& per_mode = by_target[id];
      if (per_mode.begin()->second->labels.count(type) == 0) continue;
      ++t.programs;
      for (const auto& [mode, r] : per_mode) totals[mode] += r->outcome.mean_s;
    }
    if (t.programs > 0) {
      for (const auto& [mode, total] : totals) t.avg_time_s[mode] = total / static_cast<double>(t.programs);
    }
    report.per_type.push_back(std::move(t));
  }

  report.results = std::move(results);
  return report;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json lexical_json(const LexicalScores& s) {
  return {{"line_overlap_pct", s.line_overlap_pct}, {"eds", s.eds}, {"token_overlap_pct", s.token_overlap_pct}};
}

std::string format_optional(const std::optional<double>& v, const char* pattern) {
  return v ? fmt::format(fmt::runtime(pattern), *v) : std::string("n/a");
}

}  // namespace

json to_json(const EvaluationReport& report) {
  json modes = json::array();
  for (const auto& m : report.modes) {
    json counts = json::object();
    for (const auto& [st, n] : m.status_counts) counts[std::string(to_string(st))] = n;
    modes.push_back({{"mode", to_string(m.mode)},
                     {"evaluated", m.evaluated},
                     {"status_counts", counts},
                     {"mean_lexical", m.mean_lexical ? lexical_json(*m.mean_lexical) : json(nullptr)},
                     {"avg_time_s", optional_number(m.avg_time_s)},
                     {"improvement_pct", optional_number(m.improvement_pct)}});
  }
  json types = json::array();
  for (const auto& t : report.per_type) {
    json times = json::object();
    for (const auto& [mode, v] : t.avg_time_s) times[std::string(to_string(mode))] = v;
    types.push_back({{"type", to_string(t.type)}, {"programs", t.programs}, {"avg_time_s", times}});
  }
  json results = json::array();
  for (const auto& r : report.results) {
    json labels = json::array();
    for (auto l : r.labels) labels.push_back(to_string(l));
    json entry = {{"target_id", r.target_id},
                  {"mode", to_string(r.mode)},
                  {"status", to_string(r.outcome.status)},
                  {"labels", labels},
                  {"lexical", r.lexical ? lexical_json(*r.lexical) : json(nullptr)}};
    if (r.outcome.status == RunStatus::Ok) {
      entry["mean_s"] = r.outcome.mean_s;
      entry["median_s"] = r.outcome.median_s;
      entry["per_testcase_times_s"] = r.outcome.per_testcase_times_s;
    }
    results.push_back(std::move(entry));
  }
  return {{"schema_version", 1},
          {"generated_at", text::utc_timestamp()},
          {"metadata", report.metadata},
          {"modes", modes},
          {"common_executable_set", report.common_ids},
          {"timing_guard", report.timing_guard ? json(std::string(to_string(*report.timing_guard))) : json(nullptr)},
          {"per_type", types},
          {"results", results}};
}

std::string render_text(const EvaluationReport& report) {
  std::ostringstream out;
  out << fmt::format("{:<12} {:>12} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6} {:>13} {:>12} {:>8} {:>6}\n", "Mode",
                     "Avg Time (s)", "Imp (%)", "LO (%)", "EDS", "TO (%)", "Evald", "Ok", "CompileError",
                     "WrongOutput", "Timeout", "Crash");
  for (const auto& m : report.modes) {
    const auto lex = m.mean_lexical;
    out << fmt::format("{:<12} {:>12} {:>8} {:>8} {:>8} {:>8} {:>8} {:>6} {:>13} {:>12} {:>8} {:>6}\n",
                       to_string(m.mode), format_optional(m.avg_time_s, "{:.4f}"),
                       m.improvement_pct ? fmt::format("{:+.1f}", *m.improvement_pct) : std::string("n/a"),
                       format_optional(lex ? std::optional(lex->line_overlap_pct) : std::nullopt, "{:.2f}"),
                       format_optional(lex ? std::optional(lex->eds) : std::nullopt, "{:.4f}"),
                       format_optional(lex ? std::optional(lex->token_overlap_pct) : std::nullopt, "{:.2f}"),
                       m.evaluated, m.status_counts.at(RunStatus::Ok), m.status_counts.at(RunStatus::CompileError),
                       m.status_counts.at(RunStatus::WrongOutput), m.status_counts.at(RunStatus::Timeout),
                       m.status_counts.at(RunStatus::Crash));
  }
  out << fmt::format("\ncommon executable set: {} programs", report.common_ids.size());
  if (report.timing_guard) out << fmt::format(" ({})", to_string(*report.timing_guard));
  out << "\n\n";

  out << fmt::format("{:<28} {:>8}", "Optimization type", "Programs");
  for (const auto& m : report.modes) out << fmt::format(" {:>12}", to_string(m.mode));
  out << '\n';
  for (const auto& t : report.per_type) {
    out << fmt::format("{:<28} {:>8}", to_string(t.type), t.programs);
    for (const auto& m : report.modes) {
      const auto it = t.avg_time_s.find(m.mode);
      out << fmt::format(" {:>12}", it == t.avg_time_s.end() ? std::string("n/a") : fmt::format("{:.4f}", it->second));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace autopatch
