#include <gtest/gtest.h>

#include <json.hpp>

#include "autopatch/error.hpp"
#include "autopatch/process.hpp"
#include "autopatch/report.hpp"
#include "autopatch/text.hpp"
#include "oracles.hpp"

using namespace autopatch;
using nlohmann::json;

namespace {

RunOutcome ok(double t) {
  RunOutcome o;
  o.status = RunStatus::Ok;
  o.per_testcase_times_s = {t};
  o.rep_times_s = {{t}};
  o.mean_s = t;
  o.median_s = t;
  return o;
}

RunOutcome failed(RunStatus s) {
  RunOutcome o;
  o.status = s;
  return o;
}

EvaluationResult result(const std::string& id, PromptMode m, RunOutcome o, std::set<OptimizationType> labels = {}) {
  return {id, m, LexicalScores{50, 0.5, 60}, std::move(o), std::move(labels)};
}

}  // namespace

TEST(Improvement, PublishedFigures) {
  EXPECT_NEAR(improvement(0.4115, 0.3815), 7.3, 0.05);
  EXPECT_NEAR(improvement(0.4115, 0.5238), -27.3, 0.05);
  EXPECT_EQ(improvement(0.4115, 0.3815), 7.3);
  EXPECT_EQ(improvement(0.4115, 0.5238), -27.3);
  EXPECT_EQ(improvement(0.25, 0.25), 0.0);
  EXPECT_FALSE(std::signbit(improvement(0.3, 0.30000001)));
  EXPECT_NEAR(improvement_raw(0.4115, 0.3815), (0.4115 - 0.3815) / 0.4115 * 100, 1e-12);
  for (double b : {0.0, -1.0}) {
    try {
      (void)improvement(b, 0.2);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonpositiveBaseline);
    }
  }
}

TEST(Aggregate, ThreeModesReproduceTable) {
  const EvaluationReport r = aggregate_report({result("a", PromptMode::ZeroShot, ok(0.4115)),
                                               result("a", PromptMode::Naive, ok(0.5238)),
                                               result("a", PromptMode::Context, ok(0.3815))});
  ASSERT_EQ(r.modes.size(), 3u);
  EXPECT_EQ(r.find(PromptMode::ZeroShot)->improvement_pct, 0.0);
  EXPECT_EQ(r.find(PromptMode::Naive)->improvement_pct, -27.3);
  EXPECT_EQ(r.find(PromptMode::Context)->improvement_pct, 7.3);
  EXPECT_FALSE(r.timing_guard.has_value());
}

TEST(Aggregate, EmptyOkIntersectionGuard) {
  const EvaluationReport r = aggregate_report({result("a", PromptMode::ZeroShot, ok(0.1)),
                                               result("a", PromptMode::Context, failed(RunStatus::Timeout)),
                                               result("b", PromptMode::ZeroShot, failed(RunStatus::CompileError)),
                                               result("b", PromptMode::Context, ok(0.2))});
  EXPECT_EQ(r.timing_guard, ErrorCode::NoCommonExecutableSet);
  EXPECT_TRUE(r.common_ids.empty());
  for (const auto& m : r.modes) {
    EXPECT_FALSE(m.avg_time_s.has_value());
    EXPECT_FALSE(m.improvement_pct.has_value());
  }
  EXPECT_EQ(to_json(r)["timing_guard"], "NoCommonExecutableSet");
}

TEST(Aggregate, HandAggregationOnThreeRecords) {
  using OT = OptimizationType;
  // r1: loop + memory, r2: loop, r3: refactoring but fails in naive
  std::vector<EvaluationResult> in{
      result("r1", PromptMode::ZeroShot, ok(0.40), {OT::LoopOptimization, OT::MemoryOptimization}),
      result("r1", PromptMode::Naive, ok(0.50), {OT::LoopOptimization, OT::MemoryOptimization}),
      result("r1", PromptMode::Context, ok(0.30), {OT::LoopOptimization, OT::MemoryOptimization}),
      result("r2", PromptMode::ZeroShot, ok(0.20), {OT::LoopOptimization}),
      result("r2", PromptMode::Naive, ok(0.10), {OT::LoopOptimization}),
      result("r2", PromptMode::Context, ok(0.10), {OT::LoopOptimization}),
      result("r3", PromptMode::ZeroShot, ok(9.0), {OT::CodeRefactoring}),
      result("r3", PromptMode::Naive, failed(RunStatus::WrongOutput), {OT::CodeRefactoring}),
      result("r3", PromptMode::Context, ok(9.0), {OT::CodeRefactoring}),
  };
  const EvaluationReport r = aggregate_report(in);
  EXPECT_EQ(r.common_ids, (std::vector<std::string>{"r1", "r2"}));
  // zero-shot (0.40+0.20)/2 = 0.30, naive 0.30, context 0.20
  EXPECT_NEAR(*r.find(PromptMode::ZeroShot)->avg_time_s, 0.30, 1e-12);
  EXPECT_NEAR(*r.find(PromptMode::Naive)->avg_time_s, 0.30, 1e-12);
  EXPECT_NEAR(*r.find(PromptMode::Context)->avg_time_s, 0.20, 1e-12);
  EXPECT_EQ(r.find(PromptMode::Naive)->improvement_pct, 0.0);
  EXPECT_EQ(r.find(PromptMode::Context)->improvement_pct, 33.3);

  const auto type = [&](OT t) -> const TypeSummary& {
    return *std::find_if(r.per_type.begin(), r.per_type.end(), [&](const TypeSummary& s) { return s.type == t; });
  };
  EXPECT_EQ(r.per_type.size(), 5u);
  EXPECT_EQ(type(OT::LoopOptimization).programs, 2u);
  EXPECT_NEAR(type(OT::LoopOptimization).avg_time_s.at(PromptMode::Context), 0.20, 1e-12);
  EXPECT_EQ(type(OT::MemoryOptimization).programs, 1u);  // r1 counted in both of its rows
  EXPECT_NEAR(type(OT::MemoryOptimization).avg_time_s.at(PromptMode::ZeroShot), 0.40, 1e-12);
  EXPECT_EQ(type(OT::CodeRefactoring).programs, 0u);  // r3 is outside the common set
  EXPECT_TRUE(type(OT::CodeRefactoring).avg_time_s.empty());

  // conservation: status counts sum to the evaluated programs
  for (const auto& m : r.modes) {
    std::size_t total = 0;
    for (const auto& [st, n] : m.status_counts) total += n;
    EXPECT_EQ(total, m.evaluated);
    EXPECT_EQ(m.evaluated, 3u);
  }
  EXPECT_EQ(r.find(PromptMode::Naive)->status_counts.at(RunStatus::WrongOutput), 1u);
}

TEST(Aggregate, ModeMissingForAProgramExcludesIt) {
  const EvaluationReport r = aggregate_report({result("a", PromptMode::ZeroShot, ok(1)),
                                               result("a", PromptMode::Context, ok(0.5)),
                                               result("b", PromptMode::ZeroShot, ok(2))});
  EXPECT_EQ(r.common_ids, (std::vector<std::string>{"a"}));
  EXPECT_EQ(r.find(PromptMode::Context)->improvement_pct, 50.0);
}

TEST(Aggregate, NoZeroShotMeansNoImprovement) {
  const EvaluationReport r = aggregate_report({result("a", PromptMode::Context, ok(1))});
  EXPECT_TRUE(r.find(PromptMode::Context)->avg_time_s.has_value());
  EXPECT_FALSE(r.find(PromptMode::Context)->improvement_pct.has_value());
}

TEST(Aggregate, EmptyInputRejected) {
  try {
    (void)aggregate_report({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Usage);
  }
}

TEST(ReportRender, TextTableAndJson) {
  const EvaluationReport r = aggregate_report({result("a", PromptMode::ZeroShot, ok(0.4115)),
                                               result("a", PromptMode::Naive, ok(0.5238)),
                                               result("a", PromptMode::Context, ok(0.3815))},
                                              json{{"reps", 5}});
  const std::string t = render_text(r);
  EXPECT_NE(t.find("Avg Time (s)"), std::string::npos);
  EXPECT_NE(t.find("-27.3"), std::string::npos);
  EXPECT_NE(t.find("+7.3"), std::string::npos);
  EXPECT_NE(t.find("loop_optimization"), std::string::npos);
  const json j = to_json(r);
  EXPECT_EQ(j["metadata"]["reps"], 5);
  EXPECT_TRUE(j["metadata"].contains("averaging"));
  EXPECT_EQ(j["modes"][2]["improvement_pct"], 7.3);
}

TEST(ReportRender, JsonValidatesAgainstSchema) {
  if (!find_executable("python3") || !run_process({"python3", "-c", "import jsonschema"}).ok()) {
    GTEST_SKIP() << "python3 with jsonschema unavailable";
  }
  TempDir dir;
  const auto schema = oracle::data_dir().parent_path().parent_path() / "docs" / "report.schema.json";
  int n = 0;
  for (const auto& report : {aggregate_report({result("a", PromptMode::ZeroShot, ok(0.4)),
                                               result("a", PromptMode::Context, failed(RunStatus::Crash))}),
                             aggregate_report({result("a", PromptMode::ZeroShot, ok(0.4)),
                                               result("a", PromptMode::Naive, ok(0.3), {OptimizationType::LoopOptimization})})}) {
    const auto path = dir.path() / ("r" + std::to_string(n++) + ".json");
    text::write_file(path, to_json(report).dump(2));
    const auto res = run_process({"python3", "-c",
                                  "import json,sys,jsonschema; jsonschema.validate(json.load(open(sys.argv[2])), "
                                  "json.load(open(sys.argv[1])))",
                                  schema.string(), path.string()});
    EXPECT_TRUE(res.ok()) << res.stderr_data;
  }
}
