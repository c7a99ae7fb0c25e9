#include <gtest/gtest.h>

#include <algorithm>

#include "autopatch/error.hpp"
#include "autopatch/harness.hpp"

using namespace autopatch;

namespace {

const char* kEcho = R"(#include <iostream>
int main() { long a, b; std::cin >> a >> b; std::cout << a + b << "\n"; })";

const char* kSleep50 = R"(#include <chrono>
#include <iostream>
#include <thread>
int main() { std::this_thread::sleep_for(std::chrono::milliseconds(50)); std::cout << "done\n"; })";

const char* kWrong = R"(#include <iostream>
int main() { std::cout << "wrong\n"; })";

const char* kSpin = R"(int main() { volatile unsigned long x = 0; for (;;) x++; })";

const char* kCrash = R"(#include <cstdlib>
int main() { std::abort(); })";

const char* kExit3 = R"(int main() { return 3; })";

std::vector<TestCase> sum_cases() { return {{"1 2\n", "3\n"}, {"10 -4", "6"}, {"0 0\n", "0  \n\n"}}; }

ToolchainConfig toolchain() { return ToolchainConfig{}; }

}  // namespace

TEST(Compile, MinimalProgramAndDeterminism) {
  const CompiledProgram a = compile_program("int main() { return 0; }", toolchain());
  const CompiledProgram b = compile_program("int main() { return 0; }", toolchain());
  EXPECT_TRUE(std::filesystem::exists(a.binary));
  EXPECT_TRUE(std::filesystem::exists(b.binary));
  EXPECT_EQ(run_process({a.binary.string()}).exit_code, run_process({b.binary.string()}).exit_code);
}

TEST(Compile, BinaryLivesWithItsCopies) {
  std::filesystem::path p;
  {
    CompiledProgram outer;
    {
      const CompiledProgram inner = compile_program("int main() {}", toolchain());
      outer = inner;
      p = inner.binary;
    }
    EXPECT_TRUE(std::filesystem::exists(p));
  }
  EXPECT_FALSE(std::filesystem::exists(p));
}

TEST(Compile, SyntaxErrorCarriesDiagnostic) {
  try {
    (void)compile_program("int main() { return  }", toolchain());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CompileError);
    EXPECT_NE(e.detail().find("error"), std::string::npos) << e.detail();
  }
}

TEST(Compile, MissingCompiler) {
  ToolchainConfig t;
  t.compiler = "/no/such/g++";
  try {
    (void)compile_program("int main() {}", t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CompilerNotFound);
  }
}

TEST(Measure, HappyPath) {
  const CompiledProgram p = compile_program(kEcho, toolchain());
  const RunOutcome o = measure_execution(p.binary, sum_cases(), 5, 10.0);
  ASSERT_EQ(o.status, RunStatus::Ok) << o.detail;
  EXPECT_LT(o.median_s, 10.0);
  ASSERT_EQ(o.per_testcase_times_s.size(), 3u);
  ASSERT_EQ(o.rep_times_s.size(), 3u);
  double sum = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_EQ(o.rep_times_s[t].size(), 5u);  // warmup not kept
    const auto [lo, hi] = std::minmax_element(o.rep_times_s[t].begin(), o.rep_times_s[t].end());
    EXPECT_LE(*lo, o.per_testcase_times_s[t]);
    EXPECT_LE(o.per_testcase_times_s[t], *hi);
    EXPECT_EQ(o.per_testcase_times_s[t], median(o.rep_times_s[t]));
    sum += o.per_testcase_times_s[t];
  }
  EXPECT_DOUBLE_EQ(o.mean_s, sum / 3);
}

TEST(Measure, SleepingProgramTimedByWallClock) {
  const CompiledProgram p = compile_program(kSleep50, toolchain());
  const RunOutcome o = measure_execution(p.binary, {{"", "done"}}, 5, 2.0);
  ASSERT_EQ(o.status, RunStatus::Ok) << o.detail;
  EXPECT_GE(o.median_s, 0.045);
  EXPECT_LE(o.median_s, 0.5);
}

TEST(Measure, FailureStatuses) {
  const auto status = [](const char* code, double timeout) {
    const CompiledProgram p = compile_program(code, ToolchainConfig{});
    const RunOutcome o = measure_execution(p.binary, {{"", "done\n"}}, 2, timeout);
    EXPECT_TRUE(o.per_testcase_times_s.empty());
    EXPECT_TRUE(o.rep_times_s.empty());
    return o.status;
  };
  EXPECT_EQ(status(kWrong, 5.0), RunStatus::WrongOutput);
  EXPECT_EQ(status(kCrash, 5.0), RunStatus::Crash);
  EXPECT_EQ(status(kExit3, 5.0), RunStatus::Crash);
  EXPECT_EQ(status(kSpin, 0.5), RunStatus::Timeout);
}

TEST(Measure, Preconditions) {
  const CompiledProgram p = compile_program(kEcho, toolchain());
  const auto code = [&](const std::filesystem::path& bin, std::vector<TestCase> cases, int reps) {
    try {
      (void)measure_execution(bin, cases, reps, 1.0);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code("/no/such/binary", sum_cases(), 1), ErrorCode::BinaryNotFound);
  EXPECT_EQ(code(p.binary, {}, 1), ErrorCode::Usage);
  EXPECT_EQ(code(p.binary, sum_cases(), 0), ErrorCode::Usage);
}

TEST(Evaluate, CompileErrorFoldsIntoOutcome) {
  const RunOutcome o = evaluate_program("int main( {", sum_cases(), toolchain(), MeasureOptions{1, 0, 1.0});
  EXPECT_EQ(o.status, RunStatus::CompileError);
  EXPECT_TRUE(o.per_testcase_times_s.empty());
}

TEST(Median, OddEven) {
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
}
