#include <gtest/gtest.h>

#include "autopatch/error.hpp"
#include "autopatch/process.hpp"
#include "autopatch/text.hpp"

using namespace autopatch;

TEST(Text, Utf8Validation) {
  EXPECT_TRUE(text::is_valid_utf8("plain"));
  EXPECT_TRUE(text::is_valid_utf8("caf\xc3\xa9 \xe2\x82\xac \xf0\x9f\x98\x80"));
  EXPECT_FALSE(text::is_valid_utf8("\xc3"));
  EXPECT_FALSE(text::is_valid_utf8("\xc0\xaf"));        // overlong
  EXPECT_FALSE(text::is_valid_utf8("\xed\xa0\x80"));    // surrogate
  EXPECT_FALSE(text::is_valid_utf8("\xf4\x90\x80\x80"));  // above U+10FFFF
  EXPECT_EQ(text::decode_utf8("a\xc3\xa9"), std::u32string(U"aé"));
}

TEST(Text, NormalizeCodeText) {
  EXPECT_EQ(text::normalize_code_text("  int  x =\t1;  \n\n   \r\n return x; \n"), "int x = 1;\nreturn x;");
  EXPECT_EQ(text::normalize_code_text(" \n\t\n"), "");
}

TEST(Text, NormalizeOutput) {
  EXPECT_EQ(text::normalize_output("a  \nb\t\n\n\n"), "a\nb");
  EXPECT_EQ(text::normalize_output(""), "");
}

TEST(Text, SplitLines) {
  const auto lines = text::split_lines("a\r\nb\n\nc\n");
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[2], "");
  EXPECT_EQ(lines[3], "c");
  EXPECT_TRUE(text::split_lines("").empty());
}

TEST(Text, Sha256KnownVector) {
  EXPECT_EQ(text::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, WriteThenRead) {
  TempDir dir;
  const auto p = dir.path() / "nested" / "f.txt";
  text::write_file(p, "hello\n");
  EXPECT_EQ(text::read_file(p), "hello\n");
  try {
    (void)text::read_file(dir.path() / "absent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
}

TEST(Process, CapturesOutputAndStatus) {
  ProcessOptions opts;
  opts.stdin_data = "abc";
  const auto r = run_process({"sh", "-c", "cat; echo err >&2; exit 3"}, opts);
  EXPECT_EQ(r.stdout_data, "abc");
  EXPECT_EQ(r.stderr_data, "err\n");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_FALSE(r.ok());
}

TEST(Process, TimeoutKillsProcessGroup) {
  ProcessOptions opts;
  opts.timeout = std::chrono::duration<double>(0.3);
  const auto r = run_process({"sh", "-c", "sleep 5 & sleep 5"}, opts);
  EXPECT_TRUE(r.timed_out);
  EXPECT_LT(r.wall_seconds, 3.0);
}

TEST(Process, ExecFailure) {
  const auto r = run_process({"/definitely/not/here"});
  EXPECT_TRUE(r.exec_failed);
  EXPECT_FALSE(find_executable("/definitely/not/here").has_value());
  EXPECT_TRUE(find_executable("sh").has_value());
}

TEST(Process, SplitFlags) {
  EXPECT_EQ(split_flags("  -O2 \t-std=c++17\n"), (std::vector<std::string>{"-O2", "-std=c++17"}));
  EXPECT_TRUE(split_flags("").empty());
}
