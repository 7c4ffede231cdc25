#include <gtest/gtest.h>

#include <chrono>
#include <regex>

#include "proactive/runner.hpp"

using namespace proactive;

namespace {

CommandRunnerConfig quick(Millis timeout = Millis{5000}) {
  CommandRunnerConfig c;
  c.timeout = timeout;
  return c;
}

}  // namespace

TEST(Runner, ClassifiesErrors) {
  const std::regex re(CommandRunnerConfig{}.error_pattern);
  EXPECT_FALSE(classify_error(0, "", re));
  EXPECT_TRUE(classify_error(1, "", re));
  EXPECT_TRUE(classify_error(0, "Traceback (most recent call last):\n", re));
  EXPECT_TRUE(classify_error(0, "ValueError: bad", re));
  EXPECT_FALSE(classify_error(0, "warning: deprecated", re));
}

TEST(Runner, ScriptedRunnerReturnsInOrder) {
  RunResult a, b;
  a.stdout_text = "a";
  b.stdout_text = "b";
  ScriptedRunner r({a, b});
  EXPECT_EQ(r.run("").stdout_text, "a");
  EXPECT_EQ(r.run("").stdout_text, "b");
  EXPECT_EQ(r.calls(), 2u);
}

TEST(CommandRunner, PrintsOutput) {
  CommandRunner r(quick());
  auto res = r.run("print('hello')\n");
  EXPECT_EQ(res.stdout_text, "hello\n");
  EXPECT_EQ(res.exit_status, 0);
  EXPECT_FALSE(res.is_error);
}

TEST(CommandRunner, RuntimeErrorIsError) {
  CommandRunner r(quick());
  auto res = r.run("print(1/0)\n");
  EXPECT_TRUE(res.is_error);
  EXPECT_NE(res.stderr_text.find("ZeroDivisionError"), std::string::npos);
}

TEST(CommandRunner, InfiniteLoopTimesOut) {
  CommandRunner r(quick(Millis{1000}));
  const auto t0 = std::chrono::steady_clock::now();
  auto res = r.run("while True:\n    pass\n");
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_TRUE(res.timed_out);
  EXPECT_TRUE(res.is_error);
  EXPECT_LT(elapsed, std::chrono::milliseconds(2000));
}

TEST(CommandRunner, OutputIsCapped) {
  auto cfg = quick();
  cfg.output_cap = 1000;
  CommandRunner r(cfg);
  auto res = r.run("print('x' * 100000)\n");
  EXPECT_LT(res.stdout_text.size(), 1200u);
  EXPECT_NE(res.stdout_text.find("truncated"), std::string::npos);
}
