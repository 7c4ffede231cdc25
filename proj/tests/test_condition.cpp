#include <gtest/gtest.h>

#include "proactive/condition.hpp"
#include "proactive/error.hpp"
#include "proactive/json_codec.hpp"

using namespace proactive;
using std::chrono::seconds;

TEST(Conditions, BuiltinsMatchStudyArms) {
  const auto b = conditions::baseline();
  EXPECT_EQ(b.name, "baseline");
  EXPECT_FALSE(b.proactive_enabled);
  EXPECT_FALSE(b.preview_enabled);

  for (const auto& c : {conditions::suggest(), conditions::suggest_preview()}) {
    EXPECT_TRUE(c.proactive_enabled);
    EXPECT_EQ(c.idle_threshold, seconds(5));
    EXPECT_EQ(c.cooldown, seconds(20));
    EXPECT_EQ(c.suggestions_per_batch, 3);
    EXPECT_TRUE(c.guiding_prompts);
  }
  EXPECT_FALSE(conditions::suggest().preview_enabled);
  EXPECT_TRUE(conditions::suggest_preview().preview_enabled);

  const auto p = conditions::persistent_suggest();
  EXPECT_TRUE(p.proactive_enabled);
  EXPECT_EQ(p.cooldown, seconds(5));
  EXPECT_EQ(p.suggestions_per_batch, 5);
  EXPECT_FALSE(p.guiding_prompts);
  EXPECT_EQ(p.typing_grace(), p.idle_threshold);
}

TEST(Conditions, ValidateRejectsBrokenConfigs) {
  auto c = conditions::suggest();
  c.suggestions_per_batch = 0;
  EXPECT_THROW(validate(c), Error);
  c = conditions::baseline();
  c.preview_enabled = true;
  EXPECT_THROW(validate(c), Error);
  c = conditions::suggest();
  c.history_limit = 0;
  EXPECT_THROW(validate(c), Error);
  c = conditions::suggest();
  c.name = "";
  EXPECT_THROW(validate(c), Error);
}

TEST(Conditions, RegistryHasFourBuiltins) {
  ConditionRegistry reg;
  EXPECT_EQ(reg.names().size(), 4u);
  EXPECT_TRUE(reg.contains("suggest_preview"));
  EXPECT_EQ(reg.get("persistent_suggest"), conditions::persistent_suggest());
  try {
    reg.get("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::configuration);
  }
}

TEST(Conditions, FileFormatRoundTrips) {
  for (const auto& c : {conditions::baseline(), conditions::suggest(), conditions::suggest_preview(),
                        conditions::persistent_suggest()}) {
    auto parsed = parse_condition_text(format_condition(c));
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0], c);
  }
}

TEST(Conditions, LoadTextAddsAndOverrides) {
  ConditionRegistry reg;
  auto names = reg.load_text(R"(# faster arm
name = quick
proactive_enabled = true
preview_enabled = true
idle_threshold_s = 2.5
cooldown_s = 10
suggestions_per_batch = 4
guiding_prompts = false
history_limit = 12

name = suggest
proactive_enabled = true
preview_enabled = false
idle_threshold_s = 5
cooldown_s = 30
suggestions_per_batch = 3
guiding_prompts = true
history_limit = 40
)");
  ASSERT_EQ(names, (std::vector<std::string>{"quick", "suggest"}));
  EXPECT_EQ(reg.get("quick").idle_threshold, Millis{2500});
  EXPECT_EQ(reg.get("quick").history_limit, 12);
  EXPECT_EQ(reg.get("suggest").cooldown, seconds(30));
}

TEST(Conditions, LoadTextRejectsUnknownAndMissingKeys) {
  ConditionRegistry reg;
  EXPECT_THROW(reg.load_text("name = x\nproactive = true\n"), Error);
  EXPECT_THROW(reg.load_text("name = x\nproactive_enabled = true\n"), Error);
  EXPECT_THROW(reg.load_text("name = x\nproactive_enabled = maybe\npreview_enabled = false\n"
                             "idle_threshold_s = 5\ncooldown_s = 20\nsuggestions_per_batch = 3\n"
                             "guiding_prompts = true\nhistory_limit = 40\n"),
               Error);
}

TEST(Conditions, JsonRoundTrip) {
  auto c = conditions::suggest();
  c.typing_resume_grace = Millis{1500};
  EXPECT_EQ(condition_from_json(to_json(c)), c);
  EXPECT_THROW(condition_from_json(nlohmann::json{{"name", "x"}}), Error);
}
