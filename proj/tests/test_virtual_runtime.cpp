#include <gtest/gtest.h>

#include "proactive/error.hpp"
#include "proactive/virtual_runtime.hpp"
#include "support.hpp"

using namespace proactive;
using namespace proactive::testing;

namespace {

struct Fixture {
  explicit Fixture(ConditionConfig cfg = conditions::suggest()) {
    SessionOptions o;
    o.condition = std::move(cfg);
    session = std::make_unique<Session>("vr", o, nullptr, at_ms(0));
  }
  FakeProvider provider;
  std::unique_ptr<Session> session;
};

class FailingProvider : public Provider {
 public:
  ProviderResponse complete(const PromptBundle&) override { throw ProviderError("down"); }
  std::string name() const override { return "down"; }
};

}  // namespace

TEST(VirtualRuntime, InputsAtSameInstantKeepOrder) {
  Fixture f;
  VirtualRuntime rt(*f.session, f.provider, nullptr);
  rt.at(at_ms(100), [](Session& s, Timestamp t) { return s.apply_edit("doc1", "a", t); });
  rt.at(at_ms(100), [](Session& s, Timestamp t) { return s.apply_edit("doc1", "b", t); });
  rt.run_until(at_ms(100));
  EXPECT_EQ(f.session->primary_document().text, "b");
  EXPECT_EQ(rt.now(), at_ms(100));
}

TEST(VirtualRuntime, CompletionArrivesAfterLatency) {
  Fixture f;
  f.provider.latency = Millis{2500};
  VirtualRuntime rt(*f.session, f.provider, nullptr);
  rt.at(at_ms(1000), [](Session& s, Timestamp t) { return s.post_chat("q", t); });
  rt.run_until(at_ms(3499));
  EXPECT_EQ(f.session->chat().size(), 1u);
  rt.run_until(at_ms(3500));
  EXPECT_EQ(f.session->chat().size(), 2u);
  EXPECT_EQ(f.session->chat()[1].ts, at_ms(3500));
}

TEST(VirtualRuntime, CompletionClockOverride) {
  Fixture f;
  VirtualRuntime::Options o;
  o.completion_at = [](std::uint64_t, bool) { return std::optional<Timestamp>(at_ms(9000)); };
  VirtualRuntime rt(*f.session, f.provider, nullptr, o);
  rt.at(at_ms(1000), [](Session& s, Timestamp t) { return s.post_chat("q", t); });
  rt.run_until(at_ms(8999));
  EXPECT_EQ(f.session->chat().size(), 1u);
  rt.run_until(at_ms(9000));
  EXPECT_EQ(f.session->chat().size(), 2u);
}

TEST(VirtualRuntime, NoPeriodicTickMeansNoProactiveStart) {
  Fixture f;
  VirtualRuntime::Options o;
  o.tick = Millis{0};
  o.extra_ticks = {at_ms(7000)};
  VirtualRuntime rt(*f.session, f.provider, nullptr, o);
  rt.run_until(at_ms(6000));
  EXPECT_EQ(rt.provider_calls(), 0u);
  rt.run_until(at_ms(60000));
  EXPECT_EQ(rt.provider_calls(), 1u);
  EXPECT_EQ(count_kind(*f.session, EventKind::suggestions_generated), 1);
}

TEST(VirtualRuntime, InputErrorsAreCollected) {
  Fixture f;
  VirtualRuntime rt(*f.session, f.provider, nullptr);
  rt.at(at_ms(10), [](Session& s, Timestamp t) { return s.expand("nope", t); });
  rt.run_until(at_ms(20));
  ASSERT_EQ(rt.errors().size(), 1u);
  EXPECT_NE(rt.errors()[0].find("nope"), std::string::npos);
}

TEST(VirtualRuntime, ProviderFailureBecomesProviderError) {
  Fixture f;
  FailingProvider down;
  VirtualRuntime rt(*f.session, down, nullptr);
  rt.run_until(at_ms(60000));
  EXPECT_GE(count_kind(*f.session, EventKind::provider_error), 1);
  EXPECT_EQ(count_kind(*f.session, EventKind::suggestion_shown), 0);
  EXPECT_TRUE(rt.errors().empty());
}
