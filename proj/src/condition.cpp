#include "proactive/condition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "proactive/error.hpp"

namespace proactive {

void validate(const ConditionConfig& cfg) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::configuration,
                "condition '" + cfg.name + "': " + what);
  };
  if (cfg.name.empty()) fail("name must be non-empty");
  if (cfg.idle_threshold.count() <= 0) fail("idle_threshold must be > 0");
  if (cfg.cooldown.count() < 0) fail("cooldown must be >= 0");
  if (cfg.suggestions_per_batch < 1 || cfg.suggestions_per_batch > 10)
    fail("suggestions_per_batch must be in [1, 10]");
  if (cfg.history_limit < 1) fail("history_limit must be >= 1");
  if (cfg.typing_resume_grace && cfg.typing_resume_grace->count() < 0)
    fail("typing_resume_grace must be >= 0");
  if (!cfg.proactive_enabled && cfg.preview_enabled)
    fail("preview requires proactive_enabled");
}

namespace conditions {

ConditionConfig baseline() {
  ConditionConfig c;
  c.name = "baseline";
  c.proactive_enabled = false;
  c.preview_enabled = false;
  c.idle_threshold = Millis{5000};
  c.cooldown = Millis{20000};
  c.suggestions_per_batch = 3;
  c.guiding_prompts = false;
  return c;
}

ConditionConfig suggest() {
  ConditionConfig c;
  c.name = "suggest";
  c.proactive_enabled = true;
  c.preview_enabled = false;
  c.idle_threshold = Millis{5000};
  c.cooldown = Millis{20000};
  c.suggestions_per_batch = 3;
  c.guiding_prompts = true;
  return c;
}

ConditionConfig suggest_preview() {
  ConditionConfig c = suggest();
  c.name = "suggest_preview";
  c.preview_enabled = true;
  return c;
}

// Same surface as `suggest`: shorter wait between suggestions, larger
// batches, no taxonomy scaffold.
ConditionConfig persistent_suggest() {
  ConditionConfig c = suggest();
  c.name = "persistent_suggest";
  c.cooldown = Millis{5000};
  c.suggestions_per_batch = 5;
  c.guiding_prompts = false;
  return c;
}

}  // namespace conditions

ConditionRegistry::ConditionRegistry() {
  for (auto cfg : {conditions::baseline(), conditions::suggest(),
                   conditions::suggest_preview(),
                   conditions::persistent_suggest()}) {
    configs_.emplace(cfg.name, cfg);
  }
}

void ConditionRegistry::add(ConditionConfig cfg) {
  validate(cfg);
  auto name = cfg.name;
  configs_.insert_or_assign(std::move(name), std::move(cfg));
}

const ConditionConfig& ConditionRegistry::get(std::string_view name) const {
  auto it = configs_.find(name);
  if (it == configs_.end())
    throw Error(ErrorCode::configuration,
                "unknown condition '" + std::string(name) + "'");
  return it->second;
}

bool ConditionRegistry::contains(std::string_view name) const {
  return configs_.find(name) != configs_.end();
}

std::vector<std::string> ConditionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : configs_) out.push_back(name);
  return out;
}

std::vector<std::string> ConditionRegistry::load_text(std::string_view text) {
  std::vector<std::string> loaded;
  for (auto& cfg : parse_condition_text(text)) {
    loaded.push_back(cfg.name);
    add(std::move(cfg));
  }
  return loaded;
}

std::vector<std::string> ConditionRegistry::load_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::configuration,
                "cannot read condition file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_text(ss.str());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::configuration,
              "key '" + std::string(key) + "': expected boolean, got '" +
                  std::string(v) + "'");
}

double parse_number(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
    throw Error(ErrorCode::configuration,
                "key '" + std::string(key) + "': expected number, got '" +
                    std::string(v) + "'");
  return out;
}

int parse_int(std::string_view key, std::string_view v) {
  const double d = parse_number(key, v);
  if (d != std::floor(d))
    throw Error(ErrorCode::configuration,
                "key '" + std::string(key) + "': expected integer");
  return static_cast<int>(d);
}

Millis seconds_to_ms(std::string_view key, std::string_view v) {
  return Millis{static_cast<std::int64_t>(std::llround(parse_number(key, v) * 1000.0))};
}

std::string format_seconds(Millis ms) {
  std::ostringstream os;
  os << static_cast<double>(ms.count()) / 1000.0;
  return os.str();
}

}  // namespace

std::vector<ConditionConfig> parse_condition_text(std::string_view text) {
  std::vector<ConditionConfig> out;
  std::optional<ConditionConfig> current;
  std::vector<std::string> seen;

  auto finish = [&] {
    if (!current) return;
    for (const char* required :
         {"name", "proactive_enabled", "preview_enabled", "idle_threshold_s",
          "cooldown_s", "suggestions_per_batch", "guiding_prompts",
          "history_limit"}) {
      if (std::find(seen.begin(), seen.end(), required) == seen.end())
        throw Error(ErrorCode::configuration,
                    std::string("condition block missing key '") + required + "'");
    }
    validate(*current);
    out.push_back(std::move(*current));
    current.reset();
    seen.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = trim(line.substr(0, hash));
    if (line.empty()) {
      finish();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::configuration,
                  "line " + std::to_string(line_no) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (!current) current.emplace();
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
      throw Error(ErrorCode::configuration,
                  "line " + std::to_string(line_no) + ": duplicate key '" +
                      std::string(key) + "'");
    seen.emplace_back(key);

    if (key == "name") current->name = std::string(value);
    else if (key == "proactive_enabled") current->proactive_enabled = parse_bool(key, value);
    else if (key == "preview_enabled") current->preview_enabled = parse_bool(key, value);
    else if (key == "idle_threshold_s") current->idle_threshold = seconds_to_ms(key, value);
    else if (key == "cooldown_s") current->cooldown = seconds_to_ms(key, value);
    else if (key == "suggestions_per_batch") current->suggestions_per_batch = parse_int(key, value);
    else if (key == "guiding_prompts") current->guiding_prompts = parse_bool(key, value);
    else if (key == "history_limit") current->history_limit = parse_int(key, value);
    else if (key == "typing_resume_grace_s") current->typing_resume_grace = seconds_to_ms(key, value);
    else
      throw Error(ErrorCode::configuration,
                  "line " + std::to_string(line_no) + ": unknown key '" +
                      std::string(key) + "'");
    if (nl == text.size()) break;
  }
  finish();
  return out;
}

std::string format_condition(const ConditionConfig& cfg) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "name = " << cfg.name << '\n'
     << "proactive_enabled = " << b(cfg.proactive_enabled) << '\n'
     << "preview_enabled = " << b(cfg.preview_enabled) << '\n'
     << "idle_threshold_s = " << format_seconds(cfg.idle_threshold) << '\n'
     << "cooldown_s = " << format_seconds(cfg.cooldown) << '\n'
     << "suggestions_per_batch = " << cfg.suggestions_per_batch << '\n'
     << "guiding_prompts = " << b(cfg.guiding_prompts) << '\n'
     << "history_limit = " << cfg.history_limit << '\n';
  if (cfg.typing_resume_grace)
    os << "typing_resume_grace_s = " << format_seconds(*cfg.typing_resume_grace) << '\n';
  return os.str();
}

}  // namespace proactive
