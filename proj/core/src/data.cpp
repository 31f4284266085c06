#include "pentaca/data.hpp"

#include <algorithm>

#include "embedded.hpp"
#include "pentaca/error.hpp"

namespace pentaca::data {

namespace {

const detail::EmbeddedFile* lookup(std::string_view path) {
  for (const auto& f : detail::embedded_files()) {
    if (f.path == path) return &f;
  }
  return nullptr;
}

constexpr std::string_view kFixtureDir = "fixtures/";
constexpr std::string_view kFixtureExt = ".trace.tsv";

}  // namespace

std::string_view rules_text() {
  const auto* f = lookup("rules-352.txt");
  if (!f) throw std::logic_error("rule file missing from the build");
  return f->text;
}

const RuleTable& rules() {
  static const RuleTable table = parse_rules(rules_text());
  return table;
}

std::vector<std::string> fixture_tables() {
  std::vector<std::string> out;
  for (const auto& f : detail::embedded_files()) {
    std::string_view p = f.path;
    if (p.starts_with(kFixtureDir) && p.ends_with(kFixtureExt)) {
      p.remove_prefix(kFixtureDir.size());
      p.remove_suffix(kFixtureExt.size());
      out.emplace_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view fixture_text(std::string_view table) {
  const auto* f = lookup(std::string(kFixtureDir) + std::string(table) + std::string(kFixtureExt));
  if (!f) throw UsageError("unknown fixture '" + std::string(table) + "'");
  return f->text;
}

std::vector<TraceFixture> fixtures() {
  std::vector<TraceFixture> out;
  for (const auto& t : fixture_tables()) {
    auto part = parse_fixtures(fixture_text(t), t);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<TraceFixture> fixtures(std::string_view name) {
  auto slash = name.find('/');
  std::string table(name.substr(0, slash));
  auto all = parse_fixtures(fixture_text(table), table);
  if (slash == std::string_view::npos) return all;
  for (auto& fx : all) {
    if (fx.name == name) return {fx};
  }
  throw UsageError("fixture table '" + table + "' has no block '" + std::string(name.substr(slash + 1)) + "'");
}

std::string_view pattern_text(std::string_view structure) {
  const auto* f = lookup("patterns/" + std::string(structure) + ".pat");
  if (!f) throw UsageError("no pattern file for structure '" + std::string(structure) + "'");
  return f->text;
}

std::string_view ports_text(std::string_view structure) {
  const auto* f = lookup("patterns/" + std::string(structure) + ".ports");
  if (!f) throw UsageError("no port file for structure '" + std::string(structure) + "'");
  return f->text;
}

}  // namespace pentaca::data
