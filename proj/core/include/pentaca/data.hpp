#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pentaca/rules.hpp"
#include "pentaca/verify.hpp"

// Rule, fixture and pattern files compiled into the library.
namespace pentaca::data {

std::string_view rules_text();
// Parsed once and shared.
const RuleTable& rules();

// Table names, e.g. "exdoubl", in alphabetical order.
std::vector<std::string> fixture_tables();
// Throws UsageError for unknown tables.
std::string_view fixture_text(std::string_view table);
// Every block of every table.
std::vector<TraceFixture> fixtures();
// `name` is a table ("exvertd") or a single block ("exvertd/simple").
std::vector<TraceFixture> fixtures(std::string_view name);

// Structure files under patterns/; throws UsageError when missing.
std::string_view pattern_text(std::string_view structure);
std::string_view ports_text(std::string_view structure);

}  // namespace pentaca::data
