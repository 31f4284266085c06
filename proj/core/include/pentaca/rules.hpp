#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pentaca {

// W is the quiescent state.
enum class State : std::uint8_t { W = 0, B = 1, R = 2 };

char to_char(State s);
// Throws ParseError for anything but W, B or R.
State state_from_char(char c);

// Positions 0..4 are sides 1..5, positions 5..9 are vertex positions 6..10.
using RuleWord = std::array<State, 10>;

RuleWord parse_word(std::string_view text);
std::string format_word(const RuleWord& w);

// Shifts both five-letter blocks left by r: letter i of the result is letter
// (i + r) mod 5 of the same block of w.
RuleWord rotate_word(const RuleWord& w, int r);

// Base-3 code of a word, letter i weighted by 3^i; in [0, 3^10).
std::uint32_t encode_word(const RuleWord& w);
RuleWord decode_word(std::uint32_t code);
inline constexpr std::uint32_t kWordCount = 59049;

struct CanonicalKey {
  State current;
  RuleWord word;  // least rotation under W < B < R

  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

CanonicalKey canonical_key(State current, const RuleWord& w);

struct Rule {
  int id = 0;
  State current = State::W;
  RuleWord word{};
  State next = State::W;
};

struct Conflict {
  int first_id;
  int second_id;
  CanonicalKey key;
};

struct LookupResult {
  State next;
  int rule_id;
};

class RuleTable {
 public:
  RuleTable() : RuleTable(std::vector<Rule>{}) {}
  // Throws ParseError on duplicate ids.
  explicit RuleTable(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  const Rule* find(int id) const;

  // Throws NoRuleError carrying the canonical key when nothing matches.
  LookupResult lookup(State current, const RuleWord& w) const;
  // Index into rules() of the lowest-id rule matching (current, word code),
  // or nullopt.
  std::optional<std::size_t> match(State current, std::uint32_t code) const {
    auto v = dense_[static_cast<std::size_t>(current) * kWordCount + code];
    if (v == 0) return std::nullopt;
    return static_cast<std::size_t>(v - 1);
  }

 private:
  std::vector<Rule> rules_;            // sorted by id
  std::vector<std::uint16_t> dense_;  // (current, word) -> rule index + 1
};

// Lines `<id> <current> <10 letters> <next>`; `#` starts a comment.
RuleTable parse_rules(std::string_view text);
std::string format_rules(const RuleTable& table);

// Pairs of rules sharing a canonical key but disagreeing on the next state.
std::vector<Conflict> validate(const RuleTable& table);

}  // namespace pentaca
