#include "pentaca/rules.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include "pentaca/error.hpp"

namespace pentaca {

char to_char(State s) {
  switch (s) {
    case State::W: return 'W';
    case State::B: return 'B';
    case State::R: return 'R';
  }
  return '?';
}

State state_from_char(char c) {
  switch (c) {
    case 'W': return State::W;
    case 'B': return State::B;
    case 'R': return State::R;
    default: throw ParseError(std::string("bad state letter '") + c + "'");
  }
}

RuleWord parse_word(std::string_view text) {
  if (text.size() != 10) {
    throw ParseError("neighbourhood word '" + std::string(text) + "' has " +
                     std::to_string(text.size()) + " letters, expected 10");
  }
  RuleWord w;
  for (std::size_t i = 0; i < 10; ++i) w[i] = state_from_char(text[i]);
  return w;
}

std::string format_word(const RuleWord& w) {
  std::string s(10, ' ');
  for (std::size_t i = 0; i < 10; ++i) s[i] = to_char(w[i]);
  return s;
}

RuleWord rotate_word(const RuleWord& w, int r) {
  r = ((r % 5) + 5) % 5;
  RuleWord out;
  for (int i = 0; i < 5; ++i) {
    out[i] = w[(i + r) % 5];
    out[5 + i] = w[5 + (i + r) % 5];
  }
  return out;
}

std::uint32_t encode_word(const RuleWord& w) {
  std::uint32_t code = 0;
  for (int i = 9; i >= 0; --i) code = code * 3 + static_cast<std::uint32_t>(w[i]);
  return code;
}

RuleWord decode_word(std::uint32_t code) {
  RuleWord w;
  for (int i = 0; i < 10; ++i) {
    w[i] = static_cast<State>(code % 3);
    code /= 3;
  }
  return w;
}

CanonicalKey canonical_key(State current, const RuleWord& w) {
  RuleWord best = w;
  for (int r = 1; r < 5; ++r) best = std::min(best, rotate_word(w, r));
  return {current, best};
}

RuleTable::RuleTable(std::vector<Rule> rules) : rules_(std::move(rules)), dense_(3 * kWordCount, 0) {
  std::sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rules_.size(); ++i) {
    if (rules_[i].id == rules_[i - 1].id) throw ParseError("duplicate rule id " + std::to_string(rules_[i].id));
  }
  if (rules_.size() >= 0xffff) throw ParseError("too many rules");
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& rule = rules_[i];
    for (int r = 0; r < 5; ++r) {
      auto& slot = dense_[static_cast<std::size_t>(rule.current) * kWordCount + encode_word(rotate_word(rule.word, r))];
      if (slot == 0) slot = static_cast<std::uint16_t>(i + 1);
    }
  }
}

const Rule* RuleTable::find(int id) const {
  auto it = std::lower_bound(rules_.begin(), rules_.end(), id, [](const Rule& r, int v) { return r.id < v; });
  return it != rules_.end() && it->id == id ? &*it : nullptr;
}

LookupResult RuleTable::lookup(State current, const RuleWord& w) const {
  if (auto i = match(current, encode_word(w))) return {rules_[*i].next, rules_[*i].id};
  auto key = canonical_key(current, w);
  throw NoRuleError(std::string("no rule for ") + to_char(key.current) + " " + format_word(key.word));
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

RuleTable parse_rules(std::string_view text) {
  std::vector<Rule> rules;
  std::map<int, int> seen;  // id -> line
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 4) throw ParseError(line_no, "expected `<id> <state> <word> <state>`");
    Rule r;
    auto [p, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), r.id);
    if (ec != std::errc() || p != f[0].data() + f[0].size() || r.id < 1) {
      throw ParseError(line_no, "bad rule id '" + std::string(f[0]) + "'");
    }
    try {
      if (f[1].size() != 1 || f[3].size() != 1) throw ParseError("states are single letters");
      r.current = state_from_char(f[1][0]);
      r.word = parse_word(f[2]);
      r.next = state_from_char(f[3][0]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (auto [it, fresh] = seen.emplace(r.id, line_no); !fresh) {
      throw ParseError(line_no, "duplicate rule id " + std::to_string(r.id) + " (first on line " +
                                    std::to_string(it->second) + ")");
    }
    rules.push_back(r);
    if (end == text.size()) break;
  }
  return RuleTable(std::move(rules));
}

std::string format_rules(const RuleTable& table) {
  std::ostringstream out;
  for (const Rule& r : table.rules()) {
    out << r.id << ' ' << to_char(r.current) << ' ' << format_word(r.word) << ' ' << to_char(r.next) << '\n';
  }
  return out.str();
}

std::vector<Conflict> validate(const RuleTable& table) {
  std::map<CanonicalKey, std::vector<const Rule*>> groups;
  for (const Rule& r : table.rules()) groups[canonical_key(r.current, r.word)].push_back(&r);
  std::vector<Conflict> out;
  for (const auto& [key, members] : groups) {
    const Rule* first = members.front();
    for (const Rule* r : members) {
      if (r->next != first->next) out.push_back({first->id, r->id, key});
    }
  }
  std::sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
    return std::tie(a.first_id, a.second_id) < std::tie(b.first_id, b.second_id);
  });
  return out;
}

}  // namespace pentaca
