#include "pentaca/verify.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "pentaca/error.hpp"

namespace pentaca {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (true) {
    std::size_t j = line.find('\t', i);
    out.push_back(line.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.back() == ' ' || f.back() == '\r')) f.remove_suffix(1);
    while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
  }
  return out;
}

bool to_int(std::string_view s, int& v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::vector<TraceFixture> parse_fixtures(std::string_view text, const std::string& table) {
  struct Block {
    std::string name;
    int width;
    TraceFixture fx;
  };
  std::vector<Block> blocks;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto f = split_tabs(line);
    if (f.size() < 2) throw ParseError(line_no, "expected tab-separated fields");

    if (f[1].size() > 1 && f[1].front() == 't') {
      TraceFixture fx;
      for (std::size_t k = 1; k < f.size(); ++k) {
        int t;
        if (f[k].size() < 2 || f[k].front() != 't' || !to_int(f[k].substr(1), t)) {
          throw ParseError(line_no, "bad time heading '" + std::string(f[k]) + "'");
        }
        if (k == 1) {
          fx.start_time = t;
        } else if (t != fx.start_time + static_cast<int>(k) - 1) {
          throw ParseError(line_no, "time headings must be consecutive");
        }
      }
      blocks.push_back({std::string(f[0]), static_cast<int>(f.size()) - 1, std::move(fx)});
      continue;
    }

    if (blocks.empty()) throw ParseError(line_no, "row before the time header");
    auto& fx = blocks.back().fx;
    const int width = blocks.back().width;
    if (static_cast<int>(f.size()) - 1 != width) {
      throw ParseError(line_no, "row has " + std::to_string(f.size() - 1) + " ids, header has " +
                                    std::to_string(width));
    }
    TileRef cell;
    try {
      cell = parse_label(f[0]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (std::find(fx.cells.begin(), fx.cells.end(), cell) != fx.cells.end()) {
      throw ParseError(line_no, "cell " + format_label(cell) + " listed twice");
    }
    std::vector<int> row;
    for (std::size_t k = 1; k < f.size(); ++k) {
      int id;
      if (!to_int(f[k], id) || id < 1 || id > kMaxRuleId) {
        throw ParseError(line_no, "bad rule id '" + std::string(f[k]) + "'");
      }
      row.push_back(id);
    }
    fx.cells.push_back(cell);
    fx.grid.push_back(std::move(row));
  }

  std::vector<TraceFixture> out;
  const bool single = blocks.size() == 1 && blocks.front().name == "cell";
  for (auto& b : blocks) {
    b.fx.name = single ? table : table + "/" + b.name;
    out.push_back(std::move(b.fx));
  }
  return out;
}

TraceFixture parse_fixture(std::string_view text, const std::string& name) {
  auto all = parse_fixtures(text, name);
  if (all.empty()) {
    TraceFixture fx;
    fx.name = name;
    return fx;
  }
  if (all.size() > 1) throw ParseError("fixture '" + name + "' has several blocks");
  return all.front();
}

std::string format_fixture(const TraceFixture& fixture) {
  std::ostringstream out;
  out << "cell";
  for (int k = 0; k < fixture.steps(); ++k) out << "\tt" << fixture.start_time + k;
  out << '\n';
  for (std::size_t r = 0; r < fixture.cells.size(); ++r) {
    out << format_label(fixture.cells[r]);
    for (int id : fixture.grid[r]) out << '\t' << id;
    out << '\n';
  }
  return out.str();
}

Report check_trace(const Trace& trace, const TraceFixture& fixture) {
  std::map<std::pair<int, TileRef>, int> got;
  for (const auto& e : trace.events) got[{e.time, e.cell}] = e.rule_id;
  Report report;
  for (int k = 0; k < fixture.steps(); ++k) {
    const int time = fixture.start_time + k;
    for (std::size_t r = 0; r < fixture.cells.size(); ++r) {
      auto it = got.find({time, fixture.cells[r]});
      if (it == got.end()) {
        throw Error("coverage", "trace has no event for " + format_label(fixture.cells[r]) + " at time " +
                                    std::to_string(time));
      }
      if (it->second != fixture.grid[r][k]) {
        report.mismatches.push_back({time, fixture.cells[r], fixture.grid[r][k], it->second});
      }
    }
  }
  return report;
}

namespace {

// Backtracking over one rotation per row so that pinned states agree.
class RotationSolver {
 public:
  RotationSolver(const std::vector<const Rule*>& rules, const std::vector<int>& ids,
                 const std::vector<const std::array<int, 10>*>& moore)
      : rules_(rules), ids_(ids), moore_(moore) {}

  bool solve() {
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      if (!pin(ids_[r], rules_[r]->current)) return false;
    }
    return assign(0);
  }

 private:
  bool pin(int cell, State s) {
    auto [it, fresh] = pinned_.emplace(cell, std::make_pair(s, 1));
    if (fresh) return true;
    if (it->second.first != s) return false;
    ++it->second.second;
    return true;
  }
  void unpin(int cell) {
    auto it = pinned_.find(cell);
    if (--it->second.second == 0) pinned_.erase(it);
  }

  bool assign(std::size_t row) {
    if (row == rules_.size()) return true;
    for (int rot = 0; rot < 5; ++rot) {
      RuleWord w = rotate_word(rules_[row]->word, rot);
      int k = 0;
      bool ok = true;
      for (; k < 10; ++k) {
        if (!pin((*moore_[row])[k], w[k])) {
          ok = false;
          break;
        }
      }
      if (ok && assign(row + 1)) return true;
      for (int j = 0; j < k; ++j) unpin((*moore_[row])[j]);
    }
    return false;
  }

  const std::vector<const Rule*>& rules_;
  const std::vector<int>& ids_;
  const std::vector<const std::array<int, 10>*>& moore_;
  std::map<int, std::pair<State, int>> pinned_;
};

}  // namespace

ConsistencyReport neighborhood_consistency(const TraceFixture& fixture, const RuleTable& table,
                                           const Pentagrid& map) {
  ConsistencyReport report;
  std::vector<int> ids;
  std::vector<const std::array<int, 10>*> moore;
  for (TileRef c : fixture.cells) {
    int i = map.id(c);
    ids.push_back(i);
    moore.push_back(&map.moore_checked(i));
  }
  for (int k = 0; k < fixture.steps(); ++k) {
    const int time = fixture.start_time + k;
    std::vector<const Rule*> rules;
    bool known = true;
    for (std::size_t r = 0; r < fixture.cells.size(); ++r) {
      const Rule* rule = table.find(fixture.grid[r][k]);
      if (!rule) {
        report.issues.push_back({time, "rule " + std::to_string(fixture.grid[r][k]) + " at " +
                                           format_label(fixture.cells[r]) + " is not in the table"});
        known = false;
        continue;
      }
      rules.push_back(rule);
      if (k + 1 < fixture.steps()) {
        const Rule* after = table.find(fixture.grid[r][k + 1]);
        if (after && after->current != rule->next) {
          report.issues.push_back({time, "cell " + format_label(fixture.cells[r]) + ": rule " +
                                             std::to_string(rule->id) + " yields " + to_char(rule->next) +
                                             " but rule " + std::to_string(after->id) + " applies to " +
                                             to_char(after->current)});
        }
      }
    }
    if (!known) continue;
    if (!RotationSolver(rules, ids, moore).solve()) {
      report.issues.push_back({time, "no rotation of the cited rules agrees on shared cells"});
    }
  }
  return report;
}

}  // namespace pentaca
