#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "pentaca/data.hpp"
#include "pentaca/error.hpp"
#include "pentaca/render.hpp"
#include "pentaca/structures.hpp"

namespace pentaca::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kFail = 1;
constexpr int kUsage = 2;

class IoError : public Error {
 public:
  explicit IoError(const std::string& detail) : Error("io", detail) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

RuleTable load_rules(const std::string& path) {
  if (path.empty()) return data::rules();
  return RuleTable(parse_rules(read_file(path)));
}

// A table or block name from the built-in set, or a fixture file path.
std::vector<TraceFixture> load_fixtures(const std::string& name) {
  if (fs::is_regular_file(name)) return parse_fixtures(read_file(name), fs::path(name).stem().stem().string());
  return data::fixtures(name);
}

std::set<TileRef> parse_cells(const std::string& text) {
  std::set<TileRef> cells;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) cells.insert(parse_label(item));
  }
  return cells;
}

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string text;
};

CheckOutcome check_one(const TraceFixture& fx, const RuleTable& table) {
  CheckOutcome o{fx.name, false, {}};
  std::ostringstream out;
  try {
    const auto inf = infer_initial_pattern(fx, table);
    const std::set<TileRef> watched(fx.cells.begin(), fx.cells.end());
    const auto res = run_auto(table, inf.pattern, fx.steps(), watched, fx.start_time);
    const auto report = check_trace(res.trace, fx);
    o.pass = report.pass();
    if (o.pass) {
      out << fx.name << ": pass " << fx.cells.size() << " cells × " << fx.steps() << " steps\n";
    } else {
      out << fx.name << ": fail " << report.mismatches.size() << " mismatches\n";
      for (const auto& m : report.mismatches) {
        out << "  t" << m.time << ' ' << format_label(m.cell) << ": expected rule " << m.expected << ", got "
            << m.got << '\n';
      }
    }
  } catch (const Error& e) {
    out << fx.name << ": fail " << e.kind() << ": " << e.what() << '\n';
  }
  o.text = out.str();
  return o;
}

struct Options {
  std::string rules;
  std::string structure;
  bool counterclockwise = false;
  std::string out;
  std::string ports;
  std::string pattern;
  int steps = 0;
  std::string watch;
  std::string trace;
  int svg_every = 0;
  std::string svg_dir = ".";
  int depth = 5;
  std::string palette;
  std::string fixture;
  bool all = false;
};

int cmd_validate(const Options& o, std::ostream& out) {
  const RuleTable table = load_rules(o.rules);
  const auto conflicts = validate(table);
  for (const auto& c : conflicts) {
    out << "conflict: rules " << c.first_id << " and " << c.second_id << " share "
        << to_char(c.key.current) << ' ' << format_word(c.key.word) << '\n';
  }
  out << table.rules().size() << " rules, " << conflicts.size() << " conflicts\n";
  return conflicts.empty() ? 0 : kFail;
}

int cmd_build(const Options& o, std::ostream& out) {
  const StructureKind kind = structure_kind_from_string(o.structure);
  const StructureParams params{!o.counterclockwise};
  const PatternTemplate tpl = build_structure(kind, params);
  write_file(o.out, "# " + tpl.name + "\n" + save_pattern(tpl.cells));
  if (!o.ports.empty()) write_file(o.ports, "# " + tpl.name + "\n" + save_ports(tpl.ports));
  out << "wrote " << tpl.name << ": " << tpl.cells.size() << " cells, " << tpl.ports.size() << " ports\n";
  return 0;
}

std::string frame_path(const Options& o, int t) {
  std::ostringstream name;
  name << "frame_" << std::setw(4) << std::setfill('0') << t << ".svg";
  return (fs::path(o.svg_dir) / name.str()).string();
}

int cmd_run(const Options& o, std::ostream& out) {
  if (o.steps < 0) throw UsageError("--steps must be non-negative");
  if (o.svg_every < 0) throw UsageError("--svg-every must be non-negative");
  const RuleTable table = load_rules(o.rules);
  Configuration config = load_pattern(read_file(o.pattern));
  std::optional<std::set<TileRef>> watched;
  if (!o.watch.empty()) watched = parse_cells(o.watch);
  const Palette palette = parse_palette(o.palette);

  std::optional<DiscLayout> disc;
  if (o.svg_every > 0) {
    disc = layout(*expand_map(o.depth), o.depth);
    fs::create_directories(o.svg_dir);
    write_file(frame_path(o, 0), render_svg(config, *disc, palette));
  }
  Trace trace;
  trace.watched = watched;
  for (int t = 0; t < o.steps; ++t) {
    auto res = run_auto(table, config, 1, watched, t);
    config = std::move(res.config);
    trace.events.insert(trace.events.end(), res.trace.events.begin(), res.trace.events.end());
    if (disc && (t + 1) % o.svg_every == 0) write_file(frame_path(o, t + 1), render_svg(config, *disc, palette));
  }
  if (!o.trace.empty()) write_file(o.trace, format_trace(trace));
  if (!o.out.empty()) write_file(o.out, save_pattern(config));
  out << "ran " << o.steps << " steps, " << config.size() << " non-W cells\n";
  return 0;
}

int cmd_check(const Options& o, std::ostream& out) {
  if (o.all == !o.fixture.empty()) throw UsageError("check takes exactly one of --fixture and --all");
  const RuleTable table = load_rules(o.rules);
  const std::vector<TraceFixture> fixtures = o.all ? data::fixtures() : load_fixtures(o.fixture);
  std::vector<std::future<CheckOutcome>> jobs;
  for (const auto& fx : fixtures) jobs.push_back(std::async(std::launch::async, check_one, std::cref(fx), std::cref(table)));
  int failed = 0;
  for (auto& j : jobs) {
    const CheckOutcome r = j.get();
    out << r.text;
    failed += r.pass ? 0 : 1;
  }
  if (fixtures.size() > 1) out << fixtures.size() - failed << "/" << fixtures.size() << " fixtures pass\n";
  return failed == 0 ? 0 : kFail;
}

int cmd_infer(const Options& o, std::ostream& out) {
  const RuleTable table = load_rules(o.rules);
  const auto fixtures = load_fixtures(o.fixture);
  if (fixtures.size() != 1) {
    throw UsageError("fixture " + o.fixture + " has " + std::to_string(fixtures.size()) + " blocks; name one");
  }
  const auto inf = infer_initial_pattern(fixtures.front(), table);
  std::ostringstream text;
  text << "# " << fixtures.front().name << " at t" << fixtures.front().start_time << ", solved within "
       << inf.report.radius << " Moore steps\n"
       << "# " << inf.report.defaulted.size() << " unconstrained cells defaulted to W\n"
       << save_pattern(inf.pattern);
  write_file(o.out, text.str());
  out << "inferred " << fixtures.front().name << ": " << inf.pattern.size() << " non-W cells, "
      << inf.report.defaulted.size() << " unconstrained\n";
  return 0;
}

int cmd_render(const Options& o, std::ostream& out) {
  const Configuration config = load_pattern(read_file(o.pattern));
  if (o.depth < 0 || o.depth > Pentagrid::max_depth()) throw UsageError("--depth out of range");
  const DiscLayout disc = layout(*expand_map(o.depth), o.depth);
  write_file(o.out, render_svg(config, disc, parse_palette(o.palette)));
  out << "rendered " << disc.polygons().size() << " tiles\n";
  return 0;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-state cellular automaton on the pentagrid"};
  app.require_subcommand(1);
  Options o;

  auto add_rules = [&](CLI::App* c) {
    c->add_option("--rules", o.rules, "Rule file (default: the built-in 352 rules)");
  };
  auto* validate_cmd = app.add_subcommand("validate", "Check a rule table for rotation conflicts");
  add_rules(validate_cmd);

  auto* build_cmd = app.add_subcommand("build", "Write the pattern of a structure");
  build_cmd->add_option("--structure", o.structure, "Structure kind")->required();
  build_cmd->add_flag("--counterclockwise", o.counterclockwise, "Counter-clockwise ring");
  build_cmd->add_option("--out", o.out, "Pattern file to write")->required();
  build_cmd->add_option("--ports", o.ports, "Port manifest to write");

  auto* run_cmd = app.add_subcommand("run", "Simulate a pattern");
  add_rules(run_cmd);
  run_cmd->add_option("--pattern", o.pattern, "Initial pattern file")->required();
  run_cmd->add_option("--steps", o.steps, "Number of steps")->required();
  run_cmd->add_option("--watch", o.watch, "Comma-separated cells to trace (default: all active)");
  run_cmd->add_option("--trace", o.trace, "Trace file to write");
  run_cmd->add_option("--out", o.out, "Final pattern file to write");
  run_cmd->add_option("--svg-every", o.svg_every, "Write an SVG frame every k steps");
  run_cmd->add_option("--svg-dir", o.svg_dir, "Directory for SVG frames");
  run_cmd->add_option("--depth", o.depth, "Generations drawn in SVG frames");
  run_cmd->add_option("--palette", o.palette, "w=#rrggbb,b=#rrggbb,r=#rrggbb");

  auto* check_cmd = app.add_subcommand("check", "Replay execution tables: infer, simulate, compare");
  add_rules(check_cmd);
  check_cmd->add_option("--fixture", o.fixture, "Table, table/block or fixture file");
  check_cmd->add_flag("--all", o.all, "Every built-in table");

  auto* infer_cmd = app.add_subcommand("infer", "Reconstruct the initial pattern of an execution table");
  add_rules(infer_cmd);
  infer_cmd->add_option("--fixture", o.fixture, "Table/block or fixture file")->required();
  infer_cmd->add_option("--out", o.out, "Pattern file to write")->required();

  auto* render_cmd = app.add_subcommand("render", "Draw a pattern in the Poincare disc");
  render_cmd->add_option("--pattern", o.pattern, "Pattern file")->required();
  render_cmd->add_option("--depth", o.depth, "Generations drawn");
  render_cmd->add_option("--out", o.out, "SVG file to write")->required();
  render_cmd->add_option("--palette", o.palette, "w=#rrggbb,b=#rrggbb,r=#rrggbb");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*build_cmd) return cmd_build(o, out);
    if (*run_cmd) return cmd_run(o, out);
    if (*check_cmd) return cmd_check(o, out);
    if (*infer_cmd) return cmd_infer(o, out);
    if (*render_cmd) return cmd_render(o, out);
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    const bool usage = e.kind() == "parse" || e.kind() == "usage" || e.kind() == "io";
    return usage ? kUsage : kFail;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}

}  // namespace pentaca::cli
