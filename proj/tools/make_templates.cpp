// Regenerates data/patterns from the execution tables.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pentaca/data.hpp"
#include "pentaca/error.hpp"
#include "pentaca/structures.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Rebuild structure templates from the execution tables"};
  std::string out_dir = "data/patterns";
  app.add_option("--out-dir", out_dir, "Directory receiving <name>.pat and <name>.ports");
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);
    for (const auto& [kind, params] : pentaca::structure_variants()) {
      const auto d = pentaca::derive_structure(kind, params, pentaca::data::rules());
      std::string sources;
      for (const auto& s : d.sources) sources += (sources.empty() ? "" : ", ") + s;

      std::ofstream pat(fs::path(out_dir) / (d.tpl.name + ".pat"));
      pat << "# " << d.tpl.name << ", idle\n"
          << "# inferred from " << sources << " within " << d.radius << " Moore steps\n"
          << "# " << d.defaulted << " unconstrained cells defaulted to W\n"
          << pentaca::save_pattern(d.tpl.cells);
      std::ofstream ports(fs::path(out_dir) / (d.tpl.name + ".ports"));
      ports << "# " << d.tpl.name << "\n" << pentaca::save_ports(d.tpl.ports);
      std::cout << d.tpl.name << ": " << d.tpl.cells.size() << " cells, " << d.tpl.ports.size() << " ports\n";
    }
  } catch (const pentaca::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
