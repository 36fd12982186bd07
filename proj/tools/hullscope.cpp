// hullscope command-line driver: one subcommand per engine operation.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hullscope/io.hpp"
#include "hullscope/run.hpp"

namespace {

using nlohmann::json;

struct Flags {
  std::optional<std::string> input, generator, grid, out, config;
  std::optional<int> dmax;
  std::optional<double> cap;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.input, "input file (compact .json/.csv, disc, or certificate)");
  cmd->add_option("--generator", f.generator, "fixture generator name");
  cmd->add_option("--dmax", f.dmax, "largest polynomial degree");
  cmd->add_option("--cap", f.cap, "finiteness cap on cumulative log C / V");
  cmd->add_option("--grid", f.grid, "query grid lo:hi:n[,lo:hi:n]");
  cmd->add_option("--seed", f.seed, "search seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--config", f.config, "config or manifest JSON file (or inline JSON)");
}

hullscope::RunConfig resolve(const std::string& command, const Flags& f) {
  hullscope::RunConfig c;
  if (f.config) {
    const std::string& s = *f.config;
    const std::string text = !s.empty() && s.front() == '{' ? s : hullscope::io::read_file(s);
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw hullscope::Error(hullscope::ErrorCode::invalid_input, "config is not valid JSON");
    c = hullscope::run_config_from(j, c);
  }
  c.command = command;
  if (f.input) c.input = *f.input;
  if (f.generator) c.generator = *f.generator;
  if (f.grid) c.grid = *f.grid;
  if (f.out) c.out = *f.out;
  if (f.dmax) c.dmax = *f.dmax;
  if (f.cap) c.solver.cap = *f.cap;
  if (f.seed) c.seed = *f.seed;
  return c;
}

int exit_code(const std::exception& e) {
  if (const auto* he = dynamic_cast<const hullscope::Error*>(&e))
    return he->code() == hullscope::ErrorCode::io ? 3 : 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hullscope: projective hulls, extremal functions and analytic-disc certificates"};
  app.set_version_flag("--version", hullscope::kVersion);
  app.require_subcommand(1);

  Flags flags;
  const char* help[] = {
      "classify a grid by best constant / extremal traces",
      "affine extremal function V_d over a grid",
      "minimize J over discs with boundary near the sample",
      "minimize boundary distance over discs centered at a point",
      "J functional of a serialized disc",
      "check a P-sequence certificate",
      "write a fixture (and its certificate when one exists)",
  };
  const auto names = hullscope::command_names();
  for (std::size_t i = 0; i < names.size(); ++i) add_flags(app.add_subcommand(names[i], help[i]), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc != 0) std::cout << json{{"error", {{"code", "usage"}, {"message", e.what()}}}}.dump() << "\n";
    return rc == 0 ? 0 : 2;
  }

  std::string out_dir;
  try {
    const hullscope::RunConfig cfg = resolve(app.get_subcommands().front()->get_name(), flags);
    out_dir = cfg.out;
    const hullscope::RunOutcome r = hullscope::run(cfg);
    std::cout << json{{"outputs", r.outputs}, {"summary", r.summary}}.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    const json err = hullscope::error_json(e);
    std::cout << err.dump() << "\n";
    std::cerr << "hullscope: " << e.what() << "\n";
    if (!out_dir.empty() && std::filesystem::is_directory(out_dir)) {
      try {
        hullscope::io::write_atomic(std::filesystem::path(out_dir) / "error.json", err.dump(2) + "\n");
      } catch (...) {
      }
    }
    return exit_code(e);
  }
}
