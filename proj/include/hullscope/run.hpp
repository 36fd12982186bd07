#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hullscope/hullengine.hpp"

namespace hullscope {

inline constexpr const char* kVersion = "0.1.0";

/// Everything a run depends on. Serialized verbatim into the manifest; a
/// manifest passed back as --config reproduces the run.
struct RunConfig {
  std::string command;
  std::string input;                  ///< compact, disc or certificate file, by command
  std::string generator;              ///< fixture name when no compact input is given
  nlohmann::json generator_params = nlohmann::json::object();
  int dmax = 8;
  std::string grid;                   ///< "s0:s1:ns[,t0:t1:nt]"
  nlohmann::json grid_frame = nlohmann::json::object();  ///< optional base / u / v vectors
  nlohmann::json points = nlohmann::json::array();       ///< explicit query points
  SolverConfig solver;
  SearchConfig search;
  int degree = 2;
  double margin = 0.05;
  nlohmann::json point = nlohmann::json::array();        ///< search center
  nlohmann::json hyperplane = nlohmann::json::array();   ///< j-eval; empty means z_0 = 0
  int quadrature = 1024;
  int certificate_length = 8;
  std::string out = "hullscope-out";
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const RunConfig& c);
/// Keys absent from j keep the values of `base`. Accepts a manifest too.
RunConfig run_config_from(const nlohmann::json& j, RunConfig base = {});

std::vector<std::string> command_names();

struct RunOutcome {
  std::vector<std::string> outputs;  ///< file names inside the output directory
  nlohmann::json summary;
};

/// Executes the command, writes its outputs and manifest.json atomically into
/// c.out. Throws hullscope::Error on validation failures.
RunOutcome run(const RunConfig& c, int threads = 0);

/// {"error": {"code": ..., "message": ...}}
nlohmann::json error_json(const std::exception& e);

/// Query points of a run: explicit points, else the grid. For projective
/// samples the grid lives on the chart [1 : w]. nx, ny receive the grid shape
/// (0 when points were explicit).
std::vector<CVec> query_points(const RunConfig& c, const SampledCompact& k, int* nx = nullptr, int* ny = nullptr);

}  // namespace hullscope
