#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hullscope/projgeom.hpp"
#include "hullscope/rational_disc.hpp"

namespace hullscope {

/// A known value at a point: quantity is one of "C", "r", "V", "J".
struct OracleEntry {
  CVec point;
  std::string quantity;
  double value = 0.0;
  std::string provenance;
  friend bool operator==(const OracleEntry&, const OracleEntry&) = default;
};

struct Fixture {
  std::string name;
  nlohmann::json params;  ///< fully resolved, defaults filled in
  SampledCompact compact;
  std::vector<OracleEntry> oracles;
  friend bool operator==(const Fixture&, const Fixture&) = default;
};

/// Deterministic generators:
///   circle        {[1:e^{it}]} in P^1                      samples (256)
///   torus3        {[1:e^{is}:e^{it}]} in P^2               ns, nt (32, 32)
///   torus2        {(e^{is}, e^{it})} in C^2                ns, nt (64, 64)
///   graph-curve   {(e^{it}, g(e^{it}))} in C^2             samples (256), g ([0,0,1] ascending [re,im] or reals)
///   two-tori      |z1| = center -+ sep/2 on the unit sphere of C^2, circular, disconnected
///                                                          sep (0.5), center (1/sqrt 2), ns, nt (32, 32)
///   annulus       {r_in <= |z| <= r_out} in C              r_in (1.5), r_out (2.5), nr (11), ntheta (256)
///   unit-circle   {|z| = radius} in C                      samples (256), radius (1)
Fixture generate(std::string_view name, const nlohmann::json& params = nlohmann::json::object());

std::vector<std::string> generator_names();

/// A P-sequence through the center of the fixture, with eps_j = 1/j:
/// circle -> [1 : zeta^j] at [1:0]; torus2 -> (zeta^j, zeta^{j+1}) at (0,0).
struct Certificate {
  std::vector<RationalDisc> discs;
  CVec center;
  std::vector<double> schedule;
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

Certificate standard_certificate(const Fixture& fixture, int length = 8);

}  // namespace hullscope
