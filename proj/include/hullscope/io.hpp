#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hullscope/discs.hpp"
#include "hullscope/fixtures.hpp"
#include "hullscope/hullengine.hpp"
#include "hullscope/polyspace.hpp"

namespace hullscope::io {

using nlohmann::json;

/// Shortest decimal form that parses back to the same double; non-finite
/// values become "inf", "-inf", "nan".
std::string format_double(double v);
double parse_double(std::string_view s);

/// Doubles go through json as numbers when finite and as the strings above
/// otherwise (JSON has no infinities).
json number(double v);
double number_from(const json& j);

json to_json(cplx z);
cplx complex_from(const json& j);
json to_json(const CVec& v);
CVec cvec_from(const json& j);
json to_json(const UPoly& p);
UPoly upoly_from(const json& j);

json to_json(const RationalDisc& f);
RationalDisc disc_from(const json& j);
json to_json(const Divisor& d);
Divisor divisor_from(const json& j);
json to_json(const SampledCompact& k);
SampledCompact compact_from(const json& j);
json to_json(const Fixture& f);
Fixture fixture_from(const json& j);
json to_json(const Certificate& c);
Certificate certificate_from(const json& j);
json to_json(const SolverConfig& c);
SolverConfig solver_config_from(const json& j, SolverConfig base = {});
json to_json(const SearchConfig& c);
SearchConfig search_config_from(const json& j, SearchConfig base = {});
json to_json(const SolveFlags& f);
json to_json(const HomPoly& p);
HomPoly hompoly_from(const json& j);
json to_json(const DiscSearchResult& r);
json to_json(const CertificateReport& r);
json to_json(const HullField& f);

/// "in_sample|unbounded" style flag list, "-" when clear.
std::string flag_string(const SolveFlags& f);

/// Point cloud CSV: optional first line "# {json header}", then a header row
/// z0_re,z0_im,z1_re,... and one point per row.
std::string compact_to_csv(const SampledCompact& k);
SampledCompact compact_from_csv(std::string_view text);

/// Long-format trace table: coordinates, d, value, cumulative, flags, label.
std::string hull_field_csv(const HullField& f);

/// 8-bit binary PGM (P5) of cumulative log C (or V) clamped to [0, cap] over
/// an nx by ny grid stored row-major, first row at the top.
std::string heatmap_pgm(const HullField& f, int nx, int ny);

std::string read_file(const std::filesystem::path& path);
/// Writes a sibling temp file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Loads a SampledCompact from .json (compact or fixture) or .csv.
SampledCompact load_compact(const std::filesystem::path& path);

}  // namespace hullscope::io
