#include "hullscope/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace hullscope::io {

namespace {

Error bad(const std::string& what) { return Error(ErrorCode::invalid_input, what); }

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw bad(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw bad("not a number: '" + std::string(s) + "'");
  return v;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw bad("expected a number, got " + j.dump());
}

json to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw bad("complex numbers are [re, im] pairs, got " + j.dump());
  return {number_from(j[0]), number_from(j[1])};
}

json to_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

CVec cvec_from(const json& j) {
  if (!j.is_array()) throw bad("expected an array of complex numbers");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
  return v;
}

json to_json(const UPoly& p) {
  json a = json::array();
  for (const cplx c : p.coeffs) a.push_back(to_json(c));
  return a;
}

UPoly upoly_from(const json& j) {
  if (!j.is_array()) throw bad("polynomial coefficients must be an array");
  UPoly p;
  for (const auto& c : j) p.coeffs.push_back(complex_from(c));
  return p;
}

json to_json(const RationalDisc& f) {
  json comps = json::array();
  for (const UPoly& c : f.components) comps.push_back(to_json(c));
  json j = {{"mode", to_string(f.mode)}, {"degree", f.degree()}, {"components", comps}};
  if (f.mode == Mode::affine) j["denominator"] = to_json(f.denominator);
  return j;
}

RationalDisc disc_from(const json& j) {
  return guarded("disc", [&] {
    RationalDisc f;
    f.mode = mode_from_string(j.value("mode", std::string("projective")));
    for (const auto& c : j.at("components")) f.components.push_back(upoly_from(c));
    if (j.contains("denominator")) f.denominator = upoly_from(j.at("denominator"));
    if (f.components.empty()) throw bad("disc has no components");
    return f;
  });
}

json to_json(const Divisor& d) {
  json a = json::array();
  for (const DivisorPoint& p : d.points) a.push_back({number(p.point.real()), number(p.point.imag()), p.multiplicity});
  return a;
}

Divisor divisor_from(const json& j) {
  return guarded("divisor", [&] {
    Divisor d;
    for (const auto& e : j) {
      if (e.size() != 3) throw bad("divisor entries are [re, im, multiplicity]");
      d.points.push_back({{number_from(e[0]), number_from(e[1])}, e[2].get<int>()});
    }
    return d;
  });
}

namespace {

json header_of(const SampledCompact& k) {
  return {{"mode", to_string(k.mode)},
          {"connected", k.connected},
          {"circular", k.circular},
          {"resolution", number(k.resolution)}};
}

void apply_header(SampledCompact& k, const json& h) {
  k.mode = mode_from_string(h.value("mode", std::string("affine")));
  k.connected = h.value("connected", true);
  k.circular = h.value("circular", false);
  k.resolution = h.contains("resolution") ? number_from(h.at("resolution")) : 0.0;
}

}  // namespace

json to_json(const SampledCompact& k) {
  json pts = json::array();
  for (const CVec& p : k.points) pts.push_back(to_json(p));
  return {{"header", header_of(k)}, {"points", pts}};
}

SampledCompact compact_from(const json& j) {
  return guarded("compact", [&] {
    SampledCompact k;
    apply_header(k, j.value("header", json::object()));
    for (const auto& p : j.at("points")) k.points.push_back(cvec_from(p));
    if (!j.contains("header") || !j.at("header").contains("resolution")) k.resolution = estimate_resolution(k);
    return k;
  });
}

json to_json(const Fixture& f) {
  json oracles = json::array();
  for (const OracleEntry& o : f.oracles)
    oracles.push_back({{"point", to_json(o.point)}, {"quantity", o.quantity}, {"value", number(o.value)}, {"provenance", o.provenance}});
  return {{"name", f.name}, {"params", f.params}, {"compact", to_json(f.compact)}, {"oracles", oracles}};
}

Fixture fixture_from(const json& j) {
  return guarded("fixture", [&] {
    Fixture f;
    f.name = j.at("name").get<std::string>();
    f.params = j.value("params", json::object());
    f.compact = compact_from(j.at("compact"));
    for (const auto& o : j.value("oracles", json::array()))
      f.oracles.push_back({cvec_from(o.at("point")), o.at("quantity").get<std::string>(), number_from(o.at("value")),
                           o.value("provenance", std::string())});
    return f;
  });
}

json to_json(const Certificate& c) {
  json discs = json::array();
  for (const RationalDisc& f : c.discs) discs.push_back(to_json(f));
  json sched = json::array();
  for (const double e : c.schedule) sched.push_back(number(e));
  return {{"center", to_json(c.center)}, {"schedule", sched}, {"discs", discs}};
}

Certificate certificate_from(const json& j) {
  return guarded("certificate", [&] {
    Certificate c;
    c.center = cvec_from(j.at("center"));
    for (const auto& e : j.at("schedule")) c.schedule.push_back(number_from(e));
    for (const auto& d : j.at("discs")) c.discs.push_back(disc_from(d));
    return c;
  });
}

json to_json(const SolverConfig& c) {
  return {{"max_iterations", c.max_iterations},
          {"tolerance", number(c.tolerance)},
          {"cap", number(c.cap)},
          {"rank_tol", number(c.rank_tol)},
          {"growth_slope", number(c.growth_slope)}};
}

SolverConfig solver_config_from(const json& j, SolverConfig c) {
  return guarded("solver config", [&] {
    if (j.contains("max_iterations")) c.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("tolerance")) c.tolerance = number_from(j.at("tolerance"));
    if (j.contains("cap")) c.cap = number_from(j.at("cap"));
    if (j.contains("rank_tol")) c.rank_tol = number_from(j.at("rank_tol"));
    if (j.contains("growth_slope")) c.growth_slope = number_from(j.at("growth_slope"));
    if (c.max_iterations < 1 || !(c.tolerance > 0.0) || !(c.cap > 0.0))
      throw bad("solver config needs max_iterations >= 1, tolerance > 0, cap > 0");
    return c;
  });
}

json to_json(const SearchConfig& c) {
  return {{"seed", c.seed},       {"restarts", c.restarts},         {"iterations", c.iterations},
          {"nodes", c.nodes},     {"verify_nodes", c.verify_nodes}, {"penalty", number(c.penalty)}};
}

SearchConfig search_config_from(const json& j, SearchConfig c) {
  return guarded("search config", [&] {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("restarts")) c.restarts = j.at("restarts").get<int>();
    if (j.contains("iterations")) c.iterations = j.at("iterations").get<int>();
    if (j.contains("nodes")) c.nodes = j.at("nodes").get<int>();
    if (j.contains("verify_nodes")) c.verify_nodes = j.at("verify_nodes").get<int>();
    if (j.contains("penalty")) c.penalty = number_from(j.at("penalty"));
    if (c.restarts < 1 || c.iterations < 1 || c.nodes < 16 || c.verify_nodes < 16 || !(c.penalty > 0.0))
      throw bad("search config needs restarts, iterations >= 1, nodes >= 16, penalty > 0");
    return c;
  });
}

std::string flag_string(const SolveFlags& f) {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += '|';
    s += name;
  };
  add(f.in_sample, "in_sample");
  add(f.rank_deficient, "rank_deficient");
  add(f.unbounded, "unbounded");
  add(f.not_converged, "not_converged");
  return s.empty() ? "-" : s;
}

json to_json(const SolveFlags& f) {
  return {{"in_sample", f.in_sample}, {"rank_deficient", f.rank_deficient}, {"unbounded", f.unbounded}, {"not_converged", f.not_converged}};
}

json to_json(const HomPoly& p) {
  json coeffs = json::array();
  for (const auto& [alpha, c] : p.coeffs) coeffs.push_back({alpha, to_json(c)});
  return {{"n", p.n}, {"d", p.d}, {"coeffs", coeffs}};
}

HomPoly hompoly_from(const json& j) {
  return guarded("polynomial", [&] {
    HomPoly p;
    p.n = j.at("n").get<int>();
    p.d = j.at("d").get<int>();
    for (const auto& e : j.at("coeffs")) p.coeffs[e.at(0).get<MultiIndex>()] = complex_from(e.at(1));
    validate(p);
    return p;
  });
}

json to_json(const DiscSearchResult& r) {
  json hist = json::array();
  for (const Improvement& i : r.history)
    hist.push_back({{"restart", i.restart}, {"evaluation", i.evaluation}, {"objective", number(i.objective)},
                    {"J", number(i.j)}, {"distance", number(i.distance)}});
  return {{"disc", to_json(r.disc)},
          {"J", number(r.j)},
          {"boundary_distance", number(r.boundary_distance)},
          {"iterations", r.iterations},
          {"seed", r.seed},
          {"degree_budget", r.degree_budget},
          {"feasible", r.feasible},
          {"hypotheses_met", r.hypotheses_met},
          {"history", hist}};
}

json to_json(const CertificateReport& r) {
  json discs = json::array();
  for (const DiscCheck& c : r.discs) {
    discs.push_back({{"index", c.index},
                     {"epsilon", number(c.epsilon)},
                     {"center", {{"error", number(c.center_error)}, {"threshold", number(c.center_threshold)}, {"pass", c.center_ok}}},
                     {"measure", {{"value", number(c.measure)}, {"threshold", number(c.measure_threshold)}, {"pass", c.measure_ok}}},
                     {"boundary_max", number(c.boundary_max)},
                     {"blp", number(c.blp)},
                     {"J", number(c.j)}});
  }
  return {{"discs", discs},
          {"blp_constant", number(r.blp_constant)},
          {"verdicts",
           {{"centers", {{"pass", r.centers_ok}, {"threshold", number(1e-9)}}},
            {"measures", {{"pass", r.measures_ok}, {"threshold", "2*pi - eps_j"}}},
            {"bounded_lifting", {{"pass", r.blp_finite}, {"threshold", "finite sup"}}}}}};
}

namespace {

double cumulative_level(const HullPoint& p, Mode mode) {
  const double c = p.cumulative.empty() ? 0.0 : p.cumulative.back();
  return mode == Mode::projective ? std::log(c) : c;
}

}  // namespace

json to_json(const HullField& f) {
  json pts = json::array();
  std::size_t counts[3] = {0, 0, 0};
  for (const HullPoint& p : f.points) {
    json vals = json::array(), flags = json::array();
    for (const double v : p.values) vals.push_back(number(v));
    for (const SolveFlags& fl : p.flags) flags.push_back(flag_string(fl));
    pts.push_back({{"point", to_json(p.point)},
                   {"label", to_string(p.label)},
                   {"projective_finite", p.projective_finite},
                   {"growth_slope", number(p.growth_slope)},
                   {"cumulative", number(p.cumulative.empty() ? 0.0 : p.cumulative.back())},
                   {"values", vals},
                   {"flags", flags}});
    ++counts[static_cast<int>(p.label)];
  }
  return {{"mode", to_string(f.mode)},
          {"quantity", f.mode == Mode::projective ? "C" : "V"},
          {"lower_bounds", true},
          {"dmax", f.dmax},
          {"cap", number(f.cap)},
          {"growth_threshold", number(f.growth_threshold)},
          {"counts", {{"in-hull-at-budget", counts[0]}, {"growing", counts[1]}, {"flagged", counts[2]}}},
          {"points", pts}};
}

std::string compact_to_csv(const SampledCompact& k) {
  std::string out = "# " + header_of(k).dump() + "\n";
  const Eigen::Index len = k.points.empty() ? 0 : k.points.front().size();
  for (Eigen::Index i = 0; i < len; ++i) {
    if (i) out += ',';
    out += "z" + std::to_string(i) + "_re,z" + std::to_string(i) + "_im";
  }
  out += '\n';
  for (const CVec& p : k.points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += format_double(p(i).real()) + ',' + format_double(p(i).imag());
    }
    out += '\n';
  }
  return out;
}

SampledCompact compact_from_csv(std::string_view text) {
  SampledCompact k;
  k.mode = Mode::affine;
  bool have_header = false, have_columns = false, have_resolution = false;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header || have_columns) continue;
      const json h = guarded("csv header", [&] { return json::parse(line.substr(1)); });
      apply_header(k, h);
      have_resolution = h.contains("resolution");
      have_header = true;
      continue;
    }
    std::vector<std::string_view> cells;
    for (std::size_t pos = 0;;) {
      const std::size_t c = line.find(',', pos);
      cells.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
      if (c == std::string_view::npos) break;
      pos = c + 1;
    }
    if (!have_columns) {
      have_columns = true;
      width = cells.size();
      if (width == 0 || width % 2) throw bad("csv needs interleaved re,im column pairs");
      continue;
    }
    if (cells.size() != width) throw bad("csv row " + std::to_string(line_no) + " has the wrong number of columns");
    CVec p(static_cast<Eigen::Index>(width / 2));
    for (std::size_t i = 0; i < width / 2; ++i)
      p(static_cast<Eigen::Index>(i)) = {parse_double(cells[2 * i]), parse_double(cells[2 * i + 1])};
    k.points.push_back(std::move(p));
  }
  if (!have_resolution && !k.points.empty()) k.resolution = estimate_resolution(k);
  return k;
}

std::string hull_field_csv(const HullField& f) {
  std::string out;
  const Eigen::Index len = f.points.empty() ? 0 : f.points.front().point.size();
  for (Eigen::Index i = 0; i < len; ++i) out += "x" + std::to_string(i) + "_re,x" + std::to_string(i) + "_im,";
  out += f.mode == Mode::projective ? "d,C_d,cumulative,flags,label\n" : "d,V_d,cumulative,flags,label\n";
  for (const HullPoint& p : f.points) {
    std::string coords;
    for (Eigen::Index i = 0; i < p.point.size(); ++i)
      coords += format_double(p.point(i).real()) + ',' + format_double(p.point(i).imag()) + ',';
    for (std::size_t d = 0; d < p.degrees.size(); ++d) {
      out += coords + std::to_string(p.degrees[d]) + ',' + format_double(p.values[d]) + ',' +
             format_double(p.cumulative[d]) + ',' + flag_string(p.flags[d]) + ',' + std::string(to_string(p.label)) + '\n';
    }
  }
  return out;
}

std::string heatmap_pgm(const HullField& f, int nx, int ny) {
  if (nx < 1 || ny < 1 || static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) != f.points.size())
    throw bad("heatmap dimensions do not match the grid");
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  for (int row = ny - 1; row >= 0; --row) {
    for (int col = 0; col < nx; ++col) {
      const double v = cumulative_level(f.points[static_cast<std::size_t>(row) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(col)], f.mode);
      const double t = std::isfinite(v) ? std::clamp(v / f.cap, 0.0, 1.0) : 1.0;
      out += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

SampledCompact load_compact(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".csv") return compact_from_csv(text);
  const json j = guarded("input file", [&] { return json::parse(text); });
  if (j.contains("compact")) return compact_from(j.at("compact"));
  return compact_from(j);
}

}  // namespace hullscope::io
