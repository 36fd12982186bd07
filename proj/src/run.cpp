#include "hullscope/run.hpp"

#include <algorithm>
#include <cmath>

#include "hullscope/fixtures.hpp"
#include "hullscope/io.hpp"

namespace hullscope {

using nlohmann::json;

namespace {

Error bad(const std::string& what) { return Error(ErrorCode::invalid_input, what); }

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"input", c.input},
          {"generator", c.generator},
          {"generator_params", c.generator_params},
          {"dmax", c.dmax},
          {"grid", c.grid},
          {"grid_frame", c.grid_frame},
          {"points", c.points},
          {"solver", io::to_json(c.solver)},
          {"search", io::to_json(c.search)},
          {"degree", c.degree},
          {"margin", io::number(c.margin)},
          {"point", c.point},
          {"hyperplane", c.hyperplane},
          {"quadrature", c.quadrature},
          {"certificate_length", c.certificate_length},
          {"out", c.out},
          {"seed", c.seed}};
}

RunConfig run_config_from(const json& in, RunConfig c) {
  if (!in.is_object()) throw bad("config must be a JSON object");
  // a manifest carries the config it was produced from
  const json& j = in.contains("manifest_version") && in.contains("config") ? in.at("config") : in;
  try {
    auto str = [&](const char* key, std::string& dst) {
      if (j.contains(key)) dst = j.at(key).get<std::string>();
    };
    str("command", c.command);
    str("input", c.input);
    str("generator", c.generator);
    str("grid", c.grid);
    str("out", c.out);
    if (j.contains("generator_params")) c.generator_params = j.at("generator_params");
    if (j.contains("grid_frame")) c.grid_frame = j.at("grid_frame");
    if (j.contains("points")) c.points = j.at("points");
    if (j.contains("point")) c.point = j.at("point");
    if (j.contains("hyperplane")) c.hyperplane = j.at("hyperplane");
    if (j.contains("dmax")) c.dmax = j.at("dmax").get<int>();
    if (j.contains("degree")) c.degree = j.at("degree").get<int>();
    if (j.contains("margin")) c.margin = io::number_from(j.at("margin"));
    if (j.contains("quadrature")) c.quadrature = j.at("quadrature").get<int>();
    if (j.contains("certificate_length")) c.certificate_length = j.at("certificate_length").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("solver")) c.solver = io::solver_config_from(j.at("solver"), c.solver);
    if (j.contains("search")) c.search = io::search_config_from(j.at("search"), c.search);
    // flat aliases for the common knobs
    if (j.contains("cap")) c.solver.cap = io::number_from(j.at("cap"));
  } catch (const json::exception& e) {
    throw bad(std::string("bad config: ") + e.what());
  }
  return c;
}

std::vector<std::string> command_names() {
  return {"hull-field", "extremal", "disc-search", "boundary-search", "j-eval", "verify-psequence", "generate"};
}

json error_json(const std::exception& e) {
  const auto* he = dynamic_cast<const Error*>(&e);
  const std::string code = he ? std::string(to_string(he->code())) : "internal";
  return {{"error", {{"code", code}, {"message", e.what()}}}};
}

namespace {

struct Axis {
  double lo = 0.0, hi = 0.0;
  int count = 1;
  double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

Axis parse_axis(std::string_view s) {
  const std::size_t a = s.find(':');
  const std::size_t b = a == std::string_view::npos ? a : s.find(':', a + 1);
  if (b == std::string_view::npos) throw bad("grid axes are lo:hi:count, got '" + std::string(s) + "'");
  Axis ax{io::parse_double(s.substr(0, a)), io::parse_double(s.substr(a + 1, b - a - 1)), 0};
  const double n = io::parse_double(s.substr(b + 1));
  if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) throw bad("grid count must be a positive integer");
  ax.count = static_cast<int>(n);
  if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi)) throw bad("grid bounds must be finite");
  return ax;
}

CVec frame_vector(const json& frame, const char* key, CVec fallback) {
  if (!frame.contains(key)) return fallback;
  CVec v = io::cvec_from(frame.at(key));
  if (v.size() != fallback.size()) throw Error(ErrorCode::dimension_mismatch, std::string("grid_frame.") + key + " has the wrong length");
  return v;
}

}  // namespace

std::vector<CVec> query_points(const RunConfig& c, const SampledCompact& k, int* nx, int* ny) {
  const Eigen::Index n = k.dim();
  const bool proj = k.mode == Mode::projective;
  auto to_query = [&](const CVec& w) {
    if (!proj) return w;
    CVec z(n + 1);
    z << 1.0, w;
    return z;
  };
  std::vector<CVec> out;
  if (nx) *nx = 0;
  if (ny) *ny = 0;
  if (!c.points.empty()) {
    for (const auto& pj : c.points) {
      const CVec p = io::cvec_from(pj);
      if (p.size() == n) out.push_back(to_query(p));
      else if (proj && p.size() == n + 1) out.push_back(p);
      else throw Error(ErrorCode::dimension_mismatch, "query point has the wrong length");
    }
    return out;
  }
  if (c.grid.empty()) throw bad("no query points: give --grid or points");
  const std::size_t comma = c.grid.find(',');
  const Axis s = parse_axis(std::string_view(c.grid).substr(0, comma));
  const Axis t = comma == std::string::npos ? Axis{} : parse_axis(std::string_view(c.grid).substr(comma + 1));
  CVec e1 = CVec::Zero(n), e2 = CVec::Zero(n);
  e1(0) = 1.0;
  if (n == 1) e2(0) = cplx(0.0, 1.0);
  else e2(1) = 1.0;
  const CVec base = frame_vector(c.grid_frame, "base", CVec::Zero(n));
  const CVec u = frame_vector(c.grid_frame, "u", e1);
  const CVec v = frame_vector(c.grid_frame, "v", e2);
  for (int it = 0; it < t.count; ++it)
    for (int is = 0; is < s.count; ++is) out.push_back(to_query(base + s.at(is) * u + t.at(it) * v));
  if (nx) *nx = s.count;
  if (ny) *ny = t.count;
  return out;
}

namespace {

namespace fs = std::filesystem;

struct Writer {
  fs::path dir;
  std::vector<std::string> names;
  void put(const std::string& name, std::string_view text) {
    io::write_atomic(dir / name, text);
    names.push_back(name);
  }
  void put_json(const std::string& name, const json& j) { put(name, j.dump(2) + "\n"); }
};

Fixture fixture_for(const RunConfig& c) {
  if (c.generator.empty()) throw bad("give --generator or --input");
  return generate(c.generator, c.generator_params);
}

SampledCompact compact_for(const RunConfig& c) {
  SampledCompact k = c.input.empty() ? fixture_for(c).compact : io::load_compact(c.input);
  validate(k);
  return k;
}

CVec required_point(const RunConfig& c, Eigen::Index n) {
  if (c.point.empty()) throw bad("this command needs a center point (config key \"point\")");
  CVec p = io::cvec_from(c.point);
  if (p.size() != n) throw Error(ErrorCode::dimension_mismatch, "center point has the wrong length");
  return p;
}

SearchConfig search_for(const RunConfig& c) {
  SearchConfig s = c.search;
  s.seed = c.seed;
  return s;
}

json run_generate(const RunConfig& c, Writer& w) {
  const Fixture f = fixture_for(c);
  w.put_json("fixture.json", io::to_json(f));
  w.put("fixture.csv", io::compact_to_csv(f.compact));
  json summary = {{"name", f.name},
                  {"params", f.params},
                  {"points", f.compact.points.size()},
                  {"resolution", io::number(f.compact.resolution)},
                  {"circular", f.compact.circular},
                  {"connected", f.compact.connected}};
  if (f.name == "circle" || f.name == "torus2") {
    json cert = io::to_json(standard_certificate(f, c.certificate_length));
    cert["generator"] = {{"name", f.name}, {"params", f.params}};
    w.put_json("certificate.json", cert);
  }
  return summary;
}

json run_field(const RunConfig& c, Writer& w, int threads, bool extremal) {
  const SampledCompact k = compact_for(c);
  if (extremal && k.mode != Mode::affine) throw bad("extremal needs an affine sample in C^n");
  if (c.dmax < 1) throw bad("dmax must be at least 1");
  int nx = 0, ny = 0;
  const std::vector<CVec> grid = query_points(c, k, &nx, &ny);
  const HullField field = classify_hull(k, grid, c.dmax, c.solver, threads);
  json summary = io::to_json(field);
  if (extremal) {
    std::string csv;
    const Eigen::Index len = k.dim();
    for (Eigen::Index i = 0; i < len; ++i) csv += "z" + std::to_string(i) + "_re,z" + std::to_string(i) + "_im,";
    csv += "d,V_d,cumulative,flags,finite\n";
    for (const HullPoint& p : field.points) {
      std::string coords;
      for (Eigen::Index i = 0; i < p.point.size(); ++i)
        coords += io::format_double(p.point(i).real()) + ',' + io::format_double(p.point(i).imag()) + ',';
      for (std::size_t d = 0; d < p.degrees.size(); ++d)
        csv += coords + std::to_string(p.degrees[d]) + ',' + io::format_double(p.values[d]) + ',' +
               io::format_double(p.cumulative[d]) + ',' + io::flag_string(p.flags[d]) + ',' +
               (p.projective_finite ? "true" : "false") + '\n';
    }
    w.put("extremal.csv", csv);
    w.put_json("extremal.json", summary);
  } else {
    w.put("hull_field.csv", io::hull_field_csv(field));
    w.put_json("hull_field.json", summary);
  }
  if (nx > 1 && ny > 1) w.put(extremal ? "extremal.pgm" : "heatmap.pgm", io::heatmap_pgm(field, nx, ny));
  summary.erase("points");
  return summary;
}

json run_disc_search(const RunConfig& c, Writer& w) {
  const SampledCompact k = compact_for(c);
  const CVec p = required_point(c, k.dim());
  CVec h = CVec::Zero(k.dim() + 1);
  h(0) = 1.0;
  const DiscSearchResult r = disc_search_envelope(k, c.margin, p, c.degree, h, search_for(c));
  json j = io::to_json(r);
  j["margin"] = io::number(c.margin);
  w.put_json("disc_search.json", j);
  w.put_json("disc.json", io::to_json(r.disc));
  return {{"J", io::number(r.j)}, {"feasible", r.feasible}, {"boundary_distance", io::number(r.boundary_distance)}};
}

json run_boundary_search(const RunConfig& c, Writer& w) {
  const SampledCompact k = compact_for(c);
  const CVec p = required_point(c, k.dim());
  const DiscSearchResult r = disc_search_boundary(k, p, c.degree, search_for(c));
  json j = io::to_json(r);
  j["resolution"] = io::number(k.resolution);
  w.put_json("boundary_search.json", j);
  w.put_json("disc.json", io::to_json(r.disc));
  return {{"boundary_distance", io::number(r.boundary_distance)},
          {"resolution", io::number(k.resolution)},
          {"hypotheses_met", r.hypotheses_met}};
}

json run_j_eval(const RunConfig& c, Writer& w) {
  if (c.input.empty()) throw bad("j-eval needs --input <disc.json>");
  const json in = json::parse(io::read_file(c.input), nullptr, false);
  if (in.is_discarded()) throw bad("input is not valid JSON");
  RationalDisc f = io::disc_from(in.contains("disc") ? in.at("disc") : in);
  if (f.mode == Mode::affine) {
    std::vector<UPoly> comps{f.denominator};
    comps.insert(comps.end(), f.components.begin(), f.components.end());
    f = RationalDisc::projective(std::move(comps));
  }
  CVec h;
  if (c.hyperplane.empty()) {
    h = CVec::Zero(f.size());
    h(0) = 1.0;
  } else {
    h = io::cvec_from(c.hyperplane);
  }
  if (h.size() != f.size()) throw Error(ErrorCode::dimension_mismatch, "hyperplane length differs from the disc");
  const Divisor d = hyperplane_divisor(f, h);
  const json j = {{"J", io::number(j_functional(d))}, {"divisor", io::to_json(d)}, {"hyperplane", io::to_json(h)}};
  w.put_json("j_eval.json", j);
  return j;
}

json run_verify(const RunConfig& c, Writer& w) {
  Certificate cert;
  SampledCompact k;
  if (!c.input.empty()) {
    const json in = json::parse(io::read_file(c.input), nullptr, false);
    if (in.is_discarded()) throw bad("input is not valid JSON");
    cert = io::certificate_from(in);
    if (in.contains("compact")) {
      k = io::compact_from(in.at("compact"));
    } else if (in.contains("generator")) {
      k = generate(in.at("generator").at("name").get<std::string>(), in.at("generator").value("params", json::object())).compact;
    } else {
      k = fixture_for(c).compact;
    }
  } else {
    const Fixture f = fixture_for(c);
    cert = standard_certificate(f, c.certificate_length);
    k = f.compact;
  }
  const CertificateReport rep = verify_psequence(cert.discs, k, cert.center, cert.schedule, c.quadrature);
  json j = io::to_json(rep);
  j["center"] = io::to_json(cert.center);
  j["quadrature"] = c.quadrature;
  w.put_json("certificate_report.json", j);
  return j["verdicts"];
}

}  // namespace

RunOutcome run(const RunConfig& c, int threads) {
  const auto names = command_names();
  if (std::find(names.begin(), names.end(), c.command) == names.end())
    throw bad("unknown command '" + c.command + "'");
  Writer w{c.out, {}};
  std::error_code ec;
  fs::create_directories(w.dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + c.out + ": " + ec.message());

  json summary;
  if (c.command == "generate") summary = run_generate(c, w);
  else if (c.command == "hull-field") summary = run_field(c, w, threads, false);
  else if (c.command == "extremal") summary = run_field(c, w, threads, true);
  else if (c.command == "disc-search") summary = run_disc_search(c, w);
  else if (c.command == "boundary-search") summary = run_boundary_search(c, w);
  else if (c.command == "j-eval") summary = run_j_eval(c, w);
  else summary = run_verify(c, w);

  std::vector<std::string> outputs = w.names;
  const json manifest = {{"manifest_version", 1},
                         {"tool", "hullscope"},
                         {"version", kVersion},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                       std::to_string(EIGEN_MINOR_VERSION)},
                         {"seed", c.seed},
                         {"config", to_json(c)},
                         {"outputs", outputs},
                         {"summary", summary}};
  w.put_json("manifest.json", manifest);
  return {outputs, summary};
}

}  // namespace hullscope
