#include "hullscope/fixtures.hpp"

#include <cmath>

namespace hullscope {

namespace {

using nlohmann::json;

int count_param(const json& p, const char* key, int fallback) {
  const int v = p.value(key, fallback);
  if (v < 16) throw Error(ErrorCode::invalid_input, std::string(key) + " must be at least 16");
  return v;
}

double real_param(const json& p, const char* key, double fallback) {
  const double v = p.value(key, fallback);
  if (!std::isfinite(v)) throw Error(ErrorCode::invalid_input, std::string(key) + " must be finite");
  return v;
}

CVec vec(std::initializer_list<cplx> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const cplx x : xs) v(i++) = x;
  return v;
}

cplx unit(double t) { return std::polar(1.0, t); }

// torus-like grids: covering radius is the distance from a sample to the
// cell midpoint
double grid_cover(const CVec& a, const CVec& mid, Mode mode) {
  return mode == Mode::projective ? fs_distance(project(a), project(mid)) : (a - mid).norm();
}

Fixture circle(const json& in) {
  Fixture f{"circle", json::object(), {}, {}};
  const int m = count_param(in, "samples", 256);
  f.params["samples"] = m;
  f.compact.mode = Mode::projective;
  for (int k = 0; k < m; ++k) f.compact.points.push_back(from_chart(vec({unit(kTwoPi * k / m)})).rep);
  f.compact.resolution = kPi / (2.0 * m);  // FS distance between [1:e^{ia}], [1:e^{ib}] is |a-b|/2
  const double s2 = std::sqrt(2.0);
  f.oracles.push_back({vec({1.0, 0.0}), "C", s2, "line over [1:0] meets the bidisc hull of the lifted circle in radius 1/sqrt2"});
  f.oracles.push_back({vec({1.0, 0.0}), "r", 1.0 / s2, "same bidisc hull"});
  f.oracles.push_back({vec({s2 / 2, s2 / 2}), "C", 1.0, "sample point"});
  return f;
}

Fixture torus3(const json& in) {
  Fixture f{"torus3", json::object(), {}, {}};
  const int ns = count_param(in, "ns", 32), nt = count_param(in, "nt", 32);
  f.params = {{"ns", ns}, {"nt", nt}};
  f.compact.mode = Mode::projective;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j)
      f.compact.points.push_back(project(vec({1.0, unit(kTwoPi * i / ns), unit(kTwoPi * j / nt)})).rep);
  f.compact.resolution =
      grid_cover(vec({1.0, 1.0, 1.0}), vec({1.0, unit(kPi / ns), unit(kPi / nt)}), Mode::projective);
  f.oracles.push_back({vec({1.0, 0.0, 0.0}), "C", std::sqrt(3.0), "tridisc hull of the lifted torus, |z0| = 1/sqrt3"});
  return f;
}

Fixture torus2(const json& in) {
  Fixture f{"torus2", json::object(), {}, {}};
  const int ns = count_param(in, "ns", 64), nt = count_param(in, "nt", 64);
  f.params = {{"ns", ns}, {"nt", nt}};
  f.compact.mode = Mode::affine;
  f.compact.circular = true;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) f.compact.points.push_back(vec({unit(kTwoPi * i / ns), unit(kTwoPi * j / nt)}));
  f.compact.resolution = grid_cover(vec({1.0, 1.0}), vec({unit(kPi / ns), unit(kPi / nt)}), Mode::affine);
  const double l2 = std::log(2.0);
  f.oracles.push_back({vec({2.0, 0.5}), "V", l2, "V = max log+|z_i| for the torus"});
  f.oracles.push_back({vec({2.0, 2.0}), "V", l2, "V = max log+|z_i| for the torus"});
  f.oracles.push_back({vec({0.5, 0.5}), "V", 0.0, "interior of the bidisc hull"});
  return f;
}

std::vector<cplx> complex_list(const json& j) {
  std::vector<cplx> out;
  for (const auto& c : j) {
    if (c.is_number()) out.emplace_back(c.get<double>(), 0.0);
    else out.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  }
  return out;
}

Fixture graph_curve(const json& in) {
  Fixture f{"graph-curve", json::object(), {}, {}};
  const int m = count_param(in, "samples", 256);
  const json g = in.value("g", json::array({0, 0, 1}));
  const UPoly poly{complex_list(g)};
  if (poly.coeffs.empty()) throw Error(ErrorCode::invalid_input, "g must have at least one coefficient");
  f.params = {{"samples", m}, {"g", g}};
  f.compact.mode = Mode::affine;
  for (int k = 0; k < m; ++k) {
    const cplx z = unit(kTwoPi * k / m);
    f.compact.points.push_back(vec({z, poly(z)}));
  }
  f.compact.resolution = estimate_resolution(f.compact);
  return f;
}

Fixture two_tori(const json& in) {
  Fixture f{"two-tori", json::object(), {}, {}};
  const double sep = real_param(in, "sep", 0.5), center = real_param(in, "center", std::sqrt(0.5));
  const int ns = count_param(in, "ns", 32), nt = count_param(in, "nt", 32);
  const double r1 = center - sep / 2, r2 = center + sep / 2;
  if (!(sep > 0.0) || !(r1 > 0.0) || !(r2 < 1.0))
    throw Error(ErrorCode::invalid_input, "two-tori needs 0 < center - sep/2 and center + sep/2 < 1");
  f.params = {{"sep", sep}, {"center", center}, {"ns", ns}, {"nt", nt}};
  f.compact.mode = Mode::affine;
  f.compact.circular = true;
  f.compact.connected = false;
  double cover = 0.0;
  for (const double a : {r1, r2}) {
    const double b = std::sqrt(1.0 - a * a);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j)
        f.compact.points.push_back(vec({a * unit(kTwoPi * i / ns), b * unit(kTwoPi * j / nt)}));
    cover = std::max(cover, grid_cover(vec({a, b}), vec({a * unit(kPi / ns), b * unit(kPi / nt)}), Mode::affine));
  }
  f.compact.resolution = cover;
  return f;
}

Fixture annulus(const json& in) {
  Fixture f{"annulus", json::object(), {}, {}};
  const double r_in = real_param(in, "r_in", 1.5), r_out = real_param(in, "r_out", 2.5);
  const int nt = count_param(in, "ntheta", 256);
  const int nr = in.value("nr", 11);
  if (!(0.0 <= r_in && r_in < r_out) || nr < 2) throw Error(ErrorCode::invalid_input, "annulus needs 0 <= r_in < r_out, nr >= 2");
  f.params = {{"r_in", r_in}, {"r_out", r_out}, {"nr", nr}, {"ntheta", nt}};
  f.compact.mode = Mode::affine;
  f.compact.circular = true;
  for (int i = 0; i < nr; ++i) {
    const double r = r_in + (r_out - r_in) * i / (nr - 1);
    for (int k = 0; k < nt; ++k) f.compact.points.push_back(vec({r * unit(kTwoPi * k / nt)}));
  }
  const double dr = (r_out - r_in) / (nr - 1);
  f.compact.resolution = 0.5 * std::hypot(dr, 2.0 * r_out * std::sin(kPi / nt));
  const double p = 6.0;
  f.oracles.push_back({vec({p}), "V", std::log(p / r_out), "V = log+(|z|/r_out) for a closed annulus"});
  return f;
}

Fixture unit_circle(const json& in) {
  Fixture f{"unit-circle", json::object(), {}, {}};
  const int m = count_param(in, "samples", 256);
  const double radius = real_param(in, "radius", 1.0);
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_input, "radius must be positive");
  f.params = {{"samples", m}, {"radius", radius}};
  f.compact.mode = Mode::affine;
  f.compact.circular = true;
  for (int k = 0; k < m; ++k) f.compact.points.push_back(vec({radius * unit(kTwoPi * k / m)}));
  f.compact.resolution = 2.0 * radius * std::sin(kPi / (2.0 * m));
  f.oracles.push_back({vec({2.0 * radius}), "V", std::log(2.0), "V = log+(|z|/radius)"});
  f.oracles.push_back({vec({0.0}), "V", 0.0, "center of the disc hull"});
  return f;
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"circle", "torus3", "torus2", "graph-curve", "two-tori", "annulus", "unit-circle"};
}

Fixture generate(std::string_view name, const nlohmann::json& params) {
  if (!params.is_object()) throw Error(ErrorCode::invalid_input, "generator params must be a JSON object");
  try {
    if (name == "circle") return circle(params);
    if (name == "torus3") return torus3(params);
    if (name == "torus2") return torus2(params);
    if (name == "graph-curve") return graph_curve(params);
    if (name == "two-tori") return two_tori(params);
    if (name == "annulus") return annulus(params);
    if (name == "unit-circle") return unit_circle(params);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input, std::string("bad generator params: ") + e.what());
  }
  throw Error(ErrorCode::invalid_input, "unknown generator '" + std::string(name) + "'");
}

Certificate standard_certificate(const Fixture& fixture, int length) {
  if (length < 1) throw Error(ErrorCode::invalid_input, "certificate length must be positive");
  Certificate c;
  for (int j = 1; j <= length; ++j) c.schedule.push_back(1.0 / j);
  if (fixture.name == "circle") {
    c.center = vec({1.0, 0.0});
    for (int j = 1; j <= length; ++j)
      c.discs.push_back(RationalDisc::projective({UPoly{1.0}, UPoly::monomial(j)}));
  } else if (fixture.name == "torus2") {
    c.center = vec({0.0, 0.0});
    for (int j = 1; j <= length; ++j)
      c.discs.push_back(RationalDisc::affine({UPoly::monomial(j), UPoly::monomial(j + 1)}));
  } else {
    throw Error(ErrorCode::invalid_input, "no standard certificate for fixture '" + fixture.name + "'");
  }
  return c;
}

}  // namespace hullscope
