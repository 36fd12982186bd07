// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Usage: acceptance [criterion ...]   (all ten when no argument is given)

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hullscope/discs.hpp"
#include "hullscope/fixtures.hpp"
#include "hullscope/hullengine.hpp"
#include "hullscope/io.hpp"
#include "hullscope/polyspace.hpp"
#include "hullscope/rng.hpp"
#include "hullscope/run.hpp"
#include "oracles.hpp"

using namespace hullscope;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CVec vec(std::initializer_list<cplx> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const cplx x : xs) v(i++) = x;
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::pair<cplx, int>> random_zeros(Rng& rng, int count) {
  std::vector<std::pair<cplx, int>> z;
  for (int k = 0; k < count; ++k)
    z.push_back({std::polar(rng.uniform(0.05, 0.95), rng.uniform(0.0, kTwoPi)), 1 + static_cast<int>(rng.next() % 3)});
  return z;
}

Divisor to_divisor(const std::vector<std::pair<cplx, int>>& z) {
  Divisor d;
  for (const auto& [a, m] : z) d.points.push_back({a, m});
  return d;
}

UPoly z_minus(cplx a, int m = 1) {
  UPoly p{1.0};
  for (int k = 0; k < m; ++k) p = p * UPoly{-a, 1.0};
  return p;
}

Verdict circle_constant() {
  const auto t0 = std::chrono::steady_clock::now();
  const Fixture c = generate("circle", {{"samples", 256}});
  const BestConstantTrace t = best_constant(c.compact, project(vec({1.0, 0.0})), 8);
  const double secs = seconds_since(t0);
  const double cval = t.cumulative.back();
  const bool ok = std::abs(cval - std::sqrt(2.0)) < 1e-3 && std::abs(t.radius - 1 / std::sqrt(2.0)) < 1e-3 && secs < 10;
  return {ok, fmt("C=%.9f (want sqrt2 +-1e-3) r=%.9f (want 1/sqrt2 +-1e-3) time=%.2fs (<10s)", cval, t.radius, secs)};
}

Verdict torus3_constant() {
  const auto t0 = std::chrono::steady_clock::now();
  const Fixture t = generate("torus3", {{"ns", 32}, {"nt", 32}});
  const BestConstantTrace tr = best_constant(t.compact, project(vec({1.0, 0.0, 0.0})), 6);
  const double secs = seconds_since(t0);
  const double cval = tr.cumulative.back();
  const double rel = std::abs(cval / std::sqrt(3.0) - 1);
  return {rel < 0.01 && secs < 60, fmt("C=%.6f (want sqrt3 within 1%%, rel err %.2e) time=%.2fs (<60s)", cval, rel, secs)};
}

Verdict affine_extremal_values() {
  const auto t0 = std::chrono::steady_clock::now();
  const double v1 = affine_extremal(generate("unit-circle").compact, vec({2.0}), 16).cumulative.back();
  const double v2 = affine_extremal(generate("torus2").compact, vec({2.0, 0.5}), 20).cumulative.back();
  const double e1 = std::abs(v1 - std::log(2.0)), e2 = std::abs(v2 - std::log(2.0));
  return {e1 < 1e-3 && e2 < 1e-2,
          fmt("circle V(2)=%.9f err %.1e (<1e-3); torus V(2,1/2)=%.9f err %.1e (<1e-2) time=%.2fs", v1, e1, v2, e2,
              seconds_since(t0))};
}

Verdict blaschke_identity() {
  Rng rng(4001);
  const auto nodes = circle_nodes(1024);
  double worst_center = 0.0, worst_mod = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto zeros = random_zeros(rng, 1 + static_cast<int>(rng.next() % 6));
    const BlaschkeProduct b = blaschke_from_divisor(to_divisor(zeros));
    const double j = j_functional(to_divisor(zeros));
    worst_center = std::max(worst_center, std::abs(std::abs(b.at_zero()) - std::exp(-oracle::j_of(zeros))));
    worst_center = std::max(worst_center, std::abs(j - oracle::j_of(zeros)));
    for (const cplx z : nodes) worst_mod = std::max(worst_mod, std::abs(std::abs(b(z)) - 1.0));
  }
  return {worst_center < 1e-10 && worst_mod < 1e-10,
          fmt("100 divisors: max ||B(0)|-e^-J|=%.1e, max ||B|-1| on 1024 nodes=%.1e (both <1e-10)", worst_center,
              worst_mod)};
}

Verdict pole_cancellation() {
  Rng rng(5001);
  const CVec h = vec({1, 0, 0});
  double center = 0.0, image = 0.0;
  int vanishing = 0;
  for (int t = 0; t < 50; ++t) {
    UPoly q{1.0};
    for (const auto& [a, m] : random_zeros(rng, 1 + static_cast<int>(rng.next() % 3))) q = q * z_minus(a, m);
    q = q * z_minus(std::polar(rng.uniform(1.5, 3.0), rng.uniform(0.0, kTwoPi)));
    std::vector<UPoly> comps{q};
    for (int i = 0; i < 2; ++i) {
      UPoly n;
      for (int k = 0; k <= 3; ++k) n.coeffs.push_back(rng.complex_normal());
      comps.push_back(n);
    }
    const RationalDisc g = RationalDisc::projective(comps);
    const PoleCancellation pc = cancel_poles(g, h, AffineChart{0});
    const CVec g0 = chart_value(g, h, AffineChart{0}, 0.0);
    center = std::max(center, (pc.disc(0.0) - g0).norm() / std::max(1.0, g0.norm()));
    for (const cplx z : circle_nodes(64))
      image = std::max(image, oracle::fs_sin(pc.disc(z), chart_value(g, h, AffineChart{0}, z)));
    for (const cplx r : roots(pc.disc.denominator))
      if (std::abs(r) <= 1.0) ++vanishing;
    if (!common_zeros_in_closed_disc(pc.disc.components).empty()) ++vanishing;
  }
  return {center < 1e-9 && image < 1e-9 && vanishing == 0,
          fmt("50 discs: max |F(0)-G(0)| (rel)=%.1e, max sin FS(F,G) on 64 nodes=%.1e (<1e-9); zeros/poles on closed disc: %d",
              center, image, vanishing)};
}

Verdict envelope_inequality() {
  Rng rng(6001);
  const double rho = 0.05;
  const Fixture omega[] = {generate("annulus", {{"r_in", 1.5 - rho}, {"r_out", 2.5 + rho}, {"nr", 6}, {"ntheta", 128}}),
                           generate("annulus", {{"r_in", 1 - rho}, {"r_out", 1 + rho}, {"nr", 3}, {"ntheta", 128}})};
  const double radius[][2] = {{1.5, 2.5}, {1.0, 1.0}};
  int violations = 0;
  double worst = -INFINITY;
  for (int t = 0; t < 20; ++t) {
    const int which = t % 2;
    const double target = rng.uniform(radius[which][0], radius[which][1]);
    const cplx a = std::polar(rng.uniform(0.1, 0.9), rng.uniform(0.0, kTwoPi));
    const cplx c = std::polar(target, rng.uniform(0.0, kTwoPi));
    // c (1 - conj(a) z) / (z - a): boundary on |w| = target, center -c/a, J = -log|a|
    const RationalDisc f = RationalDisc::projective({UPoly{-a, 1.0}, UPoly{c, -c * std::conj(a)}});
    const double j = j_functional(f, vec({1.0, 0.0}));
    const CVec p = f(0.0).tail(1) / f(0.0)(0);
    const double v = affine_extremal(omega[which].compact, p, 12).cumulative.back();
    worst = std::max(worst, v - j);
    if (v > j + 0.05) ++violations;
  }
  return {violations == 0, fmt("20 triples: max V_12(p) - J(f) = %.4f (<= 0.05), violations %d", worst, violations)};
}

Verdict envelope_attainment() {
  const auto t0 = std::chrono::steady_clock::now();
  const Fixture a = generate("annulus");  // 1.5 <= |z| <= 2.5
  SearchConfig cfg;
  cfg.seed = 7;
  cfg.restarts = 8;
  const double rho = 0.05;
  const DiscSearchResult r = disc_search_envelope(a.compact, rho, vec({6.0}), 2, vec({1.0, 0.0}), cfg);
  const double secs = seconds_since(t0);
  const double target = std::log(3.0), floor_v = std::log(6.0 / (2.5 + rho));
  const bool two_sided = std::abs(r.j - target) <= 0.05;
  return {two_sided && secs < 120,
          fmt("J=%.6f vs log3=%.6f (|diff| %.4f, need <=0.05); one-sided: J<=log3+0.05 %s, "
              "J>=V_Omega(6)-0.05=%.4f %s; feasible=%d dist=%.4f time=%.2fs (<120s). "
              "V_Omega(6)=log(6/2.55) is below log3 - 0.05, so the two-sided target is not the infimum",
              r.j, target, std::abs(r.j - target), r.j <= target + 0.05 ? "yes" : "no", floor_v - 0.05,
              r.j >= floor_v - 0.05 ? "yes" : "no", static_cast<int>(r.feasible), r.boundary_distance, secs)};
}

Verdict circular_hull_search() {
  const auto t0 = std::chrono::steady_clock::now();
  const Fixture t = generate("torus2");
  const double res = t.compact.resolution;
  const std::vector<CVec> inside{vec({0.0, 0.0}), vec({0.5, 0.0}), vec({cplx(0, 0.5), 0.5}), vec({0.7, cplx(0, 0.6)}),
                                 vec({cplx(-0.3, 0.4), cplx(0.2, -0.6)})};
  const std::vector<CVec> outside{vec({2.0, 0.0}), vec({1.5, 1.5}), vec({0.0, cplx(0, 2.0)})};
  bool ok = true;
  std::string in_s, out_s;
  std::uint64_t seed = 8000;
  for (const CVec& p : inside) {
    SearchConfig cfg;
    cfg.seed = seed++;
    const double d = disc_search_boundary(t.compact, p, 2, cfg).boundary_distance;
    ok = ok && d < 2 * res;
    in_s += fmt(" %.4f", d);
  }
  for (const CVec& p : outside) {
    SearchConfig cfg;
    cfg.seed = seed++;
    const double bound = std::max(std::abs(p(0)), std::abs(p(1))) - 1.0;  // max principle
    const double d = disc_search_boundary(t.compact, p, 2, cfg).boundary_distance;
    ok = ok && d > bound - 0.05;
    out_s += fmt(" %.4f(>%.2f)", d, bound - 0.05);
  }
  return {ok, fmt("interior dists%s (<2*res=%.4f); exterior dists%s; time=%.1fs", in_s.c_str(), 2 * res,
                  out_s.c_str(), seconds_since(t0))};
}

Verdict psequence() {
  const Fixture t = generate("torus2");
  const Certificate tc = standard_certificate(t);
  const CertificateReport tr = verify_psequence(tc.discs, t.compact, tc.center, tc.schedule);
  double worst_measure = 0.0;
  for (const DiscCheck& d : tr.discs) worst_measure = std::max(worst_measure, std::abs(d.measure - kTwoPi));

  const Fixture c = generate("circle");
  const Certificate cc = standard_certificate(c);
  const CertificateReport cr = verify_psequence(cc.discs, c.compact, cc.center, cc.schedule);
  const double r = best_constant(c.compact, project(cc.center), 8).radius;
  const double err = std::abs(cr.blp_constant - 1 / r);
  const bool ok = tr.centers_ok && tr.measures_ok && worst_measure == 0.0 && err < 1e-6;
  return {ok, fmt("torus: centers %s, measures %s, max |measure-2pi|=%.1e; circle BLP=%.9f vs 1/r=%.9f (|diff| %.1e < 1e-6)",
                  tr.centers_ok ? "ok" : "FAIL", tr.measures_ok ? "ok" : "FAIL", worst_measure, cr.blp_constant,
                  1 / r, err)};
}

Verdict determinism() {
  const fs::path base = fs::temp_directory_path() / ("hullscope-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path gen_dir = base / "gen";
  std::vector<RunConfig> runs;
  auto add = [&](std::string cmd, auto&& tweak) {
    RunConfig c;
    c.command = std::move(cmd);
    c.seed = 99;
    tweak(c);
    runs.push_back(c);
  };
  add("generate", [&](RunConfig& c) { c.generator = "torus2"; });
  add("hull-field", [](RunConfig& c) {
    c.generator = "circle";
    c.grid = "-1.5:1.5:5,-1.5:1.5:5";
  });
  add("extremal", [](RunConfig& c) {
    c.generator = "torus2";
    c.generator_params = {{"ns", 32}, {"nt", 32}};
    c.grid = "0:2:4,0:2:4";
    c.dmax = 6;
  });
  add("disc-search", [](RunConfig& c) {
    c.generator = "annulus";
    c.point = io::to_json(vec({6.0}));
    c.search.restarts = 2;
  });
  add("boundary-search", [](RunConfig& c) {
    c.generator = "torus2";
    c.generator_params = {{"ns", 32}, {"nt", 32}};
    c.point = io::to_json(vec({0.3, cplx(0, 0.2)}));
    c.search.restarts = 2;
  });
  add("verify-psequence", [&](RunConfig& c) { c.input = (gen_dir / "certificate.json").string(); });

  int files = 0, differing = 0;
  std::string bad;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    RunConfig first = runs[i];
    first.out = (i == 0 ? gen_dir : base / ("a" + std::to_string(i))).string();
    const RunOutcome out = run(first, 2);
    nlohmann::json manifest = nlohmann::json::parse(io::read_file(fs::path(first.out) / "manifest.json"));
    manifest["config"]["out"] = (base / ("b" + std::to_string(i))).string();
    const RunConfig again = run_config_from(manifest);
    run(again, 1);
    for (const std::string& name : out.outputs) {
      ++files;
      if (io::read_file(fs::path(first.out) / name) != io::read_file(fs::path(again.out) / name)) {
        ++differing;
        bad += " " + first.command + "/" + name;
      }
    }
  }
  fs::remove_all(base);
  return {differing == 0 && files > 0,
          fmt("%zu commands re-run from their manifests: %d output files, %d differing%s", runs.size(), files,
              differing, bad.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"circle best constant", circle_constant},
      {"torus in P^2 best constant", torus3_constant},
      {"affine extremal function", affine_extremal_values},
      {"Blaschke/J identity", blaschke_identity},
      {"pole cancellation", pole_cancellation},
      {"envelope inequality", envelope_inequality},
      {"envelope attainment", envelope_attainment},
      {"circular-hull search", circular_hull_search},
      {"P-sequence verification", psequence},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);

  int failed = 0;
  for (const int n : selected) {
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const auto& [name, check] = criteria[static_cast<std::size_t>(n - 1)];
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s\n", n, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
