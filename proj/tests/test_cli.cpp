#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hullscope/fixtures.hpp"
#include "hullscope/io.hpp"
#include "hullscope/rng.hpp"
#include "hullscope/run.hpp"

using namespace hullscope;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

CVec vec(std::initializer_list<cplx> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const cplx x : xs) v(i++) = x;
  return v;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hullscope-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

json read_json(const std::string& path) { return json::parse(io::read_file(path)); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io;
}

RunConfig config(const std::string& command, const std::string& out) {
  RunConfig c;
  c.command = command;
  c.out = out;
  return c;
}

RationalDisc random_disc(Rng& rng) {
  std::vector<UPoly> comps;
  for (int i = 0; i < 3; ++i) {
    std::vector<cplx> c(1 + rng.next() % 4);
    for (cplx& x : c) x = rng.complex_normal();
    comps.emplace_back(std::move(c));
  }
  if (rng.uniform() < 0.5) return RationalDisc::projective(std::move(comps));
  return RationalDisc::affine(std::move(comps), UPoly{1.0, rng.in_disc(0.9)});
}

}  // namespace

TEST_CASE("generate examples") {
  const Fixture c = generate("circle", {{"samples", 256}});
  CHECK(c.compact.points.size() == 256);
  CHECK(c.compact.mode == Mode::projective);
  for (const CVec& p : c.compact.points) {
    CHECK(std::abs(std::abs(p(0)) - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(std::abs(p(1)) - 1 / std::sqrt(2.0)) < 1e-15);
  }
  const Fixture t = generate("torus2", {{"ns", 64}, {"nt", 64}});
  CHECK(t.compact.points.size() == 4096);
  for (const CVec& p : t.compact.points) {
    CHECK(std::abs(std::abs(p(0)) - 1) < 1e-15);
    CHECK(std::abs(std::abs(p(1)) - 1) < 1e-15);
  }
  const Fixture two = generate("two-tori", {{"sep", 0.5}});
  CHECK(two.compact.circular);
  CHECK_FALSE(two.compact.connected);
  CHECK(circularity_spot_check(two.compact));
}

TEST_CASE("generators are deterministic and carry provenance") {
  for (const std::string& name : generator_names()) {
    CAPTURE(name);
    const Fixture a = generate(name), b = generate(name);
    CHECK(a == b);
    CHECK(a.compact.resolution > 0);
    validate(a.compact);
    for (const OracleEntry& o : a.oracles) CHECK_FALSE(o.provenance.empty());
  }
}

TEST_CASE("generate errors") {
  CHECK(code_of([] { generate("nope"); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { generate("circle", {{"samples", 8}}); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { generate("torus2", {{"ns", "many"}}); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { generate("two-tori", {{"sep", 2.0}}); }) == ErrorCode::invalid_input);
  CHECK(code_of([] { generate("circle", json::array()); }) == ErrorCode::invalid_input);
}

TEST_CASE("numbers round-trip exactly") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));
    CHECK(io::parse_double(io::format_double(x)) == x);
    CHECK(io::number_from(json::parse(io::number(x).dump())) == x);
  }
  CHECK(std::isinf(io::number_from(io::number(INFINITY))));
  CHECK(io::number_from(io::number(-INFINITY)) < 0);
  CHECK(std::isnan(io::number_from(io::number(NAN))));
}

TEST_CASE("discs round-trip bit-identically") {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const RationalDisc f = random_disc(rng);
    CHECK(io::disc_from(json::parse(io::to_json(f).dump())) == f);
  }
}

TEST_CASE("fixtures, compacts and certificates round-trip bit-identically") {
  TempDir dir("roundtrip");
  for (const std::string& name : generator_names()) {
    CAPTURE(name);
    const Fixture f = generate(name);
    CHECK(io::fixture_from(json::parse(io::to_json(f).dump())) == f);
    CHECK(io::compact_from_csv(io::compact_to_csv(f.compact)) == f.compact);

    io::write_atomic(dir / "k.csv", io::compact_to_csv(f.compact));
    io::write_atomic(dir / "k.json", io::to_json(f.compact).dump());
    io::write_atomic(dir / "f.json", io::to_json(f).dump());
    CHECK(io::load_compact(dir / "k.csv") == f.compact);
    CHECK(io::load_compact(dir / "k.json") == f.compact);
    CHECK(io::load_compact(dir / "f.json") == f.compact);
  }
  for (const char* name : {"circle", "torus2"}) {
    const Certificate c = standard_certificate(generate(name));
    CHECK(io::certificate_from(json::parse(io::to_json(c).dump())) == c);
  }
}

TEST_CASE("configs round-trip") {
  RunConfig c = config("disc-search", "/tmp/x");
  c.generator = "annulus";
  c.generator_params = {{"r_out", 2.0}};
  c.point = io::to_json(vec({6.0}));
  c.search.restarts = 3;
  c.solver.cap = 12.5;
  c.seed = 0xFFFFFFFFFFFFull;
  const json j = to_json(c);
  const RunConfig back = run_config_from(json::parse(j.dump()));
  CHECK(to_json(back) == j);
  // a manifest is accepted in place of a config
  CHECK(to_json(run_config_from(json{{"manifest_version", 1}, {"config", j}})) == j);
  CHECK(run_config_from(json{{"cap", 3.0}}).solver.cap == 3.0);
}

TEST_CASE("hull-field on the circle chart") {
  TempDir dir("field");
  RunConfig c = config("hull-field", dir.path.string());
  c.generator = "circle";
  c.grid = "-1:1:3,-1:1:3";
  c.dmax = 8;
  const RunOutcome out = run(c, 1);
  CHECK(out.summary.at("counts").at("in-hull-at-budget") == 9);

  const std::string csv = io::read_file(dir / "hull_field.csv");
  std::istringstream lines(csv);
  std::string line, header;
  std::getline(lines, header);
  CHECK(header.rfind("x0_re,x0_im,x1_re,x1_im,d,C_d,", 0) == 0);
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.rfind("1,0,0,0,8,", 0) != 0) continue;
    found = true;
    const double cval = io::parse_double(line.substr(10, line.find(',', 10) - 10));
    CHECK(std::abs(cval - std::sqrt(2.0)) < 1e-3);
  }
  CHECK(found);

  const std::string pgm = io::read_file(dir / "heatmap.pgm");
  CHECK(pgm.rfind("P5\n3 3\n255\n", 0) == 0);
  CHECK(pgm.size() == std::string("P5\n3 3\n255\n").size() + 9);
}

TEST_CASE("extremal sweep on the unit circle") {
  TempDir dir("extremal");
  RunConfig c = config("extremal", dir.path.string());
  c.generator = "unit-circle";
  c.points = json::array({io::to_json(vec({2.0})), io::to_json(vec({0.5}))});
  c.dmax = 8;
  run(c, 1);
  const json j = read_json(dir / "extremal.json");
  const auto& pts = j.at("points");
  REQUIRE(pts.size() == 2);
  CHECK(std::abs(io::number_from(pts[0].at("cumulative").back()) - std::log(2.0)) < 1e-3);
  CHECK(io::number_from(pts[1].at("cumulative").back()) < 1e-9);
}

TEST_CASE("j-eval on a serialized disc") {
  TempDir dir("jeval");
  const RationalDisc f = RationalDisc::projective({UPoly{-0.5, 1.0}, UPoly{1.0}});
  io::write_atomic(dir / "disc.json", io::to_json(f).dump());
  RunConfig c = config("j-eval", dir.path.string());
  c.input = dir / "disc.json";
  run(c);
  const json j = read_json(dir / "j_eval.json");
  CHECK(std::abs(io::number_from(j.at("J")) - std::log(2.0)) < 1e-12);
  CHECK(j.at("divisor").size() == 1);
}

TEST_CASE("verify-psequence on a torus certificate file") {
  TempDir gen("gen"), ver("verify");
  RunConfig g = config("generate", gen.path.string());
  g.generator = "torus2";
  run(g);
  RunConfig v = config("verify-psequence", ver.path.string());
  v.input = gen / "certificate.json";
  const RunOutcome out = run(v);
  const json rep = read_json(ver / "certificate_report.json");
  for (const auto& [key, verdict] : rep.at("verdicts").items()) {
    CAPTURE(key);
    CHECK(verdict.at("pass") == true);
    CHECK(verdict.contains("threshold"));
  }
  for (const json& d : rep.at("discs")) CHECK(io::number_from(d.at("measure").at("value")) == doctest::Approx(kTwoPi));
  CHECK(out.summary == rep.at("verdicts"));
}

TEST_CASE("searches through run()") {
  TempDir dir("search");
  RunConfig c = config("disc-search", dir.path.string());
  c.generator = "annulus";
  c.generator_params = {{"r_out", 2.0}};
  c.point = io::to_json(vec({6.0}));
  c.search.restarts = 2;
  c.search.iterations = 800;
  c.seed = 4;
  const RunOutcome out = run(c);
  const RationalDisc f = io::disc_from(read_json(dir / "disc.json"));
  CHECK(std::abs(j_functional(f, vec({1.0, 0.0})) - io::number_from(out.summary.at("J"))) < 1e-9);

  c.command = "boundary-search";
  c.generator = "torus2";
  c.generator_params = {{"ns", 32}, {"nt", 32}};
  c.point = io::to_json(vec({0.0, 0.0}));
  const RunOutcome b = run(c);
  CHECK(b.summary.at("hypotheses_met") == true);
  CHECK(io::number_from(b.summary.at("boundary_distance")) <= io::number_from(b.summary.at("resolution")) + 1e-12);
}

TEST_CASE("run errors") {
  TempDir dir("errors");
  RunConfig c = config("hull-field", dir.path.string());
  CHECK(code_of([&] { run(c); }) == ErrorCode::invalid_input);  // no K
  c.generator = "no-such";
  CHECK(code_of([&] { run(c); }) == ErrorCode::invalid_input);
  c.generator = "circle";
  c.grid = "1:0";
  CHECK(code_of([&] { run(c); }) == ErrorCode::invalid_input);
  c.command = "bogus";
  CHECK(code_of([&] { run(c); }) == ErrorCode::invalid_input);
  c.command = "j-eval";
  c.input = dir / "missing.json";
  CHECK(code_of([&] { run(c); }) == ErrorCode::io);
  c.command = "disc-search";
  c.input.clear();
  c.generator = "annulus";
  CHECK(code_of([&] { run(c); }) == ErrorCode::invalid_input);  // no center

  const json e = error_json(Error(ErrorCode::invalid_input, "boom"));
  CHECK(e.at("error").at("code") == "invalid_input");
  CHECK(e.at("error").at("message") == "boom");
}

TEST_CASE("manifest re-run is byte-identical and leaves no temp files") {
  TempDir a("manifest-a"), b("manifest-b");
  RunConfig c = config("hull-field", a.path.string());
  c.generator = "torus2";
  c.generator_params = {{"ns", 24}, {"nt", 24}};
  c.grid = "0:1.5:3,0:1.5:3";
  c.dmax = 5;
  c.seed = 17;
  const RunOutcome first = run(c, 2);

  json manifest = read_json(a / "manifest.json");
  manifest["config"]["out"] = b.path.string();
  const RunOutcome second = run(run_config_from(manifest), 1);
  CHECK(first.outputs == second.outputs);
  for (const std::string& name : first.outputs) {
    CAPTURE(name);
    CHECK(io::read_file(a / name) == io::read_file(b / name));
  }
  for (const auto& entry : fs::directory_iterator(a.path))
    CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
}

TEST_CASE("write_atomic replaces contents") {
  TempDir dir("atomic");
  io::write_atomic(dir / "x.txt", "one");
  io::write_atomic(dir / "x.txt", "two");
  CHECK(io::read_file(dir / "x.txt") == "two");
  CHECK(std::distance(fs::directory_iterator(dir.path), fs::directory_iterator{}) == 1);
  CHECK(code_of([&] { io::write_atomic(dir.path / "no" / "dir" / "x", "y"); }) == ErrorCode::io);
}

#ifdef HULLSCOPE_CLI
TEST_CASE("command-line tool") {
  TempDir dir("tool");
  const std::string exe = HULLSCOPE_CLI;
  const std::string out = dir / "run";
  const std::string cmd = exe + " hull-field --generator circle --grid -1:1:3,-1:1:3 --dmax 4 --out " + out +
                          " > " + (dir / "stdout.json");
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out + "/manifest.json"));
  const json printed = read_json(dir / "stdout.json");
  CHECK(printed.contains("outputs"));

  const std::string bad = exe + " hull-field --generator nope --grid 0:1:2 --out " + (dir / "bad") + " > " +
                          (dir / "err.json") + " 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(read_json(dir / "err.json").at("error").at("code") == "invalid_input");
  CHECK(fs::exists(dir / "bad/error.json"));

  const std::string cfg = exe + " generate --config '{\"generator\": \"two-tori\", \"generator_params\": {\"ns\": 16}}' --out " +
                          (dir / "gen") + " > /dev/null";
  CHECK(std::system(cfg.c_str()) == 0);
  const Fixture f = io::fixture_from(read_json(dir / "gen/fixture.json"));
  CHECK(f.compact.points.size() == 2 * 16 * 32);
}
#endif
