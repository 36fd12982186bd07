#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hullscope/fixtures.hpp"
#include "hullscope/polyspace.hpp"
#include "hullscope/rng.hpp"
#include "oracles.hpp"

using namespace hullscope;

namespace {

CVec vec(std::initializer_list<cplx> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const cplx x : xs) v(i++) = x;
  return v;
}

HomPoly monomial(int n, MultiIndex a, cplx c = 1.0) {
  int d = 0;
  for (const int e : a) d += e;
  HomPoly p{n, d, {}};
  p.coeffs[a] = c;
  return p;
}

std::vector<CVec> homogenized(const SampledCompact& k) {
  std::vector<CVec> out;
  for (const CVec& p : k.points) {
    CVec z(p.size() + 1);
    z << 1.0, p;
    out.push_back(z);
  }
  return out;
}

}  // namespace

TEST_CASE("monomial basis order and counts") {
  CHECK(monomial_basis(1, 2) == std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}});
  CHECK(monomial_basis(2, 1) == std::vector<MultiIndex>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(monomial_basis(2, 32).size() == 561);
  CHECK(basis_size(2, 32) == 561);
  CHECK(monomial_basis(3, 0) == std::vector<MultiIndex>{{0, 0, 0, 0}});
  // binomial(n + d, n) over a small table
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 6; ++d) {
      double b = 1;
      for (int i = 1; i <= n; ++i) b = b * (d + i) / i;
      CHECK(monomial_basis(n, d).size() == static_cast<std::size_t>(std::lround(b)));
    }
}

TEST_CASE("section norm examples") {
  CHECK(section_norm(monomial(1, {1, 0}), project(vec({1, 0}))) == doctest::Approx(1.0));
  CHECK(section_norm(monomial(1, {1, 0}), project(vec({1, 1}))) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(section_norm(monomial(1, {1, 1}), project(vec({1, 1}))) == doctest::Approx(0.5).epsilon(1e-15));
  // representative independence
  const HomPoly p = monomial(1, {2, 1}, cplx(0.3, -2));
  CHECK(section_norm(p, project(vec({2, cplx(0, 1)}))) ==
        doctest::Approx(section_norm(p, project(vec({cplx(0, 6), -3.0})))).epsilon(1e-14));
}

TEST_CASE("homogeneity of evaluation") {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    HomPoly p{2, 5, {}};
    for (const MultiIndex& a : monomial_basis(2, 5)) p.coeffs[a] = rng.complex_normal();
    CVec z(3);
    for (int i = 0; i < 3; ++i) z(i) = rng.complex_normal();
    const cplx lambda = rng.complex_normal();
    const cplx lhs = p(lambda * z), rhs = std::pow(lambda, 5) * p(z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("chebyshev ratio on the circle") {
  const Fixture c = generate("circle");
  const DegreeResult r = chebyshev_ratio(c.compact, project(vec({1, 0})), 4);
  CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK_FALSE(r.flags.warning());
  // x on the sample
  const DegreeResult in = chebyshev_ratio(c.compact, ProjectivePoint{c.compact.points[17]}, 3);
  CHECK(in.value == 1.0);
  CHECK(in.flags.in_sample);
}

TEST_CASE("single-point compact is flagged unbounded") {
  SampledCompact k;
  k.points = {vec({1, 0})};
  for (int d : {1, 3}) {
    const DegreeResult r = chebyshev_ratio(k, project(vec({0, 1})), d);
    CHECK(r.flags.unbounded);
    CHECK(r.value > 1e3);
  }
}

TEST_CASE("best constant traces") {
  const Fixture c = generate("circle");
  const BestConstantTrace t = best_constant(c.compact, project(vec({1, 0})), 8);
  CHECK(t.cumulative.back() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(t.radius == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-4));

  const BestConstantTrace in = best_constant(c.compact, ProjectivePoint{c.compact.points[0]}, 5);
  for (const double v : in.values) CHECK(v == 1.0);
  CHECK(in.radius == 1.0);

  const Fixture t3 = generate("torus3");
  const BestConstantTrace tt = best_constant(t3.compact, project(vec({1, 0, 0})), 6);
  CHECK(std::abs(tt.cumulative.back() / std::sqrt(3.0) - 1) < 0.01);
}

TEST_CASE("reported values are reproduced by their witnesses") {
  const Fixture c = generate("circle", {{"samples", 64}});
  for (const cplx w : {cplx(0.3, 0.2), cplx(-1.7, 0.4), cplx(0, 3)}) {
    const ProjectivePoint x = from_chart(vec({w}));
    const BestConstantTrace t = best_constant(c.compact, x, 6);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double direct = std::pow(witness_ratio(t.witnesses[i], c.compact.points, x.rep), 1.0 / t.degrees[i]);
      CHECK(std::abs(direct - t.values[i]) <= 1e-9 * t.values[i]);
      CHECK(t.values[i] >= 1 - 1e-9);
    }
  }
  const Fixture torus = generate("torus2", {{"ns", 16}, {"nt", 16}});
  const auto hom = homogenized(torus.compact);
  for (const CVec& z : {vec({0.3, cplx(0, 0.4)}), vec({1.5, 0.2}), vec({cplx(1, 1), 2})}) {
    const ExtremalSample e = affine_extremal(torus.compact, z, 6);
    CVec target(3);
    target << 1.0, z;
    for (std::size_t i = 0; i < e.v_values.size(); ++i) {
      const double direct = std::log(witness_ratio(e.witnesses[i], hom, target)) / e.degrees[i];
      CHECK(std::abs(direct - e.v_values[i]) <= 1e-9 * std::max(1.0, std::abs(e.v_values[i])));
    }
  }
}

TEST_CASE("traces are monotone") {
  Rng rng(4);
  const Fixture t3 = generate("torus3", {{"ns", 16}, {"nt", 16}});
  const Fixture g = generate("graph-curve", {{"samples", 128}});
  for (int trial = 0; trial < 4; ++trial) {
    const CVec z = vec({1.0, 1.5 * rng.complex_normal(), 1.5 * rng.complex_normal()});
    const BestConstantTrace t = best_constant(t3.compact, project(z), 5);
    for (std::size_t i = 1; i < t.cumulative.size(); ++i) CHECK(t.cumulative[i] >= t.cumulative[i - 1]);
    const ExtremalSample e = affine_extremal(g.compact, z.tail(2), 6);
    for (std::size_t i = 1; i < e.cumulative.size(); ++i) CHECK(e.cumulative[i] >= e.cumulative[i - 1]);
  }
}

TEST_CASE("affine extremal function on the circle and torus") {
  const Fixture c = generate("unit-circle");
  const ExtremalSample zero = affine_extremal(c.compact, vec({0.0}), 8);
  for (const double v : zero.v_values) CHECK(std::abs(v) < 1e-12);
  const ExtremalSample two = affine_extremal(c.compact, vec({2.0}), 16);
  CHECK(std::abs(two.cumulative.back() - std::log(2.0)) < 1e-3);
  CHECK(two.finite);

  const Fixture t = generate("torus2", {{"ns", 32}, {"nt", 32}});
  const CVec z = vec({2.0, 0.5});
  const ExtremalSample e = affine_extremal(t.compact, z, 10);
  CHECK(std::abs(e.cumulative.back() - oracle::polydisc_v(z, {1, 1})) < 1e-2);
}

TEST_CASE("hull radius matches the polydisc oracle") {
  Rng rng(9);
  const Fixture c = generate("circle");
  const auto lc = build_sphere_lift(c.compact, 1).points;
  for (int t = 0; t < 6; ++t) {
    const CVec x = project(vec({1.0, 2.0 * rng.complex_normal()})).rep;
    const BestConstantTrace tr = best_constant(c.compact, ProjectivePoint{x}, 6);
    CHECK(std::abs(tr.radius / oracle::polydisc_radius(lc, x) - 1) < 0.02);
  }
  const Fixture t3 = generate("torus3", {{"ns", 24}, {"nt", 24}});
  const auto lt = build_sphere_lift(t3.compact, 1).points;
  for (int t = 0; t < 4; ++t) {
    const CVec x = project(vec({1.0, rng.complex_normal(), rng.complex_normal()})).rep;
    const BestConstantTrace tr = best_constant(t3.compact, ProjectivePoint{x}, 4);
    CHECK(std::abs(tr.radius / oracle::polydisc_radius(lt, x) - 1) < 0.02);
  }
}

TEST_CASE("lifted potential stays below log C on the circle") {
  const Fixture c = generate("circle", {{"samples", 128}});
  const auto v = [](const CVec& w) { return oracle::log_plus(std::abs(w(0))); };
  for (double a = -2.0; a <= 2.0; a += 0.5)
    for (double b = -2.0; b <= 2.0; b += 0.5) {
      const CVec z = project(vec({1.0, cplx(a, b)})).rep;
      const double lifted = lift_potential(v, z);
      const BestConstantTrace t = best_constant(c.compact, ProjectivePoint{z}, 6);
      CHECK(lifted <= std::log(t.cumulative.back()) + 1e-6);
    }
}

TEST_CASE("lift_potential examples") {
  const auto zero = [](const CVec&) { return 0.0; };
  const auto lp = [](const CVec& w) { return oracle::log_plus(std::abs(w(0))); };
  CHECK(lift_potential(zero, vec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)})) == doctest::Approx(-0.5 * std::log(2.0)));
  CHECK(lift_potential(lp, vec({1 / std::sqrt(5.0), 2 / std::sqrt(5.0)})) ==
        doctest::Approx(-0.5 * std::log(5.0) + std::log(2.0)));
  CHECK(lift_potential(zero, vec({0, 1})) == -INFINITY);
  // circle invariance
  const CVec z = vec({cplx(0.3, 0.1), cplx(-0.5, 0.7)});
  CHECK(lift_potential(lp, std::polar(1.0, 1.1) * z) == doctest::Approx(lift_potential(lp, z)).epsilon(1e-14));
}
