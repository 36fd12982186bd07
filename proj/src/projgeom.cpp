#include "hullscope/projgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hullscope {

ProjectivePoint project(const CVec& z) {
  const double nrm = z.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw Error(ErrorCode::invalid_input, "cannot project the zero vector");
  return ProjectivePoint{z / nrm};
}

ProjectivePoint from_chart(const CVec& w) {
  CVec z(w.size() + 1);
  z(0) = 1.0;
  z.tail(w.size()) = w;
  return project(z);
}

double fs_distance(const ProjectivePoint& x, const ProjectivePoint& y) {
  if (x.rep.size() != y.rep.size())
    throw Error(ErrorCode::dimension_mismatch, "fs_distance: points live in different P^n");
  // arccos|<x,y>| evaluated as atan2(sin, cos) to stay accurate near zero.
  // The sine term is not symmetric in rounding, so fix an argument order.
  const auto less = [](const CVec& a, const CVec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
      if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
  };
  const CVec& u = less(y.rep, x.rep) ? y.rep : x.rep;
  const CVec& v = &u == &x.rep ? y.rep : x.rep;
  const cplx ip = u.dot(v);
  const double c = std::abs(ip);
  const double s = (v - ip * u).norm();
  return std::atan2(s, c);
}

double sphere_distance(const CVec& u, const CVec& v) {
  return 2.0 * std::asin(std::min(1.0, 0.5 * (u - v).norm()));
}

Eigen::Index SampledCompact::dim() const {
  if (points.empty()) return 0;
  return mode == Mode::projective ? points.front().size() - 1 : points.front().size();
}

void validate(const SampledCompact& k) {
  if (k.points.empty()) throw Error(ErrorCode::invalid_input, "sampled compact is empty");
  const Eigen::Index len = k.points.front().size();
  if (len < 1 || (k.mode == Mode::projective && len < 2))
    throw Error(ErrorCode::invalid_input, "sample points have too few coordinates");
  for (const CVec& p : k.points) {
    if (p.size() != len) throw Error(ErrorCode::dimension_mismatch, "sample points differ in length");
    if (!p.allFinite()) throw Error(ErrorCode::invalid_input, "sample point is not finite");
    if (k.mode == Mode::projective && std::abs(p.norm() - 1.0) > 1e-12)
      throw Error(ErrorCode::invalid_input, "projective sample is not a unit representative");
  }
  if (!(k.resolution >= 0.0)) throw Error(ErrorCode::invalid_input, "negative sample resolution");
  if (k.circular && !circularity_spot_check(k))
    throw Error(ErrorCode::invalid_input, "sample flagged circular fails the rotation spot check");
}

bool circularity_spot_check(const SampledCompact& k) {
  const NearestSample index(k);
  const double tol = k.resolution * (1.0 + 1e-9) + 1e-12;
  const cplx rot(0.0, 1.0);
  return std::all_of(k.points.begin(), k.points.end(),
                     [&](const CVec& p) { return index.distance(rot * p) <= tol; });
}

namespace {

double point_distance(Mode mode, const CVec& a, const CVec& b) {
  if (mode == Mode::affine) return (a - b).norm();
  return fs_distance(ProjectivePoint{a}, ProjectivePoint{b});
}

}  // namespace

double estimate_resolution(const SampledCompact& k) {
  double worst = 0.0;
  for (std::size_t i = 0; i < k.points.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k.points.size(); ++j)
      if (i != j) nearest = std::min(nearest, point_distance(k.mode, k.points[i], k.points[j]));
    if (std::isfinite(nearest)) worst = std::max(worst, nearest);
  }
  return 0.5 * worst;
}

// Static k-d tree over the real coordinates of affine samples. Nodes are
// implicit: the median of each index range [lo, hi) is the splitting point.
struct NearestSample::Tree {
  static constexpr std::size_t kLeaf = 8;

  std::size_t dims = 0;
  std::vector<double> coords;  // reordered, row-major
  std::vector<std::uint8_t> split;

  const double* row(std::size_t i) const { return coords.data() + i * dims; }

  explicit Tree(const std::vector<CVec>& pts) {
    const std::size_t n = pts.size();
    dims = static_cast<std::size_t>(2 * pts.front().size());
    std::vector<double> raw(n * dims);
    for (std::size_t i = 0; i < n; ++i)
      for (Eigen::Index c = 0; c < pts[i].size(); ++c) {
        raw[i * dims + 2 * static_cast<std::size_t>(c)] = pts[i](c).real();
        raw[i * dims + 2 * static_cast<std::size_t>(c) + 1] = pts[i](c).imag();
      }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    split.assign(n, 0);
    build(raw, order, 0, n);
    coords.resize(n * dims);
    for (std::size_t i = 0; i < n; ++i)
      std::copy_n(raw.data() + order[i] * dims, dims, coords.data() + i * dims);
  }

  void build(const std::vector<double>& raw, std::vector<std::size_t>& order, std::size_t lo,
             std::size_t hi) {
    if (hi - lo <= kLeaf) return;
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < dims; ++d) {
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (std::size_t i = lo; i < hi; ++i) {
        const double v = raw[order[i] * dims + d];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (mx - mn > best_spread) {
        best_spread = mx - mn;
        best_dim = d;
      }
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(lo),
                     order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](std::size_t a, std::size_t b) {
                       return raw[a * dims + best_dim] < raw[b * dims + best_dim];
                     });
    split[mid] = static_cast<std::uint8_t>(best_dim);
    build(raw, order, lo, mid);
    build(raw, order, mid + 1, hi);
  }

  double dist2(const double* q, std::size_t i) const {
    const double* p = row(i);
    double s = 0.0;
    for (std::size_t d = 0; d < dims; ++d) s += (q[d] - p[d]) * (q[d] - p[d]);
    return s;
  }

  void search(const double* q, std::size_t lo, std::size_t hi, double& best) const {
    if (hi - lo <= kLeaf) {
      for (std::size_t i = lo; i < hi; ++i) best = std::min(best, dist2(q, i));
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    best = std::min(best, dist2(q, mid));
    const double diff = q[split[mid]] - row(mid)[split[mid]];
    if (diff < 0.0) {
      search(q, lo, mid, best);
      if (diff * diff < best) search(q, mid + 1, hi, best);
    } else {
      search(q, mid + 1, hi, best);
      if (diff * diff < best) search(q, lo, mid, best);
    }
  }
};

NearestSample::NearestSample(const SampledCompact& k) : k_(&k) {
  if (k.points.empty()) throw Error(ErrorCode::invalid_input, "sampled compact is empty");
  if (k.mode == Mode::affine) tree_ = std::make_unique<Tree>(k.points);
}

NearestSample::~NearestSample() = default;
NearestSample::NearestSample(NearestSample&&) noexcept = default;
NearestSample& NearestSample::operator=(NearestSample&&) noexcept = default;

double NearestSample::distance(const CVec& point) const {
  if (tree_) {
    if (static_cast<std::size_t>(2 * point.size()) != tree_->dims)
      throw Error(ErrorCode::dimension_mismatch, "query point has the wrong dimension");
    std::vector<double> q(tree_->dims);
    for (Eigen::Index c = 0; c < point.size(); ++c) {
      q[2 * static_cast<std::size_t>(c)] = point(c).real();
      q[2 * static_cast<std::size_t>(c) + 1] = point(c).imag();
    }
    double best = std::numeric_limits<double>::infinity();
    tree_->search(q.data(), 0, k_->points.size(), best);
    return std::sqrt(best);
  }
  const ProjectivePoint x = project(point);
  if (x.rep.size() != k_->points.front().size())
    throw Error(ErrorCode::dimension_mismatch, "query point has the wrong dimension");
  // fs_distance is monotone in |<x,k>|, so scan for the largest overlap.
  double best_overlap = -1.0;
  const CVec* arg = nullptr;
  for (const CVec& p : k_->points) {
    const double ov = std::abs(x.rep.dot(p));
    if (ov > best_overlap) {
      best_overlap = ov;
      arg = &p;
    }
  }
  return fs_distance(x, ProjectivePoint{*arg});
}

SphereLift build_sphere_lift(const SampledCompact& k, int orbit_count) {
  if (orbit_count < 1) throw Error(ErrorCode::invalid_input, "orbit count must be at least 1");
  SphereLift lift;
  lift.orbit_count = orbit_count;
  lift.points.reserve(k.points.size() * static_cast<std::size_t>(orbit_count));
  for (const CVec& p : k.points) {
    const CVec rep = k.mode == Mode::projective ? p : from_chart(p).rep;
    for (int j = 0; j < orbit_count; ++j)
      lift.points.push_back(std::polar(1.0, kTwoPi * j / orbit_count) * rep);
  }
  return lift;
}

bool is_orbit_closed(const SphereLift& lift, double tol) {
  if (lift.points.empty()) return true;
  SampledCompact cloud{Mode::affine, lift.points, true, false, 0.0};
  const NearestSample index(cloud);
  const int m = lift.orbit_count;
  for (const CVec& v : lift.points) {
    if (std::abs(v.norm() - 1.0) > tol) return false;
    for (int j = 1; j < m; ++j)
      if (index.distance(std::polar(1.0, kTwoPi * j / m) * v) > 1e3 * tol) return false;
  }
  return true;
}

RationalDisc lift_disc(const RationalDisc& f) {
  if (f.mode != Mode::projective)
    throw Error(ErrorCode::invalid_input, "lift_disc expects a disc into P^n");
  validate(f);
  return RationalDisc::affine(f.components);
}

double blp_constant(std::span<const RationalDisc> lifts, int nodes) {
  if (lifts.empty()) throw Error(ErrorCode::invalid_input, "blp_constant: no discs");
  if (nodes < 1) throw Error(ErrorCode::invalid_input, "blp_constant: need at least one node");
  const std::vector<cplx> circle = circle_nodes(nodes);
  double worst = 0.0;
  for (const RationalDisc& F : lifts) {
    const double center = F(0.0).norm();
    if (!(center > 0.0)) throw Error(ErrorCode::invalid_input, "lifted disc vanishes at its center");
    double mx = 0.0;
    for (const cplx z : circle) mx = std::max(mx, F(z).norm());
    worst = std::max(worst, mx / center);
  }
  return worst;
}

}  // namespace hullscope
