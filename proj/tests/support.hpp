#pragma once

// Shared test fixtures and independent oracles.

#include "herisson/builders.hpp"
#include "herisson/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace herisson::testing {

struct Fixture {
  std::string name;
  Herisson H;
};

inline std::vector<Fixture> builder_fixtures() {
  std::vector<Fixture> out{{"cube", cube()},
                           {"box", box(1, 2, 3)},
                           {"tetra", regular_tetrahedron(1.0)},
                           {"bowtie_0.25", reflected_truncated_tetrahedron(0.25)},
                           {"bowtie_0.5", reflected_truncated_tetrahedron(0.5)},
                           {"tiling", space_filling_prism()},
                           {"random_convex", random_convex(9, 3)}};
  for (int k : {1, 2, 5, 20}) out.push_back({"waisted_" + std::to_string(k), waisted_bitetrahedron(k)});
  return out;
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

/// Random point of the realizability locus near h: a small step inside the
/// null space of the concurrency constraints.
inline SupportVector perturb_on_locus(const FanTopology& topo, const SupportVector& h, std::mt19937_64& rng,
                                      double size) {
  const Eigen::MatrixXd N = locus_basis(topo);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd z(N.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = g(rng);
  return SupportVector(h.h + size * N * z);
}

/// Keeps drawing locus perturbations until one reconstructs in the same
/// orientation class as `base`.
inline Herisson random_in_class(const Herisson& base, std::mt19937_64& rng, double size) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    try {
      Herisson H = reconstruct(base.topology, perturb_on_locus(*base.topology, base.h, rng, size));
      bool same = H.signs == base.signs;
      for (std::size_t e = 0; e < H.edge_lengths.size() && same; ++e)
        same = sign_of(H.edge_lengths[e]) == sign_of(base.edge_lengths[e]);
      if (same) return H;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::DomainError, "no perturbation stayed in the class");
}

// ---------------------------------------------------------------------------
// Convex polytope oracle: brute-force half-space intersection.

inline std::vector<Vec3> halfspace_vertices(const Fan& fan, const SupportVector& h, double tol = 1e-9) {
  const auto& n = fan.equipment;
  const int m = fan.face_count();
  std::vector<Vec3> out;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        Eigen::Matrix3d M;
        M << n[a].transpose(), n[b].transpose(), n[c].transpose();
        if (std::abs(M.determinant()) < 1e-9) continue;
        const Vec3 x = M.fullPivLu().solve(Vec3(h[a], h[b], h[c]));
        bool inside = true;
        for (int j = 0; j < m && inside; ++j) inside = n[j].dot(x) <= h[j] + tol;
        if (!inside) continue;
        bool fresh = true;
        for (const Vec3& y : out) fresh = fresh && (y - x).norm() > 1e-7;
        if (fresh) out.push_back(x);
      }
  return out;
}

/// Area of the face on plane j of the oracle polytope: gather its vertices,
/// sort them by angle in the plane and apply the 2-D shoelace formula.
inline double halfspace_face_area(const Fan& fan, const SupportVector& h, int j) {
  const Vec3& n = fan.equipment[j];
  std::vector<Vec3> pts;
  for (const Vec3& x : halfspace_vertices(fan, h))
    if (std::abs(n.dot(x) - h[j]) < 1e-9) pts.push_back(x);
  Vec3 centre = Vec3::Zero();
  for (const Vec3& x : pts) centre += x;
  centre /= static_cast<double>(pts.size());
  const Vec3 a = (pts[0] - centre).normalized();
  const Vec3 b = n.cross(a);
  std::vector<Vec2> flat;
  for (const Vec3& x : pts) flat.emplace_back((x - centre).dot(a), (x - centre).dot(b));
  std::sort(flat.begin(), flat.end(),
            [](const Vec2& u, const Vec2& v) { return std::atan2(u.y(), u.x()) < std::atan2(v.y(), v.x()); });
  double area = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const Vec2& u = flat[i];
    const Vec2& v = flat[(i + 1) % flat.size()];
    area += u.x() * v.y() - u.y() * v.x();
  }
  return 0.5 * area;
}

// ---------------------------------------------------------------------------
// Planar polygons.

inline double shoelace(const Polygon2& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    a += p[i].x() * p[(i + 1) % p.size()].y() - p[i].y() * p[(i + 1) % p.size()].x();
  return 0.5 * a;
}

inline Polygon2 rectangle(double w, double h, Vec2 origin = Vec2::Zero()) {
  return {origin, origin + Vec2(w, 0), origin + Vec2(w, h), origin + Vec2(0, h)};
}

inline Polygon2 translated(Polygon2 p, const Vec2& c) {
  for (Vec2& v : p) v += c;
  return p;
}

/// Convex polygon from outward edge-normal angles (sorted, gaps below pi) and
/// support values; vertex k is where lines k-1 and k meet. Empty when some
/// edge would have non-positive length.
inline Polygon2 polygon_from_supports(const std::vector<double>& angles, const std::vector<double>& h) {
  const std::size_t k = angles.size();
  Polygon2 out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t p = (i + k - 1) % k;
    Eigen::Matrix2d M;
    M << std::cos(angles[p]), std::sin(angles[p]), std::cos(angles[i]), std::sin(angles[i]);
    out.push_back(M.partialPivLu().solve(Vec2(h[p], h[i])));
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Vec2 d = out[(i + 1) % k] - out[i];
    const Vec2 along(-std::sin(angles[i]), std::cos(angles[i]));
    if (d.dot(along) <= 1e-6) return {};
  }
  return out;
}

/// Random edge-normal fan of k directions whose consecutive gaps stay below pi.
inline std::vector<double> random_normal_fan(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (;;) {
    std::vector<double> a(k);
    for (double& x : a) x = u(rng);
    std::sort(a.begin(), a.end());
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      const double gap = i + 1 < k ? a[i + 1] - a[i] : a[0] + 2.0 * std::numbers::pi - a[i];
      ok = ok && gap < std::numbers::pi - 0.05 && gap > 0.05;
    }
    if (ok) return a;
  }
}

/// Random pair of convex polygons with a common edge-normal fan.
inline std::pair<Polygon2, Polygon2> random_same_fan_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> sides(3, 7);
  std::uniform_real_distribution<double> support(0.5, 1.5);
  for (;;) {
    const auto angles = random_normal_fan(rng, sides(rng));
    std::vector<double> h1(angles.size()), h2(angles.size());
    for (double& x : h1) x = support(rng);
    for (double& x : h2) x = support(rng);
    Polygon2 p = polygon_from_supports(angles, h1), q = polygon_from_supports(angles, h2);
    if (!p.empty() && !q.empty()) return {p, q};
  }
}

/// Convex hull of random points on an annulus.
inline Polygon2 random_convex_polygon(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), radius(0.5, 1.5);
  std::vector<Vec2> pts;
  for (int i = 0; i < count; ++i) {
    const double a = angle(rng), r = radius(rng);
    pts.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  std::sort(pts.begin(), pts.end(), [](const Vec2& u, const Vec2& v) {
    return u.x() < v.x() || (u.x() == v.x() && u.y() < v.y());
  });
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  Polygon2 hull(2 * pts.size());
  int n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (n >= 2 && cross(hull[n - 2], hull[n - 1], pts[i]) <= 0) --n;
    hull[n++] = pts[i];
  }
  for (int i = static_cast<int>(pts.size()) - 2, lower = n + 1; i >= 0; --i) {
    while (n >= lower && cross(hull[n - 2], hull[n - 1], pts[i]) <= 0) --n;
    hull[n++] = pts[i];
  }
  hull.resize(n - 1);
  return hull;
}

/// Grid-search oracle for containment by translation: some grid translate of
/// p lies inside q with the given margin.
inline bool grid_fits_inside(const Polygon2& p, const Polygon2& q, double margin, int steps = 200) {
  double lo = 1e300, hi = -1e300;
  for (const auto* poly : {&p, &q})
    for (const Vec2& v : *poly) {
      lo = std::min({lo, v.x(), v.y()});
      hi = std::max({hi, v.x(), v.y()});
    }
  const double span = 2.0 * (hi - lo);
  auto inside = [&](const Vec2& x) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Vec2 d = q[(i + 1) % q.size()] - q[i];
      const Vec2 r = x - q[i];
      if (d.x() * r.y() - d.y() * r.x() < margin * d.norm()) return false;
    }
    return true;
  };
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; b <= steps; ++b) {
      const Vec2 c(-span / 2 + span * a / steps, -span / 2 + span * b / steps);
      bool all = true;
      for (const Vec2& v : p) all = all && inside(v + c);
      if (all) return true;
    }
  return false;
}

}  // namespace herisson::testing
