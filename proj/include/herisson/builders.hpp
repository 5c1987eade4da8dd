#pragma once

// Concrete herissons used as fixtures: convex polytopes, the reflected
// truncated tetrahedron, the waisted bitetrahedron family and the
// space-filling hourglass prism.

#include "herisson/geometry.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace herisson {

/// A closed polyhedral solid: faces are vertex index loops, counterclockwise
/// when seen from outside the body.
struct Solid {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;
};

namespace detail {

/// Reverses a cell if its equipment points run clockwise seen from outside.
inline void orient_cell_ccw(const std::vector<Vec3>& equipment, std::vector<int>& cell) {
  Vec3 centre = Vec3::Zero();
  for (int f : cell) centre += equipment[f];
  double turn = 0.0;
  for (std::size_t i = 0; i < cell.size(); ++i)
    turn += det3(centre, equipment[cell[i]], equipment[cell[(i + 1) % cell.size()]]);
  if (turn < 0.0) std::reverse(cell.begin(), cell.end());
}

inline Vec3 newell_normal(const Solid& s, const std::vector<int>& face) {
  Vec3 n = Vec3::Zero();
  for (std::size_t i = 0; i < face.size(); ++i) {
    const Vec3& a = s.vertices[face[i]];
    const Vec3& b = s.vertices[face[(i + 1) % face.size()]];
    n += a.cross(b);
  }
  return n.normalized();
}

}  // namespace detail

/// Equips each face of `solid` with its outward normal times `equipment_sign`
/// and reads the cells off the vertex stars. The herisson is reconstructed
/// from the resulting support numbers and checked against the solid.
inline Herisson herisson_from_solid(const Solid& solid, const std::vector<int>& equipment_sign) {
  const int m = static_cast<int>(solid.faces.size());
  if (static_cast<int>(equipment_sign.size()) != m) throw Error(ErrorCode::DomainError, "one equipment sign per face");
  Fan fan;
  Eigen::VectorXd h(m);
  for (int j = 0; j < m; ++j) {
    const Vec3 n = equipment_sign[j] * detail::newell_normal(solid, solid.faces[j]);
    fan.equipment.push_back(n);
    double acc = 0.0;
    for (int v : solid.faces[j]) acc += n.dot(solid.vertices[v]);
    h[j] = acc / static_cast<double>(solid.faces[j].size());
  }

  // Directed edge (a -> b) -> face that contains it.
  std::map<std::pair<int, int>, int> edge_face;
  for (int j = 0; j < m; ++j) {
    const auto& f = solid.faces[j];
    for (std::size_t i = 0; i < f.size(); ++i) edge_face[{f[i], f[(i + 1) % f.size()]}] = j;
  }
  for (int v = 0; v < static_cast<int>(solid.vertices.size()); ++v) {
    int start = -1, next_vertex = -1;
    for (int j = 0; j < m && start < 0; ++j) {
      const auto& f = solid.faces[j];
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] == v) {
          start = j;
          next_vertex = f[(i + 1) % f.size()];
          break;
        }
    }
    if (start < 0) continue;
    std::vector<int> cell;
    int face = start;
    do {
      cell.push_back(face);
      // The face across edge (v -> next) holds (next -> v); continue from there.
      const auto it = edge_face.find({next_vertex, v});
      if (it == edge_face.end()) throw Error(ErrorCode::MalformedFan, "solid is not closed");
      face = it->second;
      const auto& f = solid.faces[face];
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] == v) next_vertex = f[(i + 1) % f.size()];
      if (cell.size() > static_cast<std::size_t>(m)) throw Error(ErrorCode::MalformedFan, "vertex star does not close");
    } while (face != start);
    detail::orient_cell_ccw(fan.equipment, cell);
    fan.cells.push_back(std::move(cell));
  }

  Herisson out = reconstruct(fan, SupportVector(h));
  for (std::size_t c = 0; c < solid.vertices.size(); ++c)
    if ((out.vertices[c] - solid.vertices[c]).norm() > 1e-9 * out.scale())
      throw Error(ErrorCode::InconsistentVertex, "reconstructed vertex differs from the solid");
  return out;
}

/// Prism-like solid through horizontal rings of equal vertex count; rings
/// are listed bottom to top, each counterclockwise seen from above.
inline Solid stacked_solid(const std::vector<std::pair<double, std::vector<Vec2>>>& rings) {
  Solid s;
  const int k = static_cast<int>(rings.front().second.size());
  for (const auto& [z, ring] : rings)
    for (const Vec2& p : ring) s.vertices.emplace_back(p.x(), p.y(), z);
  std::vector<int> bottom;
  for (int i = k - 1; i >= 0; --i) bottom.push_back(i);
  s.faces.push_back(bottom);
  for (std::size_t r = 0; r + 1 < rings.size(); ++r) {
    const int lo = static_cast<int>(r) * k, hi = lo + k;
    for (int i = 0; i < k; ++i) s.faces.push_back({lo + i, lo + (i + 1) % k, hi + (i + 1) % k, hi + i});
  }
  std::vector<int> top;
  const int last = static_cast<int>(rings.size() - 1) * k;
  for (int i = 0; i < k; ++i) top.push_back(last + i);
  s.faces.push_back(top);
  return s;
}

/// Equilateral triangle of the given side, centred at the origin, CCW.
inline std::vector<Vec2> equilateral_triangle(double side) {
  const double r = side / std::sqrt(3.0);
  std::vector<Vec2> out;
  for (int i = 0; i < 3; ++i) {
    const double theta = std::numbers::pi / 2 + 2.0 * std::numbers::pi * i / 3.0;
    out.emplace_back(r * std::cos(theta), r * std::sin(theta));
  }
  return out;
}

inline const double kTetraHeight = std::sqrt(2.0 / 3.0);

// ---------------------------------------------------------------------------
// Convex fixtures

/// Box with extents (a, b, c); faces ordered +e1, -e1, +e2, -e2, +e3, -e3.
inline Herisson box(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0)) throw Error(ErrorCode::DomainError, "box extents must be positive");
  Fan fan;
  for (int axis = 0; axis < 3; ++axis)
    for (double s : {1.0, -1.0}) {
      Vec3 n = Vec3::Zero();
      n[axis] = s;
      fan.equipment.push_back(n);
    }
  for (int sx : {0, 1})
    for (int sy : {0, 1})
      for (int sz : {0, 1}) {
        std::vector<int> cell{sx, 2 + sy, 4 + sz};
        detail::orient_cell_ccw(fan.equipment, cell);
        fan.cells.push_back(cell);
      }
  return reconstruct(fan, SupportVector{a / 2, a / 2, b / 2, b / 2, c / 2, c / 2});
}

inline Herisson cube() { return box(2.0, 2.0, 2.0); }

/// Regular tetrahedron with insphere radius r centred at the origin.
inline Herisson regular_tetrahedron(double r) {
  if (!(r > 0)) throw Error(ErrorCode::DomainError, "insphere radius must be positive");
  Fan fan;
  const double k = 1.0 / std::sqrt(3.0);
  fan.equipment = {Vec3(k, k, k), Vec3(k, -k, -k), Vec3(-k, k, -k), Vec3(-k, -k, k)};
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<int> cell;
    for (int j = 0; j < 4; ++j)
      if (j != skip) cell.push_back(j);
    detail::orient_cell_ccw(fan.equipment, cell);
    fan.cells.push_back(cell);
  }
  return reconstruct(fan, SupportVector{r, r, r, r});
}

/// Convex polytope {x : (x, n_j) <= 1} whose normals are `count` random unit
/// vectors; the fan is the radial image of their convex hull, so no three
/// normals are coplanar with probability one.
inline Herisson random_convex(int count, std::uint64_t seed) {
  if (count < 4) throw Error(ErrorCode::DomainError, "need at least four normals");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Fan fan;
    for (int j = 0; j < count; ++j) fan.equipment.push_back(Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized());
    const auto& p = fan.equipment;
    bool origin_inside = true;
    for (int a = 0; a < count && origin_inside; ++a)
      for (int b = a + 1; b < count && origin_inside; ++b)
        for (int c = b + 1; c < count && origin_inside; ++c) {
          const Vec3 normal = (p[b] - p[a]).cross(p[c] - p[a]);
          int above = 0, below = 0;
          for (int d = 0; d < count; ++d) {
            if (d == a || d == b || d == c) continue;
            const double s = normal.dot(p[d] - p[a]);
            (s > 0 ? above : below)++;
          }
          if (above > 0 && below > 0) continue;
          // Hull facet: the origin must lie strictly on the inner side.
          const double o = normal.dot(-p[a]);
          if ((above == 0 && o >= -1e-3 * normal.norm()) || (below == 0 && o <= 1e-3 * normal.norm())) {
            origin_inside = false;
            break;
          }
          std::vector<int> cell{a, b, c};
          detail::orient_cell_ccw(fan.equipment, cell);
          fan.cells.push_back(cell);
        }
    if (!origin_inside) continue;
    try {
      return reconstruct(fan, SupportVector(Eigen::VectorXd::Ones(count)));
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::DomainError, "could not draw a well-conditioned random polytope");
}

// ---------------------------------------------------------------------------
// Nonconvex fixtures

/// Unit-edge regular tetrahedron cut by a plane parallel to its base at the
/// fraction `rho` of the height from the apex, glued to its mirror image in
/// that plane. Faces: bottom base, three lower laterals, three upper
/// laterals, top base. The bases carry outward normals, the laterals inward.
inline Herisson reflected_truncated_tetrahedron(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::DomainError, "truncation ratio must lie in (0, 1)");
  const double cut = kTetraHeight * (1.0 - rho);
  const Solid s = stacked_solid({{-cut, equilateral_triangle(1.0)},
                                 {0.0, equilateral_triangle(rho)},
                                 {cut, equilateral_triangle(1.0)}});
  return herisson_from_solid(s, {1, -1, -1, -1, -1, -1, -1, 1});
}

/// The 11-face herisson H_k: two unit-edge regular tetrahedra joined by a
/// triangular prism of length k whose cross-section has perimeter 1/k.
/// Faces: bottom base, three waist faces, three lower laterals, three upper
/// laterals, top base. Bases carry outward normals, all others inward.
inline Herisson waisted_bitetrahedron(int k) {
  if (k < 1) throw Error(ErrorCode::DomainError, "waist length must be a positive integer");
  const double side = 1.0 / (3.0 * k);
  const double frustum = kTetraHeight * (1.0 - side);
  const double half = frustum + 0.5 * k;
  Solid s = stacked_solid({{-half, equilateral_triangle(1.0)},
                           {-0.5 * k, equilateral_triangle(side)},
                           {0.5 * k, equilateral_triangle(side)},
                           {half, equilateral_triangle(1.0)}});
  const std::vector<std::vector<int>> stacked = s.faces;
  const int order[11] = {0, 4, 5, 6, 1, 2, 3, 7, 8, 9, 10};
  for (int j = 0; j < 11; ++j) s.faces[j] = stacked[order[j]];
  std::vector<int> signs(11, -1);
  signs.front() = signs.back() = 1;
  return herisson_from_solid(s, signs);
}

/// Oriented areas the waisted family approaches as k grows.
inline AreaVector waisted_limit_areas() {
  const double q = std::sqrt(3.0) / 4.0;
  return AreaVector{q, -1.0 / 3, -1.0 / 3, -1.0 / 3, -q, -q, -q, -q, -q, -q, q};
}

/// Hourglass cross-section: an isosceles trapezium with bases 3 and 1 and
/// base angles pi/4, united with its mirror image in the short base.
inline std::vector<Vec2> hourglass_section() {
  return {Vec2(-1.5, -1.0), Vec2(1.5, -1.0), Vec2(0.5, 0.0), Vec2(1.5, 1.0), Vec2(-1.5, 1.0), Vec2(-0.5, 0.0)};
}

/// The hourglass extruded by a unit segment orthogonal to its plane. Faces:
/// bottom cap, six sides in section order, top cap. Caps and the two long
/// sides carry outward normals; the four slanted sides next to the reflex
/// edges carry inward normals so the equipment turns monotonically.
/// The caps are the (nonconvex) hourglass itself.
inline Herisson space_filling_prism() {
  const auto section = hourglass_section();
  const Solid s = stacked_solid({{-0.5, section}, {0.5, section}});
  return herisson_from_solid(s, {1, 1, -1, -1, 1, -1, -1, 1});
}

}  // namespace herisson
