#pragma once

// Realization of a herisson from its fan and support numbers.

#include "herisson/fan.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace herisson {

/// Offsets h_j of the face planes (x, n_j) = h_j, index-aligned with the fan.
struct SupportVector {
  Eigen::VectorXd h;

  SupportVector() = default;
  explicit SupportVector(Eigen::VectorXd values) : h(std::move(values)) {}
  SupportVector(std::initializer_list<double> values) : h(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) h[i++] = v;
  }

  int size() const { return static_cast<int>(h.size()); }
  double operator[](int j) const { return h[j]; }
};

/// Oriented face areas f_j, sign equal to the face sign.
struct AreaVector {
  Eigen::VectorXd f;

  AreaVector() = default;
  explicit AreaVector(Eigen::VectorXd values) : f(std::move(values)) {}
  AreaVector(std::initializer_list<double> values) : f(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) f[i++] = v;
  }

  int size() const { return static_cast<int>(f.size()); }
  double operator[](int j) const { return f[j]; }
};

namespace tolerance {
inline constexpr double kSingularDet = 1e-12;
inline constexpr double kConsistency = 1e-8;   // times scale
inline constexpr double kEdge = 1e-9;          // times scale
inline constexpr double kArea = 1e-12;         // times scale^2
inline constexpr double kPlane = 1e-9;         // times scale
}  // namespace tolerance

inline double support_scale(const SupportVector& h) {
  return std::max(1.0, h.h.size() ? h.h.cwiseAbs().maxCoeff() : 0.0);
}

struct Herisson {
  std::shared_ptr<const FanTopology> topology;
  SupportVector h;
  std::vector<Vec3> vertices;                 // one per fan cell
  std::vector<std::vector<int>> faces;        // per face: vertex indices in walk order
  std::vector<int> signs;                     // epsilon_j
  AreaVector oriented_areas;
  std::vector<double> edge_lengths;           // signed, one per arc of the topology
  std::vector<bool> convex_faces;

  const Fan& fan() const { return topology->fan(); }
  int face_count() const { return topology->face_count(); }
  double scale() const { return support_scale(h); }

  std::vector<Vec3> face_polygon(int j) const {
    std::vector<Vec3> out;
    out.reserve(faces[j].size());
    for (int v : faces[j]) out.push_back(vertices[v]);
    return out;
  }

  double perimeter(int j) const {
    const auto& f = faces[j];
    double p = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) p += (vertices[f[(i + 1) % f.size()]] - vertices[f[i]]).norm();
    return p;
  }
};

namespace detail {

struct PlaneTriple {
  int a, b, c;
  double det;
};

// The best-conditioned triple of faces of a cell.
inline PlaneTriple best_triple(const Fan& fan, const std::vector<int>& cell) {
  const auto& n = fan.equipment;
  PlaneTriple best{cell[0], cell[1], cell[2], det3(n[cell[0]], n[cell[1]], n[cell[2]])};
  const int k = static_cast<int>(cell.size());
  for (int x = 0; x < k; ++x)
    for (int y = x + 1; y < k; ++y)
      for (int z = y + 1; z < k; ++z) {
        const double d = det3(n[cell[x]], n[cell[y]], n[cell[z]]);
        if (std::abs(d) > std::abs(best.det)) best = {cell[x], cell[y], cell[z], d};
      }
  return best;
}

inline Eigen::Matrix3d plane_matrix(const Fan& fan, int a, int b, int c) {
  Eigen::Matrix3d m;
  m.row(0) = fan.equipment[a].transpose();
  m.row(1) = fan.equipment[b].transpose();
  m.row(2) = fan.equipment[c].transpose();
  return m;
}

inline Vec3 intersect_planes(const Fan& fan, const SupportVector& h, int a, int b, int c) {
  const Eigen::Matrix3d m = plane_matrix(fan, a, b, c);
  if (std::abs(m.determinant()) < tolerance::kSingularDet) {
    std::ostringstream os;
    os << "planes of faces " << a << ", " << b << ", " << c << " have nearly coplanar normals";
    throw Error(ErrorCode::SingularVertex, os.str());
  }
  return m.partialPivLu().solve(Vec3(h[a], h[b], h[c]));
}

inline double signed_polygon_area(const std::vector<Vec3>& poly, const Vec3& normal) {
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i)
    twice += (poly[i] - poly[0]).cross(poly[i + 1] - poly[0]).dot(normal);
  return 0.5 * twice;
}

}  // namespace detail

/// Face-local corners of face j: corner k is the meeting point of plane j with
/// the planes of its two neighbours inside the k-th cell around j. On the
/// realizability locus these are the herisson's vertices; off it they still
/// bound a polygon whose area is a quadratic function of h.
inline std::vector<Vec3> face_corners(const FanTopology& topo, const SupportVector& h, int j) {
  const auto& rot = topo.rotation(j);
  std::vector<Vec3> corners;
  corners.reserve(rot.size());
  for (int k = 0; k < static_cast<int>(rot.size()); ++k) {
    const auto [pred, succ] = topo.cell_neighbors(j, k);
    corners.push_back(detail::intersect_planes(topo.fan(), h, pred, j, succ));
  }
  return corners;
}

/// Oriented areas of the face-local polygons; equals the area map on the
/// realizability locus and extends it smoothly to all of R^m.
inline AreaVector face_local_areas(const FanTopology& topo, const SupportVector& h) {
  AreaVector f;
  f.f.resize(topo.face_count());
  for (int j = 0; j < topo.face_count(); ++j)
    f.f[j] = detail::signed_polygon_area(face_corners(topo, h, j), topo.fan().equipment[j]);
  return f;
}

inline Herisson reconstruct(std::shared_ptr<const FanTopology> topo, const SupportVector& h) {
  const Fan& fan = topo->fan();
  const int m = fan.face_count();
  if (h.size() != m)
    throw Error(ErrorCode::DomainError,
                "support vector has " + std::to_string(h.size()) + " entries, fan has " + std::to_string(m) + " faces");
  for (int j = 0; j < m; ++j)
    if (!std::isfinite(h[j])) throw Error(ErrorCode::DomainError, "non-finite support number");

  Herisson out;
  out.topology = topo;
  out.h = h;
  const double scale = support_scale(h);

  out.vertices.resize(fan.cell_count());
  for (int c = 0; c < fan.cell_count(); ++c) {
    const auto& cell = fan.cells[c];
    const auto t = detail::best_triple(fan, cell);
    if (std::abs(t.det) < tolerance::kSingularDet)
      throw Error(ErrorCode::SingularVertex, "cell " + std::to_string(c) + " has coplanar normals");
    const Vec3 v = detail::intersect_planes(fan, h, t.a, t.b, t.c);
    for (int f : cell) {
      const double r = fan.equipment[f].dot(v) - h[f];
      if (std::abs(r) > tolerance::kConsistency * scale) {
        std::ostringstream os;
        os << "plane of face " << f << " misses the vertex of cell " << c << " by " << r;
        throw Error(ErrorCode::InconsistentVertex, os.str());
      }
    }
    out.vertices[c] = v;
  }

  out.faces.resize(m);
  out.signs.resize(m);
  out.convex_faces.resize(m);
  out.oriented_areas.f.resize(m);
  for (int j = 0; j < m; ++j) {
    out.faces[j] = topo->face_cells(j);
    const auto poly = out.face_polygon(j);
    const Vec3& n = fan.equipment[j];
    const double area = detail::signed_polygon_area(poly, n);
    if (std::abs(area) <= tolerance::kArea * scale * scale) {
      std::ostringstream os;
      os << "face " << j << " has oriented area " << area;
      throw Error(ErrorCode::DegenerateFace, os.str());
    }
    out.oriented_areas.f[j] = area;
    out.signs[j] = sign_of(area);
    bool convex = true;
    const std::size_t k = poly.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Vec3 e0 = poly[(i + 1) % k] - poly[i];
      const Vec3 e1 = poly[(i + 2) % k] - poly[(i + 1) % k];
      if (e0.cross(e1).dot(n) * out.signs[j] < -tolerance::kArea * scale * scale) convex = false;
    }
    out.convex_faces[j] = convex;
  }

  const auto& hes = topo->half_edges();
  out.edge_lengths.resize(topo->arcs().size());
  for (std::size_t e = 0; e < topo->arcs().size(); ++e) {
    const Arc& arc = topo->arcs()[e];
    const Vec3 dir = fan.equipment[arc.a].cross(fan.equipment[arc.b]).normalized();
    const Vec3& left = out.vertices[hes[arc.he].cell];
    const Vec3& right = out.vertices[hes[hes[arc.he].twin].cell];
    const double len = (left - right).dot(dir);
    if (std::abs(len) <= tolerance::kEdge * scale) {
      std::ostringstream os;
      os << "edge between faces " << arc.a << " and " << arc.b << " has length " << len;
      throw Error(ErrorCode::DegenerateFace, os.str());
    }
    out.edge_lengths[e] = len;
  }
  return out;
}

inline Herisson reconstruct(const Fan& fan, const SupportVector& h) {
  return reconstruct(std::make_shared<const FanTopology>(fan), h);
}

/// Sum_j f_j n_j, exactly as evaluated in double precision.
inline Vec3 balance_residual(const AreaVector& f, const Fan& fan) {
  if (f.size() != fan.face_count()) throw Error(ErrorCode::DomainError, "area vector length differs from fan size");
  Vec3 s = Vec3::Zero();
  for (int j = 0; j < f.size(); ++j) s += f[j] * fan.equipment[j];
  return s;
}

/// Support numbers of the translation by c: h_j = (c, n_j).
inline SupportVector translation_support(const Fan& fan, const Vec3& c) {
  Eigen::VectorXd h(fan.face_count());
  for (int j = 0; j < fan.face_count(); ++j) h[j] = c.dot(fan.equipment[j]);
  return SupportVector(h);
}

/// Translation c that gauge_fix removes from h.
inline Vec3 gauge_translation(const Fan& fan, const SupportVector& h) {
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  Vec3 rhs = Vec3::Zero();
  for (int j = 0; j < fan.face_count(); ++j) {
    gram += fan.equipment[j] * fan.equipment[j].transpose();
    rhs += h[j] * fan.equipment[j];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
  if (eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff()))
    throw Error(ErrorCode::DegenerateEquipment, "equipment does not span 3-space");
  return gram.ldlt().solve(rhs);
}

/// Representative of h's translation class with Sum_j h_j n_j = 0.
inline SupportVector gauge_fix(const Fan& fan, const SupportVector& h) {
  if (h.size() != fan.face_count()) throw Error(ErrorCode::DomainError, "support vector length differs from fan size");
  const Vec3 c = gauge_translation(fan, h);
  return SupportVector(h.h - translation_support(fan, c).h);
}

inline Herisson translate(const Herisson& H, const Vec3& c) {
  return reconstruct(H.topology, SupportVector(H.h.h + translation_support(H.fan(), c).h));
}

/// Minkowski sum of two herissons with the same fan and face signs: the
/// herisson whose support numbers are the sums.
inline Herisson minkowski_sum(const Herisson& a, const Herisson& b) {
  if (!same_equipment(a.fan(), b.fan()) || !same_partition(a.fan(), b.fan()))
    throw Error(ErrorCode::FanMismatch, "summands have different fans");
  if (a.signs != b.signs) throw Error(ErrorCode::FanMismatch, "summands have different face signs");
  return reconstruct(a.topology, SupportVector(a.h.h + b.h.h));
}

/// Upper bound on the longest side of a convex polygon of area at most
/// `target_area` whose side lines pairwise meet at angles >= `min_angle`.
/// The contained isosceles triangle over the longest side l has area at least
/// l^2 sin^2(alpha) / 4.
inline double perimeter_bound(double target_area, double min_angle) {
  if (!(target_area > 0.0) || !std::isfinite(target_area))
    throw Error(ErrorCode::DomainError, "target area must be positive");
  if (!(min_angle > 0.0) || min_angle > std::numbers::pi / 2)
    throw Error(ErrorCode::DomainError, "minimal angle must lie in (0, pi/2]");
  return 2.0 * std::sqrt(target_area) / std::sin(min_angle);
}

/// Smallest angle between the lines of two different sides of any face,
/// computed from the fan alone (side k of face j runs along n_j x n_p).
/// Zero when some face has parallel sides.
inline double min_side_angle(const FanTopology& topo) {
  const auto& n = topo.fan().equipment;
  double best = std::numbers::pi / 2;
  for (int j = 0; j < topo.face_count(); ++j) {
    const auto& rot = topo.rotation(j);
    std::vector<Vec3> dirs;
    for (int k = 0; k < static_cast<int>(rot.size()); ++k)
      dirs.push_back(n[j].cross(n[topo.edge_neighbor(j, k)]).normalized());
    for (std::size_t x = 0; x < dirs.size(); ++x)
      for (std::size_t y = x + 1; y < dirs.size(); ++y) {
        const double s = std::min(1.0, dirs[x].cross(dirs[y]).norm());
        best = std::min(best, std::asin(s));
      }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Realizability locus. A cell with k > 3 faces asks k - 3 extra planes to pass
// through the vertex fixed by three of them; each such condition is linear in
// h. The locus is the null space of the stacked conditions.

inline Eigen::MatrixXd concurrency_constraints(const FanTopology& topo) {
  const Fan& fan = topo.fan();
  const int m = fan.face_count();
  std::vector<Eigen::RowVectorXd> rows;
  for (const auto& cell : fan.cells) {
    if (cell.size() <= 3) continue;
    const auto t = detail::best_triple(fan, cell);
    if (std::abs(t.det) < tolerance::kSingularDet) throw Error(ErrorCode::SingularVertex, "cell with coplanar normals");
    const Eigen::Matrix3d inv_t = detail::plane_matrix(fan, t.a, t.b, t.c).inverse().transpose();
    for (int d : cell) {
      if (d == t.a || d == t.b || d == t.c) continue;
      const Vec3 w = inv_t * fan.equipment[d];
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
      row[t.a] += w[0];
      row[t.b] += w[1];
      row[t.c] += w[2];
      row[d] -= 1.0;
      rows.push_back(row);
    }
  }
  Eigen::MatrixXd c(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) c.row(i) = rows[i];
  return c;
}

/// Orthonormal basis (columns) of the directions along which h may move
/// without breaking any vertex.
inline Eigen::MatrixXd locus_basis(const FanTopology& topo) {
  const int m = topo.face_count();
  const Eigen::MatrixXd c = concurrency_constraints(topo);
  if (c.rows() == 0) return Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(c.rows(), m), m);
  padded.topRows(c.rows()) = c;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s[0]);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff) ++rank;
  return svd.matrixV().rightCols(m - rank);
}

// ---------------------------------------------------------------------------

/// Lists every violated herisson invariant (empty when all hold).
inline std::vector<std::string> invariant_violations(const Herisson& H) {
  std::vector<std::string> out;
  const Fan& fan = H.fan();
  const double scale = H.scale();
  for (int c = 0; c < fan.cell_count(); ++c)
    for (int f : fan.cells[c])
      if (std::abs(fan.equipment[f].dot(H.vertices[c]) - H.h[f]) > tolerance::kPlane * scale)
        out.push_back("vertex " + std::to_string(c) + " is off the plane of face " + std::to_string(f));
  double total = 0.0;
  for (int j = 0; j < H.face_count(); ++j) {
    if (!H.convex_faces[j]) out.push_back("face " + std::to_string(j) + " is not convex");
    const double f = H.oriented_areas[j];
    total += std::abs(f);
    if (sign_of(f) != H.signs[j] || f == 0.0) out.push_back("face " + std::to_string(j) + " sign mismatch");
  }
  const double residual = balance_residual(H.oriented_areas, fan).norm();
  if (residual > 1e-9 * std::max(1.0, total)) {
    std::ostringstream os;
    os << "balance residual " << residual;
    out.push_back(os.str());
  }
  return out;
}

}  // namespace herisson
