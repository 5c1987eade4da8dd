#pragma once

// Equipment vectors and the spherical partition they induce.
//
// A fan stores the unit normals n_0..n_{m-1} of a herisson together with its
// cells: one cyclic list of face indices per herisson vertex, ordered
// counterclockwise as seen from outside the unit sphere. Arcs (adjacent face
// pairs) and the rotation around each face are derived from the cells.

#include "herisson/common.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace herisson {

struct Fan {
  std::vector<Vec3> equipment;
  std::vector<std::vector<int>> cells;

  int face_count() const { return static_cast<int>(equipment.size()); }
  int cell_count() const { return static_cast<int>(cells.size()); }
};

/// Structural equality: identical equipment (to `tol`) and the same cells up
/// to cyclic rotation of each cell and reordering of the cell list.
inline bool same_partition(const Fan& a, const Fan& b) {
  auto canonical = [](const Fan& f) {
    std::vector<std::vector<int>> out;
    out.reserve(f.cells.size());
    for (const auto& cell : f.cells) {
      auto c = cell;
      if (!c.empty()) std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
      out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return a.face_count() == b.face_count() && canonical(a) == canonical(b);
}

inline bool same_equipment(const Fan& a, const Fan& b, double tol = 1e-12) {
  if (a.face_count() != b.face_count()) return false;
  for (int j = 0; j < a.face_count(); ++j)
    if ((a.equipment[j] - b.equipment[j]).norm() > tol) return false;
  return true;
}

struct HalfEdge {
  int from = -1;
  int to = -1;
  int cell = -1;
  int next = -1;
  int prev = -1;
  int twin = -1;
};

struct Arc {
  int a = -1;   // smaller face index
  int b = -1;   // larger face index
  int he = -1;  // half-edge a -> b
};

/// Half-edge view of a fan's cells. Every derived quantity downstream
/// (face walks, arcs, dual rotations) comes from here.
class FanTopology {
 public:
  explicit FanTopology(Fan fan) : fan_(std::move(fan)) { build(); }

  const Fan& fan() const { return fan_; }
  int face_count() const { return fan_.face_count(); }
  int cell_count() const { return fan_.cell_count(); }

  const std::vector<HalfEdge>& half_edges() const { return half_edges_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  int arc_of_half_edge(int he) const { return arc_of_he_[he]; }

  /// Outgoing half-edges of `face`, counterclockwise around n_face.
  const std::vector<int>& rotation(int face) const { return rotation_[face]; }

  /// Cells around `face` in counterclockwise order; vertex k of the face
  /// polygon is the vertex of cell face_cells(face)[k].
  std::vector<int> face_cells(int face) const {
    std::vector<int> out;
    out.reserve(rotation_[face].size());
    for (int he : rotation_[face]) out.push_back(half_edges_[he].cell);
    return out;
  }

  /// Face on the far side of the polygon edge running from vertex k to
  /// vertex k+1 of face `face`.
  int edge_neighbor(int face, int k) const {
    const HalfEdge& out = half_edges_[rotation_[face][k]];
    return half_edges_[out.prev].from;
  }

  /// The two faces adjacent to `face` inside cell of the k-th rotation entry:
  /// (predecessor, successor) in the cell's cyclic order.
  std::pair<int, int> cell_neighbors(int face, int k) const {
    const HalfEdge& out = half_edges_[rotation_[face][k]];
    return {half_edges_[out.prev].from, out.to};
  }

 private:
  void build() {
    const int m = fan_.face_count();
    std::map<std::pair<int, int>, int> directed;
    for (int c = 0; c < fan_.cell_count(); ++c) {
      const auto& cell = fan_.cells[c];
      const int k = static_cast<int>(cell.size());
      if (k < 3) throw Error(ErrorCode::MalformedFan, "cell " + std::to_string(c) + " has fewer than 3 faces");
      const int base = static_cast<int>(half_edges_.size());
      for (int i = 0; i < k; ++i) {
        const int from = cell[i];
        const int to = cell[(i + 1) % k];
        if (from < 0 || from >= m || to < 0 || to >= m)
          throw Error(ErrorCode::MalformedFan, "cell " + std::to_string(c) + " references a face out of range");
        if (from == to) throw Error(ErrorCode::MalformedFan, "cell " + std::to_string(c) + " repeats a face");
        HalfEdge he;
        he.from = from;
        he.to = to;
        he.cell = c;
        he.next = base + (i + 1) % k;
        he.prev = base + (i + k - 1) % k;
        if (!directed.emplace(std::make_pair(from, to), base + i).second)
          throw Error(ErrorCode::MalformedFan,
                      "arc " + std::to_string(from) + "->" + std::to_string(to) + " used by two cells in the same direction");
        half_edges_.push_back(he);
      }
    }
    arc_of_he_.assign(half_edges_.size(), -1);
    for (int i = 0; i < static_cast<int>(half_edges_.size()); ++i) {
      auto& he = half_edges_[i];
      auto it = directed.find({he.to, he.from});
      if (it == directed.end())
        throw Error(ErrorCode::MalformedFan,
                    "arc " + std::to_string(he.from) + "-" + std::to_string(he.to) + " borders only one cell");
      he.twin = it->second;
    }
    for (int i = 0; i < static_cast<int>(half_edges_.size()); ++i) {
      const auto& he = half_edges_[i];
      if (he.from < he.to) {
        arc_of_he_[i] = static_cast<int>(arcs_.size());
        arc_of_he_[he.twin] = static_cast<int>(arcs_.size());
        arcs_.push_back({he.from, he.to, i});
      }
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) {
      return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (int i = 0; i < static_cast<int>(arcs_.size()); ++i) {
      arc_of_he_[arcs_[i].he] = i;
      arc_of_he_[half_edges_[arcs_[i].he].twin] = i;
    }

    std::vector<int> outgoing_count(m, 0), first_out(m, -1);
    for (int i = 0; i < static_cast<int>(half_edges_.size()); ++i) {
      ++outgoing_count[half_edges_[i].from];
      if (first_out[half_edges_[i].from] < 0) first_out[half_edges_[i].from] = i;
    }
    rotation_.assign(m, {});
    for (int j = 0; j < m; ++j) {
      if (first_out[j] < 0) throw Error(ErrorCode::MalformedFan, "face " + std::to_string(j) + " belongs to no cell");
      int he = first_out[j];
      do {
        rotation_[j].push_back(he);
        if (static_cast<int>(rotation_[j].size()) > outgoing_count[j])
          throw Error(ErrorCode::MalformedFan, "rotation around face " + std::to_string(j) + " does not close");
        he = half_edges_[half_edges_[he].prev].twin;
      } while (he != first_out[j]);
      if (static_cast<int>(rotation_[j].size()) != outgoing_count[j])
        throw Error(ErrorCode::MalformedFan, "face " + std::to_string(j) + " is a pinch point of the partition");
    }
  }

  Fan fan_;
  std::vector<HalfEdge> half_edges_;
  std::vector<Arc> arcs_;
  std::vector<int> arc_of_he_;
  std::vector<std::vector<int>> rotation_;
};

// ---------------------------------------------------------------------------
// Validation

enum class FanIssue {
  NonUnitVector,
  MalformedCell,
  UnpairedArc,
  AntipodalAdjacentPair,
  LowValence,
  EulerFailure,
  NonConvexCell,
  CrossingArcs,
  NotAPartition,
};

inline const char* to_string(FanIssue issue) {
  switch (issue) {
    case FanIssue::NonUnitVector: return "non-unit vector";
    case FanIssue::MalformedCell: return "malformed cell";
    case FanIssue::UnpairedArc: return "unpaired arc";
    case FanIssue::AntipodalAdjacentPair: return "antipodal adjacent pair";
    case FanIssue::LowValence: return "face in fewer than three arcs";
    case FanIssue::EulerFailure: return "Euler failure";
    case FanIssue::NonConvexCell: return "non-convex cell";
    case FanIssue::CrossingArcs: return "crossing arcs";
    case FanIssue::NotAPartition: return "cells do not tile the sphere";
  }
  return "unknown";
}

struct Violation {
  FanIssue issue;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool contains(FanIssue issue) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.issue == issue; });
  }
  void add(FanIssue issue, std::string detail) { violations.push_back({issue, std::move(detail)}); }
};

namespace detail {

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kAntipodalTol = 1e-9;
inline constexpr double kArcTouchTol = 1e-10;
inline constexpr double kConvexTol = 1e-10;

// x on the minor arc a-b (a, b, x unit; x assumed on the great circle).
inline bool on_minor_arc(const Vec3& a, const Vec3& b, const Vec3& x, double tol) {
  const Vec3 axis = a.cross(b);
  const double len = axis.norm();
  if (len < 1e-15) return (x - a).norm() <= tol;
  const Vec3 u = axis / len;
  return a.cross(x).dot(u) >= -tol && x.cross(b).dot(u) >= -tol;
}

// Strictly interior point of the minor arc a-b (away from endpoints by tol).
inline bool strictly_inside_arc(const Vec3& a, const Vec3& b, const Vec3& x, double tol) {
  const Vec3 axis = a.cross(b);
  const double len = axis.norm();
  if (len < 1e-15) return false;
  const Vec3 u = axis / len;
  return a.cross(x).dot(u) > tol && x.cross(b).dot(u) > tol;
}

/// True when the minor arcs a-b and c-d meet anywhere other than at a common
/// endpoint.
inline bool arcs_cross(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, double tol) {
  auto close = [tol](const Vec3& x, const Vec3& y) { return (x - y).norm() <= tol; };
  const bool share = close(a, c) || close(a, d) || close(b, c) || close(b, d);
  const Vec3 n1 = a.cross(b).normalized();
  const Vec3 n2 = c.cross(d).normalized();
  const Vec3 line = n1.cross(n2);
  if (line.norm() < 1e-12) {
    // Same great circle: they overlap if an endpoint of one is inside the other.
    const bool identical = (close(a, c) && close(b, d)) || (close(a, d) && close(b, c));
    return identical || strictly_inside_arc(a, b, c, tol) || strictly_inside_arc(a, b, d, tol) ||
           strictly_inside_arc(c, d, a, tol) || strictly_inside_arc(c, d, b, tol);
  }
  // Two distinct great circles meet in an antipodal pair; a shared endpoint is
  // one of them and the other cannot lie on a minor arc.
  if (share) return false;
  const Vec3 p = line.normalized();
  for (const Vec3& x : {p, Vec3(-p)}) {
    if (on_minor_arc(a, b, x, tol) && on_minor_arc(c, d, x, tol)) return true;
  }
  return false;
}

// Signed area of the spherical triangle (a, b, c), positive when CCW from outside.
inline double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = det3(a, b, c);
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

}  // namespace detail

/// Checks every condition a herisson's direction skeleton must satisfy. Never
/// throws; all problems are collected into the report.
inline ValidationReport validate(const Fan& fan) {
  ValidationReport report;
  const int m = fan.face_count();
  for (int j = 0; j < m; ++j) {
    const double n = fan.equipment[j].norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > detail::kUnitTol) {
      std::ostringstream os;
      os << "equipment vector " << j << " has norm " << n;
      report.add(FanIssue::NonUnitVector, os.str());
    }
  }

  bool cells_ok = true;
  for (int c = 0; c < fan.cell_count(); ++c) {
    const auto& cell = fan.cells[c];
    bool bad = cell.size() < 3;
    for (std::size_t i = 0; i < cell.size() && !bad; ++i) {
      if (cell[i] < 0 || cell[i] >= m) bad = true;
      for (std::size_t k = i + 1; k < cell.size() && !bad; ++k) bad = cell[i] == cell[k];
    }
    if (bad) {
      report.add(FanIssue::MalformedCell, "cell " + std::to_string(c) + " needs at least 3 distinct in-range faces");
      cells_ok = false;
    }
  }
  if (!cells_ok) return report;

  std::optional<FanTopology> topo;
  try {
    topo.emplace(fan);
  } catch (const Error& e) {
    report.add(FanIssue::UnpairedArc, e.what());
    return report;
  }

  const auto& arcs = topo->arcs();
  const auto& n = fan.equipment;
  for (const Arc& arc : arcs) {
    if ((n[arc.a] + n[arc.b]).norm() <= detail::kAntipodalTol)
      report.add(FanIssue::AntipodalAdjacentPair,
                 "faces " + std::to_string(arc.a) + " and " + std::to_string(arc.b) + " are adjacent with opposite normals");
  }

  std::vector<int> valence(m, 0);
  for (const Arc& arc : arcs) {
    ++valence[arc.a];
    ++valence[arc.b];
  }
  for (int j = 0; j < m; ++j)
    if (valence[j] < 3) report.add(FanIssue::LowValence, "face " + std::to_string(j) + " lies on " + std::to_string(valence[j]) + " arcs");

  const int euler = fan.cell_count() - static_cast<int>(arcs.size()) + m;
  if (euler != 2) report.add(FanIssue::EulerFailure, "V - E + F = " + std::to_string(euler));

  bool convex = true;
  for (int c = 0; c < fan.cell_count(); ++c) {
    const auto& cell = fan.cells[c];
    const int k = static_cast<int>(cell.size());
    // Area normal of the spherical polygon; every vertex of a convex CCW cell
    // lies strictly on its positive side.
    Vec3 axis = Vec3::Zero();
    for (int i = 0; i < k; ++i) axis += n[cell[i]].cross(n[cell[(i + 1) % k]]);
    bool ok = axis.norm() > 1e-12;
    for (int i = 0; i < k && ok; ++i) {
      if (axis.dot(n[cell[i]]) <= 1e-12 * axis.norm()) ok = false;
      const Vec3& a = n[cell[i]];
      const Vec3& b = n[cell[(i + 1) % k]];
      for (int t = 0; t < k && ok; ++t) {
        if (t == i || t == (i + 1) % k) continue;
        if (det3(a, b, n[cell[t]]) <= -detail::kConvexTol) ok = false;
      }
    }
    if (!ok) {
      convex = false;
      report.add(FanIssue::NonConvexCell, "cell " + std::to_string(c) + " is not a convex CCW spherical polygon");
    }
  }

  for (std::size_t x = 0; x < arcs.size(); ++x) {
    for (std::size_t y = x + 1; y < arcs.size(); ++y) {
      const Arc& p = arcs[x];
      const Arc& q = arcs[y];
      if (detail::arcs_cross(n[p.a], n[p.b], n[q.a], n[q.b], detail::kArcTouchTol)) {
        report.add(FanIssue::CrossingArcs, "arcs " + std::to_string(p.a) + "-" + std::to_string(p.b) + " and " +
                                               std::to_string(q.a) + "-" + std::to_string(q.b) + " cross");
      }
    }
  }

  if (convex) {
    double total = 0.0;
    for (const auto& cell : fan.cells)
      for (std::size_t i = 1; i + 1 < cell.size(); ++i)
        total += detail::spherical_triangle_area(n[cell[0]], n[cell[i]], n[cell[i + 1]]);
    if (std::abs(total - 4.0 * std::numbers::pi) > 1e-8) {
      std::ostringstream os;
      os << "cell areas sum to " << total << " instead of 4*pi";
      report.add(FanIssue::NotAPartition, os.str());
    }
  }
  return report;
}

/// No three equipment vectors coplanar.
inline bool is_general_position(const Fan& fan, double tol = 1e-10) {
  const auto& n = fan.equipment;
  const int m = fan.face_count();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        if (std::abs(det3(n[i], n[j], n[k])) <= tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Dual complex: nodes are faces, edges are arcs, 2-cells are fan cells.

struct DualComplex {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;            // (a, b), a < b
  std::vector<std::vector<int>> cells;               // cyclic node lists
  std::vector<std::vector<int>> incident_edges;      // per node, cyclic (CCW) edge order
  std::vector<std::vector<int>> cell_edges;          // per cell, boundary edge ids

  int edge_count() const { return static_cast<int>(edges.size()); }
  int cell_count() const { return static_cast<int>(cells.size()); }
};

/// Builds the dual complex. Two-face cells stand for surface vertices where
/// two collinear edges meet; such a vertex is removed and its two edges are
/// merged, so no 2-cell of the result is bounded by two edges.
inline DualComplex dual_complex(const Fan& fan) {
  Fan collapsed;
  collapsed.equipment = fan.equipment;
  for (const auto& cell : fan.cells) {
    if (cell.size() == 2) continue;
    if (cell.size() < 3) throw Error(ErrorCode::MalformedFan, "cell with fewer than two faces");
    collapsed.cells.push_back(cell);
  }
  const FanTopology topo(collapsed);
  DualComplex dual;
  dual.node_count = topo.face_count();
  for (const Arc& arc : topo.arcs()) dual.edges.emplace_back(arc.a, arc.b);
  dual.cells = collapsed.cells;
  dual.cell_edges.assign(collapsed.cells.size(), {});
  for (int he = 0; he < static_cast<int>(topo.half_edges().size()); ++he)
    dual.cell_edges[topo.half_edges()[he].cell].push_back(topo.arc_of_half_edge(he));
  dual.incident_edges.assign(dual.node_count, {});
  for (int j = 0; j < dual.node_count; ++j)
    for (int he : topo.rotation(j)) dual.incident_edges[j].push_back(topo.arc_of_half_edge(he));
  return dual;
}

}  // namespace herisson
