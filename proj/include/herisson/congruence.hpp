#pragma once

// Sign labelings and congruence decisions for herissons of one orientation
// class: edge labels on the dual complex, the polygon labeling rules, and
// the superposition walk that recovers the translation.

#include "herisson/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

namespace herisson {

/// Number of +1 <-> -1 alternations around a cyclic sequence; zeros are
/// skipped, including across the wrap.
inline int sign_changes(std::span<const int> labels) {
  std::vector<int> nonzero;
  for (int x : labels)
    if (x != 0) nonzero.push_back(x > 0 ? 1 : -1);
  int changes = 0;
  for (std::size_t i = 0; i < nonzero.size(); ++i)
    if (nonzero[i] != nonzero[(i + 1) % nonzero.size()]) ++changes;
  return changes;
}

inline int sign_changes(std::initializer_list<int> labels) {
  return sign_changes(std::span<const int>(labels.begin(), labels.size()));
}

/// Labels in {+1, 0, -1}, one per arc of the fan (dual edge).
struct EdgeLabeling {
  std::vector<int> labels;

  EdgeLabeling negated() const {
    EdgeLabeling out{labels};
    for (int& x : out.labels) x = -x;
    return out;
  }
  bool all_zero() const {
    return std::all_of(labels.begin(), labels.end(), [](int x) { return x == 0; });
  }
};

struct CauchyVerdict {
  enum class Kind { AllZero, Witness, ViolatesLemma };
  Kind kind = Kind::AllZero;
  int vertex = -1;  // witness node
  int index = 0;    // its number of sign changes
};

/// Index of every node: sign changes of the labels met in one circuit.
inline std::vector<int> node_indices(const DualComplex& dual, const EdgeLabeling& labels) {
  std::vector<int> out(dual.node_count);
  for (int v = 0; v < dual.node_count; ++v) {
    std::vector<int> around;
    for (int e : dual.incident_edges[v]) around.push_back(labels.labels.at(e));
    out[v] = sign_changes(around);
  }
  return out;
}

/// Either every edge is labeled 0, or some node touching a nonzero edge has
/// index at most 2. ViolatesLemma is reported, never thrown, so that tests can
/// probe the statement.
inline CauchyVerdict cauchy_verdict(const DualComplex& dual, const EdgeLabeling& labels) {
  if (static_cast<int>(labels.labels.size()) != dual.edge_count())
    throw Error(ErrorCode::DomainError, "one label per dual edge is required");
  if (labels.all_zero()) return {CauchyVerdict::Kind::AllZero, -1, 0};
  const auto index = node_indices(dual, labels);
  for (int v = 0; v < dual.node_count; ++v) {
    const bool touches = std::any_of(dual.incident_edges[v].begin(), dual.incident_edges[v].end(),
                                     [&](int e) { return labels.labels[e] != 0; });
    if (touches && index[v] <= 2) return {CauchyVerdict::Kind::Witness, v, index[v]};
  }
  return {CauchyVerdict::Kind::ViolatesLemma, -1, 0};
}

// ---------------------------------------------------------------------------
// Planar convex polygons, vertices counterclockwise.

using Polygon2 = std::vector<Vec2>;

namespace detail {

inline double polygon_area(const Polygon2& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - u.y() * v.x();
  }
  return 0.5 * a;
}

inline double polygon_scale(const Polygon2& p, const Polygon2& q) {
  double s = 1.0;
  for (const auto* poly : {&p, &q})
    for (const Vec2& v : *poly) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

inline Vec2 outward_normal(const Polygon2& p, std::size_t i) {
  const Vec2 d = p[(i + 1) % p.size()] - p[i];
  return Vec2(d.y(), -d.x()).normalized();
}

inline double support(const Polygon2& p, const Vec2& u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : p) best = std::max(best, v.dot(u));
  return best;
}

inline double wrap_angle(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  x = std::fmod(x, two_pi);
  return x < 0 ? x + two_pi : x;
}

inline constexpr double kAngleTol = 1e-9;

}  // namespace detail

/// True iff some translate of p lies inside q without coinciding with it.
inline bool can_translate_inside(const Polygon2& p, const Polygon2& q) {
  const double scale = detail::polygon_scale(p, q);
  const double tol = 1e-9 * scale;
  if (detail::polygon_area(p) >= detail::polygon_area(q) - 1e-9 * scale * scale) return false;

  // p + c inside q  <=>  (c, u_i) <= h_q(u_i) - h_p(u_i) for every edge normal u_i of q.
  std::vector<Vec2> normals;
  std::vector<double> bounds;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Vec2 u = detail::outward_normal(q, i);
    normals.push_back(u);
    bounds.push_back(u.dot(q[i]) - detail::support(p, u));
  }
  auto feasible = [&](const Vec2& c) {
    for (std::size_t i = 0; i < normals.size(); ++i)
      if (normals[i].dot(c) > bounds[i] + tol) return false;
    return true;
  };
  // The feasible set is a bounded polygon; if nonempty it has a vertex where
  // two constraint lines meet.
  for (std::size_t i = 0; i < normals.size(); ++i)
    for (std::size_t k = i + 1; k < normals.size(); ++k) {
      Eigen::Matrix2d a;
      a.row(0) = normals[i].transpose();
      a.row(1) = normals[k].transpose();
      if (std::abs(a.determinant()) < 1e-12) continue;
      if (feasible(a.partialPivLu().solve(Vec2(bounds[i], bounds[k])))) return true;
    }
  return false;
}

struct PolygonLabeling {
  std::vector<int> vertex_labels_first, edge_labels_first;
  std::vector<int> vertex_labels_second, edge_labels_second;
  int index_first = 0;
  int index_second = 0;

  bool all_zero() const {
    auto zero = [](const std::vector<int>& v) { return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; }); };
    return zero(vertex_labels_first) && zero(edge_labels_first) && zero(vertex_labels_second) &&
           zero(edge_labels_second);
  }
};

namespace detail {

// Labels the vertices and edges of `self` against `other` and returns the
// circuit index.
inline int label_against(const Polygon2& self, const Polygon2& other, double length_tol, std::vector<int>& vertex_labels,
                         std::vector<int>& edge_labels) {
  const std::size_t n = self.size();
  std::vector<double> self_angles(n), other_angles(other.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = outward_normal(self, i);
    self_angles[i] = std::atan2(u.y(), u.x());
  }
  for (std::size_t i = 0; i < other.size(); ++i) {
    const Vec2 u = outward_normal(other, i);
    other_angles[i] = std::atan2(u.y(), u.x());
  }
  vertex_labels.assign(n, 0);
  edge_labels.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    // Vertex i sits between edge i-1 and edge i; its open normal cone is the
    // counterclockwise sweep between their normals.
    const double from = self_angles[(i + n - 1) % n];
    const double sweep = wrap_angle(self_angles[i] - from);
    for (double a : other_angles) {
      const double t = wrap_angle(a - from);
      if (t > kAngleTol && t < sweep - kAngleTol) vertex_labels[i] = -1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double len = (self[(i + 1) % n] - self[i]).norm();
    edge_labels[i] = 1;  // parallel face of the other polygon is a vertex
    for (std::size_t k = 0; k < other.size(); ++k) {
      const double d = wrap_angle(other_angles[k] - self_angles[i] + kAngleTol);
      if (d <= 2 * kAngleTol) {
        const double other_len = (other[(k + 1) % other.size()] - other[k]).norm();
        edge_labels[i] = std::abs(len - other_len) <= length_tol ? 0 : (len > other_len ? 1 : -1);
      }
    }
  }
  std::vector<int> circuit;
  for (std::size_t i = 0; i < n; ++i) {
    circuit.push_back(vertex_labels[i]);
    circuit.push_back(edge_labels[i]);
  }
  return sign_changes(circuit);
}

}  // namespace detail

/// Labels two convex polygons against each other. A vertex whose open normal
/// cone contains an edge normal of the other polygon is labeled -1 and that
/// edge +1; an edge without a parallel edge is +1; parallel edges compare
/// lengths (longer +1, shorter -1, equal 0); remaining vertices are 0.
inline PolygonLabeling label_parallel_faces(const Polygon2& first, const Polygon2& second) {
  if (can_translate_inside(first, second) || can_translate_inside(second, first))
    throw Error(ErrorCode::NotComparable, "one polygon fits inside the other by a translation");
  const double tol = 1e-9 * detail::polygon_scale(first, second);
  PolygonLabeling out;
  out.index_first = detail::label_against(first, second, tol, out.vertex_labels_first, out.edge_labels_first);
  out.index_second = detail::label_against(second, first, tol, out.vertex_labels_second, out.edge_labels_second);
  return out;
}

// ---------------------------------------------------------------------------
// Herissons

/// Orthonormal in-plane frame (a, b) with a x b = n: a is the normalized
/// projection of the first coordinate axis not parallel to n.
inline std::pair<Vec3, Vec3> face_frame(const Vec3& n) {
  for (int axis = 0; axis < 3; ++axis) {
    const Vec3 e = Vec3::Unit(axis);
    if (std::abs(e.dot(n)) < 1.0 - 1e-9) {
      const Vec3 a = (e - e.dot(n) * n).normalized();
      return {a, n.cross(a)};
    }
  }
  throw Error(ErrorCode::DomainError, "zero normal");
}

/// Face j of H in its face frame, counterclockwise whatever its sign.
inline Polygon2 planar_face(const Herisson& H, int j) {
  const auto [a, b] = face_frame(H.fan().equipment[j]);
  Polygon2 out;
  for (const Vec3& v : H.face_polygon(j)) out.emplace_back(v.dot(a), v.dot(b));
  if (H.signs[j] < 0) std::reverse(out.begin(), out.end());
  return out;
}

/// Checks conditions (i)-(iii) for being parallel and of the same
/// orientation; throws NotSameClass naming the first failed one.
inline void require_same_class(const Herisson& first, const Herisson& second) {
  if (!same_equipment(first.fan(), second.fan()))
    throw Error(ErrorCode::NotSameClass, "condition (i): equipments differ");
  if (!same_partition(first.fan(), second.fan()))
    throw Error(ErrorCode::NotSameClass, "condition (ii): sphere partitions differ");
  if (first.signs != second.signs) throw Error(ErrorCode::NotSameClass, "condition (iii): face signs differ");
}

struct CongruenceVerdict {
  enum class Kind { Congruent, HypothesisFailure, Distinct };
  Kind kind = Kind::Congruent;
  Vec3 translation = Vec3::Zero();  // maps the first herisson onto the second
  int face = -1;                    // witness face
  bool first_inside_second = false; // HypothesisFailure direction
  int index = 0;                    // Distinct: index of the witness face
  EdgeLabeling labels;              // per arc: sign(|l1| - |l2|)
  CauchyVerdict cauchy;
};

inline const char* to_string(CongruenceVerdict::Kind k) {
  switch (k) {
    case CongruenceVerdict::Kind::Congruent: return "congruent";
    case CongruenceVerdict::Kind::HypothesisFailure: return "face fits inside parallel face";
    case CongruenceVerdict::Kind::Distinct: return "distinct";
  }
  return "unknown";
}

inline CongruenceVerdict congruent_and_parallel(const Herisson& first, const Herisson& second_in) {
  require_same_class(first, second_in);
  // Re-express the second herisson over the first one's topology so that
  // vertex and face indices correspond.
  const Herisson second = reconstruct(first.topology, second_in.h);
  const double scale = std::max(first.scale(), second.scale());
  const double tol = 1e-9 * scale;

  CongruenceVerdict out;
  const auto& arcs = first.topology->arcs();
  out.labels.labels.resize(arcs.size());
  for (std::size_t e = 0; e < arcs.size(); ++e) {
    const double d = std::abs(first.edge_lengths[e]) - std::abs(second.edge_lengths[e]);
    out.labels.labels[e] = std::abs(d) <= tol ? 0 : sign_of(d);
  }
  out.cauchy = cauchy_verdict(dual_complex(first.fan()), out.labels);

  // Parallel faces share their edge directions, so only the edge-length
  // rule applies and every polygon vertex is labeled 0. Containment is only
  // tested for convex face pairs.
  int distinct_face = -1, distinct_index = 0;
  for (int j = 0; j < first.face_count(); ++j) {
    if (first.convex_faces[j] && second.convex_faces[j]) {
      const Polygon2 p = planar_face(first, j);
      const Polygon2 q = planar_face(second, j);
      if (can_translate_inside(p, q) || can_translate_inside(q, p)) {
        out.kind = CongruenceVerdict::Kind::HypothesisFailure;
        out.face = j;
        out.first_inside_second = can_translate_inside(p, q);
        return out;
      }
    }
    if (distinct_face < 0) {
      const auto p = first.face_polygon(j), q = second.face_polygon(j);
      std::vector<int> labels;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = (p[(k + 1) % p.size()] - p[k]).norm() - (q[(k + 1) % q.size()] - q[k]).norm();
        labels.push_back(std::abs(d) <= tol ? 0 : sign_of(d));
      }
      if (std::any_of(labels.begin(), labels.end(), [](int x) { return x != 0; })) {
        distinct_face = j;
        distinct_index = sign_changes(labels);
      }
    }
  }
  if (distinct_face >= 0) {
    out.kind = CongruenceVerdict::Kind::Distinct;
    out.face = distinct_face;
    out.index = distinct_index;
    return out;
  }

  // Superpose face 0 and walk across arcs checking that each next face lands
  // on its partner.
  const int anchor = first.faces[0][0];
  out.translation = second.vertices[anchor] - first.vertices[anchor];
  std::vector<bool> seen(first.face_count(), false);
  std::queue<int> pending;
  pending.push(0);
  seen[0] = true;
  while (!pending.empty()) {
    const int j = pending.front();
    pending.pop();
    for (int v : first.faces[j]) {
      if ((first.vertices[v] + out.translation - second.vertices[v]).norm() > tol) {
        out.kind = CongruenceVerdict::Kind::Distinct;
        out.face = j;
        return out;
      }
    }
    for (int k = 0; k < static_cast<int>(first.faces[j].size()); ++k) {
      const int next = first.topology->edge_neighbor(j, k);
      if (!seen[next]) {
        seen[next] = true;
        pending.push(next);
      }
    }
  }
  out.kind = CongruenceVerdict::Kind::Congruent;
  return out;
}

}  // namespace herisson
