#pragma once

// Continuity-method solver: the area map, its Jacobian, target checks, and
// predictor-corrector continuation from a seed herisson to prescribed
// oriented areas.

#include "herisson/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace herisson {

enum class JacobianMode { FiniteDifference, Analytic };

struct SolveOptions {
  double tol_area = 1e-10;          // relative; absolute tolerance is tol_area * scale^2
  int max_newton_iters = 50;
  int homotopy_steps = 16;          // initial uniform step count
  double min_step = 1e-6;
  double divergence_bound = 1e3;    // B
  JacobianMode jacobian_mode = JacobianMode::Analytic;
  double fd_step = 1e-6;            // relative; probes move by fd_step * scale
  bool allow_non_general_position = false;
  std::function<void(double t, const Herisson&)> on_accept;  // called at every accepted point
};

enum class SolveStatus { Converged, Degenerated, Diverged, MaxIterations };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Degenerated: return "Degenerated";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::MaxIterations: return "MaxIterations";
  }
  return "unknown";
}

struct TraceRecord {
  double t = 0.0;
  double residual = 0.0;
  double min_abs_area = 0.0;
  double max_perimeter = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  SupportVector h_final;
  double t_reached = 0.0;
  std::vector<TraceRecord> trace;
  std::string message;
};

/// phi(h): oriented areas of the herisson with support numbers h.
inline AreaVector area_map(const Fan& fan, const SupportVector& h) { return reconstruct(fan, h).oriented_areas; }

/// Derivative of the face-local areas. For adjacent faces i, j the entry is
/// the signed shared edge length over sin(angle(n_i, n_j)); the diagonal
/// follows from translation invariance.
inline Eigen::MatrixXd analytic_jacobian(const FanTopology& topo, const SupportVector& h) {
  const auto& n = topo.fan().equipment;
  const int m = topo.face_count();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const auto corners = face_corners(topo, h, i);
    const int k_count = static_cast<int>(corners.size());
    for (int k = 0; k < k_count; ++k) {
      const int j = topo.edge_neighbor(i, k);
      const double c = n[i].dot(n[j]);
      const double s2 = 1.0 - c * c;
      if (s2 < 1e-24) throw Error(ErrorCode::SingularVertex, "adjacent faces are parallel");
      const Vec3 shift = (n[j] - c * n[i]) / s2;
      const double entry = shift.cross(corners[(k + 1) % k_count] - corners[k]).dot(n[i]);
      J(i, j) += entry;
      J(i, i) -= c * entry;
    }
  }
  return J;
}

/// Central differences of the face-local areas with step fd_step * scale.
inline Eigen::MatrixXd fd_jacobian(const FanTopology& topo, const SupportVector& h, double fd_step = 1e-6) {
  const int m = topo.face_count();
  const double step = fd_step * support_scale(h);
  Eigen::MatrixXd J(m, m);
  for (int j = 0; j < m; ++j) {
    SupportVector plus = h, minus = h;
    plus.h[j] += step;
    minus.h[j] -= step;
    try {
      J.col(j) = (face_local_areas(topo, plus).f - face_local_areas(topo, minus).f) / (2.0 * step);
    } catch (const Error& e) {
      throw Error(ErrorCode::ProbeFailed, "probe along h_" + std::to_string(j) + " failed: " + e.what());
    }
  }
  return J;
}

inline Eigen::MatrixXd jacobian(const FanTopology& topo, const SupportVector& h, JacobianMode mode,
                                double fd_step = 1e-6) {
  return mode == JacobianMode::Analytic ? analytic_jacobian(topo, h) : fd_jacobian(topo, h, fd_step);
}

inline Eigen::MatrixXd jacobian(const Fan& fan, const SupportVector& h, JacobianMode mode, double fd_step = 1e-6) {
  return jacobian(FanTopology(fan), h, mode, fd_step);
}

// ---------------------------------------------------------------------------

enum class TargetIssue { LengthMismatch, SignMismatch, Unbalanced, NotGeneralPosition };

inline const char* to_string(TargetIssue issue) {
  switch (issue) {
    case TargetIssue::LengthMismatch: return "length mismatch";
    case TargetIssue::SignMismatch: return "sign disagreement";
    case TargetIssue::Unbalanced: return "unbalanced target";
    case TargetIssue::NotGeneralPosition: return "equipment not in general position";
  }
  return "unknown";
}

struct TargetReport {
  struct Entry {
    TargetIssue issue;
    std::string detail;
  };
  std::vector<Entry> violations;

  bool ok() const { return violations.empty(); }
  bool contains(TargetIssue issue) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Entry& e) { return e.issue == issue; });
  }
  std::string summary() const {
    std::string out;
    for (const auto& v : violations) out += std::string(out.empty() ? "" : "; ") + to_string(v.issue) + ": " + v.detail;
    return out;
  }
};

inline TargetReport validate_target(const Fan& fan, const AreaVector& f0, const AreaVector& g,
                                    bool allow_non_general_position = false) {
  TargetReport report;
  if (f0.size() != fan.face_count() || g.size() != fan.face_count()) {
    report.violations.push_back({TargetIssue::LengthMismatch, "expected one value per face"});
    return report;
  }
  for (int j = 0; j < g.size(); ++j)
    if (!(f0[j] * g[j] > 0.0))
      report.violations.push_back({TargetIssue::SignMismatch, "face " + std::to_string(j)});
  const double total = g.f.cwiseAbs().sum();
  const double residual = balance_residual(g, fan).norm();
  if (!(residual <= 1e-9 * total))
    report.violations.push_back({TargetIssue::Unbalanced, "residual " + std::to_string(residual)});
  if (!allow_non_general_position && !is_general_position(fan))
    report.violations.push_back({TargetIssue::NotGeneralPosition, "three equipment vectors are coplanar"});
  return report;
}

// ---------------------------------------------------------------------------

namespace detail {

enum class StepFailure { None, Degenerate, Diverge, NoConvergence };

inline SolveStatus status_of(StepFailure f) {
  switch (f) {
    case StepFailure::Degenerate: return SolveStatus::Degenerated;
    case StepFailure::Diverge: return SolveStatus::Diverged;
    default: return SolveStatus::MaxIterations;
  }
}

// Pseudo-inverse solve restricted to the locus coordinates. The three
// smallest singular values belong to translations and are discarded; any
// further near-zero value means the path reached the boundary of the class.
struct LocusSolve {
  bool degenerate = false;
  Eigen::VectorXd dz;
};

inline LocusSolve locus_solve(const Eigen::MatrixXd& jn, const Eigen::VectorXd& rhs) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jn, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const int rank = static_cast<int>(s.size()) - 3;
  LocusSolve out;
  if (rank <= 0 || s[rank - 1] < 1e-10 * s[0]) {
    out.degenerate = true;
    return out;
  }
  const Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  out.dz = v * (u.transpose() * rhs).cwiseQuotient(s.head(rank));
  return out;
}

}  // namespace detail

/// Continuation from the seed h0 (areas f0) along g(t) = (1-t) f0 + t g.
inline SolveOutcome solve_minkowski(const Fan& fan, const SupportVector& h0, const AreaVector& g,
                                    const SolveOptions& opts = {}) {
  auto topo = std::make_shared<const FanTopology>(fan);
  if (h0.size() != fan.face_count() || g.size() != fan.face_count())
    throw Error(ErrorCode::PreconditionFailed, "seed and target need one value per face");
  const Herisson seed = reconstruct(topo, h0);
  const AreaVector f0 = seed.oriented_areas;
  const TargetReport report = validate_target(fan, f0, g, opts.allow_non_general_position);
  if (!report.ok()) throw Error(ErrorCode::PreconditionFailed, report.summary());

  const Eigen::MatrixXd N = locus_basis(*topo);
  const Eigen::VectorXd velocity = g.f - f0.f;
  const double alpha = min_side_angle(*topo);
  const double B = opts.divergence_bound;

  SupportVector h = gauge_fix(fan, h0);
  const double h0_norm = std::max(h.h.norm(), std::numeric_limits<double>::min());

  auto target_at = [&](double t) -> Eigen::VectorXd { return (1.0 - t) * f0.f + t * g.f; };

  auto in_class = [&](const Herisson& H) {
    for (int j = 0; j < H.face_count(); ++j)
      if (sign_of(H.oriented_areas[j]) != seed.signs[j]) return false;
    for (std::size_t e = 0; e < H.edge_lengths.size(); ++e)
      if (sign_of(H.edge_lengths[e]) != sign_of(seed.edge_lengths[e])) return false;
    return true;
  };

  auto record = [&](double t, const Herisson& H, const Eigen::VectorXd& residual) {
    TraceRecord rec;
    rec.t = t;
    rec.residual = residual.cwiseAbs().maxCoeff();
    rec.min_abs_area = H.oriented_areas.f.cwiseAbs().minCoeff();
    for (int j = 0; j < H.face_count(); ++j) rec.max_perimeter = std::max(rec.max_perimeter, H.perimeter(j));
    return rec;
  };

  SolveOutcome out;
  out.trace.push_back(record(0.0, seed, Eigen::VectorXd::Zero(fan.face_count())));

  const double max_step = 1.0 / opts.homotopy_steps;
  double t = 0.0;
  double dt = max_step;
  auto failure = detail::StepFailure::None;

  while (t < 1.0) {
    dt = std::min(dt, 1.0 - t);
    const double t1 = (dt >= 1.0 - t) ? 1.0 : t + dt;
    const Eigen::VectorXd goal = target_at(t1);
    auto step_failure = detail::StepFailure::NoConvergence;
    SupportVector trial = h;

    try {
      // Predictor along the tangent of the path.
      const Eigen::MatrixXd jn0 = jacobian(*topo, h, opts.jacobian_mode, opts.fd_step) * N;
      const auto tangent = detail::locus_solve(jn0, velocity);
      if (tangent.degenerate) throw Error(ErrorCode::DegenerateFace, "rank loss");
      trial.h += N * tangent.dz * (t1 - t);

      for (int it = 0; it <= opts.max_newton_iters; ++it) {
        const double scale = support_scale(trial);
        const Eigen::VectorXd r = goal - face_local_areas(*topo, trial).f;
        if (!r.allFinite()) break;
        if (r.cwiseAbs().maxCoeff() <= opts.tol_area * scale * scale) {
          step_failure = detail::StepFailure::None;
          break;
        }
        if (it == opts.max_newton_iters) break;
        const Eigen::MatrixXd jn = jacobian(*topo, trial, opts.jacobian_mode, opts.fd_step) * N;
        const auto step = detail::locus_solve(jn, r);
        if (step.degenerate) {
          step_failure = detail::StepFailure::Degenerate;
          break;
        }
        trial.h += N * step.dz;
        trial = gauge_fix(fan, trial);
        if (!(trial.h.norm() <= B * h0_norm)) {
          step_failure = detail::StepFailure::Diverge;
          break;
        }
      }
    } catch (const Error&) {
      step_failure = detail::StepFailure::Degenerate;
    }

    if (step_failure == detail::StepFailure::None) {
      try {
        const Herisson H = reconstruct(topo, trial);
        if (!in_class(H)) {
          step_failure = detail::StepFailure::Degenerate;
        } else if (alpha > 0.0) {
          const double bound = perimeter_bound(goal.cwiseAbs().maxCoeff(), alpha) * B;
          for (int j = 0; j < H.face_count(); ++j)
            if (H.perimeter(j) > static_cast<double>(H.faces[j].size()) * bound)
              step_failure = detail::StepFailure::Diverge;
        }
        if (step_failure == detail::StepFailure::None) {
          h = trial;
          t = t1;
          out.trace.push_back(record(t, H, goal - H.oriented_areas.f));
          if (opts.on_accept) opts.on_accept(t, H);
          dt = std::min(2.0 * dt, max_step);
          continue;
        }
      } catch (const Error&) {
        step_failure = detail::StepFailure::Degenerate;
      }
    }

    failure = step_failure;
    dt *= 0.5;
    if (dt < opts.min_step) break;
  }

  out.h_final = h;
  out.t_reached = t;
  if (t >= 1.0) {
    out.status = SolveStatus::Converged;
    out.message = "reached the target";
  } else {
    out.status = detail::status_of(failure);
    out.message = std::string("stopped at t = ") + std::to_string(t);
  }
  return out;
}

}  // namespace herisson
