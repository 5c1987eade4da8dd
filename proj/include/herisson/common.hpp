#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace herisson {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

enum class ErrorCode {
  MalformedFan,
  SingularVertex,
  InconsistentVertex,
  DegenerateFace,
  DegenerateEquipment,
  FanMismatch,
  NotComparable,
  NotSameClass,
  ProbeFailed,
  DomainError,
  PreconditionFailed,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedFan: return "MalformedFan";
    case ErrorCode::SingularVertex: return "SingularVertex";
    case ErrorCode::InconsistentVertex: return "InconsistentVertex";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::DegenerateEquipment: return "DegenerateEquipment";
    case ErrorCode::FanMismatch: return "FanMismatch";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::NotSameClass: return "NotSameClass";
    case ErrorCode::ProbeFailed: return "ProbeFailed";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace herisson
