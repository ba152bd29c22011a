#ifndef VEXLAB_CORE_HPP
#define VEXLAB_CORE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace vexlab {

/// Meshed computations live in N <= 2; the unused component stays 0 in 1D.
inline constexpr int kMaxMeshDim = 2;

using Point = std::array<double, kMaxMeshDim>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::hypot(a[0], a[1]); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

enum class ErrorCode {
  NonElliptic,
  ExponentTooLarge,
  InvalidDomain,
  MeshFailure,
  NotStarShaped,
  DegenerateCell,
  NonFiniteIntegrand,
  BracketFailure,
  CollapseToZero,
  NoScalingRoot,
  UnsupportedRegime,
  InsufficientRuns,
  InvalidArgument,
  ConfigError,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonElliptic: return "NonElliptic";
    case ErrorCode::ExponentTooLarge: return "ExponentTooLarge";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::MeshFailure: return "MeshFailure";
    case ErrorCode::NotStarShaped: return "NotStarShaped";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::CollapseToZero: return "CollapseToZero";
    case ErrorCode::NoScalingRoot: return "NoScalingRoot";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::InsufficientRuns: return "InsufficientRuns";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vexlab

#endif  // VEXLAB_CORE_HPP
