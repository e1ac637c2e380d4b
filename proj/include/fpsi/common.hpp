#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpsi {

/// Plain 2D point / vector.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr double operator[](int i) const { return i == 0 ? x : y; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Row-major 2x2 tensor, entry (i, j) = d v_i / d x_j for gradients.
using Mat2 = std::array<std::array<double, 2>, 2>;

enum class ErrorKind {
  ZeroCells,
  InvalidRect,
  NonMatching,
  NotOnLine,
  UnsupportedDegree,
  UnsupportedOrder,
  SpaceMismatch,
  OrientationError,
  NonPositiveParam,
  SingularBlock,
  DimensionMismatch,
  Singular,
  NotSPD,
  MissingInitialData,
  MissingHistory,
  HistoryMismatch,
  UnknownCase,
  MissingKey,
  BadValue,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fpsi
