#pragma once

// Euclidean (Hilbert-model) geometry: points of R^n, closed balls, geodesic
// combinations, and the quadrilateral defect used as a model sanity check.
// Everything here is a pure value; operations never mutate their inputs.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fejer {

/// Absolute slack used by every verification comparison ("< eps + eta").
inline constexpr double kDefaultEta = 1e-9;

struct Tolerance {
  double eta = kDefaultEta;
};

/// A point of R^n. Coordinates are validated to be finite on construction.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double value = 0.0) : coords_(dim, value) {
    check_finite();
  }
  Vector(std::initializer_list<double> xs) : coords_(xs) { check_finite(); }
  explicit Vector(std::vector<double> xs) : coords_(std::move(xs)) {
    check_finite();
  }

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool operator==(const Vector& other) const = default;

 private:
  void check_finite() const {
    for (double c : coords_) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("Vector: non-finite coordinate");
      }
    }
  }

  std::vector<double> coords_;
};

inline void require_same_dim(const Vector& x, const Vector& y,
                             const char* where) {
  if (x.dim() != y.dim()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(x.dim()) + " vs " +
                                std::to_string(y.dim()) + ")");
  }
}

inline Vector operator+(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "operator+");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] + y[i];
  return Vector(std::move(out));
}

inline Vector operator-(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "operator-");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] - y[i];
  return Vector(std::move(out));
}

inline Vector operator*(double c, const Vector& x) {
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = c * x[i];
  return Vector(std::move(out));
}

inline double dot(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vector& x) { return std::sqrt(dot(x, x)); }

/// Metric of the model space: d(x, y) = ||x - y||_2.
inline double distance(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double squared_distance(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

/// The point (1-t)x + ty on the geodesic segment [x, y], t in [0, 1].
inline Vector geodesic_point(const Vector& x, const Vector& y, double t) {
  require_same_dim(x, y, "geodesic_point");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("geodesic_point: t must lie in [0, 1]");
  }
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = (1.0 - t) * x[i] + t * y[i];
  return Vector(std::move(out));
}

/// RHS - LHS of the quadrilateral inequality
///   d(x,y)^2 + d(u,v)^2 <= d(x,v)^2 + d(y,u)^2 + d(x,u)^2 + d(y,v)^2.
/// Nonnegative (up to slack) in the Euclidean model.
inline double quadrilateral_defect(const Vector& x, const Vector& y,
                                   const Vector& u, const Vector& v) {
  require_same_dim(x, y, "quadrilateral_defect");
  require_same_dim(x, u, "quadrilateral_defect");
  require_same_dim(x, v, "quadrilateral_defect");
  const double lhs = squared_distance(x, y) + squared_distance(u, v);
  const double rhs = squared_distance(x, v) + squared_distance(y, u) +
                     squared_distance(x, u) + squared_distance(y, v);
  return rhs - lhs;
}

struct ClosedBall {
  Vector center;
  double radius = 0.0;

  ClosedBall() = default;
  ClosedBall(Vector c, double r) : center(std::move(c)), radius(r) {
    if (!(radius >= 0.0)) {
      throw std::invalid_argument("ClosedBall: radius must be >= 0");
    }
  }

  bool contains(const Vector& x, double eta = 0.0) const {
    return distance(x, center) <= radius + eta;
  }
};

}  // namespace fejer
