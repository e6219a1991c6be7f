#pragma once

// Building blocks for the iterations: convex sets with closed-form
// projections and distances, proximal mappings, resolvents and reflected
// resolvents, compositions, relaxed convex combinations, gradient steps,
// and a sampling-based audit of declared operator classes.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fejer/core.hpp"
#include "fejer/random.hpp"

namespace fejer {

enum class OperatorClass {
  nonexpansive,
  firmly_nonexpansive,
  quasi_nonexpansive,
  general,
};

inline const char* to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::nonexpansive: return "nonexpansive";
    case OperatorClass::firmly_nonexpansive: return "firmly_nonexpansive";
    case OperatorClass::quasi_nonexpansive: return "quasi_nonexpansive";
    case OperatorClass::general: return "general";
  }
  return "?";
}

/// A self-map of R^n with a declared (audited, not proven) class.
class Operator {
 public:
  Operator() = default;
  Operator(std::string name, std::size_t dim, OperatorClass declared,
           std::function<Vector(const Vector&)> fn)
      : name_(std::move(name)),
        dim_(dim),
        declared_(declared),
        fn_(std::move(fn)) {}

  Vector operator()(const Vector& x) const {
    if (x.dim() != dim_) {
      throw std::invalid_argument("Operator " + name_ + ": dimension mismatch");
    }
    return fn_(x);
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  OperatorClass declared_class() const { return declared_; }
  bool valid() const { return static_cast<bool>(fn_); }

 private:
  std::string name_;
  std::size_t dim_ = 0;
  OperatorClass declared_ = OperatorClass::general;
  std::function<Vector(const Vector&)> fn_;
};

// ---------------------------------------------------------------------------
// Convex sets with closed-form projections
// ---------------------------------------------------------------------------

class ConvexSet {
 public:
  enum class Kind { halfspace, hyperplane, box, ball, affine_subspace };

  /// {x : normal . x <= offset}.
  static ConvexSet halfspace(Vector normal, double offset) {
    ConvexSet s;
    s.kind_ = Kind::halfspace;
    s.dim_ = normal.dim();
    s.normal_ = std::move(normal);
    s.offset_ = offset;
    s.normal_sq_ = dot(s.normal_, s.normal_);
    if (!(s.normal_sq_ > 0.0)) {
      throw std::invalid_argument("halfspace: zero normal");
    }
    return s;
  }

  /// {x : normal . x = offset}.
  static ConvexSet hyperplane(Vector normal, double offset) {
    ConvexSet s = halfspace(std::move(normal), offset);
    s.kind_ = Kind::hyperplane;
    return s;
  }

  static ConvexSet box(Vector lo, Vector hi) {
    require_same_dim(lo, hi, "box");
    for (std::size_t i = 0; i < lo.dim(); ++i) {
      if (!(lo[i] <= hi[i])) {
        throw std::invalid_argument("box: lo must be <= hi componentwise");
      }
    }
    ConvexSet s;
    s.kind_ = Kind::box;
    s.dim_ = lo.dim();
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
  }

  static ConvexSet l2_ball(Vector center, double radius) {
    if (!(radius >= 0.0)) throw std::invalid_argument("l2_ball: radius < 0");
    ConvexSet s;
    s.kind_ = Kind::ball;
    s.dim_ = center.dim();
    s.center_ = std::move(center);
    s.radius_ = radius;
    return s;
  }

  /// point + span(basis); the basis is orthonormalized on construction.
  static ConvexSet affine_subspace(Vector point, std::vector<Vector> basis) {
    ConvexSet s;
    s.kind_ = Kind::affine_subspace;
    s.dim_ = point.dim();
    s.center_ = std::move(point);
    for (Vector v : basis) {
      require_same_dim(v, s.center_, "affine_subspace");
      // Tolerant Gram-Schmidt: already-orthonormal input passes through
      // unchanged, so serialized bases reconstruct bit-identically.
      for (const Vector& b : s.basis_) {
        const double c = dot(v, b);
        if (std::fabs(c) > 1e-12) v = v - c * b;
      }
      const double nv = norm(v);
      if (nv <= 1e-12) continue;
      if (std::fabs(nv - 1.0) > 1e-12) v = (1.0 / nv) * v;
      s.basis_.push_back(std::move(v));
    }
    return s;
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Vector>& basis() const { return basis_; }

  Vector project(const Vector& x) const {
    if (x.dim() != dim_) {
      throw std::invalid_argument("ConvexSet::project: dimension mismatch");
    }
    switch (kind_) {
      case Kind::halfspace: {
        const double excess = dot(normal_, x) - offset_;
        if (excess <= 0.0) return x;
        return x - (excess / normal_sq_) * normal_;
      }
      case Kind::hyperplane: {
        const double excess = dot(normal_, x) - offset_;
        return x - (excess / normal_sq_) * normal_;
      }
      case Kind::box: {
        std::vector<double> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
          out[i] = std::min(std::max(x[i], lo_[i]), hi_[i]);
        }
        return Vector(std::move(out));
      }
      case Kind::ball: {
        const Vector d = x - center_;
        const double nd = norm(d);
        if (nd <= radius_) return x;
        return center_ + (radius_ / nd) * d;
      }
      case Kind::affine_subspace: {
        Vector out = center_;
        const Vector d = x - center_;
        for (const Vector& b : basis_) out = out + dot(d, b) * b;
        return out;
      }
    }
    throw std::logic_error("ConvexSet: bad kind");
  }

  double distance(const Vector& x) const {
    switch (kind_) {
      case Kind::halfspace:
        return std::max(0.0, dot(normal_, x) - offset_) /
               std::sqrt(normal_sq_);
      case Kind::hyperplane:
        return std::fabs(dot(normal_, x) - offset_) / std::sqrt(normal_sq_);
      case Kind::ball:
        return std::max(0.0, norm(x - center_) - radius_);
      default:
        return fejer::distance(x, project(x));
    }
  }

  bool contains(const Vector& x, double eta = kDefaultEta) const {
    return distance(x) <= eta;
  }

 private:
  Kind kind_ = Kind::halfspace;
  std::size_t dim_ = 0;
  Vector normal_;
  double offset_ = 0.0;
  double normal_sq_ = 1.0;
  Vector lo_, hi_;
  Vector center_;
  double radius_ = 0.0;
  std::vector<Vector> basis_;
};

inline Vector project(const ConvexSet& set, const Vector& x) {
  return set.project(x);
}

inline Operator projection_operator(const ConvexSet& set,
                                    const std::string& name = "P_C") {
  return Operator(name, set.dim(), OperatorClass::firmly_nonexpansive,
                  [set](const Vector& x) { return set.project(x); });
}

// ---------------------------------------------------------------------------
// Proximal mappings
// ---------------------------------------------------------------------------

/// The f whose proximal mapping / resolvent J_{gamma df} the toolkit ships
/// in closed form: the Euclidean norm, the shifted half-squared norm, or the
/// indicator of a convex set.
struct ProxFn {
  enum class Kind { norm, quadratic, indicator };

  Kind kind = Kind::norm;
  Vector anchor;                 // quadratic: 1/2 ||x - anchor||^2
  std::optional<ConvexSet> set;  // indicator

  static ProxFn norm_fn() { return ProxFn{}; }
  static ProxFn quadratic(Vector a) {
    ProxFn f;
    f.kind = Kind::quadratic;
    f.anchor = std::move(a);
    return f;
  }
  static ProxFn indicator(ConvexSet s) {
    ProxFn f;
    f.kind = Kind::indicator;
    f.set = std::move(s);
    return f;
  }

  double eval(const Vector& x) const {
    switch (kind) {
      case Kind::norm:
        return norm(x);
      case Kind::quadratic:
        return 0.5 * squared_distance(x, anchor);
      case Kind::indicator:
        return set->contains(x) ? 0.0
                                : std::numeric_limits<double>::infinity();
    }
    throw std::logic_error("ProxFn: bad kind");
  }
};

/// Closed-form Prox_{gamma f}(x) = J_{gamma df}(x).
inline Vector prox(const ProxFn& f, double gamma, const Vector& x) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be > 0");
  switch (f.kind) {
    case ProxFn::Kind::norm: {
      const double nx = norm(x);
      if (nx <= gamma) return Vector(x.dim(), 0.0);
      return ((nx - gamma) / nx) * x;
    }
    case ProxFn::Kind::quadratic: {
      // argmin_y 1/2||y-a||^2 + 1/(2 gamma) ||x-y||^2 = (x + gamma a)/(1+gamma)
      return (1.0 / (1.0 + gamma)) * (x + gamma * f.anchor);
    }
    case ProxFn::Kind::indicator:
      return f.set->project(x);
  }
  throw std::logic_error("prox: bad kind");
}

inline Operator prox_operator(const ProxFn& f, double gamma,
                              std::size_t dim,
                              const std::string& name = "J_gamma") {
  return Operator(name, dim, OperatorClass::firmly_nonexpansive,
                  [f, gamma](const Vector& x) { return prox(f, gamma, x); });
}

// ---------------------------------------------------------------------------
// Operator algebra
// ---------------------------------------------------------------------------

/// Reflected resolvent R = 2J - Id; J must be declared firmly nonexpansive.
inline Operator reflected_resolvent(const Operator& J) {
  if (J.declared_class() != OperatorClass::firmly_nonexpansive) {
    throw std::invalid_argument(
        "reflected_resolvent: J must be declared firmly nonexpansive");
  }
  return Operator("R[" + J.name() + "]", J.dim(), OperatorClass::nonexpansive,
                  [J](const Vector& x) { return 2.0 * J(x) - x; });
}

/// Right-to-left composition: compose({A, B})(x) = A(B(x)).
inline Operator compose(std::vector<Operator> ops) {
  if (ops.empty()) throw std::invalid_argument("compose: empty operator list");
  const std::size_t dim = ops.front().dim();
  std::string name;
  bool all_ne = true;
  for (const Operator& op : ops) {
    if (op.dim() != dim) {
      throw std::invalid_argument("compose: dimension mismatch");
    }
    if (op.declared_class() != OperatorClass::nonexpansive &&
        op.declared_class() != OperatorClass::firmly_nonexpansive) {
      all_ne = false;
    }
    name += (name.empty() ? "" : " o ") + op.name();
  }
  const OperatorClass cls =
      all_ne ? OperatorClass::nonexpansive : OperatorClass::general;
  return Operator(name, dim, cls, [ops](const Vector& x) {
    Vector y = x;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) y = (*it)(y);
    return y;
  });
}

/// Relaxed convex combination: x -> sum_i a_i (x + lambda_i (T_i x - x)),
/// with sum a_i = 1, 0 < lambda_i <= 2 and lambda_1 < 2.
inline Operator convex_combination(std::vector<Operator> ops,
                                   std::vector<double> weights,
                                   std::vector<double> relaxations,
                                   double eta = kDefaultEta) {
  if (ops.empty() || ops.size() != weights.size() ||
      ops.size() != relaxations.size()) {
    throw std::invalid_argument("convex_combination: size mismatch");
  }
  const std::size_t dim = ops.front().dim();
  double wsum = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].dim() != dim) {
      throw std::invalid_argument("convex_combination: dimension mismatch");
    }
    if (!(weights[i] > 0.0)) {
      throw std::invalid_argument("convex_combination: weights must be > 0");
    }
    if (!(relaxations[i] > 0.0 && relaxations[i] <= 2.0)) {
      throw std::invalid_argument(
          "convex_combination: relaxations must lie in (0, 2]");
    }
    wsum += weights[i];
  }
  if (std::fabs(wsum - 1.0) > eta) {
    throw std::invalid_argument("convex_combination: weights must sum to 1");
  }
  if (!(relaxations.front() < 2.0)) {
    throw std::invalid_argument("convex_combination: lambda_1 must be < 2");
  }
  return Operator(
      "crombez", dim, OperatorClass::nonexpansive,
      [ops, weights, relaxations, dim](const Vector& x) {
        Vector acc(dim, 0.0);
        for (std::size_t i = 0; i < ops.size(); ++i) {
          const Vector ti = x + relaxations[i] * (ops[i](x) - x);
          acc = acc + weights[i] * ti;
        }
        return acc;
      });
}

/// T = Id - (1/L) grad f; firmly nonexpansive when grad f is L-Lipschitz
/// (Baillon-Haddad).
inline Operator gradient_step(std::function<Vector(const Vector&)> gradient,
                              double L, std::size_t dim) {
  if (!(L > 0.0)) throw std::invalid_argument("gradient_step: L must be > 0");
  return Operator("Id - (1/L) grad f", dim, OperatorClass::firmly_nonexpansive,
                  [gradient, L](const Vector& x) {
                    return x - (1.0 / L) * gradient(x);
                  });
}

// ---------------------------------------------------------------------------
// Class audit by sampling
// ---------------------------------------------------------------------------

struct ClassificationReport {
  // max d(Tx,Ty) - d(x,y) over sampled pairs
  double worst_nonexpansive = -std::numeric_limits<double>::infinity();
  // max d(Tx,Ty) - d((1-l)x+lTx, (1-l)y+lTy) over pairs and the lambda grid
  double worst_firmly = -std::numeric_limits<double>::infinity();
  // max d(Tx,z) - d(x,z) over samples and supplied fixed points
  std::optional<double> worst_quasi;
  Vector witness_x, witness_y;
  double witness_lambda = 0.0;

  bool nonexpansive_pass(double eta = kDefaultEta) const {
    return worst_nonexpansive <= eta;
  }
  bool firmly_pass(double eta = kDefaultEta) const {
    return worst_firmly <= eta;
  }
  bool quasi_pass(double eta = kDefaultEta) const {
    return !worst_quasi || *worst_quasi <= eta;
  }
  bool passes(OperatorClass declared, double eta = kDefaultEta) const {
    switch (declared) {
      case OperatorClass::nonexpansive: return nonexpansive_pass(eta);
      case OperatorClass::firmly_nonexpansive:
        return nonexpansive_pass(eta) && firmly_pass(eta);
      case OperatorClass::quasi_nonexpansive: return quasi_pass(eta);
      case OperatorClass::general: return true;
    }
    return false;
  }
};

/// Samples pairs from the ball and a lambda grid, reporting the worst
/// violation of each operator-class definition.
inline ClassificationReport classify_by_sampling(
    const Operator& T, const ClosedBall& ball, int samples, std::uint64_t seed,
    const std::vector<Vector>& fixed_points = {},
    const std::function<bool(const Vector&)>& domain = nullptr) {
  if (samples <= 0) {
    throw std::invalid_argument("classify_by_sampling: samples must be > 0");
  }
  static constexpr double kLambdaGrid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  SplitMix64 rng(seed);
  ClassificationReport rep;
  if (!fixed_points.empty()) rep.worst_quasi = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < samples; ++i) {
    const Vector x = domain ? sample_in_ball_domain(ball, domain, rng)
                            : sample_in_ball(ball, rng);
    const Vector y = domain ? sample_in_ball_domain(ball, domain, rng)
                            : sample_in_ball(ball, rng);
    const Vector tx = T(x);
    const Vector ty = T(y);
    const double dtt = distance(tx, ty);

    const double viol_ne = dtt - distance(x, y);
    if (viol_ne > rep.worst_nonexpansive) {
      rep.worst_nonexpansive = viol_ne;
      rep.witness_x = x;
      rep.witness_y = y;
    }
    for (double l : kLambdaGrid) {
      const double interp = distance(geodesic_point(x, tx, l),
                                     geodesic_point(y, ty, l));
      const double viol = dtt - interp;
      if (viol > rep.worst_firmly) {
        rep.worst_firmly = viol;
        rep.witness_x = x;
        rep.witness_y = y;
        rep.witness_lambda = l;
      }
    }
    if (rep.worst_quasi) {
      for (const Vector& z : fixed_points) {
        const double viol = distance(tx, z) - distance(x, z);
        if (viol > *rep.worst_quasi) *rep.worst_quasi = viol;
      }
    }
  }
  return rep;
}

}  // namespace fejer
