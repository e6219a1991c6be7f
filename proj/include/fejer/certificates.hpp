#pragma once

// Expression trees for certificates: moduli of regularity (phi), rate
// functions (alpha), and rates of divergence (theta). Trees are immutable
// values, so certificates can be printed, serialized, and re-evaluated
// exactly. The two tree kinds are mutually recursive: a rate can compose
// with a modulus (alpha(phi(eps))) and a modulus can be built from a rate
// (eps / (2 psi(eps/2))).
//
// Rounding policy (part of the certificate contract):
//   * Modulus evaluation rounds its final value one ulp toward zero, so a
//     certified index is never optimistic.
//   * Rate evaluation rounds up: floor-type nodes nudge the quotient one
//     ulp toward +inf before taking the floor. Ceil-type nodes use plain
//     ceil (a nudge would bump exactly representable quotients past the
//     integer they land on).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fejer/core.hpp"

namespace fejer {

// ---------------------------------------------------------------------------
// Step sequences and rates of divergence
// ---------------------------------------------------------------------------

/// Description of a nonnegative step sequence (gamma_n or lambda_n).
struct StepSequence {
  enum class Kind { constant, list, power_law };

  Kind kind = Kind::constant;
  double value = 1.0;          // constant
  std::vector<double> values;  // list
  double coeff = 1.0;          // power_law: coeff / (k+1)^exponent
  double exponent = 1.0;

  static StepSequence constant_seq(double c) {
    StepSequence s;
    s.kind = Kind::constant;
    s.value = c;
    s.validate();
    return s;
  }
  static StepSequence list_seq(std::vector<double> v) {
    StepSequence s;
    s.kind = Kind::list;
    s.values = std::move(v);
    s.validate();
    return s;
  }
  static StepSequence power_law_seq(double coeff, double exponent) {
    StepSequence s;
    s.kind = Kind::power_law;
    s.coeff = coeff;
    s.exponent = exponent;
    s.validate();
    return s;
  }

  double term(std::int64_t k) const {
    switch (kind) {
      case Kind::constant:
        return value;
      case Kind::list:
        if (k < 0 || static_cast<std::size_t>(k) >= values.size()) {
          throw std::out_of_range("StepSequence: list index out of range");
        }
        return values[static_cast<std::size_t>(k)];
      case Kind::power_law:
        return coeff / std::pow(static_cast<double>(k) + 1.0, exponent);
    }
    throw std::logic_error("StepSequence: bad kind");
  }

  void validate() const {
    auto check = [](double v) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("StepSequence: steps must be nonnegative");
      }
    };
    switch (kind) {
      case Kind::constant:
        check(value);
        break;
      case Kind::list:
        for (double v : values) check(v);
        break;
      case Kind::power_law:
        check(coeff);
        if (!std::isfinite(exponent)) {
          throw std::invalid_argument("StepSequence: bad exponent");
        }
        break;
    }
  }
};

/// theta with sum_{k=0}^{theta(n)} gamma_k >= n. The squared flag transforms
/// each step to gamma_k^2 (the PPA divergence series).
class RateOfDivergence {
 public:
  // Scan horizon for non-constant sequences; reaching it without attaining
  // the target sum reports the series as effectively convergent.
  static constexpr std::int64_t kScanHorizon = 20'000'000;

  RateOfDivergence() = default;
  RateOfDivergence(StepSequence seq, bool squared)
      : seq_(std::move(seq)), squared_(squared) {
    seq_.validate();
  }

  const StepSequence& steps() const { return seq_; }
  bool squared() const { return squared_; }

  double effective_term(std::int64_t k) const {
    const double t = seq_.term(k);
    return squared_ ? t * t : t;
  }

  /// Smallest m with sum_{k=0}^{m} step_k >= n (exact closed form for
  /// constant sequences, partial-sum scan otherwise).
  std::int64_t operator()(std::int64_t n) const {
    if (n <= 0) return 0;
    if (seq_.kind == StepSequence::Kind::constant) {
      const double c = effective_term(0);
      if (c <= 0.0) {
        throw std::runtime_error(
            "RateOfDivergence: zero step sequence cannot reach n > 0");
      }
      const double approx = static_cast<double>(n) / c;
      if (approx > 9e15) {
        throw std::overflow_error("RateOfDivergence: index overflow");
      }
      std::int64_t m = static_cast<std::int64_t>(std::ceil(approx)) - 1;
      if (m < 0) m = 0;
      while ((static_cast<double>(m) + 1.0) * c < static_cast<double>(n)) ++m;
      while (m > 0 && static_cast<double>(m) * c >= static_cast<double>(n)) --m;
      return m;
    }
    const std::int64_t horizon = seq_.kind == StepSequence::Kind::list
                                     ? static_cast<std::int64_t>(seq_.values.size())
                                     : kScanHorizon;
    double sum = 0.0;
    for (std::int64_t k = 0; k < horizon; ++k) {
      sum += effective_term(k);
      if (sum >= static_cast<double>(n)) return k;
    }
    throw std::runtime_error(
        "RateOfDivergence: partial sums never reach " + std::to_string(n) +
        " (series appears to converge or horizon exceeded)");
  }

 private:
  StepSequence seq_ = StepSequence::constant_seq(1.0);
  bool squared_ = false;
};

// ---------------------------------------------------------------------------
// Tree node kinds
// ---------------------------------------------------------------------------

enum class ModulusKind {
  linear,     // c * eps
  power,      // a * eps^p
  scale,      // c * inner(eps)
  min_of,     // min over children
  compose,    // outer(inner(eps))
  constant,   // c  (acts as a top clamp inside a min)
  half_arg,   // inner(eps / 2)
  table,      // monotone samples, linear interpolation, clamped ends
  from_rate,  // eps / (2 psi(eps/2)) for a rate psi
};

enum class RateKind {
  ceil_inv,     // ceil(a / eps^p)
  floor_inv,    // floor(a / eps^p)
  plus_const,   // k + inner(eps)
  compose_div,  // theta(inner(eps))
  table,        // antitone step table
  compose_mod,  // alpha(phi(eps))
  constant,     // k
};

struct ModulusNode;
struct RateNode;

/// A positive nondecreasing map (0, inf) -> (0, inf) as an expression tree.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(std::shared_ptr<const ModulusNode> node)
      : node_(std::move(node)) {}

  bool valid() const { return node_ != nullptr; }
  const ModulusNode& node() const {
    if (!node_) throw std::logic_error("Modulus: empty");
    return *node_;
  }

  /// Conservative evaluation: raw tree value rounded one ulp toward zero.
  double operator()(double eps) const;
  /// Tree value without the final conservative rounding.
  double raw(double eps) const;

 private:
  std::shared_ptr<const ModulusNode> node_;
};

/// A map (0, inf) -> N, antitone in eps, as an expression tree.
class RateFn {
 public:
  RateFn() = default;
  explicit RateFn(std::shared_ptr<const RateNode> node)
      : node_(std::move(node)) {}

  bool valid() const { return node_ != nullptr; }
  const RateNode& node() const {
    if (!node_) throw std::logic_error("RateFn: empty");
    return *node_;
  }

  std::int64_t operator()(double eps) const;

 private:
  std::shared_ptr<const RateNode> node_;
};

struct ModulusNode {
  ModulusKind kind = ModulusKind::linear;
  double a = 1.0;  // linear c / power a / scale c / constant c
  double p = 1.0;  // power exponent
  std::vector<Modulus> children;  // scale, min_of, compose(outer, inner), half_arg
  std::vector<std::pair<double, double>> points;  // table (eps, value)
  std::shared_ptr<const RateNode> rate;           // from_rate
};

struct RateNode {
  RateKind kind = RateKind::constant;
  double a = 0.0;      // ceil_inv / floor_inv numerator
  double p = 1.0;      // ceil_inv / floor_inv exponent
  std::int64_t k = 0;  // plus_const / constant
  std::vector<RateFn> children;           // plus_const, compose_div, compose_mod
  std::optional<RateOfDivergence> theta;  // compose_div
  Modulus modulus;                        // compose_mod
  std::vector<std::pair<double, std::int64_t>> points;  // table (eps, value)
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline void require_positive_eps(double eps, const char* where) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(std::string(where) +
                                ": eps must be positive and finite");
  }
}

inline double pow_fast(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

inline double eval_modulus_raw(const ModulusNode& n, double eps);
inline std::int64_t eval_rate(const RateNode& n, double eps);

inline double eval_modulus_raw(const ModulusNode& n, double eps) {
  switch (n.kind) {
    case ModulusKind::linear:
      return n.a * eps;
    case ModulusKind::power:
      return n.a * pow_fast(eps, n.p);
    case ModulusKind::scale:
      return n.a * eval_modulus_raw(n.children[0].node(), eps);
    case ModulusKind::min_of: {
      double m = std::numeric_limits<double>::infinity();
      for (const Modulus& c : n.children) {
        m = std::min(m, eval_modulus_raw(c.node(), eps));
      }
      return m;
    }
    case ModulusKind::compose:
      return eval_modulus_raw(n.children[0].node(),
                              eval_modulus_raw(n.children[1].node(), eps));
    case ModulusKind::constant:
      return n.a;
    case ModulusKind::half_arg:
      return eval_modulus_raw(n.children[0].node(), eps * 0.5);
    case ModulusKind::table: {
      const auto& pts = n.points;
      if (eps <= pts.front().first) return pts.front().second;
      if (eps >= pts.back().first) return pts.back().second;
      auto it = std::upper_bound(
          pts.begin(), pts.end(), eps,
          [](double e, const auto& pt) { return e < pt.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double t = (eps - lo.first) / (hi.first - lo.first);
      return lo.second + t * (hi.second - lo.second);
    }
    case ModulusKind::from_rate: {
      const std::int64_t psi = eval_rate(*n.rate, eps * 0.5);
      if (psi <= 0) {
        throw std::runtime_error(
            "modulus_from_convergence_rate: rate evaluates to 0");
      }
      return eps / (2.0 * static_cast<double>(psi));
    }
  }
  throw std::logic_error("ModulusNode: bad kind");
}

inline std::int64_t to_index(double q, const char* where) {
  if (!std::isfinite(q) || q > 9e15) {
    throw std::overflow_error(std::string(where) + ": certified index overflow");
  }
  return q <= 0.0 ? 0 : static_cast<std::int64_t>(q);
}

inline std::int64_t eval_rate(const RateNode& n, double eps) {
  switch (n.kind) {
    case RateKind::ceil_inv: {
      const double q = n.a / pow_fast(eps, n.p);
      return to_index(std::ceil(q), "ceil_inv");
    }
    case RateKind::floor_inv: {
      const double q = std::nextafter(
          n.a / pow_fast(eps, n.p), std::numeric_limits<double>::infinity());
      return to_index(std::floor(q), "floor_inv");
    }
    case RateKind::plus_const:
      return n.k + eval_rate(n.children[0].node(), eps);
    case RateKind::compose_div:
      return (*n.theta)(eval_rate(n.children[0].node(), eps));
    case RateKind::table: {
      const auto& pts = n.points;
      if (eps < pts.front().first) return pts.front().second;
      auto it = std::upper_bound(
          pts.begin(), pts.end(), eps,
          [](double e, const auto& pt) { return e < pt.first; });
      return (it - 1)->second;
    }
    case RateKind::compose_mod: {
      const double v = n.modulus(eps);  // conservative modulus value
      return eval_rate(n.children[0].node(), v);
    }
    case RateKind::constant:
      return n.k;
  }
  throw std::logic_error("RateNode: bad kind");
}

}  // namespace detail

inline double Modulus::raw(double eps) const {
  detail::require_positive_eps(eps, "Modulus");
  return detail::eval_modulus_raw(node(), eps);
}

inline double Modulus::operator()(double eps) const {
  const double v = raw(eps);
  return v > 0.0 ? std::nextafter(v, 0.0) : v;
}

inline std::int64_t RateFn::operator()(double eps) const {
  detail::require_positive_eps(eps, "RateFn");
  return detail::eval_rate(node(), eps);
}

}  // namespace fejer
