#pragma once

// Rate functions and rate combinators: divergence rates theta, the general
// Cauchy/convergence/distance rates derived from an approximate-zero bound
// alpha and a modulus phi, the finite-termination index, and the closed-form
// rates for the shipped algorithms (alternating projections, gradient
// descent, Mann, proximal point).

#include <cstdint>
#include <utility>
#include <vector>

#include "fejer/certificates.hpp"
#include "fejer/moduli.hpp"

namespace fejer {

// ---------------------------------------------------------------------------
// Node factories
// ---------------------------------------------------------------------------

namespace detail {
inline RateFn make_rate(RateNode node) {
  return RateFn(std::make_shared<const RateNode>(std::move(node)));
}
}  // namespace detail

inline RateFn const_rate(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("const_rate: k must be >= 0");
  RateNode n;
  n.kind = RateKind::constant;
  n.k = k;
  return detail::make_rate(std::move(n));
}

/// ceil(a / eps^p).
inline RateFn ceil_inv_rate(double a, double p) {
  if (!(a >= 0.0)) throw std::invalid_argument("ceil_inv_rate: a must be >= 0");
  if (!(p > 0.0)) throw std::invalid_argument("ceil_inv_rate: p must be > 0");
  RateNode n;
  n.kind = RateKind::ceil_inv;
  n.a = a;
  n.p = p;
  return detail::make_rate(std::move(n));
}

/// floor(a / eps^p).
inline RateFn floor_inv_rate(double a, double p) {
  if (!(a >= 0.0)) throw std::invalid_argument("floor_inv_rate: a must be >= 0");
  if (!(p > 0.0)) throw std::invalid_argument("floor_inv_rate: p must be > 0");
  RateNode n;
  n.kind = RateKind::floor_inv;
  n.a = a;
  n.p = p;
  return detail::make_rate(std::move(n));
}

inline RateFn plus_const_rate(std::int64_t k, const RateFn& inner) {
  if (k < 0) throw std::invalid_argument("plus_const_rate: k must be >= 0");
  RateNode n;
  n.kind = RateKind::plus_const;
  n.k = k;
  n.children = {inner};
  return detail::make_rate(std::move(n));
}

/// theta(inner(eps)).
inline RateFn compose_divergence_rate(RateOfDivergence theta,
                                      const RateFn& inner) {
  RateNode n;
  n.kind = RateKind::compose_div;
  n.theta = std::move(theta);
  n.children = {inner};
  return detail::make_rate(std::move(n));
}

/// alpha(phi(eps)).
inline RateFn compose_with_modulus(const RateFn& alpha, const Modulus& phi) {
  RateNode n;
  n.kind = RateKind::compose_mod;
  n.children = {alpha};
  n.modulus = phi;
  return detail::make_rate(std::move(n));
}

/// Antitone step table; the value at the largest tabulated eps <= query.
inline RateFn table_rate(std::vector<std::pair<double, std::int64_t>> points) {
  if (points.empty()) throw std::invalid_argument("table_rate: empty table");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || points[i].second < 0) {
      throw std::invalid_argument("table_rate: bad entry");
    }
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      throw std::invalid_argument("table_rate: eps column must increase");
    }
    if (i > 0 && points[i].second > points[i - 1].second) {
      throw std::invalid_argument("table_rate: values must be antitone");
    }
  }
  RateNode n;
  n.kind = RateKind::table;
  n.points = std::move(points);
  return detail::make_rate(std::move(n));
}

// ---------------------------------------------------------------------------
// Rates of divergence
// ---------------------------------------------------------------------------

/// theta for sum gamma_k (or sum gamma_k^2 when squared is set).
inline RateOfDivergence theta_from_sequence(const StepSequence& seq,
                                            bool squared) {
  return RateOfDivergence(seq, squared);
}

/// lambda_n(1 - lambda_n) term sequence for the Mann divergence series.
inline StepSequence mann_weight_sequence(const StepSequence& lambda) {
  switch (lambda.kind) {
    case StepSequence::Kind::constant: {
      const double l = lambda.value;
      if (!(l >= 0.0 && l <= 1.0)) {
        throw std::invalid_argument("mann_weight_sequence: lambda outside [0,1]");
      }
      return StepSequence::constant_seq(l * (1.0 - l));
    }
    case StepSequence::Kind::list: {
      std::vector<double> w;
      w.reserve(lambda.values.size());
      for (double l : lambda.values) {
        if (!(l >= 0.0 && l <= 1.0)) {
          throw std::invalid_argument(
              "mann_weight_sequence: lambda outside [0,1]");
        }
        w.push_back(l * (1.0 - l));
      }
      return StepSequence::list_seq(std::move(w));
    }
    case StepSequence::Kind::power_law:
      throw std::invalid_argument(
          "mann_weight_sequence: power-law schedules not supported");
  }
  throw std::logic_error("mann_weight_sequence: bad kind");
}

// ---------------------------------------------------------------------------
// Rate combinators for Fejér-monotone sequences
// ---------------------------------------------------------------------------

/// Rate of convergence to a zero: eps -> alpha(phi(eps/2)).
inline RateFn rate_of_convergence(const RateFn& alpha, const Modulus& phi) {
  return compose_with_modulus(alpha, half_arg_modulus(phi));
}

/// Distance rate: eps -> alpha(phi(eps)); dist(x_n, zer F) < eps beyond it.
inline RateFn dist_rate(const RateFn& alpha, const Modulus& phi) {
  return compose_with_modulus(alpha, phi);
}

/// Cauchy modulus: eps -> alpha(phi(eps/2)).
inline RateFn cauchy_modulus(const RateFn& alpha, const Modulus& phi) {
  return compose_with_modulus(alpha, half_arg_modulus(phi));
}

/// Finite-termination index alpha(min{eps*, phi(eps*)}).
inline std::int64_t finite_termination_index(const RateFn& alpha,
                                             const Modulus& phi,
                                             double eps_star) {
  if (!(eps_star > 0.0)) {
    throw std::invalid_argument("finite_termination_index: eps* must be > 0");
  }
  const double v = std::min(eps_star, phi(eps_star));
  return alpha(v);
}

/// Common-fixed-point composition: eps -> alpha(phi(rho(eps/2))).
inline RateFn composed_rate_common_fixed(const RateFn& alpha,
                                         const Modulus& phi,
                                         const Modulus& rho) {
  return compose_with_modulus(alpha,
                              compose_modulus(phi, half_arg_modulus(rho)));
}

// ---------------------------------------------------------------------------
// Closed-form rates for the shipped algorithms
// ---------------------------------------------------------------------------

/// Alternating projections between sets at distance rho, start bound b:
///   alpha(eps) = floor((rho^2 + b^2) / eps^2) + 1.
inline RateFn rate_alternating_projections(double rho_dist, double b) {
  if (!(b > 0.0)) {
    throw std::invalid_argument("rate_alternating_projections: b must be > 0");
  }
  if (!(rho_dist >= 0.0)) {
    throw std::invalid_argument("rate_alternating_projections: rho must be >= 0");
  }
  return plus_const_rate(1, floor_inv_rate(rho_dist * rho_dist + b * b, 2.0));
}

/// Gradient descent with step 1/L: alpha(eps) = floor(32 (b+1)^2 / eps^2).
inline RateFn rate_gradient_descent(double b) {
  if (!(b > 0.0)) {
    throw std::invalid_argument("rate_gradient_descent: b must be > 0");
  }
  return floor_inv_rate(32.0 * (b + 1.0) * (b + 1.0), 2.0);
}

/// Mann iteration of a nonexpansive map:
///   alpha(eps) = theta(ceil(4 (b+1)^2 / eps^2)),
/// theta a divergence rate for sum lambda_n (1 - lambda_n).
inline RateFn rate_mann_cat0(const RateOfDivergence& theta, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("rate_mann_cat0: b must be > 0");
  return compose_divergence_rate(
      theta, ceil_inv_rate(4.0 * (b + 1.0) * (b + 1.0), 2.0));
}

/// Proximal point algorithm: alpha(eps) = theta(ceil(2 b^2 / eps^2)) + 1,
/// theta a divergence rate for sum gamma_n^2.
inline RateFn rate_ppa(const RateOfDivergence& theta, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("rate_ppa: b must be > 0");
  return plus_const_rate(
      1, compose_divergence_rate(theta, ceil_inv_rate(2.0 * b * b, 2.0)));
}

}  // namespace fejer
