#pragma once

// Calculus of moduli of regularity. Constructors for every explicit modulus
// shipped by the toolkit, the three conversion formulas between moduli for a
// convex function, its resolvent and its subdifferential, composition with
// metric regularity of set families, and a grid estimator that fits an
// empirical modulus to sampled residual/distance data.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fejer/certificates.hpp"
#include "fejer/core.hpp"
#include "fejer/random.hpp"

namespace fejer {

// ---------------------------------------------------------------------------
// Node factories
// ---------------------------------------------------------------------------

namespace detail {
inline Modulus make_modulus(ModulusNode node) {
  return Modulus(std::make_shared<const ModulusNode>(std::move(node)));
}
}  // namespace detail

inline Modulus linear_modulus(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("linear_modulus: c must be > 0");
  ModulusNode n;
  n.kind = ModulusKind::linear;
  n.a = c;
  return detail::make_modulus(std::move(n));
}

inline Modulus power_modulus(double a, double p) {
  if (!(a > 0.0)) throw std::invalid_argument("power_modulus: a must be > 0");
  if (!(p > 0.0)) throw std::invalid_argument("power_modulus: p must be > 0");
  ModulusNode n;
  n.kind = ModulusKind::power;
  n.a = a;
  n.p = p;
  return detail::make_modulus(std::move(n));
}

inline Modulus scale_modulus(double c, const Modulus& inner) {
  if (!(c > 0.0)) throw std::invalid_argument("scale_modulus: c must be > 0");
  ModulusNode n;
  n.kind = ModulusKind::scale;
  n.a = c;
  n.children = {inner};
  return detail::make_modulus(std::move(n));
}

inline Modulus min_modulus(std::vector<Modulus> children) {
  if (children.empty()) {
    throw std::invalid_argument("min_modulus: needs at least one child");
  }
  ModulusNode n;
  n.kind = ModulusKind::min_of;
  n.children = std::move(children);
  return detail::make_modulus(std::move(n));
}

inline Modulus compose_modulus(const Modulus& outer, const Modulus& inner) {
  ModulusNode n;
  n.kind = ModulusKind::compose;
  n.children = {outer, inner};
  return detail::make_modulus(std::move(n));
}

inline Modulus const_modulus(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("const_modulus: c must be > 0");
  ModulusNode n;
  n.kind = ModulusKind::constant;
  n.a = c;
  return detail::make_modulus(std::move(n));
}

inline Modulus half_arg_modulus(const Modulus& inner) {
  ModulusNode n;
  n.kind = ModulusKind::half_arg;
  n.children = {inner};
  return detail::make_modulus(std::move(n));
}

/// min{inner(eps), cap}.
inline Modulus clamp_top_modulus(const Modulus& inner, double cap) {
  return min_modulus({inner, const_modulus(cap)});
}

inline Modulus table_modulus(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("table_modulus: empty table");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) {
      throw std::invalid_argument("table_modulus: entries must be positive");
    }
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      throw std::invalid_argument("table_modulus: eps column must increase");
    }
    if (i > 0 && points[i].second < points[i - 1].second) {
      throw std::invalid_argument("table_modulus: values must be nondecreasing");
    }
  }
  ModulusNode n;
  n.kind = ModulusKind::table;
  n.points = std::move(points);
  return detail::make_modulus(std::move(n));
}

/// eps / (2 psi(eps/2)) from a common rate of convergence psi.
inline Modulus modulus_from_convergence_rate(const RateFn& psi) {
  if (!psi.valid()) {
    throw std::invalid_argument("modulus_from_convergence_rate: empty rate");
  }
  ModulusNode n;
  n.kind = ModulusKind::from_rate;
  n.rate = std::make_shared<const RateNode>(psi.node());
  return detail::make_modulus(std::move(n));
}

// ---------------------------------------------------------------------------
// Probe-grid validation
// ---------------------------------------------------------------------------

/// Logarithmic probe grid over [1e-6, 1e3], 4 points per decade.
inline std::vector<double> modulus_probe_grid() {
  std::vector<double> grid;
  for (int e = -6; e < 3; ++e) {
    const double base = std::pow(10.0, e);
    for (double m : {1.0, 1.778279410038923, 3.1622776601683795,
                     5.623413251903491}) {
      grid.push_back(m * base);
    }
  }
  grid.push_back(1e3);
  return grid;
}

struct ModulusShape {
  bool positive = true;
  bool nondecreasing = true;
  double min_value = std::numeric_limits<double>::infinity();
  double worst_decrease = 0.0;  // max of value(e_i) - value(e_{i+1})
};

inline ModulusShape check_modulus_shape(
    const Modulus& m, const std::vector<double>& grid = modulus_probe_grid(),
    double eta = kDefaultEta) {
  ModulusShape shape;
  double prev = -std::numeric_limits<double>::infinity();
  for (double eps : grid) {
    const double v = m(eps);
    shape.min_value = std::min(shape.min_value, v);
    if (!(v > 0.0)) shape.positive = false;
    if (v < prev - eta) {
      shape.nondecreasing = false;
      shape.worst_decrease = std::max(shape.worst_decrease, prev - v);
    }
    prev = std::max(prev, v);
  }
  return shape;
}

/// Strict-increase check used by the weak-sharp constructors; ties within
/// eta are accepted.
inline void require_growth_function(const Modulus& psi, const char* where) {
  const auto grid = modulus_probe_grid();
  double prev = 0.0;
  for (double eps : grid) {
    const double v = psi(eps);
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string(where) +
                                  ": psi must be positive on the probe grid");
    }
    if (v < prev - kDefaultEta) {
      throw std::invalid_argument(std::string(where) +
                                  ": psi must be nondecreasing");
    }
    prev = std::max(prev, v);
  }
}

// ---------------------------------------------------------------------------
// Explicit moduli
// ---------------------------------------------------------------------------

/// Contraction with constant k: phi(eps) = (1-k) eps.
inline Modulus modulus_contraction(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw std::invalid_argument("modulus_contraction: k must lie in [0, 1)");
  }
  return linear_modulus(1.0 - k);
}

/// Orbital contraction: same formula, weaker hypothesis class.
inline Modulus modulus_orbital_contraction(double k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw std::invalid_argument(
        "modulus_orbital_contraction: k must lie in [0, 1)");
  }
  return linear_modulus(1.0 - k);
}

/// Retraction onto its fixed point set: phi(eps) = eps.
inline Modulus modulus_retraction() { return linear_modulus(1.0); }

/// Hoelder-type modulus phi(eps) = 2 (eps/mu)^gamma.
inline Modulus modulus_holder(double mu, double gamma) {
  if (!(mu > 0.0)) throw std::invalid_argument("modulus_holder: mu must be > 0");
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("modulus_holder: gamma must be >= 1");
  }
  return power_modulus(2.0 / std::pow(mu, gamma), gamma);
}

/// Weak sharp minima growth psi lifted to a modulus (identity lift).
inline Modulus modulus_weak_sharp(const Modulus& psi) {
  require_growth_function(psi, "modulus_weak_sharp");
  return psi;
}

/// Metric subregularity with constant k: phi(eps) = eps / k.
inline Modulus modulus_subregularity(double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("modulus_subregularity: k must be > 0");
  }
  return linear_modulus(1.0 / k);
}

/// psi-strong accretivity: phi = psi; with gamma present, gamma*psi is the
/// fixed-point form for Id - gamma A.
inline Modulus modulus_strongly_accretive(const Modulus& psi,
                                          std::optional<double> gamma = {}) {
  require_growth_function(psi, "modulus_strongly_accretive");
  if (!gamma) return psi;
  if (!(*gamma > 0.0)) {
    throw std::invalid_argument("modulus_strongly_accretive: gamma must be > 0");
  }
  return scale_modulus(*gamma, psi);
}

// ---------------------------------------------------------------------------
// Conversions between f, its resolvent and its subdifferential
// ---------------------------------------------------------------------------

/// Anchor data for a modulus: the reference zero z, the ball radius r, and
/// (when resolvents are involved) the resolvent order gamma.
struct ModulusContext {
  Vector anchor;
  double radius = 1.0;
  std::optional<double> gamma;

  ModulusContext() = default;
  ModulusContext(Vector z, double r, std::optional<double> g = {})
      : anchor(std::move(z)), radius(r), gamma(g) {
    if (!(radius > 0.0)) {
      throw std::invalid_argument("ModulusContext: radius must be > 0");
    }
    if (gamma && !(*gamma > 0.0)) {
      throw std::invalid_argument("ModulusContext: gamma must be > 0");
    }
  }
};

/// f-modulus to resolvent-modulus:
///   phi*(eps) = min{ rho(phi(eps)/2), gamma phi(eps) / (2r), 1 }.
/// rho is a modulus of uniform continuity for f on the enlarged ball.
inline Modulus convert_f_to_resolvent(const Modulus& phi, const Modulus& rho,
                                      const ModulusContext& ctx) {
  if (!ctx.gamma) {
    throw std::invalid_argument("convert_f_to_resolvent: context needs gamma");
  }
  const double g = *ctx.gamma;
  const double r = ctx.radius;
  return min_modulus({compose_modulus(rho, scale_modulus(0.5, phi)),
                      scale_modulus(g / (2.0 * r), phi), const_modulus(1.0)});
}

/// Resolvent-modulus to f-modulus: phi*(eps) = phi(eps)^2 / (2 gamma).
inline Modulus convert_resolvent_to_f(const Modulus& phi, double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("convert_resolvent_to_f: gamma must be > 0");
  }
  return compose_modulus(power_modulus(1.0 / (2.0 * gamma), 2.0), phi);
}

/// Resolvent-modulus to subdifferential-modulus on the smaller ball r' < r:
///   phi*(eps) = (1/gamma) min{ phi(eps/2), eps/2, r - r' }.
inline Modulus convert_resolvent_to_subdiff(const Modulus& phi, double gamma,
                                            double r, double r_prime) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument(
        "convert_resolvent_to_subdiff: gamma must be > 0");
  }
  if (!(r_prime < r)) {
    throw std::invalid_argument("convert_resolvent_to_subdiff: requires r' < r");
  }
  return scale_modulus(
      1.0 / gamma, min_modulus({half_arg_modulus(phi), linear_modulus(0.5),
                                const_modulus(r - r_prime)}));
}

/// Subdifferential-modulus to resolvent-modulus (single-valued case):
///   phi*(eps) = min{ rho(gamma phi(eps)), 1 }.
inline Modulus convert_subdiff_to_resolvent(const Modulus& phi,
                                            const Modulus& rho, double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument(
        "convert_subdiff_to_resolvent: gamma must be > 0");
  }
  return min_modulus(
      {compose_modulus(rho, scale_modulus(gamma, phi)), const_modulus(1.0)});
}

// ---------------------------------------------------------------------------
// Metric regularity of set families
// ---------------------------------------------------------------------------

/// Exact binomial coefficient with overflow detection.
inline std::uint64_t binomial_exact(int n, int k) {
  if (n < 0) throw std::invalid_argument("binomial_exact: n must be >= 0");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw std::overflow_error("binomial_exact: overflow, n too large");
    }
  }
  return static_cast<std::uint64_t>(r);
}

/// gamma = min{ ((2d-1)^n + 1)/2, B(n-1) d^n } with B(n) = C(n, floor(n/2)).
inline double semialgebraic_gamma(int n, int d) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("semialgebraic_gamma: need n, d >= 1");
  }
  auto pow_checked = [](std::uint64_t base, int e) -> unsigned __int128 {
    unsigned __int128 r = 1;
    for (int i = 0; i < e; ++i) {
      r *= base;
      if (r > (static_cast<unsigned __int128>(1) << 100)) {
        throw std::overflow_error("semialgebraic_gamma: overflow, n too large");
      }
    }
    return r;
  };
  const unsigned __int128 g1 =
      (pow_checked(static_cast<std::uint64_t>(2 * d - 1), n) + 1) / 2;
  const unsigned __int128 g2 =
      static_cast<unsigned __int128>(binomial_exact(n - 1, (n - 1) / 2)) *
      pow_checked(static_cast<std::uint64_t>(d), n);
  const unsigned __int128 g = g1 < g2 ? g1 : g2;
  if (g > (static_cast<unsigned __int128>(1) << 53)) {
    throw std::overflow_error(
        "semialgebraic_gamma: exponent exceeds exact double range");
  }
  return static_cast<double>(static_cast<std::uint64_t>(g));
}

/// Modulus of metric regularity for m basic convex semi-algebraic sets in
/// R^n described by polynomials of degree <= d: rho(eps) = (eps/c)^gamma / m.
inline Modulus modulus_metric_regularity_semialgebraic(int n, int d, int m,
                                                       double c) {
  if (m < 1) {
    throw std::invalid_argument(
        "modulus_metric_regularity_semialgebraic: need m >= 1");
  }
  if (!(c > 0.0)) {
    throw std::invalid_argument(
        "modulus_metric_regularity_semialgebraic: c must be > 0");
  }
  const double gamma = semialgebraic_gamma(n, d);
  const double coeff =
      1.0 / (std::pow(c, gamma) * static_cast<double>(m));
  return power_modulus(coeff, gamma);
}

/// phi o rho: modulus for the common-fixed-point residual from a common
/// modulus phi and a metric-regularity modulus rho.
inline Modulus compose_with_metric_regularity(const Modulus& phi,
                                              const Modulus& rho) {
  return compose_modulus(phi, rho);
}

/// Bounded regularity for a best-approximation pair: phi(eps) =
/// rho_dist * delta(eps) / (b + rho_dist), with delta a bounded-regularity
/// witness (typically an estimated table).
inline Modulus modulus_bounded_regularity_pair(double rho_dist,
                                               const Modulus& delta, double b) {
  if (!(rho_dist > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument(
        "modulus_bounded_regularity_pair: rho and b must be > 0");
  }
  return scale_modulus(rho_dist / (b + rho_dist), delta);
}

/// PPA weak-sharp-minima modulus for the subdifferential:
///   phi(eps) = min{ rho(psi_C(eps/2)/2), psi_C(eps/2)/(2(b+1)), eps/2, 1 }.
inline Modulus modulus_ppa_weak_sharp(const Modulus& psi_C, const Modulus& rho,
                                      double b) {
  if (!(b >= 0.0)) {
    throw std::invalid_argument("modulus_ppa_weak_sharp: b must be >= 0");
  }
  const Modulus half_psi = half_arg_modulus(psi_C);
  return min_modulus({compose_modulus(rho, scale_modulus(0.5, half_psi)),
                      scale_modulus(1.0 / (2.0 * (b + 1.0)), half_psi),
                      linear_modulus(0.5), const_modulus(1.0)});
}

// ---------------------------------------------------------------------------
// Empirical estimation
// ---------------------------------------------------------------------------

/// Fits a table modulus to sampled data: for each eps in the grid,
/// delta(eps) is the largest residual threshold such that no sampled point
/// with |F(x)| below it sits at distance >= eps from the zero set. When no
/// sampled point sits that far out, delta(eps) is the top of the probe
/// range, max(1, largest observed residual). Deterministic given the seed.
inline Modulus estimate_modulus_empirical(
    const std::function<double(const Vector&)>& residual,
    const std::function<double(const Vector&)>& zero_distance,
    const ClosedBall& ball, std::vector<double> eps_grid, int samples,
    std::uint64_t seed,
    const std::function<bool(const Vector&)>& domain = nullptr) {
  if (samples <= 0) {
    throw std::invalid_argument("estimate_modulus_empirical: samples must be > 0");
  }
  if (eps_grid.empty()) {
    throw std::invalid_argument("estimate_modulus_empirical: empty eps grid");
  }
  std::sort(eps_grid.begin(), eps_grid.end());

  SplitMix64 rng(seed);
  std::vector<std::pair<double, double>> data;  // (residual, dist)
  data.reserve(static_cast<std::size_t>(samples));
  double res_top = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector x = domain ? sample_in_ball_domain(ball, domain, rng)
                            : sample_in_ball(ball, rng);
    const double res = std::fabs(residual(x));
    const double dist = zero_distance(x);
    data.emplace_back(res, dist);
    if (std::isfinite(res)) res_top = std::max(res_top, res);
  }
  const double top = std::max(1.0, res_top);

  std::vector<std::pair<double, double>> points;
  points.reserve(eps_grid.size());
  double prev = 0.0;
  for (double eps : eps_grid) {
    double delta = std::numeric_limits<double>::infinity();
    for (const auto& [res, dist] : data) {
      if (dist >= eps && std::isfinite(res)) delta = std::min(delta, res);
    }
    if (!std::isfinite(delta)) delta = top;
    if (!(delta > 0.0)) {
      throw std::runtime_error(
          "estimate_modulus_empirical: zero residual observed at distance >= "
          "eps; no positive modulus fits the samples");
    }
    delta = std::max(delta, prev);  // monotone by construction, guard FP ties
    prev = delta;
    points.emplace_back(eps, delta);
  }
  return table_modulus(std::move(points));
}

/// Bounded-regularity witness for a best-approximation pair: the largest
/// delta(eps) such that no sampled x in the ball with dist(x, U) < delta and
/// dist(x, V) < rho + delta has dist(x, Fix T) >= eps.
inline Modulus estimate_bounded_regularity_delta(
    const std::function<double(const Vector&)>& dist_U,
    const std::function<double(const Vector&)>& dist_V, double rho,
    const std::function<double(const Vector&)>& dist_fix,
    const ClosedBall& ball, std::vector<double> eps_grid, int samples,
    std::uint64_t seed) {
  if (samples <= 0) {
    throw std::invalid_argument(
        "estimate_bounded_regularity_delta: samples must be > 0");
  }
  if (eps_grid.empty()) {
    throw std::invalid_argument("estimate_bounded_regularity_delta: empty grid");
  }
  std::sort(eps_grid.begin(), eps_grid.end());

  SplitMix64 rng(seed);
  struct Row {
    double margin;  // max(dist_U, dist_V - rho): smallest unsafe delta
    double fix;
  };
  std::vector<Row> data;
  data.reserve(static_cast<std::size_t>(samples));
  double margin_top = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vector x = sample_in_ball(ball, rng);
    const double margin = std::max(dist_U(x), dist_V(x) - rho);
    data.push_back({margin, dist_fix(x)});
    margin_top = std::max(margin_top, margin);
  }
  const double top = std::max(1.0, margin_top);

  std::vector<std::pair<double, double>> points;
  double prev = 0.0;
  for (double eps : eps_grid) {
    double delta = std::numeric_limits<double>::infinity();
    for (const Row& r : data) {
      if (r.fix >= eps) delta = std::min(delta, r.margin);
    }
    if (!std::isfinite(delta)) delta = top;
    if (!(delta > 0.0)) {
      throw std::runtime_error(
          "estimate_bounded_regularity_delta: no positive delta fits the "
          "samples");
    }
    delta = std::max(delta, prev);
    prev = delta;
    points.emplace_back(eps, delta);
  }
  return table_modulus(std::move(points));
}

}  // namespace fejer
