#pragma once

// The audit suite: every structural inequality and every certificate is a
// machine-checkable predicate over traces, operators and moduli. All checks
// are deterministic given (inputs, seed) and report the worst violation with
// a reproducible witness; a check passes iff its worst violation is at most
// eta. Named fault fixtures mutate exactly one check so the audit's
// sensitivity is itself testable.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fejer/core.hpp"
#include "fejer/iterations.hpp"
#include "fejer/moduli.hpp"
#include "fejer/operators.hpp"
#include "fejer/problems.hpp"
#include "fejer/random.hpp"
#include "fejer/rates.hpp"

namespace fejer {

struct AuditParams {
  std::vector<double> eps_grid{2.0, 1.0, 0.5, 0.2, 0.1, 0.05};
  int samples = 2000;
  std::uint64_t seed = 0;
  double eta = kDefaultEta;
  std::int64_t window = 64;  // steps audited beyond the certified index
};

struct AuditReport {
  std::string check;
  bool pass = false;
  double worst_violation = 0.0;
  std::string witness;
  AuditParams params;

  static AuditReport make(std::string name, double worst, std::string witness,
                          const AuditParams& params) {
    AuditReport r;
    r.check = std::move(name);
    r.worst_violation = worst;
    r.pass = worst <= params.eta;
    r.witness = std::move(witness);
    r.params = params;
    return r;
  }
};

namespace detail {
inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Trace checks
// ---------------------------------------------------------------------------

/// Fejér monotonicity w.r.t. z: max over n of d(x_{n+1}, z) - d(x_n, z).
inline AuditReport check_fejer(const Trace& trace, const Vector& z,
                               const AuditParams& params = {}) {
  if (trace.records.empty()) {
    throw std::invalid_argument("check_fejer: empty trace");
  }
  double worst = 0.0;
  std::int64_t worst_n = -1;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const double gap = distance(trace.records[k + 1].x, z) -
                       distance(trace.records[k].x, z);
    if (gap > worst) {
      worst = gap;
      worst_n = trace.records[k].n;
    }
  }
  return AuditReport::make(
      "fejer:" + trace.source, worst,
      worst_n < 0 ? "monotone" : "increase after n=" + std::to_string(worst_n),
      params);
}

/// Nonincreasing fixed-point residual along nonexpansive Picard-type traces.
inline AuditReport check_residual_monotone(const Trace& trace,
                                           const AuditParams& params = {}) {
  double worst = 0.0;
  std::int64_t worst_n = -1;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const double a = trace.records[k].fix_residual;
    const double b = trace.records[k + 1].fix_residual;
    if (std::isnan(a) || std::isnan(b)) continue;
    if (b - a > worst) {
      worst = b - a;
      worst_n = trace.records[k].n;
    }
  }
  return AuditReport::make(
      "residual_monotone:" + trace.source, worst,
      worst_n < 0 ? "monotone" : "increase after n=" + std::to_string(worst_n),
      params);
}

// ---------------------------------------------------------------------------
// Modulus soundness sampling
// ---------------------------------------------------------------------------

inline AuditReport check_modulus_soundness(
    const std::function<double(const Vector&)>& residual,
    const std::function<double(const Vector&)>& zero_distance,
    const ClosedBall& ball, const Modulus& phi, const AuditParams& params,
    const std::string& label,
    const std::function<bool(const Vector&)>& domain = nullptr) {
  SplitMix64 rng(params.seed);
  double worst = 0.0;
  std::string witness = "no counterexample";
  for (int i = 0; i < params.samples; ++i) {
    const Vector x = domain ? sample_in_ball_domain(ball, domain, rng)
                            : sample_in_ball(ball, rng);
    const double res = std::fabs(residual(x));
    const double dist = zero_distance(x);
    for (double eps : params.eps_grid) {
      if (res < phi(eps) && dist - eps > worst) {
        worst = dist - eps;
        std::ostringstream os;
        os << "sample " << i << " eps=" << eps << " |F(x)|=" << detail::fmt(res)
           << " dist=" << detail::fmt(dist);
        witness = os.str();
      }
    }
  }
  return AuditReport::make("modulus_soundness:" + label, worst, witness,
                           params);
}

inline AuditReport check_modulus_soundness(const ProblemInstance& p,
                                           const Modulus& phi,
                                           const AuditParams& params = {}) {
  const double r = p.modulus_context ? p.modulus_context->radius : p.bound_b;
  return check_modulus_soundness(p.residual, p.zero_distance,
                                 ClosedBall(p.reference_zero, r), phi, params,
                                 p.name, p.domain);
}

/// Growth property for minimization instances: f(x) >= m + phi(dist(x, S)).
inline AuditReport check_growth_property(const ProblemInstance& p,
                                         const AuditParams& params = {}) {
  if (p.residual_kind != ResidualKind::minimization || !p.modulus) {
    throw std::invalid_argument("check_growth_property: not applicable");
  }
  SplitMix64 rng(params.seed);
  const ClosedBall ball(p.reference_zero, p.bound_b);
  double worst = 0.0;
  std::string witness = "holds";
  for (int i = 0; i < params.samples; ++i) {
    const Vector x = p.domain ? sample_in_ball_domain(ball, p.domain, rng)
                              : sample_in_ball(ball, rng);
    const double dist = p.zero_distance(x);
    if (dist <= 1e-12) continue;
    const double lhs = p.residual(x);  // f(x) - m
    const double viol = (*p.modulus)(dist)-lhs;
    if (viol > worst) {
      worst = viol;
      witness = "sample " + std::to_string(i) + " dist=" + detail::fmt(dist);
    }
  }
  return AuditReport::make("growth_property:" + p.name, worst, witness, params);
}

// ---------------------------------------------------------------------------
// Certificate dominance (streaming)
// ---------------------------------------------------------------------------

inline constexpr std::int64_t kStreamCap = 32'000'000;

/// Streams the recipe to max(certified index) + window and audits:
///  * first index with dist(x_n, zer F) < eps is <= alpha(phi(eps));
///  * dist(x_n, zer F) < eps + eta for every audited n beyond that index;
///  * first index with |F(x_n)| < eps is <= alpha(eps);
///  * the pairwise Cauchy bound beyond alpha(phi(eps/2)), audited through
///    the triangle-inequality bound 2 max_n d(x_n, x_H) < eps + eta.
inline AuditReport check_certificate_dominance(const ProblemInstance& p,
                                               const RateFn& alpha,
                                               const Modulus& phi,
                                               const AuditParams& params = {}) {
  const RateFn dist_idx_fn = dist_rate(alpha, phi);
  const RateFn cauchy_idx_fn = cauchy_modulus(alpha, phi);

  struct PerEps {
    double eps;
    std::int64_t dist_idx, cauchy_idx, res_idx;
    std::int64_t first_dist_hit = -1, first_res_hit = -1;
    double dist_at_idx = std::numeric_limits<double>::quiet_NaN();
    double min_res_prefix = std::numeric_limits<double>::infinity();
    double max_tail_excess = -std::numeric_limits<double>::infinity();
    double max_cauchy_dist = 0.0;
  };
  std::vector<PerEps> states;
  std::int64_t horizon = 0;
  for (double eps : params.eps_grid) {
    PerEps s;
    s.eps = eps;
    s.dist_idx = dist_idx_fn(eps);
    s.cauchy_idx = cauchy_idx_fn(eps);
    s.res_idx = alpha(eps);
    horizon = std::max({horizon, s.dist_idx, s.cauchy_idx, s.res_idx});
    states.push_back(s);
  }
  horizon += params.window;
  if (horizon + 1 > kStreamCap) throw HorizonExceeded(horizon + 1);

  const Stepper step = make_stepper(p.recipe);

  // Pass 1: terminal point x_H.
  Vector x = p.start;
  for (std::int64_t n = 0; n < horizon; ++n) x = step(x, n);
  const Vector x_h = x;

  // Pass 2: per-eps statistics.
  x = p.start;
  for (std::int64_t n = 0; n <= horizon; ++n) {
    const double dist = p.zero_distance(x);
    const double res = std::fabs(p.residual(x));
    for (PerEps& s : states) {
      if (s.first_dist_hit < 0 && dist < s.eps) s.first_dist_hit = n;
      if (s.first_res_hit < 0 && res < s.eps) s.first_res_hit = n;
      if (n == s.dist_idx) s.dist_at_idx = dist;
      if (n >= s.dist_idx) {
        s.max_tail_excess = std::max(s.max_tail_excess, dist - s.eps);
      }
      if (n <= s.res_idx) s.min_res_prefix = std::min(s.min_res_prefix, res);
      if (n >= s.cauchy_idx) {
        s.max_cauchy_dist = std::max(s.max_cauchy_dist, distance(x, x_h));
      }
    }
    if (n < horizon) x = step(x, n);
  }

  double worst = 0.0;
  std::string witness = "dominated";
  auto consider = [&](double viol, const PerEps& s, const char* what,
                      std::int64_t n) {
    if (viol > worst) {
      worst = viol;
      std::ostringstream os;
      os << what << " at eps=" << s.eps << " n=" << n;
      witness = os.str();
    }
  };
  for (const PerEps& s : states) {
    if (s.first_dist_hit < 0 || s.first_dist_hit > s.dist_idx) {
      consider(s.dist_at_idx - s.eps, s, "dist first-hit beyond certified index",
               s.dist_idx);
    }
    consider(s.max_tail_excess, s, "dist above eps beyond certified index",
             s.dist_idx);
    if (s.first_res_hit < 0 || s.first_res_hit > s.res_idx) {
      consider(s.min_res_prefix - s.eps, s,
               "residual first-hit beyond certified index", s.res_idx);
    }
    consider(2.0 * s.max_cauchy_dist - s.eps, s, "cauchy window too wide",
             s.cauchy_idx);
  }
  return AuditReport::make("certificate_dominance:" + p.name, worst, witness,
                           params);
}

// ---------------------------------------------------------------------------
// Finite termination
// ---------------------------------------------------------------------------

/// Asserts the trace is exactly constant (floating equality, coordinatewise)
/// from the certified index onward and terminates at a zero.
inline AuditReport check_finite_termination(const ProblemInstance& p,
                                            const AuditParams& params = {},
                                            const IterationRecipe* recipe_override = nullptr) {
  if (!p.eps_star || !p.rate) {
    throw std::invalid_argument("check_finite_termination: not applicable");
  }
  const std::int64_t idx =
      (p.eps_star_uses_modulus && p.modulus)
          ? finite_termination_index(*p.rate, *p.modulus, *p.eps_star)
          : (*p.rate)(*p.eps_star);
  const IterationRecipe& recipe = recipe_override ? *recipe_override : p.recipe;
  const Stepper step = make_stepper(recipe);
  if (idx + params.window + 1 > kStreamCap) {
    throw HorizonExceeded(idx + params.window + 1);
  }
  Vector x = p.start;
  for (std::int64_t n = 0; n < idx; ++n) x = step(x, n);
  const Vector terminal = x;

  double worst = p.zero_distance(terminal);  // terminal point must be a zero
  std::string witness = "terminal dist " + detail::fmt(worst) +
                        " at certified index " + std::to_string(idx);
  for (std::int64_t n = idx; n < idx + params.window; ++n) {
    x = step(x, n);
    bool equal = x.dim() == terminal.dim();
    for (std::size_t i = 0; equal && i < x.dim(); ++i) {
      equal = x[i] == terminal[i];
    }
    if (!equal) {
      const double d = distance(x, terminal);
      const double viol = std::max(d, 1e-6);  // non-constant is a failure even at distance 0+
      if (viol > worst) {
        worst = viol;
        witness = "trace moved at n=" + std::to_string(n + 1) + " by " +
                  detail::fmt(d);
      }
    }
  }
  return AuditReport::make("finite_termination:" + p.name, worst, witness,
                           params);
}

// ---------------------------------------------------------------------------
// Structural inequalities
// ---------------------------------------------------------------------------

/// Resolvent inequality for Prox_{gamma f} over sampled pairs (x, y).
inline AuditReport check_resolvent_inequality(
    const ProxFn& f, double gamma, const ClosedBall& ball,
    const AuditParams& params, const std::string& label,
    const std::function<Vector(const Vector&)>& prox_override = nullptr) {
  SplitMix64 rng(params.seed);
  double worst = -std::numeric_limits<double>::infinity();
  std::string witness;
  for (int i = 0; i < params.samples; ++i) {
    const Vector x = sample_in_ball(ball, rng);
    const Vector y = sample_in_ball(ball, rng);
    const Vector j = prox_override ? prox_override(x) : prox(f, gamma, x);
    const double lhs = f.eval(j) - f.eval(y);
    const double rhs = (squared_distance(y, x) - squared_distance(j, x) -
                        squared_distance(j, y)) /
                       (2.0 * gamma);
    const double viol = lhs - rhs;
    if (viol > worst) {
      worst = viol;
      witness = "pair " + std::to_string(i);
    }
  }
  return AuditReport::make("resolvent_inequality:" + label, worst, witness,
                           params);
}

/// Metric regularity of a halfspace family w.r.t. the ball:
/// all dist(x, C_i) < rho(eps) must force dist(x, C) < eps.
inline AuditReport check_metric_regularity(const std::vector<ConvexSet>& sets,
                                           const Modulus& rho,
                                           const ClosedBall& ball,
                                           const Vector& witness_point,
                                           const AuditParams& params,
                                           const std::string& label) {
  SplitMix64 rng(params.seed);
  double worst = 0.0;
  std::string witness = "no counterexample";
  for (int i = 0; i < params.samples; ++i) {
    const Vector x = sample_in_ball(ball, rng);
    double md = 0.0;
    for (const ConvexSet& s : sets) md = std::max(md, s.distance(x));
    const double dc = dist_to_halfspace_intersection(sets, x, witness_point);
    for (double eps : params.eps_grid) {
      if (md < rho(eps) && dc - eps > worst) {
        worst = dc - eps;
        witness = "sample " + std::to_string(i) + " eps=" + detail::fmt(eps) +
                  " dist(x,C)=" + detail::fmt(dc);
      }
    }
  }
  return AuditReport::make("metric_regularity:" + label, worst, witness,
                           params);
}

/// Central finite differences against the analytic gradient; passes when
/// the worst relative error stays at or below 1e-5.
inline AuditReport check_gradient_finite_difference(
    const std::function<Vector(const Vector&)>& gradient,
    const std::function<double(const Vector&)>& f, const ClosedBall& ball,
    const AuditParams& params, const std::string& label) {
  SplitMix64 rng(params.seed);
  const double h = 1e-5;
  double worst_rel = 0.0;
  std::string witness;
  for (int i = 0; i < std::min(params.samples, 200); ++i) {
    const Vector x = sample_in_ball(ball, rng);
    const Vector g = gradient(x);
    std::vector<double> fd(x.dim());
    for (std::size_t k = 0; k < x.dim(); ++k) {
      Vector hi = x, lo = x;
      hi[k] += h;
      lo[k] -= h;
      fd[k] = (f(hi) - f(lo)) / (2.0 * h);
    }
    const double err = distance(Vector(std::move(fd)), g);
    const double rel = err / std::max(1.0, norm(g));
    if (rel > worst_rel) {
      worst_rel = rel;
      witness = "sample " + std::to_string(i) + " rel=" + detail::fmt(rel);
    }
  }
  return AuditReport::make("gradient_fd:" + label, worst_rel - 1e-5, witness,
                           params);
}

/// Quadrilateral inequality on random quadruples.
inline AuditReport check_quadrilateral(std::size_t dim, int count,
                                       const AuditParams& params) {
  SplitMix64 rng(params.seed);
  const ClosedBall ball(Vector(dim, 0.0), 3.0);
  double worst = 0.0;
  std::string witness = "holds";
  for (int i = 0; i < count; ++i) {
    const Vector x = sample_in_ball(ball, rng);
    const Vector y = sample_in_ball(ball, rng);
    const Vector u = sample_in_ball(ball, rng);
    const Vector v = sample_in_ball(ball, rng);
    const double defect = quadrilateral_defect(x, y, u, v);
    if (-defect > worst) {
      worst = -defect;
      witness = "quadruple " + std::to_string(i);
    }
  }
  return AuditReport::make("quadrilateral:R" + std::to_string(dim), worst,
                           witness, params);
}

/// Projection inequality d(x, Px)^2 + d(Px, y)^2 <= d(x, y)^2 for y in C.
inline AuditReport check_projection_inequality(const ConvexSet& set,
                                               const ClosedBall& ball,
                                               int count,
                                               const AuditParams& params,
                                               const std::string& label) {
  SplitMix64 rng(params.seed);
  double worst = -std::numeric_limits<double>::infinity();
  std::string witness;
  for (int i = 0; i < count; ++i) {
    const Vector x = sample_in_ball(ball, rng);
    const Vector y = set.project(sample_in_ball(ball, rng));
    const Vector px = set.project(x);
    const double viol = squared_distance(x, px) + squared_distance(px, y) -
                        squared_distance(x, y);
    if (viol > worst) {
      worst = viol;
      witness = "pair " + std::to_string(i);
    }
  }
  return AuditReport::make("projection_inequality:" + label, worst, witness,
                           params);
}

/// Declared operator class audited by sampling.
inline AuditReport check_operator_class(const Operator& T,
                                        const ClosedBall& ball,
                                        const AuditParams& params,
                                        const std::string& label,
                                        const std::vector<Vector>& fixed_points = {},
                                        const std::function<bool(const Vector&)>& domain = nullptr) {
  const ClassificationReport rep = classify_by_sampling(
      T, ball, params.samples, params.seed, fixed_points, domain);
  double worst = 0.0;
  switch (T.declared_class()) {
    case OperatorClass::nonexpansive:
      worst = rep.worst_nonexpansive;
      break;
    case OperatorClass::firmly_nonexpansive:
      worst = std::max(rep.worst_nonexpansive, rep.worst_firmly);
      break;
    case OperatorClass::quasi_nonexpansive:
      worst = rep.worst_quasi.value_or(0.0);
      break;
    case OperatorClass::general:
      worst = 0.0;
      break;
  }
  return AuditReport::make("operator_class:" + label, worst,
                           std::string("declared ") + to_string(T.declared_class()),
                           params);
}

/// Best-approximation pair inequality (RHS - LHS >= -eta) sampled over the
/// ball, with u sampled from Fix T = the boundary hyperplane of U.
inline AuditReport check_best_approx_defect(const ConvexSet& U,
                                            const ConvexSet& V, double gap,
                                            const ClosedBall& ball,
                                            const AuditParams& params,
                                            const std::string& label) {
  SplitMix64 rng(params.seed);
  const Vector a_hat = (1.0 / norm(U.normal())) * U.normal();
  const double hi = U.offset() / norm(U.normal());
  double worst = 0.0;
  std::string witness = "holds";
  for (int i = 0; i < params.samples; ++i) {
    const Vector x = sample_in_ball(ball, rng);
    Vector u = sample_in_ball(ball, rng);
    u = u + (hi - dot(a_hat, u)) * a_hat;  // project onto Fix T
    const double defect = best_approx_pair_defect(U, V, gap, x, u);
    if (-defect > worst) {
      worst = -defect;
      witness = "pair " + std::to_string(i);
    }
  }
  return AuditReport::make("best_approx_inequality:" + label, worst, witness,
                           params);
}

// ---------------------------------------------------------------------------
// Fault injection and the full audit
// ---------------------------------------------------------------------------

enum class FaultInjection {
  none,
  fejer_swap,
  modulus_inflated,
  certificate_inflated,
  soft_threshold_off_by_one,
  prox_overshoot,
  metric_regularity_ill_conditioned,
  gradient_sign,
};

inline const std::vector<std::pair<std::string, FaultInjection>>&
fault_names() {
  static const std::vector<std::pair<std::string, FaultInjection>> names{
      {"fejer_swap", FaultInjection::fejer_swap},
      {"modulus_inflated", FaultInjection::modulus_inflated},
      {"certificate_inflated", FaultInjection::certificate_inflated},
      {"soft_threshold_off_by_one", FaultInjection::soft_threshold_off_by_one},
      {"prox_overshoot", FaultInjection::prox_overshoot},
      {"metric_regularity_ill_conditioned",
       FaultInjection::metric_regularity_ill_conditioned},
      {"gradient_sign", FaultInjection::gradient_sign},
  };
  return names;
}

inline FaultInjection fault_from_string(const std::string& s) {
  if (s.empty() || s == "none") return FaultInjection::none;
  for (const auto& [name, value] : fault_names()) {
    if (name == s) return value;
  }
  throw std::invalid_argument("unknown fault fixture: " + s);
}

/// Runs every applicable check on every selected instance. The fault
/// fixture, when set, corrupts exactly one targeted check.
inline std::vector<AuditReport> run_full_audit(
    const std::vector<ProblemInstance>& catalog, std::uint64_t seed,
    FaultInjection fault = FaultInjection::none, AuditParams base = {}) {
  base.seed = seed;
  std::vector<AuditReport> reports;

  for (const ProblemInstance& p : catalog) {
    // Trace-level checks on the default-step trace.
    Trace trace = run_recipe(p);
    if (fault == FaultInjection::fejer_swap && p.name == "min_norm_ppa") {
      std::swap(trace.records[0].x, trace.records[1].x);
    }
    reports.push_back(check_fejer(trace, p.reference_zero, base));
    if (p.recipe.residual_monotone_expected) {
      reports.push_back(check_residual_monotone(trace, base));
    }

    if (p.modulus) {
      Modulus phi = *p.modulus;
      if (fault == FaultInjection::modulus_inflated &&
          p.name == "grad_quadratic_identity") {
        phi = scale_modulus(10.0, phi);
      }
      reports.push_back(check_modulus_soundness(p, phi, base));
      if (p.residual_kind == ResidualKind::minimization) {
        reports.push_back(check_growth_property(p, base));
      }
    }

    if (p.modulus && p.rate) {
      Modulus phi = *p.modulus;
      if (fault == FaultInjection::certificate_inflated &&
          p.name == "grad_quadratic_identity") {
        phi = const_modulus(12.0);
      }
      try {
        reports.push_back(check_certificate_dominance(p, *p.rate, phi, base));
      } catch (const HorizonExceeded& e) {
        reports.push_back(AuditReport::make(
            "certificate_dominance:" + p.name,
            std::numeric_limits<double>::infinity(), e.what(), base));
      }
    }

    if (p.eps_star && p.rate) {
      if (fault == FaultInjection::soft_threshold_off_by_one &&
          p.name == "min_norm_ppa") {
        IterationRecipe faulty = p.recipe;
        const std::size_t dim = p.dimension;
        faulty.prox_family = [dim](double gamma) {
          // Off-by-one threshold: shrink by gamma - 1 instead of gamma.
          const double thresh = std::max(gamma - 1.0, 0.0);
          return Operator("J_faulty", dim, OperatorClass::firmly_nonexpansive,
                          [thresh](const Vector& x) {
                            const double nx = norm(x);
                            if (nx <= thresh) return Vector(x.dim(), 0.0);
                            return ((nx - thresh) / nx) * x;
                          });
        };
        reports.push_back(check_finite_termination(p, base, &faulty));
      } else {
        reports.push_back(check_finite_termination(p, base));
      }
    }

    // Declared operator classes of the recipe's building blocks.
    const ClosedBall ball(p.reference_zero, p.bound_b);
    for (const Operator& op : p.recipe.operators) {
      if (op.declared_class() == OperatorClass::general) continue;
      reports.push_back(check_operator_class(op, ball, base,
                                             p.name + ":" + op.name(), {},
                                             p.domain));
    }

    if (p.name == "cfp_two_halfspaces") {
      reports.push_back(check_metric_regularity(
          p.recipe.sets, *p.modulus, ball, p.reference_zero, base, p.name));
    }
    if (p.name == "best_approx_pair" && p.pair_gap && !p.recipe.sets.empty()) {
      reports.push_back(check_best_approx_defect(p.recipe.sets[0],
                                                 p.recipe.sets[1], *p.pair_gap,
                                                 ball, base, p.name));
    }
    if (p.recipe.driver == DriverKind::gradient_descent && p.recipe.gradient) {
      auto grad = p.recipe.gradient;
      if (fault == FaultInjection::gradient_sign &&
          p.name == "grad_quadratic_identity") {
        grad = [inner = p.recipe.gradient](const Vector& x) {
          return -1.0 * inner(x);
        };
      }
      // f is recovered from the gradient of the diagonal quadratic via
      // f(x) = 1/2 <x, grad f(x)>.
      auto f = [g = p.recipe.gradient](const Vector& x) {
        return 0.5 * dot(x, g(x));
      };
      reports.push_back(
          check_gradient_finite_difference(grad, f, ball, base, p.name));
    }
  }

  // Model-level structural inequalities.
  reports.push_back(check_quadrilateral(2, 10000, base));
  reports.push_back(check_quadrilateral(3, 10000, base));
  {
    const std::vector<std::pair<std::string, ConvexSet>> kinds{
        {"halfspace", ConvexSet::halfspace(Vector{1.0, 0.5}, 0.25)},
        {"hyperplane", ConvexSet::hyperplane(Vector{0.5, -1.0}, 0.5)},
        {"box", ConvexSet::box(Vector{-1.0, -0.5}, Vector{0.5, 1.0})},
        {"ball", ConvexSet::l2_ball(Vector{0.25, -0.25}, 0.75)},
        {"affine", ConvexSet::affine_subspace(Vector{0.0, 1.0},
                                              {Vector{1.0, 1.0}})},
    };
    const ClosedBall ball(Vector{0.0, 0.0}, 3.0);
    for (const auto& [label, set] : kinds) {
      reports.push_back(
          check_projection_inequality(set, ball, 10000, base, label));
    }
  }
  {
    const ClosedBall ball1(Vector{0.0}, 3.0);
    const ClosedBall ball2(Vector{0.0, 0.0}, 3.0);
    for (double gamma : {0.5, 1.0, 2.0}) {
      const std::string suffix = ":gamma=" + detail::fmt(gamma);
      std::function<Vector(const Vector&)> prox_override = nullptr;
      if (fault == FaultInjection::prox_overshoot && gamma == 1.0) {
        prox_override = [gamma](const Vector& x) {
          const double nx = norm(x);
          const double over = 1.5 * gamma;
          if (nx <= over) return Vector(x.dim(), 0.0);
          return ((nx - over) / nx) * x;
        };
      }
      reports.push_back(check_resolvent_inequality(
          ProxFn::norm_fn(), gamma, ball1, base, "norm" + suffix,
          prox_override));
      reports.push_back(check_resolvent_inequality(
          ProxFn::quadratic(Vector{0.0, 0.0}), gamma, ball2, base,
          "half_sq" + suffix));
    }
  }
  if (fault == FaultInjection::metric_regularity_ill_conditioned) {
    // Nearly parallel halfspaces: the orthogonal-pair modulus is unsound.
    const double t = 0.01;
    const std::vector<ConvexSet> sets{
        ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0),
        ConvexSet::halfspace(Vector{-std::cos(t), std::sin(t)}, 0.0)};
    reports.push_back(check_metric_regularity(
        sets, linear_modulus(0.5), ClosedBall(Vector{0.0, 0.0}, 3.0),
        Vector{0.0, 0.0}, base, "ill_conditioned_pair"));
  }
  return reports;
}

inline bool all_pass(const std::vector<AuditReport>& reports) {
  for (const AuditReport& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace fejer
