#pragma once

// Instrumented drivers generating Fejér-monotone traces for the shipped
// algorithms. Every driver is deterministic: identical inputs produce
// bit-identical traces. Traces are finite and explicit; a certified index
// beyond the hard step cap raises HorizonExceeded instead of truncating.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fejer/core.hpp"
#include "fejer/operators.hpp"
#include "fejer/problems.hpp"

namespace fejer {

inline constexpr std::int64_t kTraceCap = 1'000'000;

struct HorizonExceeded : std::runtime_error {
  std::int64_t required;
  explicit HorizonExceeded(std::int64_t req)
      : std::runtime_error("horizon exceeded: trace of " + std::to_string(req) +
                           " steps above the cap of " +
                           std::to_string(kTraceCap)),
        required(req) {}
};

struct TraceRecord {
  std::int64_t n = 0;
  Vector x;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double fix_residual = std::numeric_limits<double>::quiet_NaN();
  double dist = std::numeric_limits<double>::quiet_NaN();
  // d(x_n, z) - d(x_{n+1}, z); 0 on the final record.
  double fejer_gap = std::numeric_limits<double>::quiet_NaN();
  // PPA surrogate ||u_{n-1}|| = ||x_{n-1} - x_n|| / gamma_{n-1}.
  double u_norm = std::numeric_limits<double>::quiet_NaN();
  std::optional<Vector> shadow;       // Douglas-Rachford shadow J_B(x_n)
  std::vector<double> set_residuals;  // cyclic / Crombez per-set residuals
};

/// Optional instrumentation oracles, typically taken from a ProblemInstance.
struct Probe {
  std::function<double(const Vector&)> residual;
  std::function<double(const Vector&)> dist_to_zeros;
  std::optional<Vector> reference_zero;

  static Probe from(const ProblemInstance& p) {
    Probe probe;
    probe.residual = p.residual;
    probe.dist_to_zeros = p.zero_distance;
    probe.reference_zero = p.reference_zero;
    return probe;
  }
};

struct Trace {
  std::string source;
  std::string instance_hash;  // set when built from a loaded config
  std::string schedule_desc;
  std::uint64_t seed = 0;  // drivers are deterministic; kept for the mirror
  std::vector<TraceRecord> records;

  const TraceRecord& back() const { return records.back(); }
  std::size_t size() const { return records.size(); }

  void write_csv(std::ostream& os) const {
    const std::size_t dim = records.empty() ? 0 : records.front().x.dim();
    os << "n,residual,fix_residual,dist,fejer_gap";
    for (std::size_t i = 0; i < dim; ++i) os << ",x" << i;
    os << "\n";
    char buf[32];
    auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << ',' << buf;
    };
    for (const TraceRecord& r : records) {
      os << r.n;
      put(r.residual);
      put(r.fix_residual);
      put(r.dist);
      put(r.fejer_gap);
      for (std::size_t i = 0; i < dim; ++i) put(r.x[i]);
      os << "\n";
    }
  }
};

/// One step of an iteration: x_{n+1} = step(x_n, n).
using Stepper = std::function<Vector(const Vector&, std::int64_t)>;

namespace detail {

struct Instrumentation {
  // d(x, Tx) for the recipe's underlying map, when one exists
  std::function<double(const Vector&)> fix_residual;
  // per-set residuals (cyclic / Crombez)
  std::function<std::vector<double>(const Vector&)> set_residuals;
  // shadow sequence (Douglas-Rachford)
  std::function<Vector(const Vector&)> shadow;
  // gamma_n used at step n (PPA u_n column)
  std::function<double(std::int64_t)> gamma_at;
};

inline Trace run_loop(const Stepper& step, const Vector& x0,
                      std::int64_t steps, const Probe& probe,
                      const Instrumentation& inst, std::string source) {
  if (steps < 0) throw std::invalid_argument("run: steps must be >= 0");
  if (steps + 1 > kTraceCap) throw HorizonExceeded(steps + 1);

  std::vector<Vector> xs;
  xs.reserve(static_cast<std::size_t>(steps) + 1);
  xs.push_back(x0);
  for (std::int64_t n = 0; n < steps; ++n) xs.push_back(step(xs.back(), n));

  Trace trace;
  trace.source = std::move(source);
  trace.records.resize(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    TraceRecord& r = trace.records[k];
    r.n = static_cast<std::int64_t>(k);
    r.x = xs[k];
    if (probe.residual) r.residual = std::fabs(probe.residual(xs[k]));
    if (probe.dist_to_zeros) r.dist = probe.dist_to_zeros(xs[k]);
    if (inst.fix_residual) r.fix_residual = inst.fix_residual(xs[k]);
    if (inst.set_residuals) r.set_residuals = inst.set_residuals(xs[k]);
    if (inst.shadow) r.shadow = inst.shadow(xs[k]);
    if (inst.gamma_at && k > 0) {
      const double g = inst.gamma_at(static_cast<std::int64_t>(k) - 1);
      r.u_norm = distance(xs[k - 1], xs[k]) / g;
    }
    if (probe.reference_zero) {
      r.fejer_gap = 0.0;
      if (k + 1 < xs.size()) {
        r.fejer_gap = distance(xs[k], *probe.reference_zero) -
                      distance(xs[k + 1], *probe.reference_zero);
      }
    }
  }
  return trace;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Steppers
// ---------------------------------------------------------------------------

inline Stepper make_stepper(const IterationRecipe& recipe) {
  switch (recipe.driver) {
    case DriverKind::picard: {
      if (recipe.operators.size() != 1) {
        throw std::invalid_argument("picard: needs exactly one operator");
      }
      const Operator T = recipe.operators.front();
      return [T](const Vector& x, std::int64_t) { return T(x); };
    }
    case DriverKind::mann: {
      if (recipe.operators.size() != 1) {
        throw std::invalid_argument("mann: needs exactly one operator");
      }
      const Operator T = recipe.operators.front();
      const StepSequence sched = recipe.schedule;
      return [T, sched](const Vector& x, std::int64_t n) {
        const double l = sched.term(n);
        if (!(l >= 0.0 && l <= 1.0)) {
          throw std::invalid_argument("mann: lambda_n outside [0, 1]");
        }
        return geodesic_point(x, T(x), l);
      };
    }
    case DriverKind::cyclic: {
      if (recipe.operators.empty()) {
        throw std::invalid_argument("cyclic: empty operator list");
      }
      const std::vector<Operator> ops = recipe.operators;
      return [ops](const Vector& x, std::int64_t n) {
        return ops[static_cast<std::size_t>(n) % ops.size()](x);
      };
    }
    case DriverKind::ppa: {
      if (!recipe.prox_family) {
        throw std::invalid_argument("ppa: missing resolvent family");
      }
      const auto family = recipe.prox_family;
      const StepSequence sched = recipe.schedule;
      if (sched.kind == StepSequence::Kind::constant) {
        if (!(sched.value > 0.0)) {
          throw std::invalid_argument("ppa: gamma_n must be > 0");
        }
        const Operator J = family(sched.value);
        return [J](const Vector& x, std::int64_t) { return J(x); };
      }
      return [family, sched](const Vector& x, std::int64_t n) {
        const double g = sched.term(n);
        if (!(g > 0.0)) throw std::invalid_argument("ppa: gamma_n must be > 0");
        return family(g)(x);
      };
    }
    case DriverKind::douglas_rachford: {
      if (!recipe.dr_resolvent_A.valid() || !recipe.dr_resolvent_B.valid()) {
        throw std::invalid_argument("douglas_rachford: missing resolvents");
      }
      const Operator T = compose({reflected_resolvent(recipe.dr_resolvent_A),
                                  reflected_resolvent(recipe.dr_resolvent_B)});
      const StepSequence sched = recipe.schedule;
      return [T, sched](const Vector& x, std::int64_t n) {
        const double l = sched.term(n);
        if (!(l >= 0.0 && l <= 1.0)) {
          throw std::invalid_argument("douglas_rachford: lambda_n outside [0, 1]");
        }
        return geodesic_point(x, T(x), l);
      };
    }
    case DriverKind::gradient_descent: {
      if (!recipe.gradient) {
        throw std::invalid_argument("gradient_descent: missing gradient");
      }
      const auto grad = recipe.gradient;
      const double L = recipe.lipschitz;
      if (!(L > 0.0)) {
        throw std::invalid_argument("gradient_descent: L must be > 0");
      }
      return [grad, L](const Vector& x, std::int64_t) {
        return x - (1.0 / L) * grad(x);
      };
    }
    case DriverKind::crombez: {
      std::vector<Operator> projections;
      projections.reserve(recipe.sets.size());
      for (const ConvexSet& s : recipe.sets) {
        projections.push_back(projection_operator(s));
      }
      const Operator T =
          convex_combination(projections, recipe.weights, recipe.relaxations);
      return [T](const Vector& x, std::int64_t) { return T(x); };
    }
  }
  throw std::logic_error("make_stepper: bad driver");
}

namespace detail {

inline Instrumentation make_instrumentation(const IterationRecipe& recipe) {
  Instrumentation inst;
  switch (recipe.driver) {
    case DriverKind::picard:
    case DriverKind::mann: {
      const Operator T = recipe.operators.front();
      inst.fix_residual = [T](const Vector& x) { return distance(x, T(x)); };
      break;
    }
    case DriverKind::cyclic: {
      const std::vector<Operator> ops = recipe.operators;
      inst.set_residuals = [ops](const Vector& x) {
        std::vector<double> out;
        out.reserve(ops.size());
        for (const Operator& op : ops) out.push_back(distance(x, op(x)));
        return out;
      };
      inst.fix_residual = [ops](const Vector& x) {
        double worst = 0.0;
        for (const Operator& op : ops) worst = std::max(worst, distance(x, op(x)));
        return worst;
      };
      break;
    }
    case DriverKind::ppa: {
      const StepSequence sched = recipe.schedule;
      inst.gamma_at = [sched](std::int64_t n) { return sched.term(n); };
      break;
    }
    case DriverKind::douglas_rachford: {
      const Operator T = compose({reflected_resolvent(recipe.dr_resolvent_A),
                                  reflected_resolvent(recipe.dr_resolvent_B)});
      inst.fix_residual = [T](const Vector& x) { return distance(x, T(x)); };
      const Operator JB = recipe.dr_resolvent_B;
      inst.shadow = [JB](const Vector& x) { return JB(x); };
      break;
    }
    case DriverKind::gradient_descent: {
      const auto grad = recipe.gradient;
      const double L = recipe.lipschitz;
      inst.fix_residual = [grad, L](const Vector& x) {
        return norm(grad(x)) / L;
      };
      break;
    }
    case DriverKind::crombez: {
      const std::vector<ConvexSet> sets = recipe.sets;
      inst.set_residuals = [sets](const Vector& x) {
        std::vector<double> out;
        out.reserve(sets.size());
        for (const ConvexSet& s : sets) out.push_back(distance(x, s.project(x)));
        return out;
      };
      std::vector<Operator> projections;
      for (const ConvexSet& s : recipe.sets) {
        projections.push_back(projection_operator(s));
      }
      const Operator T =
          convex_combination(projections, recipe.weights, recipe.relaxations);
      inst.fix_residual = [T](const Vector& x) { return distance(x, T(x)); };
      break;
    }
  }
  return inst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

inline Trace run_picard(const Operator& T, const Vector& x0,
                        std::int64_t steps, const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::picard;
  r.operators = {T};
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "picard");
}

inline Trace run_mann(const Operator& T, const StepSequence& lambdas,
                      const Vector& x0, std::int64_t steps,
                      const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::mann;
  r.operators = {T};
  r.schedule = lambdas;
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "mann");
}

inline Trace run_cyclic(const std::vector<Operator>& Ts, const Vector& x0,
                        std::int64_t steps, const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::cyclic;
  r.operators = Ts;
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "cyclic");
}

inline Trace run_ppa(const std::function<Operator(double)>& prox_family,
                     const StepSequence& gammas, const Vector& x0,
                     std::int64_t steps, const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::ppa;
  r.prox_family = prox_family;
  r.schedule = gammas;
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "ppa");
}

inline Trace run_douglas_rachford(const Operator& A_res, const Operator& B_res,
                                  double gamma, const StepSequence& lambdas,
                                  const Vector& x0, std::int64_t steps,
                                  const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::douglas_rachford;
  r.dr_resolvent_A = A_res;
  r.dr_resolvent_B = B_res;
  r.dr_gamma = gamma;
  r.schedule = lambdas;
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "douglas_rachford");
}

inline Trace run_gradient_descent(
    const std::function<Vector(const Vector&)>& gradient, double L,
    const Vector& x0, std::int64_t steps, const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::gradient_descent;
  r.gradient = gradient;
  r.lipschitz = L;
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "gradient_descent");
}

inline Trace run_crombez(const std::vector<ConvexSet>& sets,
                         const std::vector<double>& weights,
                         const std::vector<double>& relaxations,
                         const Vector& x0, std::int64_t steps,
                         const Probe& probe = {}) {
  IterationRecipe r;
  r.driver = DriverKind::crombez;
  r.sets = sets;
  r.weights = weights;
  r.relaxations = relaxations;
  return detail::run_loop(make_stepper(r), x0, steps, probe,
                          detail::make_instrumentation(r), "crombez");
}

/// Runs an instance's recipe with full instrumentation.
inline Trace run_recipe(const ProblemInstance& p,
                        std::optional<std::int64_t> steps = {}) {
  const std::int64_t n = steps.value_or(p.recipe.default_steps);
  Trace t = detail::run_loop(make_stepper(p.recipe), p.start, n,
                             Probe::from(p),
                             detail::make_instrumentation(p.recipe), p.name);
  return t;
}

}  // namespace fejer
