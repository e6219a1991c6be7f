#pragma once

// Catalog of fully specified problem instances. Each instance bundles a
// residual F, an oracle for the distance to zer F that is independent of
// the iteration being audited, a reference zero z with start bound b, an
// iteration recipe, and (where available) a certified modulus and rate.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fejer/core.hpp"
#include "fejer/moduli.hpp"
#include "fejer/operators.hpp"
#include "fejer/rates.hpp"

namespace fejer {

enum class ResidualKind { fixed_point, minimization, operator_dist, equilibrium };

inline const char* to_string(ResidualKind k) {
  switch (k) {
    case ResidualKind::fixed_point: return "fixed_point";
    case ResidualKind::minimization: return "minimization";
    case ResidualKind::operator_dist: return "operator_dist";
    case ResidualKind::equilibrium: return "equilibrium";
  }
  return "?";
}

enum class DriverKind {
  picard,
  mann,
  cyclic,
  ppa,
  douglas_rachford,
  gradient_descent,
  crombez,
};

inline const char* to_string(DriverKind k) {
  switch (k) {
    case DriverKind::picard: return "picard";
    case DriverKind::mann: return "mann";
    case DriverKind::cyclic: return "cyclic";
    case DriverKind::ppa: return "ppa";
    case DriverKind::douglas_rachford: return "douglas_rachford";
    case DriverKind::gradient_descent: return "gradient_descent";
    case DriverKind::crombez: return "crombez";
  }
  return "?";
}

struct IterationRecipe {
  DriverKind driver = DriverKind::picard;
  std::vector<Operator> operators;  // picard: [T]; cyclic: [T_1..T_m]
  std::function<Operator(double)> prox_family;  // ppa: gamma -> J_gamma
  StepSequence schedule = StepSequence::constant_seq(1.0);  // lambda_n / gamma_n
  Operator dr_resolvent_A, dr_resolvent_B;  // douglas_rachford
  double dr_gamma = 1.0;
  std::vector<ConvexSet> sets;  // crombez
  std::vector<double> weights, relaxations;
  std::function<Vector(const Vector&)> gradient;  // gradient_descent
  double lipschitz = 1.0;
  std::int64_t default_steps = 40;
  // Picard-type recipe of a nonexpansive map: the fixed-point residual is
  // expected to be nonincreasing along the trace.
  bool residual_monotone_expected = false;
};

struct ProblemInstance {
  std::string name;
  std::size_t dimension = 1;
  ResidualKind residual_kind = ResidualKind::fixed_point;
  std::function<double(const Vector&)> residual;       // F (may return +inf)
  std::function<double(const Vector&)> zero_distance;  // dist(x, zer F)
  std::function<bool(const Vector&)> domain;           // null: everywhere
  Vector reference_zero;
  double bound_b = 1.0;
  Vector start;
  IterationRecipe recipe;
  std::optional<Modulus> modulus;
  std::optional<ModulusContext> modulus_context;
  std::optional<RateFn> rate;
  std::optional<double> eps_star;
  // Certificate form for eps*: false = the stronger zero-set condition
  // holds and the index is alpha(eps*); true = alpha(min{eps*, phi(eps*)}).
  bool eps_star_uses_modulus = false;
  std::optional<double> min_value;  // stored m for minimization residuals
  bool empirical_modulus = false;   // calibrated/estimated, not certified
  bool demo_no_certificate = false;
  std::optional<double> pair_gap;  // dist(U, V) for best-approximation pairs
  std::string config_json;  // canonical config, attached by the loader

  void validate(double eta = kDefaultEta) const {
    if (!residual || !zero_distance) {
      throw std::invalid_argument(name + ": missing residual or oracle");
    }
    if (reference_zero.dim() != dimension || start.dim() != dimension) {
      throw std::invalid_argument(name + ": dimension mismatch");
    }
    if (std::fabs(residual(reference_zero)) > eta) {
      throw std::invalid_argument(name + ": F(z) != 0");
    }
    if (zero_distance(reference_zero) > eta) {
      throw std::invalid_argument(name + ": zero_distance(z) != 0");
    }
    if (distance(start, reference_zero) > bound_b + eta) {
      throw std::invalid_argument(name + ": d(x0, z) exceeds b");
    }
  }
};

namespace detail {
/// Uniform start-bound rule: b = max(1, ceil(d(x0, z))), overridable in
/// problem configs.
inline double default_bound(const Vector& x0, const Vector& z) {
  return std::max(1.0, std::ceil(distance(x0, z)));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Distance oracle for intersections of halfspaces
// ---------------------------------------------------------------------------

/// Exact for one or two halfspaces in any dimension; fine-grid scan around
/// the witness for m >= 3 in dimension <= 3.
inline double dist_to_halfspace_intersection(
    const std::vector<ConvexSet>& halfspaces, const Vector& x,
    const Vector& witness) {
  for (const ConvexSet& s : halfspaces) {
    if (s.kind() != ConvexSet::Kind::halfspace) {
      throw std::invalid_argument(
          "dist_to_halfspace_intersection: halfspaces only");
    }
  }
  auto feasible = [&](const Vector& p) {
    for (const ConvexSet& s : halfspaces) {
      if (s.distance(p) > 1e-12) return false;
    }
    return true;
  };
  if (feasible(x)) return 0.0;
  if (halfspaces.size() == 1) return halfspaces[0].distance(x);
  if (halfspaces.size() == 2) {
    const ConvexSet& A = halfspaces[0];
    const ConvexSet& B = halfspaces[1];
    double best = std::numeric_limits<double>::infinity();
    for (const ConvexSet* s : {&A, &B}) {
      const Vector p = s->project(x);
      if (feasible(p)) best = std::min(best, distance(x, p));
    }
    // Projection onto the intersection of the two boundary hyperplanes:
    // x + A^T (A A^T)^{-1} (beta - A x) for the 2-row normal matrix.
    const Vector& a1 = A.normal();
    const Vector& a2 = B.normal();
    const double g11 = dot(a1, a1), g12 = dot(a1, a2), g22 = dot(a2, a2);
    const double det = g11 * g22 - g12 * g12;
    if (std::fabs(det) > 1e-14 * g11 * g22) {
      const double r1 = A.offset() - dot(a1, x);
      const double r2 = B.offset() - dot(a2, x);
      const double c1 = (g22 * r1 - g12 * r2) / det;
      const double c2 = (g11 * r2 - g12 * r1) / det;
      const Vector p = x + c1 * a1 + c2 * a2;
      if (feasible(p)) best = std::min(best, distance(x, p));
    }
    return best;
  }
  // m >= 3: grid scan, documented desk-scale oracle for dimension <= 3.
  const std::size_t n = x.dim();
  if (n > 3) {
    throw std::invalid_argument(
        "dist_to_halfspace_intersection: grid oracle limited to dim <= 3");
  }
  const double radius = distance(x, witness) + 1e-9;
  const int steps = n == 3 ? 40 : 200;
  std::vector<int> idx(n, 0);
  double best = distance(x, witness);
  while (true) {
    std::vector<double> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
      coords[i] = x[i] - radius + 2.0 * radius * idx[i] / steps;
    }
    const Vector p{std::vector<double>(coords)};
    if (feasible(p)) best = std::min(best, distance(x, p));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++idx[i] <= steps) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return best;
}

/// Smallest c consistent with sampled metric-regularity data over the grid:
/// the empirical counterpart of the existential constant in the
/// semi-algebraic modulus (flagged "empirical, not certified").
inline double calibrate_semialgebraic_c(
    const std::vector<ConvexSet>& halfspaces, const Vector& witness,
    const ClosedBall& ball, const std::vector<double>& eps_grid, int samples,
    std::uint64_t seed) {
  const int m = static_cast<int>(halfspaces.size());
  const double gamma =
      semialgebraic_gamma(static_cast<int>(ball.center.dim()), 1);
  auto residual = [&halfspaces](const Vector& x) {
    double md = 0.0;
    for (const ConvexSet& s : halfspaces) md = std::max(md, s.distance(x));
    return md;
  };
  auto dist_c = [&halfspaces, &witness](const Vector& x) {
    return dist_to_halfspace_intersection(halfspaces, x, witness);
  };
  const Modulus table = estimate_modulus_empirical(residual, dist_c, ball,
                                                   eps_grid, samples, seed);
  double c = 1e-6;
  for (const auto& [eps, delta] : table.node().points) {
    // rho(eps) = (eps/c)^gamma / m <= delta  <=>  c >= eps / (m delta)^(1/gamma)
    c = std::max(c, eps / std::pow(static_cast<double>(m) * delta, 1.0 / gamma));
  }
  // One part per billion above the binding value, so the fitted modulus
  // stays strictly below the binding residual under rounding.
  return c * (1.0 + 1e-9);
}

// ---------------------------------------------------------------------------
// Catalog builders
// ---------------------------------------------------------------------------

/// Convex feasibility over halfspaces, cyclic projection recipe. The
/// residual is max_i dist(x, C_i). Bundles the d=1 semi-algebraic metric
/// regularity modulus (c calibrated empirically when not supplied) and a
/// user-supplied common approximate fixed point bound ceil(b^2 / eps^2).
inline ProblemInstance instance_cfp_halfspaces(
    std::vector<ConvexSet> halfspaces, Vector x0, Vector witness,
    std::optional<double> semialgebraic_c = {},
    const std::vector<double>& calibration_grid = {2.0, 1.0, 0.5, 0.2, 0.1,
                                                   0.05}) {
  if (halfspaces.empty()) {
    throw std::invalid_argument("instance_cfp_halfspaces: no sets");
  }
  for (const ConvexSet& s : halfspaces) {
    if (s.distance(witness) > kDefaultEta) {
      throw std::invalid_argument(
          "instance_cfp_halfspaces: witness is not in the intersection");
    }
  }
  ProblemInstance p;
  p.name = "cfp_halfspaces";
  p.dimension = x0.dim();
  p.residual_kind = ResidualKind::fixed_point;
  const auto sets = halfspaces;
  p.residual = [sets](const Vector& x) {
    double md = 0.0;
    for (const ConvexSet& s : sets) md = std::max(md, s.distance(x));
    return md;
  };
  p.zero_distance = [sets, witness](const Vector& x) {
    return dist_to_halfspace_intersection(sets, x, witness);
  };
  p.reference_zero = witness;
  p.start = x0;
  p.bound_b = detail::default_bound(x0, witness);

  const int m = static_cast<int>(sets.size());
  if (m == 1) {
    p.modulus = compose_with_metric_regularity(modulus_retraction(),
                                               modulus_retraction());
  } else {
    double c;
    if (semialgebraic_c) {
      c = *semialgebraic_c;
    } else {
      c = calibrate_semialgebraic_c(sets, witness,
                                    ClosedBall(witness, p.bound_b),
                                    calibration_grid, 4000, 0);
      p.empirical_modulus = true;
    }
    const Modulus rho = modulus_metric_regularity_semialgebraic(
        static_cast<int>(p.dimension), 1, m, c);
    p.modulus = compose_with_metric_regularity(modulus_retraction(), rho);
  }
  p.modulus_context = ModulusContext(witness, p.bound_b);
  p.rate = ceil_inv_rate(p.bound_b * p.bound_b, 2.0);  // user-supplied bound

  p.recipe.driver = DriverKind::cyclic;
  for (int i = 0; i < m; ++i) {
    p.recipe.operators.push_back(
        projection_operator(sets[i], "P_C" + std::to_string(i + 1)));
  }
  p.recipe.sets = sets;
  p.recipe.default_steps = 40;
  p.validate();
  return p;
}

/// Best-approximation pair for two disjoint parallel halfspaces
/// U = {a.x <= bU}, V = {a.x >= bV}; T = P_U o P_V. Bundles the
/// alternating-projection rate and the bounded-regularity modulus with an
/// estimated delta table.
inline ProblemInstance instance_best_approx_pair(const ConvexSet& U,
                                                 const ConvexSet& V,
                                                 Vector x0) {
  if (U.kind() != ConvexSet::Kind::halfspace ||
      V.kind() != ConvexSet::Kind::halfspace) {
    throw std::invalid_argument("instance_best_approx_pair: halfspaces only");
  }
  const double nu = norm(U.normal());
  const double nv = norm(V.normal());
  // antiparallel normals: unit(U.normal) == -unit(V.normal)
  const Vector mismatch = (1.0 / nu) * U.normal() + (1.0 / nv) * V.normal();
  if (norm(mismatch) > 1e-12) {
    throw std::invalid_argument(
        "instance_best_approx_pair: closed-form gap needs parallel halfspaces");
  }
  // Along the unit normal of U: U = {t <= hi}, V = {t >= lo}.
  const Vector a_hat = (1.0 / nu) * U.normal();
  const double hi = U.offset() / nu;
  const double lo = -V.offset() / nv;
  const double gap = std::max(0.0, lo - hi);

  ProblemInstance p;
  p.name = "best_approx_pair";
  p.dimension = x0.dim();
  p.residual_kind = ResidualKind::fixed_point;
  auto coord = [a_hat](const Vector& x) { return dot(a_hat, x); };
  p.residual = [coord, lo, hi](const Vector& x) {
    const double t = coord(x);
    if (lo > hi) return std::fabs(t - hi);     // disjoint: T clamps to hi
    const double clamped = std::min(std::max(t, lo), hi);
    return std::fabs(t - clamped);             // intersecting: Fix T is a slab
  };
  p.zero_distance = [coord, lo, hi](const Vector& x) {
    const double t = coord(x);
    if (lo > hi) return std::fabs(t - hi);
    return std::max({t - hi, lo - t, 0.0});
  };
  p.pair_gap = gap;

  const double t0 = coord(x0);
  p.reference_zero = x0 + (hi - t0) * a_hat;  // projection of x0 onto Fix T
  p.start = x0;
  p.bound_b = detail::default_bound(x0, p.reference_zero);
  p.rate = rate_alternating_projections(gap, p.bound_b);
  if (gap > 0.0) {
    auto dist_U = [&U](const Vector& x) { return U.distance(x); };
    auto dist_V = [&V](const Vector& x) { return V.distance(x); };
    const Modulus delta = estimate_bounded_regularity_delta(
        dist_U, dist_V, gap, p.zero_distance,
        ClosedBall(p.reference_zero, p.bound_b),
        {2.0, 1.0, 0.5, 0.2, 0.1, 0.05}, 4000, 0);
    p.modulus = modulus_bounded_regularity_pair(gap, delta, p.bound_b);
    p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
    p.empirical_modulus = true;
  }

  p.recipe.driver = DriverKind::picard;
  p.recipe.operators = {
      compose({projection_operator(U, "P_U"), projection_operator(V, "P_V")})};
  p.recipe.sets = {U, V};
  p.recipe.residual_monotone_expected = true;
  p.recipe.default_steps = 40;
  p.validate();
  return p;
}

/// The inequality d(Tx, P_V x)^2 <= rho^2 + d(u,x)^2 - d(u,Tx)^2 for a
/// best-approximation pair, returned as RHS - LHS (>= -eta when it holds).
inline double best_approx_pair_defect(const ConvexSet& U, const ConvexSet& V,
                                      double gap, const Vector& x,
                                      const Vector& u) {
  const Vector pv = V.project(x);
  const Vector tx = U.project(pv);
  const double lhs = squared_distance(tx, pv);
  const double rhs =
      gap * gap + squared_distance(u, x) - squared_distance(u, tx);
  return rhs - lhs;
}

/// Minimum-norm problem f = ||.|| via the PPA, operator residual
/// dist(O, subdifferential) which is 1 off the origin and 0 at it.
/// Finite termination certificate with eps* = 1 in the alpha(eps*) form.
inline ProblemInstance instance_min_norm(std::size_t dim, Vector x0,
                                         StepSequence gamma_seq) {
  ProblemInstance p;
  p.name = "min_norm_ppa";
  p.dimension = dim;
  p.residual_kind = ResidualKind::operator_dist;
  p.residual = [](const Vector& x) { return norm(x) == 0.0 ? 0.0 : 1.0; };
  p.zero_distance = [](const Vector& x) { return norm(x); };
  p.reference_zero = Vector(dim, 0.0);
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  p.eps_star = 1.0;  // B(O, 1) is contained in the subdifferential at 0
  p.eps_star_uses_modulus = false;
  p.rate = rate_ppa(theta_from_sequence(gamma_seq, /*squared=*/true), p.bound_b);
  p.modulus = modulus_ppa_weak_sharp(linear_modulus(1.0), linear_modulus(1.0),
                                     p.bound_b);
  p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);

  p.recipe.driver = DriverKind::ppa;
  p.recipe.schedule = gamma_seq;
  const std::size_t d = dim;
  p.recipe.prox_family = [d](double gamma) {
    return prox_operator(ProxFn::norm_fn(), gamma, d, "J_norm");
  };
  p.recipe.default_steps = 40;
  p.validate();
  return p;
}

/// Minimization view of the same problem: residual f(x) - m = ||x||,
/// weak-sharp modulus psi(eps) = eps (k = 1).
inline ProblemInstance instance_min_norm_sharp(std::size_t dim, Vector x0,
                                               StepSequence gamma_seq) {
  ProblemInstance p = instance_min_norm(dim, std::move(x0), std::move(gamma_seq));
  p.name = "min_norm_sharp";
  p.residual_kind = ResidualKind::minimization;
  p.residual = [](const Vector& x) { return norm(x); };
  p.min_value = 0.0;
  p.rate.reset();  // the PPA rate certifies the operator residual only
  p.eps_star.reset();
  p.modulus = modulus_weak_sharp(linear_modulus(1.0));
  p.validate();
  return p;
}

/// Variational inequality over a box with an affine map A(x) = M x + q.
/// The residual min{0, inf_y <A(x), y - x>} has a closed form; the zero-set
/// oracle scans a fine grid (dimension <= 3).
inline ProblemInstance instance_vi_box(std::vector<std::vector<double>> M,
                                       Vector q, const ConvexSet& box,
                                       Vector x0,
                                       std::optional<double> lipschitz = {}) {
  const std::size_t n = x0.dim();
  if (box.kind() != ConvexSet::Kind::box || box.dim() != n ||
      M.size() != n || q.dim() != n) {
    throw std::invalid_argument("instance_vi_box: inconsistent shapes");
  }
  for (const auto& row : M) {
    if (row.size() != n) {
      throw std::invalid_argument("instance_vi_box: M must be n x n");
    }
  }
  if (n > 3) {
    throw std::invalid_argument("instance_vi_box: grid oracle needs dim <= 3");
  }
  auto apply_A = [M, q](const Vector& x) {
    std::vector<double> out(x.dim(), 0.0);
    for (std::size_t i = 0; i < x.dim(); ++i) {
      for (std::size_t j = 0; j < x.dim(); ++j) out[i] += M[i][j] * x[j];
      out[i] += q[i];
    }
    return Vector(std::move(out));
  };
  const Vector lo = box.lo(), hi = box.hi();
  auto residual = [apply_A, lo, hi](const Vector& x) {
    const Vector a = apply_A(x);
    double inf = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      inf += std::min(a[i] * (lo[i] - x[i]), a[i] * (hi[i] - x[i]));
    }
    return std::min(0.0, inf);
  };

  // Solution set by grid scan.
  const int steps = n == 3 ? 40 : 80;
  std::vector<Vector> solutions;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
      coords[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / steps;
    }
    Vector g{std::vector<double>(coords)};
    if (std::fabs(residual(g)) <= 1e-9) solutions.push_back(std::move(g));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++idx[i] <= steps) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  if (solutions.empty()) {
    throw std::runtime_error("instance_vi_box: no solution found on the grid");
  }

  double L;
  if (lipschitz) {
    L = *lipschitz;
  } else {
    bool diagonal = true;
    double maxd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && M[i][j] != 0.0) diagonal = false;
      }
      maxd = std::max(maxd, std::fabs(M[i][i]));
    }
    if (!diagonal || maxd == 0.0) {
      throw std::invalid_argument(
          "instance_vi_box: supply a Lipschitz constant for non-diagonal M");
    }
    L = maxd;
  }

  ProblemInstance p;
  p.name = "vi_box";
  p.dimension = n;
  p.residual_kind = ResidualKind::equilibrium;
  p.residual = residual;
  p.zero_distance = [solutions](const Vector& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& s : solutions) best = std::min(best, distance(x, s));
    return best;
  };
  p.reference_zero = solutions.front();
  for (const Vector& s : solutions) {
    if (distance(s, x0) < distance(p.reference_zero, x0)) p.reference_zero = s;
  }
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);

  p.recipe.driver = DriverKind::picard;
  p.recipe.operators = {compose(
      {projection_operator(box, "P_box"), gradient_step(apply_A, L, n)})};
  p.recipe.residual_monotone_expected = false;  // equilibrium residual
  p.recipe.default_steps = 40;
  p.validate();
  return p;
}

/// Gradient descent on f(x) = 1/2 x^T Q x for diagonal PSD Q with constant
/// step 1/L. Bundles the closed-form rate; when Q is positive definite the
/// strong-accretivity modulus psi(eps)/L with psi = lambda_min * eps.
inline ProblemInstance instance_grad_quadratic(std::vector<double> q_diag,
                                               Vector x0,
                                               std::optional<double> lipschitz = {}) {
  const std::size_t n = x0.dim();
  if (q_diag.size() != n) {
    throw std::invalid_argument("instance_grad_quadratic: Q/x0 size mismatch");
  }
  double lmax = 0.0, lmin = std::numeric_limits<double>::infinity();
  for (double qi : q_diag) {
    if (qi < 0.0) {
      throw std::invalid_argument("instance_grad_quadratic: Q must be PSD");
    }
    lmax = std::max(lmax, qi);
    lmin = std::min(lmin, qi);
  }
  if (lmax == 0.0) {
    throw std::invalid_argument("instance_grad_quadratic: Q is zero");
  }
  const double L = lipschitz.value_or(lmax);
  if (!(L >= lmax)) {
    throw std::invalid_argument(
        "instance_grad_quadratic: L must dominate lambda_max");
  }

  auto grad = [q_diag](const Vector& x) {
    std::vector<double> out(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) out[i] = q_diag[i] * x[i];
    return Vector(std::move(out));
  };

  ProblemInstance p;
  p.name = "grad_quadratic";
  p.dimension = n;
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [grad, L](const Vector& x) { return norm(grad(x)) / L; };
  p.zero_distance = [q_diag](const Vector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      if (q_diag[i] > 0.0) s += x[i] * x[i];
    }
    return std::sqrt(s);
  };
  std::vector<double> zc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (q_diag[i] == 0.0) zc[i] = x0[i];  // null-space coordinates persist
  }
  p.reference_zero = Vector(std::move(zc));
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  p.rate = rate_gradient_descent(p.bound_b);
  if (lmin > 0.0) {
    p.modulus = modulus_strongly_accretive(linear_modulus(lmin), 1.0 / L);
    p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
  }

  p.recipe.driver = DriverKind::gradient_descent;
  p.recipe.gradient = grad;
  p.recipe.lipschitz = L;
  p.recipe.residual_monotone_expected = true;
  p.recipe.default_steps = 40;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Specker-style demo
// ---------------------------------------------------------------------------

/// Nondecreasing rational sequence in [0, 1] driving the demo map.
struct SpeckerSequence {
  enum class Kind { constant, staircase, list };
  Kind kind = Kind::constant;
  double value = 0.5;           // constant
  int period = 5;               // staircase: a_n = 1 - 2^{-floor(n/period)}
  std::vector<double> values;   // list

  static SpeckerSequence constant_seq(double a) {
    SpeckerSequence s;
    s.kind = Kind::constant;
    s.value = a;
    return s;
  }
  static SpeckerSequence staircase_seq(int period = 5) {
    SpeckerSequence s;
    s.kind = Kind::staircase;
    s.period = period;
    return s;
  }
  static SpeckerSequence list_seq(std::vector<double> v) {
    SpeckerSequence s;
    s.kind = Kind::list;
    s.values = std::move(v);
    return s;
  }

  double term(int n) const {
    switch (kind) {
      case Kind::constant:
        return value;
      case Kind::staircase:
        return 1.0 - std::pow(2.0, -static_cast<double>(n / period));
      case Kind::list:
        return values[std::min<std::size_t>(n, values.size() - 1)];
    }
    throw std::logic_error("SpeckerSequence: bad kind");
  }
};

/// T(x) = (x + f(x))/2 with f the truncated weighted max-series. The tail
/// beyond the truncation index N is absorbed at a_N (renormalized weights),
/// which keeps T firmly nonexpansive with Fix T = [a_N, 1] and truncation
/// error at most 2^{-N}. Demo only: no certified modulus exists in general.
inline ProblemInstance instance_specker_demo(const SpeckerSequence& a_seq,
                                             int truncation_N = 40,
                                             double x0 = 0.0) {
  if (truncation_N < 1) {
    throw std::invalid_argument("instance_specker_demo: N must be >= 1");
  }
  std::vector<double> as(static_cast<std::size_t>(truncation_N) + 1);
  std::vector<double> ws(as.size());
  for (int n = 0; n <= truncation_N; ++n) {
    as[static_cast<std::size_t>(n)] = a_seq.term(n);
    ws[static_cast<std::size_t>(n)] = std::pow(2.0, -(n + 1));
    if (n > 0 && as[static_cast<std::size_t>(n)] <
                     as[static_cast<std::size_t>(n - 1)] - 1e-15) {
      throw std::invalid_argument(
          "instance_specker_demo: sequence must be nondecreasing");
    }
    if (as[static_cast<std::size_t>(n)] < 0.0 ||
        as[static_cast<std::size_t>(n)] > 1.0) {
      throw std::invalid_argument(
          "instance_specker_demo: sequence must lie in [0, 1]");
    }
  }
  ws.back() += std::pow(2.0, -(truncation_N + 1));  // absorb the tail at a_N
  const double a_top = as.back();

  auto T = [as, ws](const Vector& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < as.size(); ++i) {
      f += ws[i] * std::max(x[0], as[i]);
    }
    return Vector{0.5 * (x[0] + f)};
  };

  ProblemInstance p;
  p.name = "specker_demo";
  p.dimension = 1;
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [T](const Vector& x) { return std::fabs(x[0] - T(x)[0]); };
  p.zero_distance = [a_top](const Vector& x) {
    if (x[0] > 1.0) return x[0] - 1.0;
    return std::max(a_top - x[0], 0.0);
  };
  p.domain = [](const Vector& x) { return x[0] >= 0.0 && x[0] <= 1.0; };
  p.reference_zero = Vector{a_top};
  p.start = Vector{x0};
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  p.demo_no_certificate = true;

  p.recipe.driver = DriverKind::picard;
  p.recipe.operators = {
      Operator("specker_T", 1, OperatorClass::firmly_nonexpansive, T)};
  p.recipe.residual_monotone_expected = true;
  p.recipe.default_steps = 80;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Further catalog entries
// ---------------------------------------------------------------------------

/// Picard iteration of the linear contraction x -> k x.
inline ProblemInstance instance_contraction(double k, Vector x0) {
  ProblemInstance p;
  p.name = "contraction";
  p.dimension = x0.dim();
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [k](const Vector& x) { return (1.0 - k) * norm(x); };
  p.zero_distance = [](const Vector& x) { return norm(x); };
  p.reference_zero = Vector(x0.dim(), 0.0);
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  p.modulus = modulus_contraction(k);
  p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
  p.recipe.driver = DriverKind::picard;
  const std::size_t dim = p.dimension;
  p.recipe.operators = {Operator("k*Id", dim, OperatorClass::nonexpansive,
                                 [k](const Vector& x) { return k * x; })};
  p.recipe.residual_monotone_expected = true;
  p.validate();
  return p;
}

/// Metric projection onto the halfspace {x1 <= 0} in R^2 (a retraction).
inline ProblemInstance instance_halfspace_projection(Vector x0) {
  const ConvexSet H = ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0);
  ProblemInstance p;
  p.name = "halfspace_projection";
  p.dimension = 2;
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [H](const Vector& x) { return H.distance(x); };
  p.zero_distance = [H](const Vector& x) { return H.distance(x); };
  p.reference_zero = H.project(x0);
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  p.modulus = modulus_retraction();
  p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
  p.recipe.driver = DriverKind::picard;
  p.recipe.operators = {projection_operator(H, "P_H")};
  p.recipe.residual_monotone_expected = true;
  p.validate();
  return p;
}

/// Continuous orbital contraction on the triangle domain
/// {x >= 0, y >= 0, x + y <= 1}: f(x, y) = (x, (y + 1 - x)/2), whose fixed
/// point set is the segment {(t, 1 - t)}.
inline ProblemInstance instance_orbital_triangle(Vector x0) {
  auto T = [](const Vector& p) {
    return Vector{p[0], 0.5 * (p[1] + 1.0 - p[0])};
  };
  ProblemInstance p;
  p.name = "orbital_triangle";
  p.dimension = 2;
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [](const Vector& v) {
    return std::fabs(1.0 - v[0] - v[1]) / 2.0;
  };
  p.zero_distance = [](const Vector& v) {
    return std::fabs(1.0 - v[0] - v[1]) / std::sqrt(2.0);
  };
  p.domain = [](const Vector& v) {
    return v[0] >= 0.0 && v[1] >= 0.0 && v[0] + v[1] <= 1.0;
  };
  p.reference_zero = Vector{x0[0], 1.0 - x0[0]};  // limit of the orbit
  p.start = std::move(x0);
  p.bound_b = std::max(0.5, distance(p.start, p.reference_zero));
  p.modulus = modulus_orbital_contraction(0.5);
  p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
  p.recipe.driver = DriverKind::picard;
  p.recipe.operators = {Operator("triangle_map", 2, OperatorClass::general, T)};
  p.validate();
  return p;
}

/// Douglas-Rachford for the two coordinate axes in R^2 (feasibility of two
/// lines at a right angle): T = R_A R_B with A, B the normal cones, which
/// is -Id, so the Mann iteration with lambda = 1/2 lands on the unique
/// intersection point immediately. The Hoelder modulus (mu, gamma) is a
/// user-supplied input; (1, 1) is exact for this pair.
inline ProblemInstance instance_dr_two_lines(Vector x0, double mu = 1.0,
                                             double holder_gamma = 1.0) {
  const ConvexSet C1 = ConvexSet::hyperplane(Vector{0.0, 1.0}, 0.0);  // x-axis
  const ConvexSet C2 = ConvexSet::hyperplane(Vector{1.0, 0.0}, 0.0);  // y-axis
  const Operator JB = projection_operator(C1, "P_C1");
  const Operator JA = projection_operator(C2, "P_C2");
  const Operator T = compose({reflected_resolvent(JA), reflected_resolvent(JB)});

  ProblemInstance p;
  p.name = "dr_two_lines";
  p.dimension = 2;
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [T](const Vector& x) { return distance(x, T(x)); };
  p.zero_distance = [](const Vector& x) { return norm(x); };
  p.reference_zero = Vector{0.0, 0.0};
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  p.modulus = modulus_holder(mu, holder_gamma);
  p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
  p.rate = rate_mann_cat0(
      theta_from_sequence(mann_weight_sequence(StepSequence::constant_seq(0.5)),
                          false),
      p.bound_b);
  p.recipe.driver = DriverKind::douglas_rachford;
  p.recipe.dr_resolvent_A = JA;
  p.recipe.dr_resolvent_B = JB;
  p.recipe.dr_gamma = 1.0;
  p.recipe.schedule = StepSequence::constant_seq(0.5);
  p.recipe.residual_monotone_expected = true;
  p.validate();
  return p;
}

/// Crombez averaged-projection iteration into the third quadrant
/// (halfspaces {x1 <= 0} and {x2 <= 0}, equal weights, relaxation 1).
/// The rate alpha* is user input, audited for dominance only.
inline ProblemInstance instance_crombez_quadrant(Vector x0) {
  const std::vector<ConvexSet> sets{
      ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0),
      ConvexSet::halfspace(Vector{0.0, 1.0}, 0.0)};
  ProblemInstance p;
  p.name = "crombez_quadrant";
  p.dimension = 2;
  p.residual_kind = ResidualKind::fixed_point;
  p.residual = [sets](const Vector& x) {
    return std::max(sets[0].distance(x), sets[1].distance(x));
  };
  p.zero_distance = [](const Vector& x) {
    const double a = std::max(x[0], 0.0);
    const double b = std::max(x[1], 0.0);
    return std::sqrt(a * a + b * b);
  };
  p.reference_zero = Vector{0.0, 0.0};
  p.start = std::move(x0);
  p.bound_b = detail::default_bound(p.start, p.reference_zero);
  // Orthogonal normals: rho(eps) = eps/2 is a sound metric-regularity
  // modulus (dist to the quadrant is at most sqrt(2) times the max).
  p.modulus = compose_with_metric_regularity(modulus_retraction(),
                                             linear_modulus(0.5));
  p.modulus_context = ModulusContext(p.reference_zero, p.bound_b);
  const double four_b1 = 2.0 * (p.bound_b + 1.0);
  p.rate = ceil_inv_rate(four_b1 * four_b1, 2.0);  // user-supplied alpha*
  p.recipe.driver = DriverKind::crombez;
  p.recipe.sets = sets;
  p.recipe.weights = {0.5, 0.5};
  p.recipe.relaxations = {1.0, 1.0};
  p.recipe.residual_monotone_expected = true;
  p.validate();
  return p;
}

/// Empirical modulus estimation over an instance's oracles.
inline Modulus estimate_modulus_empirical(const ProblemInstance& p,
                                          const ClosedBall& ball,
                                          const std::vector<double>& eps_grid,
                                          int samples, std::uint64_t seed) {
  return estimate_modulus_empirical(p.residual, p.zero_distance, ball,
                                    eps_grid, samples, seed, p.domain);
}

// ---------------------------------------------------------------------------
// The default catalog
// ---------------------------------------------------------------------------

inline std::vector<ProblemInstance> default_catalog() {
  std::vector<ProblemInstance> all;
  all.push_back(instance_contraction(0.5, Vector{1.0}));
  all.push_back(instance_halfspace_projection(Vector{2.0, 3.0}));
  all.push_back(instance_orbital_triangle(Vector{0.5, 0.1}));
  {
    ProblemInstance p = instance_grad_quadratic({1.0, 1.0}, Vector{0.8, -0.6});
    p.name = "grad_quadratic_identity";
    all.push_back(std::move(p));
  }
  {
    ProblemInstance p = instance_grad_quadratic({1.0, 0.0}, Vector{0.9, 0.4});
    p.name = "grad_quadratic_rank_deficient";
    all.push_back(std::move(p));
  }
  all.push_back(instance_best_approx_pair(
      ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0),
      ConvexSet::halfspace(Vector{-1.0, 0.0}, -1.0), Vector{-2.0, 5.0}));
  {
    const double s = std::sqrt(0.5);
    ProblemInstance p = instance_cfp_halfspaces(
        {ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0),
         ConvexSet::halfspace(Vector{s, s}, 0.0)},
        Vector{1.5, 1.0}, Vector{0.0, 0.0});
    p.name = "cfp_two_halfspaces";
    all.push_back(std::move(p));
  }
  all.push_back(
      instance_min_norm(1, Vector{2.3}, StepSequence::constant_seq(1.0)));
  {
    ProblemInstance p = instance_min_norm(2, Vector{1.8, -1.5},
                                          StepSequence::constant_seq(1.0));
    p.name = "min_norm_ppa_r2";
    all.push_back(std::move(p));
  }
  all.push_back(instance_min_norm_sharp(1, Vector{2.3},
                                        StepSequence::constant_seq(1.0)));
  {
    ProblemInstance p = instance_vi_box(
        {{1.0, 0.0}, {0.0, 1.0}}, Vector{0.0, 0.0},
        ConvexSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0}),
        Vector{0.9, -0.7});
    p.name = "vi_box_identity";
    all.push_back(std::move(p));
  }
  all.push_back(instance_dr_two_lines(Vector{2.0, 1.0}));
  all.push_back(instance_crombez_quadrant(Vector{2.0, 2.0}));
  all.push_back(instance_specker_demo(SpeckerSequence::staircase_seq(5), 40));
  return all;
}

inline const ProblemInstance& find_instance(
    const std::vector<ProblemInstance>& catalog, const std::string& name) {
  for (const ProblemInstance& p : catalog) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown catalog instance: " + name);
}

}  // namespace fejer
