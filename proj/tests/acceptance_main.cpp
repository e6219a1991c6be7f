// Acceptance suite: one pass/fail line per criterion. Every tolerance is
// pinned here; the binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fejer/catalog.hpp"
#include "fejer/serialize.hpp"
#include "fejer/verify.hpp"

using namespace fejer;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

// Modulus values: direct arithmetic up to one ulp of conservative rounding
// (never above the exact value by more than one ulp).
bool mod_ok(double got, double expected) {
  const double lo = std::nextafter(std::nextafter(expected, 0.0), 0.0);
  const double hi = std::nextafter(expected, 2.0 * expected + 1.0);
  return got >= lo && got <= hi;
}

// Rate values: hand arithmetic, possibly one extra step from rounding up.
bool rate_ok(std::int64_t got, std::int64_t expected) {
  return got == expected || got == expected + 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Criterion criterion1_formula_fidelity() {
  Criterion c{"C1 formula fidelity", true, ""};

  {  // f -> resolvent: min{rho(phi(eps)/2), gamma phi(eps)/(2r), 1}
    const Modulus m1 = convert_f_to_resolvent(
        linear_modulus(1.0), linear_modulus(1.0),
        ModulusContext(Vector{0.0}, 1.0, 1.0));
    c.require(mod_ok(m1(0.5), 0.25), "f_to_resolvent at 0.5");
    const Modulus m2 = convert_f_to_resolvent(
        linear_modulus(1.0), linear_modulus(1.0),
        ModulusContext(Vector{0.0}, 1.0, 4.0));
    c.require(mod_ok(m2(1.0), 0.5), "f_to_resolvent at 1.0, gamma=4");
    c.require(mod_ok(m1(8.0), 1.0), "f_to_resolvent clamp branch");
  }
  {  // resolvent -> f: phi(eps)^2 / (2 gamma)
    c.require(mod_ok(convert_resolvent_to_f(linear_modulus(1.0), 0.5)(1.0), 1.0),
              "resolvent_to_f at 1.0");
    c.require(
        mod_ok(convert_resolvent_to_f(linear_modulus(2.0), 2.0)(0.5), 0.25),
        "resolvent_to_f at 0.5");
    c.require(
        mod_ok(convert_resolvent_to_f(linear_modulus(2.0 / 3.0), 1.0)(1.0),
               (2.0 / 3.0) * (2.0 / 3.0) / 2.0),
        "resolvent_to_f resolvent modulus of x^2");
  }
  {  // resolvent -> subdifferential: (1/gamma) min{phi(eps/2), eps/2, r-r'}
    c.require(mod_ok(convert_resolvent_to_subdiff(linear_modulus(1.0), 1.0,
                                                  2.0, 1.0)(1.0),
                     0.5),
              "resolvent_to_subdiff at 1.0");
    c.require(mod_ok(convert_resolvent_to_subdiff(linear_modulus(1.0), 2.0,
                                                  1.1, 1.0)(4.0),
                     0.5 * std::min({2.0, 2.0, 1.1 - 1.0})),
              "resolvent_to_subdiff cap branch");
    c.require(mod_ok(convert_resolvent_to_subdiff(linear_modulus(4.0), 1.0,
                                                  10.0, 1.0)(0.2),
                     0.1),
              "resolvent_to_subdiff eps/2 branch");
  }
  {  // subdifferential -> resolvent: min{rho(gamma phi(eps)), 1}
    c.require(mod_ok(convert_subdiff_to_resolvent(linear_modulus(1.0),
                                                  linear_modulus(1.0), 1.0)(0.3),
                     0.3),
              "subdiff_to_resolvent at 0.3");
    c.require(mod_ok(convert_subdiff_to_resolvent(linear_modulus(1.0),
                                                  linear_modulus(0.5), 2.0)(1.0),
                     1.0),
              "subdiff_to_resolvent clamp");
    c.require(mod_ok(convert_subdiff_to_resolvent(linear_modulus(2.0),
                                                  linear_modulus(0.25), 1.0)(1.0),
                     0.5),
              "subdiff_to_resolvent at 1.0");
  }
  {  // modulus from a convergence rate: eps / (2 psi(eps/2))
    c.require(mod_ok(modulus_from_convergence_rate(const_rate(1))(1.0), 0.5),
              "from_rate constant rate");
    c.require(
        mod_ok(modulus_from_convergence_rate(ceil_inv_rate(1.0, 1.0))(0.5),
               0.0625),
        "from_rate ceil(1/eps)");
    c.require(
        mod_ok(modulus_from_convergence_rate(ceil_inv_rate(1.0, 2.0))(1.0),
               0.125),
        "from_rate ceil(1/eps^2)");
  }
  {  // semi-algebraic regularity: gamma by exact binomials, rho = (eps/c)^gamma / m
    c.require(semialgebraic_gamma(2, 2) == 4.0, "semialgebraic gamma(2,2)");
    c.require(semialgebraic_gamma(1, 1) == 1.0, "semialgebraic gamma(1,1)");
    c.require(semialgebraic_gamma(3, 1) == 1.0, "semialgebraic gamma(3,1)");
    c.require(
        mod_ok(modulus_metric_regularity_semialgebraic(2, 2, 2, 1.0)(1.0), 0.5),
        "semialgebraic rho(1), n=d=m=2");
    c.require(
        mod_ok(modulus_metric_regularity_semialgebraic(1, 1, 3, 1.0)(0.3), 0.1),
        "semialgebraic rho(0.3), m=3");
    c.require(
        mod_ok(modulus_metric_regularity_semialgebraic(3, 1, 1, 2.0)(1.0), 0.5),
        "semialgebraic rho(1), c=2");
  }
  {  // Alternating projections: floor((rho^2 + b^2)/eps^2) + 1
    const RateFn r = rate_alternating_projections(1.0, 2.0);
    c.require(rate_ok(r(0.5), 21), "altproj at 0.5");
    c.require(rate_ok(r(1.0), 6), "altproj at 1.0");
    c.require(rate_ok(rate_alternating_projections(0.0, 1.0)(1.0), 2),
              "altproj rho=0");
  }
  {  // Gradient descent: floor(32 (b+1)^2 / eps^2)
    const RateFn r = rate_gradient_descent(1.0);
    c.require(rate_ok(r(1.0), 128), "gd at 1.0");
    c.require(rate_ok(r(4.0), 8), "gd at 4.0");
    c.require(rate_ok(rate_gradient_descent(2.0)(2.0), 72), "gd b=2");
  }
  {  // Mann: theta(ceil(4 (b+1)^2 / eps^2)) with lambda = 1/2
    const RateOfDivergence theta = theta_from_sequence(
        mann_weight_sequence(StepSequence::constant_seq(0.5)), false);
    c.require(rate_ok(rate_mann_cat0(theta, 1.0)(2.0), 15), "mann at 2.0");
    c.require(rate_ok(rate_mann_cat0(theta, 0.5)(1.0), 35), "mann b=0.5");
    c.require(rate_ok(rate_mann_cat0(theta, 1.0)(4.0), 3), "mann at 4.0");
  }
  {  // PPA: theta(ceil(2 b^2 / eps^2)) + 1 with gamma = 1
    const RateOfDivergence theta =
        theta_from_sequence(StepSequence::constant_seq(1.0), true);
    c.require(rate_ok(rate_ppa(theta, 3.0)(1.0), 18), "ppa b=3");
    c.require(rate_ok(rate_ppa(theta, 1.0)(1.0), 2), "ppa b=1");
    c.require(rate_ok(rate_ppa(theta, 3.0)(3.0), 2), "ppa at 3.0");
  }
  return c;
}

Criterion criterion2_certificate_dominance(
    const std::vector<ProblemInstance>& catalog) {
  Criterion c{"C2 certificate dominance", true, ""};
  const auto t0 = std::chrono::steady_clock::now();
  const AuditParams params;  // grid {2, 1, 0.5, 0.2, 0.1, 0.05}
  for (const char* name :
       {"grad_quadratic_identity", "best_approx_pair", "cfp_two_halfspaces",
        "min_norm_ppa"}) {
    const ProblemInstance& p = find_instance(catalog, name);
    const AuditReport r =
        check_certificate_dominance(p, *p.rate, *p.modulus, params);
    c.require(r.pass, std::string(name) + ": " + r.witness);
  }
  const double elapsed = seconds_since(t0);
  c.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s >= 10s");
  std::ostringstream os;
  os << "4 instances, 6 eps each, " << elapsed << "s";
  if (c.detail.empty()) c.detail = os.str();
  return c;
}

Criterion criterion3_finite_termination(
    const std::vector<ProblemInstance>& catalog) {
  Criterion c{"C3 finite termination", true, ""};
  const auto t0 = std::chrono::steady_clock::now();
  for (const char* name : {"min_norm_ppa", "min_norm_ppa_r2"}) {
    const ProblemInstance& p = find_instance(catalog, name);
    c.require((*p.rate)(*p.eps_star) == 18,
              std::string(name) + ": certified index != 18");
    const Trace t = run_recipe(p, 20);
    // exactly constant (bitwise coordinates) from n = 3 onward
    for (std::size_t k = 3; k < t.size(); ++k) {
      for (std::size_t i = 0; i < p.dimension; ++i) {
        c.require(t.records[k].x[i] == t.records[3].x[i],
                  std::string(name) + ": moved after n=3");
      }
    }
    c.require(t.records[3].dist == 0.0, std::string(name) + ": nonzero limit");
    const AuditReport r = check_finite_termination(p);
    c.require(r.pass, std::string(name) + ": " + r.witness);
  }
  const double elapsed = seconds_since(t0);
  c.require(elapsed < 1.0, "runtime >= 1s");
  return c;
}

Criterion criterion4_soundness(const std::vector<ProblemInstance>& catalog) {
  Criterion c{"C4 modulus soundness", true, ""};
  const AuditParams params;  // 2000 samples, seed 0, default grid
  int pairs = 0;
  for (const ProblemInstance& p : catalog) {
    if (!p.modulus) continue;
    ++pairs;
    const AuditReport r = check_modulus_soundness(p, *p.modulus, params);
    c.require(r.pass, p.name + ": " + r.witness);
  }
  c.require(pairs >= 8, "too few certified pairs in the catalog");
  // injected fault: modulus inflated x10 on the quadratic instance fails
  // with a concrete witness
  const ProblemInstance& q = find_instance(catalog, "grad_quadratic_identity");
  const AuditReport bad =
      check_modulus_soundness(q, scale_modulus(10.0, *q.modulus), params);
  c.require(!bad.pass, "inflated modulus not rejected");
  c.require(bad.witness.find("sample") != std::string::npos,
            "inflated modulus: no witness");
  if (c.detail.empty()) {
    c.detail = std::to_string(pairs) + " certified pairs + 1 fault fixture";
  }
  return c;
}

Criterion criterion5_structural() {
  Criterion c{"C5 structural inequalities", true, ""};
  AuditParams params;
  params.samples = 10000;
  c.require(check_quadrilateral(2, 10000, params).pass, "def-CAT0 in R^2");
  c.require(check_quadrilateral(3, 10000, params).pass, "def-CAT0 in R^3");
  const std::vector<std::pair<std::string, ConvexSet>> kinds{
      {"halfspace", ConvexSet::halfspace(Vector{1.0, 0.5}, 0.25)},
      {"hyperplane", ConvexSet::hyperplane(Vector{0.5, -1.0}, 0.5)},
      {"box", ConvexSet::box(Vector{-1.0, -0.5}, Vector{0.5, 1.0})},
      {"ball", ConvexSet::l2_ball(Vector{0.25, -0.25}, 0.75)},
      {"affine",
       ConvexSet::affine_subspace(Vector{0.0, 1.0}, {Vector{1.0, 1.0}})},
  };
  const ClosedBall ball2(Vector{0.0, 0.0}, 3.0);
  for (const auto& [label, set] : kinds) {
    c.require(check_projection_inequality(set, ball2, 10000, params, label).pass,
              "eq-CAT0-proj for " + label);
  }
  const ClosedBall ball1(Vector{0.0}, 3.0);
  for (double gamma : {0.5, 1.0, 2.0}) {
    c.require(check_resolvent_inequality(ProxFn::norm_fn(), gamma, ball1,
                                         params, "norm")
                  .pass,
              "ineq-res norm, gamma=" + std::to_string(gamma));
    c.require(check_resolvent_inequality(ProxFn::quadratic(Vector{0.0, 0.0}),
                                         gamma, ball2, params, "half_sq")
                  .pass,
              "ineq-res half_sq, gamma=" + std::to_string(gamma));
  }
  if (c.detail.empty()) c.detail = "10^4 samples per inequality";
  return c;
}

Criterion criterion6_roundtrip() {
  Criterion c{"C6 conversion round trip on x^2", true, ""};
  const AuditParams params;
  const ClosedBall ball(Vector{0.0}, 1.0);
  auto res_f = [](const Vector& x) { return x[0] * x[0]; };
  auto res_J = [](const Vector& x) { return std::fabs(x[0] - x[0] / 3.0); };
  auto res_sub = [](const Vector& x) { return 2.0 * std::fabs(x[0]); };
  auto dist = [](const Vector& x) { return std::fabs(x[0]); };

  // sound resolvent modulus phi(eps) = 2 gamma eps / (1 + 2 gamma), gamma=1
  const double gamma = 1.0;
  const Modulus phi_res =
      linear_modulus(2.0 * gamma / (1.0 + 2.0 * gamma));
  c.require(check_modulus_soundness(res_J, dist, ball, phi_res, params,
                                    "resolvent input")
                .pass,
            "input resolvent modulus unsound");
  c.require(check_modulus_soundness(res_f, dist, ball,
                                    convert_resolvent_to_f(phi_res, gamma),
                                    params, "to f")
                .pass,
            "convert_resolvent_to_f unsound");
  c.require(
      check_modulus_soundness(
          res_sub, dist, ball,
          convert_resolvent_to_subdiff(phi_res, gamma, 2.0, 1.0), params,
          "to subdiff")
          .pass,
      "convert_resolvent_to_subdiff unsound");

  // phi(eps) = eps^2 for f, rho = Linear for the Lipschitz bound on the
  // probe ball, converted to the resolvent J(x) = x/3
  const double r = 1.0;
  const Modulus conv = convert_f_to_resolvent(
      power_modulus(1.0, 2.0), linear_modulus(1.0 / (2.0 * (r + 1.0))),
      ModulusContext(Vector{0.0}, r, gamma));
  c.require(
      check_modulus_soundness(res_J, dist, ball, conv, params, "to resolvent")
          .pass,
      "convert_f_to_resolvent unsound");
  return c;
}

Criterion criterion7_fejer(const std::vector<ProblemInstance>& catalog) {
  Criterion c{"C7 Fejer monotonicity", true, ""};
  int monotone_checked = 0;
  for (const ProblemInstance& p : catalog) {
    const Trace t = run_recipe(p);
    const AuditReport r = check_fejer(t, p.reference_zero);
    c.require(r.pass, p.name + ": " + r.witness);
    if (p.recipe.residual_monotone_expected) {
      ++monotone_checked;
      const AuditReport m = check_residual_monotone(t);
      c.require(m.pass, p.name + " residual: " + m.witness);
    }
  }
  if (c.detail.empty()) {
    c.detail = std::to_string(catalog.size()) + " traces, " +
               std::to_string(monotone_checked) + " residual-monotone";
  }
  return c;
}

Criterion criterion8_specker() {
  Criterion c{"C8 Specker demo", true, ""};
  const ProblemInstance p =
      instance_specker_demo(SpeckerSequence::staircase_seq(5), 40);
  const double limit = p.reference_zero[0];  // a_N = 1 - 2^{-8}
  const Trace t = run_recipe(p, 5 * 12 + 1);
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    c.require(t.records[k].x[0] <= t.records[k + 1].x[0] + 1e-15,
              "trace not nondecreasing at n=" + std::to_string(k));
    c.require(t.records[k].x[0] <= limit + 1e-12, "trace exceeds the limit");
  }
  // arbitrarily slow convergence: at n = 5K the trace is still further than
  // 2^-K from the fixed point set
  for (int K = 1; K <= 12; ++K) {
    const double d = t.records[static_cast<std::size_t>(5 * K)].dist;
    c.require(d > std::pow(2.0, -K),
              "dist at n=" + std::to_string(5 * K) + " already below 2^-" +
                  std::to_string(K));
  }
  if (c.detail.empty()) c.detail = "K = 1..12 horizons";
  return c;
}

}  // namespace

int main() {
  const std::vector<ProblemInstance> catalog = serialized_catalog();

  std::vector<Criterion> results;
  results.push_back(criterion1_formula_fidelity());
  results.push_back(criterion2_certificate_dominance(catalog));
  results.push_back(criterion3_finite_termination(catalog));
  results.push_back(criterion4_soundness(catalog));
  results.push_back(criterion5_structural());
  results.push_back(criterion6_roundtrip());
  results.push_back(criterion7_fejer(catalog));
  results.push_back(criterion8_specker());

  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.pass) ++failures;
    std::printf("[%s] %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.empty() ? "" : ": ", c.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}
