#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fejer/operators.hpp"

using namespace fejer;
using Catch::Matchers::WithinAbs;

namespace {

// 1-D grid-minimization oracle for Prox_{gamma f}: argmin over a fine grid
// of f(y) + ||x - y||^2 / (2 gamma).
double prox_oracle_1d(const std::function<double(double)>& f, double gamma,
                      double x) {
  double best_y = -5.0, best_v = std::numeric_limits<double>::infinity();
  for (double y = -5.0; y <= 5.0; y += 1e-4) {
    const double v = f(y) + (x - y) * (x - y) / (2.0 * gamma);
    if (v < best_v) {
      best_v = v;
      best_y = y;
    }
  }
  return best_y;
}

}  // namespace

TEST_CASE("project") {
  const ConvexSet H = ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0);
  CHECK(project(H, Vector{2.0, 3.0}) == Vector{0.0, 3.0});
  CHECK(project(H, Vector{-1.0, 2.0}) == Vector{-1.0, 2.0});

  const ConvexSet B = ConvexSet::box(Vector{0.0, 0.0}, Vector{1.0, 1.0});
  CHECK(project(B, Vector{-1.0, 0.5}) == Vector{0.0, 0.5});

  const ConvexSet S = ConvexSet::l2_ball(Vector{0.0, 0.0}, 1.0);
  const Vector p = project(S, Vector{3.0, 4.0});
  CHECK_THAT(p[0], WithinAbs(0.6, 1e-15));
  CHECK_THAT(p[1], WithinAbs(0.8, 1e-15));

  SECTION("projection inequality and idempotence on samples") {
    SplitMix64 rng(21);
    const ClosedBall ball(Vector{0.0, 0.0}, 3.0);
    const std::vector<ConvexSet> sets{
        H, B, S, ConvexSet::hyperplane(Vector{1.0, -1.0}, 0.5),
        ConvexSet::affine_subspace(Vector{1.0, 0.0}, {Vector{2.0, 1.0}})};
    for (const ConvexSet& set : sets) {
      for (int i = 0; i < 300; ++i) {
        const Vector x = sample_in_ball(ball, rng);
        const Vector y = set.project(sample_in_ball(ball, rng));
        const Vector px = set.project(x);
        CHECK(squared_distance(x, px) + squared_distance(px, y) <=
              squared_distance(x, y) + kDefaultEta);
        CHECK(distance(set.project(px), px) <= kDefaultEta);
        CHECK(std::fabs(set.distance(x) - distance(x, px)) <= kDefaultEta);
      }
    }
  }

  SECTION("errors") {
    CHECK_THROWS_AS(project(H, Vector{1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(ConvexSet::halfspace(Vector{0.0, 0.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConvexSet::box(Vector{1.0}, Vector{0.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("prox") {
  SECTION("norm in R^1 against the grid oracle") {
    const Vector got = prox(ProxFn::norm_fn(), 1.0, Vector{2.3});
    CHECK_THAT(got[0], WithinAbs(1.3, 1e-12));
    const double oracle =
        prox_oracle_1d([](double y) { return std::fabs(y); }, 1.0, 2.3);
    CHECK_THAT(got[0], WithinAbs(oracle, 1e-3));
  }
  SECTION("indicator prox is the projection") {
    const ConvexSet B = ConvexSet::box(Vector{0.0, 0.0}, Vector{1.0, 1.0});
    const Vector x{-1.0, 0.5};
    CHECK(prox(ProxFn::indicator(B), 2.0, x) == B.project(x));
  }
  SECTION("half squared norm against the grid oracle") {
    const Vector got = prox(ProxFn::quadratic(Vector{0.0, 0.0}), 1.0,
                            Vector{2.0, 0.0});
    CHECK(got == Vector{1.0, 0.0});
    const double oracle =
        prox_oracle_1d([](double y) { return 0.5 * y * y; }, 1.0, 2.0);
    CHECK_THAT(got[0], WithinAbs(oracle, 1e-3));
  }
  SECTION("norm prox shrinks to zero inside the threshold") {
    CHECK(prox(ProxFn::norm_fn(), 1.0, Vector{0.5}) == Vector{0.0});
  }
  CHECK_THROWS_AS(prox(ProxFn::norm_fn(), 0.0, Vector{1.0}),
                  std::invalid_argument);
}

TEST_CASE("reflected_resolvent") {
  SECTION("identity resolvent reflects to the identity") {
    const Operator id("Id", 2, OperatorClass::firmly_nonexpansive,
                      [](const Vector& x) { return x; });
    const Operator R = reflected_resolvent(id);
    CHECK(R(Vector{1.0, 2.0}) == Vector{1.0, 2.0});
  }
  SECTION("projection onto the x-axis reflects across it") {
    const ConvexSet line = ConvexSet::hyperplane(Vector{0.0, 1.0}, 0.0);
    const Operator R = reflected_resolvent(projection_operator(line));
    CHECK(R(Vector{1.0, 2.0}) == Vector{1.0, -2.0});
  }
  SECTION("prox of the norm: 2 max(|x|-1, 0) sign(x) - x") {
    const Operator J = prox_operator(ProxFn::norm_fn(), 1.0, 1);
    const Operator R = reflected_resolvent(J);
    const double x = 0.5;
    const double oracle = 2.0 * std::max(std::fabs(x) - 1.0, 0.0) *
                              (x >= 0 ? 1.0 : -1.0) -
                          x;
    CHECK_THAT(R(Vector{x})[0], WithinAbs(oracle, 1e-15));
    CHECK_THAT(R(Vector{x})[0], WithinAbs(-0.5, 1e-15));
  }
  SECTION("fixed points coincide with those of J on samples") {
    const ConvexSet line = ConvexSet::hyperplane(Vector{0.0, 1.0}, 0.0);
    const Operator J = projection_operator(line);
    const Operator R = reflected_resolvent(J);
    SplitMix64 rng(31);
    const ClosedBall ball(Vector{0.0, 0.0}, 2.0);
    for (int i = 0; i < 200; ++i) {
      const Vector x = sample_in_ball(ball, rng);
      const bool fix_r = distance(R(x), x) <= kDefaultEta;
      const bool fix_j = distance(J(x), x) <= kDefaultEta;
      CHECK(fix_r == fix_j);
    }
  }
  SECTION("requires a firmly nonexpansive declaration") {
    const Operator T("2x", 1, OperatorClass::nonexpansive,
                     [](const Vector& x) { return 2.0 * x; });
    CHECK_THROWS_AS(reflected_resolvent(T), std::invalid_argument);
  }
}

TEST_CASE("compose") {
  const ConvexSet U = ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0);
  const ConvexSet V = ConvexSet::halfspace(Vector{-1.0, 0.0}, -1.0);
  SECTION("two projections, right to left") {
    const Operator T = compose({projection_operator(U, "P_U"),
                                projection_operator(V, "P_V")});
    CHECK(T(Vector{-2.0, 5.0}) == Vector{0.0, 5.0});
    CHECK(T.declared_class() == OperatorClass::nonexpansive);
  }
  SECTION("singleton composition") {
    const Operator id("Id", 1, OperatorClass::nonexpansive,
                      [](const Vector& x) { return x; });
    CHECK(compose({id})(Vector{3.0}) == Vector{3.0});
  }
  SECTION("two reflections make a rotation with fixed point 0") {
    const ConvexSet l1 = ConvexSet::hyperplane(Vector{0.0, 1.0}, 0.0);
    const ConvexSet l2 = ConvexSet::hyperplane(Vector{1.0, -1.0}, 0.0);
    const Operator T = compose({reflected_resolvent(projection_operator(l1)),
                                reflected_resolvent(projection_operator(l2))});
    // reflect across y = x, then across y = 0: (a, b) -> (b, -a)
    const Vector out = T(Vector{1.0, 2.0});
    CHECK_THAT(out[0], WithinAbs(2.0, 1e-12));
    CHECK_THAT(out[1], WithinAbs(-1.0, 1e-12));
    SplitMix64 rng(32);
    const ClosedBall ball(Vector{0.0, 0.0}, 2.0);
    for (int i = 0; i < 200; ++i) {
      const Vector x = sample_in_ball(ball, rng);
      if (distance(T(x), x) <= kDefaultEta) CHECK(norm(x) <= 1e-6);
    }
  }
  CHECK_THROWS_AS(compose({}), std::invalid_argument);
}

TEST_CASE("convex_combination") {
  const ConvexSet H1 = ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0);
  const ConvexSet H2 = ConvexSet::halfspace(Vector{0.0, 1.0}, 0.0);
  SECTION("degenerate single set is the projection") {
    const Operator T =
        convex_combination({projection_operator(H1)}, {1.0}, {1.0});
    CHECK(T(Vector{2.0, 3.0}) == H1.project(Vector{2.0, 3.0}));
  }
  SECTION("two halfspaces averaged") {
    const Operator T = convex_combination(
        {projection_operator(H1), projection_operator(H2)}, {0.5, 0.5},
        {1.0, 1.0});
    CHECK(T(Vector{2.0, 2.0}) == Vector{1.0, 1.0});
  }
  SECTION("lambda_1 < 2 is enforced") {
    CHECK_THROWS_AS(
        convex_combination({projection_operator(H1), projection_operator(H2)},
                           {0.3, 0.7}, {2.0, 2.0}),
        std::invalid_argument);
  }
  SECTION("weights must sum to one") {
    CHECK_THROWS_AS(
        convex_combination({projection_operator(H1), projection_operator(H2)},
                           {0.5, 0.4}, {1.0, 1.0}),
        std::invalid_argument);
  }
}

TEST_CASE("gradient_step") {
  SECTION("exact one-step minimizer of 0.5||x||^2") {
    const Operator T = gradient_step([](const Vector& x) { return x; }, 1.0, 2);
    CHECK(T(Vector{3.0, 0.0}) == Vector{0.0, 0.0});
    CHECK(T.declared_class() == OperatorClass::firmly_nonexpansive);
  }
  SECTION("f = x^2/4 with conservative L = 1") {
    const Operator T = gradient_step(
        [](const Vector& x) { return 0.5 * x; }, 1.0, 1);
    CHECK(T(Vector{2.0}) == Vector{1.0});
  }
  SECTION("fixed points are the zeros of the gradient") {
    const Operator T = gradient_step(
        [](const Vector& x) { return Vector{x[0], 4.0 * x[1]}; }, 4.0, 2);
    SplitMix64 rng(33);
    const ClosedBall ball(Vector{0.0, 0.0}, 2.0);
    for (int i = 0; i < 200; ++i) {
      const Vector x = sample_in_ball(ball, rng);
      const bool fix = distance(T(x), x) <= kDefaultEta;
      const bool zero = norm(Vector{x[0], 4.0 * x[1]}) <= 4.0 * kDefaultEta;
      CHECK(fix == zero);
    }
  }
  CHECK_THROWS_AS(gradient_step([](const Vector& x) { return x; }, 0.0, 1),
                  std::invalid_argument);
}

TEST_CASE("classify_by_sampling") {
  const ClosedBall ball(Vector{0.0, 0.0}, 2.0);
  SECTION("projection onto a halfspace is firmly nonexpansive") {
    const Operator P =
        projection_operator(ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0));
    const ClassificationReport rep = classify_by_sampling(P, ball, 500, 0);
    CHECK(rep.nonexpansive_pass());
    CHECK(rep.firmly_pass());
  }
  SECTION("x -> 2x fails nonexpansivity with a witness pair") {
    const Operator T("2x", 2, OperatorClass::general,
                     [](const Vector& x) { return 2.0 * x; });
    const ClassificationReport rep = classify_by_sampling(T, ball, 500, 0);
    CHECK_FALSE(rep.nonexpansive_pass());
    // the witness pair reproduces the violation
    const double viol = distance(T(rep.witness_x), T(rep.witness_y)) -
                        distance(rep.witness_x, rep.witness_y);
    CHECK(viol > kDefaultEta);
  }
  SECTION("quasi-nonexpansivity against supplied fixed points") {
    const Operator P =
        projection_operator(ConvexSet::halfspace(Vector{1.0, 0.0}, 0.0));
    const ClassificationReport rep = classify_by_sampling(
        P, ball, 300, 0, {Vector{0.0, 0.0}, Vector{-1.0, 1.0}});
    REQUIRE(rep.worst_quasi.has_value());
    CHECK(rep.quasi_pass());
  }
}
