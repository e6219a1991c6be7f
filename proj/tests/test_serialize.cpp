#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <fstream>

#include "fejer/catalog.hpp"
#include "fejer/serialize.hpp"

using namespace fejer;

namespace {

void check_bitwise_equal_eval(const Modulus& a, const Modulus& b) {
  for (double eps : modulus_probe_grid()) {
    const double va = a(eps);
    const double vb = b(eps);
    CHECK(std::memcmp(&va, &vb, sizeof(double)) == 0);
  }
}

}  // namespace

TEST_CASE("modulus tree round trip") {
  const std::vector<Modulus> trees{
      linear_modulus(0.25),
      power_modulus(2.0, 3.0),
      modulus_holder(2.0, 2.0),
      modulus_ppa_weak_sharp(linear_modulus(1.0), linear_modulus(1.0), 3.0),
      convert_f_to_resolvent(linear_modulus(1.0), linear_modulus(1.0),
                             ModulusContext(Vector{0.0}, 1.0, 1.0)),
      convert_resolvent_to_subdiff(power_modulus(1.0, 2.0), 2.0, 1.5, 1.0),
      table_modulus({{0.1, 0.01}, {1.0, 0.5}, {2.0, 0.5}}),
      modulus_from_convergence_rate(ceil_inv_rate(2.0, 2.0)),
      modulus_from_convergence_rate(
          plus_const_rate(1, compose_divergence_rate(
                                 theta_from_sequence(
                                     StepSequence::constant_seq(1.0), true),
                                 ceil_inv_rate(18.0, 2.0)))),
  };
  for (const Modulus& m : trees) {
    const json j = to_json(m);
    const Modulus back = modulus_from_json(j);
    check_bitwise_equal_eval(m, back);
    CHECK(to_json(back) == j);  // canonical form is stable
  }
}

TEST_CASE("rate tree round trip") {
  const std::vector<RateFn> trees{
      const_rate(7),
      ceil_inv_rate(4.0, 2.0),
      rate_alternating_projections(1.0, 2.0),
      rate_gradient_descent(1.0),
      rate_ppa(theta_from_sequence(StepSequence::constant_seq(1.0), true), 3.0),
      compose_divergence_rate(
          theta_from_sequence(
              StepSequence::list_seq(std::vector<double>(16, 1.0)), false),
          ceil_inv_rate(1.0, 1.0)),
      dist_rate(ceil_inv_rate(1.0, 1.0), linear_modulus(0.5)),
      table_rate({{0.5, 11}, {1.0, 3}}),
  };
  for (const RateFn& r : trees) {
    const json j = to_json(r);
    const RateFn back = rate_from_json(j);
    for (double eps : {2.0, 1.0, 0.5, 0.2, 0.1}) {
      CHECK(back(eps) == r(eps));
    }
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("step sequence and convex set round trips") {
  for (const StepSequence& s :
       {StepSequence::constant_seq(0.5), StepSequence::list_seq({1.0, 0.5}),
        StepSequence::power_law_seq(2.0, 1.0)}) {
    const StepSequence back = step_sequence_from_json(to_json(s));
    CHECK(to_json(back) == to_json(s));
    for (std::int64_t k : {0, 1}) {
      if (s.kind == StepSequence::Kind::list &&
          static_cast<std::size_t>(k) >= s.values.size()) {
        continue;
      }
      CHECK(back.term(k) == s.term(k));
    }
  }
  const std::vector<ConvexSet> sets{
      ConvexSet::halfspace(Vector{1.0, 0.5}, 0.25),
      ConvexSet::hyperplane(Vector{0.0, 1.0}, -1.0),
      ConvexSet::box(Vector{-1.0, 0.0}, Vector{1.0, 2.0}),
      ConvexSet::l2_ball(Vector{0.5, 0.5}, 2.0),
      ConvexSet::affine_subspace(Vector{1.0, 0.0}, {Vector{1.0, 1.0}}),
  };
  SplitMix64 rng(17);
  const ClosedBall ball(Vector{0.0, 0.0}, 3.0);
  for (const ConvexSet& s : sets) {
    const ConvexSet back = convex_set_from_json(to_json(s));
    CHECK(to_json(back) == to_json(s));
    for (int i = 0; i < 100; ++i) {
      const Vector x = sample_in_ball(ball, rng);
      CHECK(back.project(x) == s.project(x));
    }
  }
}

TEST_CASE("problem config round trip") {
  for (const json& cfg : default_catalog_configs()) {
    INFO(cfg.at("name").get<std::string>());
    const ProblemInstance p = build_problem(cfg);
    // A written config re-parses to an identical instance: identical
    // canonical dump, and identical trace on a short run.
    const json reparsed = json::parse(p.config_json);
    CHECK(reparsed == cfg);
    const ProblemInstance q = build_problem(reparsed);
    CHECK(q.name == p.name);
    CHECK(q.bound_b == p.bound_b);
    CHECK(q.reference_zero == p.reference_zero);
    const Trace tp = run_recipe(p, 10);
    const Trace tq = run_recipe(q, 10);
    for (std::size_t k = 0; k < tp.size(); ++k) {
      CHECK(tp.records[k].x == tq.records[k].x);
    }
  }
  SECTION("driver mismatch and unknown kinds are rejected") {
    json cfg = default_catalog_configs().front();
    cfg["recipe"]["driver"] = "ppa";
    CHECK_THROWS_AS(build_problem(cfg), std::invalid_argument);
    cfg = default_catalog_configs().front();
    cfg["kind"] = "nonsense";
    CHECK_THROWS_AS(build_problem(cfg), std::invalid_argument);
  }
}

TEST_CASE("serialized catalog matches the programmatic catalog") {
  const std::vector<ProblemInstance> a = default_catalog();
  const std::vector<ProblemInstance> b = serialized_catalog();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    INFO(a[i].name);
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].bound_b == b[i].bound_b);
    CHECK(a[i].reference_zero == b[i].reference_zero);
    CHECK(a[i].start == b[i].start);
    CHECK(a[i].eps_star == b[i].eps_star);
    // certified values agree where present
    if (a[i].rate) {
      REQUIRE(b[i].rate.has_value());
      CHECK((*a[i].rate)(0.5) == (*b[i].rate)(0.5));
    }
    if (a[i].modulus) {
      REQUIRE(b[i].modulus.has_value());
      const double va = (*a[i].modulus)(0.5);
      const double vb = (*b[i].modulus)(0.5);
      CHECK(std::memcmp(&va, &vb, sizeof(double)) == 0);
    }
    const Trace ta = run_recipe(a[i], 8);
    const Trace tb = run_recipe(b[i], 8);
    for (std::size_t k = 0; k < ta.size(); ++k) {
      CHECK(ta.records[k].x == tb.records[k].x);
    }
  }
}

TEST_CASE("shipped config files build the catalog entries") {
  for (const json& cfg : default_catalog_configs()) {
    const std::string name = cfg.at("name").get<std::string>();
    const std::string path =
        std::string(FEJER_SOURCE_DIR) + "/configs/" + name + ".json";
    std::ifstream in(path);
    REQUIRE(in.good());
    const json loaded = json::parse(in);
    CHECK(loaded == cfg);
    CHECK(build_problem(loaded).name == name);
  }
}

TEST_CASE("config certificate overrides") {
  json cfg = default_catalog_configs()[7];  // min_norm_ppa
  REQUIRE(cfg.at("name") == "min_norm_ppa");
  SECTION("modulus, rate and eps_star supplied inline replace the bundle") {
    cfg["modulus"] = to_json(linear_modulus(0.25));
    cfg["rate"] = to_json(const_rate(5));
    cfg["eps_star"] = 0.5;
    const ProblemInstance p = build_problem(cfg);
    REQUIRE(p.modulus.has_value());
    CHECK((*p.modulus)(1.0) <= 0.25);
    CHECK((*p.rate)(0.01) == 5);
    CHECK(*p.eps_star == 0.5);
  }
  SECTION("b override is validated against the start point") {
    cfg["b"] = 0.5;  // d(x0, z) = 2.3 > 0.5
    CHECK_THROWS_AS(build_problem(cfg), std::invalid_argument);
  }
  SECTION("steps override lands in the recipe") {
    cfg["recipe"]["steps"] = 7;
    CHECK(build_problem(cfg).recipe.default_steps == 7);
  }
}

TEST_CASE("audit report and trace JSON") {
  const ProblemInstance p = build_problem(default_catalog_configs()[7]);
  REQUIRE(p.name == "min_norm_ppa");
  SECTION("trace JSON carries metadata and omits absent columns") {
    const Trace t = run_recipe_with_metadata(p, 5);
    const json j = to_json(t);
    CHECK(j.at("source") == "min_norm_ppa");
    CHECK(j.at("instance_hash").get<std::string>().size() == 16);
    CHECK(j.at("records").size() == 6);
    CHECK(j["records"][1].contains("u_norm"));
    CHECK_FALSE(j["records"][0].contains("u_norm"));  // no incoming step
    CHECK_FALSE(j["records"][1].contains("shadow"));
    // doubles survive dump + reparse exactly
    const double want = t.records[1].x[0];
    const double got =
        json::parse(j.dump())["records"][1]["x"][0].get<double>();
    CHECK(std::memcmp(&got, &want, sizeof(double)) == 0);
  }
  SECTION("audit report JSON shape") {
    const AuditReport r = check_fejer(run_recipe(p, 6), p.reference_zero);
    const json j = to_json(r);
    CHECK(j.at("check") == "fejer:min_norm_ppa");
    CHECK(j.at("pass") == true);
    CHECK(j.at("params").at("samples") == 2000);
  }
  SECTION("hash is deterministic") {
    CHECK(fnv1a_hex("abc") == fnv1a_hex("abc"));
    CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
  }
}
