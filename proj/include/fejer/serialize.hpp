#pragma once

// JSON schema for the structured-document formats: modulus and rate trees,
// step sequences, convex sets, problem configurations, audit reports, and
// the trace mirror. Doubles rely on nlohmann's shortest round-trip dump, so
// a value re-parses to the identical bits.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fejer/iterations.hpp"
#include "fejer/moduli.hpp"
#include "fejer/operators.hpp"
#include "fejer/problems.hpp"
#include "fejer/rates.hpp"
#include "fejer/verify.hpp"

namespace fejer {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Step sequences and divergence rates
// ---------------------------------------------------------------------------

inline json to_json(const StepSequence& s) {
  switch (s.kind) {
    case StepSequence::Kind::constant:
      return {{"kind", "constant"}, {"value", s.value}};
    case StepSequence::Kind::list:
      return {{"kind", "list"}, {"values", s.values}};
    case StepSequence::Kind::power_law:
      return {{"kind", "power_law"}, {"coeff", s.coeff},
              {"exponent", s.exponent}};
  }
  throw std::logic_error("StepSequence: bad kind");
}

inline StepSequence step_sequence_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    return StepSequence::constant_seq(j.at("value").get<double>());
  }
  if (kind == "list") {
    return StepSequence::list_seq(j.at("values").get<std::vector<double>>());
  }
  if (kind == "power_law") {
    return StepSequence::power_law_seq(j.at("coeff").get<double>(),
                                       j.at("exponent").get<double>());
  }
  throw std::invalid_argument("step sequence: unknown kind '" + kind + "'");
}

inline json to_json(const RateOfDivergence& theta) {
  return {{"steps", to_json(theta.steps())}, {"squared", theta.squared()}};
}

inline RateOfDivergence divergence_from_json(const json& j) {
  return RateOfDivergence(step_sequence_from_json(j.at("steps")),
                          j.at("squared").get<bool>());
}

// ---------------------------------------------------------------------------
// Modulus and rate trees
// ---------------------------------------------------------------------------

inline json to_json(const Modulus& m);
inline json to_json(const RateFn& r);
inline Modulus modulus_from_json(const json& j);
inline RateFn rate_from_json(const json& j);

inline json to_json(const Modulus& m) {
  const ModulusNode& n = m.node();
  switch (n.kind) {
    case ModulusKind::linear:
      return {{"kind", "linear"}, {"c", n.a}};
    case ModulusKind::power:
      return {{"kind", "power"}, {"a", n.a}, {"p", n.p}};
    case ModulusKind::scale:
      return {{"kind", "scale"}, {"c", n.a}, {"inner", to_json(n.children[0])}};
    case ModulusKind::min_of: {
      json children = json::array();
      for (const Modulus& c : n.children) children.push_back(to_json(c));
      return {{"kind", "min"}, {"children", children}};
    }
    case ModulusKind::compose:
      return {{"kind", "compose"},
              {"outer", to_json(n.children[0])},
              {"inner", to_json(n.children[1])}};
    case ModulusKind::constant:
      return {{"kind", "const"}, {"c", n.a}};
    case ModulusKind::half_arg:
      return {{"kind", "half_arg"}, {"inner", to_json(n.children[0])}};
    case ModulusKind::table:
      return {{"kind", "table"}, {"points", n.points}};
    case ModulusKind::from_rate:
      return {{"kind", "from_rate"}, {"rate", to_json(RateFn(n.rate))}};
  }
  throw std::logic_error("ModulusNode: bad kind");
}

inline Modulus modulus_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return linear_modulus(j.at("c").get<double>());
  if (kind == "power") {
    return power_modulus(j.at("a").get<double>(), j.at("p").get<double>());
  }
  if (kind == "scale") {
    return scale_modulus(j.at("c").get<double>(),
                         modulus_from_json(j.at("inner")));
  }
  if (kind == "min") {
    std::vector<Modulus> children;
    for (const json& c : j.at("children")) {
      children.push_back(modulus_from_json(c));
    }
    return min_modulus(std::move(children));
  }
  if (kind == "compose") {
    return compose_modulus(modulus_from_json(j.at("outer")),
                           modulus_from_json(j.at("inner")));
  }
  if (kind == "const") return const_modulus(j.at("c").get<double>());
  if (kind == "half_arg") {
    return half_arg_modulus(modulus_from_json(j.at("inner")));
  }
  if (kind == "table") {
    return table_modulus(
        j.at("points").get<std::vector<std::pair<double, double>>>());
  }
  if (kind == "from_rate") {
    return modulus_from_convergence_rate(rate_from_json(j.at("rate")));
  }
  throw std::invalid_argument("modulus: unknown kind '" + kind + "'");
}

inline json to_json(const RateFn& r) {
  const RateNode& n = r.node();
  switch (n.kind) {
    case RateKind::ceil_inv:
      return {{"kind", "ceil_inv"}, {"a", n.a}, {"p", n.p}};
    case RateKind::floor_inv:
      return {{"kind", "floor_inv"}, {"a", n.a}, {"p", n.p}};
    case RateKind::plus_const:
      return {{"kind", "plus_const"},
              {"k", n.k},
              {"inner", to_json(n.children[0])}};
    case RateKind::compose_div:
      return {{"kind", "compose_div"},
              {"theta", to_json(*n.theta)},
              {"inner", to_json(n.children[0])}};
    case RateKind::table:
      return {{"kind", "table"}, {"points", n.points}};
    case RateKind::compose_mod:
      return {{"kind", "compose_mod"},
              {"rate", to_json(n.children[0])},
              {"modulus", to_json(n.modulus)}};
    case RateKind::constant:
      return {{"kind", "const"}, {"k", n.k}};
  }
  throw std::logic_error("RateNode: bad kind");
}

inline RateFn rate_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ceil_inv") {
    return ceil_inv_rate(j.at("a").get<double>(), j.at("p").get<double>());
  }
  if (kind == "floor_inv") {
    return floor_inv_rate(j.at("a").get<double>(), j.at("p").get<double>());
  }
  if (kind == "plus_const") {
    return plus_const_rate(j.at("k").get<std::int64_t>(),
                           rate_from_json(j.at("inner")));
  }
  if (kind == "compose_div") {
    return compose_divergence_rate(divergence_from_json(j.at("theta")),
                                   rate_from_json(j.at("inner")));
  }
  if (kind == "table") {
    return table_rate(
        j.at("points").get<std::vector<std::pair<double, std::int64_t>>>());
  }
  if (kind == "compose_mod") {
    return compose_with_modulus(rate_from_json(j.at("rate")),
                                modulus_from_json(j.at("modulus")));
  }
  if (kind == "const") return const_rate(j.at("k").get<std::int64_t>());
  throw std::invalid_argument("rate: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Convex sets
// ---------------------------------------------------------------------------

inline json to_json(const ConvexSet& s) {
  switch (s.kind()) {
    case ConvexSet::Kind::halfspace:
      return {{"kind", "halfspace"},
              {"normal", s.normal().coords()},
              {"offset", s.offset()}};
    case ConvexSet::Kind::hyperplane:
      return {{"kind", "hyperplane"},
              {"normal", s.normal().coords()},
              {"offset", s.offset()}};
    case ConvexSet::Kind::box:
      return {{"kind", "box"}, {"lo", s.lo().coords()}, {"hi", s.hi().coords()}};
    case ConvexSet::Kind::ball:
      return {{"kind", "ball"},
              {"center", s.center().coords()},
              {"radius", s.radius()}};
    case ConvexSet::Kind::affine_subspace: {
      json basis = json::array();
      for (const Vector& b : s.basis()) basis.push_back(b.coords());
      return {{"kind", "affine"}, {"point", s.center().coords()},
              {"basis", basis}};
    }
  }
  throw std::logic_error("ConvexSet: bad kind");
}

inline ConvexSet convex_set_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "halfspace") {
    return ConvexSet::halfspace(Vector(j.at("normal").get<std::vector<double>>()),
                                j.at("offset").get<double>());
  }
  if (kind == "hyperplane") {
    return ConvexSet::hyperplane(
        Vector(j.at("normal").get<std::vector<double>>()),
        j.at("offset").get<double>());
  }
  if (kind == "box") {
    return ConvexSet::box(Vector(j.at("lo").get<std::vector<double>>()),
                          Vector(j.at("hi").get<std::vector<double>>()));
  }
  if (kind == "ball") {
    return ConvexSet::l2_ball(Vector(j.at("center").get<std::vector<double>>()),
                              j.at("radius").get<double>());
  }
  if (kind == "affine") {
    std::vector<Vector> basis;
    for (const json& b : j.at("basis")) {
      basis.emplace_back(b.get<std::vector<double>>());
    }
    return ConvexSet::affine_subspace(
        Vector(j.at("point").get<std::vector<double>>()), std::move(basis));
  }
  throw std::invalid_argument("convex set: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Problem configurations
// ---------------------------------------------------------------------------

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

/// Builds a ProblemInstance from its configuration document:
///   { "schema_version": 1, "kind": ..., "params": {...}, "x0": [...],
///     "z"?: [...], "b"?: r, "modulus"?: tree, "rate"?: tree,
///     "eps_star"?: e, "recipe"?: {"driver": ..., "steps": n,
///                                 "schedule"?: seq} }
inline ProblemInstance build_problem(const json& cfg) {
  if (cfg.value("schema_version", 1) != 1) {
    throw std::invalid_argument("problem config: unsupported schema_version");
  }
  const std::string kind = cfg.at("kind").get<std::string>();
  const json params = cfg.value("params", json::object());
  const Vector x0{cfg.at("x0").get<std::vector<double>>()};

  StepSequence schedule = StepSequence::constant_seq(1.0);
  if (cfg.contains("recipe") && cfg["recipe"].contains("schedule")) {
    schedule = step_sequence_from_json(cfg["recipe"]["schedule"]);
  }

  ProblemInstance p;
  if (kind == "contraction") {
    p = instance_contraction(params.at("k").get<double>(), x0);
  } else if (kind == "halfspace_projection") {
    p = instance_halfspace_projection(x0);
  } else if (kind == "orbital_triangle") {
    p = instance_orbital_triangle(x0);
  } else if (kind == "grad_quadratic") {
    std::optional<double> L;
    if (params.contains("L")) L = params["L"].get<double>();
    p = instance_grad_quadratic(params.at("q_diag").get<std::vector<double>>(),
                                x0, L);
  } else if (kind == "best_approx_pair") {
    p = instance_best_approx_pair(convex_set_from_json(params.at("U")),
                                  convex_set_from_json(params.at("V")), x0);
  } else if (kind == "cfp_halfspaces") {
    std::vector<ConvexSet> sets;
    for (const json& s : params.at("halfspaces")) {
      sets.push_back(convex_set_from_json(s));
    }
    std::optional<double> c;
    if (params.contains("c")) c = params["c"].get<double>();
    p = instance_cfp_halfspaces(
        std::move(sets), x0,
        Vector(params.at("witness").get<std::vector<double>>()), c);
  } else if (kind == "min_norm_ppa") {
    p = instance_min_norm(x0.dim(), x0, schedule);
  } else if (kind == "min_norm_sharp") {
    p = instance_min_norm_sharp(x0.dim(), x0, schedule);
  } else if (kind == "vi_box") {
    std::optional<double> L;
    if (params.contains("L")) L = params["L"].get<double>();
    p = instance_vi_box(
        params.at("M").get<std::vector<std::vector<double>>>(),
        Vector(params.at("q").get<std::vector<double>>()),
        convex_set_from_json(params.at("box")), x0, L);
  } else if (kind == "dr_two_lines") {
    p = instance_dr_two_lines(x0, params.value("mu", 1.0),
                              params.value("gamma", 1.0));
  } else if (kind == "crombez_quadrant") {
    p = instance_crombez_quadrant(x0);
  } else if (kind == "specker_demo") {
    const json seq = params.at("sequence");
    SpeckerSequence s;
    const std::string sk = seq.at("kind").get<std::string>();
    if (sk == "constant") {
      s = SpeckerSequence::constant_seq(seq.at("value").get<double>());
    } else if (sk == "staircase") {
      s = SpeckerSequence::staircase_seq(seq.value("period", 5));
    } else if (sk == "list") {
      s = SpeckerSequence::list_seq(seq.at("values").get<std::vector<double>>());
    } else {
      throw std::invalid_argument("specker sequence: unknown kind '" + sk + "'");
    }
    p = instance_specker_demo(s, params.value("N", 40),
                              x0.dim() == 1 ? x0[0] : 0.0);
  } else {
    throw std::invalid_argument("problem config: unknown kind '" + kind + "'");
  }

  if (cfg.contains("name")) p.name = cfg["name"].get<std::string>();
  if (cfg.contains("z")) {
    p.reference_zero = Vector(cfg["z"].get<std::vector<double>>());
  }
  if (cfg.contains("b")) p.bound_b = cfg["b"].get<double>();
  if (cfg.contains("modulus") && !cfg["modulus"].is_null()) {
    p.modulus = modulus_from_json(cfg["modulus"]);
  }
  if (cfg.contains("rate") && !cfg["rate"].is_null()) {
    p.rate = rate_from_json(cfg["rate"]);
  }
  if (cfg.contains("eps_star") && !cfg["eps_star"].is_null()) {
    p.eps_star = cfg["eps_star"].get<double>();
  }
  if (cfg.contains("recipe")) {
    const json& recipe = cfg["recipe"];
    if (recipe.contains("driver") &&
        recipe["driver"].get<std::string>() != to_string(p.recipe.driver)) {
      throw std::invalid_argument("problem config: recipe driver mismatch (" +
                                  recipe["driver"].get<std::string>() +
                                  " vs " + to_string(p.recipe.driver) + ")");
    }
    if (recipe.contains("steps")) {
      p.recipe.default_steps = recipe["steps"].get<std::int64_t>();
    }
    if (recipe.contains("schedule")) p.recipe.schedule = schedule;
  }
  p.validate();
  p.config_json = cfg.dump();
  return p;
}

// ---------------------------------------------------------------------------
// Reports and traces
// ---------------------------------------------------------------------------

inline json to_json(const AuditParams& p) {
  return {{"eps_grid", p.eps_grid}, {"samples", p.samples}, {"seed", p.seed},
          {"eta", p.eta},           {"window", p.window}};
}

inline json to_json(const AuditReport& r) {
  return {{"check", r.check},
          {"pass", r.pass},
          {"worst_violation", r.worst_violation},
          {"witness", r.witness},
          {"params", to_json(r.params)}};
}

inline json to_json(const std::vector<AuditReport>& reports) {
  json out = json::array();
  for (const AuditReport& r : reports) out.push_back(to_json(r));
  return out;
}

inline json to_json(const Trace& t) {
  json records = json::array();
  for (const TraceRecord& r : t.records) {
    json row{{"n", r.n}, {"x", r.x.coords()}};
    auto put = [&row](const char* key, double v) {
      if (!std::isnan(v)) row[key] = v;
    };
    put("residual", r.residual);
    put("fix_residual", r.fix_residual);
    put("dist", r.dist);
    put("fejer_gap", r.fejer_gap);
    put("u_norm", r.u_norm);
    if (r.shadow) row["shadow"] = r.shadow->coords();
    if (!r.set_residuals.empty()) row["set_residuals"] = r.set_residuals;
    records.push_back(std::move(row));
  }
  return {{"source", t.source},
          {"instance_hash", t.instance_hash},
          {"schedule", t.schedule_desc},
          {"seed", t.seed},
          {"records", records}};
}

/// Trace for an instance with run metadata attached.
inline Trace run_recipe_with_metadata(const ProblemInstance& p,
                                      std::optional<std::int64_t> steps = {}) {
  Trace t = run_recipe(p, steps);
  t.instance_hash =
      fnv1a_hex(p.config_json.empty() ? p.name : p.config_json);
  t.schedule_desc = to_json(p.recipe.schedule).dump();
  return t;
}

}  // namespace fejer
