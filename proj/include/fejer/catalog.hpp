#pragma once

// The default catalog as configuration documents. These are the same
// instances as problems.hpp's default_catalog(), defined data-first so the
// shipped configs/ examples, the CLI and the C++ builders stay in sync
// (a test cross-checks the two constructions).

#include <string>
#include <vector>

#include "fejer/serialize.hpp"

namespace fejer {

inline std::vector<json> default_catalog_configs() {
  const double s = 0.70710678118654752;  // 1/sqrt(2)
  return {
      json{{"schema_version", 1},
           {"kind", "contraction"},
           {"name", "contraction"},
           {"params", {{"k", 0.5}}},
           {"x0", {1.0}},
           {"recipe", {{"driver", "picard"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "halfspace_projection"},
           {"name", "halfspace_projection"},
           {"params", json::object()},
           {"x0", {2.0, 3.0}},
           {"recipe", {{"driver", "picard"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "orbital_triangle"},
           {"name", "orbital_triangle"},
           {"params", json::object()},
           {"x0", {0.5, 0.1}},
           {"recipe", {{"driver", "picard"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "grad_quadratic"},
           {"name", "grad_quadratic_identity"},
           {"params", {{"q_diag", {1.0, 1.0}}}},
           {"x0", {0.8, -0.6}},
           {"recipe", {{"driver", "gradient_descent"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "grad_quadratic"},
           {"name", "grad_quadratic_rank_deficient"},
           {"params", {{"q_diag", {1.0, 0.0}}}},
           {"x0", {0.9, 0.4}},
           {"recipe", {{"driver", "gradient_descent"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "best_approx_pair"},
           {"name", "best_approx_pair"},
           {"params",
            {{"U",
              {{"kind", "halfspace"}, {"normal", {1.0, 0.0}}, {"offset", 0.0}}},
             {"V",
              {{"kind", "halfspace"},
               {"normal", {-1.0, 0.0}},
               {"offset", -1.0}}}}},
           {"x0", {-2.0, 5.0}},
           {"recipe", {{"driver", "picard"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "cfp_halfspaces"},
           {"name", "cfp_two_halfspaces"},
           {"params",
            {{"halfspaces",
              {{{"kind", "halfspace"}, {"normal", {1.0, 0.0}}, {"offset", 0.0}},
               {{"kind", "halfspace"}, {"normal", {s, s}}, {"offset", 0.0}}}},
             {"witness", {0.0, 0.0}}}},
           {"x0", {1.5, 1.0}},
           {"recipe", {{"driver", "cyclic"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "min_norm_ppa"},
           {"name", "min_norm_ppa"},
           {"params", json::object()},
           {"x0", {2.3}},
           {"recipe",
            {{"driver", "ppa"},
             {"steps", 40},
             {"schedule", {{"kind", "constant"}, {"value", 1.0}}}}}},
      json{{"schema_version", 1},
           {"kind", "min_norm_ppa"},
           {"name", "min_norm_ppa_r2"},
           {"params", json::object()},
           {"x0", {1.8, -1.5}},
           {"recipe",
            {{"driver", "ppa"},
             {"steps", 40},
             {"schedule", {{"kind", "constant"}, {"value", 1.0}}}}}},
      json{{"schema_version", 1},
           {"kind", "min_norm_sharp"},
           {"name", "min_norm_sharp"},
           {"params", json::object()},
           {"x0", {2.3}},
           {"recipe",
            {{"driver", "ppa"},
             {"steps", 40},
             {"schedule", {{"kind", "constant"}, {"value", 1.0}}}}}},
      json{{"schema_version", 1},
           {"kind", "vi_box"},
           {"name", "vi_box_identity"},
           {"params",
            {{"M", {{1.0, 0.0}, {0.0, 1.0}}},
             {"q", {0.0, 0.0}},
             {"box",
              {{"kind", "box"}, {"lo", {-1.0, -1.0}}, {"hi", {1.0, 1.0}}}}}},
           {"x0", {0.9, -0.7}},
           {"recipe", {{"driver", "picard"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "dr_two_lines"},
           {"name", "dr_two_lines"},
           {"params", {{"mu", 1.0}, {"gamma", 1.0}}},
           {"x0", {2.0, 1.0}},
           {"recipe",
            {{"driver", "douglas_rachford"},
             {"steps", 40},
             {"schedule", {{"kind", "constant"}, {"value", 0.5}}}}}},
      json{{"schema_version", 1},
           {"kind", "crombez_quadrant"},
           {"name", "crombez_quadrant"},
           {"params", json::object()},
           {"x0", {2.0, 2.0}},
           {"recipe", {{"driver", "crombez"}, {"steps", 40}}}},
      json{{"schema_version", 1},
           {"kind", "specker_demo"},
           {"name", "specker_demo"},
           {"params",
            {{"sequence", {{"kind", "staircase"}, {"period", 5}}}, {"N", 40}}},
           {"x0", {0.0}},
           {"recipe", {{"driver", "picard"}, {"steps", 80}}}},
  };
}

/// The default catalog built from its configuration documents.
inline std::vector<ProblemInstance> serialized_catalog() {
  std::vector<ProblemInstance> out;
  for (const json& cfg : default_catalog_configs()) {
    out.push_back(build_problem(cfg));
  }
  return out;
}

}  // namespace fejer
