#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvlab/exact_solutions.hpp"
#include "curvlab/functionals.hpp"

namespace curvlab {

// A verification campaign read from the sectioned key-value config format
// (grammar documented in the README): which metric, which potential, which
// equation systems, where to sample, and how strict to be.
struct CampaignConfig {
  // [metric]
  std::string family;  // schwarzschild | kasner | flat-torus | warped |
                       // diagonal | s1-invariant | inline
  std::map<std::string, std::string> metric_exprs;
  double m = 0.5;
  double a = 0.5;

  // [potential]
  std::string potential_kind = "none";  // none | expr | schwarzschild-vacuum |
                                        // schwarzschild-rs2 | kasner-vacuum
  std::string omega_expr;
  double alpha = 0.0;
  double c = 0.0;
  double tau_scale = 1.0;

  // [check]
  std::vector<EqSystem> systems;
  std::vector<Point> points;
  double tol = 1e-6;

  // [output]
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

CampaignConfig parse_campaign_config(const std::string& text);
CampaignConfig load_campaign_config(const std::string& path);

struct Campaign {
  MetricChart chart;
  std::optional<PotentialSpec> potential;
  std::vector<EqSystem> systems;
  std::vector<Point> points;
  double tol = 1e-6;
};

// Materializes charts and potentials; throws ConfigError on unknown
// families, missing expressions or invalid parameters.
Campaign build_campaign(const CampaignConfig& config);

}  // namespace curvlab
