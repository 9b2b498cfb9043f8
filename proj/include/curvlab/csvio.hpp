#pragma once

#include <string>
#include <vector>

#include "curvlab/exact_solutions.hpp"
#include "curvlab/functionals.hpp"
#include "curvlab/identities.hpp"
#include "curvlab/torus.hpp"

namespace curvlab {

// 17 significant digits, '.' decimal, no locale: round-trip exact and
// byte-stable across runs.
std::string format_double(double v);

void write_residual_csv(const ResidualReport& report, const std::string& path);
void write_residual_jsonl(const ResidualReport& report,
                          const std::string& path);

// Columns r, tau_closed, tau_ode, abs_diff, residual59, residual510 with a
// trailing summary comment (horizon value and plateau estimate).  Either
// table pointer may be null; residuals follow the populated method.
void write_tau_csv(const TauSolution* closed, const TauSolution* ode,
                   const std::string& path);

// Single-solution export: r, tau, taudot, residual59, residual510.
void write_tau_solution_csv(const TauSolution& sol, const std::string& path);

struct GradCheckRow {
  int perturbation;
  double fd_derivative;
  double pairing;
  double kappa;
};

struct GradCheckSummary {
  std::vector<GradCheckRow> rows;
  double kappa_mean = 0.0;
  double kappa_std_over_mean = 0.0;
};

GradCheckSummary summarize_gradcheck(const std::vector<GradCheckRow>& rows);
void write_gradcheck_csv(const GradCheckSummary& summary,
                         const std::string& path);

void write_flow_csv(const FlowTrace& trace, const std::string& path);
void write_identities_csv(const std::vector<IdentityRow>& rows,
                          const std::string& path);

}  // namespace curvlab
