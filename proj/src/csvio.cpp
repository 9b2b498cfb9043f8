#include "curvlab/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "curvlab/errors.hpp"

namespace curvlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // fixed newlines everywhere
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

}  // namespace

void write_residual_csv(const ResidualReport& report,
                        const std::string& path) {
  auto out = open_out(path);
  out << "system,x1,x2,x3,full_residual,trace_residual,norm_r2,s,omega,pass\n";
  for (const auto& row : report.rows) {
    out << system_name(report.system) << ',' << format_double(row.x[0]) << ','
        << format_double(row.x[1]) << ',' << format_double(row.x[2]) << ','
        << format_double(row.full_residual) << ','
        << format_double(row.trace_residual) << ','
        << format_double(row.norm_r2) << ',' << format_double(row.s) << ','
        << (row.omega ? format_double(*row.omega) : std::string()) << ','
        << (row.pass ? "1" : "0") << '\n';
  }
  out << "# tol=" << format_double(report.tol)
      << " max_full=" << format_double(report.max_full)
      << " max_trace=" << format_double(report.max_trace)
      << " pass=" << (report.pass ? 1 : 0) << '\n';
}

void write_residual_jsonl(const ResidualReport& report,
                          const std::string& path) {
  auto out = open_out(path);
  for (const auto& row : report.rows) {
    nlohmann::ordered_json j;
    j["system"] = system_name(report.system);
    j["x"] = {row.x[0], row.x[1], row.x[2]};
    j["full_residual"] = row.full_residual;
    j["trace_residual"] = row.trace_residual;
    j["norm_r2"] = row.norm_r2;
    j["s"] = row.s;
    if (row.omega) j["omega"] = *row.omega;
    j["tol"] = report.tol;
    j["pass"] = row.pass;
    out << j.dump() << '\n';
  }
}

void write_tau_csv(const TauSolution* closed, const TauSolution* ode,
                   const std::string& path) {
  auto out = open_out(path);
  out << "r,tau_closed,tau_ode,abs_diff,residual59,residual510\n";
  const TauSolution* primary = closed ? closed : ode;
  if (!primary) throw ConfigError("no potential table to write");
  const double alpha = primary->alpha, m = primary->m;
  for (size_t k = 0; k < primary->r.size(); ++k) {
    double r = primary->r[k];
    std::string closed_str, ode_str, diff_str;
    double tau = 0.0, taudot = 0.0, tauddot = 0.0;
    if (closed) {
      auto d = tau_closed_form_derivs(alpha, m, r);
      closed_str = format_double(d[0]);
      tau = d[0];
      taudot = d[1];
      tauddot = d[2];
    }
    if (ode) {
      ode_str = format_double(ode->tau[k]);
      if (!closed) {
        tau = ode->tau[k];
        taudot = ode->taudot[k];
        // second derivative by differencing neighbouring samples
        size_t lo = k > 0 ? k - 1 : k;
        size_t hi = k + 1 < ode->r.size() ? k + 1 : k;
        tauddot = (ode->taudot[hi] - ode->taudot[lo]) /
                  (ode->r[hi] - ode->r[lo]);
      }
    }
    if (closed && ode)
      diff_str = format_double(std::abs(closed->tau[k] - ode->tau[k]));
    out << format_double(r) << ',' << closed_str << ',' << ode_str << ','
        << diff_str << ','
        << format_double(radial_equation_residual(alpha, m, r, tau, taudot))
        << ','
        << format_double(
               tangential_equation_residual(alpha, m, r, tau, taudot, tauddot))
        << '\n';
  }
  out << "# tau_horizon=" << format_double(primary->tau_horizon)
      << " tau_infinity_estimate="
      << format_double(primary->tau_inf_estimate) << '\n';
}

void write_tau_solution_csv(const TauSolution& sol, const std::string& path) {
  auto out = open_out(path);
  out << "r,tau,taudot,residual59,residual510\n";
  for (size_t k = 0; k < sol.r.size(); ++k) {
    double r = sol.r[k], tau = sol.tau[k], taudot = sol.taudot[k];
    double tauddot;
    if (sol.provenance == TauSolution::Provenance::ClosedForm) {
      tauddot = tau_closed_form_derivs(sol.alpha, sol.m, r)[2];
    } else {
      size_t lo = k > 0 ? k - 1 : k;
      size_t hi = k + 1 < sol.r.size() ? k + 1 : k;
      tauddot = (sol.taudot[hi] - sol.taudot[lo]) / (sol.r[hi] - sol.r[lo]);
    }
    out << format_double(r) << ',' << format_double(tau) << ','
        << format_double(taudot) << ','
        << format_double(
               radial_equation_residual(sol.alpha, sol.m, r, tau, taudot))
        << ','
        << format_double(tangential_equation_residual(sol.alpha, sol.m, r,
                                                      tau, taudot, tauddot))
        << '\n';
  }
  out << "# tau_horizon=" << format_double(sol.tau_horizon)
      << " tau_infinity_estimate=" << format_double(sol.tau_inf_estimate)
      << '\n';
}

GradCheckSummary summarize_gradcheck(const std::vector<GradCheckRow>& rows) {
  GradCheckSummary s;
  s.rows = rows;
  if (rows.empty()) return s;
  double mean = 0.0;
  for (const auto& r : rows) mean += r.kappa;
  mean /= double(rows.size());
  double var = 0.0;
  for (const auto& r : rows) var += (r.kappa - mean) * (r.kappa - mean);
  s.kappa_mean = mean;
  s.kappa_std_over_mean =
      std::sqrt(var / double(rows.size())) / std::abs(mean);
  return s;
}

void write_gradcheck_csv(const GradCheckSummary& summary,
                         const std::string& path) {
  auto out = open_out(path);
  out << "perturbation,fd_derivative,pairing,kappa\n";
  for (const auto& r : summary.rows)
    out << r.perturbation << ',' << format_double(r.fd_derivative) << ','
        << format_double(r.pairing) << ',' << format_double(r.kappa) << '\n';
  out << "# kappa_mean=" << format_double(summary.kappa_mean)
      << " kappa_std_over_mean=" << format_double(summary.kappa_std_over_mean)
      << '\n';
}

void write_flow_csv(const FlowTrace& trace, const std::string& path) {
  auto out = open_out(path);
  out << "step,value,max_gradient\n";
  for (const auto& row : trace.rows)
    out << row.step << ',' << format_double(row.value) << ','
        << format_double(row.max_gradient) << '\n';
  if (!trace.ok) out << "# guard: " << trace.failure << '\n';
}

void write_identities_csv(const std::vector<IdentityRow>& rows,
                          const std::string& path) {
  auto out = open_out(path);
  out << "identity,max_err,tol,samples,pass\n";
  for (const auto& r : rows)
    out << '"' << r.name << "\"," << format_double(r.max_err) << ','
        << format_double(r.tol) << ',' << r.samples << ','
        << (r.pass ? "1" : "0") << '\n';
}

}  // namespace curvlab
