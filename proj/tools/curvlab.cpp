// curvlab: verification campaigns for quadratic curvature functionals on
// 2- and 3-dimensional chart metrics and flat-torus grids.
//
// Verbs: verify, schwarzschild-potential, gradcheck, flow, identities.
// Exit codes: 0 pass, 1 tolerance failure, 2 configuration error,
// 3 numerical-domain error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "curvlab/config.hpp"
#include "curvlab/csvio.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/identities.hpp"
#include "curvlab/torus.hpp"

namespace fs = std::filesystem;
using namespace curvlab;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  double tol = 0.0;  // 0 = use config / verb default
  std::uint64_t seed = 7;
  int threads = 1;
};

std::string out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

int run_verify(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("verify needs --config <file>");
  CampaignConfig cfg = load_campaign_config(g.config_path);
  if (!g.out_dir.empty() && g.out_dir != ".") cfg.out_dir = g.out_dir;
  if (g.tol > 0.0) cfg.tol = g.tol;
  Campaign campaign = build_campaign(cfg);
  if (campaign.systems.empty())
    throw ConfigError("no equation systems listed in [check] systems");
  if (campaign.points.empty())
    throw ConfigError("no sample points listed in [check]");

  fs::create_directories(cfg.out_dir);
  bool all_pass = true;
  for (EqSystem system : campaign.systems) {
    ResidualReport report = residual(system, campaign.chart,
                                     campaign.potential, campaign.points,
                                     campaign.tol);
    std::string base = std::string("residuals_") + system_name(system);
    write_residual_csv(report, (fs::path(cfg.out_dir) / (base + ".csv")).string());
    write_residual_jsonl(report,
                         (fs::path(cfg.out_dir) / (base + ".jsonl")).string());
    std::printf("%-8s max_full=%.3e max_trace=%.3e tol=%.1e : %s\n",
                system_name(system), report.max_full, report.max_trace,
                report.tol, report.pass ? "pass" : "FAIL");
    all_pass = all_pass && report.pass;
  }
  return all_pass ? 0 : 1;
}

int run_schwarzschild_potential(const GlobalOpts& g, double alpha, double m,
                                double r_min, double r_max, int samples,
                                const std::string& method, double delta) {
  std::optional<TauSolution> closed, ode;
  if (method == "closed" || method == "both")
    closed = tau_closed_form_table(alpha, m, r_min, r_max, samples);
  if (method == "ode" || method == "both")
    ode = tau_ode(alpha, m, r_min, r_max, samples, delta);
  if (!closed && !ode)
    throw ConfigError("method must be closed, ode or both");

  write_tau_csv(closed ? &*closed : nullptr, ode ? &*ode : nullptr,
                out_path(g, "schwarzschild_potential.csv"));

  const TauSolution& primary = closed ? *closed : *ode;
  double max_diff = 0.0;
  if (closed && ode)
    for (size_t k = 0; k < closed->r.size(); ++k)
      max_diff = std::max(max_diff, std::abs(closed->tau[k] - ode->tau[k]));
  std::printf("tau(2m+) = %s, tau_infinity ~= %s%s\n",
              format_double(primary.tau_horizon).c_str(),
              format_double(primary.tau_inf_estimate).c_str(),
              closed && ode
                  ? (", max|closed - ode| = " + format_double(max_diff)).c_str()
                  : "");
  double tol = g.tol > 0.0 ? g.tol : 1e-6;
  if (closed && ode && max_diff > tol) {
    std::printf("method disagreement above tol=%.1e\n", tol);
    return 1;
  }
  return 0;
}

int run_gradcheck(const GlobalOpts& g, const std::string& functional, int n,
                  int perturbations, double amplitude) {
  GridFunctional f =
      functional == "Z2" ? GridFunctional::Z2 : GridFunctional::R2;
  TorusField metric = TorusField::random_metric(n, g.seed, amplitude);
  std::vector<GradCheckRow> rows;
  for (int p = 0; p < perturbations; ++p) {
    TorusField h =
        TorusField::random_perturbation(n, g.seed * 1000 + 101 + p, amplitude);
    VariationCheck vc = first_variation_check(f, metric, h, 1e-3, g.threads);
    rows.push_back({p, vc.fd_derivative, vc.pairing, vc.kappa});
    std::printf("perturbation %d: fd=%.12g pairing=%.12g kappa=%.12g\n", p,
                vc.fd_derivative, vc.pairing, vc.kappa);
  }
  GradCheckSummary summary = summarize_gradcheck(rows);
  write_gradcheck_csv(summary,
                      out_path(g, "gradcheck_" + functional + ".csv"));
  std::printf("kappa mean = %.12g, std/mean = %.3e\n", summary.kappa_mean,
              summary.kappa_std_over_mean);
  bool pass = std::abs(summary.kappa_mean - 1.0) <= 1e-3 &&
              summary.kappa_std_over_mean <= 1e-3;
  return pass ? 0 : 1;
}

int run_flow(const GlobalOpts& g, const std::string& functional, int n,
             double dt, int steps, double amplitude) {
  GridFunctional f =
      functional == "Z2" ? GridFunctional::Z2 : GridFunctional::R2;
  TorusField metric = TorusField::random_metric(n, g.seed, amplitude);
  FlowTrace trace = flow_run(metric, f, dt, steps, g.threads);
  write_flow_csv(trace, out_path(g, "flow.csv"));
  for (const auto& row : trace.rows)
    std::printf("step %d: %s = %.12g\n", row.step, functional.c_str(),
                row.value);
  if (!trace.ok) {
    std::printf("guard: %s\n", trace.failure.c_str());
    return 1;
  }
  return 0;
}

int run_identities(const GlobalOpts& g) {
  std::vector<IdentityRow> rows = identity_battery(g.seed);
  write_identities_csv(rows, out_path(g, "identities.csv"));
  bool all = true;
  for (const auto& r : rows) {
    std::printf("%-45s max_err=%.3e tol=%.1e [%s]\n", r.name.c_str(),
                r.max_err, r.tol, r.pass ? "pass" : "FAIL");
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "curvlab: critical-metric equation systems for quadratic curvature "
      "functionals, exact-solution checks and torus gradient verification"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "campaign config file");
  app.add_option("--out-dir", g.out_dir, "directory for CSV reports");
  app.add_option("--tol", g.tol, "tolerance override");
  app.add_option("--seed", g.seed, "seed for randomized fields");
  app.add_option("--threads", g.threads, "worker threads for grid passes")
      ->check(CLI::Range(1, 64));

  CLI::App* verify =
      app.add_subcommand("verify", "run the configured residual campaign");

  auto* sp = app.add_subcommand(
      "schwarzschild-potential",
      "tabulate the scalar-constrained potential (closed form and ODE)");
  double alpha = 1.0, m = 0.5, r_min = 1.01, r_max = 50.0, delta = 1e-4;
  int samples = 200;
  std::string method = "both";
  sp->add_option("--alpha", alpha, "coupling");
  sp->add_option("--m", m, "mass");
  sp->add_option("--r-min", r_min, "first sample radius");
  sp->add_option("--r-max", r_max, "last sample radius");
  sp->add_option("--samples", samples, "sample count")->check(CLI::Range(2, 100000));
  sp->add_option("--method", method, "closed | ode | both")
      ->check(CLI::IsMember({"closed", "ode", "both"}));
  sp->add_option("--delta", delta, "series offset for the ODE start");

  auto* gc = app.add_subcommand(
      "gradcheck", "first-variation check of the grid functionals");
  std::string gc_functional = "R2";
  int gc_n = 24, gc_perturbations = 5;
  double gc_amplitude = 0.1;
  gc->add_option("--functional", gc_functional, "R2 | Z2")
      ->check(CLI::IsMember({"R2", "Z2"}));
  gc->add_option("--n", gc_n, "grid size per axis");
  gc->add_option("--perturbations", gc_perturbations, "number of directions")
      ->check(CLI::Range(1, 64));
  gc->add_option("--amplitude", gc_amplitude, "field amplitude (<= 0.2)");

  auto* fl = app.add_subcommand("flow", "explicit descent demonstrator");
  std::string fl_functional = "R2";
  int fl_n = 16, fl_steps = 10;
  double fl_dt = 1e-5, fl_amplitude = 0.1;
  fl->add_option("--functional", fl_functional, "R2 | Z2")
      ->check(CLI::IsMember({"R2", "Z2"}));
  fl->add_option("--n", fl_n, "grid size per axis");
  fl->add_option("--dt", fl_dt, "step size");
  fl->add_option("--steps", fl_steps, "step count")->check(CLI::Range(1, 10000));
  fl->add_option("--amplitude", fl_amplitude, "field amplitude (<= 0.2)");

  CLI::App* ids = app.add_subcommand(
      "identities", "randomized differential-identity battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return run_verify(g);
    if (sp->parsed())
      return run_schwarzschild_potential(g, alpha, m, r_min, r_max, samples,
                                         method, delta);
    if (gc->parsed())
      return run_gradcheck(g, gc_functional, gc_n, gc_perturbations,
                           gc_amplitude);
    if (fl->parsed())
      return run_flow(g, fl_functional, fl_n, fl_dt, fl_steps, fl_amplitude);
    if (ids->parsed()) return run_identities(g);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error at line %d, column %d: %s\n", e.line,
                 e.col, e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "numerical domain error: %s\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  }
  return 2;
}
