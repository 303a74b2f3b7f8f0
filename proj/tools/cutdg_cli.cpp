#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "cutdg/analysis.hpp"
#include "cutdg/error.hpp"
#include "cutdg/experiments.hpp"
#include "cutdg/output.hpp"

using namespace cutdg;

namespace {

struct Overrides {
  std::string preset;
  std::optional<int> n, degree, time_degree, record_every;
  std::optional<double> lambda_1, lambda_2, gamma_M, gamma_A, cfl, t_end, alpha;
  std::string formulation, variant;
};

void add_overrides(CLI::App* app, Overrides& o, bool with_n) {
  app->add_option("--preset", o.preset, "experiment preset")->required();
  if (with_n) app->add_option("--n", o.n, "background elements (per direction in 2D)");
  app->add_option("--degree", o.degree, "spatial polynomial degree");
  app->add_option("--time-degree", o.time_degree, "temporal degree of the space-time scheme");
  app->add_option("--lambda1", o.lambda_1);
  app->add_option("--lambda2", o.lambda_2);
  app->add_option("--gamma-m", o.gamma_M, "mass ghost penalty weight");
  app->add_option("--gamma-a", o.gamma_A, "spatial ghost penalty weight");
  app->add_option("--cfl", o.cfl, "time-step factor (meaning depends on the preset)");
  app->add_option("--t-end", o.t_end);
  app->add_option("--alpha", o.alpha, "relative cut position for alpha_sweep");
  app->add_option("--formulation", o.formulation, "ibp or direct")->check(CLI::IsMember({"ibp", "direct"}));
  app->add_option("--variant", o.variant, "coupled: accuracy or conservation");
  app->add_option("--record-every", o.record_every, "trace stride");
}

ExperimentSpec resolve(const Overrides& o) {
  ExperimentSpec s = preset_defaults(o.preset);
  if (o.n) s.n = *o.n;
  if (o.degree) s.degree = *o.degree;
  if (o.time_degree) s.time_degree = *o.time_degree;
  if (o.record_every) s.record_every = *o.record_every;
  if (o.lambda_1) s.lambda_1 = *o.lambda_1;
  if (o.lambda_2) s.lambda_2 = *o.lambda_2;
  if (o.gamma_M) s.gamma_M = *o.gamma_M;
  if (o.gamma_A) s.gamma_A = *o.gamma_A;
  if (o.cfl) s.cfl = *o.cfl;
  if (o.t_end) s.t_end = *o.t_end;
  if (o.alpha) s.alpha = *o.alpha;
  if (!o.formulation.empty()) s.formulation = o.formulation == "direct" ? Formulation::direct : Formulation::integrated_by_parts;
  if (!o.variant.empty()) s.variant = o.variant;
  if (s.preset == "moving_accuracy" && !o.cfl && s.degree >= 2) s.cfl = 0.005;
  validate(s);
  return s;
}

std::string join(const std::string& dir, const std::string& name) { return dir.empty() ? name : dir + "/" + name; }

void print_norms(const ErrorNorms& n) {
  std::printf("L1 %s  L2 %s  Linf %s\n", format_number(n.l1).c_str(), format_number(n.l2).c_str(),
              format_number(n.linf).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut discontinuous Galerkin experiments"};
  app.set_config("--config", "", "key=value file mirroring the command-line flags");
  app.require_subcommand(1);
  std::string out_dir;
  bool svg = false;
  app.add_option("--out", out_dir, "output directory for CSV/SVG/JSON artifacts");
  app.add_flag("--svg", svg, "also write SVG plots");

  Overrides run_o, conv_o;
  std::vector<int> ns;
  int sweep_n = 400, sweep_degree = 1, samples = 400;
  bool no_errors = false;
  double a1 = 2, a2 = 1, l1_min = -1.5, l1_max = 1.5, l2_min = -2.5, l2_max = 0.5;
  int n1 = 61, n2 = 61;

  auto* run = app.add_subcommand("run", "run one preset");
  add_overrides(run, run_o, true);
  auto* conv = app.add_subcommand("converge", "convergence table over --n");
  add_overrides(conv, conv_o, false);
  conv->add_option("--n", ns, "refinement list, e.g. 20,40,80")->delimiter(',')->required();
  auto* sweep = app.add_subcommand("sweep-alpha", "errors and mass conditioning against the cut position");
  sweep->add_option("--n", sweep_n);
  sweep->add_option("--degree", sweep_degree);
  sweep->add_option("--samples", samples);
  sweep->add_flag("--condition-only", no_errors, "skip the time integration");
  auto* region = app.add_subcommand("region-map", "penalty pairs admitting a stabilizing eta");
  region->add_option("--a1", a1);
  region->add_option("--a2", a2);
  region->add_option("--lambda1-min", l1_min);
  region->add_option("--lambda1-max", l1_max);
  region->add_option("--lambda2-min", l2_min);
  region->add_option("--lambda2-max", l2_max);
  region->add_option("--n1", n1);
  region->add_option("--n2", n2);
  auto* list = app.add_subcommand("list-presets", "print the preset identifiers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& p : list_presets()) std::printf("%-32s %s\n", p.id.c_str(), p.description.c_str());
    } else if (*run) {
      const ExperimentSpec s = resolve(run_o);
      const RunReport r = run_experiment(s);
      std::printf("%s  N=%d  r=%d  h=%s  steps=%d\n", s.preset.c_str(), s.n, s.degree, format_number(r.h).c_str(),
                  r.steps);
      print_norms(r.norms);
      double emax = 0;
      for (double e : r.conservation) emax = std::max(emax, std::abs(e));
      std::printf("conservation max |e| %s  final %s\n", format_number(emax).c_str(),
                  format_number(r.conservation.empty() ? 0.0 : r.conservation.back()).c_str());
      if (r.condition > 0) std::printf("mass condition %s\n", format_number(r.condition).c_str());
      for (const auto& [k, v] : r.extra) std::printf("%s %s\n", k.c_str(), format_number(v).c_str());
      const std::string stem = s.preset + "_N" + std::to_string(s.n) + "_r" + std::to_string(s.degree);
      write_csv(join(out_dir, stem + "_trace.csv"), trace_csv(r));
      write_text(join(out_dir, stem + "_report.json"), report_json(r));
      if (svg)
        write_text(join(out_dir, stem + "_trace.svg"),
                   to_svg(s.preset + " conservation error", {{"e(t)", r.times, r.conservation}}));
    } else if (*conv) {
      const ExperimentSpec s = resolve(conv_o);
      const auto rows = convergence_table(s, ns);
      const Table t = convergence_csv(rows);
      std::cout << to_csv(t);
      const std::string stem = s.preset + "_r" + std::to_string(s.degree);
      write_csv(join(out_dir, stem + "_convergence.csv"), t);
      if (svg) {
        Series e{"L2", {}, {}};
        for (const auto& row : rows) {
          e.x.push_back(std::log10(static_cast<double>(row.n)));
          e.y.push_back(row.norms.l2);
        }
        write_text(join(out_dir, stem + "_convergence.svg"), to_svg(s.preset + " L2 error vs log10 N", {e}, true));
      }
    } else if (*sweep) {
      ExperimentSpec s = preset_defaults("alpha_sweep");
      s.n = sweep_n;
      s.degree = sweep_degree;
      validate(s);
      const auto rows = sweep_alpha(s, samples, !no_errors);
      const Table t = sweep_csv(rows);
      const std::string stem = "alpha_sweep_N" + std::to_string(sweep_n) + "_r" + std::to_string(sweep_degree);
      write_csv(join(out_dir, stem + ".csv"), t);
      double lo = 1e300, hi = 0, clo = 1e300, chi = 0;
      for (const auto& row : rows) {
        lo = std::min(lo, row.norms.l2);
        hi = std::max(hi, row.norms.l2);
        clo = std::min(clo, row.condition);
        chi = std::max(chi, row.condition);
      }
      if (!no_errors) std::printf("L2 min %s max %s\n", format_number(lo).c_str(), format_number(hi).c_str());
      std::printf("condition min %s max %s\n", format_number(clo).c_str(), format_number(chi).c_str());
      if (svg) {
        Series c{"cond", {}, {}};
        for (const auto& row : rows) {
          c.x.push_back(row.alpha);
          c.y.push_back(row.condition);
        }
        write_text(join(out_dir, stem + ".svg"), to_svg("mass condition number vs alpha", {c}));
      }
    } else if (*region) {
      if (n1 < 1 || n2 < 1) throw Error(Errc::invalid_override, "grid sizes must be positive");
      const auto pts = region_map(a1, a2, l1_min, l1_max, l2_min, l2_max, n1, n2);
      int feasible = 0;
      for (const auto& p : pts) feasible += p.feasible;
      write_csv(join(out_dir, "region_map.csv"), region_csv(pts));
      std::printf("%d of %zu penalty pairs admit a stabilizing eta\n", feasible, pts.size());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
