#pragma once

#include <map>
#include <string>
#include <vector>

#include "cutdg/analysis.hpp"
#include "cutdg/norms.hpp"
#include "cutdg/output.hpp"
#include "cutdg/spacetime.hpp"

namespace cutdg {

struct PresetInfo {
  std::string id;
  std::string description;
};

const std::vector<PresetInfo>& list_presets();

// Every field is filled by preset_defaults; `cfl` is preset specific:
//   stationary / acoustic: Courant number C in dt = C h / max speed (0 selects the tabulated value)
//   moving_accuracy / coupled: dt = cfl h
//   moving_conservation: dt = cfl h / max a
//   twod_*: dt = cfl h / ((2r + 1) max |a|)
struct ExperimentSpec {
  std::string preset;
  int n = 40;
  int degree = 1;
  int time_degree = 1;
  double lambda_1 = 0.1;
  double lambda_2 = -0.9;
  double gamma_M = 0.25;
  double gamma_A = 0.75;
  double cfl = 0;
  double t_end = 1;
  double alpha = 0.5;
  Formulation formulation = Formulation::integrated_by_parts;
  // coupled: "accuracy" (linear path, smooth data) or "conservation" (sinusoidal path, zero initial data).
  std::string variant;
  // Record every k-th step in the traces (the last step is always recorded).
  int record_every = 1;
};

// Throws unknown_preset.
ExperimentSpec preset_defaults(const std::string& id);
// Throws invalid_override on out-of-range fields.
void validate(const ExperimentSpec& spec);

struct RunReport {
  ExperimentSpec spec;
  double h = 0;
  double dt = 0;
  int steps = 0;
  ErrorNorms norms;
  std::vector<double> times;
  std::vector<double> conservation;  // largest component
  std::vector<double> energy;        // empty where not applicable
  double condition = 0;              // mass matrix, 0 when not computed
  double wall_time = 0;
  std::map<std::string, double> extra;
};

RunReport run_experiment(const ExperimentSpec& spec);

struct ConvergenceRow {
  int n = 0;
  double h = 0;
  ErrorNorms norms;
  double order_l2 = 0;  // NaN on the first row
};

// Runs the refinements in parallel; order_l2 = log(e_prev / e) / log(n / n_prev).
std::vector<ConvergenceRow> convergence_table(const ExperimentSpec& base, const std::vector<int>& ns);
// Least-squares slope of log e against log n over the last `count` rows.
double fitted_order(const std::vector<ConvergenceRow>& rows, int count);

struct SweepRow {
  double alpha = 0;
  ErrorNorms norms;
  double condition = 0;
};

// alpha_sweep preset at the midpoints alpha_i = (i + 1/2) / samples; with_errors = false skips the time integration.
std::vector<SweepRow> sweep_alpha(const ExperimentSpec& base, int samples, bool with_errors = true);

Table convergence_csv(const std::vector<ConvergenceRow>& rows);
Table trace_csv(const RunReport& r);
Table sweep_csv(const std::vector<SweepRow>& rows);
Table region_csv(const std::vector<RegionPoint>& points);
std::string report_json(const RunReport& r);

}  // namespace cutdg
