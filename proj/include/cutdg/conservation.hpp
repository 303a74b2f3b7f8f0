#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cutdg/assembly1d.hpp"
#include "cutdg/timestepper.hpp"

namespace cutdg {

// e(t) per component: boundary influx accumulated with the stage weights minus the stored-mass change.
struct ConservationTrace {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> error;

  double max_abs() const;
  double final_abs() const;
};

// Collects stage boundary fluxes through a StageObserver and closes each step with finish_step.
class ConservationRecorder {
 public:
  ConservationRecorder(const DgOperators& ops, const RkScheme& scheme, const Eigen::VectorXd& u0, double t0 = 0);

  StageObserver observer();
  // Throws missing_stage_records unless every stage of the step was observed.
  void finish_step(double t, double dt, const Eigen::VectorXd& u);
  const ConservationTrace& trace() const { return trace_; }

 private:
  const DgOperators& ops_;
  RkScheme scheme_;
  Eigen::VectorXd initial_;
  Eigen::VectorXd net_;
  Eigen::VectorXd step_flux_;
  std::vector<char> seen_;
  ConservationTrace trace_;
};

// kappa_2 of an SPD matrix; throws non_spd_input with the smallest eigenvalue otherwise.
// The sparse overload works block by block over the connected components of the pattern.
double condition_number(const SparseMatrix& m);
double condition_number(const Eigen::MatrixXd& m);

}  // namespace cutdg
