#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

#include "cutdg/acoustic.hpp"
#include "cutdg/assembly1d.hpp"

namespace cutdg {

struct StabilityMatrix {
  Eigen::MatrixXd entries;
  double a1 = 0, a2 = 0;  // effective speeds a_i - x'
  double lambda_1 = 0, lambda_2 = 0;
  double eta = 1;
};

// Interface quadratic form of the scalar problem; a moving interface enters through a_i - x'.
StabilityMatrix build_s_scalar(double a1, double a2, double lambda_1, double lambda_2, double eta,
                               double x_gamma_prime = 0);

// 4x4 block form for the acoustic system.
StabilityMatrix build_s_acoustic(const AcousticSystem& sys, double lambda_1, double lambda_2);

struct PsdResult {
  bool psd = false;
  double min_eigenvalue = 0;
};

// PSD iff the smallest eigenvalue is >= -tol ||S||_2.
PsdResult psd_check(const Eigen::MatrixXd& s, double tol = 1e-12);
inline PsdResult psd_check(const StabilityMatrix& s, double tol = 1e-12) { return psd_check(s.entries, tol); }

struct EtaInterval {
  bool empty = true;
  double lo = 0;
  double hi = 0;  // may be +inf

  bool contains(double eta) const { return !empty && eta >= lo && eta <= hi; }
  // Midpoint, or 2 lo (lo + 1 when lo = 0) for an unbounded interval.
  double sample() const;
};

// Closed-form eta range for which S is PSD. Conservative: lambda_2 = lambda_1 - 1 with the sign pattern
// of the speeds; otherwise lambda_1 - lambda_2 >= 1/2 with the same sign pattern.
EtaInterval feasible_eta(double a1, double a2, double lambda_1, double lambda_2, bool conservative);

struct EtaScan {
  int samples = 0;
  int psd_count = 0;
  double first_psd = std::numeric_limits<double>::quiet_NaN();
  double last_psd = std::numeric_limits<double>::quiet_NaN();
};

// Brute-force eigenvalue scan over eta in [lo, hi], log-spaced when `log_spaced`.
EtaScan scan_eta(double a1, double a2, double lambda_1, double lambda_2, double lo, double hi, int n,
                 bool log_spaced = true, double tol = 1e-12);

// 1/2 u^T W M u with W = diag(1 on side 1, eta on side 2).
double weighted_energy(const Eigen::VectorXd& u, const DgOperators& ops, double eta);
// dE/dt of the semi-discrete system with zero inflow: -u^T W K u.
double weighted_energy_rate(const Eigen::VectorXd& u, const DgOperators& ops, double eta);

struct RegionPoint {
  double lambda_1 = 0, lambda_2 = 0;
  bool feasible = false;
  double eta_lo = 0, eta_hi = 0;
};

// Non-conservative feasibility over a (lambda_1, lambda_2) grid.
std::vector<RegionPoint> region_map(double a1, double a2, double l1_min, double l1_max, double l2_min, double l2_max,
                                    int n1, int n2);

}  // namespace cutdg
