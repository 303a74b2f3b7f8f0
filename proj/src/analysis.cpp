#include "cutdg/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "cutdg/error.hpp"

namespace cutdg {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

EtaInterval interval(double lo, double hi) {
  if (!(lo <= hi)) return {};
  return {false, lo, hi};
}

EtaInterval scaled(EtaInterval i, double beta) {
  if (i.empty) return i;
  i.lo /= beta;
  i.hi /= beta;
  return i;
}

}  // namespace

StabilityMatrix build_s_scalar(double a1, double a2, double lambda_1, double lambda_2, double eta,
                               double x_gamma_prime) {
  const double b1 = a1 - x_gamma_prime, b2 = a2 - x_gamma_prime;
  if (b1 == 0 || b2 == 0 || (b1 > 0) != (b2 > 0))
    throw Error(Errc::ill_posed_interface, "relative speeds must be nonzero and of one sign");
  StabilityMatrix s;
  s.a1 = b1;
  s.a2 = b2;
  s.lambda_1 = lambda_1;
  s.lambda_2 = lambda_2;
  s.eta = eta;
  s.entries.resize(2, 2);
  s.entries(0, 0) = (0.5 - lambda_1) * b1;
  s.entries(1, 1) = -(lambda_2 + 0.5) * eta * b2;
  s.entries(0, 1) = s.entries(1, 0) = (b2 * lambda_1 + b1 * eta * lambda_2) / 2;
  return s;
}

StabilityMatrix build_s_acoustic(const AcousticSystem& sys, double lambda_1, double lambda_2) {
  StabilityMatrix s;
  s.lambda_1 = lambda_1;
  s.lambda_2 = lambda_2;
  s.entries = Eigen::MatrixXd::Zero(4, 4);
  const Eigen::Matrix2d off = (lambda_1 + lambda_2) / 2 * (sys.A_1.transpose() * sys.B_2);
  s.entries.topLeftCorner<2, 2>() = (0.5 - lambda_1) * (sys.A_1.transpose() * sys.B_1);
  s.entries.bottomRightCorner<2, 2>() = -(0.5 + lambda_2) * (sys.A_2.transpose() * sys.B_2);
  s.entries.topRightCorner<2, 2>() = off;
  s.entries.bottomLeftCorner<2, 2>() = (lambda_1 + lambda_2) / 2 * (sys.A_2.transpose() * sys.B_1);
  return s;
}

PsdResult psd_check(const Eigen::MatrixXd& s, double tol) {
  if (s.rows() != s.cols()) throw Error(Errc::asymmetric_input, "matrix is not square");
  const double scale = s.cwiseAbs().maxCoeff();
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
    throw Error(Errc::asymmetric_input, "matrix is not symmetric");
  double lmin, norm;
  if (s.rows() == 2) {
    const double m = (s(0, 0) + s(1, 1)) / 2;
    const double r = std::hypot((s(0, 0) - s(1, 1)) / 2, s(0, 1));
    lmin = m - r;
    norm = std::abs(m) + r;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    lmin = es.eigenvalues().minCoeff();
    norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return {lmin >= -tol * norm, lmin};
}

double EtaInterval::sample() const {
  if (empty) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(hi)) return lo > 0 ? 2 * lo : lo + 1;
  return (lo + hi) / 2;
}

EtaInterval feasible_eta(double a1, double a2, double lambda_1, double lambda_2, bool conservative) {
  if (a1 == 0 || a2 == 0 || (a1 > 0) != (a2 > 0)) return {};
  const double beta = a1 / a2;
  const bool positive = a1 > 0;
  const double tol = 1e-14;

  if (conservative) {
    if (std::abs(lambda_2 - (lambda_1 - 1)) > 1e-12) return {};
    const double sigma = 0.5 - lambda_1;
    if (std::abs(sigma) <= tol) return scaled(interval(1, 1), beta);
    const double bound = lambda_2 == 0 ? inf : lambda_1 * lambda_1 / (lambda_2 * lambda_2);
    if (positive && sigma > 0) return scaled(interval(bound, 1), beta);
    if (!positive && sigma < 0) return scaled(interval(1, bound), beta);
    return {};
  }

  if (lambda_1 - lambda_2 < 0.5) return {};
  if (positive && !(lambda_1 <= 0.5 && lambda_2 <= -0.5)) return {};
  if (!positive && !(lambda_1 >= 0.5 && lambda_2 >= -0.5)) return {};
  // lambda_2^2 x^2 - 2 B x + lambda_1^2 <= 0 with x = beta eta.
  const double B = lambda_1 - lambda_2 - 0.5 + lambda_1 * lambda_2;
  if (lambda_2 == 0) {
    if (B <= 0) return lambda_1 == 0 ? scaled(interval(0, inf), beta) : EtaInterval{};
    return scaled(interval(lambda_1 * lambda_1 / (2 * B), inf), beta);
  }
  const double delta = (lambda_1 - lambda_2 - 0.5) * (lambda_1 - lambda_2 - 0.5 + 2 * lambda_1 * lambda_2);
  if (delta < 0) return {};
  const double l2sq = lambda_2 * lambda_2, root = std::sqrt(delta);
  EtaInterval out = interval(std::max(0.0, (B - root) / l2sq), (B + root) / l2sq);
  if (!out.empty && out.hi <= 0) return {};
  return scaled(out, beta);
}

EtaScan scan_eta(double a1, double a2, double lambda_1, double lambda_2, double lo, double hi, int n, bool log_spaced,
                 double tol) {
  if (!(lo > 0) || !(hi >= lo) || n < 1) throw Error(Errc::invalid_extent, "bad eta scan range");
  EtaScan scan;
  scan.samples = n;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const double eta = log_spaced ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
    if (!psd_check(build_s_scalar(a1, a2, lambda_1, lambda_2, eta), tol).psd) continue;
    if (!scan.psd_count) scan.first_psd = eta;
    scan.last_psd = eta;
    ++scan.psd_count;
  }
  return scan;
}

namespace {

Eigen::VectorXd side_weights(const DgOperators& ops, double eta) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(ops.dofs.size);
  w.tail(ops.dofs.size - ops.dofs.offset[1]).setConstant(eta);
  return w;
}

}  // namespace

double weighted_energy(const Eigen::VectorXd& u, const DgOperators& ops, double eta) {
  if (!(eta > 0)) throw Error(Errc::invalid_extent, "eta must be positive");
  const Eigen::VectorXd wu = side_weights(ops, eta).cwiseProduct(u);
  return 0.5 * wu.dot(ops.mass * u);
}

double weighted_energy_rate(const Eigen::VectorXd& u, const DgOperators& ops, double eta) {
  if (!(eta > 0)) throw Error(Errc::invalid_extent, "eta must be positive");
  const Eigen::VectorXd wu = side_weights(ops, eta).cwiseProduct(u);
  return -wu.dot(ops.spatial * u);
}

std::vector<RegionPoint> region_map(double a1, double a2, double l1_min, double l1_max, double l2_min, double l2_max,
                                    int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw Error(Errc::invalid_count, "empty region grid");
  std::vector<RegionPoint> out;
  out.reserve(static_cast<std::size_t>(n1) * n2);
  auto at = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      RegionPoint p;
      p.lambda_1 = at(l1_min, l1_max, n1, i);
      p.lambda_2 = at(l2_min, l2_max, n2, j);
      const EtaInterval e = feasible_eta(a1, a2, p.lambda_1, p.lambda_2, false);
      p.feasible = !e.empty;
      if (p.feasible) {
        p.eta_lo = e.lo;
        p.eta_hi = e.hi;
      }
      out.push_back(p);
    }
  return out;
}

}  // namespace cutdg
