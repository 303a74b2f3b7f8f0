// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cutdg/acoustic.hpp"
#include "cutdg/analysis.hpp"
#include "cutdg/experiments.hpp"
#include "properties.hpp"

using namespace cutdg;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& details) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), details.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }
std::string fix(double v) { return fmt("%.3f", v); }

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool within_rel(double v, double ref, double tol) { return std::abs(v - ref) <= tol * std::abs(ref); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void stationary_convergence() {
  const double ref_l2[] = {5.40e-4, 2.58e-6, 1.07e-8};
  const double ref_order[] = {2.04, 3.00, 4.00};
  for (int r = 1; r <= 3; ++r) {
    ExperimentSpec s = preset_defaults("stationary_scalar_accuracy");
    s.degree = r;
    const auto rows = convergence_table(s, {20, 40, 80, 160, 320});
    const double e = rows.back().norms.l2, p = rows.back().order_l2;
    const bool ok = within_rel(e, ref_l2[r - 1], 0.10) && std::abs(p - ref_order[r - 1]) <= 0.15;
    report(ok, "stationary convergence r=" + std::to_string(r),
           "L2(N=320) = " + sci(e) + " (ref " + sci(ref_l2[r - 1]) + ", tol 10%), order " + fix(p) + " (ref " +
               fix(ref_order[r - 1]) + " +-0.15)");
  }
}

void stationary_conservation() {
  ExperimentSpec s = preset_defaults("stationary_scalar_conservation");
  s.degree = 2;
  s.n = 40;
  s.lambda_1 = 0.1;
  s.lambda_2 = -0.9;
  const double e = max_abs(run_experiment(s).conservation);
  s.lambda_1 = 0.25;
  s.lambda_2 = -0.25;
  const RunReport c = run_experiment(s);
  const double ec = std::abs(c.conservation.back());
  report(e <= 1e-12 && ec >= 1e-9, "stationary conservation",
         "max|e| = " + sci(e) + " (<= 1e-12), control |e(1)| = " + sci(ec) + " (>= 1e-9)");
}

void cut_robustness() {
  ExperimentSpec s = preset_defaults("alpha_sweep");
  s.n = 400;
  s.degree = 1;
  const auto rows = sweep_alpha(s, 400, true);
  double lo = INFINITY, hi = 0;
  for (const SweepRow& w : rows) {
    lo = std::min(lo, w.norms.l2);
    hi = std::max(hi, w.norms.l2);
  }
  const double spread = hi / lo - 1;
  report(spread <= 0.2, "cut robustness L2 spread r=1",
         "400 alpha, L2 in [" + sci(lo) + ", " + sci(hi) + "], spread " + fix(spread) + " (<= 0.20)");
  for (int r = 1; r <= 3; ++r) {
    s.degree = r;
    const auto c = sweep_alpha(s, 400, false);
    double kl = INFINITY, kh = 0;
    for (const SweepRow& w : c) {
      kl = std::min(kl, w.condition);
      kh = std::max(kh, w.condition);
    }
    report(kh / kl <= 10, "cut robustness mass condition r=" + std::to_string(r),
           "kappa in [" + sci(kl) + ", " + sci(kh) + "], max/min " + fix(kh / kl) + " (<= 10)");
  }
}

void acoustic() {
  ExperimentSpec s = preset_defaults("acoustic");
  s.degree = 2;
  std::vector<double> errs;
  double cm = 0, cq = 0, block = 0;
  for (int n : {200, 400, 800, 1600}) {
    s.n = n;
    const RunReport r = run_experiment(s);
    errs.push_back(r.norms.l2);
    cm = std::max(cm, r.extra.at("conservation_m_max"));
    cq = std::max(cq, r.extra.at("conservation_q_max"));
    block = std::max(block, r.extra.at("interface_block_max"));
  }
  const double order = std::log2(errs[2] / errs[3]);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> rho(1, 3000), c(100, 5000);
  double rel = 0;
  for (int i = 0; i < 1000; ++i) {
    const AcousticSystem sys = AcousticSystem::make({rho(gen), c(gen)}, {rho(gen), c(gen)});
    const double scale = sys.B_1.cwiseAbs().maxCoeff() * sys.A_1.cwiseAbs().maxCoeff() +
                         sys.B_2.cwiseAbs().maxCoeff() * sys.A_2.cwiseAbs().maxCoeff();
    rel = std::max(rel, build_s_acoustic(sys, 0.5, -0.5).entries.cwiseAbs().maxCoeff() / scale);
  }
  report(order >= 2.85, "acoustic convergence r=2",
         "p L2 errors N=800/1600 " + sci(errs[2]) + " / " + sci(errs[3]) + ", order " + fix(order) + " (>= 2.85)");
  report(cm <= 1e-11 && cq <= 1e-11, "acoustic conservation",
         "max|e_m| = " + sci(cm) + ", max|e_q| = " + sci(cq) + " (<= 1e-11)");
  report(block <= 1e-14 && rel <= 1e-14, "acoustic interface block",
         "preset |S| = " + sci(block) + ", random materials relative |S| = " + sci(rel) + " (<= 1e-14)");
}

void spacetime_accuracy() {
  ExperimentSpec s = preset_defaults("moving_accuracy");
  s.degree = 1;
  s.time_degree = 1;
  s.cfl = 1.0 / 12;
  const auto a = convergence_table(s, {20, 40, 80, 160, 320});
  const double e = a.back().norms.l2, p = a.back().order_l2;
  report(std::abs(p - 1.99) <= 0.2 && within_rel(e, 6.41e-4, 0.10), "space-time convergence r=(1,1)",
         "L2(N=320) = " + sci(e) + " (ref 6.410e-04, tol 10%), order " + fix(p) + " (1.99 +-0.2)");
  s.degree = 2;
  s.cfl = 0.005;
  const auto b = convergence_table(s, {20, 40, 80, 160});
  const double q = b.back().order_l2;
  report(std::abs(q - 3.0) <= 0.2, "space-time convergence r=(2,1)",
         "L2(N=160) = " + sci(b.back().norms.l2) + ", order " + fix(q) + " (3.0 +-0.2)");
}

void spacetime_conservation() {
  ExperimentSpec s = preset_defaults("moving_conservation");
  s.n = 400;
  s.cfl = 1.0 / 6;
  s.t_end = 1;
  s.record_every = 1000000;
  s.formulation = Formulation::integrated_by_parts;
  const double e = std::abs(run_experiment(s).conservation.back());
  s.formulation = Formulation::direct;
  const double d = std::abs(run_experiment(s).conservation.back());
  report(e <= 1e-12 && d >= 1e-9, "space-time conservation",
         "integrated-by-parts |e(1)| = " + sci(e) + " (<= 1e-12), direct |e(1)| = " + sci(d) + " (>= 1e-9)");
}

void locally_implicit() {
  ExperimentSpec s = preset_defaults("coupled");
  s.variant = "accuracy";
  s.cfl = 1.0 / 12;
  const auto rows = convergence_table(s, {20, 40, 80, 160, 320});
  const double ref[] = {1.90, 1.96, 1.97, 1.99};
  bool ok = true;
  std::string orders;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ok = ok && std::abs(rows[i].order_l2 - ref[i - 1]) <= 0.2;
    orders += (i > 1 ? ", " : "") + fix(rows[i].order_l2) + " (" + fix(ref[i - 1]) + ")";
  }
  report(ok, "locally implicit convergence", "orders " + orders + " +-0.2, L2(N=320) = " + sci(rows.back().norms.l2));

  s.variant = "conservation";
  s.n = 320;
  s.t_end = 1;
  s.record_every = 1;
  const RunReport c = run_experiment(s);
  const double e = max_abs(c.conservation), fm = c.extra.at("flux_mismatch");
  report(e <= 1e-12, "locally implicit conservation",
         "N=320, max|e| = " + sci(e) + " (<= 1e-12), flux mismatch " + sci(fm));
}

void twod_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string details;
  bool ok = true;
  for (int r = 1; r <= 2; ++r) {
    ExperimentSpec s = preset_defaults("twod_convergence");
    s.degree = r;
    s.record_every = 1000000;
    const auto rows = convergence_table(s, {20, 40, 80, 160});
    const double p = rows.back().order_l2;
    ok = ok && std::abs(p - (r + 1)) <= 0.25;
    details += "r=" + std::to_string(r) + " order " + fix(p) + " (" + std::to_string(r + 1) + " +-0.25); ";
  }
  const double wall = seconds_since(t0);
  report(ok && wall <= 600, "2D convergence", details + "wall " + fix(wall) + " s (<= 600)");
}

void twod_conservation() {
  ExperimentSpec s = preset_defaults("twod_conservation");
  s.degree = 1;
  s.n = 100;
  s.lambda_1 = 0;
  s.lambda_2 = -1;
  const RunReport r = run_experiment(s);
  const double e = max_abs(r.conservation);
  s.lambda_1 = 0.25;
  s.lambda_2 = -0.25;
  const RunReport c = run_experiment(s);
  // The disc of radius 0.3 about (-0.3, -0.3) reaches x + y = 0.25 at t_c = (0.85 / sqrt 2 - 0.3) / (4 / sqrt 2);
  // discrete tails arrive earlier, so "before" is the first half of that time.
  const double tc = (0.85 / std::sqrt(2.0) - 0.3) / (4 / std::sqrt(2.0));
  double before = 0, after = 0;
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    double& slot = c.times[i] <= tc / 2 ? before : after;
    slot = std::max(slot, std::abs(c.conservation[i]));
  }
  const bool grows = after >= 1e-9 && after >= 1e3 * std::max(before, 1e-16);
  report(e <= 1e-11 && grows, "2D conservation",
         "lambda=(0,-1) max|e| = " + sci(e) + " (<= 1e-11); lambda=(0.25,-0.25) max|e| for t <= " + fix(tc / 2) +
             " " + sci(before) + ", later " + sci(after) + " (>= 1e3x and >= 1e-9)");
}

void property_suite() {
  double fitted = 0;
  for (int r = 0; r <= 3; ++r) fitted = std::max(fitted, props::fitted_equivalence_error(r));
  report(fitted <= 1e-14, "property fitted equivalence", "max entry difference " + sci(fitted) + " (<= 1e-14)");

  double st = 0;
  for (int r = 0; r <= 3; ++r)
    for (double xg : {1e-4, 0.0371, 0.1 - 1e-9}) st = std::max(st, props::stationary_steady_residual(r, xg));
  const double sp = std::max(props::spacetime_steady_deviation(false), props::spacetime_steady_deviation(true));
  const double cp = std::max(props::coupled_steady_deviation(false), props::coupled_steady_deviation(true));
  double td = 0;
  for (int r = 0; r <= 2; ++r) td = std::max(td, props::twod_steady_residual(r));
  report(std::max({st, sp, cp, td}) <= 1e-12, "property steady states",
         "stationary " + sci(st) + ", space-time " + sci(sp) + ", coupled " + sci(cp) + ", 2D " + sci(td) +
             " (<= 1e-12)");

  double margin = INFINITY;
  for (int r = 0; r <= 3; ++r)
    for (double xg : {1e-4, 0.0371, 0.1249})
      for (double l1 : {0.5, 0.1, -0.7}) margin = std::min(margin, props::dissipativity_margin(r, xg, l1));
  const double slab = props::slab_energy_increase();
  report(margin >= -1e-10 && slab <= 1e-8, "property dissipativity",
         "min relative eigenvalue " + sci(margin) + " (>= -1e-10), slab energy increase " + sci(slab));

  const auto s1 = props::conservative_region_soundness(10000), h1 = props::conservative_region_sharpness(10000);
  const auto s2 = props::nonconservative_region_soundness(10000), h2 = props::nonconservative_region_sharpness(10000);
  report(s1.failures + h1.failures + s2.failures + h2.failures == 0, "property stability regions",
         "failures: conservative soundness " + std::to_string(s1.failures) + "/" + std::to_string(s1.samples) +
             ", sharpness " + std::to_string(h1.failures) + "/" + std::to_string(h1.samples) +
             "; non-conservative soundness " + std::to_string(s2.failures) + "/" + std::to_string(s2.samples) +
             ", sharpness " + std::to_string(h2.failures) + "/" + std::to_string(h2.samples));

  const double g = props::gauss_exactness_error(), p = props::polygon_exactness_error();
  report(std::max(g, p) <= 1e-13, "property quadrature exactness",
         "Gauss " + sci(g) + ", polygons " + sci(p) + " (<= 1e-13)");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  property_suite();
  stationary_conservation();
  stationary_convergence();
  spacetime_conservation();
  spacetime_accuracy();
  locally_implicit();
  acoustic();
  cut_robustness();
  twod_conservation();
  twod_convergence();
  std::printf("%d failing criteria, %.1f s\n", failures, seconds_since(t0));
  return failures ? 1 : 0;
}
