#include "cutdg/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>

#include "cutdg/acoustic.hpp"
#include "cutdg/assembly2d.hpp"
#include "cutdg/conservation.hpp"
#include "cutdg/coupled.hpp"
#include "cutdg/error.hpp"
#include "cutdg/parallel.hpp"
#include "cutdg/timestepper.hpp"

namespace cutdg {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

PenaltyConfig penalties_of(const ExperimentSpec& s) { return {s.lambda_1, s.lambda_2, s.gamma_M, s.gamma_A, {}}; }

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

bool keep(const ExperimentSpec& s, int step, int total) {
  return step == total || step % std::max(1, s.record_every) == 0;
}

int step_count(double t_end, double dt) {
  if (!(dt > 0)) throw Error(Errc::invalid_override, "non-positive time step");
  return t_end > 0 ? std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9))) : 0;
}

// Method-of-lines run of a 1D operator set with the conservation recorder attached.
struct LinesRun {
  Eigen::VectorXd u;
  ConservationTrace trace;
  std::vector<double> times, energy;
  double dt = 0;
  int steps = 0;
};

LinesRun run_lines(const ExperimentSpec& spec, const DgOperators& ops, const Eigen::VectorXd& u0, double dt_max,
                   const BoundaryDataLadder& left, const BoundaryDataLadder& right,
                   const std::function<double(const Eigen::VectorXd&)>& energy) {
  LinesRun run;
  run.steps = step_count(spec.t_end, dt_max);
  run.dt = run.steps ? spec.t_end / run.steps : 0;
  const RkScheme scheme = RkScheme::for_degree(ops.degree);
  const SemiDiscrete1D system(ops);
  ConservationRecorder rec(ops, scheme, u0);
  const StageObserver obs = rec.observer();
  run.u = u0;
  run.times.push_back(0);
  run.energy.push_back(energy(u0));
  for (int k = 0; k < run.steps; ++k) {
    const double t = k * run.dt;
    run.u = step(scheme, system, run.u, t, run.dt, left, right, obs);
    rec.finish_step((k + 1) * run.dt, run.dt, run.u);
    if (keep(spec, k + 1, run.steps)) {
      run.times.push_back((k + 1) * run.dt);
      run.energy.push_back(energy(run.u));
    }
  }
  const ConservationTrace& full = rec.trace();
  run.trace.times.push_back(full.times.front());
  run.trace.error.push_back(full.error.front());
  for (std::size_t i = 1; i < full.times.size(); ++i)
    if (keep(spec, static_cast<int>(i), run.steps)) {
      run.trace.times.push_back(full.times[i]);
      run.trace.error.push_back(full.error[i]);
    }
  return run;
}

void fill_trace(RunReport& r, const ConservationTrace& tr) {
  r.times = tr.times;
  r.conservation.clear();
  for (const auto& e : tr.error) {
    Eigen::Index k;
    e.cwiseAbs().maxCoeff(&k);
    r.conservation.push_back(e(k));
  }
}

// Stationary scalar problems on [-1, 1] with a1 = 2, a2 = 1.
RunReport run_stationary(const ExperimentSpec& s) {
  RunReport r;
  const double a1 = 2, a2 = 1;
  const BackgroundMesh1D mesh = build_mesh(-1, 1, s.n);
  r.h = mesh.h();
  const bool accuracy = s.preset == "stationary_scalar_accuracy";
  const double xg = s.preset == "alpha_sweep" ? s.alpha * mesh.h() : 1e-4;
  const FluxModel flux = FluxModel::scalar(a1, a2);
  const DgOperators ops = assemble_operators(mesh, xg, s.degree, penalties_of(s), flux, BoundarySpec::upwind(flux));

  std::function<double(double)> g, dg, d2g;
  ExactFunction exact;
  Eigen::VectorXd u0;
  if (accuracy) {
    g = [](double t) { return std::sin(2 * pi * (-1 - 2 * t)); };
    dg = [](double t) { return -4 * pi * std::cos(2 * pi * (-1 - 2 * t)); };
    d2g = [](double t) { return -16 * pi * pi * std::sin(2 * pi * (-1 - 2 * t)); };
    exact = [&, T = s.t_end](int side, double x) {
      return side == 1 ? std::sin(2 * pi * (x - 2 * T)) : 2 * std::sin(4 * pi * (x - T - xg / 2));
    };
    u0 = project_initial(ops, SideFunction([&](int side, double x) {
                           return side == 1 ? std::sin(2 * pi * x) : 2 * std::sin(4 * pi * (x - xg / 2));
                         }));
  } else {
    g = [](double t) { return std::sin(4 * pi * (-1 + 3 * t)); };
    dg = [](double t) { return 12 * pi * std::cos(4 * pi * (-1 + 3 * t)); };
    d2g = [](double t) { return -144 * pi * pi * std::sin(4 * pi * (-1 + 3 * t)); };
    exact = [&, T = s.t_end](int side, double x) {
      const double arrival = side == 1 ? (x + 1) / a1 : (xg + 1) / a1 + (x - xg) / a2;
      if (T < arrival) return 0.0;
      return (side == 1 ? 1.0 : a1 / a2) * g(T - arrival);
    };
    u0 = Eigen::VectorXd::Zero(ops.dofs.size);
  }
  const BoundaryDataLadder left([&](double t) { return scalar(g(t)); }, [&](double t) { return scalar(dg(t)); },
                                [&](double t) { return scalar(d2g(t)); });
  const auto courant = s.cfl > 0 ? std::optional<double>(s.cfl) : std::nullopt;
  const LinesRun run = run_lines(s, ops, u0, cfl_dt(mesh.h(), flux, s.degree, courant), left,
                                 BoundaryDataLadder::zero(1),
                                 [&](const Eigen::VectorXd& u) { return weighted_energy(u, ops, 1.0); });
  r.dt = run.dt;
  r.steps = run.steps;
  r.norms = error_norms(ops, run.u, exact);
  fill_trace(r, run.trace);
  r.energy = run.energy;
  r.condition = condition_number(ops.mass);
  r.extra["x_gamma"] = xg;
  return r;
}

RunReport run_acoustic(const ExperimentSpec& s) {
  RunReport r;
  const AcousticSystem sys = AcousticSystem::make({1000, 1500}, {1200, 2800});
  const double xg = 96.3;
  const AcousticExact exact(sys, xg);
  const BackgroundMesh1D mesh = build_mesh(0, 300, s.n);
  r.h = mesh.h();
  const FluxModel flux = sys.flux();
  const DgOperators ops = assemble_operators(mesh, xg, s.degree, penalties_of(s), flux, BoundarySpec::data_both());
  const Eigen::VectorXd u0 = project_initial(
      ops, SideVectorFunction([&](int side, double x) { return Eigen::VectorXd(exact.conservative(side, x, 0)); }));
  const auto courant = s.cfl > 0 ? std::optional<double>(s.cfl) : std::nullopt;
  const LinesRun run =
      run_lines(s, ops, u0, cfl_dt(mesh.h(), flux, s.degree, courant), BoundaryDataLadder::zero(2),
                BoundaryDataLadder::zero(2), [&](const Eigen::VectorXd& u) { return acoustic_energy(sys, ops, u); });
  r.dt = run.dt;
  r.steps = run.steps;
  const double T = s.t_end;
  auto p_of = [&](int side, int elem, double x) {
    const AcousticMaterial& m = sys.material(side);
    return evaluate(ops, run.u, side, elem, x, 1) * m.rho * m.c * m.c;
  };
  auto v_of = [&](int side, int elem, double x) { return evaluate(ops, run.u, side, elem, x, 0) / sys.material(side).rho; };
  const auto pieces = physical_pieces(ops);
  r.norms = error_norms(pieces, s.degree + 3, p_of, [&](int side, double x) { return exact.primitive(side, x, T)(1); });
  const ErrorNorms nv =
      error_norms(pieces, s.degree + 3, v_of, [&](int side, double x) { return exact.primitive(side, x, T)(0); });
  r.extra["velocity_l2"] = nv.l2;
  r.extra["velocity_linf"] = nv.linf;
  double cm = 0, cq = 0;
  for (const auto& e : run.trace.error) {
    cm = std::max(cm, std::abs(e(0)));
    cq = std::max(cq, std::abs(e(1)));
  }
  r.extra["conservation_m_max"] = cm;
  r.extra["conservation_q_max"] = cq;
  r.extra["interface_block_max"] = build_s_acoustic(sys, s.lambda_1, s.lambda_2).entries.cwiseAbs().maxCoeff();
  fill_trace(r, run.trace);
  r.energy = run.energy;
  r.condition = condition_number(ops.mass);
  return r;
}

// Characteristic solution of the moving problem with zero initial data and inflow g.
double moving_inflow_exact(const InterfacePath& path, double a1, double a2, const std::function<double(double)>& g,
                           int side, double x, double t) {
  auto u1 = [&](double y, double s) {
    const double arrival = (y + 1) / a1;
    return s < arrival ? 0.0 : g(s - arrival);
  };
  if (side == 1) return u1(x, t);
  auto phi = [&](double s) { return x - a2 * (t - s) - path.position(s); };
  if (phi(0) >= 0) return 0.0;
  double lo = 0, hi = t;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = (lo + hi) / 2;
    (phi(mid) < 0 ? lo : hi) = mid;
  }
  const double s = (lo + hi) / 2, v = path.velocity(s);
  return (a1 - v) / (a2 - v) * u1(path.position(s), s);
}

RunReport run_moving(const ExperimentSpec& s) {
  RunReport r;
  const double a1 = 2, a2 = 1;
  SpaceTimeConfig c;
  c.mesh = build_mesh(-1, 1, s.n);
  r.h = c.mesh.h();
  c.a1 = a1;
  c.a2 = a2;
  c.penalties = penalties_of(s);
  c.rs = s.degree;
  c.rt = s.time_degree;
  c.formulation = s.formulation;
  c.t_end = s.t_end;
  ExactFunction exact;
  if (s.preset == "moving_accuracy") {
    const double x0 = 1e-4, xp = 0.111, beta = (a1 - xp) / (a2 - xp);
    c.path = InterfacePath::linear(x0, xp);
    c.inflow = [](double t) { return std::sin(2 * pi * (-1 - 2 * t)); };
    c.initial = [=](int side, double x) {
      return side == 1 ? std::sin(2 * pi * x) : beta * std::sin(2 * pi * beta * x + 2 * pi * x0 * (1 - beta));
    };
    c.dt = s.cfl * c.mesh.h();
    exact = [=, T = s.t_end](int side, double x) {
      return side == 1 ? std::sin(2 * pi * (x - 2 * T))
                       : beta * std::sin(2 * pi * beta * (x - T) + 2 * pi * x0 * (1 - beta));
    };
  } else {
    c.path = InterfacePath::sinusoidal_in(-0.499, -1, 1);
    c.inflow = [](double t) { return std::sin(4 * pi * (-1 + 3 * t)); };
    c.initial = [](int, double) { return 0.0; };
    c.dt = s.cfl * c.mesh.h() / std::max(a1, a2);
    exact = [path = c.path, g = c.inflow, T = s.t_end](int side, double x) {
      return moving_inflow_exact(path, 2, 1, g, side, x, T);
    };
  }
  const SpaceTimeResult res = advance(c);
  r.steps = res.slabs;
  r.dt = res.slabs ? s.t_end / res.slabs : 0;
  r.norms = error_norms(res.final, c.path.position(s.t_end), exact);
  for (std::size_t i = 0; i < res.times.size(); ++i)
    if (i == 0 || keep(s, static_cast<int>(i), res.slabs)) {
      r.times.push_back(res.times[i]);
      r.conservation.push_back(res.conservation[i]);
      r.energy.push_back(res.energy[i]);
    }
  r.extra["sign_warnings"] = res.sign_warnings;
  return r;
}

RunReport run_coupled(const ExperimentSpec& s) {
  RunReport r;
  const double a1 = 2, a2 = 1;
  CoupledConfig c;
  c.mesh = build_mesh(-1, 1, s.n);
  r.h = c.mesh.h();
  c.a1 = a1;
  c.a2 = a2;
  c.penalties = penalties_of(s);
  c.t_end = s.t_end;
  c.dt = s.cfl * c.mesh.h();
  ExactFunction exact;
  if (s.variant == "conservation") {
    c.path = InterfacePath::sinusoidal_in(-0.499, -1, 1);
    c.inflow = [](double t) { return std::sin(4 * pi * (-1 + 3 * t)); };
    c.initial = [](int, double) { return 0.0; };
    exact = [path = c.path, g = c.inflow, T = s.t_end](int side, double x) {
      return moving_inflow_exact(path, 2, 1, g, side, x, T);
    };
  } else {
    const double x0 = 1e-4, xp = 0.111, beta = (a1 - xp) / (a2 - xp);
    c.path = InterfacePath::linear(x0, xp);
    c.inflow = [](double t) { return std::sin(2 * pi * (-1 - 2 * t)); };
    c.initial = [=](int side, double x) {
      return side == 1 ? std::sin(2 * pi * x) : beta * std::sin(2 * pi * beta * x + 2 * pi * x0 * (1 - beta));
    };
    exact = [=, T = s.t_end](int side, double x) {
      return side == 1 ? std::sin(2 * pi * (x - 2 * T))
                       : beta * std::sin(2 * pi * beta * (x - T) + 2 * pi * x0 * (1 - beta));
    };
  }
  const CoupledResult res = coupled_advance(c);
  r.steps = res.slabs;
  r.dt = res.slabs ? s.t_end / res.slabs : 0;
  r.norms = error_norms(res.final, c.path.position(s.t_end), exact);
  for (std::size_t i = 0; i < res.times.size(); ++i)
    if (i == 0 || keep(s, static_cast<int>(i), res.slabs)) {
      r.times.push_back(res.times[i]);
      r.conservation.push_back(res.conservation[i]);
    }
  r.extra["flux_mismatch"] = res.flux_mismatch;
  return r;
}

RunReport run_twod(const ExperimentSpec& s) {
  RunReport r;
  const bool convergence = s.preset == "twod_convergence";
  const TriMesh mesh = build_tri_mesh(-1, 1, -1, 1, s.n, s.n);
  r.h = mesh.cell_size();
  const double c0 = convergence ? 0.5 : 0.25;
  const LineInterface line = LineInterface::diagonal(c0);
  const Vec2 a1(3, 1), a2 = convergence ? Vec2(2, 1) : Vec2(1, 2);
  const Operators2D ops = assemble_2d(mesh, line, s.degree, penalties_of(s), a1, a2);

  PlaneFunction init;
  PlaneTimeFunction g;
  PlaneFunction exact;
  const double T = s.t_end;
  if (convergence) {
    auto u = [=](int side, const Vec2& x, double t) {
      return side == 1 ? std::sin(pi * (x(0) + x(1) - 4 * t))
                       : 4.0 / 3 * std::sin(4.0 / 3 * pi * (x(0) + x(1) - 3 * t - c0 / 4));
    };
    init = [=](int side, const Vec2& x) { return u(side, x, 0); };
    g = [=](const Vec2& x, double t) { return u(1, x, t); };
    exact = [=](int side, const Vec2& x) { return u(side, x, T); };
  } else {
    auto f = [](const Vec2& x) { return (x - Vec2(-0.3, -0.3)).norm() < 0.3 ? 1.0 : 0.0; };
    auto inside = [&](const Vec2& x) {
      return x(0) >= mesh.x_min && x(0) <= mesh.x_max && x(1) >= mesh.y_min && x(1) <= mesh.y_max;
    };
    init = [=](int, const Vec2& x) { return f(x); };
    g = [](const Vec2&, double) { return 0.0; };
    exact = [=](int side, const Vec2& x) {
      const double a1n = a1.dot(line.n), a2n = a2.dot(line.n);
      auto u1 = [&](const Vec2& y, double t) {
        const Vec2 foot = y - a1 * t;
        return inside(foot) ? f(foot) : 0.0;
      };
      if (side == 1) return u1(x, T);
      const double tau = line.level(x) / a2n;
      if (tau >= T) {
        const Vec2 foot = x - a2 * T;
        return inside(foot) ? f(foot) : 0.0;
      }
      return a1n / a2n * u1(x - a2 * tau, T - tau);
    };
  }
  const Eigen::VectorXd u0 = project_2d(ops, init, convergence ? -1 : 8);
  const double dt = s.cfl * mesh.cell_size() / ((2 * s.degree + 1) * std::max(a1.norm(), a2.norm()));
  const Run2DResult res = advance_2d(ops, u0, g, T, dt, RkScheme::for_degree(s.degree), s.record_every);
  r.steps = res.steps;
  r.dt = res.steps ? T / res.steps : 0;
  r.norms = error_norms_2d(ops, res.u, exact);
  r.times = res.times;
  r.conservation = res.conservation;
  return r;
}

RunReport run_region(const ExperimentSpec& s) {
  RunReport r;
  const auto pts = region_map(2, 1, -1.5, 1.5, -2.5, 0.5, s.n, s.n);
  int feasible = 0;
  for (const auto& p : pts) feasible += p.feasible;
  r.extra["feasible_fraction"] = static_cast<double>(feasible) / pts.size();
  r.norms = {nan, nan, nan};
  return r;
}

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets{
      {"stationary_scalar_accuracy", "stationary interface, smooth data, errors at t = 1"},
      {"stationary_scalar_conservation", "stationary interface, zero initial data, conservation error e(t)"},
      {"acoustic", "two-material acoustic pulse, p error at t = 39 ms"},
      {"moving_accuracy", "space-time scheme, linearly moving interface, errors at t = 0.1"},
      {"moving_conservation", "space-time scheme, oscillating interface, conservation error e(t)"},
      {"coupled", "locally implicit scheme, errors and conservation"},
      {"twod_convergence", "triangulated square, straight interface, smooth data"},
      {"twod_conservation", "triangulated square, indicator of a disc crossing the interface"},
      {"alpha_sweep", "stationary conservation setup with x_gamma = alpha h, N = 400"},
      {"region_map", "penalty pairs admitting an energy weight eta"},
  };
  return presets;
}

ExperimentSpec preset_defaults(const std::string& id) {
  ExperimentSpec s;
  s.preset = id;
  if (id == "stationary_scalar_accuracy") {
    s.n = 80;
  } else if (id == "stationary_scalar_conservation") {
    s.n = 40;
    s.degree = 2;
  } else if (id == "alpha_sweep") {
    s.n = 400;
    s.cfl = 0.2;
  } else if (id == "acoustic") {
    s.n = 400;
    s.degree = 2;
    s.lambda_1 = 0.5;
    s.lambda_2 = -0.5;
    s.t_end = 0.039;
  } else if (id == "moving_accuracy") {
    s.n = 80;
    s.lambda_1 = 0;
    s.lambda_2 = -1;
    s.cfl = 1.0 / 12;
    s.t_end = 0.1;
  } else if (id == "moving_conservation") {
    s.n = 400;
    s.lambda_1 = 0;
    s.lambda_2 = -1;
    s.cfl = 1.0 / 6;
  } else if (id == "coupled") {
    s.n = 80;
    s.lambda_1 = 0;
    s.lambda_2 = -1;
    s.cfl = 1.0 / 12;
    s.t_end = 0.1;
    s.variant = "accuracy";
  } else if (id == "twod_convergence") {
    s.n = 20;
    s.cfl = 0.5;
  } else if (id == "twod_conservation") {
    s.n = 100;
    s.lambda_1 = 0;
    s.lambda_2 = -1;
    s.cfl = 0.5;
    s.t_end = 0.4;
  } else if (id == "region_map") {
    s.n = 61;
  } else {
    throw Error(Errc::unknown_preset, "unknown preset '" + id + "'");
  }
  return s;
}

void validate(const ExperimentSpec& s) {
  auto bad = [](const std::string& what) { throw Error(Errc::invalid_override, what); };
  bool known = false;
  for (const auto& p : list_presets()) known = known || p.id == s.preset;
  if (!known) throw Error(Errc::unknown_preset, "unknown preset '" + s.preset + "'");
  if (s.n < 1) bad("n must be positive");
  const bool st = s.preset == "moving_accuracy" || s.preset == "moving_conservation";
  const bool cp = s.preset == "coupled";
  if (s.degree < 0 || s.degree > (s.preset.rfind("twod", 0) == 0 ? 6 : 8)) bad("degree out of range");
  if (!st && !cp && s.preset != "region_map" && (s.degree < 1 || s.degree > 3) && s.preset.rfind("twod", 0) != 0)
    bad("explicit 1D presets support degree 1..3");
  if (cp && s.degree != 1) bad("the locally implicit scheme uses degree 1");
  if (s.time_degree < 0 || s.time_degree > 4) bad("time degree out of range");
  if (!(s.t_end >= 0)) bad("t_end must be non-negative");
  if (s.cfl < 0) bad("cfl must be non-negative");
  if ((st || cp || s.preset.rfind("twod", 0) == 0) && !(s.cfl > 0)) bad("cfl must be positive for this preset");
  if (!(s.alpha >= 0 && s.alpha <= 1)) bad("alpha must lie in [0, 1]");
  if (s.gamma_M < 0 || s.gamma_A < 0) bad("ghost penalty weights must be non-negative");
  if (cp && s.variant != "accuracy" && s.variant != "conservation") bad("coupled variant is accuracy or conservation");
  if (s.record_every < 1) bad("record_every must be positive");
}

RunReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto start = Clock::now();
  RunReport r;
  const std::string& p = spec.preset;
  if (p == "stationary_scalar_accuracy" || p == "stationary_scalar_conservation" || p == "alpha_sweep")
    r = run_stationary(spec);
  else if (p == "acoustic")
    r = run_acoustic(spec);
  else if (p == "moving_accuracy" || p == "moving_conservation")
    r = run_moving(spec);
  else if (p == "coupled")
    r = run_coupled(spec);
  else if (p == "twod_convergence" || p == "twod_conservation")
    r = run_twod(spec);
  else
    r = run_region(spec);
  r.spec = spec;
  r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::vector<ConvergenceRow> convergence_table(const ExperimentSpec& base, const std::vector<int>& ns) {
  std::vector<ConvergenceRow> rows(ns.size());
  parallel_for(static_cast<int>(ns.size()), [&](int i) {
    ExperimentSpec s = base;
    s.n = ns[i];
    s.record_every = 1 << 30;
    const RunReport r = run_experiment(s);
    rows[i] = {ns[i], r.h, r.norms, nan};
  });
  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].order_l2 = std::log(rows[i - 1].norms.l2 / rows[i].norms.l2) /
                       std::log(static_cast<double>(rows[i].n) / rows[i - 1].n);
  return rows;
}

double fitted_order(const std::vector<ConvergenceRow>& rows, int count) {
  const int n = std::min<int>(count, static_cast<int>(rows.size()));
  if (n < 2) return nan;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = rows.size() - n; i < rows.size(); ++i) {
    const double x = std::log(static_cast<double>(rows[i].n)), y = std::log(rows[i].norms.l2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<SweepRow> sweep_alpha(const ExperimentSpec& base, int samples, bool with_errors) {
  if (samples < 1) throw Error(Errc::invalid_override, "need at least one alpha sample");
  std::vector<SweepRow> rows(samples);
  parallel_for(samples, [&](int i) {
    ExperimentSpec s = base;
    s.preset = "alpha_sweep";
    s.alpha = (i + 0.5) / samples;
    s.record_every = 1 << 30;
    SweepRow& row = rows[i];
    row.alpha = s.alpha;
    if (with_errors) {
      const RunReport r = run_experiment(s);
      row.norms = r.norms;
      row.condition = r.condition;
    } else {
      validate(s);
      const BackgroundMesh1D mesh = build_mesh(-1, 1, s.n);
      const auto [s1, s2] = classify(mesh, s.alpha * mesh.h());
      row.norms = {nan, nan, nan};
      row.condition = condition_number(assemble_mass(mesh, s1, s2, s.degree, penalties_of(s)));
    }
  });
  return rows;
}

Table convergence_csv(const std::vector<ConvergenceRow>& rows) {
  Table t{{"N", "h", "L1", "L2", "Linf", "order_L2"}, {}};
  for (const auto& r : rows) t.rows.push_back({double(r.n), r.h, r.norms.l1, r.norms.l2, r.norms.linf, r.order_l2});
  return t;
}

Table trace_csv(const RunReport& r) {
  Table t{{"t", "e", "energy"}, {}};
  for (std::size_t i = 0; i < r.times.size(); ++i)
    t.rows.push_back({r.times[i], r.conservation[i], i < r.energy.size() ? r.energy[i] : nan});
  return t;
}

Table sweep_csv(const std::vector<SweepRow>& rows) {
  Table t{{"alpha", "L1", "L2", "Linf", "cond"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.alpha, r.norms.l1, r.norms.l2, r.norms.linf, r.condition});
  return t;
}

Table region_csv(const std::vector<RegionPoint>& points) {
  Table t{{"lambda1", "lambda2", "feasible", "eta_lo", "eta_hi"}, {}};
  for (const auto& p : points)
    t.rows.push_back({p.lambda_1, p.lambda_2, p.feasible ? 1.0 : 0.0, p.feasible ? p.eta_lo : nan,
                      p.feasible ? p.eta_hi : nan});
  return t;
}

std::string report_json(const RunReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["preset"] = r.spec.preset;
  j["n"] = r.spec.n;
  j["degree"] = r.spec.degree;
  j["time_degree"] = r.spec.time_degree;
  j["lambda"] = {r.spec.lambda_1, r.spec.lambda_2};
  j["gamma"] = {{"M", r.spec.gamma_M}, {"A", r.spec.gamma_A}};
  j["cfl"] = r.spec.cfl;
  j["t_end"] = r.spec.t_end;
  j["formulation"] = r.spec.formulation == Formulation::direct ? "direct" : "ibp";
  if (!r.spec.variant.empty()) j["variant"] = r.spec.variant;
  j["h"] = r.h;
  j["dt"] = r.dt;
  j["steps"] = r.steps;
  j["errors"] = {{"L1", num(r.norms.l1)}, {"L2", num(r.norms.l2)}, {"Linf", num(r.norms.linf)}};
  double emax = 0;
  for (double e : r.conservation) emax = std::max(emax, std::abs(e));
  j["conservation"] = {{"max_abs", emax}, {"final", r.conservation.empty() ? 0.0 : r.conservation.back()}};
  j["condition"] = num(r.condition);
  j["wall_time"] = r.wall_time;
  nlohmann::json extra = nlohmann::json::object();
  for (const auto& [k, v] : r.extra) extra[k] = num(v);
  j["extra"] = extra;
  j["trace"] = {{"t", r.times}, {"e", r.conservation}, {"energy", r.energy}};
  return j.dump(2) + "\n";
}

}  // namespace cutdg
