#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mcf/minimal_surface.hpp"
#include "mcf/numerics/fit.hpp"
#include "mcf/params.hpp"

namespace mcf {

/// Boundary condition at one end of the radial grid.
struct Boundary {
  enum class Kind { Axis, Pinned, Trace, Neumann };
  Kind kind = Kind::Pinned;
  double value = 0.0;                   // Pinned
  std::function<double(double)> trace;  // Trace: Q at the boundary as a function of t

  static Boundary axis() { return {Kind::Axis, 0.0, {}}; }
  static Boundary pinned(double v) { return {Kind::Pinned, v, {}}; }
  static Boundary neumann() { return {Kind::Neumann, 0.0, {}}; }
  static Boundary traced(std::function<double(double)> f) { return {Kind::Trace, 0.0, std::move(f)}; }

  double at(double t) const { return kind == Kind::Trace ? trace(t) : value; }
};

/// Profile Q(r, t) sampled on a fixed radial grid. The left boundary is the
/// axis exactly when grid[0] == 0.
struct ProfileState {
  std::vector<double> grid;
  std::vector<double> Q;
  double t = 0.0;
  Boundary left = Boundary::axis();
  Boundary right = Boundary::pinned(0.0);
};

/// Checks grid/Q consistency, positivity and boundary compatibility.
void validate(const ProfileState& s);

// Exact self-similar initial data.
ProfileState cylinder_state(int n, double T, std::vector<double> grid);  // Neumann right end
ProfileState sphere_state(int n, double T, std::vector<double> grid);    // exact trace on the right end
ProfileState cone_state(std::vector<double> grid);                       // pinned ends, grid[0] > 0
ProfileState minimal_state(const MinimalProfile& mp, std::vector<double> grid);

/// Right-hand side of the profile equation at every node; 0 on Dirichlet
/// (pinned or traced) ends.
std::vector<double> flow_rhs(int n, const ProfileState& s);

struct StepOptions {
  double newton_tol = 1e-10;  // residual relative to sup |Q|
  int max_newton = 25;
};

/// One TR-BDF2 step of size dt (L-stable, second order).
ProfileState step(const ProfileState& s, double dt, int n, const StepOptions& opt = {});

struct StopRule {
  double Amax_cap = std::numeric_limits<double>::infinity();
  double Qmin_floor = 0.0;
};

struct EvolveOptions {
  double tol = 1e-8;        // local error target per step (sup norm)
  double dt_init = 1e-4;
  double dt_max = 0.1;
  double fixed_dt = 0.0;    // > 0 disables adaptivity
  std::vector<double> snapshot_times;
  StepOptions step;
  long max_steps = 1'000'000;
};

struct FlowDiagnostics {
  std::vector<double> times, Hmax, Amax, Qmin, Qaxis;
  double T_est = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<ProfileState> snapshots;
  FlowDiagnostics diag;
  std::string stop_reason;  // "horizon", "Amax_cap" or "Qmin_floor"
  long accepted = 0;
  long rejected = 0;
};

struct PointDiagnostics {
  double Hmax = 0, Amax = 0, Qmin = 0, Qaxis = 0;
};
PointDiagnostics diagnose(int n, const ProfileState& s);

/// Evolves until t = initial.t + horizon or a stop rule trips.
Trajectory evolve(const ProfileState& initial, int n, double horizon, const StopRule& stop = {},
                  const EvolveOptions& opt = {});

/// Root of a quadratic fitted to M^2 over the last `tail_fraction` of the
/// samples (exact when M^2 is affine or quadratic in t).
double estimate_singular_time(const std::vector<double>& t, const std::vector<double>& M,
                              double tail_fraction = 0.5);

/// Slope of log M against log(T - t) over T - t in [tau_lo, tau_hi]. The
/// window must span at least one decade (WindowTooNarrow).
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& M, double T, double tau_lo,
                 double tau_hi);

/// Profile rescaled onto a fixed grid: values(x) = scale^{-1} Q(x scale, t)
/// with scale = (T - t)^{sigma_k + 1/2} (inner) or (T - t)^{1/2} (parabolic).
struct RescaledState {
  std::vector<double> grid;
  std::vector<double> values;
  double s = 0.0;
  double t = 0.0;
  double scale = 1.0;
};

/// Q at arbitrary radii inside the grid: clamped cubic spline with axis
/// symmetry when grid[0] == 0.
std::vector<double> interpolate_profile(const ProfileState& s, const std::vector<double>& r);

double inner_time(const Params& p, double t);  // s = (T-t)^{-2 sigma} / (2 sigma)
double inner_scale(const Params& p, double t);

RescaledState to_inner(const ProfileState& s, const Params& p, const std::vector<double>& x_grid);
ProfileState from_inner(const RescaledState& L, const Params& p);
RescaledState to_parabolic(const ProfileState& s, const Params& p, const std::vector<double>& x_grid);
ProfileState from_parabolic(const RescaledState& q, const Params& p);

}  // namespace mcf
