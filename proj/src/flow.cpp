#include "mcf/flow.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/errors.hpp"
#include "mcf/geometry.hpp"
#include "mcf/numerics/interp.hpp"
#include "mcf/numerics/tridiag.hpp"

namespace mcf {

namespace {

bool dirichlet(const Boundary& b) { return b.kind == Boundary::Kind::Pinned || b.kind == Boundary::Kind::Trace; }

// G(Q) with its tridiagonal Jacobian; Dirichlet rows are left at zero.
struct Operator {
  std::vector<double> G, sub, diag, sup;
};

void row(int n, double r, double hm, double hp, const double* q, Operator& op, std::size_t i) {
  const double wm = -hp / (hm * (hm + hp)), w0 = (hp - hm) / (hm * hp), wp = hm / (hp * (hm + hp));
  const double cm = 2 / (hm * (hm + hp)), c0 = -2 / (hm * hp), cp = 2 / (hp * (hm + hp));
  const double q1 = wm * q[-1] + w0 * q[0] + wp * q[1];
  const double q2 = cm * q[-1] + c0 * q[0] + cp * q[1];
  const double g = 1 + q1 * q1;
  op.G[i] = q2 / g + (n - 1) * q1 / r - (n - 1) / q[0];
  const double dq2 = 1 / g;
  const double dq1 = -2 * q1 * q2 / (g * g) + (n - 1) / r;
  const double dq = (n - 1) / (q[0] * q[0]);
  op.sub[i - 1] = dq2 * cm + dq1 * wm;
  op.diag[i] = dq2 * c0 + dq1 * w0 + dq;
  op.sup[i] = dq2 * cp + dq1 * wp;
}

Operator assemble(int n, const ProfileState& s, const std::vector<double>& Q) {
  const auto& r = s.grid;
  const std::size_t N = r.size();
  Operator op{std::vector<double>(N, 0.0), std::vector<double>(N - 1, 0.0), std::vector<double>(N, 0.0),
              std::vector<double>(N - 1, 0.0)};
  for (std::size_t i = 1; i + 1 < N; ++i) row(n, r[i], r[i] - r[i - 1], r[i + 1] - r[i], &Q[i], op, i);
  // Reflected ghost node: Q'' = 2 (Q_1 - Q_0) / h^2 at a symmetric end.
  auto mirrored = [&](std::size_t b, std::size_t nb, double factor, double* off) {
    const double h = std::abs(r[nb] - r[b]);
    const double q2 = 2 * (Q[nb] - Q[b]) / (h * h);
    op.G[b] = factor * q2 - (n - 1) / Q[b];
    op.diag[b] = -factor * 2 / (h * h) + (n - 1) / (Q[b] * Q[b]);
    *off = factor * 2 / (h * h);
  };
  if (s.left.kind == Boundary::Kind::Axis) mirrored(0, 1, n, &op.sup[0]);  // (n-1)Q'/r -> (n-1)Q''(0)
  if (s.left.kind == Boundary::Kind::Neumann) mirrored(0, 1, 1.0, &op.sup[0]);
  if (s.right.kind == Boundary::Kind::Neumann) mirrored(N - 1, N - 2, 1.0, &op.sub[N - 2]);
  return op;
}

// Solves Q - c G(Q) = rhs on free rows with Dirichlet values imposed at time t.
std::vector<double> implicit_solve(int n, const ProfileState& s, double c, const std::vector<double>& rhs,
                                   std::vector<double> Q, double t, const StepOptions& opt) {
  const std::size_t N = Q.size();
  const bool dl = dirichlet(s.left), dr = dirichlet(s.right);
  if (dl) Q[0] = s.left.at(t);
  if (dr) Q[N - 1] = s.right.at(t);
  double qnorm = 0;
  for (double q : Q) qnorm = std::max(qnorm, std::abs(q));
  for (int it = 0; it < opt.max_newton; ++it) {
    for (double q : Q)
      if (!(q > 0)) fail(ErrorCode::QNonPositive, "profile reached Q <= 0 at t = " + std::to_string(t));
    Operator op = assemble(n, s, Q);
    std::vector<double> F(N), sub(N - 1), diag(N), sup(N - 1);
    double res = 0;
    for (std::size_t i = 0; i < N; ++i) {
      F[i] = Q[i] - c * op.G[i] - rhs[i];
      diag[i] = 1 - c * op.diag[i];
      if (i + 1 < N) {
        sub[i] = -c * op.sub[i];
        sup[i] = -c * op.sup[i];
      }
    }
    if (dl) {
      F[0] = 0;
      diag[0] = 1;
      sup[0] = 0;
    }
    if (dr) {
      F[N - 1] = 0;
      diag[N - 1] = 1;
      sub[N - 2] = 0;
    }
    for (double f : F) res = std::max(res, std::abs(f));
    if (it > 0 && res <= opt.newton_tol * qnorm) return Q;  // always take one Newton update
    const auto d = solve_tridiagonal(sub, diag, sup, F);
    double upd = 0;
    for (std::size_t i = 0; i < N; ++i) {
      Q[i] -= d[i];
      upd = std::max(upd, std::abs(d[i]));
    }
    if (!std::isfinite(upd)) break;
    // Update at roundoff level: the residual floor is set by cancellation in G.
    if (upd <= 1e-14 * qnorm) return Q;
  }
  fail(ErrorCode::NewtonDiverged, "Newton iteration did not converge at t = " + std::to_string(t));
}

std::vector<double> one_sided_slopes(const ProfileState& s) {
  const auto& r = s.grid;
  const auto& q = s.Q;
  const std::size_t N = r.size();
  auto slope3 = [](double x0, double x1, double x2, double f0, double f1, double f2) {
    // derivative at x0 of the parabola through the three points
    const double h1 = x1 - x0, h2 = x2 - x0;
    return (f1 * h2 * h2 - f2 * h1 * h1 - f0 * (h2 * h2 - h1 * h1)) / (h1 * h2 * (h2 - h1));
  };
  double lo = s.grid[0] == 0.0 ? 0.0 : slope3(r[0], r[1], r[2], q[0], q[1], q[2]);
  double hi = slope3(r[N - 1], r[N - 2], r[N - 3], q[N - 1], q[N - 2], q[N - 3]);
  return {lo, hi};
}

}  // namespace

void validate(const ProfileState& s) {
  const std::size_t N = s.grid.size();
  if (N < 4 || s.Q.size() != N) fail(ErrorCode::GridMismatch, "profile needs >= 4 matching samples");
  for (std::size_t i = 1; i < N; ++i)
    if (!(s.grid[i] > s.grid[i - 1])) fail(ErrorCode::GridMismatch, "grid must be strictly increasing");
  if (s.grid[0] < 0) fail(ErrorCode::Domain, "radii must be non-negative");
  for (double q : s.Q)
    if (!(q > 0)) fail(ErrorCode::QNonPositive, "profile must be positive");
  if ((s.left.kind == Boundary::Kind::Axis) != (s.grid[0] == 0.0))
    fail(ErrorCode::Domain, "axis boundary condition requires grid[0] == 0 and vice versa");
  if (s.right.kind == Boundary::Kind::Axis) fail(ErrorCode::Domain, "axis condition only applies on the left");
}

ProfileState cylinder_state(int n, double T, std::vector<double> grid) {
  ProfileState s;
  s.Q.assign(grid.size(), std::sqrt(2.0 * (n - 1) * T));
  s.left = grid.at(0) == 0.0 ? Boundary::axis() : Boundary::neumann();
  s.right = Boundary::neumann();
  s.grid = std::move(grid);
  validate(s);
  return s;
}

ProfileState sphere_state(int n, double T, std::vector<double> grid) {
  const double c = 2.0 * (2 * n - 1);
  const double R = grid.back();
  if (R * R >= c * T) fail(ErrorCode::Domain, "sphere grid must end inside the sphere");
  ProfileState s;
  for (double r : grid) s.Q.push_back(std::sqrt(c * T - r * r));
  s.left = Boundary::axis();
  s.right = Boundary::traced([c, T, R](double t) { return std::sqrt(c * (T - t) - R * R); });
  s.grid = std::move(grid);
  validate(s);
  return s;
}

ProfileState cone_state(std::vector<double> grid) {
  ProfileState s;
  s.Q = grid;
  s.left = Boundary::pinned(grid.front());
  s.right = Boundary::pinned(grid.back());
  s.grid = std::move(grid);
  validate(s);
  return s;
}

ProfileState minimal_state(const MinimalProfile& mp, std::vector<double> grid) {
  ProfileState s;
  for (double r : grid) s.Q.push_back(mp.jet_at(r).q);
  s.left = grid.at(0) == 0.0 ? Boundary::axis() : Boundary::pinned(s.Q.front());
  s.right = Boundary::pinned(s.Q.back());
  s.grid = std::move(grid);
  validate(s);
  return s;
}

std::vector<double> flow_rhs(int n, const ProfileState& s) {
  validate(s);
  auto op = assemble(n, s, s.Q);
  if (dirichlet(s.left)) op.G.front() = 0;
  if (dirichlet(s.right)) op.G.back() = 0;
  return op.G;
}

ProfileState step(const ProfileState& s, double dt, int n, const StepOptions& opt) {
  if (!(dt > 0)) fail(ErrorCode::Domain, "time step must be positive");
  const std::size_t N = s.Q.size();
  static const double gamma = 2 - std::sqrt(2.0);
  const Operator op = assemble(n, s, s.Q);
  std::vector<double> rhs(N);
  for (std::size_t i = 0; i < N; ++i) rhs[i] = s.Q[i] + 0.5 * gamma * dt * op.G[i];
  const auto Qg = implicit_solve(n, s, 0.5 * gamma * dt, rhs, s.Q, s.t + gamma * dt, opt);
  const double a = 1 / (gamma * (2 - gamma)), b = (1 - gamma) * (1 - gamma) / (gamma * (2 - gamma));
  for (std::size_t i = 0; i < N; ++i) rhs[i] = a * Qg[i] - b * s.Q[i];
  ProfileState out = s;
  out.Q = implicit_solve(n, s, (1 - gamma) / (2 - gamma) * dt, rhs, Qg, s.t + dt, opt);
  out.t = s.t + dt;
  return out;
}

PointDiagnostics diagnose(int n, const ProfileState& s) {
  PointDiagnostics d;
  const auto jets = finite_difference_jets(s.grid, s.Q);
  d.Qmin = *std::min_element(s.Q.begin(), s.Q.end());
  d.Qaxis = s.Q.front();
  for (const auto& j : jets) {
    const CurvatureData c = curvature(n, j);
    d.Hmax = std::max(d.Hmax, std::abs(c.H));
    d.Amax = std::max(d.Amax, std::sqrt(c.A2));
  }
  return d;
}

Trajectory evolve(const ProfileState& initial, int n, double horizon, const StopRule& stop,
                  const EvolveOptions& opt) {
  validate(initial);
  if (!(horizon > 0)) fail(ErrorCode::Domain, "horizon must be positive");
  Trajectory tr;
  const double t_end = initial.t + horizon;
  std::vector<double> snaps;
  for (double ts : opt.snapshot_times)
    if (ts > initial.t && ts < t_end) snaps.push_back(ts);
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  auto record = [&](const ProfileState& s) {
    const PointDiagnostics d = diagnose(n, s);
    tr.diag.times.push_back(s.t);
    tr.diag.Hmax.push_back(d.Hmax);
    tr.diag.Amax.push_back(d.Amax);
    tr.diag.Qmin.push_back(d.Qmin);
    tr.diag.Qaxis.push_back(d.Qaxis);
    if (d.Amax >= stop.Amax_cap) return std::string("Amax_cap");
    if (d.Qmin <= stop.Qmin_floor) return std::string("Qmin_floor");
    return std::string();
  };

  ProfileState s = initial;
  tr.snapshots.push_back(s);
  tr.stop_reason = record(s);
  double dt = opt.fixed_dt > 0 ? opt.fixed_dt : opt.dt_init;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (tr.stop_reason.empty() && s.t < t_end - eps) {
    if (tr.accepted + tr.rejected >= opt.max_steps) fail(ErrorCode::NonConvergence, "flow step budget exhausted");
    const double target = next_snap < snaps.size() ? snaps[next_snap] : t_end;
    double h = std::min({opt.fixed_dt > 0 ? opt.fixed_dt : dt, opt.dt_max, target - s.t});
    const bool hits_target = h >= target - s.t - eps;
    if (hits_target) h = target - s.t;
    ProfileState next;
    if (opt.fixed_dt > 0) {
      next = step(s, h, n, opt.step);
    } else {
      double err = 0;
      try {
        const ProfileState full = step(s, h, n, opt.step);
        next = step(step(s, h / 2, n, opt.step), h / 2, n, opt.step);
        for (std::size_t i = 0; i < s.Q.size(); ++i)
          err = std::max(err, std::abs(next.Q[i] - full.Q[i]) / (3 * (1 + std::abs(next.Q[i]))));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NewtonDiverged && e.code() != ErrorCode::QNonPositive) throw;
        if (h < 1e-14 * std::max(1.0, std::abs(s.t))) throw;
        dt = h / 4;
        ++tr.rejected;
        continue;
      }
      const double fac = std::clamp(0.9 * std::cbrt(opt.tol / std::max(err, 1e-300)), 0.2, 2.0);
      if (err > opt.tol) {
        dt = h * fac;
        ++tr.rejected;
        continue;
      }
      if (!hits_target || fac < 1) dt = h * fac;
    }
    if (hits_target) next.t = target;
    s = std::move(next);
    ++tr.accepted;
    tr.stop_reason = record(s);
    if (hits_target && next_snap < snaps.size() && target == snaps[next_snap]) {
      tr.snapshots.push_back(s);
      ++next_snap;
    }
  }
  if (tr.stop_reason.empty()) tr.stop_reason = "horizon";
  if (tr.snapshots.back().t != s.t) tr.snapshots.push_back(s);
  const auto& qm = tr.diag.Qmin;
  if (qm.size() >= 6 && qm.back() < 0.99 * qm.front()) tr.diag.T_est = estimate_singular_time(tr.diag.times, qm);
  return tr;
}

double estimate_singular_time(const std::vector<double>& t, const std::vector<double>& M, double tail_fraction) {
  const std::size_t N = t.size();
  if (M.size() != N || N < 3) fail(ErrorCode::GridMismatch, "singular time estimate needs >= 3 samples");
  const std::size_t first = std::min(N - 3, static_cast<std::size_t>(std::floor((1 - tail_fraction) * N)));
  // Least squares for M^2 = a + b x + c x^2 with x = t - t_last.
  const double t0 = t.back();
  double S[5] = {0, 0, 0, 0, 0}, R[3] = {0, 0, 0};
  for (std::size_t i = first; i < N; ++i) {
    const double x = t[i] - t0, y = M[i] * M[i];
    double p = 1;
    for (int k = 0; k < 5; ++k, p *= x) {
      S[k] += p;
      if (k < 3) R[k] += p * y;
    }
  }
  // Cramer's rule on the 3x3 normal equations.
  auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h, double i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  };
  const double D = det3(S[0], S[1], S[2], S[1], S[2], S[3], S[2], S[3], S[4]);
  const double a = det3(R[0], S[1], S[2], R[1], S[2], S[3], R[2], S[3], S[4]) / D;
  const double b = det3(S[0], R[0], S[2], S[1], R[1], S[3], S[2], R[2], S[4]) / D;
  const double c = det3(S[0], S[1], R[0], S[1], S[2], R[1], S[2], S[3], R[2]) / D;
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return std::numeric_limits<double>::quiet_NaN();
  double x;
  if (std::abs(c) * std::abs(a) < 1e-12 * b * b) {
    x = -a / b;
  } else {
    const double disc = b * b - 4 * a * c;
    if (disc < 0) return std::numeric_limits<double>::quiet_NaN();
    // Root closest to the data, computed without cancellation.
    const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double x1 = qq / c, x2 = a / qq;
    const double lo = t[first] - t0;
    x = std::numeric_limits<double>::infinity();
    for (double cand : {x1, x2})
      if (cand >= lo && cand < x) x = cand;
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  }
  return t0 + x;
}

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& M, double T, double tau_lo,
                 double tau_hi) {
  if (!(tau_lo > 0) || tau_hi < 10 * tau_lo * (1 - 1e-12))
    fail(ErrorCode::WindowTooNarrow, "rate window must span at least one decade of T - t");
  std::vector<double> tau, m;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] < T)) fail(ErrorCode::Domain, "samples must precede T");
    tau.push_back(T - t[i]);
    m.push_back(M[i]);
  }
  return fit_loglog(tau, m, tau_lo, tau_hi, 3);
}

std::vector<double> interpolate_profile(const ProfileState& s, const std::vector<double>& r) {
  validate(s);
  const auto slopes = one_sided_slopes(s);
  const CubicSpline sp(s.grid, s.Q, slopes[0], slopes[1]);
  std::vector<double> out;
  out.reserve(r.size());
  const double lo = s.grid.front(), hi = s.grid.back();
  for (double x : r) {
    if (x < lo - 1e-12 * hi || x > hi * (1 + 1e-12))
      fail(ErrorCode::Domain, "radius " + std::to_string(x) + " lies outside the profile grid");
    out.push_back(sp(std::clamp(x, lo, hi)));
  }
  return out;
}

namespace {

double remaining(const Params& p, double t) {
  if (!(t < p.T)) fail(ErrorCode::Domain, "rescaling needs t < T");
  return p.T - t;
}

RescaledState rescale(const ProfileState& s, double scale, double stime, const std::vector<double>& x_grid) {
  RescaledState out;
  out.grid = x_grid;
  std::vector<double> r(x_grid.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x_grid[i] * scale;
  out.values = interpolate_profile(s, r);
  for (double& v : out.values) v /= scale;
  out.s = stime;
  out.t = s.t;
  out.scale = scale;
  return out;
}

ProfileState unscale(const RescaledState& L, double scale, double t) {
  ProfileState s;
  s.t = t;
  for (std::size_t i = 0; i < L.grid.size(); ++i) {
    s.grid.push_back(L.grid[i] * scale);
    s.Q.push_back(L.values[i] * scale);
  }
  s.left = s.grid.front() == 0.0 ? Boundary::axis() : Boundary::pinned(s.Q.front());
  s.right = Boundary::pinned(s.Q.back());
  validate(s);
  return s;
}

}  // namespace

double inner_scale(const Params& p, double t) { return std::pow(remaining(p, t), p.sigma_k + 0.5); }

double inner_time(const Params& p, double t) {
  return std::pow(remaining(p, t), -2 * p.sigma_k) / (2 * p.sigma_k);
}

RescaledState to_inner(const ProfileState& s, const Params& p, const std::vector<double>& x_grid) {
  return rescale(s, inner_scale(p, s.t), inner_time(p, s.t), x_grid);
}

ProfileState from_inner(const RescaledState& L, const Params& p) {
  if (!(L.s > 0)) fail(ErrorCode::Domain, "inner time must be positive");
  const double tau = std::pow(2 * p.sigma_k * L.s, -1 / (2 * p.sigma_k));
  return unscale(L, std::pow(tau, p.sigma_k + 0.5), p.T - tau);
}

RescaledState to_parabolic(const ProfileState& s, const Params& p, const std::vector<double>& x_grid) {
  const double tau = remaining(p, s.t);
  return rescale(s, std::sqrt(tau), -std::log(tau), x_grid);
}

ProfileState from_parabolic(const RescaledState& q, const Params& p) {
  const double tau = std::exp(-q.s);
  return unscale(q, std::sqrt(tau), p.T - tau);
}

}  // namespace mcf
