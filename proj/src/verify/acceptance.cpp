#include "mcf/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "mcf/barriers.hpp"
#include "mcf/cone_heat.hpp"
#include "mcf/errors.hpp"
#include "mcf/flow.hpp"
#include "mcf/geometry.hpp"
#include "mcf/jacobi.hpp"
#include "mcf/minimal_surface.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/numerics/quadrature.hpp"
#include "mcf/params.hpp"

namespace mcf {

namespace {

struct Recorder {
  CriterionResult& r;
  void metric(const std::string& k, double v) { r.metrics.emplace_back(k, v); }
  // Records the value and fails the criterion if `ok` is false.
  void check(const std::string& k, double v, bool ok) {
    metric(k, v);
    if (!ok) r.failures.push_back(k);
  }
};

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ProfileJet sphere_jet(double R, double r) {
  const double q = std::sqrt(R * R - r * r);
  return {r, q, -r / q, -R * R / (q * q * q)};
}

void curvature_oracles(Recorder& rec) {
  double cone = 0, cyl = 0, sph = 0;
  for (int n : {4, 5, 7}) {
    for (double r : {0.25, 1.0, 3.0, 10.0}) {
      const auto c = curvature(n, {r, r, 1.0, 0.0});
      cone = std::max({cone, std::abs(c.H), std::abs(c.A2 - (n - 1) / (r * r))});
    }
    for (double q : {0.5, 1.0, 3.0})
      for (double r : {0.0, 0.7, 4.0}) {
        const auto c = curvature(n, {r, q, 0.0, 0.0});
        cyl = std::max(cyl, std::abs(c.H + (n - 1) / q));
      }
    const double R = 1.5;
    for (double r : {0.0, 0.3, 0.9, 1.3}) {
      const auto c = curvature(n, sphere_jet(R, r));
      sph = std::max({sph, std::abs(c.H + (2 * n - 1) / R), std::abs(c.A2 - (2 * n - 1) / (R * R))});
    }
  }
  rec.check("cone_err", cone, cone <= 1e-10);
  rec.check("cylinder_err", cyl, cyl <= 1e-10);
  rec.check("sphere_err", sph, sph <= 1e-10);

  std::vector<double> errs;
  for (int N : {100, 200, 400, 800}) {
    std::vector<double> r(N + 1), q(N + 1);
    for (int i = 0; i <= N; ++i) {
      const double x = double(i) / N;
      r[i] = x + 0.1 * x * x;
      q[i] = std::sqrt(2.25 - r[i] * r[i]);
    }
    const auto jets = finite_difference_jets(r, q);
    double e = 0;
    for (std::size_t i = 0; i < jets.size(); ++i)
      e = std::max(e, std::abs(curvature(4, jets[i]).H - curvature(4, sphere_jet(1.5, r[i])).H));
    errs.push_back(e);
  }
  double order = 1e9;
  for (std::size_t i = 1; i < errs.size(); ++i) order = std::min(order, std::log2(errs[i - 1] / errs[i]));
  rec.check("fd_order", order, order >= 1.9);
}

void minimal_surface_matrix(Recorder& rec) {
  double worst_alpha = 0, worst_scaling = 0, slowest = 0;
  bool convex = true, positive = true;
  for (int n : {4, 5, 7}) {
    const double alpha = derive_constants(n, 2).alpha;
    std::unique_ptr<MinimalProfile> unit;
    // The integrator is scale-equivariant, so b != 1 uses a shifted seed and
    // grid; otherwise the scaling deviation would be pure roundoff.
    MinimalOptions shifted;
    shifted.seed_fraction = 0.7e-2;
    shifted.r_first = 1.3e-3;
    for (double b : {1.0, 0.5, 2.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      auto mp = std::make_unique<MinimalProfile>(
          b == 1.0 ? integrate_profile(n, b, 400 * b, 1e-10) : integrate_profile(n, b, 400 * b, 1e-10, shifted));
      const auto u = u0_profile(*mp);
      for (std::size_t i = 0; i < mp->size(); ++i) {
        convex = convex && mp->q2[i] > 0;
        positive = positive && u[i] > 0;
      }
      worst_alpha = std::max(worst_alpha, std::abs(mp->alpha_fit / alpha - 1));
      if (unit) worst_scaling = std::max(worst_scaling, verify_scaling(*unit, *mp));
      slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      if (b == 1.0) unit = std::move(mp);
    }
  }
  rec.check("q2_positive", convex, convex);
  rec.check("u0_positive", positive, positive);
  rec.check("tail_exponent_rel_err", worst_alpha, worst_alpha <= 0.05);
  rec.check("scaling_dev", worst_scaling, worst_scaling <= 1e-7);
  rec.check("slowest_profile_s", slowest, slowest < 10);
}

// (1 - x^2)^6 bump with its first two derivatives.
struct PolyBump {
  double c, w;
  void operator()(double r, double& u, double& u1, double& u2) const {
    const double x = (r - c) / w;
    if (std::abs(x) >= 1) {
      u = u1 = u2 = 0;
      return;
    }
    const double s = 1 - x * x;
    u = std::pow(s, 6);
    u1 = -12 * x * std::pow(s, 5) / w;
    u2 = (120 * x * x * std::pow(s, 4) - 12 * std::pow(s, 5)) / (w * w);
  }
};

void jacobi_checks(Recorder& rec) {
  const auto mp = std::make_shared<const MinimalProfile>(integrate_profile(4, 1.0, std::pow(10.0, 3.5), 1e-11));
  const JacobiData jd = assemble(mp);
  const auto terms = generalized_kernel(jd, 3);
  const double alpha = derive_constants(4, 2).alpha;
  double res_j = 0, exp_err = 0;
  for (const auto& t : terms) {
    if (t.j == 0) {
      rec.check("Lu0_residual", t.residual, t.residual <= 1e-6);
    } else {
      res_j = std::max(res_j, t.residual);
    }
    const double in = 2.0 * t.j, out = 2.0 * t.j + alpha;
    exp_err = std::max(exp_err, std::abs(t.inner_exponent - in) / std::max(0.05, 0.05 * std::abs(in)));
    exp_err = std::max(exp_err, std::abs(t.outer_exponent - out) / std::max(0.05, 0.05 * std::abs(out)));
  }
  rec.check("Luj_residual_max", res_j, res_j <= 1e-5);
  // Normalized so that 1 is the tolerance max(0.05, 5%).
  rec.check("exponent_err_over_tol", exp_err, exp_err <= 1.0);

  const PolyBump bu{1.5, 1.0}, bv{2.0, 1.2};
  auto lhs = [&](double r) {
    double u, u1, u2, v, v1, v2;
    bu(r, u, u1, u2);
    bv(r, v, v1, v2);
    const auto c = jacobi_coeffs(*mp, r);
    return (-u1 + c.W * u) * v * c.J;
  };
  auto rhs = [&](double r) {
    double u, u1, u2, v, v1, v2;
    bu(r, u, u1, u2);
    bv(r, v, v1, v2);
    const auto c = jacobi_coeffs(*mp, r);
    return u * (v1 + c.dlogJ * v + c.W * v) * c.J;
  };
  const auto a = integrate(lhs, 0.8, 2.5, 1e-12), b = integrate(rhs, 0.8, 2.5, 1e-12);
  const double adj = std::abs(a.value - b.value), adj_tol = a.error + b.error + 1e-12 * (1 + std::abs(a.value));
  rec.metric("adjunction_tol", adj_tol);
  rec.check("adjunction_gap", adj, adj <= adj_tol);

  const auto mp1k = integrate_profile(4, 1.0, 1000.0, 1e-11);
  const auto spec = top_eigenvalue(mp1k, 50.0, 4000);
  rec.check("top_eigenvalue_R50", spec.top, spec.top <= 1e-3);
}

void heat_checks(Recorder& rec) {
  double worst = 0;
  for (double z : uniform_grid(0, 700, 70000)) {
    const double exact = z == 0 ? 0.0 : -std::expm1(-2 * z) / 2 * std::sqrt(2 / (std::numbers::pi * z));
    const double got = bessel_I(0.5, z, true);
    worst = std::max(worst, z == 0 ? std::abs(got) : std::abs(got / exact - 1));
  }
  rec.check("I_half_rel_err", worst, worst <= 1e-10);

  const double mu = 0.5;
  double stat = 0;
  const std::vector<double> radii{0.01, 0.3, 2.0, 10.0, 100.0};
  for (double t : {0.1, 1.0, 10.0}) {
    const auto v = propagate(mu, t, [](double rho) { return rho; }, 1.0, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) stat = std::max(stat, std::abs(v[i] / radii[i] - 1));
  }
  rec.check("stationary_rel_err", stat, stat <= 1e-6);

  auto f = [](double s) { return heat_kernel(0.5, 0.3, 1.0, s) * heat_kernel(0.5, 0.7, s, 2.0); };
  const double W = heat_kernel(0.5, 1.0, 1.0, 2.0);
  const double semi = std::abs(integrate(f, 0.0, 30.0, 1e-12).value / W - 1);
  rec.check("semigroup_rel_err", semi, semi <= 1e-5);

  const auto times = geometric_grid(1.0, 100.0, 4);
  for (auto [n, delta] : {std::pair{4, 1.0}, std::pair{5, 2.0}}) {
    const auto ex = decay_experiment(derive_constants(n, 2), delta, times);
    const double rel = std::abs(ex.fit.exponent / ex.expected - 1);
    rec.metric("decay_slope_n" + std::to_string(n), ex.fit.exponent);
    rec.check("decay_slope_rel_err_n" + std::to_string(n), rel, rel <= 0.15);
  }
}

void flow_checks(Recorder& rec) {
  {
    EvolveOptions opt;
    opt.snapshot_times = {0.9};
    const auto tr = evolve(cylinder_state(4, 1.0, uniform_grid(0, 5, 3999)), 4, 0.99, {}, opt);
    double err = 0;
    for (double q : tr.snapshots[1].Q) err = std::max(err, std::abs(q / std::sqrt(0.6) - 1));
    rec.check("cylinder_Qmin_rel_err_0.9T", err, err <= 1e-4);
    const double rate = fit_rate(tr.diag.times, tr.diag.Amax, 1.0, 0.01, 0.5).exponent;
    rec.check("cylinder_Amax_rate", rate, std::abs(rate + 0.5) <= 0.005);
  }
  {
    const auto tr = evolve(sphere_state(4, 1.0, uniform_grid(0, 1, 400)), 4, 0.9);
    const double T_est = estimate_singular_time(tr.diag.times, tr.diag.Qaxis);
    rec.check("sphere_T_est", T_est, std::abs(T_est - 1) <= 1e-3);
    const double rate = fit_rate(tr.diag.times, tr.diag.Amax, 1.0, 0.1, 1.0).exponent;
    rec.check("sphere_Amax_rate", rate, std::abs(rate + 0.5) <= 0.005);
  }
  {
    const auto s = cone_state(uniform_grid(0.5, 10, 400));
    const double d = sup_abs_diff(evolve(s, 4, 1.0).snapshots.back().Q, s.Q);
    rec.check("cone_drift", d, d <= 1e-8);
  }
  {
    const auto mp = integrate_profile(4, 1.0, 100.0, 1e-12);
    const auto s = minimal_state(mp, graded_grid(20, 1e-4, 3, 1));
    const double d = sup_abs_diff(evolve(s, 4, 1.0).snapshots.back().Q, s.Q);
    rec.check("minimal_drift", d, d <= 1e-8);
  }
  {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0, 1);
    const auto grid = uniform_grid(0, 3, 150);
    double min_gap = 1e300;
    for (int pair = 0; pair < 5; ++pair) {
      const double a = 1.5 + U(rng), b = 0.3 * U(rng), w = 0.5 + 2 * U(rng), eps = 0.01 + 0.1 * U(rng);
      ProfileState s1, s2;
      s1.grid = s2.grid = grid;
      for (double r : grid) {
        const double q = a + b * std::cos(w * r) * std::exp(-r * r);
        s1.Q.push_back(q);
        s2.Q.push_back(q + eps * (1 + 0.5 * std::cos(r)));
      }
      s1.right = Boundary::pinned(s1.Q.back());
      s2.right = Boundary::pinned(s2.Q.back());
      EvolveOptions opt;
      opt.fixed_dt = 1e-3;
      for (int k = 1; k <= 10; ++k) opt.snapshot_times.push_back(0.02 * k);
      const auto t1 = evolve(s1, 4, 0.2, {}, opt), t2 = evolve(s2, 4, 0.2, {}, opt);
      for (std::size_t k = 0; k < t1.snapshots.size(); ++k)
        for (std::size_t i = 0; i < grid.size(); ++i)
          min_gap = std::min(min_gap, t2.snapshots[k].Q[i] - t1.snapshots[k].Q[i]);
    }
    rec.check("comparison_min_gap", min_gap, min_gap > 0);
  }
}

void rescaling_checks(Recorder& rec) {
  const Params p = derive_constants(4, 4);
  const auto mp = integrate_profile(4, 1.0, 100.0, 1e-12);
  const double t = 0.9, lam = inner_scale(p, t);
  ProfileState s;
  s.t = t;
  s.grid = uniform_grid(0, 30 * lam, 3000);
  for (double r : s.grid) s.Q.push_back(lam * mp.jet_at(r / lam).q);
  s.right = Boundary::pinned(s.Q.back());
  const auto x = uniform_grid(0.0137, 19.9, 173);  // off the sample nodes
  const auto L = to_inner(s, p, x);
  double err = 0;
  for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(L.values[i] - mp.jet_at(x[i]).q));
  // Cubic interpolation error bound h^4 max|Q''''| / 384 with |Q''''| <= 10 near the axis.
  const double h = 30.0 / 3000, bound = std::pow(h, 4) * 10 / 384 + 1e-10;
  rec.metric("inner_interp_bound", bound);
  rec.check("inner_err", err, err <= bound);

  EvolveOptions opt;
  opt.snapshot_times = {0.2, 0.5, 0.8};
  const auto tr = evolve(sphere_state(4, 1.0, uniform_grid(0, 1, 400)), 4, 0.9, {}, opt);
  const auto rho = uniform_grid(0, 1, 50);
  double dev = 0;
  for (std::size_t k = 1; k < tr.snapshots.size(); ++k) {
    const auto q = to_parabolic(tr.snapshots[k], p, rho);
    for (std::size_t i = 0; i < rho.size(); ++i) dev = std::max(dev, std::abs(q.values[i] / std::sqrt(14 - rho[i] * rho[i]) - 1));
  }
  rec.check("sphere_parabolic_rel_dev", dev, dev <= 1e-3);
}

void barrier_checks(Recorder& rec) {
  double bracket_err = 0, min_res = 1e300;
  bool threshold_ok = true;
  for (int n : {4, 5, 7})
    for (int k : {2, 3, 4}) {
      const Params p = derive_constants(n, k);
      const double l = p.lambda_k;
      const double bracket = (2 * l + 1) * (2 * l) + (n - 1) * (2 * l + 1) + (n - 1);
      for (double C0 : {0.5, 1.0, 3.0}) {
        const auto s = supersolution(p, C0);
        bracket_err = std::max(bracket_err, std::abs(s.C1 / C0 - bracket) / bracket);
      }
      const auto s = supersolution(p, 1.0);
      const auto samples = sample_validity_region(s, 1.0, 10000, 1000 + 10 * n + k);
      min_res = std::min(min_res, supersolution_residual(s, 2.0, samples).min_residual);
      const auto s2 = supersolution(p, 2.0);
      const double g = gamma_threshold(s2, 1.0);
      const auto above = gamma_threshold_check(s2, 1.0, g * 1.0001, 10000, 7 + n + k);
      threshold_ok = threshold_ok && above.hypothesis && above.violations == 0;
    }
  // Roundoff only: the bracket is evaluated with a different association.
  rec.check("bracket_rel_err", bracket_err, bracket_err <= 4 * 2.3e-16);
  rec.check("residual_min", min_res, min_res >= -1e-12);
  rec.check("gamma_threshold_ok", threshold_ok, threshold_ok);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<double> v, r;
  for (int i = 0; i < 100000; ++i) {
    r.push_back(0.01 + 10 * U(rng));
    v.push_back(r.back() * 1e3 * U(rng));
  }
  const auto conv = convexity_reduction_check(v, r);
  rec.check("convexity_min_bracket", conv.min_direct, conv.holds);
}

void constant_checks(Recorder& rec) {
  double forms = 0, cross = 0;
  for (int n = 4; n <= 64; ++n) {
    forms = std::max(forms, std::abs(alpha_quadratic_form(n) - alpha_discriminant_form(n)));
    const Params p = derive_constants(n, 2);
    cross = std::max(cross, std::abs(p.mu + 0.5 - (n - 1 + p.alpha)));
  }
  rec.check("alpha_forms_gap", forms, forms <= 1e-12);
  rec.check("mu_identity_gap", cross, cross <= 1e-12);
  int mismatches = 0;
  for (int n = 4; n <= 64; ++n)
    for (int k = 2; k <= 12; ++k) {
      const bool expected = k == 2 ? false : (n == 4 ? k >= 4 : k >= 3);
      if (admissible_for_some_a(derive_constants(n, k)) != expected) ++mismatches;
    }
  rec.check("admissibility_mismatches", mismatches, mismatches == 0);
}

struct Spec {
  const char* name;
  double budget;
  bool heavy;
  std::function<void(Recorder&)> run;
};

const Spec& spec(int id) {
  static const Spec specs[kCriteriaCount] = {
      {"curvature oracles", 1.0, false, curvature_oracles},
      {"minimal surface", 0.0, false, minimal_surface_matrix},  // bound is per profile
      {"jacobi operator", 60.0, true, jacobi_checks},
      {"bessel/heat kernel", 120.0, false, heat_checks},
      {"flow", 300.0, true, flow_checks},
      {"rescalings", 0.0, false, rescaling_checks},
      {"barriers", 10.0, false, barrier_checks},
      {"constants", 1.0, false, constant_checks},
  };
  if (id < 1 || id > kCriteriaCount) fail(ErrorCode::Domain, "criterion id must be in 1.." + std::to_string(kCriteriaCount));
  return specs[id - 1];
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  const Spec& sp = spec(id);
  CriterionResult r;
  r.id = id;
  r.name = sp.name;
  r.budget_seconds = sp.budget;
  if (opt.quick && sp.heavy) {
    r.skipped = true;
    return r;
  }
  Recorder rec{r};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    sp.run(rec);
  } catch (const Error& e) {
    r.failures.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.budget_seconds > 0 && r.seconds >= r.budget_seconds) r.failures.push_back("runtime");
  r.pass = r.failures.empty();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteriaCount; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.skipped ? "[SKIP] " : r.pass ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name;
  char buf[64];
  for (const auto& [k, v] : r.metrics) {
    std::snprintf(buf, sizeof buf, "%.4g", v);
    os << "  " << k << '=' << buf;
  }
  if (!r.skipped) {
    std::snprintf(buf, sizeof buf, "%.2f s", r.seconds);
    os << "  (" << buf;
    if (r.budget_seconds > 0) os << " / " << r.budget_seconds << " s";
    os << ')';
  }
  if (!r.failures.empty()) {
    os << "  failed:";
    for (const auto& f : r.failures) os << ' ' << f;
  }
  return os.str();
}

}  // namespace mcf
