#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "mcf/barriers.hpp"
#include "mcf/cone_heat.hpp"
#include "mcf/errors.hpp"
#include "mcf/flow.hpp"
#include "mcf/geometry.hpp"
#include "mcf/jacobi.hpp"
#include "mcf/minimal_surface.hpp"
#include "mcf/numerics/fit.hpp"
#include "mcf/numerics/grid.hpp"
#include "mcf/params.hpp"
#include "mcf/verify/acceptance.hpp"
#include "mcf/version.hpp"
#include "svg_plot.hpp"
#include "table.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace mcf;
using namespace mcf::cli;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 1;

// Thrown for a malformed run config; printed together with the schema.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json manifest(const std::string& command, const json& config) {
  return json{{"tool", "mcf"}, {"version", kVersion}, {"command", command}, {"config", config}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sidecar_path(const std::string& out) { return fs::path(out).replace_extension(".json").string(); }

json rate_json(const RateFit& f) {
  return json{{"exponent", f.exponent},
              {"intercept", f.intercept},
              {"window", {f.window.first, f.window.second}},
              {"resid", f.resid},
              {"points", f.points}};
}

json params_json(const Params& p) {
  return json{{"n", p.n},
              {"k", p.k},
              {"alpha", p.alpha},
              {"alpha_plus", p.alpha_plus},
              {"alpha_minus", p.alpha_minus},
              {"lambda_k", p.lambda_k},
              {"sigma_k", p.sigma_k},
              {"mu", p.mu},
              {"T", p.T}};
}

// ---- constants -------------------------------------------------------------

struct ConstantsArgs {
  int n = 4, k = 2;
  std::optional<double> a;
  double T = 1.0;
  std::string format = "json";
};

int run_constants(const ConstantsArgs& a) {
  const Params p = derive_constants(a.n, a.k, a.T);
  const double sup = exponent_condition_sup(p);
  const bool admissible = admissible_for_some_a(p);
  std::optional<ExponentCondition> at;
  if (a.a) at = exponent_condition(p, *a.a);

  if (a.format == "csv") {
    Table t;
    for (auto [name, v] : std::initializer_list<std::pair<const char*, double>>{
             {"n", p.n}, {"k", p.k}, {"alpha", p.alpha}, {"alpha_minus", p.alpha_minus}, {"lambda_k", p.lambda_k},
             {"sigma_k", p.sigma_k}, {"mu", p.mu}, {"T", p.T}, {"condition_sup", sup},
             {"admissible", admissible ? 1.0 : 0.0}})
      t.add(name, {v});
    if (at) {
      t.add("a", {*a.a});
      t.add("condition", {at->value});
      t.add("condition_holds", {at->admissible ? 1.0 : 0.0});
      t.add("a_in_window", {at->in_window ? 1.0 : 0.0});
    }
    std::ostringstream os;
    for (std::size_t j = 0; j < t.names.size(); ++j) os << (j ? "," : "") << t.names[j];
    os << '\n';
    for (std::size_t j = 0; j < t.cols.size(); ++j) os << (j ? "," : "") << format_number(t.cols[j][0]);
    std::cout << os.str() << '\n';
    return 0;
  }
  json out = params_json(p);
  out["alpha_forms"] = {{"quadratic", alpha_quadratic_form(p.n)}, {"discriminant", alpha_discriminant_form(p.n)}};
  out["admissibility"] = {{"window", {std::abs(p.alpha), std::abs(p.alpha) + 1}},
                          {"condition_sup", sup},
                          {"admissible_for_some_a", admissible}};
  if (at)
    out["at_a"] = {{"a", *a.a}, {"condition", at->value}, {"holds", at->admissible}, {"in_window", at->in_window}};
  json cfg{{"n", a.n}, {"k", a.k}, {"T", a.T}};
  if (a.a) cfg["a"] = *a.a;
  out["manifest"] = manifest("constants", cfg);
  std::cout << dump(out);
  return 0;
}

// ---- curvature -------------------------------------------------------------

struct CurvatureArgs {
  std::string profile = "cone";
  int n = 4;
  double at = 1.0;
};

ProfileJet jet_from_file(const std::string& path, double r) {
  const Table t = read_csv(path);
  const auto& rs = t.col("r");
  const auto& qs = t.col("Q");
  if (rs.size() < 3) fail(ErrorCode::Io, path + ": need at least 3 rows");
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (!(rs[i] > rs[i - 1])) fail(ErrorCode::GridMismatch, path + ": r must be strictly increasing");
  if (r < rs.front() || r > rs.back()) fail(ErrorCode::Domain, "--at lies outside the sampled range");
  const auto jets = finite_difference_jets(rs, qs);
  std::size_t i = 1;
  while (i + 1 < rs.size() && rs[i] < r) ++i;
  const double w = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
  const auto& a = jets[i - 1];
  const auto& b = jets[i];
  return {r, a.q + w * (b.q - a.q), a.q1 + w * (b.q1 - a.q1), a.q2 + w * (b.q2 - a.q2)};
}

ProfileJet analytic_jet(const std::string& spec, double r) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  double param = 0.0;
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      param = std::stod(spec.substr(colon + 1), &used);
      if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorCode::Domain, "bad profile parameter in '" + spec + "'");
    }
  }
  if (kind == "cone") return {r, r, 1.0, 0.0};
  if (kind == "cylinder") {
    if (colon == std::string::npos) fail(ErrorCode::Domain, "cylinder needs a radius, e.g. cylinder:1.5");
    return {r, param, 0.0, 0.0};
  }
  if (kind == "sphere") {
    if (colon == std::string::npos) fail(ErrorCode::Domain, "sphere needs a radius, e.g. sphere:2");
    if (!(r < param)) fail(ErrorCode::Domain, "--at must be smaller than the sphere radius");
    const double q = std::sqrt(param * param - r * r);
    return {r, q, -r / q, -param * param / (q * q * q)};
  }
  return jet_from_file(spec, r);
}

int run_curvature(const CurvatureArgs& a) {
  if (a.n < 4) fail(ErrorCode::Domain, "n must be >= 4");
  const ProfileJet j = analytic_jet(a.profile, a.at);
  const auto c = curvature(a.n, j);
  json out{{"jet", {{"r", j.r}, {"Q", j.q}, {"Q1", j.q1}, {"Q2", j.q2}}},
           {"g_rr", c.g_rr},
           {"g_omega", c.g_omega},
           {"g_theta", c.g_theta},
           {"a_rr", c.a_rr},
           {"a_omega", c.a_omega},
           {"a_theta", c.a_theta},
           {"kappa", {c.kappa_r(), c.kappa_omega(), c.kappa_theta()}},
           {"H", c.H},
           {"A2", c.A2}};
  out["manifest"] = manifest("curvature", {{"profile", a.profile}, {"n", a.n}, {"at", a.at}});
  std::cout << dump(out);
  return 0;
}

// ---- minimal-surface -------------------------------------------------------

struct MinimalArgs {
  int n = 4;
  double b = 1.0, rmax = 100.0, tol = 1e-10;
  std::string out = "sigma.csv";
};

int run_minimal(const MinimalArgs& a) {
  const auto mp = integrate_profile(a.n, a.b, a.rmax, a.tol);
  Table t;
  t.add("r", mp.grid);
  t.add("Q", mp.q);
  t.add("Q1", mp.q1);
  t.add("Q2", mp.q2);
  t.add("u0", u0_profile(mp));
  write_csv(a.out, t);
  json side{{"n", mp.n},
            {"b", mp.b},
            {"r_max", mp.r_max},
            {"nodes", mp.size()},
            {"C_b", mp.C_b},
            {"alpha_fit", mp.alpha_fit},
            {"alpha", derive_constants(a.n, 2).alpha},
            {"tail_resid", mp.tail_resid},
            {"ode_residual", mp.ode_residual},
            {"seed_residual", mp.seed_residual},
            {"steps", mp.steps}};
  side["manifest"] = manifest("minimal-surface", {{"n", a.n}, {"b", a.b}, {"rmax", a.rmax}, {"tol", a.tol}, {"out", a.out}});
  write_text(sidecar_path(a.out), dump(side));
  std::cout << dump(side);
  return 0;
}

// ---- jacobi ----------------------------------------------------------------

struct JacobiArgs {
  int n = 4, jmax = 3, nodes = 4000;
  double b = 1.0, tol = 1e-11, rtrunc = 50.0;
  std::optional<double> rmax;
  bool spectrum = false;
  std::string out = "kernel.csv";
};

int run_jacobi(const JacobiArgs& a) {
  json cfg{{"n", a.n}, {"b", a.b}, {"tol", a.tol}, {"out", a.out}};
  if (a.spectrum) {
    const double rmax = a.rmax.value_or(std::max(2 * a.rtrunc, 50.0 * a.b));
    cfg["spectrum"] = true;
    cfg["rtrunc"] = a.rtrunc;
    cfg["nodes"] = a.nodes;
    cfg["rmax"] = rmax;
    const auto mp = integrate_profile(a.n, a.b, rmax, a.tol);
    const auto s = top_eigenvalue(mp, a.rtrunc, a.nodes);
    Table t;
    t.add("r", s.r);
    t.add("mode", s.mode);
    write_csv(a.out, t);
    json out{{"top_eigenvalue", s.top},
             {"iterations", s.iterations},
             {"u0_rayleigh_quotient", u0_rayleigh_quotient(mp, a.rtrunc)},
             {"manifest", manifest("jacobi", cfg)}};
    write_text(sidecar_path(a.out), dump(out));
    std::cout << dump(out);
    return 0;
  }
  const double rmax = a.rmax.value_or(a.b * std::pow(10.0, 2.0 + a.jmax / 2.0));
  cfg["jmax"] = a.jmax;
  cfg["rmax"] = rmax;
  auto mp = std::make_shared<const MinimalProfile>(integrate_profile(a.n, a.b, rmax, a.tol));
  const JacobiData jd = assemble(mp);
  const auto terms = generalized_kernel(jd, a.jmax);
  const double alpha = derive_constants(a.n, 2).alpha;
  Table t;
  t.add("r", jd.r);
  json rep = json::array();
  for (const auto& term : terms) {
    t.add("u" + std::to_string(term.j), term.u);
    rep.push_back({{"j", term.j},
                   {"inner_exponent", term.inner_exponent},
                   {"inner_expected", 2.0 * term.j},
                   {"outer_exponent", term.outer_exponent},
                   {"outer_expected", 2.0 * term.j + alpha},
                   {"residual", term.residual},
                   {"min_value", term.min_value}});
  }
  write_csv(a.out, t);
  const auto in_w = inner_fit_window(jd);
  const auto out_w = outer_fit_window(jd);
  json out{{"terms", rep},
           {"inner_window", {in_w.first, in_w.second}},
           {"outer_window", {out_w.first, out_w.second}},
           {"manifest", manifest("jacobi", cfg)}};
  write_text(sidecar_path(a.out), dump(out));
  std::cout << dump(out);
  return 0;
}

// ---- heat-kernel -----------------------------------------------------------

struct HeatArgs {
  int n = 4, k = 2;
  double delta = 1.0, tmin = 1.0, tmax = 100.0, per_decade = 4.0;
  std::string out = "decay.csv";
  std::string plot;
};

int run_heat(const HeatArgs& a) {
  if (!(a.tmin > 0) || !(a.tmax > a.tmin)) fail(ErrorCode::Domain, "need 0 < tmin < tmax");
  const Params p = derive_constants(a.n, a.k);
  const auto ex = decay_experiment(p, a.delta, geometric_grid(a.tmin, a.tmax, a.per_decade));
  Table t;
  t.add("t", ex.times);
  t.add("sup_ratio", ex.sup_ratio);
  write_csv(a.out, t);
  json cfg{{"n", a.n}, {"k", a.k}, {"delta", a.delta}, {"tmin", a.tmin}, {"tmax", a.tmax},
           {"per_decade", a.per_decade}, {"out", a.out}};
  if (!a.plot.empty()) cfg["plot"] = a.plot;
  json out{{"mu", p.mu}, {"slope", ex.fit.exponent}, {"expected", ex.expected}, {"fit", rate_json(ex.fit)},
           {"manifest", manifest("heat-kernel", cfg)}};
  write_text(sidecar_path(a.out), dump(out));
  if (!a.plot.empty()) {
    PlotSpec spec{"t", {"sup_ratio"}, Axes::LogLog, "decay of sup v / r^(mu+1/2)",
                  "slope " + format_number(std::round(ex.fit.exponent * 1e4) / 1e4) + " (expected " +
                      format_number(ex.expected) + ")"};
    write_text(a.plot, render_svg(t, spec));
  }
  std::cout << dump(out);
  return 0;
}

// ---- evolve ----------------------------------------------------------------

const char* kEvolveSchema = R"(run.json schema:
{
  "n": int >= 4,                          required
  "profile": {                            required
    "kind": "cylinder" | "sphere" | "cone" | "minimal" | "file",
    "b": number > 0        (minimal, default 1),
    "r0": number > 0       (cone, first radius, default 1),
    "path": string         (file: CSV with header r,Q),
    "right": "pinned" | "neumann"   (file, default pinned)
  },
  "T": number > 0            (cylinder/sphere singular time, default 1),
  "rmax": number > 0         (outer radius; sphere default half its radius, else 10),
  "nodes": int >= 8          (grid intervals, default 400),
  "horizon": number > 0      (default 0.9 T),
  "snapshots": [number...]   (absolute times, default none),
  "stops": {"Amax_cap": number, "Qmin_floor": number},
  "tol": number              (local error target, default 1e-8),
  "dt_max": number           (default 0.1),
  "plot": bool               (write rates.svg, default false)
})";

json config_get(const json& j, const char* key, const json& fallback) {
  return j.contains(key) ? j.at(key) : fallback;
}

double number_field(const json& j, const char* key, double fallback, bool positive = true) {
  const json v = config_get(j, key, fallback);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || (positive && !(d > 0))) throw ConfigError(std::string("'") + key + "' must be positive");
  return d;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

struct EvolveConfig {
  int n = 4;
  std::string kind;
  double b = 1.0, r0 = 1.0, T = 1.0, rmax = 10.0, horizon = 0.9, tol = 1e-8, dt_max = 0.1;
  int nodes = 400;
  std::string path, right = "pinned";
  std::vector<double> snapshots;
  StopRule stops;
  bool plot = false;
  json resolved;
};

EvolveConfig parse_evolve_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::Io, "cannot open " + file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j, {"n", "profile", "T", "rmax", "nodes", "horizon", "snapshots", "stops", "tol", "dt_max", "plot"},
             "config");
  EvolveConfig c;
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError("'n' must be an integer");
  c.n = j["n"].get<int>();
  if (c.n < 4) throw ConfigError("'n' must be >= 4");
  if (!j.contains("profile") || !j["profile"].is_object()) throw ConfigError("'profile' must be an object");
  const json& pr = j["profile"];
  check_keys(pr, {"kind", "b", "r0", "path", "right"}, "profile");
  if (!pr.contains("kind") || !pr["kind"].is_string()) throw ConfigError("'profile.kind' must be a string");
  c.kind = pr["kind"].get<std::string>();
  if (c.kind != "cylinder" && c.kind != "sphere" && c.kind != "cone" && c.kind != "minimal" && c.kind != "file")
    throw ConfigError("unknown profile kind '" + c.kind + "'");
  c.T = number_field(j, "T", 1.0);
  const double default_rmax = c.kind == "sphere" ? 0.5 * std::sqrt(2.0 * (2 * c.n - 1) * c.T) : 10.0;
  c.rmax = number_field(j, "rmax", default_rmax);
  const json nodes = config_get(j, "nodes", 400);
  if (!nodes.is_number_integer() || nodes.get<int>() < 8) throw ConfigError("'nodes' must be an integer >= 8");
  c.nodes = nodes.get<int>();
  c.horizon = number_field(j, "horizon", 0.9 * c.T);
  c.tol = number_field(j, "tol", 1e-8);
  c.dt_max = number_field(j, "dt_max", 0.1);
  const json snaps = config_get(j, "snapshots", json::array());
  if (!snaps.is_array()) throw ConfigError("'snapshots' must be an array of numbers");
  for (const auto& s : snaps) {
    if (!s.is_number()) throw ConfigError("'snapshots' must be an array of numbers");
    c.snapshots.push_back(s.get<double>());
  }
  const json stops = config_get(j, "stops", json::object());
  if (!stops.is_object()) throw ConfigError("'stops' must be an object");
  check_keys(stops, {"Amax_cap", "Qmin_floor"}, "stops");
  if (stops.contains("Amax_cap")) c.stops.Amax_cap = number_field(stops, "Amax_cap", 0.0);
  if (stops.contains("Qmin_floor")) c.stops.Qmin_floor = number_field(stops, "Qmin_floor", 0.0, false);
  const json plot = config_get(j, "plot", false);
  if (!plot.is_boolean()) throw ConfigError("'plot' must be a boolean");
  c.plot = plot.get<bool>();
  c.b = number_field(pr, "b", 1.0);
  c.r0 = number_field(pr, "r0", 1.0);
  if (c.kind == "file") {
    if (!pr.contains("path") || !pr["path"].is_string()) throw ConfigError("'profile.path' must be a string");
    c.path = pr["path"].get<std::string>();
    const json right = config_get(pr, "right", "pinned");
    if (!right.is_string() || (right != "pinned" && right != "neumann"))
      throw ConfigError("'profile.right' must be \"pinned\" or \"neumann\"");
    c.right = right.get<std::string>();
  }

  json p{{"kind", c.kind}};
  if (c.kind == "minimal") p["b"] = c.b;
  if (c.kind == "cone") p["r0"] = c.r0;
  if (c.kind == "file") p["path"] = c.path, p["right"] = c.right;
  c.resolved = {{"n", c.n}, {"profile", p}, {"T", c.T}, {"rmax", c.rmax}, {"nodes", c.nodes},
                {"horizon", c.horizon}, {"snapshots", c.snapshots}, {"tol", c.tol}, {"dt_max", c.dt_max},
                {"plot", c.plot}};
  json st = json::object();
  if (std::isfinite(c.stops.Amax_cap)) st["Amax_cap"] = c.stops.Amax_cap;
  st["Qmin_floor"] = c.stops.Qmin_floor;
  c.resolved["stops"] = st;
  return c;
}

ProfileState initial_state(const EvolveConfig& c) {
  if (c.kind == "cylinder") return cylinder_state(c.n, c.T, uniform_grid(0.0, c.rmax, c.nodes));
  if (c.kind == "sphere") return sphere_state(c.n, c.T, uniform_grid(0.0, c.rmax, c.nodes));
  if (c.kind == "cone") {
    if (!(c.rmax > c.r0)) fail(ErrorCode::Domain, "cone needs rmax > r0");
    return cone_state(uniform_grid(c.r0, c.rmax, c.nodes));
  }
  if (c.kind == "minimal") {
    const auto mp = integrate_profile(c.n, c.b, std::max(2 * c.rmax, 50.0 * c.b), 1e-10);
    return minimal_state(mp, uniform_grid(0.0, c.rmax, c.nodes));
  }
  const Table t = read_csv(c.path);
  ProfileState s;
  s.grid = t.col("r");
  s.Q = t.col("Q");
  s.left = s.grid.front() == 0.0 ? Boundary::axis() : Boundary::pinned(s.Q.front());
  s.right = c.right == "neumann" ? Boundary::neumann() : Boundary::pinned(s.Q.back());
  validate(s);
  return s;
}

int run_evolve(const std::string& config_path, const std::string& out_dir) {
  const EvolveConfig c = parse_evolve_config(config_path);
  const ProfileState init = initial_state(c);
  EvolveOptions opt;
  opt.tol = c.tol;
  opt.dt_max = c.dt_max;
  opt.snapshot_times = c.snapshots;
  const Trajectory tr = evolve(init, c.n, c.horizon, c.stops, opt);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  json snaps = json::array();
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
    Table t;
    t.add("r", tr.snapshots[i].grid);
    t.add("Q", tr.snapshots[i].Q);
    write_csv((dir / name).string(), t);
    snaps.push_back({{"file", name}, {"t", tr.snapshots[i].t}});
  }
  const auto& d = tr.diag;
  Table diag;
  diag.add("t", d.times);
  diag.add("Hmax", d.Hmax);
  diag.add("Amax", d.Amax);
  diag.add("Qmin", d.Qmin);
  write_csv((dir / "diagnostics.csv").string(), diag);

  json summary{{"stop_reason", tr.stop_reason},
               {"t_final", tr.snapshots.back().t},
               {"accepted_steps", tr.accepted},
               {"rejected_steps", tr.rejected},
               {"T_est", std::isfinite(d.T_est) ? json(d.T_est) : json(nullptr)},
               {"snapshots", snaps}};

  // Rate of Amax against the time to the (estimated) singular time.
  const double Tref = std::isfinite(d.T_est) ? d.T_est : c.T;
  std::vector<double> tau, amax;
  for (std::size_t i = 0; i < d.times.size(); ++i)
    if (Tref - d.times[i] > 0 && d.Amax[i] > 0) tau.push_back(Tref - d.times[i]), amax.push_back(d.Amax[i]);
  std::optional<RateFit> fit;
  if (tau.size() >= 3) {
    const double lo = *std::min_element(tau.begin(), tau.end());
    const double hi = *std::max_element(tau.begin(), tau.end());
    try {
      fit = fit_rate(d.times, d.Amax, Tref, lo, hi);
      summary["Amax_rate"] = rate_json(*fit);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowTooNarrow) throw;
      summary["Amax_rate"] = nullptr;
    }
  }
  if (c.plot) {
    if (tau.empty()) fail(ErrorCode::Domain, "no samples before the singular time to plot");
    Table rt;
    rt.add("T_minus_t", tau);
    rt.add("Amax", amax);
    write_csv((dir / "rates.csv").string(), rt);
    PlotSpec spec{"T_minus_t", {"Amax"}, Axes::LogLog, "sup |A|^2 against T - t",
                  fit ? "slope " + format_number(std::round(fit->exponent * 1e4) / 1e4) : ""};
    write_text((dir / "rates.svg").string(), render_svg(rt, spec));
  }
  summary["manifest"] = manifest("evolve", c.resolved);
  write_text((dir / "summary.json").string(), dump(summary));
  write_text((dir / "manifest.json").string(), dump(manifest("evolve", c.resolved)));
  std::cout << dump(summary);
  return 0;
}

// ---- barriers --------------------------------------------------------------

struct BarrierArgs {
  int n = 4, k = 4;
  double c0 = 1.0, cbar = 0.25, gamma = 10.0, M = 1.0, T = 1.0;
  std::size_t samples = 10000, convexity_samples = 100000;
  std::uint64_t seed = 1;
  std::string out = "barrier.json";
};

int run_barriers(const BarrierArgs& a) {
  const Params p = derive_constants(a.n, a.k, a.T);
  const auto s = supersolution(p, a.c0);
  const auto pts = sample_validity_region(s, a.gamma, a.samples, a.seed);
  const auto res = supersolution_residual(s, a.M, pts);
  const auto thr = gamma_threshold_check(s, a.cbar, a.gamma, a.samples, a.seed + 1);

  std::mt19937_64 rng(a.seed + 2);
  std::uniform_real_distribution<double> logx(-6.0, 3.0), logr(-3.0, 3.0);
  std::vector<double> v(a.convexity_samples), r(a.convexity_samples);
  for (std::size_t i = 0; i < v.size(); ++i) {
    r[i] = std::pow(10.0, logr(rng));
    v[i] = std::pow(10.0, logx(rng)) * r[i];
  }
  const auto conv = convexity_reduction_check(v, r);

  const bool residual_ok = res.min_residual >= -1e-12;
  json out{{"params", params_json(p)},
           {"C0", s.C0},
           {"C1", s.C1},
           {"bracket", supersolution_bracket(p)},
           {"residual",
            {{"min", res.min_residual},
             {"argmin", {{"r", res.argmin.r}, {"t", res.argmin.t}}},
             {"a_at_min", res.a_at_min},
             {"evaluated", res.evaluated},
             {"nonnegative", residual_ok}}},
           {"gamma_threshold",
            {{"required_gamma", std::isfinite(thr.gamma) ? json(thr.gamma) : json(nullptr)},
             {"gamma", a.gamma},
             {"hypothesis", thr.hypothesis},
             {"min_margin", thr.min_margin},
             {"violations", thr.violations},
             {"count", thr.count}}},
           {"convexity",
            {{"count", conv.count},
             {"min_direct", conv.min_direct},
             {"min_closed", conv.min_closed},
             {"max_discrepancy", conv.max_discrepancy},
             {"holds", conv.holds}}}};
  const bool all = residual_ok && thr.hypothesis && thr.violations == 0 && conv.holds;
  out["checks_pass"] = all;
  out["manifest"] = manifest("barriers", {{"n", a.n}, {"k", a.k}, {"T", a.T}, {"c0", a.c0}, {"cbar", a.cbar},
                                          {"gamma", a.gamma}, {"M", a.M}, {"samples", a.samples},
                                          {"convexity_samples", a.convexity_samples}, {"seed", a.seed},
                                          {"out", a.out}});
  write_text(a.out, dump(out));
  std::cout << dump(out);
  return all ? 0 : kExitValidation;
}

// ---- verify-all / plot -----------------------------------------------------

int run_verify(bool quick, int only) {
  AcceptanceOptions opt;
  opt.quick = quick;
  bool ok = true;
  for (int id = 1; id <= kCriteriaCount; ++id) {
    if (only && id != only) continue;
    const auto r = run_criterion(id, opt);
    std::cout << format_result(r) << std::endl;
    ok = ok && (r.pass || r.skipped);
  }
  return ok ? 0 : kExitValidation;
}

struct PlotArgs {
  std::string csv, svg, x, axes = "linear", title;
  std::vector<std::string> y;
  bool slope = false;
};

int run_plot(const PlotArgs& a) {
  const Table t = read_csv(a.csv);
  PlotSpec spec{a.x.empty() ? t.names.front() : a.x, a.y, a.axes == "loglog" ? Axes::LogLog : Axes::Linear,
                a.title, ""};
  if (a.slope) {
    if (spec.axes != Axes::LogLog) fail(ErrorCode::Domain, "--slope needs --axes loglog");
    const auto& xs = t.col(spec.x);
    const auto& ys = t.col(a.y.empty() ? t.names.at(t.names.front() == spec.x ? 1 : 0) : a.y.front());
    double lo = 1e300, hi = 0;
    for (double x : xs)
      if (x > 0) lo = std::min(lo, x), hi = std::max(hi, x);
    const auto f = fit_loglog(xs, ys, lo, hi);
    spec.note = "slope " + format_number(std::round(f.exponent * 1e4) / 1e4);
  }
  write_text(a.svg, render_svg(t, spec));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial mean curvature flow toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Derived constants and admissibility for (n, k)");
  constants->add_option("--n", ca.n, "dimension parameter (>= 4)")->required();
  constants->add_option("--k", ca.k, "eigenmode index (>= 2)")->required();
  constants->add_option("--a", ca.a, "evaluate the exponent condition at this a");
  constants->add_option("--T", ca.T, "singular time");
  constants->add_option("--format", ca.format)->check(CLI::IsMember({"json", "csv"}));

  CurvatureArgs cu;
  auto* curv = app.add_subcommand("curvature", "Curvature of a profile at one radius");
  curv->add_option("--profile", cu.profile, "cone | cylinder:c | sphere:R | file.csv (header r,Q)")->required();
  curv->add_option("--n", cu.n)->required();
  curv->add_option("--at", cu.at, "radius")->required();

  MinimalArgs ma;
  auto* minimal = app.add_subcommand("minimal-surface", "Integrate the minimal profile asymptotic to the cone");
  minimal->add_option("--n", ma.n)->required();
  minimal->add_option("--b", ma.b, "axis height Q(0)");
  minimal->add_option("--rmax", ma.rmax);
  minimal->add_option("--tol", ma.tol);
  minimal->add_option("--out", ma.out, "CSV r,Q,Q1,Q2,u0; a .json sidecar is written next to it");

  JacobiArgs ja;
  auto* jac = app.add_subcommand("jacobi", "Generalized kernel of the Jacobi operator, or its top eigenvalue");
  jac->add_option("--n", ja.n)->required();
  jac->add_option("--b", ja.b);
  jac->add_option("--jmax", ja.jmax);
  jac->add_option("--rmax", ja.rmax, "profile length (default b 10^(2 + jmax/2))");
  jac->add_option("--tol", ja.tol);
  jac->add_flag("--spectrum", ja.spectrum, "compute the top eigenvalue on [0, rtrunc]");
  jac->add_option("--rtrunc", ja.rtrunc);
  jac->add_option("--nodes", ja.nodes);
  jac->add_option("--out", ja.out);

  HeatArgs ha;
  auto* heat = app.add_subcommand("heat-kernel", "Decay experiment for the cone heat equation");
  heat->add_option("--n", ha.n)->required();
  heat->add_option("--k", ha.k);
  heat->add_option("--delta", ha.delta)->required();
  heat->add_option("--tmin", ha.tmin);
  heat->add_option("--tmax", ha.tmax);
  heat->add_option("--per-decade", ha.per_decade);
  heat->add_option("--out", ha.out);
  heat->add_option("--plot", ha.plot, "log-log SVG of the decay curve");

  std::string ev_config, ev_out = "traj";
  auto* ev = app.add_subcommand("evolve", "Evolve a radial profile by mean curvature flow");
  ev->add_option("--config", ev_config, "run.json")->required()->check(CLI::ExistingFile);
  ev->add_option("--out", ev_out, "output directory");
  ev->footer(kEvolveSchema);

  BarrierArgs ba;
  auto* bar = app.add_subcommand("barriers", "Supersolution and threshold checks");
  bar->add_option("--n", ba.n)->required();
  bar->add_option("--k", ba.k)->required();
  bar->add_option("--c0", ba.c0);
  bar->add_option("--cbar", ba.cbar);
  bar->add_option("--gamma", ba.gamma);
  bar->add_option("--M", ba.M, "gradient bound used in the coefficient sweep (>= 1)");
  bar->add_option("--T", ba.T);
  bar->add_option("--samples", ba.samples);
  bar->add_option("--convexity-samples", ba.convexity_samples);
  bar->add_option("--seed", ba.seed);
  bar->add_option("--out", ba.out);

  bool quick = false;
  int only = 0;
  auto* verify = app.add_subcommand("verify-all", "Run the acceptance checks");
  verify->add_flag("--quick", quick, "skip the two slow criteria");
  verify->add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, kCriteriaCount));

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Render a CSV as a deterministic SVG");
  plot->add_option("--csv", pa.csv)->required();
  plot->add_option("--svg", pa.svg)->required();
  plot->add_option("--x", pa.x, "x column (default: first)");
  plot->add_option("--y", pa.y, "y columns (default: all others)");
  plot->add_option("--axes", pa.axes)->check(CLI::IsMember({"linear", "loglog"}));
  plot->add_option("--title", pa.title);
  plot->add_flag("--slope", pa.slope, "annotate the fitted log-log slope of the first y column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*constants) return run_constants(ca);
    if (*curv) return run_curvature(cu);
    if (*minimal) return run_minimal(ma);
    if (*jac) return run_jacobi(ja);
    if (*heat) return run_heat(ha);
    if (*ev) return run_evolve(ev_config, ev_out);
    if (*bar) return run_barriers(ba);
    if (*verify) return run_verify(quick, only);
    if (*plot) return run_plot(pa);
  } catch (const ConfigError& e) {
    std::cerr << "mcf: config error: " << e.what() << "\n\n" << kEvolveSchema << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "mcf: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "mcf: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
