#pragma once

// Command dispatch for the ehyp tool. A run is described by one JSON object:
//   {"command": "<name>", ...parameters..., "output": "<path>"}
// Results go to the named output files; a JSON summary goes to stdout.
// Exit codes: 0 success, 2 configuration error, 3 domain or precondition
// error, 4 solver failure.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ehyp/density.hpp"
#include "ehyp/energy_liouville.hpp"
#include "ehyp/error.hpp"
#include "ehyp/field_io.hpp"
#include "ehyp/friedrichs.hpp"
#include "ehyp/geometry.hpp"
#include "ehyp/grid_field.hpp"
#include "ehyp/hodge_disc.hpp"
#include "ehyp/surfaces.hpp"

namespace ehyp::cli {

using Json = nlohmann::json;

enum ExitCode : int { kOk = 0, kConfig = 2, kDomain = 3, kSolver = 4 };

inline int exit_code(ErrorKind k) {
  switch (category(k)) {
    case ErrorCategory::Config: return kConfig;
    case ErrorCategory::Domain: return kDomain;
    case ErrorCategory::Solver: return kSolver;
  }
  return kDomain;
}

/// Typed access to the parameters of one command.
class RunConfig {
 public:
  explicit RunConfig(Json j) : j_(std::move(j)) {
    if (!j_.is_object()) fail(ErrorKind::ConfigError, "config must be a JSON object");
    command_ = str("command");
  }

  const std::string& command() const { return command_; }
  bool has(const std::string& key) const { return j_.contains(key); }
  const Json& at(const std::string& key) const {
    if (!has(key)) fail(ErrorKind::ConfigError, "missing parameter '" + key + "'");
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key) const {
    try {
      return at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(ErrorKind::ConfigError, "parameter '" + key + "' has the wrong type");
    }
  }
  template <class T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }

  std::string str(const std::string& key) const { return get<std::string>(key); }
  std::string str(const std::string& key, const std::string& fallback) const {
    return get<std::string>(key, fallback);
  }

  double tolerance(const std::string& key, double fallback) const {
    const double t = get<double>(key, fallback);
    if (!(t > 0.0)) fail(ErrorKind::ConfigError, "tolerance '" + key + "' must be positive");
    return t;
  }
  std::size_t resolution(const std::string& key, std::size_t fallback) const {
    const auto n = get<long long>(key, static_cast<long long>(fallback));
    if (n < 8) fail(ErrorKind::ConfigError, "resolution '" + key + "' must be at least 8");
    return static_cast<std::size_t>(n);
  }
  std::vector<std::size_t> resolutions(const std::string& key, std::vector<std::size_t> fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::size_t> out;
    for (long long n : get<std::vector<long long>>(key)) {
      if (n < 8) fail(ErrorKind::ConfigError, "every entry of '" + key + "' must be at least 8");
      out.push_back(static_cast<std::size_t>(n));
    }
    if (out.empty()) fail(ErrorKind::ConfigError, "'" + key + "' must not be empty");
    return out;
  }

 private:
  Json j_;
  std::string command_;
};

// ---------------------------------------------------------------------------
// Presets and small parsers.

inline Density parse_density(const RunConfig& cfg, const std::string& key = "density") {
  const std::string name = cfg.str(key, "euclidean");
  if (name == "euclidean") return Density::euclidean();
  if (name == "minkowski") return Density::minkowski(cfg.tolerance("light_cone_tol", 1e-8));
  if (name == "polytropic") return Density::polytropic(cfg.get<double>("gamma", 1.4));
  if (name == "unit") return Density::unit();
  fail(ErrorKind::ConfigError, "unknown density '" + name + "'");
}

/// A function of xi: a number, or trigonometric coefficients
/// [a0, a1, b1, a2, b2, ...] for a0 + sum a_m cos(m xi) + b_m sin(m xi).
inline ScalarFn parse_periodic(const RunConfig& cfg, const std::string& key, double fallback) {
  if (!cfg.has(key)) return [fallback](double) { return fallback; };
  const Json& j = cfg.at(key);
  if (j.is_number()) {
    const double v = j.get<double>();
    return [v](double) { return v; };
  }
  std::vector<double> c;
  try {
    c = j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::ConfigError, "'" + key + "' must be a number or a coefficient list");
  }
  if (c.empty()) fail(ErrorKind::ConfigError, "'" + key + "' coefficient list is empty");
  return [c](double xi) {
    double v = c[0];
    for (std::size_t m = 1; 2 * m - 1 < c.size(); ++m) {
      v += c[2 * m - 1] * std::cos(static_cast<double>(m) * xi);
      if (2 * m < c.size()) v += c[2 * m] * std::sin(static_cast<double>(m) * xi);
    }
    return v;
  };
}

/// K(eta): "keldysh-linear" (slope (eta - eta_crit)) or "polynomial" with
/// coefficients K_coeffs = [c0, c1, ...].
inline TypeChangeFn parse_type_change(const RunConfig& cfg) {
  const std::string preset = cfg.str("K", "keldysh-linear");
  const double R = cfg.get<double>("R", 1.0);
  if (preset == "keldysh-linear") {
    return TypeChangeFn::linear(cfg.get<double>("eta_crit", 0.5), R, cfg.get<double>("slope", 1.0));
  }
  if (preset == "polynomial") {
    const auto c = cfg.get<std::vector<double>>("K_coeffs");
    if (c.empty()) fail(ErrorKind::ConfigError, "K_coeffs must not be empty");
    auto K = [c](double e) {
      double v = 0.0;
      for (std::size_t i = c.size(); i-- > 0;) v = v * e + c[i];
      return v;
    };
    auto dK = [c](double e) {
      double v = 0.0;
      for (std::size_t i = c.size(); i-- > 1;) v = v * e + static_cast<double>(i) * c[i];
      return v;
    };
    return TypeChangeFn::make(K, dK, R);
  }
  fail(ErrorKind::ConfigError, "unknown K preset '" + preset + "'");
}

inline void emit(const RunConfig& cfg, const std::string& key, const std::string& text) {
  if (cfg.has(key)) write_text(cfg.str(key), text);
}

// ---------------------------------------------------------------------------
// Commands. Each returns the stdout summary.

inline JsonObject cmd_classify_map(const RunConfig& cfg) {
  const double xa = cfg.get<double>("xmin", -2.0), xb = cfg.get<double>("xmax", 2.0);
  const double ya = cfg.get<double>("ymin", -2.0), yb = cfg.get<double>("ymax", 2.0);
  const std::size_t nx = cfg.resolution("nx", 101), ny = cfg.resolution("ny", 101);
  const double tol = cfg.tolerance("parabolic_tol", kDefaultParabolicTol);
  if (!(xb > xa && yb > ya)) fail(ErrorKind::ConfigError, "rectangle bounds are reversed");
  GridField f(Chart::Cartesian, xa, ya, (xb - xa) / static_cast<double>(nx - 1), (yb - ya) / static_cast<double>(ny - 1),
              nx, ny, 1);
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const OperatorCoefficients c = operator_coefficients_exp2({f.x(i), f.y(j)});
      f.at(i, j) = c.discriminant();
      ++counts[static_cast<int>(classify(c, tol).kind)];
    }
  emit(cfg, "output", field_to_json(f));
  JsonObject o;
  o.add("command", "classify-map");
  o.add("elliptic", counts[0]);
  o.add("hyperbolic", counts[1]);
  o.add("parabolic", counts[2]);
  return o;
}

inline JsonObject cmd_chars(const RunConfig& cfg) {
  const auto start = cfg.get<std::vector<double>>("start");
  if (start.size() != 2) fail(ErrorKind::ConfigError, "start needs two coordinates");
  const std::string b = cfg.str("branch", "plus");
  if (b != "plus" && b != "minus") fail(ErrorKind::ConfigError, "branch must be plus or minus");
  const double step = cfg.tolerance("step", 1e-3);
  const double len = cfg.tolerance("max_len", 1.0);
  const CharacteristicPath p = trace_characteristic({start[0], start[1]}, b == "plus" ? Branch::Plus : Branch::Minus,
                                                    step, len, cfg.get<double>("a", 1.0));
  CsvTable t({"s", "x", "y"});
  for (std::size_t k = 0; k < p.points.size(); ++k)
    t.row(std::vector<double>{static_cast<double>(k) * p.step, p.points[k].x, p.points[k].y});
  emit(cfg, "output", t.str());
  JsonObject o;
  o.add("command", "chars");
  o.add("points", p.points.size());
  o.add("length", p.length);
  o.add("reached_circle", p.reached_circle);
  return o;
}

inline JsonObject lens_to_json(const LensDomain& d) {
  JsonObject o;
  o.add("x0", d.x0);
  o.add("eps", d.eps);
  o.add("theta0", d.theta0);
  o.add("pole", std::vector<double>{d.pole.x, d.pole.y});
  std::vector<JsonObject> segs;
  for (const auto& s : d.segments) {
    JsonObject js;
    js.add("kind", to_string(s.kind));
    js.add("start", std::vector<double>{s.start.x, s.start.y});
    js.add("end", std::vector<double>{s.end.x, s.end.y});
    if (s.kind == SegmentKind::EllipticArc || s.kind == SegmentKind::ParabolicArc) {
      js.add("radius", s.radius);
      js.add("theta_start", s.theta_start);
      js.add("theta_end", s.theta_end);
    }
    js.add("outer", s.outer);
    segs.push_back(js);
  }
  o.add("segments", segs);
  return o;
}

inline LensDomain parse_lens(const RunConfig& cfg) {
  return build_lens_domain(cfg.get<double>("x0", 0.5), cfg.get<double>("eps", 0.25));
}

inline JsonObject cmd_domain(const RunConfig& cfg) {
  const LensDomain d = parse_lens(cfg);
  emit(cfg, "output", lens_to_json(d).pretty());
  JsonObject o;
  o.add("command", "domain");
  o.add("theta0", d.theta0);
  o.add("segments", d.segments.size());
  return o;
}

inline JsonObject cmd_residual(const RunConfig& cfg) {
  const GridField f = read_field(cfg.str("input"));
  const std::string kind = cfg.str("kind", "minkowski-graph");
  JsonObject o;
  o.add("command", "residual");
  o.add("kind", kind);
  if (kind == "hodge") {
    const HodgeResidual r = hodge_residual(f, parse_density(cfg));
    GridField out = f.like(2);
    for (std::size_t k = 0; k < f.nx * f.ny; ++k) {
      out.values[2 * k] = r.closed.values[k];
      out.values[2 * k + 1] = r.coclosed.values[k];
    }
    out.mask = f.mask;
    emit(cfg, "output", field_to_json(out));
    o.add("max_closed", r.closed.max_abs());
    o.add("max_coclosed", r.coclosed.max_abs());
    return o;
  }
  ExtremalKind ek;
  if (kind == "minkowski-graph") {
    ek = ExtremalKind::MinkowskiGraph;
  } else if (kind == "euclidean-minimal") {
    ek = ExtremalKind::EuclideanMinimal;
  } else if (kind == "lorentz-maximal") {
    ek = ExtremalKind::LorentzMaximal;
  } else {
    fail(ErrorKind::ConfigError, "unknown residual kind '" + kind + "'");
  }
  const GridField r = extremal_residual(f, ek, cfg.tolerance("tol", 1e-12));
  emit(cfg, "output", field_to_json(r));
  o.add("max_residual", r.max_abs());
  return o;
}

inline JsonObject cmd_legendre(const RunConfig& cfg) {
  LegendreOptions opt;
  opt.hessian_tol = cfg.tolerance("hessian_tol", 1e-10);
  opt.nx = cfg.get<std::size_t>("nx", 0);
  opt.ny = cfg.get<std::size_t>("ny", 0);
  const HodographField h = legendre_transform(read_field(cfg.str("input")), opt);
  emit(cfg, "output", field_to_json(h.phi));
  JsonObject o;
  o.add("command", "legendre");
  o.add("masked", h.masked_count);
  return o;
}

inline JsonObject cmd_dualize(const RunConfig& cfg) {
  GridField omega;
  if (cfg.has("input")) {
    omega = read_field(cfg.str("input"));
  } else {
    const auto c = cfg.get<std::vector<double>>("constant");
    if (c.size() != 2) fail(ErrorKind::ConfigError, "constant needs two components");
    const std::size_t n = cfg.resolution("n", 16);
    omega = GridField(Chart::Cartesian, 0.0, 0.0, 1.0 / static_cast<double>(n - 1), 1.0 / static_cast<double>(n - 1), n,
                      n, 2);
    for (std::size_t k = 0; k < n * n; ++k) {
      omega.values[2 * k] = c[0];
      omega.values[2 * k + 1] = c[1];
    }
  }
  DualFormOptions opt;
  opt.closed_threshold = cfg.tolerance("closed_threshold", 1e-8);
  opt.path_tolerance = cfg.tolerance("path_tolerance", 1e-8);
  const DualFormResult r = dual_form(omega, parse_density(cfg), opt);
  emit(cfg, "output", field_to_json(r.sigma));
  JsonObject o;
  o.add("command", "dualize");
  o.add("dual_density", r.dual.name());
  o.add("max_dual_residual", r.max_dual_residual);
  o.add("path_defect", r.path_defect);
  return o;
}

inline FieldSampler parse_sampler(const RunConfig& cfg) {
  const std::size_t n = cfg.get<std::size_t>("n", 5);
  const std::string kind = cfg.str("sampler", "constant");
  const bool stationary = cfg.get<bool>("stationary", false);
  if (kind == "constant") return FieldSampler::constant(n, cfg.get<double>("q0", 1.0), stationary);
  if (kind == "zero") return FieldSampler::constant(n, 0.0, stationary);
  if (kind == "gaussian") {
    return {n,
            [](std::span<const double> x) {
              double s = 0.0;
              for (double v : x) s += v * v;
              return std::exp(-s);
            },
            stationary};
  }
  fail(ErrorKind::ConfigError, "unknown sampler '" + kind + "'");
}

inline JsonObject cmd_energy_profile(const RunConfig& cfg) {
  const FieldSampler s = parse_sampler(cfg);
  const Density dens = parse_density(cfg);
  BallQuadrature q;
  q.radial = cfg.get<std::size_t>("radial_nodes", q.radial);
  q.angular = cfg.get<std::size_t>("angular_nodes", q.angular);
  const auto radii = cfg.get<std::vector<double>>("radii", {0.5, 1.0, 1.5, 2.0});
  const RadialEnergyProfile p = conformal_profile(s, dens, radii, q);
  CsvTable t({"r", "E", "conformal"});
  for (std::size_t i = 0; i < radii.size(); ++i) t.row(std::vector<double>{p.radii[i], p.energy[i], p.conformal[i]});
  emit(cfg, "output", t.str());

  JsonObject o;
  o.add("command", "energy-profile");
  o.add("conformal_nondecreasing", p.conformal_nondecreasing);
  if (p.monotonicity_check) o.add("monotonicity_check", *p.monotonicity_check);
  if (radii.size() >= 3) {
    const GrowthFit g = growth_fit(p);
    bool rho_ok = true;
    for (double qq : {0.0, 0.25, 0.5, 0.75}) rho_ok = rho_ok && dens.drho(qq) <= 0.0;
    const LiouvilleVerdict v =
        liouville_verdict(s.n, g, cfg.get<bool>("rho_prime_nonpositive", rho_ok),
                          cfg.get<bool>("bounded_by_qcrit", true), s.stationary);
    JsonObject jv;
    jv.add("n", v.n);
    if (g.degenerate) {
      jv.raw("C", "null");
      jv.raw("k", "null");
      jv.add("degenerate_fit", true);
    } else {
      jv.add("C", g.C);
      jv.add("k", g.k);
      jv.add("fit_residual", g.residual);
    }
    jv.add("verdict", to_string(v.verdict));
    jv.add("reason", v.reason);
    o.add("liouville", jv);
  }
  return o;
}

inline JsonObject cmd_verify_sympos(const RunConfig& cfg, int& status) {
  const FirstOrderSystem sys = build_system(parse_type_change(cfg), cfg.get<double>("k", 1.0));
  const ScalarFn sigma = parse_periodic(cfg, "sigma", 1.0);
  const ScalarFn tau = parse_periodic(cfg, "tau", -1.0);
  const double a = cfg.get<double>("a", 1.0), c = cfg.get<double>("c", 1.0);
  const AdmissibilityReport r = verify_symmetric_positive(sys, a, c, sigma, tau, cfg.get<std::size_t>("samples", 100));
  JsonObject o;
  o.add("command", "verify-sympos");
  o.add("a", a);
  o.add("c", c);
  o.add("min_det_E", r.min_det_E);
  if (r.kappa) {
    const Mat2& ks = r.kappa->kappa_star_at_first;
    o.add("kappa_star_eta0", std::vector<double>{ks(0, 0), ks(0, 1), ks(1, 0), ks(1, 1)});
    o.add("kappa_min_eig", r.kappa->kappa_min_eig);
    o.add("kappa_max_eig", r.kappa->kappa_max_eig);
    o.add("delta_det_mismatch", r.kappa->max_det_mismatch);
  }
  if (r.boundary) {
    o.add("mu_eigenvalues", std::vector<double>{r.boundary->mu_eigs_first[0], r.boundary->mu_eigs_first[1]});
    o.add("mu_min_eig", r.boundary->mu_min);
    o.add("ranges_trivial", r.boundary->ranges_trivial);
    o.add("null_spaces_span", r.boundary->null_spaces_span);
  }
  o.add("verdict", r.admissible ? "admissible" : "not admissible");
  if (r.failure_kind) o.add("error", to_string(*r.failure_kind));
  if (!r.failure.empty()) o.add("failure", r.failure);
  emit(cfg, "output", o.pretty());
  status = r.admissible ? kOk : kDomain;
  return o;
}

inline JsonObject cmd_solve_keldysh(const RunConfig& cfg) {
  const TypeChangeFn K = parse_type_change(cfg);
  const double k = cfg.get<double>("k", 1.0);
  const FirstOrderSystem sys = build_system(K, k);
  const ScalarFn sigma = parse_periodic(cfg, "sigma", 1.0);
  const ScalarFn tau = parse_periodic(cfg, "tau", -1.0);
  MultiplierChoice choice;
  if (cfg.has("c")) {
    choice.a = cfg.get<double>("a", 1.0);
    choice.c = cfg.get<double>("c");
  } else {
    choice = choose_parameters(K, k, sigma, tau);
  }
  const AdmissibilityReport adm = verify_symmetric_positive(sys, choice.a, choice.c, sigma, tau);
  if (adm.failure_kind) fail(*adm.failure_kind, adm.failure);
  if (!adm.admissible) fail(ErrorKind::InadmissibleBoundary, adm.failure);

  // Manufactured problem u = sin(xi) eta^2 / 2 unless "manufactured": false.
  const bool manufactured = cfg.get<bool>("manufactured", true);
  std::function<double(double, double)> f = [](double, double) { return 0.0; };
  StrongOptions opt;
  if (manufactured) {
    f = [&](double e, double x) {
      return K.dK(e) * e * std::sin(x) + K.K(e) * std::sin(x) - std::sin(x) * e * e / 2 + k * std::cos(x) * e * e / 2;
    };
    const double R = K.R;
    opt.boundary_rhs = [=](double x) { return sigma(x) * R * std::sin(x) + tau(x) * R * R / 2 * std::cos(x); };
  }
  CsvTable t({"h", "interior_residual", "boundary_defect", "kappa_min_eig", "mu_min_eig", "l2_error"});
  DiscreteSolution last;
  for (std::size_t n : cfg.resolutions("resolutions", {16, 32, 64})) {
    last = solve_strong(sys, choice, f, sigma, tau, {n, n}, opt);
    const double err = manufactured ? strong_error_l2(last, [](double e, double x) { return e * std::sin(x); },
                                                      [](double e, double x) { return e * e / 2 * std::cos(x); })
                                    : last.staggered.cwiseAbs().maxCoeff();
    t.row(std::vector<double>{last.h, last.interior_residual, last.boundary_defect, adm.kappa->kappa_min_eig,
                              adm.boundary->mu_min, err});
  }
  emit(cfg, "output", field_to_json(last.w));
  emit(cfg, "table", t.str());
  JsonObject o;
  o.add("command", "solve-keldysh");
  o.add("c", choice.c);
  o.add("boundary_defect", last.boundary_defect);
  o.add("interior_residual", last.interior_residual);
  return o;
}

inline OpenProblemOptions parse_open_options(const RunConfig& cfg) {
  OpenProblemOptions opt;
  opt.corner_tol = cfg.tolerance("corner_tol", opt.corner_tol);
  opt.leaf_refinement = cfg.get<std::size_t>("leaf_refinement", opt.leaf_refinement);
  return opt;
}

inline JsonObject cmd_uniqueness_demo(const RunConfig& cfg) {
  const LensDomain dom = parse_lens(cfg);
  OpenProblemOptions opt = parse_open_options(cfg);
  CsvTable t({"h", "max_abs_phi", "elliptic_residual", "hyperbolic_residual"});
  OpenProblemSolution sol;
  bool all_small = true;
  for (std::size_t n : cfg.resolutions("resolutions", {16, 32, 64})) {
    opt.resolution = n;
    sol = solve_open_problem(dom, OpenProblemData::homogeneous(), opt);
    const double m = sol.phi.max_abs();
    all_small = all_small && m < 5.0 * sol.h;
    t.row(std::vector<double>{sol.h, m, sol.residuals[0].norm, sol.residuals[1].norm});
  }
  emit(cfg, "output", field_to_json(sol.phi));
  emit(cfg, "table", t.str());
  JsonObject o;
  o.add("command", "uniqueness-demo");
  o.add("max_abs_below_5h", all_small);
  return o;
}

inline JsonObject cmd_overdetermination(const RunConfig& cfg) {
  const LensDomain dom = parse_lens(cfg);
  OpenProblemOptions opt = parse_open_options(cfg);
  const double delta = cfg.get<double>("perturbation", 0.1);
  const std::string data = cfg.str("data", "theta");
  std::function<double(double, double)> g;
  if (data == "theta") {
    g = [](double, double t) { return t; };
  } else if (data == "zero") {
    g = [](double, double) { return 0.0; };
  } else {
    fail(ErrorKind::ConfigError, "unknown data preset '" + data + "'");
  }
  CsvTable t({"h", "gap", "samples"});
  std::vector<double> gaps;
  for (std::size_t n : cfg.resolutions("resolutions", {16, 32, 64})) {
    opt.resolution = n;
    const GapReport r = overdetermination_gap(dom, OpenProblemData::from_function(dom, g),
                                              [&](double rr, double th) { return g(rr, th) + delta; }, opt);
    gaps.push_back(r.gap);
    t.row(std::vector<double>{r.h, r.gap, static_cast<double>(r.samples)});
  }
  emit(cfg, "output", t.str());
  JsonObject o;
  o.add("command", "overdetermination");
  o.add("gaps", gaps);
  return o;
}

/// Runs one command; never throws. The summary (or error record) goes to out.
inline int run(const Json& config, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg(config);
    int status = kOk;
    JsonObject summary;
    const std::string& c = cfg.command();
    if (c == "classify-map") {
      summary = cmd_classify_map(cfg);
    } else if (c == "chars") {
      summary = cmd_chars(cfg);
    } else if (c == "domain") {
      summary = cmd_domain(cfg);
    } else if (c == "residual") {
      summary = cmd_residual(cfg);
    } else if (c == "legendre") {
      summary = cmd_legendre(cfg);
    } else if (c == "dualize") {
      summary = cmd_dualize(cfg);
    } else if (c == "energy-profile") {
      summary = cmd_energy_profile(cfg);
    } else if (c == "solve-keldysh") {
      summary = cmd_solve_keldysh(cfg);
    } else if (c == "verify-sympos") {
      summary = cmd_verify_sympos(cfg, status);
    } else if (c == "uniqueness-demo") {
      summary = cmd_uniqueness_demo(cfg);
    } else if (c == "overdetermination") {
      summary = cmd_overdetermination(cfg);
    } else {
      fail(ErrorKind::ConfigError, "unknown command '" + c + "'");
    }
    out << summary.pretty();
    return status;
  } catch (const Error& e) {
    JsonObject o;
    o.add("error", to_string(e.kind()));
    o.add("message", e.what());
    err << o.pretty();
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
}

}  // namespace ehyp::cli
