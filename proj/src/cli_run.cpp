#include "wedge/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wedge/cap_spectrum.hpp"
#include "wedge/errors.hpp"
#include "wedge/family.hpp"
#include "wedge/heteroclinic.hpp"
#include "wedge/profile.hpp"
#include "wedge/singular.hpp"
#include "wedge/strip.hpp"

namespace wedge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

// Configuration failures are reported with exit 2, distinct from the solver
// domain errors (exit 3) raised once the computation is underway.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  long seed = 0;
  double tol = 1e-8;
  json config;  // parsed --config document, empty object when absent
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file; flags override its values");
  cmd->add_option("--out", c.out_dir, "output directory for the JSON report and CSV files");
  cmd->add_option("--seed", c.seed, "seed for randomized sample draws");
  cmd->add_option("--tol", c.tol, "generic tolerance knob recorded in the report");
}

void load_config(CLI::App* cmd, Common& c) {
  if (c.config_path.empty()) {
    c.config = json::object();
    return;
  }
  std::ifstream in(c.config_path);
  if (!in) throw ConfigError("cannot open config file: " + c.config_path);
  try {
    in >> c.config;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!c.config.is_object()) throw ConfigError("config root must be a JSON object");
  // file values apply only where the flag was not given on the command line
  for (const auto& [key, value] : c.config.items()) {
    const std::string flag = "--" + key;
    CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt == nullptr) throw ConfigError("unknown config field: " + key);
    if (opt->count() > 0) continue;
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    try {
      opt->add_result(text);
      opt->run_callback();
    } catch (const CLI::Error&) {
      throw ConfigError("config field " + key + ": invalid value " + text);
    }
  }
}

// ---------------------------------------------------------------------------
// report plumbing

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path.string());
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

fs::path ensure_out_dir(const Common& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create " + dir.string());
  return dir;
}

void write_report(const Common& c, const std::string& name, json resolved,
                  json results) {
  const fs::path dir = ensure_out_dir(c);
  resolved["seed"] = c.seed;
  resolved["tol"] = c.tol;
  json doc;
  doc["subcommand"] = name;
  doc["config"] = std::move(resolved);
  doc["results"] = std::move(results);
  doc["generated_at"] = timestamp();
  write_text(dir / (name + ".json"), doc.dump(2) + "\n");
}

void write_csv(const Common& c, const std::string& file, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << header << "\n";
  os.precision(17);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k)
      os << (k ? "," : "") << row[k];
    os << "\n";
  }
  write_text(ensure_out_dir(c) / file, os.str());
}

// ---------------------------------------------------------------------------
// shared solve helpers

BcAtZero parse_bc(const std::string& bc) {
  if (bc == "symmetry") return BcAtZero::Symmetry;
  if (bc == "dirichlet") return BcAtZero::Dirichlet;
  throw ConfigError("bc must be 'symmetry' or 'dirichlet'");
}

struct CorrectorBundle {
  SpectralData spec;
  HeteroclinicParams params;
  Heteroclinic het;
  StripGrid grid;
  FixedPointResult fp;
  double kernel_sigma = 0.0;
};

CorrectorBundle solve_corrector(int n, double beta, double p, std::size_t nodes,
                                double T, double ht, std::size_t ns) {
  CorrectorBundle b;
  b.spec = solve_cap_eigen({n, beta, BcAtZero::Symmetry}, {nodes});
  if (p <= b.spec.p_star)
    throw SolverError("exponent p must exceed the critical exponent p* = " +
                      std::to_string(b.spec.p_star));
  b.params = ode_params(n, b.spec.lambda, p, moment(b.spec, p + 1.0));
  if (T <= 0.0) T = default_T(b.params);
  b.het = solve_heteroclinic(b.params, T + 2.0);
  std::size_t nt = static_cast<std::size_t>(2.0 * T / ht) | 1u;
  b.grid = StripGrid::make(T, nt, ns);
  StripOperator op = assemble_Lp(b.spec, b.het, b.grid, 0.5 * (1.0 + p));
  b.kernel_sigma = op.kernel_sigma();
  b.fp = fixed_point_psi(op);
  return b;
}

// ---------------------------------------------------------------------------
// subcommand runners

struct SpectrumArgs {
  int n = 3;
  double beta = kPi / 2.0;
  std::string bc = "symmetry";
  std::size_t nodes = 2049;
};

void run_spectrum(const Common& c, const SpectrumArgs& a) {
  const auto spec = solve_cap_eigen({a.n, a.beta, parse_bc(a.bc)}, {a.nodes});
  json results{{"lambda", spec.lambda},
               {"gamma", spec.gamma},
               {"p_star", spec.p_star},
               {"surface_factor", spec.c_n},
               {"representation_residual", representation_residual(spec)}};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < spec.t.size(); ++i)
    rows.push_back({spec.t[i], spec.phi1[i], spec.phi1_prime[i]});
  write_csv(c, "spectrum_phi1.csv", "theta,phi1,phi1_prime", rows);
  write_report(c, "spectrum",
               {{"n", a.n}, {"beta", a.beta}, {"bc", a.bc}, {"nodes", a.nodes}},
               results);
}

struct ProfileArgs {
  int n = 3;
  double beta = kPi / 2.0;
  double p = 0.0;
  std::size_t nodes = 2049;
};

void run_profile(const Common& c, const ProfileArgs& a) {
  const auto spec = solve_cap_eigen({a.n, a.beta, BcAtZero::Symmetry}, {a.nodes});
  if (a.p <= spec.p_star)
    throw SolverError("exponent p must exceed the critical exponent p* = " +
                      std::to_string(spec.p_star));
  const auto prof = solve_profile(spec, a.p, {a.nodes});
  std::vector<double> samples;
  for (int k = 1; k < 16; ++k) samples.push_back(a.beta * k / 16.0);
  json results{{"lambda", spec.lambda},
               {"p_star", spec.p_star},
               {"kappa", prof.kappa},
               {"amplitude", prof.amplitude},
               {"sup", prof.sup()},
               {"cone_residual", cone_residual(prof, samples)},
               {"near_critical_distance", near_critical_asymptote(spec, a.p, prof)}};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < prof.t.size(); ++i)
    rows.push_back({prof.t[i], prof.phi_p[i], prof.phi_p_prime[i]});
  write_csv(c, "profile_phi.csv", "theta,phi_p,phi_p_prime", rows);
  write_report(c, "profile",
               {{"n", a.n}, {"beta", a.beta}, {"p", a.p}, {"nodes", a.nodes}},
               results);
}

struct HetArgs {
  int n = 3;
  double lambda = 2.0;
  double p = 0.0;
  double mu = 1.0;
  double T = 0.0;
};

void run_heteroclinic(const Common& c, const HetArgs& a) {
  const auto params = ode_params(a.n, a.lambda, a.p, a.mu);
  const auto het = solve_heteroclinic(params, a.T);
  const auto tails = verify_tail_rates(het);
  json results{{"a_inf", params.a_inf},
               {"delta_minus", params.delta_minus},
               {"delta_tilde_real", params.delta_tilde_real},
               {"delta_tilde_plus", params.delta_tilde_plus},
               {"delta_tilde_minus", params.delta_tilde_minus},
               {"oscillation", het.oscillation},
               {"left_slope", tails.left_slope},
               {"right_slope", tails.right_slope},
               {"sandwich_ok", tails.sandwich_ok},
               {"matched_root", tails.matched_root}};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < het.t.size(); ++i)
    rows.push_back({het.t[i], het.a[i], het.da[i]});
  write_csv(c, "heteroclinic_orbit.csv", "t,a,da", rows);
  write_report(c, "heteroclinic",
               {{"n", a.n},
                {"lambda", a.lambda},
                {"p", a.p},
                {"mu", a.mu},
                {"T", a.T}},
               results);
}

struct CorrectorArgs {
  int n = 3;
  double beta = kPi / 2.0;
  double p = 0.0;
  std::size_t nodes = 1025;
  double T = 0.0;
  double ht = 0.25;
  std::size_t ns = 33;
};

json corrector_config(const CorrectorArgs& a) {
  return {{"n", a.n},     {"beta", a.beta}, {"p", a.p}, {"nodes", a.nodes},
          {"T", a.T},     {"ht", a.ht},     {"ns", a.ns}};
}

void run_corrector(const Common& c, const CorrectorArgs& a) {
  const auto b = solve_corrector(a.n, a.beta, a.p, a.nodes, a.T, a.ht, a.ns);
  json results{{"iterations", b.fp.iterations},
               {"smallness_ratio", b.fp.smallness_ratio},
               {"contraction", b.fp.contraction},
               {"interior_residual", b.fp.residual},
               {"sup_psi", b.fp.psi.sup()},
               {"kernel_sigma", b.kernel_sigma},
               {"T", b.grid.T}};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < b.grid.nt; ++i) {
    double row_sup = 0.0;
    for (std::size_t j = 0; j < b.grid.ns; ++j)
      row_sup = std::max(row_sup, std::abs(b.fp.psi.at(i, j)));
    rows.push_back({b.grid.t[i], b.het.at(b.grid.t[i]), row_sup});
  }
  write_csv(c, "corrector_rows.csv", "t,a,sup_s_abs_psi", rows);
  write_report(c, "corrector", corrector_config(a), results);
}

void run_assemble(const Common& c, const CorrectorArgs& a) {
  const auto b = solve_corrector(a.n, a.beta, a.p, a.nodes, a.T, a.ht, a.ns);
  const auto u = assemble_u1(b.spec, b.het, b.fp.psi, a.p);
  const auto prof = solve_profile(b.spec, a.p, {a.nodes});
  const auto rep = verify_asymptotics(u, prof);
  json results{{"alpha", u.alpha()},
               {"T", u.T()},
               {"origin_c0", rep.origin_c0},
               {"origin_mismatch", rep.origin_mismatch},
               {"infinity_slope", rep.infinity_slope},
               {"pointwise_C", rep.pointwise_C}};
  std::vector<std::vector<double>> rows;
  for (int ir = 0; ir <= 24; ++ir) {
    const double r = std::exp(-0.8 * u.T() + 1.6 * u.T() * ir / 24.0);
    for (int jt = 0; jt <= 16; ++jt) {
      const double th = a.beta * jt / 16.0;
      rows.push_back({r, th, u(r, th)});
    }
  }
  write_csv(c, "assemble_u1.csv", "r,theta,u1", rows);
  write_report(c, "assemble", corrector_config(a), results);
}

struct FamilyArgs {
  int n = 3;
  double p = 0.0;
  double lambda0 = 2.0;
  double amp = 0.1;
  double sigma_amp = 0.0;
  std::size_t tau_nodes = 9;
  std::size_t cap_nodes = 257;
  double ht = 0.25;
  std::size_t ns = 33;
  double eps = 1.0;
};

EdgeFamilySpec family_spec(const FamilyArgs& a) {
  EdgeFamilySpec s;
  s.n = a.n;
  s.p = a.p;
  s.eps_scale = a.eps;
  s.cap_nodes = a.cap_nodes;
  s.strip_ht = a.ht;
  s.strip_ns = a.ns;
  const int n = a.n;
  const double l0 = a.lambda0, am = a.amp;
  s.beta_fn = [n, l0, am](double tau) {
    return beta_for_lambda(n, l0 + am * std::sin(tau));
  };
  if (a.sigma_amp > 0.0) {
    const double sa = a.sigma_amp;
    s.sigma_fn = [n, sa](double tau) {
      std::vector<double> x(static_cast<std::size_t>(n), 0.0);
      x[0] = sa * std::sin(tau);
      x[1] = sa * std::cos(tau);
      return x;
    };
  }
  return s;
}

json family_config(const FamilyArgs& a) {
  return {{"n", a.n},
          {"p", a.p},
          {"lambda0", a.lambda0},
          {"amp", a.amp},
          {"sigma-amp", a.sigma_amp},
          {"tau-nodes", a.tau_nodes},
          {"cap-nodes", a.cap_nodes},
          {"ht", a.ht},
          {"ns", a.ns},
          {"eps", a.eps}};
}

void run_family(const Common& c, const FamilyArgs& a) {
  const auto s = family_spec(a);
  const auto fd = build_family(s, a.tau_nodes);
  const auto eig = eigenfunction_tau_constant(fd);
  const auto het = heteroclinic_tau_bounds(fd);
  const auto u1 = u1_tau_bounds(fd);
  json results{{"lambda_star", fd.lambda_star},
               {"gamma_star", fd.gamma_star},
               {"sup_p_star", fd.sup_p_star},
               {"delta", fd.delta},
               {"rho", fd.rho},
               {"eigen_tau",
                {{"sup_phi", eig.sup_phi},
                 {"sup_dtau", eig.sup_dtau},
                 {"sup_d2tau", eig.sup_d2tau},
                 {"constant", eig.constant}}},
               {"het_tau",
                {{"left_ratio", het.left_ratio},
                 {"right_ratio", het.right_ratio},
                 {"middle_sup", het.middle_sup},
                 {"left_ratio2", het.left_ratio2},
                 {"right_ratio2", het.right_ratio2},
                 {"middle_sup2", het.middle_sup2},
                 {"right_skipped", het.right_skipped}}},
               {"u1_tau", {{"C_first", u1.C_first}, {"C_second", u1.C_second}}}};
  std::vector<std::vector<double>> rows;
  for (const auto& m : fd.members)
    rows.push_back({m.tau, m.beta, m.spec.lambda, m.spec.gamma, m.spec.p_star});
  write_csv(c, "family_members.csv", "tau,beta,lambda,gamma,p_star", rows);
  write_report(c, "family", family_config(a), results);
}

struct ResidualArgs {
  FamilyArgs fam;
  std::size_t halvings = 1;
  double r_min = 0.1;
  double r_max = 0.3;
  std::size_t nr = 33;
  std::size_t ntheta = 17;
};

void run_wedge_residual(const Common& c, const ResidualArgs& a) {
  auto s = family_spec(a.fam);
  auto fd = build_family(s, a.fam.tau_nodes);
  ResidualGrid g;
  g.nr = a.nr;
  g.ntheta = a.ntheta;
  g.r_min = a.r_min;
  g.r_max = a.r_max;
  std::vector<std::vector<double>> rows;
  json sweep = json::array();
  double prev = 0.0;
  for (std::size_t k = 0; k <= a.halvings; ++k) {
    const double eps = a.fam.eps / std::pow(2.0, static_cast<double>(k));
    s.eps_scale = eps;
    fd.eps_scale = eps;
    const auto rep = wedge_residual(s, fd, g);
    const double factor = prev > 0.0 ? prev / rep.norm : 0.0;
    sweep.push_back({{"eps", eps},
                     {"norm", rep.norm},
                     {"sup", rep.sup_f},
                     {"samples", rep.samples},
                     {"halving_factor", factor}});
    rows.push_back({eps, rep.norm, rep.sup_f, factor});
    prev = rep.norm;
  }
  json cfg = family_config(a.fam);
  cfg["halvings"] = a.halvings;
  cfg["r-min"] = a.r_min;
  cfg["r-max"] = a.r_max;
  cfg["nr"] = a.nr;
  cfg["ntheta"] = a.ntheta;
  write_csv(c, "wedge_residual_sweep.csv", "eps,weighted_norm,sup,halving_factor",
            rows);
  write_report(c, "wedge-residual", std::move(cfg), {{"sweep", sweep}});
}

struct BarrierArgs {
  FamilyArgs fam;
  double delta = -0.5;
};

void run_barrier(const Common& c, const BarrierArgs& a) {
  const auto s = family_spec(a.fam);
  const auto rep = barrier_checks(s, a.delta);
  json cfg = family_config(a.fam);
  cfg["delta"] = a.delta;
  write_csv(c, "barrier_check.csv",
            "identity_rel_error,identity_rel_error_half,min_margin,curve_bound",
            {{rep.identity_rel_error, rep.identity_rel_error_half, rep.min_margin,
              rep.curve_bound}});
  write_report(c, "barrier-check", std::move(cfg),
               {{"identity_rel_error", rep.identity_rel_error},
                {"identity_rel_error_half", rep.identity_rel_error_half},
                {"min_margin", rep.min_margin},
                {"curve_bound", rep.curve_bound}});
}

void run_verify_all(const Common& c) {
  json checks = json::array();
  std::vector<std::vector<double>> rows;
  bool all_ok = true;
  const auto record = [&](const std::string& name, double measured, double target,
                          double tol) {
    const bool ok = std::abs(measured - target) <= tol;
    all_ok = all_ok && ok;
    checks.push_back({{"name", name},
                      {"measured", measured},
                      {"target", target},
                      {"tol", tol},
                      {"pass", ok}});
    rows.push_back({measured, target, tol, ok ? 1.0 : 0.0});
  };

  const auto hemi = solve_cap_eigen({3, kPi / 2.0, BcAtZero::Symmetry}, {2049});
  record("hemisphere_lambda", hemi.lambda, 2.0, 1e-6);
  record("hemisphere_gamma", hemi.gamma, 1.0, 1e-10);
  record("hemisphere_p_star", hemi.p_star, 2.0, 1e-10);

  const auto flat = solve_cap_eigen({2, kPi / 2.0, BcAtZero::Symmetry}, {2049});
  record("flat_arc_lambda", flat.lambda, 1.0, 1e-8);

  std::mt19937 rng(static_cast<std::mt19937::result_type>(c.seed));
  std::uniform_int_distribution<int> draw_n(2, 10);
  std::uniform_real_distribution<double> draw_lambda(1e-3, 20.0);
  double worst_root = 0.0, worst_gap = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = draw_n(rng);
    const double lambda = draw_lambda(rng);
    const auto ex = exponents(n, lambda);
    worst_root = std::max(
        worst_root, std::abs(lambda - ex.gamma * (ex.gamma + n - 2.0)));
    worst_gap =
        std::max(worst_gap, std::abs(spectral_gap(n, lambda, ex.p_star)));
  }
  record("exponent_root_identity", worst_root, 0.0, 1e-12);
  record("critical_gap_identity", worst_gap, 0.0, 1e-12);

  const auto params = ode_params(3, 2.0, 2.1, 1.0);
  const auto het = solve_heteroclinic(params);
  const auto tails = verify_tail_rates(het);
  record("heteroclinic_left_slope", tails.left_slope, params.delta_minus,
         0.01 * params.delta_minus);
  record("heteroclinic_midpoint", het.at(0.0), params.a_inf / 2.0, 1e-8);

  record("hemisphere_moment4", moment(hemi, 4.0), 9.0 / (10.0 * kPi), 1e-8);

  const auto unit = mazya_constant([](double) { return 1.0; },
                                   [](double) { return 1.0; }, 2.0, 1.0);
  record("mazya_unit_weight_K", unit.K, 0.5, 1e-6);

  write_csv(c, "verify_all.csv", "measured,target,tol,pass", rows);
  write_report(c, "verify-all", json::object(),
               {{"checks", checks}, {"all_pass", all_ok}});
  if (!all_ok) throw SolverError("verification battery failed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"boundary-singular cone and wedge solution toolkit"};
  app.require_subcommand(1);

  Common common;
  SpectrumArgs spectrum;
  ProfileArgs profile;
  HetArgs het;
  CorrectorArgs corrector, assemble;
  FamilyArgs family;
  ResidualArgs residual;
  BarrierArgs barrier;

  const auto add_family_opts = [](CLI::App* cmd, FamilyArgs& a) {
    cmd->add_option("--n", a.n, "ambient cone dimension (edge problem adds one)");
    cmd->add_option("--p", a.p, "nonlinearity exponent");
    cmd->add_option("--lambda0", a.lambda0, "mean cap eigenvalue of the family");
    cmd->add_option("--amp", a.amp, "sinusoidal oscillation of lambda(tau)");
    cmd->add_option("--sigma-amp", a.sigma_amp, "edge-curve circle radius");
    cmd->add_option("--tau-nodes", a.tau_nodes, "tau grid nodes on [0, 2pi]");
    cmd->add_option("--cap-nodes", a.cap_nodes, "per-tau cap eigensolver nodes");
    cmd->add_option("--ht", a.ht, "strip axial spacing");
    cmd->add_option("--ns", a.ns, "strip angular nodes");
    cmd->add_option("--eps", a.eps, "edge scaling parameter of the ansatz");
  };

  auto* c_spectrum = app.add_subcommand(
      "spectrum", "first cap eigenpair; CSV: theta,phi1,phi1_prime");
  c_spectrum->add_option("--n", spectrum.n, "sphere dimension n (cap in S^{n-1})");
  c_spectrum->add_option("--beta", spectrum.beta, "cap half-angle");
  c_spectrum->add_option("--bc", spectrum.bc, "axis condition: symmetry|dirichlet");
  c_spectrum->add_option("--nodes", spectrum.nodes, "radial grid nodes");

  auto* c_profile = app.add_subcommand(
      "profile", "positive cap profile of the separable cone solution; "
                 "CSV: theta,phi_p,phi_p_prime");
  c_profile->add_option("--n", profile.n, "sphere dimension");
  c_profile->add_option("--beta", profile.beta, "cap half-angle");
  c_profile->add_option("--p", profile.p, "nonlinearity exponent");
  c_profile->add_option("--nodes", profile.nodes, "grid nodes");

  auto* c_het = app.add_subcommand(
      "heteroclinic", "connecting orbit of the radial log-variable ODE; "
                      "CSV: t,a,da");
  c_het->add_option("--n", het.n, "sphere dimension");
  c_het->add_option("--lambda", het.lambda, "cap eigenvalue");
  c_het->add_option("--p", het.p, "nonlinearity exponent");
  c_het->add_option("--mu", het.mu, "nonlinear moment coefficient");
  c_het->add_option("--T", het.T, "truncation half-length (0 = automatic)");

  const auto add_corrector_opts = [](CLI::App* cmd, CorrectorArgs& a) {
    cmd->add_option("--n", a.n, "sphere dimension");
    cmd->add_option("--beta", a.beta, "cap half-angle");
    cmd->add_option("--p", a.p, "nonlinearity exponent");
    cmd->add_option("--nodes", a.nodes, "cap grid nodes");
    cmd->add_option("--T", a.T, "strip truncation half-length (0 = automatic)");
    cmd->add_option("--ht", a.ht, "strip axial spacing");
    cmd->add_option("--ns", a.ns, "strip angular nodes");
  };

  auto* c_corr = app.add_subcommand(
      "corrector", "non-separable corrector by fixed-point iteration; "
                   "CSV: t,a,sup_s_abs_psi");
  add_corrector_opts(c_corr, corrector);

  auto* c_asm = app.add_subcommand(
      "assemble", "assemble the singular solution and verify its asymptotics; "
                  "CSV: r,theta,u1");
  add_corrector_opts(c_asm, assemble);

  auto* c_family = app.add_subcommand(
      "family", "per-tau solves along the edge and smoothness constants; "
                "CSV: tau,beta,lambda,gamma,p_star");
  add_family_opts(c_family, family);

  auto* c_res = app.add_subcommand(
      "wedge-residual", "weighted residual of the scaled edge ansatz under "
                        "eps halvings; CSV: eps,weighted_norm,sup,halving_factor");
  add_family_opts(c_res, residual.fam);
  c_res->add_option("--halvings", residual.halvings, "number of eps halvings");
  c_res->add_option("--r-min", residual.r_min, "sample annulus inner radius");
  c_res->add_option("--r-max", residual.r_max, "sample annulus outer radius");
  c_res->add_option("--nr", residual.nr, "radial sample count");
  c_res->add_option("--ntheta", residual.ntheta, "angular sample count");

  auto* c_bar = app.add_subcommand(
      "barrier-check", "supersolution barrier identity and margin; CSV: "
                       "identity_rel_error,identity_rel_error_half,min_margin,"
                       "curve_bound");
  add_family_opts(c_bar, barrier.fam);
  c_bar->get_option("--p")->required(false);
  barrier.fam.p = 2.2;
  c_bar->add_option("--delta", barrier.delta, "barrier exponent in (2-n-gamma*, 0]");

  auto* c_all = app.add_subcommand(
      "verify-all", "run the cross-module verification battery; CSV: "
                    "measured,target,tol,pass");

  for (auto* cmd : {c_spectrum, c_profile, c_het, c_corr, c_asm, c_family, c_res,
                    c_bar, c_all})
    add_common(cmd, common);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  CLI::App* picked = nullptr;
  try {
    app.parse(rev);
    picked = app.get_subcommands().at(0);
    load_config(picked, common);
    // the exponent has no sensible default; require it from flag or config
    const auto require_p = [](double p) {
      if (p <= 0.0) throw ConfigError("--p is required (flag or config file)");
    };
    if (picked == c_profile) require_p(profile.p);
    if (picked == c_het) require_p(het.p);
    if (picked == c_corr) require_p(corrector.p);
    if (picked == c_asm) require_p(assemble.p);
    if (picked == c_family) require_p(family.p);
    if (picked == c_res) require_p(residual.fam.p);
  } catch (const CLI::CallForHelp&) {
    std::puts(app.help().c_str());
    return 0;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    if (picked == c_spectrum) run_spectrum(common, spectrum);
    else if (picked == c_profile) run_profile(common, profile);
    else if (picked == c_het) run_heteroclinic(common, het);
    else if (picked == c_corr) run_corrector(common, corrector);
    else if (picked == c_asm) run_assemble(common, assemble);
    else if (picked == c_family) run_family(common, family);
    else if (picked == c_res) run_wedge_residual(common, residual);
    else if (picked == c_bar) run_barrier(common, barrier);
    else run_verify_all(common);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  }
  return 0;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace wedge
