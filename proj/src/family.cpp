#include "wedge/family.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double signed_pow(double u, double p) { return std::pow(std::abs(u), p - 1.0) * u; }

std::vector<double> zero_vec(int n) { return std::vector<double>(n, 0.0); }

double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

// quintic smoothstep cutoff: 1 on r <= 1/2, 0 on r >= 1
struct Cutoff {
  double value = 0.0, d1 = 0.0, d2 = 0.0;
  explicit Cutoff(double r) {
    if (r <= 0.5) {
      value = 1.0;
    } else if (r < 1.0) {
      const double s = (r - 0.5) * 2.0;
      value = 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
      d1 = -2.0 * s * s * (30.0 + s * (-60.0 + 30.0 * s));
      d2 = -4.0 * s * (60.0 + s * (-180.0 + 120.0 * s));
    }
  }
};

U1Fields make_fields(const SpectralData& spec, const HeteroclinicParams& params,
                     const Heteroclinic& het, const StripField& psi) {
  const auto& g = psi.grid;
  const double beta = spec.cap.beta;
  const double kappa = spec.lambda - params.eps;
  const double hth = beta * g.hs;
  const int n = spec.cap.n;

  U1Fields f{StripField::zeros(g), StripField::zeros(g), StripField::zeros(g),
             StripField::zeros(g)};
  std::vector<double> phi1s(g.ns);
  for (std::size_t j = 0; j < g.ns; ++j) phi1s[j] = spec.phi1_at(beta * g.s[j]);

  for (std::size_t i = 0; i < g.nt; ++i) {
    const double a = het.at(g.t[i]);
    for (std::size_t j = 0; j < g.ns; ++j)
      f.phi.at(i, j) = a * phi1s[j] + psi.at(i, j);
  }

  auto d_t = [&](std::size_t i, std::size_t j) {
    if (i == 0)
      return (-3.0 * f.phi.at(0, j) + 4.0 * f.phi.at(1, j) - f.phi.at(2, j)) /
             (2.0 * g.ht);
    if (i + 1 == g.nt)
      return (3.0 * f.phi.at(i, j) - 4.0 * f.phi.at(i - 1, j) + f.phi.at(i - 2, j)) /
             (2.0 * g.ht);
    return (f.phi.at(i + 1, j) - f.phi.at(i - 1, j)) / (2.0 * g.ht);
  };
  for (std::size_t i = 0; i < g.nt; ++i)
    for (std::size_t j = 0; j < g.ns; ++j) {
      f.phi_t.at(i, j) = d_t(i, j);
      if (j == 0)
        f.phi_th.at(i, j) = 0.0;  // even symmetry at the axis
      else if (j + 1 == g.ns)
        f.phi_th.at(i, j) = (3.0 * f.phi.at(i, j) - 4.0 * f.phi.at(i, j - 1) +
                             f.phi.at(i, j - 2)) /
                            (2.0 * hth);
      else
        f.phi_th.at(i, j) = (f.phi.at(i, j + 1) - f.phi.at(i, j - 1)) / (2.0 * hth);
    }

  for (std::size_t i = 0; i < g.nt; ++i) {
    const std::size_t ic = std::min(std::max<std::size_t>(i, 1), g.nt - 2);
    for (std::size_t j = 0; j < g.ns; ++j) {
      const double ptt = (f.phi.at(ic + 1, j) - 2.0 * f.phi.at(ic, j) +
                          f.phi.at(ic - 1, j)) /
                         (g.ht * g.ht);
      double lap_s;
      if (j == 0) {
        lap_s = (n - 1) * 2.0 * (f.phi.at(i, 1) - f.phi.at(i, 0)) / (hth * hth);
      } else if (j + 1 == g.ns) {
        lap_s = (f.phi.at(i, j) - 2.0 * f.phi.at(i, j - 1) + f.phi.at(i, j - 2)) /
                    (hth * hth) +
                (n - 2) / std::tan(beta * g.s[j - 1]) * f.phi_th.at(i, j - 1);
      } else {
        lap_s = (f.phi.at(i, j + 1) - 2.0 * f.phi.at(i, j) + f.phi.at(i, j - 1)) /
                    (hth * hth) +
                (n - 2) / std::tan(beta * g.s[j]) * f.phi_th.at(i, j);
      }
      f.lap.at(i, j) = ptt + params.A * f.phi_t.at(ic, j) + kappa * f.phi.at(i, j) +
                       lap_s;
    }
  }
  return f;
}

FamilyMember make_member(const EdgeFamilySpec& spec, double tau, double T) {
  FamilyMember m;
  m.tau = tau;
  m.beta = spec.beta_fn(tau);
  m.spec = solve_cap_eigen({spec.n, m.beta, BcAtZero::Symmetry},
                           {spec.cap_nodes});
  const double mu = moment(m.spec, spec.p + 1.0);
  m.params = ode_params(spec.n, m.spec.lambda, spec.p, mu);
  m.het = solve_heteroclinic(m.params, T + 2.0);
  const std::size_t nt = static_cast<std::size_t>(2.0 * T / spec.strip_ht) | 1;
  auto grid = StripGrid::make(T, nt, spec.strip_ns);
  StripOperator op = assemble_Lp(m.spec, m.het, grid, 0.5 * (1.0 + spec.p));
  m.psi = fixed_point_psi(op).psi;
  m.fields = make_fields(m.spec, m.params, m.het, m.psi);
  return m;
}

FamilyData build_family_impl(const EdgeFamilySpec& spec, std::size_t tau_nodes,
                             bool parallel) {
  spec.validate();
  if (tau_nodes < 3) throw DomainError("family needs at least 3 tau nodes");

  FamilyData fd;
  fd.p = spec.p;
  fd.eps_scale = spec.eps_scale;
  fd.tau.resize(tau_nodes);
  for (std::size_t k = 0; k < tau_nodes; ++k)
    fd.tau[k] = spec.tau1 + (spec.tau2 - spec.tau1) * static_cast<double>(k) /
                                static_cast<double>(tau_nodes - 1);

  // shared truncation half-length: max of the per-tau decay budgets
  double T = spec.T;
  if (T <= 0.0) {
    for (double tau : fd.tau) {
      const double beta = spec.beta_fn(tau);
      SpectralData cheap = solve_cap_eigen({spec.n, beta, BcAtZero::Symmetry},
                                           {std::min<std::size_t>(spec.cap_nodes, 257)});
      const auto params =
          ode_params(spec.n, cheap.lambda, spec.p, moment(cheap, spec.p + 1.0));
      T = std::max(T, default_T(params));
    }
    T *= 1.01;
  }

  fd.members.resize(tau_nodes);
  std::vector<std::string> failures(tau_nodes);
  const long nk = static_cast<long>(tau_nodes);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < nk; ++k) {
      try {
        fd.members[k] = make_member(spec, fd.tau[k], T);
      } catch (const std::exception& e) {
        failures[k] = e.what();
      }
    }
  } else {
    for (long k = 0; k < nk; ++k) {
      try {
        fd.members[k] = make_member(spec, fd.tau[k], T);
      } catch (const std::exception& e) {
        failures[k] = e.what();
      }
    }
  }
  std::string diag;
  for (std::size_t k = 0; k < tau_nodes; ++k)
    if (!failures[k].empty())
      diag += "tau=" + std::to_string(fd.tau[k]) + ": " + failures[k] + "; ";
  if (!diag.empty()) throw SolverError("family solves failed: " + diag);

  fd.lambda_star = fd.members[0].spec.lambda;
  fd.gamma_star = fd.members[0].spec.gamma;
  fd.sup_p_star = fd.members[0].spec.p_star;
  for (const auto& m : fd.members) {
    fd.lambda_star = std::min(fd.lambda_star, m.spec.lambda);
    fd.gamma_star = std::min(fd.gamma_star, m.spec.gamma);
    fd.sup_p_star = std::max(fd.sup_p_star, m.spec.p_star);
  }
  if (spec.p <= fd.sup_p_star)
    throw DomainError("p must exceed the family's critical exponent sup");

  const double alpha = alpha_exponent(spec.p);
  fd.delta = (spec.delta != 0.0) ? spec.delta : -alpha;
  const double hi = spec.n + fd.gamma_star - 2.0;
  fd.rho = (spec.rho != 0.0) ? spec.rho : -0.5 * (alpha + hi);
  if (-fd.rho < alpha - 1e-9 || -fd.rho >= hi)
    throw DomainError("far-field weight exponent outside [2/(p-1), n+gamma*-2)");
  return fd;
}

// value of the member solution in Cartesian coordinates about the cap axis e_n
double u1_cart(const FamilyMember& m, double p, const std::vector<double>& y) {
  const double r = norm(y);
  const double ct = std::clamp(y.back() / r, -1.0, 1.0);
  return u1_value(m, p, r, std::acos(ct));
}

}  // namespace

void EdgeFamilySpec::validate() const {
  if (n < 2) throw DomainError("dimension must be at least 2");
  if (p <= 1.0) throw DomainError("exponent p must exceed 1");
  if (!(eps_scale > 0.0)) throw DomainError("eps_scale must be positive");
  if (!(tau2 > tau1)) throw DomainError("empty tau window");
  if (!beta_fn) throw DomainError("beta_fn is required");
  if (cap_nodes < 65) throw DomainError("cap grid too coarse");
  if (strip_ns < 17) throw DomainError("strip angular grid too coarse");
  if (!(strip_ht > 0.0) || strip_ht > 0.5)
    throw DomainError("strip axial spacing out of range");
}

std::vector<double> EdgeFamilySpec::sigma(double tau) const {
  if (!sigma_fn) return zero_vec(n);
  auto s = sigma_fn(tau);
  if (static_cast<int>(s.size()) != n)
    throw DomainError("sigma_fn must return an n-vector");
  return s;
}

double beta_for_lambda(int n, double lambda, BcAtZero bc, std::size_t nodes) {
  if (!(lambda > 0.0)) throw DomainError("target eigenvalue must be positive");
  auto ev = [&](double beta) {
    return solve_cap_eigen({n, beta, bc}, {nodes}).lambda;
  };
  double lo = 0.15, hi = std::min(3.05, kPi - 0.03);
  if (ev(lo) < lambda || ev(hi) > lambda)
    throw DomainError("target eigenvalue outside the resolvable half-angle range");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ev(mid) > lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FamilyData build_family(const EdgeFamilySpec& spec, std::size_t tau_nodes) {
  return build_family_impl(spec, tau_nodes, true);
}

FamilyData build_family_serial(const EdgeFamilySpec& spec, std::size_t tau_nodes) {
  return build_family_impl(spec, tau_nodes, false);
}

double u1_value(const FamilyMember& m, double p, double r, double theta) {
  const double alpha = alpha_exponent(p);
  const double T = m.psi.grid.T;
  const double t = -std::log(r);
  if (!(r > 0.0) || t < -T - 1e-9 || t > T + 1e-9)
    throw DomainError("radius outside the member truncation window");
  const double beta = m.beta;
  if (theta < -1e-12 || theta > beta + 1e-12)
    throw DomainError("angle outside the member cap");
  const double s = std::clamp(theta / beta, 0.0, 1.0);
  return std::pow(r, -alpha) * m.fields.phi.interp(std::clamp(t, -T, T), s);
}

ConeDerivs u1_derivs(const FamilyMember& m, double p, double r, double theta) {
  const double alpha = alpha_exponent(p);
  const double T = m.psi.grid.T;
  const double t = -std::log(r);
  if (!(r > 0.0) || t < -T - 1e-9 || t > T + 1e-9)
    throw DomainError("radius outside the member truncation window");
  const double s = std::clamp(theta / m.beta, 0.0, 1.0);
  const double tc = std::clamp(t, -T, T);
  const double ph = m.fields.phi.interp(tc, s);
  const double pt = m.fields.phi_t.interp(tc, s);
  const double pth = m.fields.phi_th.interp(tc, s);
  const double lp = m.fields.lap.interp(tc, s);
  ConeDerivs d;
  d.value = std::pow(r, -alpha) * ph;
  d.du_r = std::pow(r, -alpha - 1.0) * (-alpha * ph - pt);
  d.du_th = std::pow(r, -alpha) * pth;
  d.lap = std::pow(r, -alpha - 2.0) * lp;
  return d;
}

EigenTauReport eigenfunction_tau_constant(const FamilyData& fd) {
  if (fd.members.size() < 3)
    throw DomainError("tau grid too coarse for the derivative stencil");
  const double h = fd.htau();
  EigenTauReport rep;
  const std::size_t ms = 65;
  for (std::size_t k = 0; k < fd.members.size(); ++k) {
    for (std::size_t j = 0; j < ms; ++j) {
      const double s =
          0.98 * static_cast<double>(j) / static_cast<double>(ms - 1);
      auto eval = [&](std::size_t kk) {
        return fd.members[kk].spec.phi1_at(fd.members[kk].beta * s);
      };
      const double v = eval(k);
      rep.sup_phi = std::max(rep.sup_phi, std::abs(v));
      if (k == 0 || k + 1 == fd.members.size()) continue;
      const double d1 = (eval(k + 1) - eval(k - 1)) / (2.0 * h);
      const double d2 = (eval(k + 1) - 2.0 * v + eval(k - 1)) / (h * h);
      rep.sup_dtau = std::max(rep.sup_dtau, std::abs(d1));
      rep.sup_d2tau = std::max(rep.sup_d2tau, std::abs(d2));
      rep.constant = std::max(rep.constant, std::abs(v) + std::abs(d1) + std::abs(d2));
    }
  }
  rep.constant = std::max(rep.constant, rep.sup_phi);
  return rep;
}

HetTauReport heteroclinic_tau_bounds(const FamilyData& fd) {
  if (fd.members.size() < 3)
    throw DomainError("tau grid too coarse for the derivative stencil");
  const double h = fd.htau();
  const double T = fd.members[0].psi.grid.T;
  HetTauReport rep;
  for (const auto& m : fd.members)
    if (!m.params.delta_tilde_real) rep.right_skipped = true;

  for (std::size_t k = 1; k + 1 < fd.members.size(); ++k) {
    const auto& q = fd.members[k].params;
    // right tail: a tends to the tau-dependent rest point a_inf, so the decay
    // bound applies to the deviation a - a_inf
    auto dev = [&](std::size_t kk, double t) {
      return fd.members[kk].het.at(t) - fd.members[kk].params.a_inf;
    };
    for (double t = -0.9 * T; t <= 0.9 * T; t += 0.25) {
      const bool right = t >= 3.0;
      const double fp = right ? dev(k + 1, t) : fd.members[k + 1].het.at(t);
      const double f0 = right ? dev(k, t) : fd.members[k].het.at(t);
      const double fm = right ? dev(k - 1, t) : fd.members[k - 1].het.at(t);
      const double d1 = (fp - fm) / (2.0 * h);
      const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
      if (t <= -3.0) {
        const double w = std::abs(t) * std::exp(q.delta_minus * t);
        rep.left_ratio = std::max(rep.left_ratio, std::abs(d1) / w);
        rep.left_ratio2 = std::max(rep.left_ratio2, std::abs(d2) / (std::abs(t) * w));
      } else if (right) {
        if (!rep.right_skipped) {
          const double w = std::abs(t) * std::exp(q.delta_tilde_plus * t);
          rep.right_ratio = std::max(rep.right_ratio, std::abs(d1) / w);
          rep.right_ratio2 =
              std::max(rep.right_ratio2, std::abs(d2) / (std::abs(t) * w));
        }
      } else {
        rep.middle_sup = std::max(rep.middle_sup, std::abs(d1));
        rep.middle_sup2 = std::max(rep.middle_sup2, std::abs(d2));
      }
    }
  }
  return rep;
}

U1TauReport u1_tau_bounds(const FamilyData& fd) {
  if (fd.members.size() < 3)
    throw DomainError("tau grid too coarse for the derivative stencil");
  const double h = fd.htau();
  const double alpha = alpha_exponent(fd.p);
  double beta_min = fd.members[0].beta;
  for (const auto& m : fd.members) beta_min = std::min(beta_min, m.beta);

  U1TauReport rep;
  for (std::size_t k = 1; k + 1 < fd.members.size(); ++k)
    for (int ir = 0; ir < 9; ++ir) {
      const double r = std::pow(10.0, -2.0 + 2.0 * ir / 8.0);
      for (int jt = 0; jt < 9; ++jt) {
        const double th = 0.85 * beta_min * jt / 8.0;
        const double up = u1_value(fd.members[k + 1], fd.p, r, th);
        const double u0 = u1_value(fd.members[k], fd.p, r, th);
        const double um = u1_value(fd.members[k - 1], fd.p, r, th);
        const double w = std::pow(r, alpha);
        rep.C_first = std::max(rep.C_first, w * std::abs(up - um) / (2.0 * h));
        rep.C_second =
            std::max(rep.C_second, w * std::abs(up - 2.0 * u0 + um) / (h * h));
      }
    }
  return rep;
}

double weighted_norm(const std::vector<WeightedSample>& samples, double delta,
                     double rho) {
  double m = 0.0;
  for (const auto& s : samples) {
    const double w = (s.r_sigma <= 1.0) ? std::pow(s.r_sigma, -delta)
                                        : std::pow(s.x_norm, -rho);
    m = std::max(m, w * std::abs(s.value));
  }
  return m;
}

ResidualReport wedge_residual(const EdgeFamilySpec& spec, const FamilyData& fd,
                              const ResidualGrid& grid) {
  if (spec.n < 3)
    throw DomainError("wedge residual evaluation requires n >= 3");
  if (fd.members.size() < 5)
    throw DomainError("tau grid too coarse for the second-derivative stencil");
  if (grid.nr < 4 || grid.ntheta < 4 || grid.nazimuth < 1 ||
      !(grid.r_min > 0.0) || !(grid.r_max > grid.r_min))
    throw DomainError("invalid residual sample grid");

  const double eps = spec.eps_scale;
  const double alpha = alpha_exponent(fd.p);
  const double h = fd.htau();
  const int n = spec.n;
  double beta_min = fd.members[0].beta;
  for (const auto& m : fd.members) beta_min = std::min(beta_min, m.beta);

  auto u_eps = [&](std::size_t k, const std::vector<double>& x) {
    const auto sig = spec.sigma(fd.tau[k]);
    std::vector<double> y(n);
    for (int c = 0; c < n; ++c) y[c] = (x[c] - sig[c]) / eps;
    const double xr = norm(x);
    return Cutoff(xr).value * std::pow(eps, -alpha) *
           u1_cart(fd.members[k], fd.p, y);
  };

  std::vector<WeightedSample> samples;
  double sup_f = 0.0;
  for (std::size_t k = 1; k + 1 < fd.members.size(); ++k) {
    const auto sig = spec.sigma(fd.tau[k]);
    for (std::size_t ia = 0; ia < grid.nazimuth; ++ia) {
      const double az = kPi * static_cast<double>(ia) /
                        static_cast<double>(grid.nazimuth);
      for (std::size_t ir = 0; ir < grid.nr; ++ir) {
        const double r = grid.r_min * std::pow(grid.r_max / grid.r_min,
                                               static_cast<double>(ir) /
                                                   static_cast<double>(grid.nr - 1));
        for (std::size_t jt = 1; jt + 1 < grid.ntheta; ++jt) {
          const double th = 0.9 * beta_min * static_cast<double>(jt) /
                            static_cast<double>(grid.ntheta - 1);
          std::vector<double> x(n, 0.0);
          x[0] = r * std::sin(th) * std::cos(az);
          x[1] = r * std::sin(th) * std::sin(az);
          x[n - 1] = r * std::cos(th);

          // shifted-frame geometry
          std::vector<double> y(n);
          for (int c = 0; c < n; ++c) y[c] = (x[c] - sig[c]) / eps;
          const double ry = norm(y);
          const double ct = std::clamp(y[n - 1] / ry, -1.0, 1.0);
          const double thy = std::acos(ct);
          if (thy > 0.97 * fd.members[k].beta) continue;

          const auto d = u1_derivs(fd.members[k], fd.p, ry, thy);
          const double W = std::pow(eps, -alpha) * d.value;
          const double lapW = std::pow(eps, -alpha - 2.0) * d.lap;

          // Cartesian gradient of W from the shifted polar derivatives
          const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
          std::vector<double> gW(n, 0.0);
          for (int c = 0; c < n; ++c) {
            const double yhat = y[c] / ry;
            double gth = 0.0;
            if (st > 1e-12)
              gth = (yhat * ct - (c == n - 1 ? 1.0 : 0.0)) / (ry * st);
            gW[c] = std::pow(eps, -alpha - 1.0) * (d.du_r * yhat + d.du_th * gth);
          }

          const double xr = norm(x);
          const Cutoff eta(xr);
          double grad_dot = 0.0;
          for (int c = 0; c < n; ++c) grad_dot += (x[c] / xr) * gW[c];
          const double lap_ueps = eta.value * lapW + 2.0 * eta.d1 * grad_dot +
                                  W * (eta.d2 + (n - 1) * eta.d1 / xr);

          const double d2tau =
              (u_eps(k + 1, x) - 2.0 * eta.value * W + u_eps(k - 1, x)) / (h * h);

          double rs = 0.0;
          for (int c = 0; c < n; ++c) rs += (x[c] - sig[c]) * (x[c] - sig[c]);
          rs = std::sqrt(rs);
          const double f =
              rs * rs * (d2tau + lap_ueps + signed_pow(eta.value * W, fd.p));
          samples.push_back({rs, xr, f});
          sup_f = std::max(sup_f, std::abs(f));
        }
      }
    }
  }
  ResidualReport rep;
  rep.norm = weighted_norm(samples, fd.delta, fd.rho);
  rep.sup_f = sup_f;
  rep.samples = samples.size();
  return rep;
}

BarrierReport barrier_checks(const EdgeFamilySpec& spec, double delta) {
  spec.validate();
  if (spec.n < 3)
    throw DomainError("barrier evaluation requires n >= 3");
  const int n = spec.n;

  double beta_star = 0.0;
  for (int k = 0; k <= 64; ++k)
    beta_star = std::max(
        beta_star, spec.beta_fn(spec.tau1 + (spec.tau2 - spec.tau1) * k / 64.0));
  SpectralData env = solve_cap_eigen({n, beta_star, BcAtZero::Symmetry},
                                     {std::max<std::size_t>(spec.cap_nodes, 2049)});
  const double gamma_star = env.gamma;
  if (delta > 1e-12 || delta <= 2.0 - n - gamma_star)
    throw DomainError("barrier exponent outside (2-n-gamma*, 0]");

  const CapBarrier bar = phi_star(env, gamma_star - delta);

  // cubic interpolant of the barrier profile with finite-difference slopes
  HermiteTable tab;
  tab.x0 = bar.t.front();
  tab.h = bar.t[1] - bar.t[0];
  tab.v = bar.v;
  tab.d.resize(bar.v.size());
  const std::size_t nb = bar.v.size();
  for (std::size_t i = 0; i < nb; ++i) {
    if (i >= 2 && i + 2 < nb)
      tab.d[i] = (bar.v[i - 2] - 8.0 * bar.v[i - 1] + 8.0 * bar.v[i + 1] -
                  bar.v[i + 2]) /
                 (12.0 * tab.h);
    else if (i == 0)
      tab.d[i] = (-3.0 * bar.v[0] + 4.0 * bar.v[1] - bar.v[2]) / (2.0 * tab.h);
    else if (i + 1 >= nb)
      tab.d[i] = (3.0 * bar.v[i] - 4.0 * bar.v[i - 1] + bar.v[i - 2]) / (2.0 * tab.h);
    else
      tab.d[i] = (bar.v[i + 1] - bar.v[i - 1]) / (2.0 * tab.h);
  }

  auto g_at = [&](const std::vector<double>& x) {
    const double r = norm(x);
    const double th = std::acos(std::clamp(x[n - 1] / r, -1.0, 1.0));
    if (th >= beta_star) return 0.0;
    return std::pow(r, delta) * tab.eval(th);
  };

  auto identity_error = [&](double hstep) {
    double worst = 0.0;
    for (double r : {0.8, 1.0, 1.3})
      for (int jt = 1; jt <= 7; ++jt) {
        const double th = beta_star * (0.1 + 0.7 * (jt - 1) / 6.0);
        std::vector<double> x(n, 0.0);
        x[0] = r * std::sin(th);
        x[n - 1] = r * std::cos(th);
        double lap = 0.0;
        const double g0 = g_at(x);
        for (int c = 0; c < n; ++c) {
          auto xp = x, xm = x;
          xp[c] += hstep;
          xm[c] -= hstep;
          lap += (g_at(xp) - 2.0 * g0 + g_at(xm)) / (hstep * hstep);
        }
        const double expect = -std::pow(r, delta - 2.0);
        worst = std::max(worst, std::abs(lap - expect) / std::abs(expect));
      }
    return worst;
  };

  BarrierReport rep;
  rep.identity_rel_error = identity_error(5e-3);
  rep.identity_rel_error_half = identity_error(2.5e-3);

  // sampled curve bounds
  const double hs = 1e-3;
  for (int k = 0; k <= 128; ++k) {
    const double tau = spec.tau1 + (spec.tau2 - spec.tau1) * k / 128.0;
    const auto s0 = spec.sigma(tau);
    const auto sp = spec.sigma(tau + hs);
    const auto sm = spec.sigma(tau - hs);
    std::vector<double> d1(n), d2(n);
    for (int c = 0; c < n; ++c) {
      d1[c] = (sp[c] - sm[c]) / (2.0 * hs);
      d2[c] = (sp[c] - 2.0 * s0[c] + sm[c]) / (hs * hs);
    }
    rep.curve_bound =
        std::max(rep.curve_bound, norm(s0) + norm(d1) + norm(d2));
  }

  // starred inequality margin along the curve: the x-part of the Laplacian is
  // exact by the identity above (applied about the shifted center), the
  // tau-part is a centered difference
  const double htau = 1e-2;
  rep.min_margin = std::numeric_limits<double>::infinity();
  auto G = [&](double tau, const std::vector<double>& x) {
    const auto sig = spec.sigma(tau);
    std::vector<double> y(n);
    for (int c = 0; c < n; ++c) y[c] = x[c] - sig[c];
    return g_at(y);
  };
  for (int kt = 0; kt <= 16; ++kt) {
    const double tau = spec.tau1 + (spec.tau2 - spec.tau1) * kt / 16.0;
    const auto sig = spec.sigma(tau);
    for (double az : {0.0, kPi / 2}) {
      for (double r : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0})
        for (int jt = 1; jt <= 9; ++jt) {
          const double th = beta_star * (0.05 + 0.8 * (jt - 1) / 8.0);
          std::vector<double> x(n, 0.0);
          x[0] = r * std::sin(th) * std::cos(az);
          x[1] = r * std::sin(th) * std::sin(az);
          x[n - 1] = r * std::cos(th);
          double rs = 0.0;
          for (int c = 0; c < n; ++c) rs += (x[c] - sig[c]) * (x[c] - sig[c]);
          rs = std::sqrt(rs);
          const double d2tau =
              (G(tau + htau, x) - 2.0 * G(tau, x) + G(tau - htau, x)) /
              (htau * htau);
          const double margin = 0.5 * (std::pow(rs, delta - 2.0) +
                                       std::pow(rs, delta - 1.0)) -
                                d2tau;
          rep.min_margin = std::min(rep.min_margin, margin);
        }
    }
  }
  return rep;
}

}  // namespace wedge
