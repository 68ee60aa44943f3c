#include "wedge/heteroclinic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wedge/cap_spectrum.hpp"
#include "wedge/errors.hpp"
#include "wedge/ode.hpp"

namespace wedge {

double HeteroclinicParams::a_bar() const {
  return a_inf * std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0));
}

HeteroclinicParams ode_params(int n, double lambda, double p, double mu) {
  if (!(p > 1.0)) throw DomainError("ode_params: p must exceed 1");
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw DomainError("ode_params: lambda and mu must be positive");
  HeteroclinicParams q;
  q.n = n;
  q.p = p;
  q.lambda = lambda;
  q.mu = mu;
  q.alpha = alpha_exponent(p);
  q.A = 2.0 * q.alpha + 2.0 - n;
  q.eps = spectral_gap(n, lambda, p);
  if (!(q.A > 0.0) || !(q.eps > 0.0))
    throw DomainError("ode_params: connecting orbit needs A > 0 and eps > 0");
  q.a_inf = std::pow(q.eps / mu, 1.0 / (p - 1.0));
  q.delta_minus = 0.5 * (std::sqrt(q.A * q.A + 4.0 * q.eps) - q.A);
  const double disc = q.A * q.A - 4.0 * (p - 1.0) * q.eps;
  q.delta_tilde_real = disc >= 0.0;
  if (q.delta_tilde_real) {
    q.delta_tilde_plus = 0.5 * (-q.A + std::sqrt(disc));
    q.delta_tilde_minus = 0.5 * (-q.A - std::sqrt(disc));
  } else {
    q.delta_tilde_plus = q.delta_tilde_minus = -0.5 * q.A;
  }
  return q;
}

namespace {

using RK = AdaptiveRK<2>;

RK make_integrator(const HeteroclinicParams& q, double tol) {
  return RK(
      [q](double, const RK::State& y, RK::State& dy) {
        dy[0] = y[1];
        dy[1] = -q.A * y[1] + q.eps * y[0] -
                q.mu * std::pow(std::abs(y[0]), q.p - 1.0) * y[0];
      },
      tol, 1e-2 * tol);
}

}  // namespace

double Heteroclinic::at(double time) const {
  HermiteTable tab{t[0], h(), a, da};
  return tab.eval(time);
}

double Heteroclinic::slope_at(double time) const {
  HermiteTable tab{t[0], h(), a, da};
  return tab.slope(time);
}

Heteroclinic solve_heteroclinic(const HeteroclinicParams& q, double L, double tol) {
  if (L <= 0.0) {
    const double re_up = std::abs(q.delta_tilde_plus);
    L = std::max(std::log(1e8) / q.delta_minus, std::log(1e6) / re_up);
  }

  auto rk = make_integrator(q, tol);
  const double S0 = L + 3.0 / q.delta_minus;
  const double eta = q.a_inf * std::exp(-q.delta_minus * S0);
  const double half = 0.5 * q.a_inf;

  // single pass with dense output; crossing and resampling are done on the
  // stored trajectory so the normalization cannot drift between integrations
  const double ds = 0.01;
  std::vector<double> av, dav, ddav;
  auto push = [&](const RK::State& y) {
    av.push_back(y[0]);
    dav.push_back(y[1]);
    ddav.push_back(-q.A * y[1] + q.eps * y[0] -
                   q.mu * std::pow(std::abs(y[0]), q.p - 1.0) * y[0]);
  };

  double s = 0.0;
  RK::State y{eta, q.delta_minus * eta};
  push(y);
  double s_first = -1.0;
  const std::size_t max_steps = static_cast<std::size_t>((S0 + L + 200.0) / ds);
  for (std::size_t k = 1; k <= max_steps; ++k) {
    rk.integrate_to(s, y, static_cast<double>(k) * ds);
    push(y);
    if (s_first < 0.0 && y[0] >= half) s_first = s;
    if (s_first >= 0.0 && s >= s_first + L + 1.0) break;
  }
  if (s_first < 0.0)
    throw SolverError("solve_heteroclinic: orbit failed to reach a_inf/2",
                      "s=" + std::to_string(s) + " a=" + std::to_string(y[0]));

  const HermiteTable tab_a{0.0, ds, av, dav};
  const HermiteTable tab_da{0.0, ds, dav, ddav};

  double lo = s_first - ds, hi = s_first;
  for (int it = 0; it < 100 && (hi - lo) > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tab_a.eval(mid) < half ? lo : hi) = mid;
  }
  const double s_cross = 0.5 * (lo + hi);
  if (s_cross < L)
    throw SolverError("solve_heteroclinic: crossing precedes the sampling window",
                      "s_cross=" + std::to_string(s_cross) + " L=" + std::to_string(L));

  Heteroclinic out;
  out.params = q;
  out.oscillation = !q.delta_tilde_real;
  const std::size_t m = 4097;
  out.t = linspace(-L, L, m);
  out.a.assign(m, 0.0);
  out.da.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    out.a[j] = tab_a.eval(out.t[j] + s_cross);
    out.da[j] = tab_da.eval(out.t[j] + s_cross);
  }

  const double a0 = out.a[(m - 1) / 2];
  if (std::abs(a0 - half) > 1e-9 * q.a_inf)
    throw SolverError("solve_heteroclinic: normalization drift at t=0",
                      "a(0)=" + std::to_string(a0));
  if (out.a.front() > 1e-3 * q.a_inf || std::abs(out.a.back() - q.a_inf) > 1e-3 * q.a_inf)
    throw SolverError("solve_heteroclinic: endpoints not in the rest-point basins",
                      "a(-L)=" + std::to_string(out.a.front()) +
                          " a(L)=" + std::to_string(out.a.back()));
  return out;
}

namespace {

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TailReport verify_tail_rates(const Heteroclinic& h) {
  const auto& q = h.params;
  if (!q.delta_tilde_real)
    throw DomainError("verify_tail_rates: right tail needs real linearized rates");
  const double L = -h.t.front();

  std::vector<double> xl, yl, xr, yr;
  for (std::size_t i = 0; i < h.t.size(); ++i) {
    if (h.t[i] <= -0.6 * L && h.a[i] > 0.0) {
      xl.push_back(h.t[i]);
      yl.push_back(std::log(h.a[i]));
    }
    const double gap = q.a_inf - h.a[i];
    if (h.t[i] >= 0.5 * L && gap > 1e-300) {
      xr.push_back(h.t[i]);
      yr.push_back(std::log(gap));
    }
  }
  if (xl.size() < 10 || xr.size() < 10)
    throw SolverError("verify_tail_rates: tail windows too short",
                      "left=" + std::to_string(xl.size()) +
                          " right=" + std::to_string(xr.size()));

  TailReport rep;
  rep.left_slope = regression_slope(xl, yl);
  rep.right_slope = regression_slope(xr, yr);

  rep.sandwich_ok = true;
  for (std::size_t i = 0; i < h.t.size() && h.t[i] <= -1.0; ++i) {
    const double env = std::exp(q.delta_minus * h.t[i]);
    const double ratio = h.a[i] / q.a_inf;
    if (ratio < 0.5 * env * (1.0 - 1e-9) || ratio > env * (1.0 + 1e-9)) {
      rep.sandwich_ok = false;
      break;
    }
  }

  const auto close = [&](double target) {
    return std::abs(rep.right_slope - target) < 0.05 * std::abs(target);
  };
  if (close(q.delta_tilde_plus))
    rep.matched_root = "delta_tilde_plus";
  else if (close(q.delta_tilde_minus))
    rep.matched_root = "delta_tilde_minus";
  else
    rep.matched_root = "none";
  return rep;
}

}  // namespace wedge
