#include "wedge/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

struct ShotState {
  std::vector<double> phi, dphi;
  bool crossed = false;  // hit zero before beta
  double end = 0.0;
};

// RK4 march of phi'' + (n-2) cot(t) phi' + kappa phi + phi^p = 0 from a
// series start at the coordinate singularity.  Negative phi is continued with
// the odd extension |phi|^{p-1} phi so the crossing classification stays smooth.
ShotState shoot(const CapSpec& cap, double p, double kappa,
                const std::vector<double>& t, double a) {
  const int n = cap.n;
  const std::size_t m = t.size();
  ShotState r;
  r.phi.assign(m, 0.0);
  r.dphi.assign(m, 0.0);

  auto f = [&](double v) { return std::pow(std::abs(v), p - 1.0) * v; };
  auto rhs = [&](double x, double phi, double dphi, double& dp, double& ddp) {
    dp = dphi;
    ddp = -kappa * phi - f(phi);
    if (n > 2) ddp -= (n - 2) * (std::cos(x) / std::sin(x)) * dphi;
  };

  double x, phi, dphi;
  std::size_t first;
  if (n == 2) {
    x = 0.0;
    phi = a;
    dphi = 0.0;
    r.phi[0] = phi;
    first = 1;
  } else {
    const double c2 = -(kappa * a + f(a)) / (2.0 * (n - 1));
    const double c4 =
        c2 * (2.0 * (n - 2) / 3.0 - kappa - p * std::pow(std::abs(a), p - 1.0)) /
        (4.0 * (n + 1));
    r.phi[0] = a;
    x = t[1];
    phi = a + c2 * x * x + c4 * x * x * x * x;
    dphi = 2.0 * c2 * x + 4.0 * c4 * x * x * x;
    r.phi[1] = phi;
    r.dphi[1] = dphi;
    first = 2;
  }

  const int sub = 6;
  for (std::size_t i = first; i < m; ++i) {
    const double hcell = (t[i] - x) / sub;
    for (int k = 0; k < sub; ++k) {
      double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d;
      rhs(x, phi, dphi, k1p, k1d);
      rhs(x + 0.5 * hcell, phi + 0.5 * hcell * k1p, dphi + 0.5 * hcell * k1d, k2p, k2d);
      rhs(x + 0.5 * hcell, phi + 0.5 * hcell * k2p, dphi + 0.5 * hcell * k2d, k3p, k3d);
      rhs(x + hcell, phi + hcell * k3p, dphi + hcell * k3d, k4p, k4d);
      phi += hcell / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      dphi += hcell / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
      x += hcell;
    }
    x = t[i];
    r.phi[i] = phi;
    r.dphi[i] = dphi;
    if (phi < 0.0) r.crossed = true;
  }
  r.end = phi;
  return r;
}

}  // namespace

double ProfileFn::at(double angle) const {
  HermiteTable tab{t[0], h(), phi_p, phi_p_prime};
  return tab.eval(angle);
}

double ProfileFn::slope_at(double angle) const {
  HermiteTable tab{t[0], h(), phi_p, phi_p_prime};
  return tab.slope(angle);
}

double ProfileFn::sup() const {
  double s = 0.0;
  for (double v : phi_p) s = std::max(s, std::abs(v));
  return s;
}

ProfileFn solve_profile(const SpectralData& spec, double p, const GridSpec& grid) {
  spec.cap.validate();
  grid.validate();
  const int n = spec.cap.n;
  if (!(p > spec.p_star))
    throw DomainError("solve_profile: p must exceed the critical exponent");
  if (n >= 4 && !(p < double(n + 1) / double(n - 3)))
    throw DomainError("solve_profile: p outside the admissible range for n >= 4");

  const double kappa = linear_shift(n, p);
  const double eps = spec.lambda - kappa;
  const std::size_t m = grid.effective_nodes();
  const std::vector<double> t = linspace(0.0, spec.cap.beta, m);

  // near-critical predictor seeds the amplitude bracket
  const double cp = moment(spec, p + 1.0);
  const double a_est =
      std::pow(eps / cp, 1.0 / (p - 1.0)) * spec.sup_phi1();

  double lo = a_est / 64.0, hi = -1.0;
  {
    auto s = shoot(spec.cap, p, kappa, t, lo);
    int guard = 0;
    while (s.crossed && guard++ < 60) {
      lo /= 4.0;
      s = shoot(spec.cap, p, kappa, t, lo);
    }
    if (s.crossed)
      throw SolverError("solve_profile: no undershoot amplitude found",
                        "p=" + std::to_string(p));
    double a = std::max(lo * 2.0, a_est / 8.0);
    for (int k = 0; k < 80; ++k, a *= 1.6) {
      s = shoot(spec.cap, p, kappa, t, a);
      if (s.crossed) {
        hi = a;
        break;
      }
      lo = a;
    }
  }
  if (hi < 0.0)
    throw SolverError("solve_profile: amplitude bracket exhaustion",
                      "p=" + std::to_string(p) + " a_est=" + std::to_string(a_est));

  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto s = shoot(spec.cap, p, kappa, t, mid);
    (s.crossed ? hi : lo) = mid;
  }
  const double a = 0.5 * (lo + hi);
  auto s = shoot(spec.cap, p, kappa, t, lo);  // certified positive branch
  s = shoot(spec.cap, p, kappa, t, a);
  s.phi.back() = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (s.phi[i] <= 0.0)
      throw SolverError("solve_profile: converged shot loses positivity",
                        "index=" + std::to_string(i));

  ProfileFn out;
  out.cap = spec.cap;
  out.p = p;
  out.kappa = kappa;
  out.amplitude = a;
  out.grid = grid;
  out.t = t;
  out.phi_p = std::move(s.phi);
  out.phi_p_prime = std::move(s.dphi);
  return out;
}

double cone_residual(const ProfileFn& profile, const std::vector<double>& t_samples,
                     double r) {
  if (!(r > 0.0)) throw DomainError("cone_residual: radius must be positive");
  const int n = profile.cap.n;
  const double h = profile.h();
  const std::size_t m = profile.t.size();

  // phi'' by 4th-order central differences of the stored derivative; sampled
  // angles snap to the nearest admissible interior node.
  double sup = 0.0;
  for (double ts : t_samples) {
    if (!(ts > 0.0) || !(ts < profile.cap.beta))
      throw DomainError("cone_residual: sample angle outside the open cap");
    std::size_t i = static_cast<std::size_t>(std::lround(ts / h));
    i = std::clamp<std::size_t>(i, 2, m - 3);
    if (n > 2 && profile.t[i] < 4.0 * h) i = 4;
    const auto& d = profile.phi_p_prime;
    const double ddphi =
        (-d[i + 2] + 8.0 * d[i + 1] - 8.0 * d[i - 1] + d[i - 2]) / (12.0 * h);
    double res = ddphi + profile.kappa * profile.phi_p[i] +
                 std::pow(profile.phi_p[i], profile.p);
    if (n > 2)
      res += (n - 2) * (std::cos(profile.t[i]) / std::sin(profile.t[i])) * d[i];
    sup = std::max(sup, std::abs(res));
  }
  return sup;
}

double near_critical_asymptote(const SpectralData& spec, double p,
                               const ProfileFn& profile) {
  const double eps = spectral_gap(spec.cap.n, spec.lambda, p);
  const double cp = moment(spec, p + 1.0);
  const double amp = std::pow(eps / cp, 1.0 / (p - 1.0));
  double sup = 0.0;
  for (std::size_t i = 0; i < profile.t.size(); ++i) {
    const double pred = amp * spec.phi1_at(profile.t[i]);
    sup = std::max(sup, std::abs(profile.phi_p[i] - pred));
  }
  return sup / profile.sup();
}

}  // namespace wedge
