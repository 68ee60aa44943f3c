#include "wedge/cap_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// One shooting pass on the fixed grid; RK4 with substeps per cell.
struct ShootResult {
  std::vector<double> phi, dphi;
  int interior_nodes = 0;
  double end = 0.0;
};

ShootResult shoot_eigen(const CapSpec& cap, const std::vector<double>& t, double lambda) {
  const int n = cap.n;
  const std::size_t m = t.size();
  ShootResult r;
  r.phi.assign(m, 0.0);
  r.dphi.assign(m, 0.0);

  auto rhs = [&](double x, double phi, double dphi, double& dp, double& ddp) {
    dp = dphi;
    ddp = -lambda * phi;
    if (n > 2) ddp -= (n - 2) * (std::cos(x) / std::sin(x)) * dphi;
  };

  double x, phi, dphi;
  std::size_t first;
  if (n == 2) {
    // no coordinate singularity; start exactly at 0
    x = 0.0;
    if (cap.bc_at_zero == BcAtZero::Dirichlet) {
      phi = 0.0;
      dphi = 1.0;
    } else {
      phi = 1.0;
      dphi = 0.0;
    }
    r.phi[0] = phi;
    r.dphi[0] = dphi;
    first = 1;
  } else {
    // series start phi = 1 + a2 t^2 + a4 t^4 forced by the degenerate weight
    const double a2 = -lambda / (2.0 * (n - 1));
    const double a4 = a2 * (2.0 * (n - 2) / 3.0 - lambda) / (4.0 * (n + 1));
    r.phi[0] = 1.0;
    r.dphi[0] = 0.0;
    x = t[1];
    phi = 1.0 + a2 * x * x + a4 * x * x * x * x;
    dphi = 2.0 * a2 * x + 4.0 * a4 * x * x * x;
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
  }
  r.end = phi;

  const std::size_t lo = (cap.bc_at_zero == BcAtZero::Dirichlet) ? 1 : 0;
  for (std::size_t i = lo + 1; i + 1 < m; ++i)
    if (r.phi[i - 1] * r.phi[i] < 0.0) ++r.interior_nodes;
  return r;
}

double hermite_eval(const std::vector<double>& t, const std::vector<double>& v,
                    const std::vector<double>& d, double x, bool want_slope) {
  HermiteTable tab{t[0], t[1] - t[0], v, d};
  return want_slope ? tab.slope(x) : tab.eval(x);
}

}  // namespace

void CapSpec::validate() const {
  if (n < 2) throw DomainError("CapSpec: dimension n must be >= 2");
  const double top = (n == 2) ? 2.0 * kPi : kPi;
  if (!(beta > 0.0) || !(beta < top))
    throw DomainError("CapSpec: half-angle beta outside the admissible range");
  if (bc_at_zero == BcAtZero::Dirichlet && n != 2)
    throw DomainError("CapSpec: Dirichlet condition at t=0 is n=2 only");
}

Exponents exponents(int n, double lambda) {
  if (n < 2) throw DomainError("exponents: n must be >= 2");
  if (!(lambda > 0.0)) throw DomainError("exponents: lambda must be positive");
  const double half = 0.5 * (n - 2);
  const double gamma = -half + std::sqrt(half * half + lambda);
  const double p_star = (n + gamma) / (n + gamma - 2.0);
  return {gamma, p_star};
}

double linear_shift(int n, double p) {
  const double a = alpha_exponent(p);
  return a * (a + 2.0 - n);
}

double spectral_gap(int n, double lambda, double p) { return lambda - linear_shift(n, p); }

double p_for_gap(int n, double lambda, double eps) {
  if (!(eps > 0.0) || !(eps < lambda))
    throw DomainError("p_for_gap: gap must lie in (0, lambda)");
  const double b = n - 2.0;
  const double alpha = 0.5 * (b + std::sqrt(b * b + 4.0 * (lambda - eps)));
  return 1.0 + 2.0 / alpha;
}

double cap_surface_factor(int n) {
  if (n < 2) throw DomainError("cap_surface_factor: n must be >= 2");
  if (n == 2) return 1.0;  // arc-length convention
  return 2.0 * std::pow(kPi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1));
}

double SpectralData::phi1_at(double angle) const {
  return hermite_eval(t, phi1, phi1_prime, angle, false);
}

double SpectralData::phi1_prime_at(double angle) const {
  return hermite_eval(t, phi1, phi1_prime, angle, true);
}

double SpectralData::sup_phi1() const {
  double s = 0.0;
  for (double v : phi1) s = std::max(s, std::abs(v));
  return s;
}

SpectralData solve_cap_eigen(const CapSpec& cap, const GridSpec& grid) {
  cap.validate();
  grid.validate();
  const std::size_t m = grid.effective_nodes();
  const std::vector<double> t = linspace(0.0, cap.beta, m);

  double lambda_ref = (cap.n - 1) * std::pow(kPi / (2.0 * cap.beta), 2);
  if (cap.bc_at_zero == BcAtZero::Dirichlet) lambda_ref = std::pow(kPi / cap.beta, 2);

  // bracket the first sign change of phi(beta; lambda) on the zero-node branch
  double lo = 1e-10, hi = -1.0;
  double upper = 4.0 * lambda_ref;
  for (int widen = 0; widen < 4 && hi < 0.0; ++widen) {
    double prev = lo;
    for (double lam = 0.05 * lambda_ref; lam <= upper * 1.0001; lam *= 1.15) {
      const auto res = shoot_eigen(cap, t, lam);
      if (res.end < 0.0) {
        lo = prev;
        hi = lam;
        break;
      }
      prev = lam;
    }
    if (hi < 0.0) upper *= 8.0;
  }
  if (hi < 0.0)
    throw SolverError("solve_cap_eigen: eigenvalue bracket exhaustion",
                      "beta=" + std::to_string(cap.beta) + " n=" + std::to_string(cap.n));

  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto res = shoot_eigen(cap, t, mid);
    (res.end > 0.0 ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  auto res = shoot_eigen(cap, t, lo);
  if (res.interior_nodes != 0)
    throw SolverError("solve_cap_eigen: converged branch has interior nodes",
                      "nodes=" + std::to_string(res.interior_nodes));

  res = shoot_eigen(cap, t, lambda);
  res.phi.back() = 0.0;

  // normalize so that C(n) int sin^{n-2} phi^2 dt = 1
  const double cn = cap_surface_factor(cap.n);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i)
    w[i] = std::pow(std::sin(t[i]), cap.n - 2) * res.phi[i] * res.phi[i];
  const double norm2 = cn * simpson(w, t[1] - t[0]);
  const double scale = 1.0 / std::sqrt(norm2);
  for (std::size_t i = 0; i < m; ++i) {
    res.phi[i] *= scale;
    res.dphi[i] *= scale;
  }

  SpectralData out;
  out.cap = cap;
  out.grid = grid;
  out.lambda = lambda;
  const auto ex = exponents(cap.n, lambda);
  out.gamma = ex.gamma;
  out.p_star = ex.p_star;
  out.c_n = cn;
  out.t = t;
  out.phi1 = std::move(res.phi);
  out.phi1_prime = std::move(res.dphi);
  return out;
}

double representation_residual(const SpectralData& spec) {
  const std::size_t m = spec.t.size();
  const double h = spec.h();
  const int n = spec.cap.n;

  std::vector<double> inner_integrand(m);
  for (std::size_t i = 0; i < m; ++i)
    inner_integrand[i] = std::pow(std::sin(spec.t[i]), n - 2) * spec.phi1[i];
  const std::vector<double> inner = cumtrapz(inner_integrand, h);

  std::vector<double> g(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) g[i] = inner[i] / std::pow(std::sin(spec.t[i]), n - 2);
  if (n == 2) g[0] = inner[0];  // regular limit; 0 anyway
  const std::vector<double> G = cumtrapz(g, h);

  double sup = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double outer = G.back() - G[i];
    sup = std::max(sup, std::abs(spec.phi1[i] - spec.lambda * outer));
  }
  return sup;
}

MazyaBracket mazya_constant(const std::function<double(double)>& weightA,
                            const std::function<double(double)>& weightB, double q,
                            double s, std::size_t nodes) {
  if (!(q >= 2.0)) throw DomainError("mazya_constant: q must be >= 2");
  if (!(s > 0.0)) throw DomainError("mazya_constant: domain length must be positive");
  const std::vector<double> r = linspace(0.0, s, nodes);
  const double h = r[1] - r[0];

  std::vector<double> bvals(nodes), ainv(nodes, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) bvals[i] = weightB(r[i]);
  for (std::size_t i = 1; i < nodes; ++i) ainv[i] = 1.0 / weightA(r[i]);
  for (std::size_t i = 1; i < nodes; ++i)
    if (!std::isfinite(bvals[i]) || !std::isfinite(ainv[i]))
      throw DomainError("mazya_constant: divergent weight integrals");

  const std::vector<double> Bint = cumtrapz(bvals, h);
  const std::vector<double> Acum = cumtrapz(ainv, h);

  double K = 0.0;
  for (std::size_t i = 1; i + 1 < nodes; ++i) {
    const double right = Acum.back() - Acum[i];
    K = std::max(K, std::pow(Bint[i], 1.0 / q) * std::sqrt(right));
  }
  if (!std::isfinite(K)) throw DomainError("mazya_constant: divergent weight integrals");
  return {K, K, K * std::sqrt(q / (q - 1.0)) * std::pow(q, 1.0 / q)};
}

double moment(const SpectralData& spec, double power) {
  if (!(power >= 1.0)) throw DomainError("moment: power must be >= 1");
  const std::size_t m = spec.t.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i)
    f[i] = std::pow(std::sin(spec.t[i]), spec.cap.n - 2) * std::pow(spec.phi1[i], power);
  return spec.c_n * simpson(f, spec.h());
}

}  // namespace wedge
