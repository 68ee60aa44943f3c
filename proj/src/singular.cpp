#include "wedge/singular.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

double signed_pow(double u, double p) { return std::pow(std::abs(u), p - 1.0) * u; }

double bilinear(const StripField& f, double t, double s) { return f.interp(t, s); }

// composite Simpson weights (npts odd)
std::vector<double> simpson_weights(std::size_t npts, double h) {
  std::vector<double> w(npts, 0.0);
  for (std::size_t k = 0; k + 2 < npts; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  return w;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sx += x[k];
    sy += y[k];
  }
  sx /= static_cast<double>(m);
  sy /= static_cast<double>(m);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    num += (x[k] - sx) * (y[k] - sy);
    den += (x[k] - sx) * (x[k] - sx);
  }
  return num / den;
}

}  // namespace

SingularSolution::SingularSolution(SpectralData spec, Heteroclinic het, StripField psi,
                                   double p)
    : spec_(std::move(spec)), het_(std::move(het)), psi_(std::move(psi)), p_(p) {
  if (p_ <= 1.0) throw DomainError("singular solution requires p > 1");
  psi_.grid.validate();
  alpha_ = alpha_exponent(p_);
  const double L = het_.t.back();
  if (psi_.grid.T > L + 1e-12)
    throw DomainError("corrector window exceeds the heteroclinic window");
}

double SingularSolution::operator()(double r, double theta) const {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const double t = -std::log(r);
  const double T = psi_.grid.T;
  if (t < -T - 1e-12 || t > T + 1e-12)
    throw DomainError("radius outside the truncation window: -log r = " +
                      std::to_string(t) + ", window half-length " + std::to_string(T));
  const double beta = spec_.cap.beta;
  if (theta < -1e-12 || theta > beta + 1e-12)
    throw DomainError("angle outside the cap");
  theta = std::clamp(theta, 0.0, beta);
  const double phi = het_.at(std::clamp(t, -T, T)) * spec_.phi1_at(theta) +
                     bilinear(psi_, std::clamp(t, -T, T), theta / beta);
  return std::pow(r, -alpha_) * phi;
}

SingularSolution assemble_u1(const SpectralData& spec, const Heteroclinic& het,
                             const StripField& psi, double p) {
  return SingularSolution(spec, het, psi, p);
}

AsymptoticsReport verify_asymptotics(const SingularSolution& u, const ProfileFn& profile,
                                     const std::vector<double>& r_origin) {
  if (r_origin.empty()) throw DomainError("no origin radii supplied");
  const double T = u.T();
  const double beta = u.spec().cap.beta;
  for (double r : r_origin)
    if (-std::log(r) > 0.85 * T)
      throw DomainError("origin radius inside the truncation boundary layer");

  AsymptoticsReport rep;
  const std::size_t m = 41;
  std::vector<double> theta(m);
  for (std::size_t j = 0; j < m; ++j)
    theta[j] = 0.9 * beta * static_cast<double>(j) / static_cast<double>(m - 1);

  // measured limit constant: mean ratio at the smallest radius
  const double r_min = *std::min_element(r_origin.begin(), r_origin.end());
  double c0 = 0.0;
  for (double th : theta)
    c0 += std::pow(r_min, u.alpha()) * u(r_min, th) / profile.at(th);
  c0 /= static_cast<double>(m);
  rep.origin_c0 = c0;

  for (double r : r_origin) {
    double sup = 0.0;
    for (double th : theta)
      sup = std::max(sup, std::abs(std::pow(r, u.alpha()) * u(r, th) / profile.at(th) -
                                   c0));
    rep.origin_mismatch.push_back(sup);
  }

  // far field: regression of log(u/phi1) against log r on t in [-0.8T, -0.4T]
  {
    const std::size_t k = 25;
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double t = -0.8 * T + 0.4 * T * static_cast<double>(i) /
                                      static_cast<double>(k - 1);
      const double r = std::exp(-t);
      lx[i] = std::log(r);
      ly[i] = std::log(u(r, 0.0) / u.spec().phi1_at(0.0));
    }
    rep.infinity_slope = regression_slope(lx, ly);
  }

  // pointwise bound across the whole window, clear of both boundary layers
  {
    double sup = 0.0;
    const std::size_t k = 81;
    for (std::size_t i = 0; i < k; ++i) {
      const double t =
          -0.8 * T + 1.6 * T * static_cast<double>(i) / static_cast<double>(k - 1);
      const double r = std::exp(-t);
      for (double th : theta)
        sup = std::max(sup, std::pow(r, u.alpha()) * std::abs(u(r, th)));
    }
    rep.pointwise_C = sup / profile.sup();
  }
  return rep;
}

GradientReport gradient_estimates(const std::function<double(double, double)>& u,
                                  double alpha, double beta,
                                  const std::vector<double>& radii) {
  if (radii.empty()) throw DomainError("no sample radii supplied");
  GradientReport rep;
  const std::size_t m = 33;
  const double hth = beta / 64.0;
  for (double r : radii) {
    const double hr = 0.05 * r;  // log-step 0.05, matching the field resolution
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double th = beta * static_cast<double>(j) / static_cast<double>(m - 1);
      if (th + hth > beta) continue;
      const double c = u(r, th);
      const double rp = u(r + hr, th), rm = u(r - hr, th);
      const double tp = u(r, th + hth), tm = u(r, th - hth);
      const double ur = (rp - rm) / (2.0 * hr);
      const double ut = (tp - tm) / (2.0 * hth);
      const double urr = (rp - 2.0 * c + rm) / (hr * hr);
      const double utt = (tp - 2.0 * c + tm) / (hth * hth);
      const double urt = (u(r + hr, th + hth) - u(r + hr, th - hth) -
                          u(r - hr, th + hth) + u(r - hr, th - hth)) /
                         (4.0 * hr * hth);
      const double grad = std::hypot(ur, ut / r);
      // meridional Hessian components in polar coordinates
      const double h_tt = utt / (r * r) + ur / r;
      const double h_rt = urt / r - ut / (r * r);
      const double hess = std::sqrt(urr * urr + h_tt * h_tt + 2.0 * h_rt * h_rt);
      rep.C1 = std::max(rep.C1, std::pow(r, alpha + 1.0) * grad);
      rep.C2 = std::max(rep.C2, std::pow(r, alpha + 2.0) * hess);
    }
  }
  return rep;
}

double weak_residual(const std::function<double(double, double)>& u,
                     const SpectralData& spec, double p, double r0, double r1,
                     const std::function<double(double)>& b,
                     const std::function<double(double)>& db,
                     const std::function<double(double)>& d2b, std::size_t nr,
                     std::size_t ntheta) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw DomainError("annulus radii out of order");
  nr |= 1;
  ntheta |= 1;
  const double hr = (r1 - r0) / static_cast<double>(nr - 1);
  const double beta = spec.cap.beta;
  const double hth = beta / static_cast<double>(ntheta - 1);

  // support precondition: the radial profile must vanish at the annulus ends
  double bmax = 0.0;
  for (std::size_t i = 0; i < nr; ++i)
    bmax = std::max(bmax, std::abs(b(r0 + hr * static_cast<double>(i))));
  if (std::abs(b(r0)) > 1e-10 * bmax || std::abs(b(r1)) > 1e-10 * bmax)
    throw DomainError("test function does not vanish at the annulus boundary");

  const auto wr = simpson_weights(nr, hr);
  const auto wt = simpson_weights(ntheta, hth);
  const double C = cap_surface_factor(spec.cap.n);
  const double lambda = spec.lambda;
  const int n = spec.cap.n;

  double acc = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = r0 + hr * static_cast<double>(i);
    const double bv = b(r), b1 = db(r), b2 = d2b(r);
    const double rad = b2 + (n - 1) * b1 / r - lambda * bv / (r * r);
    double row = 0.0;
    for (std::size_t j = 0; j < ntheta; ++j) {
      const double th = hth * static_cast<double>(j);
      const double ph = spec.phi1_at(th);
      const double uv = u(r, th);
      const double integrand = uv * rad * ph + signed_pow(uv, p) * bv * ph;
      row += wt[j] * integrand * std::pow(std::sin(th), n - 2);
    }
    acc += wr[i] * row * std::pow(r, n - 1);
  }
  return C * acc;
}

double weak_residual(const std::function<double(double, double)>& u,
                     const SpectralData& spec, double p, double r0, double r1,
                     std::size_t nr, std::size_t ntheta) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw DomainError("annulus radii out of order");
  const double W = 0.25 * (r1 - r0) * (r1 - r0);
  auto w = [r0, r1](double r) { return (r - r0) * (r1 - r); };
  auto bump = [w, W](double r) {
    const double v = w(r) / W;
    return v * v;
  };
  auto dbump = [w, r0, r1, W](double r) {
    return 2.0 * w(r) * (r0 + r1 - 2.0 * r) / (W * W);
  };
  auto d2bump = [w, r0, r1, W](double r) {
    const double w1 = r0 + r1 - 2.0 * r;
    return 2.0 * (w1 * w1 - 2.0 * w(r)) / (W * W);
  };
  return weak_residual(u, spec, p, r0, r1, bump, dbump, d2bump, nr, ntheta);
}

}  // namespace wedge
